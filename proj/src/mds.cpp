#include "bpir/mds.hpp"

#include <algorithm>
#include <string>

namespace bpir {

namespace {

FieldMatrix vandermonde(const PrimeField& field, const std::vector<EvalPoint>& points,
                        std::size_t k) {
    FieldMatrix g(field, points.size(), k);
    for (std::size_t r = 0; r < points.size(); ++r) {
        if (points[r].infinite) {
            g.at(r, k - 1) = 1;
            continue;
        }
        Elem p = 1;
        for (std::size_t c = 0; c < k; ++c) {
            g.at(r, c) = p;
            p = field.mul(p, points[r].x);
        }
    }
    return g;
}

// Horner evaluation of the degree-(k-1) message polynomial.
Elem eval_poly(const PrimeField& field, const std::vector<Elem>& coeffs, Elem x) {
    Elem acc = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        acc = field.add(field.mul(acc, x), coeffs[i]);
    }
    return acc;
}

} // namespace

MdsCode::MdsCode(const PrimeField& field, std::size_t n, std::size_t k,
                 std::vector<EvalPoint> points)
    : field_(field), n_(n), k_(k), points_(std::move(points)),
      generator_(vandermonde(field, points_, k)) {}

MdsCode MdsCode::build(const PrimeField& field, std::size_t n, std::size_t k) {
    if (k < 1 || k >= n || n > field.modulus() - 1) {
        throw InvalidDimensions("need 1 <= k < n <= q-1, got n=" + std::to_string(n) +
                                " k=" + std::to_string(k) +
                                " q=" + std::to_string(field.modulus()));
    }
    std::vector<EvalPoint> points(n);
    for (std::size_t i = 0; i < n; ++i) points[i] = EvalPoint{false, i + 1};
    return MdsCode(field, n, k, std::move(points));
}

MdsCode MdsCode::build_extended(const PrimeField& field, std::size_t n, std::size_t k) {
    const std::uint64_t q = field.modulus();
    if (k < 1 || k >= n || n > q + 1) {
        throw InvalidDimensions("need 1 <= k < n <= q+1, got n=" + std::to_string(n) +
                                " k=" + std::to_string(k) + " q=" + std::to_string(q));
    }
    std::vector<EvalPoint> points;
    points.reserve(n);
    for (std::size_t i = 0; i + 1 <= n && i + 1 <= q - 1; ++i) {
        points.push_back(EvalPoint{false, i + 1});
    }
    if (points.size() < n) points.push_back(EvalPoint{false, 0});
    if (points.size() < n) points.push_back(EvalPoint{true, 0});
    return MdsCode(field, n, k, std::move(points));
}

std::vector<Elem> MdsCode::encode(const std::vector<Elem>& message) const {
    if (message.size() != k_) {
        throw LengthMismatch("encode: message length " + std::to_string(message.size()) +
                             ", expected " + std::to_string(k_));
    }
    return generator_.apply(message);
}

MdsCode MdsCode::puncture(const std::vector<std::size_t>& keep) const {
    if (keep.size() <= k_) {
        throw OverPunctured("puncture would leave n'=" + std::to_string(keep.size()) +
                            " <= k=" + std::to_string(k_));
    }
    std::vector<EvalPoint> points;
    points.reserve(keep.size());
    for (std::size_t idx : keep) {
        if (idx >= n_) throw InvalidDimensions("puncture index out of range");
        points.push_back(points_[idx]);
    }
    return MdsCode(field_, keep.size(), k_, std::move(points));
}

DetectResult detect(const ReceivedWord& word) {
    const MdsCode& code = word.code;
    const std::size_t k = code.dimension();
    if (word.values.size() != code.length()) {
        throw LengthMismatch("received word length mismatch");
    }
    std::vector<std::size_t> avail;
    avail.reserve(code.length());
    for (std::size_t i = 0; i < word.values.size(); ++i) {
        if (word.values[i].has_value()) avail.push_back(i);
    }
    if (avail.size() < k) {
        throw TooFewCoordinates("detect: " + std::to_string(avail.size()) +
                                " coordinates available, need " + std::to_string(k));
    }
    std::vector<std::size_t> base(avail.begin(), avail.begin() + k);
    std::vector<Elem> base_values(k);
    for (std::size_t i = 0; i < k; ++i) base_values[i] = *word.values[base[i]];
    const std::vector<Elem> message = erasure_decode(code, base, base_values);

    const FieldMatrix& g = code.generator();
    for (std::size_t i = k; i < avail.size(); ++i) {
        const std::size_t r = avail[i];
        const Elem expect = dot(code.field(), g.row(r), message.data(), k);
        if (expect != *word.values[r]) return DetectResult{false, {}};
    }
    return DetectResult{true, message};
}

std::vector<Elem> erasure_decode(const MdsCode& code, const std::vector<std::size_t>& coords,
                                 const std::vector<Elem>& values) {
    const std::size_t k = code.dimension();
    if (coords.size() != k || values.size() != k) {
        throw LengthMismatch("erasure_decode needs exactly k coordinates");
    }
    const FieldMatrix sub = code.generator().select_rows(coords);
    // MDS property: any k rows invertible; SingularMatrix here means the
    // code object is corrupt, so let it propagate.
    return solve_linear(sub, values);
}

std::vector<Elem> correct(const ReceivedWord& word) {
    const MdsCode& code = word.code;
    const PrimeField& field = code.field();
    const std::size_t k = code.dimension();
    if (word.values.size() != code.length()) {
        throw LengthMismatch("received word length mismatch");
    }

    // Berlekamp-Welch needs polynomial evaluations; a non-erased coefficient
    // row (extended construction only) is treated as one more erasure.
    std::vector<std::size_t> avail;
    for (std::size_t i = 0; i < word.values.size(); ++i) {
        if (word.values[i].has_value() && !code.eval_points()[i].infinite) {
            avail.push_back(i);
        }
    }
    if (avail.size() < k) {
        throw TooFewCoordinates("correct: " + std::to_string(avail.size()) +
                                " coordinates available, need " + std::to_string(k));
    }
    const std::size_t n_eff = avail.size();
    const std::size_t radius = (n_eff - k) / 2;

    std::vector<Elem> xs(n_eff), ys(n_eff);
    for (std::size_t i = 0; i < n_eff; ++i) {
        xs[i] = code.eval_points()[avail[i]].x;
        ys[i] = *word.values[avail[i]];
    }

    std::vector<Elem> message;
    if (radius == 0) {
        std::vector<std::size_t> base(avail.begin(), avail.begin() + k);
        std::vector<Elem> base_values(k);
        for (std::size_t i = 0; i < k; ++i) base_values[i] = ys[i];
        message = erasure_decode(code, base, base_values);
    } else {
        // Solve for Q (deg <= k+radius-1) and monic E (deg = radius) with
        // Q(x_i) = y_i * E(x_i) for all i. Unknowns: k+radius coefficients of
        // Q, then radius low coefficients of E.
        const std::size_t nq = k + radius;
        const std::size_t cols = nq + radius;
        FieldMatrix sys(field, n_eff, cols);
        std::vector<Elem> rhs(n_eff);
        for (std::size_t i = 0; i < n_eff; ++i) {
            Elem p = 1;
            for (std::size_t j = 0; j < nq; ++j) {
                sys.at(i, j) = p;
                p = field.mul(p, xs[i]);
            }
            p = 1;
            for (std::size_t j = 0; j < radius; ++j) {
                sys.at(i, nq + j) = field.neg(field.mul(ys[i], p));
                p = field.mul(p, xs[i]);
            }
            rhs[i] = field.mul(ys[i], p); // y_i * x_i^radius
        }

        // Any solution of the (possibly overdetermined) system works; free
        // variables are set to zero. Inconsistency means no codeword within
        // the radius.
        std::vector<Elem> sol(cols, 0);
        {
            std::size_t row = 0;
            std::vector<std::size_t> pivot_col;
            for (std::size_t col = 0; col < cols && row < n_eff; ++col) {
                std::size_t pr = row;
                while (pr < n_eff && sys.at(pr, col) == 0) ++pr;
                if (pr == n_eff) continue;
                if (pr != row) {
                    for (std::size_t c = col; c < cols; ++c) std::swap(sys.at(pr, c), sys.at(row, c));
                    std::swap(rhs[pr], rhs[row]);
                }
                const Elem inv_p = field.inv(sys.at(row, col));
                for (std::size_t c = col; c < cols; ++c) {
                    sys.at(row, c) = field.mul(sys.at(row, c), inv_p);
                }
                rhs[row] = field.mul(rhs[row], inv_p);
                for (std::size_t r = 0; r < n_eff; ++r) {
                    if (r == row) continue;
                    const Elem f = sys.at(r, col);
                    if (f == 0) continue;
                    for (std::size_t c = col; c < cols; ++c) {
                        sys.at(r, c) = field.sub(sys.at(r, c), field.mul(f, sys.at(row, c)));
                    }
                    rhs[r] = field.sub(rhs[r], field.mul(f, rhs[row]));
                }
                pivot_col.push_back(col);
                ++row;
            }
            for (std::size_t r = row; r < n_eff; ++r) {
                if (rhs[r] != 0) throw DecodingFailure("no codeword within correction radius");
            }
            for (std::size_t i = 0; i < pivot_col.size(); ++i) sol[pivot_col[i]] = rhs[i];
        }

        std::vector<Elem> qpoly(sol.begin(), sol.begin() + nq);
        std::vector<Elem> epoly(sol.begin() + nq, sol.end());
        epoly.push_back(1); // monic X^radius term

        // message polynomial = Q / E, exact when decoding succeeded
        std::vector<Elem> quotient(k, 0);
        std::vector<Elem> rem = qpoly;
        for (std::size_t deg = nq; deg-- > radius;) {
            const Elem lead = rem[deg];
            if (lead != 0) {
                const std::size_t shift = deg - radius;
                if (shift >= k) throw DecodingFailure("quotient degree exceeds message length");
                quotient[shift] = lead; // E is monic
                for (std::size_t j = 0; j <= radius; ++j) {
                    rem[shift + j] = field.sub(rem[shift + j], field.mul(lead, epoly[j]));
                }
            }
        }
        for (Elem c : rem) {
            if (c != 0) throw DecodingFailure("error locator does not divide Q");
        }
        message = quotient;
    }

    // Final distance check: must be within the radius of the received values.
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < n_eff; ++i) {
        if (eval_poly(field, message, xs[i]) != ys[i]) ++mismatches;
    }
    if (mismatches > radius) {
        throw DecodingFailure("decoded word differs in " + std::to_string(mismatches) +
                              " places, radius " + std::to_string(radius));
    }
    return message;
}

} // namespace bpir
