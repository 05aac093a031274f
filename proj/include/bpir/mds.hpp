#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "bpir/field.hpp"

namespace bpir {

/// Codeword coordinate position: a finite evaluation point, or the
/// degree-(k-1) coefficient row used by the doubly-extended construction.
struct EvalPoint {
    bool infinite = false;
    Elem x = 0;

    bool operator==(const EvalPoint& other) const {
        return infinite == other.infinite && (infinite || x == other.x);
    }
};

/// [n, k] MDS code over GF(q) realized as a Reed-Solomon evaluation code:
/// row i of the generator is (1, x_i, x_i^2, ..., x_i^{k-1}) for evaluation
/// point x_i, so a codeword is a degree-(k-1) polynomial evaluated at n
/// distinct points. Any k rows of the generator are invertible (Vandermonde),
/// hence minimum distance d = n - k + 1 and puncturing preserves MDS-ness.
class MdsCode {
public:
    /// Standard construction on evaluation points 1..n; requires
    /// 1 <= k < n <= q-1, else InvalidDimensions.
    static MdsCode build(const PrimeField& field, std::size_t n, std::size_t k);

    /// Extended construction for n up to q+1: points 1..q-1, then 0, then
    /// the coefficient row. Needed only when a code longer than q-1 is
    /// required (the privacy audit's deliberately tiny field).
    static MdsCode build_extended(const PrimeField& field, std::size_t n, std::size_t k);

    std::size_t length() const { return n_; }
    std::size_t dimension() const { return k_; }
    std::size_t distance() const { return n_ - k_ + 1; }
    const PrimeField& field() const { return field_; }
    const FieldMatrix& generator() const { return generator_; }
    const std::vector<EvalPoint>& eval_points() const { return points_; }

    /// generator * message; message.size() must be k.
    std::vector<Elem> encode(const std::vector<Elem>& message) const;

    /// [n', k] code on the kept coordinates (ordered, distinct). Requires
    /// n' > k, else OverPunctured.
    MdsCode puncture(const std::vector<std::size_t>& keep) const;

    bool operator==(const MdsCode& other) const {
        return field_ == other.field_ && n_ == other.n_ && k_ == other.k_ &&
               points_ == other.points_;
    }

private:
    MdsCode(const PrimeField& field, std::size_t n, std::size_t k,
            std::vector<EvalPoint> points);

    PrimeField field_;
    std::size_t n_, k_;
    std::vector<EvalPoint> points_;
    FieldMatrix generator_;
};

/// Codeword under channel damage: per-coordinate value or erasure mark.
struct ReceivedWord {
    const MdsCode& code;
    std::vector<std::optional<Elem>> values; // length code.length()
};

struct DetectResult {
    bool consistent = false;
    std::vector<Elem> message; // filled when consistent
};

/// Treats erased coordinates as punctured and checks whether the remaining
/// values lie on a codeword. Guaranteed to report Inconsistent whenever the
/// true error count is between 1 and d'-1 of the effective punctured code;
/// with exactly k coordinates left it degenerates to decoding. Throws
/// TooFewCoordinates below k.
DetectResult detect(const ReceivedWord& word);

/// Bounded-distance correction: returns the unique message whose encoding
/// is within floor((n'-k)/2) of the non-erased coordinates (Berlekamp-Welch
/// on the evaluation-point structure). Throws DecodingFailure when no
/// codeword lies within the radius.
std::vector<Elem> correct(const ReceivedWord& word);

/// Unique message consistent with the k given coordinates.
std::vector<Elem> erasure_decode(const MdsCode& code, const std::vector<std::size_t>& coords,
                                 const std::vector<Elem>& values);

} // namespace bpir
