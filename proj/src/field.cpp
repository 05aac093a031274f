#include "bpir/field.hpp"

#include <string>

namespace bpir {

namespace {

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2) {
        if (n % d == 0) return false;
    }
    return true;
}

} // namespace

PrimeField::PrimeField(std::uint64_t q) : q_(q) {
    if (q > 0xffffffffULL) {
        throw InvalidParams("field modulus must fit in 32 bits, got " + std::to_string(q));
    }
    if (!is_prime(q)) {
        throw NonPrimeModulus("modulus " + std::to_string(q) + " is not prime");
    }
}

Elem PrimeField::inv(Elem a) const {
    if (a == 0) throw DivisionByZero("no inverse of 0 in GF(q)");
    // extended Euclid on (a, q)
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(q_), new_r = static_cast<std::int64_t>(a);
    while (new_r != 0) {
        std::int64_t quotient = r / new_r;
        std::int64_t tmp = t - quotient * new_t;
        t = new_t;
        new_t = tmp;
        tmp = r - quotient * new_r;
        r = new_r;
        new_r = tmp;
    }
    if (t < 0) t += static_cast<std::int64_t>(q_);
    return static_cast<Elem>(t);
}

Elem PrimeField::pow(Elem base, std::uint64_t exp) const {
    Elem result = 1 % q_;
    Elem b = base % q_;
    while (exp > 0) {
        if (exp & 1) result = mul(result, b);
        b = mul(b, b);
        exp >>= 1;
    }
    return result;
}

Elem arithmetic(const PrimeField& field, Elem a, Elem b, FieldOp op) {
    switch (op) {
        case FieldOp::Add: return field.add(a, b);
        case FieldOp::Sub: return field.sub(a, b);
        case FieldOp::Mul: return field.mul(a, b);
        case FieldOp::Div: return field.div(a, b);
    }
    throw InvalidParams("unknown field operation");
}

FieldMatrix FieldMatrix::identity(const PrimeField& field, std::size_t n) {
    FieldMatrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

std::vector<Elem> FieldMatrix::apply(const std::vector<Elem>& x) const {
    if (x.size() != cols_) {
        throw LengthMismatch("matrix-vector size mismatch");
    }
    std::vector<Elem> y(rows_, 0);
    for (std::size_t r = 0; r < rows_; ++r) {
        y[r] = dot(field_, row(r), x.data(), cols_);
    }
    return y;
}

FieldMatrix FieldMatrix::multiply(const FieldMatrix& other) const {
    if (cols_ != other.rows_) {
        throw LengthMismatch("matrix-matrix size mismatch");
    }
    FieldMatrix out(field_, rows_, other.cols_);
    const std::uint64_t q = field_.modulus();
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t i = 0; i < cols_; ++i) {
            const Elem v = at(r, i);
            if (v == 0) continue;
            for (std::size_t c = 0; c < other.cols_; ++c) {
                out.at(r, c) = (out.at(r, c) + v * other.at(i, c)) % q;
            }
        }
    }
    return out;
}

FieldMatrix FieldMatrix::select_rows(const std::vector<std::size_t>& row_ids) const {
    FieldMatrix out(field_, row_ids.size(), cols_);
    for (std::size_t i = 0; i < row_ids.size(); ++i) {
        for (std::size_t c = 0; c < cols_; ++c) {
            out.at(i, c) = at(row_ids[i], c);
        }
    }
    return out;
}

std::size_t FieldMatrix::rank() const {
    FieldMatrix m = *this;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols_ && rank < rows_; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows_ && m.at(pivot, col) == 0) ++pivot;
        if (pivot == rows_) continue;
        if (pivot != rank) {
            for (std::size_t c = 0; c < cols_; ++c) std::swap(m.at(pivot, c), m.at(rank, c));
        }
        const Elem inv_p = field_.inv(m.at(rank, col));
        for (std::size_t r = rank + 1; r < rows_; ++r) {
            const Elem f = field_.mul(m.at(r, col), inv_p);
            if (f == 0) continue;
            for (std::size_t c = col; c < cols_; ++c) {
                m.at(r, c) = field_.sub(m.at(r, c), field_.mul(f, m.at(rank, c)));
            }
        }
        ++rank;
    }
    return rank;
}

Elem dot(const PrimeField& field, const Elem* a, const Elem* b, std::size_t n) {
    const std::uint64_t q = field.modulus();
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
        acc = (acc + a[i] * b[i]) % q;
    }
    return acc;
}

std::vector<Elem> solve_linear(const FieldMatrix& A, const std::vector<Elem>& y) {
    const std::size_t n = A.rows();
    if (A.cols() != n || y.size() != n) {
        throw LengthMismatch("solve_linear needs square A and matching y");
    }
    const PrimeField& field = A.field();
    // augmented elimination
    FieldMatrix m = A;
    std::vector<Elem> rhs = y;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m.at(pivot, col) == 0) ++pivot;
        if (pivot == n) throw SingularMatrix("singular system in solve_linear");
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(m.at(pivot, c), m.at(col, c));
            std::swap(rhs[pivot], rhs[col]);
        }
        const Elem inv_p = field.inv(m.at(col, col));
        for (std::size_t c = col; c < n; ++c) m.at(col, c) = field.mul(m.at(col, c), inv_p);
        rhs[col] = field.mul(rhs[col], inv_p);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const Elem f = m.at(r, col);
            if (f == 0) continue;
            for (std::size_t c = col; c < n; ++c) {
                m.at(r, c) = field.sub(m.at(r, c), field.mul(f, m.at(col, c)));
            }
            rhs[r] = field.sub(rhs[r], field.mul(f, rhs[col]));
        }
    }
    return rhs;
}

FieldMatrix sample_matrix(const PrimeField& field, std::size_t rows, std::size_t cols,
                          Rng& rng) {
    FieldMatrix m(field, rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            m.at(r, c) = field.sample(rng);
        }
    }
    return m;
}

FieldMatrix sample_full_rank(const PrimeField& field, std::size_t n, Rng& rng) {
    if (n < 1) throw InvalidParams("sample_full_rank needs n >= 1");
    while (true) {
        FieldMatrix m = sample_matrix(field, n, n, rng);
        if (m.rank() == n) return m;
    }
}

} // namespace bpir
