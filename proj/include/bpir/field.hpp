#pragma once

#include <cstdint>
#include <vector>

#include "bpir/errors.hpp"
#include "bpir/rng.hpp"

namespace bpir {

using Elem = std::uint64_t;

/// Arithmetic context for GF(q), q prime. Elements are canonical residues
/// in [0, q). The modulus is restricted to 32 bits so products fit u64.
class PrimeField {
public:
    /// Throws NonPrimeModulus unless q is a prime >= 2.
    explicit PrimeField(std::uint64_t q);

    std::uint64_t modulus() const { return q_; }

    Elem add(Elem a, Elem b) const {
        Elem s = a + b;
        return s >= q_ ? s - q_ : s;
    }
    Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + q_ - b; }
    Elem neg(Elem a) const { return a == 0 ? 0 : q_ - a; }
    Elem mul(Elem a, Elem b) const { return (a * b) % q_; }

    /// Multiplicative inverse via extended Euclid; a != 0.
    Elem inv(Elem a) const;

    /// a * b^{-1}; throws DivisionByZero when b == 0.
    Elem div(Elem a, Elem b) const {
        if (b == 0) throw DivisionByZero("division by zero in GF(q)");
        return mul(a, inv(b));
    }

    Elem pow(Elem base, std::uint64_t exp) const;

    /// Uniform element in [0, q).
    Elem sample(Rng& rng) const { return rng.uniform_below(q_); }

    bool operator==(const PrimeField& other) const { return q_ == other.q_; }

private:
    std::uint64_t q_;
};

enum class FieldOp { Add, Sub, Mul, Div };

/// Dispatch helper used by tests and the CLI.
Elem arithmetic(const PrimeField& field, Elem a, Elem b, FieldOp op);

/// Dense row-major matrix over GF(q).
class FieldMatrix {
public:
    FieldMatrix(const PrimeField& field, std::size_t rows, std::size_t cols)
        : field_(field), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

    static FieldMatrix identity(const PrimeField& field, std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const PrimeField& field() const { return field_; }

    Elem at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
    Elem& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }

    const Elem* row(std::size_t r) const { return a_.data() + r * cols_; }
    Elem* row(std::size_t r) { return a_.data() + r * cols_; }

    const std::vector<Elem>& data() const { return a_; }

    /// Matrix-vector product; x.size() must equal cols().
    std::vector<Elem> apply(const std::vector<Elem>& x) const;

    /// Matrix-matrix product.
    FieldMatrix multiply(const FieldMatrix& other) const;

    /// Submatrix of the given rows (all columns).
    FieldMatrix select_rows(const std::vector<std::size_t>& row_ids) const;

    std::size_t rank() const;
    bool invertible() const { return rows_ == cols_ && rank() == rows_; }

    bool operator==(const FieldMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && a_ == other.a_;
    }

private:
    PrimeField field_;
    std::size_t rows_, cols_;
    std::vector<Elem> a_;
};

/// Inner product over GF(q); spans must have equal length.
Elem dot(const PrimeField& field, const Elem* a, const Elem* b, std::size_t n);

/// Solves A x = y for square A by Gaussian elimination.
/// Throws SingularMatrix when rank(A) < n.
std::vector<Elem> solve_linear(const FieldMatrix& A, const std::vector<Elem>& y);

/// Uniform matrix (every entry independent uniform).
FieldMatrix sample_matrix(const PrimeField& field, std::size_t rows, std::size_t cols,
                          Rng& rng);

/// Uniform over all invertible n x n matrices (rejection sampling with a
/// rank check, so the distribution is exactly uniform on the invertibles).
FieldMatrix sample_full_rank(const PrimeField& field, std::size_t n, Rng& rng);

} // namespace bpir
