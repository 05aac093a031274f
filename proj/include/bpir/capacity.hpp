#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "bpir/errors.hpp"

namespace bpir {

/// Exact rational on 64-bit numerator/denominator, always normalized with a
/// positive denominator. Intermediate products use 128-bit arithmetic; the
/// capacity formulas stay far inside the range.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n) : num(n), den(1) {} // NOLINT: implicit by design
    Rational(long long n, long long d);

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;

    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const;
    bool operator<=(const Rational& o) const { return *this < o || *this == o; }
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator>=(const Rational& o) const { return o <= *this; }

    bool is_zero() const { return num == 0; }
    Rational reciprocal() const;
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;
};

Rational rational_pow(const Rational& base, int exp);

enum class CapacityFormula { Classic, Robust, ByzSingle, ByzMulti };

CapacityFormula capacity_formula_from_name(const std::string& name);
std::string capacity_formula_name(CapacityFormula formula);

/// Closed-form capacity value for the chosen problem variant, evaluated with
/// exact rational arithmetic. Requires N >= 1, K >= 1, 0 <= B <= N.
Rational capacity(CapacityFormula formula, int num_databases, int num_messages,
                  int num_byzantine = 0);

/// One grid point of the download-cost comparison: normalized cost is the
/// reciprocal of the capacity (absent when the capacity is zero).
struct SweepRow {
    int n = 0;
    int b = 0;
    int k = 0;
    Rational single_round_capacity;
    Rational multi_round_capacity;
    std::optional<Rational> single_round_cost;
    std::optional<Rational> multi_round_cost;
};

struct SweepPoint {
    int n = 0;
    int b = 0;
    int k = 0;
};

std::vector<SweepRow> sweep(const std::vector<SweepPoint>& grid);

} // namespace bpir
