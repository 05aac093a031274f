#include "bpir/capacity.hpp"

#include <cstdlib>

namespace bpir {

namespace {

using Wide = __int128;

long long narrow(Wide v) {
    if (v > Wide(INT64_MAX) || v < Wide(INT64_MIN)) {
        throw Error("rational arithmetic overflow");
    }
    return static_cast<long long>(v);
}

Rational make(Wide num, Wide den) {
    if (den == 0) throw DivisionByZero("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    Wide a = num < 0 ? -num : num;
    Wide b = den;
    while (b != 0) {
        const Wide t = a % b;
        a = b;
        b = t;
    }
    if (a == 0) a = 1;
    Rational r;
    r.num = narrow(num / a);
    r.den = narrow(den / a);
    return r;
}

} // namespace

Rational::Rational(long long n, long long d) { *this = make(n, d); }

Rational Rational::operator+(const Rational& o) const {
    return make(Wide(num) * o.den + Wide(o.num) * den, Wide(den) * o.den);
}

Rational Rational::operator-(const Rational& o) const {
    return make(Wide(num) * o.den - Wide(o.num) * den, Wide(den) * o.den);
}

Rational Rational::operator*(const Rational& o) const {
    return make(Wide(num) * o.num, Wide(den) * o.den);
}

Rational Rational::operator/(const Rational& o) const {
    if (o.num == 0) throw DivisionByZero("rational division by zero");
    return make(Wide(num) * o.den, Wide(den) * o.num);
}

bool Rational::operator<(const Rational& o) const {
    return Wide(num) * o.den < Wide(o.num) * den;
}

Rational Rational::reciprocal() const {
    if (num == 0) throw DivisionByZero("reciprocal of zero");
    return make(den, num);
}

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

Rational rational_pow(const Rational& base, int exp) {
    if (exp < 0) return rational_pow(base.reciprocal(), -exp);
    Rational r(1);
    for (int i = 0; i < exp; ++i) r = r * base;
    return r;
}

CapacityFormula capacity_formula_from_name(const std::string& name) {
    if (name == "classic") return CapacityFormula::Classic;
    if (name == "robust") return CapacityFormula::Robust;
    if (name == "byz-single" || name == "byz_single") return CapacityFormula::ByzSingle;
    if (name == "byz-multi" || name == "byz_multi") return CapacityFormula::ByzMulti;
    throw InvalidParams("unknown capacity formula '" + name + "'");
}

std::string capacity_formula_name(CapacityFormula formula) {
    switch (formula) {
        case CapacityFormula::Classic: return "classic";
        case CapacityFormula::Robust: return "robust";
        case CapacityFormula::ByzSingle: return "byz-single";
        case CapacityFormula::ByzMulti: return "byz-multi";
    }
    return "?";
}

namespace {

// (1 - 1/n) / (1 - (1/n)^k), with the n = 1 limit 1/k.
Rational geometric_term(int n, int k) {
    if (n == 1) return Rational(1, k);
    const Rational one(1);
    const Rational inv_n(1, n);
    return (one - inv_n) / (one - rational_pow(inv_n, k));
}

} // namespace

Rational capacity(CapacityFormula formula, int num_databases, int num_messages,
                  int num_byzantine) {
    const int n = num_databases;
    const int k = num_messages;
    const int b = num_byzantine;
    if (n < 1 || k < 1 || b < 0 || b > n) {
        throw InvalidParams("capacity needs N >= 1, K >= 1, 0 <= B <= N");
    }
    switch (formula) {
        case CapacityFormula::Classic:
            return geometric_term(n, k);
        case CapacityFormula::Robust:
            if (b < n - 1) return geometric_term(n - b, k);
            if (b == n - 1) return Rational(1, k);
            return Rational(0);
        case CapacityFormula::ByzSingle:
            if (2 * b + 1 < n) {
                return Rational(n - 2 * b, n) * geometric_term(n - 2 * b, k);
            }
            if (2 * b + 1 == n) return Rational(1, static_cast<long long>(n) * k);
            return Rational(0);
        case CapacityFormula::ByzMulti:
            if (2 * b + 1 <= n) {
                return Rational(n - b, n) * geometric_term(n - b, k);
            }
            return Rational(0);
    }
    throw InvalidParams("unknown capacity formula");
}

std::vector<SweepRow> sweep(const std::vector<SweepPoint>& grid) {
    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (const auto& p : grid) {
        SweepRow row;
        row.n = p.n;
        row.b = p.b;
        row.k = p.k;
        row.single_round_capacity = capacity(CapacityFormula::ByzSingle, p.n, p.k, p.b);
        row.multi_round_capacity = capacity(CapacityFormula::ByzMulti, p.n, p.k, p.b);
        if (!row.single_round_capacity.is_zero()) {
            row.single_round_cost = row.single_round_capacity.reciprocal();
        }
        if (!row.multi_round_capacity.is_zero()) {
            row.multi_round_cost = row.multi_round_capacity.reciprocal();
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace bpir
