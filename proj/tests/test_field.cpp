#include <doctest.h>

#include <map>
#include <vector>

#include "bpir/field.hpp"

using namespace bpir;

namespace {

// independent primality oracle: plain trial division
bool oracle_is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

// enumerate every rows x cols matrix over GF(q) by counting in base q
std::vector<FieldMatrix> all_matrices(const PrimeField& f, std::size_t rows,
                                      std::size_t cols) {
    std::vector<FieldMatrix> out;
    const std::size_t cells = rows * cols;
    std::vector<Elem> digits(cells, 0);
    while (true) {
        FieldMatrix m(f, rows, cols);
        for (std::size_t i = 0; i < cells; ++i) m.at(i / cols, i % cols) = digits[i];
        out.push_back(m);
        std::size_t pos = 0;
        while (pos < cells && ++digits[pos] == f.modulus()) {
            digits[pos] = 0;
            ++pos;
        }
        if (pos == cells) break;
    }
    return out;
}

} // namespace

TEST_CASE("create_field accepts primes and rejects composites") {
    CHECK(PrimeField(7).modulus() == 7);
    CHECK(oracle_is_prime(65537));
    CHECK(PrimeField(65537).modulus() == 65537);
    CHECK_FALSE(oracle_is_prime(6));
    CHECK_THROWS_AS(PrimeField(6), NonPrimeModulus);
    CHECK_THROWS_AS(PrimeField(1), NonPrimeModulus);
    CHECK_THROWS_AS(PrimeField(0), NonPrimeModulus);
}

TEST_CASE("basic arithmetic") {
    const PrimeField f7(7);
    CHECK(arithmetic(f7, 3, 5, FieldOp::Mul) == 1);
    const PrimeField f5(5);
    CHECK(arithmetic(f5, 0, 4, FieldOp::Add) == 4);
    CHECK(arithmetic(f5, 2, 4, FieldOp::Sub) == 3);

    // inverse of 2 mod 257 by brute-force scan, then frozen
    const PrimeField f257(257);
    Elem expect = 0;
    for (Elem x = 1; x < 257; ++x) {
        if ((2 * x) % 257 == 1) expect = x;
    }
    CHECK(expect == 129);
    CHECK(arithmetic(f257, 1, 2, FieldOp::Div) == 129);
    CHECK(f257.mul(2, 129) == 1);

    CHECK_THROWS_AS(arithmetic(f7, 3, 0, FieldOp::Div), DivisionByZero);
}

TEST_CASE("arithmetic identities") {
    for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 65537ULL}) {
        const PrimeField f(q);
        Rng rng(q);
        for (int trial = 0; trial < 50; ++trial) {
            const Elem a = f.sample(rng);
            CHECK(f.add(a, 0) == a);
            CHECK(f.mul(a, 1) == a);
            if (a != 0) CHECK(f.div(a, a) == 1);
            CHECK(f.add(a, f.neg(a)) == 0);
        }
    }
}

TEST_CASE("solve_linear examples") {
    const PrimeField f7(7);
    FieldMatrix eye = FieldMatrix::identity(f7, 3);
    CHECK(solve_linear(eye, {1, 2, 3}) == std::vector<Elem>{1, 2, 3});

    const PrimeField f5(5);
    FieldMatrix a(f5, 2, 2);
    a.at(0, 0) = 1;
    a.at(0, 1) = 1;
    a.at(1, 0) = 1;
    a.at(1, 1) = 2;
    // brute-force oracle over all 25 candidate vectors
    std::vector<Elem> expect;
    for (Elem x0 = 0; x0 < 5; ++x0) {
        for (Elem x1 = 0; x1 < 5; ++x1) {
            if ((x0 + x1) % 5 == 0 && (x0 + 2 * x1) % 5 == 1) expect = {x0, x1};
        }
    }
    CHECK(expect == std::vector<Elem>{4, 1});
    CHECK(solve_linear(a, {0, 1}) == expect);

    FieldMatrix sing(f5, 2, 2);
    sing.at(0, 0) = 1;
    sing.at(0, 1) = 1;
    sing.at(1, 0) = 2;
    sing.at(1, 1) = 2;
    CHECK_THROWS_AS(solve_linear(sing, {0, 1}), SingularMatrix);
}

TEST_CASE("solve_linear round-trips exhaustively at small sizes") {
    for (std::uint64_t q : {2ULL, 3ULL}) {
        const PrimeField f(q);
        for (std::size_t k = 1; k <= 3; ++k) {
            for (const auto& a : all_matrices(f, k, k)) {
                if (a.rank() != k) continue;
                // all x over GF(q)^k
                std::vector<Elem> x(k, 0);
                while (true) {
                    CHECK(solve_linear(a, a.apply(x)) == x);
                    std::size_t pos = 0;
                    while (pos < k && ++x[pos] == q) {
                        x[pos] = 0;
                        ++pos;
                    }
                    if (pos == k) break;
                }
            }
        }
    }
    // GF(5): exhaustive matrices with one sampled x each at k=3
    const PrimeField f5(5);
    for (std::size_t k = 1; k <= 2; ++k) {
        for (const auto& a : all_matrices(f5, k, k)) {
            if (a.rank() != k) continue;
            Rng rng(k);
            std::vector<Elem> x(k);
            for (auto& v : x) v = f5.sample(rng);
            CHECK(solve_linear(a, a.apply(x)) == x);
        }
    }
}

TEST_CASE("sample_full_rank basics") {
    const PrimeField f2(2);
    Rng rng(1);
    const FieldMatrix only = sample_full_rank(f2, 1, rng);
    CHECK(only.at(0, 0) == 1);

    const PrimeField f5(5);
    Rng r1(42), r2(42);
    CHECK(sample_full_rank(f5, 4, r1) == sample_full_rank(f5, 4, r2));

    const PrimeField f(65537);
    Rng r3(7);
    for (int trial = 0; trial < 20; ++trial) {
        CHECK(sample_full_rank(f, 5, r3).rank() == 5);
    }
}

TEST_CASE("sample_full_rank is uniform over the invertibles at q=3, n=2") {
    const PrimeField f3(3);
    std::map<std::vector<Elem>, int> index;
    int invertibles = 0;
    for (const auto& m : all_matrices(f3, 2, 2)) {
        if (m.rank() == 2) {
            index[m.data()] = invertibles++;
        }
    }
    CHECK(invertibles == 48);

    const int samples = 100000;
    std::vector<int> counts(48, 0);
    Rng rng(2024);
    for (int s = 0; s < samples; ++s) {
        ++counts[index.at(sample_full_rank(f3, 2, rng).data())];
    }
    const double expect = static_cast<double>(samples) / 48;
    double chi2 = 0;
    for (int c : counts) {
        const double d = c - expect;
        chi2 += d * d / expect;
    }
    // dof 47; 90 is past the 0.9998 quantile
    CHECK(chi2 < 90.0);
}
