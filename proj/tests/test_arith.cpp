#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "orddist/arith.hpp"
#include "orddist/primes.hpp"
#include "orddist/rational_base.hpp"

using namespace orddist;

namespace {

bool is_prime_naive(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

u64 order_naive(u64 gbar, u64 p) {
    u64 v = gbar % p, k = 1;
    while (v != 1) {
        v = mulmod(v, gbar, p);
        ++k;
    }
    return k;
}

}  // namespace

TEST_CASE("primes_in_range basics") {
    REQUIRE(primes_in_range(1, 10).to_vector() == std::vector<u64>{2, 3, 5, 7});
    REQUIRE(primes_in_range(2, 2).to_vector() == std::vector<u64>{2});
    REQUIRE(primes_in_range(0, 1).count() == 0);
    REQUIRE_THROWS_AS(primes_in_range(10, 1), ArgumentError);

    u64 oracle = 0;
    for (u64 n = 2; n <= 100; ++n) oracle += is_prime_naive(n);
    REQUIRE(oracle == 25);
    REQUIRE(primes_in_range(2, 100).count() == oracle);
}

TEST_CASE("primes_in_range agrees with trial division up to 10^6") {
    std::vector<u64> got = primes_in_range(2, 1000000).to_vector();
    std::set<u64> gotset(got.begin(), got.end());
    REQUIRE(got.size() == 78498);
    for (u64 n : {2ull, 3ull, 999983ull, 999979ull}) REQUIRE(gotset.count(n) == 1);
    for (u64 n : {1ull, 4ull, 999981ull, 1000000ull}) REQUIRE(gotset.count(n) == 0);
    // spot check a random slice against the naive oracle
    for (u64 n = 752000; n <= 753000; ++n)
        REQUIRE(gotset.count(n) == (is_prime_naive(n) ? 1u : 0u));
}

TEST_CASE("primes_in_range is segment-partition independent") {
    const u64 lo = 2, hi = 300000;
    std::vector<u64> whole = primes_in_range(lo, hi).to_vector();
    for (u64 mid : {1000ull, 131072ull, 131073ull, 299999ull}) {
        std::vector<u64> a = primes_in_range(lo, mid).to_vector();
        std::vector<u64> b = primes_in_range(mid + 1, hi).to_vector();
        a.insert(a.end(), b.begin(), b.end());
        REQUIRE(a == whole);
    }
    // odd segment sizes must not change the output
    REQUIRE(PrimeRange(lo, hi, 4097).to_vector() == whole);
}

TEST_CASE("factorize") {
    PrimeFactorization f = factorize(12);
    REQUIRE(f.terms.size() == 2);
    REQUIRE(f.terms[0].p == 2);
    REQUIRE(f.terms[0].e == 2);
    REQUIRE(f.terms[1].p == 3);
    REQUIRE(f.terms[1].e == 1);
    REQUIRE(f.reconstruct() == 12);

    REQUIRE(factorize(1).terms.empty());
    REQUIRE_THROWS_AS(factorize(0), ArgumentError);

    PrimeFactorization big = factorize(2038074742);
    REQUIRE(big.reconstruct() == 2038074742);
    for (const auto& t : big.terms) REQUIRE(is_prime_naive(t.p));
    for (size_t i = 1; i < big.terms.size(); ++i) REQUIRE(big.terms[i - 1].p < big.terms[i].p);
}

TEST_CASE("FactorEngine matches plain factorize") {
    FactorEngine eng(1 << 20, 1 << 14);
    PrimeFactorization f;
    for (u64 m : {1ull, 2ull, 12ull, 16384ull, 1048575ull, 1048576ull, 999983ull, 720720ull}) {
        eng.factorize_into(m, f);
        PrimeFactorization g = factorize(m);
        REQUIRE(f.terms.size() == g.terms.size());
        for (size_t i = 0; i < f.terms.size(); ++i) {
            REQUIRE(f.terms[i].p == g.terms[i].p);
            REQUIRE(f.terms[i].e == g.terms[i].e);
        }
    }
}

TEST_CASE("arithmetic functions") {
    REQUIRE(euler_phi(10) == 4);
    REQUIRE(moebius(10) == 1);
    REQUIRE(moebius(12) == 0);
    REQUIRE(euler_phi(1) == 1);
    REQUIRE(moebius(1) == 1);
    REQUIRE_THROWS_AS(euler_phi(0), ArgumentError);
    REQUIRE_THROWS_AS(moebius(0), ArgumentError);

    // phi(p) = p-1 for primes, against a brute-force gcd count
    primes_in_range(2, 10000).for_each([](u64 p) {
        REQUIRE(euler_phi(p) == p - 1);
    });
    for (u64 m : {36ull, 100ull, 210ull, 4096ull}) {
        u64 cnt = 0;
        for (u64 a = 1; a <= m; ++a) cnt += std::gcd(a, m) == 1;
        REQUIRE(euler_phi(m) == cnt);
    }
}

TEST_CASE("multiplicative order examples") {
    REQUIRE(multiplicative_order(RationalBase(2), 7) == 3);
    REQUIRE(multiplicative_order(RationalBase(1, 2), 5) == 4);  // 1/2 = 3 mod 5
    REQUIRE(multiplicative_order(RationalBase(2), 13) == 12);
    REQUIRE(residual_index(RationalBase(2), 7) == 2);
    REQUIRE(residual_index(RationalBase(2), 11) == 1);
    REQUIRE_THROWS_AS(multiplicative_order(RationalBase(2), 2), OrderUndefinedError);
    REQUIRE_THROWS_AS(multiplicative_order(RationalBase(3, 10), 5), OrderUndefinedError);
}

TEST_CASE("order: fast path equals naive loop for p <= 2000") {
    const std::vector<RationalBase> gs{RationalBase(2), RationalBase(3), RationalBase(5),
                                       RationalBase(-2), RationalBase(-5), RationalBase(1, 2)};
    primes_in_range(2, 2000).for_each([&](u64 p) {
        for (const auto& g : gs) {
            if (g.divides_num_or_den(p)) continue;
            REQUIRE(multiplicative_order(g, p) == order_naive(g.mod_p(p), p));
        }
    });
}

TEST_CASE("order divides p-1 and r*ord = p-1 for p <= 10^4") {
    const std::vector<RationalBase> gs{RationalBase(2), RationalBase(3), RationalBase(5),
                                       RationalBase(-2), RationalBase(-5), RationalBase(1, 2)};
    primes_in_range(2, 10000).for_each([&](u64 p) {
        for (const auto& g : gs) {
            if (g.divides_num_or_den(p)) continue;
            const u64 ord = multiplicative_order(g, p);
            REQUIRE((p - 1) % ord == 0);
            REQUIRE(residual_index(g, p) * ord == p - 1);
        }
    });
}

TEST_CASE("kernels") {
    Kernels k45 = kernels(45);
    REQUIRE(k45.k == 15);
    REQUIRE(k45.k1 == 15);
    REQUIRE(k45.k2 == 15);
    Kernels k12 = kernels(12);
    REQUIRE(k12.k == 6);
    REQUIRE(k12.k1 == 24);
    REQUIRE(k12.k2 == 12);
    Kernels k16 = kernels(16);
    REQUIRE(k16.k == 2);
    REQUIRE(k16.k1 == 8);
    REQUIRE(k16.k2 == 8);
    REQUIRE_THROWS_AS(kernels(0), ArgumentError);

    for (u64 d = 1; d <= 10000; ++d) {
        Kernels ks = kernels(d);
        REQUIRE(ks.k2 % ks.k == 0);
        REQUIRE(ks.k1 % ks.k2 == 0);
    }
}

TEST_CASE("discriminant of Q(sqrt(g))") {
    REQUIRE(RationalBase(2).discriminant() == 8);
    REQUIRE(RationalBase(-11).discriminant() == -11);
    REQUIRE(RationalBase(6).discriminant() == 24);
    REQUIRE(RationalBase(5).discriminant() == 5);
    REQUIRE(RationalBase(-2).discriminant() == -8);
    REQUIRE(RationalBase(1, 2).discriminant() == 8);  // squarefree part of 1*2
    REQUIRE(RationalBase(4).discriminant() == 1);     // square sentinel

    for (i64 g : {-30, -11, -7, -5, -3, -2, 2, 3, 5, 6, 7, 10, 15, 21, 30, 105}) {
        const i64 D = RationalBase(g).discriminant();
        const i64 m = ((D % 4) + 4) % 4;
        REQUIRE((m == 0 || m == 1));
        for (const auto& t : factorize(static_cast<u64>(D < 0 ? -D : D)).terms)
            REQUIRE((2 * g) % static_cast<i64>(t.p) == 0);
    }
}

TEST_CASE("membership in the power-free set G") {
    REQUIRE(is_in_G(2));
    REQUIRE_FALSE(is_in_G(8));
    REQUIRE_FALSE(is_in_G(-4));
    REQUIRE(is_in_G(-8) == false);  // -8 = (-2)^3
    REQUIRE(is_in_G(12));
    REQUIRE_THROWS_AS(is_in_G(1), ArgumentError);
    REQUIRE_THROWS_AS(is_in_G(0), ArgumentError);
    REQUIRE_THROWS_AS(is_in_G(-1), ArgumentError);
}

TEST_CASE("G membership: exhaustive check vs direct power search, |g| <= 10^6") {
    // oracle: the set of m = r^h with h > 1 (integer r suffices: a reduced
    // rational with integral power must be an integer)
    std::set<u64> powers;
    for (u64 r = 2; r * r <= 1000000; ++r) {
        u64 v = r * r;
        while (v <= 1000000) {
            powers.insert(v);
            if (v > 1000000 / r) break;
            v *= r;
        }
    }
    for (u64 m = 2; m <= 1000000; ++m) {
        const bool in = is_in_G(static_cast<i64>(m));
        REQUIRE(in == (powers.count(m) == 0));
        REQUIRE(is_in_G(-static_cast<i64>(m)) == in);
    }
}

TEST_CASE("kronecker symbol") {
    REQUIRE(kronecker_symbol(RationalBase(2), 7) == 1);
    REQUIRE(kronecker_symbol(RationalBase(2), 5) == -1);
    REQUIRE_THROWS_AS(kronecker_symbol(RationalBase(2), 2), ArgumentError);
    REQUIRE_THROWS_AS(kronecker_symbol(RationalBase(5), 5), OrderUndefinedError);

    // Euler criterion oracle for all odd p <= 10^3
    const std::vector<RationalBase> gs{RationalBase(2), RationalBase(3), RationalBase(-5),
                                       RationalBase(1, 2)};
    primes_in_range(3, 1000).for_each([&](u64 p) {
        for (const auto& g : gs) {
            if (g.divides_num_or_den(p)) continue;
            const u64 e = powmod(g.mod_p(p), (p - 1) / 2, p);
            const int euler = (e == 1) ? 1 : -1;
            REQUIRE(kronecker_symbol(g, p) == euler);
        }
    });
}

TEST_CASE("RationalBase invariants") {
    RationalBase g(6, -4);
    REQUIRE(g.num() == -3);
    REQUIRE(g.den() == 2);
    REQUIRE(g.sign() == -1);
    REQUIRE(g.nu_p(2) == -1);
    REQUIRE(g.nu_p(3) == 1);
    REQUIRE(g.nu_p(5) == 0);
    REQUIRE_THROWS_AS(RationalBase(0), ArgumentError);
    REQUIRE_THROWS_AS(RationalBase(1), ArgumentError);
    REQUIRE_THROWS_AS(RationalBase(-2, 2), ArgumentError);
    REQUIRE_THROWS_AS(RationalBase(5, 0), ArgumentError);
    REQUIRE(RationalBase::parse("-3/7").num() == -3);
    REQUIRE(RationalBase::parse("-3/7").den() == 7);
    REQUIRE_THROWS_AS(RationalBase::parse("1e3"), ArgumentError);
    REQUIRE_THROWS_AS(RationalBase::parse("x"), ArgumentError);
    REQUIRE_THROWS_AS(RationalBase::parse("3/"), ArgumentError);
}

TEST_CASE("Rat exact rationals") {
    REQUIRE(Rat(1, 2) + Rat(1, 3) == Rat(5, 6));
    REQUIRE(Rat(2, 4) == Rat(1, 2));
    REQUIRE(Rat(1, -2).den() == 2);
    REQUIRE(Rat(1, -2).num() == -1);
    REQUIRE((Rat(5, 24) * Rat(24, 5)) == Rat(1));
    REQUIRE(Rat(1, 3).str() == "1/3");
    REQUIRE_THROWS_AS(Rat(1, 0), ArgumentError);
}
