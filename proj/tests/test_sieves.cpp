#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>
#include <set>

#include "cubesieve/descent.hpp"
#include "cubesieve/sieves.hpp"

using namespace cubesieve;

namespace {

std::vector<u64> trial_primes(u64 n) {
    std::vector<u64> out;
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d) continue;
        out.push_back(d);
        while (n % d == 0) n /= d;
    }
    if (n > 1) out.push_back(n);
    return out;
}

int legendre(i64 a, u64 q) {
    u64 e = powmod(modred(a, q), (q - 1) / 2, q);
    return e == 0 ? 0 : (e == 1 ? 1 : -1);
}

// primes p in [11, pmax] with p | q - (-5/q) for some prime q | r, q not dividing 10
std::set<u64> allowed_oracle(u64 r, u64 pmax) {
    std::set<u64> out;
    for (u64 q : trial_primes(r)) {
        if (q == 2 || q == 5) continue;
        u64 v = legendre(-5, q) == 1 ? q - 1 : q + 1;
        for (u64 p : trial_primes(v))
            if (p >= 11 && p <= pmax) out.insert(p);
    }
    return out;
}

mpz_class ipow(const mpz_class& b, unsigned long e) {
    mpz_class v;
    mpz_pow_ui(v.get_mpz_t(), b.get_mpz_t(), e);
    return v;
}

}  // namespace

TEST_CASE("primitive-divisor sieve") {
    for (int c = 1; c <= 4; ++c) {
        for (u64 r = 1; r <= 3000; ++r) {
            if (!admissible_r(c, r)) continue;
            auto got = patel_allowed_primes(c, r, 5000);
            std::set<u64> g(got.begin(), got.end());
            REQUIRE(g.size() == got.size());
            REQUIRE(g == allowed_oracle(r, 5000));
        }
    }
    // depends on r only through its radical
    for (u64 r : {7ULL, 11ULL, 13ULL, 77ULL, 1001ULL}) {
        auto base = patel_allowed_primes(1, r, 100000);
        for (u64 k = 2; k < 5; ++k) {
            u64 rr = r;
            for (u64 j = 1; j < k; ++j) rr *= r;
            CHECK(patel_allowed_primes(1, rr, 100000) == base);
        }
    }
    // 43 - 1 = 42 = 2 * 3 * 7, 43 + 1 is not used since (-5/43) = 1
    CHECK(legendre(-5, 43) == 1);
    CHECK_THROWS(patel_transform(5, 1));
    auto t = patel_transform(3, 7);
    CHECK(t.C1 * t.C2 == 5 * 49);
}

TEST_CASE("equation counts agree with a direct recount") {
    for (int c = 1; c <= 4; ++c) {
        const u64 rmax = 2000, pmax = mignotte_bound(c, rmax);
        u64 distinct = 0, scan = 0;
        for (u64 r = 1; r <= rmax; ++r) {
            if (!admissible_r(c, r)) continue;
            distinct += 2 + allowed_oracle(r, pmax).size();
            scan += 1;
            for (u64 q : trial_primes(r)) {
                if (q == 5) break;
                if (q < 7) continue;
                u64 v = legendre(-5, q) == 1 ? q - 1 : q + 1;
                for (u64 p : trial_primes(v))
                    if (p >= 11 && p <= pmax) ++scan;
            }
        }
        CHECK(patel_count(c, rmax, pmax, PatelConvention::Distinct) == distinct);
        CHECK(patel_count(c, rmax, pmax, PatelConvention::Scan) == scan);
    }
}

TEST_CASE("S' consists of 0 and the k-th roots of unity") {
    for (u64 p : {5ULL, 7ULL, 11ULL, 13ULL}) {
        for (u64 k = 1; k <= 40; ++k) {
            u64 q = 2 * k * p + 1;
            if (!is_prime(q)) continue;
            auto s = germain_s_prime(p, q);
            std::set<u64> ss(s.begin(), s.end());
            REQUIRE(ss.size() == k + 1);
            REQUIRE(ss.count(0));
            for (u64 z : s)
                if (z) REQUIRE(powmod(z, k, q) == 1);
            // equals the image of w -> w^(2p)
            std::set<u64> img{0};
            for (u64 w = 1; w < q; ++w) img.insert(powmod(w, 2 * p, q));
            REQUIRE(img == ss);
        }
    }
}

TEST_CASE("Germain witnesses survive exhaustive re-verification") {
    std::mt19937_64 rng(23);
    int checked = 0;
    for (int c = 1; c <= 8; ++c) {
        const auto& dc = descent_case(c);
        for (u64 p : {7ULL, 11ULL, 13ULL}) {
            for (int i = 0; i < 60; ++i) {
                u64 r = rng() % 5000 + 1;
                if (!admissible_r(c, r)) continue;
                auto w = germain_eliminates(dc.a, dc.b, dc.rhs * r * r, p, 30);
                if (!w) continue;
                const u64 q = w->q;
                REQUIRE(q == 2 * w->k * p + 1);
                const u64 am = factored_eval_mod(dc.a, p, q), bm = factored_eval_mod(dc.b, p, q);
                const u64 cm = (dc.rhs * r * r) % q;
                REQUIRE(germain_verify_pairs(am, bm, cm, p, q));
                REQUIRE(germain_verify_exhaustive(am, bm, cm, p, q));
                ++checked;
                // the sieve object agrees with the one-shot test
                GermainSieve sieve(dc.a, dc.b, dc.rhs, p, 30);
                auto w2 = sieve.test_r(r);
                REQUIRE(w2);
                REQUIRE(w2->q == q);
            }
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("Germain never eliminates an equation that has a solution") {
    std::mt19937_64 rng(29);
    for (int c = 1; c <= 8; ++c) {
        const auto& dc = descent_case(c);
        for (u64 p : {5ULL, 7ULL, 11ULL}) {
            const mpz_class a = dc.a.materialize(p), b = dc.b.materialize(p);
            for (int i = 0; i < 40; ++i) {
                mpz_class w1 = static_cast<long>(rng() % 6 + 1), w2 = static_cast<long>(rng() % 4000 + 1);
                mpz_class cc = a * ipow(w2, p) - b * ipow(w1, 2 * p);
                if (cc <= 0 || !cc.fits_ulong_p()) continue;
                u64 cv = cc.get_ui();
                REQUIRE_FALSE(germain_eliminates(dc.a, dc.b, cv, p, 200));
                GermainSieve sieve(dc.a, dc.b, 1, p, 200);
                REQUIRE_FALSE(sieve.test_c(cv));
            }
        }
    }
}

TEST_CASE("exhaustive verifiers agree") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 300; ++i) {
        u64 p = std::vector<u64>{5, 7, 11}[rng() % 3];
        u64 k = rng() % 6 + 1, q = 2 * k * p + 1;
        if (!is_prime(q)) continue;
        u64 a = rng() % (q - 1) + 1, b = rng() % q, cc = rng() % q;
        REQUIRE(germain_verify_exhaustive(a, b, cc, p, q) == germain_verify_pairs(a, b, cc, p, q));
    }
}

TEST_CASE("coprimification preserves solutions") {
    std::mt19937_64 rng(37);
    int exercised = 0;
    for (int c = 1; c <= 8; ++c) {
        const auto& dc = descent_case(c);
        const u64 p = 5;
        const mpz_class a = dc.a.materialize(p), b = dc.b.materialize(p);
        for (int i = 0; i < 400; ++i) {
            // w1, w2 carry small primes so that the extraction steps fire
            const long smalls[] = {1, 2, 3, 5, 6, 10, 15, 7};
            mpz_class w1 = smalls[rng() % 8] * static_cast<long>(rng() % 3 + 1);
            mpz_class w2 = smalls[rng() % 8] * static_cast<long>(rng() % 40 + 1);
            mpz_class cc = a * ipow(w2, p) - b * ipow(w1, 2 * p);
            if (cc <= 0 || !cc.fits_ulong_p()) continue;
            auto sf = squarefree_decompose(cc.get_ui());
            auto f = coprimify(dc.a, dc.b, sf.c, sf.d, p);
            REQUIRE(f.obstruction == 0);
            REQUIRE(w1 % static_cast<unsigned long>(f.w1_scale) == 0);
            REQUIRE(w2 % static_cast<unsigned long>(f.w2_scale) == 0);
            mpz_class mu = w1 / static_cast<unsigned long>(f.w1_scale), lam = w2 / static_cast<unsigned long>(f.w2_scale);
            REQUIRE(f.D.materialize(p) * ipow(lam, p) - f.E.materialize(p) * ipow(mu, 2 * p) ==
                    mpz_class(static_cast<unsigned long>(f.Fprime())));
            // pairwise coprime afterwards
            for (u64 l : f.D.support(p)) {
                REQUIRE(f.E.exponent_of(l, p) == 0);
                REQUIRE(f.Fprime() % l != 0);
            }
            for (u64 l : f.E.support(p)) REQUIRE(f.Fprime() % l != 0);
            // and the map back is an identity of polynomials up to one constant
            mpq_class K = mpq_class(a * ipow(mpz_class(static_cast<unsigned long>(f.w2_scale)), p)) / f.D.materialize(p);
            for (int j = 0; j < 3; ++j) {
                mpz_class L = static_cast<long>(rng() % 50) - 25, M = static_cast<long>(rng() % 50) - 25;
                mpz_class orig = a * ipow(f.w2_scale * L, p) - b * ipow(f.w1_scale * M, 2 * p) - cc;
                mpz_class now = f.D.materialize(p) * ipow(L, p) - f.E.materialize(p) * ipow(M, 2 * p) -
                                mpz_class(static_cast<unsigned long>(f.Fprime()));
                REQUIRE(mpq_class(orig) == K * mpq_class(now));
            }
            if (!f.steps.empty()) ++exercised;
        }
    }
    CHECK(exercised > 50);
}

TEST_CASE("shared content without a matching right side is an obstruction") {
    // 3 X^5 - 3 Y^10 = 2 has no solutions since 3 does not divide 2
    FactoredInteger a(1, {{3, 0, 1}}), b(1, {{3, 0, 1}});
    auto f = coprimify(a, b, 2, 1, 5);
    CHECK(f.obstruction == 3);
    auto g = coprimify(a, b, 3, 1, 5);
    CHECK(g.obstruction == 0);
    CHECK(g.D.is_one(5));
    CHECK(g.E.is_one(5));
    CHECK(g.Fprime() == 1);
}
