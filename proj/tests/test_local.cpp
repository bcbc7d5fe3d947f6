#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <unordered_set>

#include "cubesieve/descent.hpp"
#include "cubesieve/sieves.hpp"

using namespace cubesieve;

namespace {

u64 upow(u64 q, int e) {
    u64 v = 1;
    while (e-- > 0) v *= q;
    return v;
}

// does A X^n + B Y^m = C have a solution modulo q^T?
bool soluble_mod(i64 A, i64 B, i64 C, u64 n, u64 m, u64 q, int T) {
    const u64 M = upow(q, T);
    std::unordered_set<u64> imgB;
    for (u64 y = 0; y < M; ++y) imgB.insert(mulmod(modred(B, M), powmod(y, m, M), M));
    for (u64 x = 0; x < M; ++x) {
        u64 ax = mulmod(modred(A, M), powmod(x, n, M), M);
        if (imgB.count((modred(C, M) + M - ax) % M)) return true;
    }
    return false;
}

int max_depth(u64 q) {
    switch (q) {
        case 2: return 12;
        case 3: return 8;
        case 5: return 5;
        default: return 4;
    }
}

}  // namespace

TEST_CASE("p-adic power test") {
    // units of Z_q that are k-th powers, checked against residues of w^k
    for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL}) {
        for (u64 k : {2ULL, 3ULL, 4ULL, 5ULL, 6ULL, 7ULL, 10ULL}) {
            int a = valuation(k, q);
            int T = q == 2 ? a + 2 : a + 1;
            T = std::max(T, 1) + 1;
            u64 M = upow(q, T);
            std::unordered_set<u64> pw;
            for (u64 w = 1; w < M; ++w)
                if (w % q) pw.insert(powmod(w, k, M));
            for (u64 u = 1; u < M; ++u) {
                if (u % q == 0) continue;
                REQUIRE(unit_is_power(u, k, q) == static_cast<bool>(pw.count(u)));
            }
        }
    }
}

TEST_CASE("q-adic solubility against residue enumeration") {
    std::mt19937_64 rng(41);
    int insoluble = 0, soluble = 0;
    for (int i = 0; i < 1500; ++i) {
        const u64 q = std::vector<u64>{2, 3, 5, 7}[rng() % 4];
        const u64 n = std::vector<u64>{2, 3, 5, 7, 10, 14}[rng() % 6];
        const u64 m = std::vector<u64>{2, 5, 7, 10}[rng() % 4];
        auto coeff = [&](int maxv) {
            i64 u = static_cast<i64>(rng() % 40) + 1;
            while (u % static_cast<i64>(q) == 0) ++u;
            i64 v = u * static_cast<i64>(upow(q, static_cast<int>(rng() % (maxv + 1))));
            return rng() & 1 ? v : -v;
        };
        const i64 A = coeff(2), B = coeff(2), C = coeff(3);
        const bool got = zq_soluble_int(A, B, C, n, m, q);
        INFO("A=", A, " B=", B, " C=", C, " n=", n, " m=", m, " q=", q);
        if (got) {
            ++soluble;
            for (int T = 1; T <= max_depth(q); ++T) REQUIRE(soluble_mod(A, B, C, n, m, q, T));
        } else {
            ++insoluble;
            bool blocked = false;
            for (int T = 1; T <= max_depth(q) && !blocked; ++T) blocked = !soluble_mod(A, B, C, n, m, q, T);
            REQUIRE(blocked);
        }
    }
    CHECK(insoluble > 100);
    CHECK(soluble > 100);
}

TEST_CASE("integer solutions are always locally soluble") {
    std::mt19937_64 rng(43);
    for (int i = 0; i < 2000; ++i) {
        const u64 q = std::vector<u64>{2, 3, 5, 7, 11, 13}[rng() % 6];
        const u64 n = std::vector<u64>{5, 7}[rng() % 2], m = 2 * n;
        i64 A = static_cast<i64>(rng() % 30) + 1, B = -(static_cast<i64>(rng() % 30) + 1);
        i64 X = static_cast<i64>(rng() % 5) + 1, Y = static_cast<i64>(rng() % 3) + 1;
        __int128 C = static_cast<__int128>(A);
        for (u64 j = 0; j < n; ++j) C *= X;
        __int128 ym = B;
        for (u64 j = 0; j < m; ++j) ym *= Y;
        C += ym;
        if (C == 0 || C > static_cast<__int128>(INT64_MAX) || C < -static_cast<__int128>(INT64_MAX)) continue;
        REQUIRE(zq_soluble_int(A, B, static_cast<i64>(C), n, m, q));
    }
}

TEST_CASE("local sieve never rejects a genuine solution") {
    std::mt19937_64 rng(47);
    int tested = 0;
    for (int c = 1; c <= 8; ++c) {
        const auto& dc = descent_case(c);
        for (u64 p : {5ULL, 7ULL}) {
            const mpz_class a = dc.a.materialize(p), b = dc.b.materialize(p);
            for (int i = 0; i < 200; ++i) {
                mpz_class w1 = static_cast<long>(rng() % 5 + 1), w2 = static_cast<long>(rng() % 300 + 1);
                mpz_class t1, t2;
                mpz_pow_ui(t1.get_mpz_t(), w2.get_mpz_t(), p);
                mpz_pow_ui(t2.get_mpz_t(), w1.get_mpz_t(), 2 * p);
                mpz_class cc = a * t1 - b * t2;
                if (cc <= 0 || !cc.fits_ulong_p()) continue;
                auto sf = squarefree_decompose(cc.get_ui());
                auto f = coprimify(dc.a, dc.b, sf.c, sf.d, p);
                auto w = local_eliminates(f);
                INFO("case ", c, " p ", p, " w1 ", w1.get_str(), " w2 ", w2.get_str());
                REQUIRE_FALSE(w);
                ++tested;
            }
        }
    }
    CHECK(tested > 500);
}

TEST_CASE("local sieve eliminates on a real obstruction") {
    // X^5 - 11 Y^10 = 2: the fifth powers modulo 11 are 0 and ±1
    auto f = coprimify(FactoredInteger(1, {}), FactoredInteger::from_integer(11), 2, 1, 5);
    auto w = local_eliminates(f);
    REQUIRE(w);
    CHECK(w->test == "power");
    CHECK(w->q == 11);
    // X^5 - 11 Y^10 = 1 has the solution (1, 0)
    CHECK_FALSE(local_eliminates(coprimify(FactoredInteger(1, {}), FactoredInteger::from_integer(11), 1, 1, 5)));
    // common content of both coefficients that the right side lacks
    auto g = coprimify(FactoredInteger(1, {{3, 0, 1}}), FactoredInteger(1, {{3, 0, 1}}), 2, 1, 5);
    auto wg = local_eliminates(g);
    REQUIRE(wg);
    CHECK(wg->test == "content");
    CHECK(wg->q == 3);
}
