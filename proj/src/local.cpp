#include <algorithm>
#include <numeric>
#include <set>

#include "cubesieve/sieves.hpp"

namespace cubesieve {

namespace {

u64 upow(u64 q, i64 e) {
    u64 v = 1;
    for (i64 i = 0; i < e; ++i) v *= q;
    return v;
}

int vq(u64 n, u64 q) { return n == 0 ? 64 : valuation(n, q); }

struct Ctx {
    u64 n, m, q;
    int t;
    u64 qt;
};

// units X1, Y1 with a X1^n + q^db b Y1^m = W; a, b units mod q^t
bool unit_eq(const Ctx& c, u64 a, u64 b, i64 db, u64 W, u64 n, u64 m) {
    u64 ainv = invmod(a, c.qt);
    if (db >= c.t) return W % c.q != 0 && unit_is_power(mulmod(W, ainv, c.qt), n, c.q);
    if (db > 0 && W % c.q == 0) return false;
    if (db == 0 && W % c.qt == 0 && m % n == 0) {
        // T = -b Y1^m and Y1^m is already an n-th power
        return unit_is_power(mulmod(c.qt - b, ainv, c.qt), n, c.q);
    }
    u64 bb = mulmod(b, upow(c.q, db), c.qt);
    int s = std::max(1, c.t - vq(m, c.q));
    u64 qs = upow(c.q, s);
    for (u64 y = 1; y < qs; ++y) {
        if (y % c.q == 0) continue;
        u64 T = (W + c.qt - mulmod(bb, powmod(y, m, c.qt), c.qt)) % c.qt;
        if (T % c.q == 0) continue;
        if (unit_is_power(mulmod(T, ainv, c.qt), n, c.q)) return true;
    }
    return false;
}

// one term carries the valuation of C exactly, the other is strictly deeper
bool dominant(const Ctx& c, QCoeff A, u64 nA, QCoeff B, u64 nB, i64 gamma, u64 uC) {
    if (gamma < A.val || (gamma - A.val) % static_cast<i64>(nA) != 0) return false;
    i64 y = 0;
    if (B.val <= gamma) y = (gamma - B.val) / static_cast<i64>(nB) + 1;
    for (;; ++y) {
        i64 d = B.val + static_cast<i64>(nB) * y - gamma;
        if (unit_eq(c, A.unit, B.unit, d, uC, nA, nB)) return true;
        if (d >= c.t) return false;
    }
}

}  // namespace

bool unit_is_power(u64 u, u64 k, u64 q) {
    if (q == 2) {
        int a = valuation(k, 2);
        if (a == 0) return true;
        u64 mod = u64{1} << (a + 2);
        return u % mod == 1;
    }
    u64 g = std::gcd(k, q - 1);
    if (powmod(u % q, (q - 1) / g, q) != 1) return false;
    int a = valuation(k, q);
    if (a > 0) return powmod(u, q - 1, upow(q, a + 1)) == 1;
    return true;
}

u64 local_precision(u64 q, u64 n, u64 m) {
    int v = std::max(valuation(n, q), valuation(m, q));
    return q == 2 ? v + 2 : v + 1;
}

bool zq_soluble(QCoeff A, QCoeff B, QCoeff C, u64 n, u64 m, u64 q, int t) {
    Ctx c{n, m, q, t, upow(q, t)};
    const i64 g = C.val;
    const i64 N = static_cast<i64>(n), M = static_cast<i64>(m);
    // X = 0
    if (g >= B.val && (g - B.val) % M == 0 && unit_is_power(mulmod(C.unit, invmod(B.unit, c.qt), c.qt), m, q))
        return true;
    // Y = 0
    if (g >= A.val && (g - A.val) % N == 0 && unit_is_power(mulmod(C.unit, invmod(A.unit, c.qt), c.qt), n, q))
        return true;
    if (dominant(c, A, n, B, m, g, C.unit)) return true;
    if (dominant(c, B, m, A, n, g, C.unit)) return true;
    // both terms share a valuation e <= v(C)
    for (i64 e = A.val; e <= g; e += N) {
        if (e < B.val || (e - B.val) % M != 0) continue;
        u64 W = mulmod(upow(q, g - e) % c.qt, C.unit, c.qt);
        if (g - e >= t) W = 0;
        if (unit_eq(c, A.unit, B.unit, 0, W, n, m)) return true;
    }
    return false;
}

bool zq_soluble_int(i64 A, i64 B, i64 C, u64 n, u64 m, u64 q) {
    int t = static_cast<int>(local_precision(q, n, m));
    u64 qt = upow(q, t);
    auto split = [&](i64 v) {
        u64 a = static_cast<u64>(v < 0 ? -v : v);
        int k = valuation(a, q);
        a /= upow(q, k);
        u64 u = a % qt;
        if (v < 0) u = (qt - u) % qt;
        return QCoeff{k, u};
    };
    return zq_soluble(split(A), split(B), split(C), n, m, q, t);
}

std::optional<LocalWitness> local_eliminates(const CoprimeForm& form) {
    if (form.obstruction) return LocalWitness{"content", form.obstruction};
    const u64 p = form.p;
    const u64 Fp = form.Fprime();
    auto suppD = form.D.support(p);
    auto suppE = form.E.support(p);
    auto fF = form.Fprime_factors();

    // (i) q | D, q odd, q ∤ F': -E F' must be a square mod q
    for (u64 q : suppD) {
        if (q == 2 || Fp % q == 0) continue;
        u64 v = mulmod(q - factored_eval_mod(form.E, p, q), Fp % q, q);
        if (jacobi(static_cast<i64>(v), q) == -1) return LocalWitness{"qr", q};
    }

    // (ii) q = 1 mod p
    std::set<u64> all(suppD.begin(), suppD.end());
    all.insert(suppE.begin(), suppE.end());
    for (auto [q, e] : fF) all.insert(q);
    for (u64 q : all) {
        if (q % p != 1) continue;
        const u64 Dq = factored_eval_mod(form.D, p, q), Eq = factored_eval_mod(form.E, p, q), Fq = Fp % q;
        if (Dq == 0 && Fq != 0) {
            // Dλ^p vanishes, so μ^(2p) = -F'/E
            u64 v = mulmod(q - Fq, invmod(Eq, q), q);
            if (powmod(v, (q - 1) / std::gcd(2 * p, q - 1), q) != 1) return LocalWitness{"power", q};
        } else if (Eq == 0 && Dq != 0 && Fq != 0) {
            u64 v = mulmod(Fq, invmod(Dq, q), q);
            if (powmod(v, (q - 1) / p, q) != 1) return LocalWitness{"power", q};
        } else if (Fq == 0 && Dq != 0 && Eq != 0) {
            int ord = 0;
            for (auto [qq, e] : fF)
                if (qq == q) ord = e;
            // q | λ would force q | μ and then q^p | F'
            if (ord < static_cast<int>(p)) {
                u64 v = mulmod(Eq, invmod(Dq, q), q);
                if (powmod(v, (q - 1) / p, q) != 1) return LocalWitness{"power", q};
            }
        }
    }

    // (iii) q-adic solubility of D λ^p - E μ^(2p) = F'
    std::set<u64> qs{2, 3, 5, 7, p};
    qs.insert(all.begin(), all.end());
    for (u64 q : qs) {
        int t = static_cast<int>(local_precision(q, p, 2 * p));
        u64 qt = upow(q, t);
        auto d = factored_local(form.D, p, q, qt);
        auto e = factored_local(form.E, p, q, qt);
        int vf = 0;
        for (auto [qq, ee] : fF)
            if (qq == q) vf = ee;
        u64 fu = Fp / upow(q, vf) % qt;
        QCoeff A{d.val, d.unit}, B{e.val, (qt - e.unit) % qt}, C{vf, fu};
        if (!zq_soluble(A, B, C, p, 2 * p, q, t)) return LocalWitness{"padic", q};
    }
    return std::nullopt;
}

}  // namespace cubesieve
