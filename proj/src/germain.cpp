#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "cubesieve/sieves.hpp"

namespace cubesieve {

std::vector<u64> germain_s_prime(u64 p, u64 q) {
    u64 k = (q - 1) / (2 * p);
    u64 z = powmod(primitive_root(q), 2 * p, q);  // generates the k-th roots of unity
    std::vector<u64> s{0};
    u64 cur = 1;
    for (u64 i = 0; i < k; ++i) {
        s.push_back(cur);
        cur = mulmod(cur, z, q);
    }
    return s;
}

static bool s_set_empty(u64 q, u64 k, const std::vector<u64>& bz, u64 c_over_a) {
    for (u64 v : bz) {
        u64 t = v + c_over_a;
        if (t >= q) t -= q;
        if (t == 0 || powmod(t, 2 * k, q) == 1) return false;
    }
    return true;
}

std::optional<GermainWitness> germain_eliminates(const FactoredInteger& a, const FactoredInteger& b, u64 c, u64 p,
                                                 u64 kmax) {
    for (u64 k = 1; k <= kmax; ++k) {
        u64 q = 2 * k * p + 1;
        if (!is_prime(q)) continue;
        u64 am = factored_eval_mod(a, p, q);
        if (am == 0) continue;
        u64 ainv = invmod(am, q);
        u64 bq = mulmod(factored_eval_mod(b, p, q), ainv, q);
        std::vector<u64> bz;
        for (u64 z : germain_s_prime(p, q)) bz.push_back(mulmod(bq, z, q));
        if (s_set_empty(q, k, bz, mulmod(c % q, ainv, q))) return GermainWitness{p, q, k, true};
    }
    return std::nullopt;
}

GermainSieve::GermainSieve(FactoredInteger a, FactoredInteger b, u64 rhs, u64 p, u64 kmax)
    : a_(std::move(a)), b_(std::move(b)), rhs_(rhs), p_(p), kmax_(kmax) {}

bool GermainSieve::extend() {
    while (next_k_ <= kmax_) {
        u64 k = next_k_++;
        u64 q = 2 * k * p_ + 1;
        if (!is_prime(q)) continue;
        u64 am = factored_eval_mod(a_, p_, q);
        if (am == 0) continue;
        Aux aux{q, k, invmod(am, q), {}};
        u64 bq = mulmod(factored_eval_mod(b_, p_, q), aux.c_scale, q);
        auto sp = germain_s_prime(p_, q);
        aux.bz.reserve(sp.size());
        for (u64 z : sp) aux.bz.push_back(mulmod(bq, z, q));
        aux_.push_back(std::move(aux));
        return true;
    }
    return false;
}

bool GermainSieve::fails(const Aux& aux, u64 c_over_a) const { return s_set_empty(aux.q, aux.k, aux.bz, c_over_a); }

template <class CMod>
std::optional<GermainWitness> GermainSieve::run(CMod cmod) {
    for (std::size_t i = 0;; ++i) {
        if (i == aux_.size() && !extend()) return std::nullopt;
        const Aux& aux = aux_[i];
        if (fails(aux, mulmod(cmod(aux.q), aux.c_scale, aux.q))) return GermainWitness{p_, aux.q, aux.k, true};
    }
}

std::optional<GermainWitness> GermainSieve::test_r(u64 r) {
    return run([&](u64 q) {
        u64 rq = r % q;
        return mulmod(rhs_ % q, mulmod(rq, rq, q), q);
    });
}

std::optional<GermainWitness> GermainSieve::test_c(u64 c) {
    return run([&](u64 q) { return c % q; });
}

namespace {

std::vector<u64> power_image(u64 e, u64 q) {
    // w -> w^e on F_q^*, stopping once the image reaches its known size
    u64 target = (q - 1) / std::gcd(e, q - 1);
    std::unordered_set<u64> seen;
    for (u64 w = 1; w < q && seen.size() < target; ++w) seen.insert(powmod(w, e, q));
    std::vector<u64> out(seen.begin(), seen.end());
    out.push_back(0);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

bool germain_verify_exhaustive(u64 a_mod, u64 b_mod, u64 c_mod, u64 p, u64 q) {
    a_mod %= q;
    if (a_mod == 0) return false;
    u64 ainv = invmod(a_mod, q);
    auto xp = power_image(p, q);
    for (u64 y : power_image(2 * p, q)) {
        u64 x = mulmod((c_mod + mulmod(b_mod % q, y, q)) % q, ainv, q);
        if (std::binary_search(xp.begin(), xp.end(), x)) return false;
    }
    return true;
}

bool germain_verify_pairs(u64 a_mod, u64 b_mod, u64 c_mod, u64 p, u64 q) {
    std::vector<u64> wp(q), w2p(q);
    for (u64 w = 0; w < q; ++w) {
        wp[w] = powmod(w, p, q);
        w2p[w] = mulmod(wp[w], wp[w], q);
    }
    a_mod %= q;
    b_mod %= q;
    c_mod %= q;
    for (u64 w1 = 0; w1 < q; ++w1) {
        u64 bt = mulmod(b_mod, w2p[w1], q);
        for (u64 w2 = 0; w2 < q; ++w2) {
            if ((mulmod(a_mod, wp[w2], q) + q - bt) % q == c_mod) return false;
        }
    }
    return true;
}

}  // namespace cubesieve
