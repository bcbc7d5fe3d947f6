#include <algorithm>
#include <map>
#include <stdexcept>

#include "cubesieve/quadfield.hpp"

namespace cubesieve {

std::vector<u64> SelmerCandidate::support(const std::vector<SelmerGenerator>& gens, u64 p) const {
    std::vector<u64> out;
    for (std::size_t i = 0; i < gens.size(); ++i) out.push_back(static_cast<u64>(gens[i].order) * exps[i] % p);
    return out;
}

mpz_class SelmerSet::size() const {
    mpz_class n = 1;
    for (const auto& b : blocks) n *= static_cast<unsigned long>(b.choices.size());
    return n;
}

std::vector<SelmerCandidate> SelmerSet::enumerate(std::size_t cap) const {
    std::vector<SelmerCandidate> out;
    if (size() > cap) throw std::length_error("SelmerSet::enumerate: too many candidates");
    if (size() == 0) return out;
    std::vector<std::size_t> idx(blocks.size(), 0);
    for (;;) {
        SelmerCandidate c{std::vector<u64>(gens.size(), 0)};
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            const auto& ch = blocks[b].choices[idx[b]];
            for (std::size_t j = 0; j < ch.size(); ++j) c.exps[blocks[b].gen_index[j]] = ch[j];
        }
        out.push_back(std::move(c));
        std::size_t b = 0;
        while (b < blocks.size() && ++idx[b] == blocks[b].choices.size()) idx[b++] = 0;
        if (b == blocks.size()) break;
    }
    return out;
}

SelmerSet selmer_candidates(const QuadField& K, const std::vector<PrimeIdeal>& G, u64 p, const FactoredInteger& R) {
    SelmerSet S{K, p, {}, false, "", {}};
    if (class_number(K.disc) % p == 0) {
        S.inconclusive = true;
        S.reason = "p divides the class number";
        return S;
    }
    if (K.roots_of_unity % p == 0) {
        S.inconclusive = true;
        S.reason = "p divides the number of roots of unity";
        return S;
    }
    std::vector<PrimeIdeal> sorted = G;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    std::map<u64, std::vector<std::size_t>> by_ell;
    for (const auto& P : sorted) {
        if (P.kind == SplitKind::Split &&
            std::find(sorted.begin(), sorted.end(), prime_conj(K, P)) == sorted.end())
            throw std::domain_error("selmer_candidates: G must be closed under conjugation");
        auto co = prime_class_order(K, P);
        by_ell[P.ell].push_back(S.gens.size());
        S.gens.push_back({P, co.order, co.generator});
    }
    // rational primes of R outside G make the norm condition fail unless v = 0 mod p
    for (u64 l : R.support(p)) {
        if (!by_ell.count(l) && R.exponent_of(l, p) % static_cast<i64>(p) != 0) {
            S.blocks.push_back({l, {}, {}});
            return S;
        }
    }
    for (const auto& [l, idx] : by_ell) {
        SelmerSet::Block blk{l, idx, {}};
        u64 v = static_cast<u64>(R.exponent_of(l, p) % static_cast<i64>(p));
        if (idx.size() == 1) {
            const auto& g = S.gens[idx[0]];
            u64 w = static_cast<u64>(g.P.f * g.order) % p;
            blk.choices.push_back({mulmod(v, invmod(w, p), p)});
        } else {
            u64 o = static_cast<u64>(S.gens[idx[0]].order) % p;
            u64 oinv = invmod(o, p);
            for (u64 e1 = 0; e1 < p; ++e1) {
                u64 e2 = mulmod((v + p - mulmod(o, e1, p)) % p, oinv, p);
                blk.choices.push_back({e1, e2});
            }
        }
        S.blocks.push_back(std::move(blk));
    }
    return S;
}

QElem selmer_value(const QuadField& K, const SelmerSet& S, const SelmerCandidate& c) {
    QElem v{1, 0};
    for (std::size_t i = 0; i < S.gens.size(); ++i) v = qmul(K, v, qpow(K, S.gens[i].gamma, c.exps[i]));
    return v;
}

int valuation_conditions(u64 p, i64 ord_s, i64 ord_nsqrt, i64 ord_2s, i64 ord_2nsqrt, i64 ord_eps, i64 ord_epsbar) {
    auto md = [p](i64 v) { return ((v % static_cast<i64>(p)) + static_cast<i64>(p)) % static_cast<i64>(p); };
    auto distinct = [&](i64 a, i64 b, i64 c) {
        a = md(a), b = md(b), c = md(c);
        return a != b && b != c && a != c;
    };
    if (distinct(ord_s, ord_nsqrt, ord_eps)) return 1;
    if (distinct(ord_2s, ord_eps, ord_epsbar)) return 2;
    if (distinct(ord_2nsqrt, ord_eps, ord_epsbar)) return 3;
    return 0;
}

std::optional<ValuationWitness> valuation_check(const SelmerSet& S, const SelmerCandidate& c, const DescentData& d) {
    const auto& K = d.K;
    auto ord_eps_at = [&](const PrimeIdeal& P) -> i64 {
        for (std::size_t i = 0; i < S.gens.size(); ++i)
            if (S.gens[i].P == P) return static_cast<i64>(S.gens[i].order) * static_cast<i64>(c.exps[i]);
        return 0;
    };
    std::vector<PrimeIdeal> primes;
    for (const auto& g : S.gens) primes.push_back(g.P);
    for (u64 l : d.s.support(d.p))
        for (const auto& P : split_prime(K, l).ideals)
            if (std::find(primes.begin(), primes.end(), P) == primes.end()) primes.push_back(P);
    for (const auto& P : primes) {
        const i64 e = P.e;
        const i64 vs = e * d.s.exponent_of(P.ell, d.p);
        const i64 v2 = P.ell == 2 ? e : 0;
        const i64 vn = prime_valuation_int(P, d.n) + prime_valuation_sqrt(K, P);
        int cond = valuation_conditions(d.p, vs, vn, vs + v2, vn + v2, ord_eps_at(P), ord_eps_at(prime_conj(K, P)));
        if (cond) return ValuationWitness{P, cond};
    }
    return std::nullopt;
}

AuxPrimeSieve::AuxPrimeSieve(const SelmerSet& S, const DescentData& d, u64 kmax, std::vector<u64> excluded_primes)
    : S_(S), d_(d), kmax_(kmax), excluded_(std::move(excluded_primes)) {}

std::optional<AuxPrimeSieve::Aux> AuxPrimeSieve::build(u64 q) const {
    const u64 p = d_.p;
    if ((q - 1) % (2 * p) != 0 || !is_prime(q)) return std::nullopt;
    if (kronecker(d_.K.disc, q) != 1) return std::nullopt;
    for (u64 l : excluded_)
        if (l == q) return std::nullopt;
    Aux a;
    a.q = q;
    a.k = (q - 1) / (2 * p);
    std::tie(a.w1, a.w2) = omega_images(d_.K, q);
    a.s_mod = factored_eval_mod(d_.s, p, q);
    auto sq = [&](u64 w) { return d_.K.half ? (2 * w + q - 1) % q : w; };
    a.nsq1 = mulmod(d_.n % q, sq(a.w1), q);
    a.nsq2 = mulmod(d_.n % q, sq(a.w2), q);
    for (const auto& g : S_.gens) {
        u64 i1 = elem_mod(g.gamma, a.w1, q), i2 = elem_mod(g.gamma, a.w2, q);
        if (i1 == 0 || i2 == 0) return std::nullopt;  // ε would not be a unit at q
        a.g1.push_back(i1);
        a.g2.push_back(i2);
    }
    // χ' = {0} ∪ μ_2k, generated by g^p
    u64 z = powmod(primitive_root(q), p, q);
    a.chi.push_back(0);
    u64 cur = 1;
    for (u64 i = 0; i < 2 * a.k; ++i) {
        a.chi.push_back(cur);
        cur = mulmod(cur, z, q);
    }
    return a;
}

bool AuxPrimeSieve::extend() {
    while (next_k_ <= kmax_) {
        u64 q = 2 * (next_k_++) * d_.p + 1;
        if (auto a = build(q)) {
            aux_.push_back(std::move(*a));
            return true;
        }
    }
    return false;
}

bool AuxPrimeSieve::empty_at(const Aux& a, const SelmerCandidate& c) const {
    const u64 q = a.q;
    u64 e1 = 1, e2 = 1;
    for (std::size_t i = 0; i < c.exps.size(); ++i) {
        if (!c.exps[i]) continue;
        e1 = mulmod(e1, powmod(a.g1[i], c.exps[i], q), q);
        e2 = mulmod(e2, powmod(a.g2[i], c.exps[i], q), q);
    }
    const u64 i1 = invmod(e1, q), i2 = invmod(e2, q);
    for (u64 zeta : a.chi) {
        u64 sz = mulmod(a.s_mod, zeta, q);
        u64 v1 = mulmod((sz + a.nsq1) % q, i1, q);
        if (v1 != 0 && powmod(v1, 2 * a.k, q) != 1) continue;
        u64 v2 = mulmod((sz + a.nsq2) % q, i2, q);
        if (v2 != 0 && powmod(v2, 2 * a.k, q) != 1) continue;
        return false;
    }
    return true;
}

std::optional<u64> AuxPrimeSieve::check(const SelmerCandidate& c) {
    for (std::size_t i = 0;; ++i) {
        if (i == aux_.size() && !extend()) return std::nullopt;
        if (empty_at(aux_[i], c)) return aux_[i].q;
    }
}

std::optional<bool> AuxPrimeSieve::chi_empty_at(const SelmerCandidate& c, u64 q) {
    auto a = build(q);
    if (!a) return std::nullopt;
    return empty_at(*a, c);
}

}  // namespace cubesieve
