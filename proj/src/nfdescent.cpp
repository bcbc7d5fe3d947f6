#include "cubesieve/nfdescent.hpp"

#include <algorithm>
#include <set>

namespace cubesieve {

DescentSetup descent_setup(const CoprimeForm& f) {
    const u64 p = f.p;
    DescentSetup d;
    d.Eprime = 1;
    std::vector<PrimePower> sf;
    for (const auto& pp : f.E.factors()) {
        i64 x = pp.exponent(p);
        if (x & 1) d.Eprime *= pp.base;
        sf.push_back({pp.base, 0, (x + (x & 1)) / 2});
    }
    d.s = FactoredInteger(1, sf);
    d.R = f.D.times(FactoredInteger::from_integer(static_cast<i64>(d.Eprime)));
    auto split = squarefree_decompose(f.F * d.Eprime);
    d.m = split.c;
    d.n = split.d * f.nu_root;
    std::set<u64> G{2};
    for (u64 l : prime_support(d.m)) G.insert(l);
    for (u64 l : prime_support(d.n)) G.insert(l);
    for (u64 l : d.R.support(p)) G.insert(l);
    d.G_primes.assign(G.begin(), G.end());
    return d;
}

NfDescentResult nfdescent_eliminates(const CoprimeForm& f, u64 kmax, std::size_t cap) {
    NfDescentResult res;
    const u64 p = f.p;
    const auto setup = descent_setup(f);
    res.m = setup.m;
    const QuadField K = QuadField::make(static_cast<i64>(setup.m));

    std::vector<PrimeIdeal> G;
    for (u64 l : setup.G_primes)
        for (const auto& P : split_prime(K, l).ideals) G.push_back(P);
    SelmerSet S = selmer_candidates(K, G, p, setup.R);
    if (S.inconclusive) {
        res.inconclusive = true;
        res.reason = S.reason;
        return res;
    }
    res.selmer_size = S.size();
    DescentData dd{K, p, setup.s, setup.n};

    // The valuation test at a prime only involves the exponents above that rational
    // prime, so each block can be filtered on its own.
    for (auto& blk : S.blocks) {
        std::vector<std::vector<u64>> kept;
        for (const auto& choice : blk.choices) {
            SelmerCandidate c{std::vector<u64>(S.gens.size(), 0)};
            for (std::size_t j = 0; j < choice.size(); ++j) c.exps[blk.gen_index[j]] = choice[j];
            bool killed = false;
            for (std::size_t gi : blk.gen_index) {
                const auto& P = S.gens[gi].P;
                const i64 e = P.e;
                const i64 vs = e * setup.s.exponent_of(P.ell, p);
                const i64 v2 = P.ell == 2 ? e : 0;
                const i64 vn = prime_valuation_int(P, setup.n) + prime_valuation_sqrt(K, P);
                i64 oe = 0, oeb = 0;
                const PrimeIdeal Pb = prime_conj(K, P);
                for (std::size_t gj : blk.gen_index) {
                    i64 val = static_cast<i64>(S.gens[gj].order) * static_cast<i64>(c.exps[gj]);
                    if (S.gens[gj].P == P) oe = val;
                    if (S.gens[gj].P == Pb) oeb = val;
                }
                if (valuation_conditions(p, vs, vn, vs + v2, vn + v2, oe, oeb)) {
                    killed = true;
                    break;
                }
            }
            if (!killed) kept.push_back(choice);
        }
        blk.choices = std::move(kept);
    }
    res.after_valuation = S.size();
    if (res.after_valuation == 0) {
        res.eliminated = true;
        return res;
    }
    if (res.after_valuation > cap) {
        res.inconclusive = true;
        res.reason = "candidate set too large";
        return res;
    }
    AuxPrimeSieve aux_sieve(S, dd, kmax, setup.G_primes);
    std::set<u64> used;
    for (const auto& c : S.enumerate(cap)) {
        auto q = aux_sieve.check(c);
        if (!q) {
            res.survivor_exps = c.exps;
            res.q_used.assign(used.begin(), used.end());
            return res;
        }
        used.insert(*q);
    }
    res.eliminated = true;
    res.q_used.assign(used.begin(), used.end());
    return res;
}

}  // namespace cubesieve
