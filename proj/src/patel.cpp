#include <algorithm>
#include <stdexcept>

#include "cubesieve/quadfield.hpp"
#include "cubesieve/sieves.hpp"

namespace cubesieve {

namespace {

const PatelData& patel_data(int case_id) {
    const auto& c = descent_case(case_id);
    if (!c.patel) throw std::domain_error("Patel sieve only applies to cases 1-4");
    return *c.patel;
}

// exponents p in [11, pmax] dividing q - (-5/q)
template <class F>
void for_each_exponent(u64 q, u64 pmax, F&& f) {
    u64 v = jacobi(-5, q) == 1 ? q - 1 : q + 1;
    for (auto [p, e] : factorize(v))
        if (p >= 11 && p <= pmax) f(p);
}

}  // namespace

PatelTransform patel_transform(int case_id, u64 r) {
    const auto& pd = patel_data(case_id);
    auto split = squarefree_decompose(pd.C1 * pd.C2_coeff);
    PatelTransform t{case_id, pd.C1, pd.C2_coeff * r * r, split.c, split.d * r};
    if ((t.C1 * (t.C2 % 8)) % 8 == 7) throw std::logic_error("C1 C2 = 7 mod 8");
    return t;
}

std::vector<u64> patel_allowed_primes(int case_id, u64 r, u64 pmax) {
    auto t = patel_transform(case_id, r);
    std::vector<u64> out;
    // the class-number clause: odd p dividing h(-4c)
    u64 h = class_number(-4 * static_cast<i64>(t.c));
    for (auto [p, e] : factorize(h))
        if (p >= 11 && p <= pmax) out.push_back(p);
    for (u64 q : prime_support(t.d)) {
        if (q == 2 || q == 5) continue;
        for_each_exponent(q, pmax, [&](u64 p) { out.push_back(p); });
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

u64 patel_count(int case_id, u64 rmax, u64 pmax, PatelConvention conv) {
    patel_data(case_id);
    u64 total = 0;
    for (u64 r = 1; r <= rmax; ++r) {
        if (!admissible_r(case_id, r)) continue;
        if (conv == PatelConvention::Distinct) {
            total += 2 + patel_allowed_primes(case_id, r, pmax).size();
            continue;
        }
        total += 1;
        for (u64 q : prime_support(r)) {
            if (q == 5) break;
            if (q < 7) continue;
            for_each_exponent(q, pmax, [&](u64) { ++total; });
        }
    }
    return total;
}

}  // namespace cubesieve
