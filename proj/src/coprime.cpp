#include <algorithm>
#include <stdexcept>

#include "cubesieve/sieves.hpp"

namespace cubesieve {

Factorization CoprimeForm::Fprime_factors() const {
    Factorization out;
    if (F > 1) out = factorize(F);
    if (nu_root > 1) {
        for (auto [q, e] : factorize(nu_root)) {
            auto it = std::find_if(out.begin(), out.end(), [q](auto& x) { return x.first == q; });
            if (it != out.end())
                it->second += 2 * e;
            else
                out.emplace_back(q, 2 * e);
        }
        std::sort(out.begin(), out.end());
    }
    return out;
}

CoprimeForm coprimify(const TernaryEquation& eq) { return coprimify(eq.a, eq.b, eq.rhs, eq.r, eq.p); }

CoprimeForm coprimify(const FactoredInteger& a, const FactoredInteger& b, u64 F, u64 nu_root, u64 p) {
    CoprimeForm f;
    f.p = p;
    f.D = a;
    f.E = b;
    f.F = F;
    f.nu_root = nu_root;
    if (!a.valid_for(p) || !b.valid_for(p)) throw std::domain_error("coprimify: negative exponent");

    // take one factor of l out of F nu, keeping nu a square
    auto divide_c = [&f](u64 l) {
        if (f.F % l == 0) {
            f.F /= l;
        } else {
            f.nu_root /= l;
            f.F *= l;
        }
    };

    for (;;) {
        std::vector<u64> cand = f.D.support(p);
        for (u64 l : f.E.support(p)) cand.push_back(l);
        for (u64 l : prime_support(f.F)) cand.push_back(l);
        for (u64 l : prime_support(f.nu_root)) cand.push_back(l);
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

        bool changed = false;
        for (u64 l : cand) {
            bool dD = f.D.exponent_of(l, p) > 0, dE = f.E.exponent_of(l, p) > 0;
            bool dc = f.F % l == 0 || f.nu_root % l == 0;
            if (dD && dE && dc) {
                f.D = f.D.times_power(l, 0, -1);
                f.E = f.E.times_power(l, 0, -1);
                divide_c(l);
                f.steps.push_back({l, 0});
            } else if (dD && dE) {
                f.obstruction = l;
                return f;
            } else if (dD && dc) {
                // l | w1
                f.D = f.D.times_power(l, 0, -1);
                f.E = f.E.times_power(l, 2, -1);
                divide_c(l);
                f.w1_scale *= l;
                f.steps.push_back({l, 1});
            } else if (dE && dc) {
                // l | w2
                f.E = f.E.times_power(l, 0, -1);
                f.D = f.D.times_power(l, 1, -1);
                divide_c(l);
                f.w2_scale *= l;
                f.steps.push_back({l, 2});
            } else {
                continue;
            }
            changed = true;
            break;
        }
        if (!changed) return f;
    }
}

}  // namespace cubesieve
