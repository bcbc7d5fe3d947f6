#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubesieve/arith.hpp"
#include "cubesieve/descent.hpp"

namespace cubesieve {

// ---- Patel / primitive divisor sieve ----

struct PatelTransform {
    int case_id;
    u64 C1;
    u64 C2;
    u64 c;
    u64 d;
};

PatelTransform patel_transform(int case_id, u64 r);
std::vector<u64> patel_allowed_primes(int case_id, u64 r, u64 pmax);

enum class PatelConvention {
    // One item per admissible r, then the primes q | r are scanned in ascending order and the scan stops at q = 5;
    // each q adds the number of admissible exponents dividing q - (-5/q).
    Scan,
    // Two items per admissible r (p = 5, 7) plus the distinct allowed set.
    Distinct,
};

u64 patel_count(int case_id, u64 rmax, u64 pmax, PatelConvention conv = PatelConvention::Scan);

// ---- Sophie Germain criterion ----

struct GermainWitness {
    u64 p;
    u64 q;
    u64 k;
    bool s_set_empty = true;
};

// a w2^p - b w1^(2p) = c
std::optional<GermainWitness> germain_eliminates(const FactoredInteger& a, const FactoredInteger& b, u64 c, u64 p,
                                                 u64 kmax);

// S'(p,q) = {0} ∪ {ζ : ζ^k = 1}
std::vector<u64> germain_s_prime(u64 p, u64 q);

// Precomputed auxiliary primes for repeated evaluation at a fixed (a, b, p);
// extended lazily, so an instance must not be shared between threads.
class GermainSieve {
public:
    GermainSieve(FactoredInteger a, FactoredInteger b, u64 rhs, u64 p, u64 kmax);
    std::optional<GermainWitness> test_r(u64 r);
    std::optional<GermainWitness> test_c(u64 c);

private:
    struct Aux {
        u64 q;
        u64 k;
        u64 c_scale;           // a^-1 mod q
        std::vector<u64> bz;   // b a^-1 ζ for ζ in S'
    };
    bool extend();
    bool fails(const Aux& aux, u64 c_over_a) const;
    template <class CMod>
    std::optional<GermainWitness> run(CMod cmod);

    FactoredInteger a_, b_;
    u64 rhs_, p_, kmax_;
    u64 next_k_ = 1;
    std::vector<Aux> aux_;
};

// Independent check: enumerates the images of w -> w^p and w -> w^(2p) over F_q.
bool germain_verify_exhaustive(u64 a_mod, u64 b_mod, u64 c_mod, u64 p, u64 q);
// Same, but every residue pair (w1, w2) is enumerated; cost O(q^2).
bool germain_verify_pairs(u64 a_mod, u64 b_mod, u64 c_mod, u64 p, u64 q);

// ---- coprimification ----

struct CoprimeStep {
    u64 prime;
    int into;  // 1: absorbed into w1, 2: into w2, 0: common content removed
};

struct CoprimeForm {
    u64 p = 0;
    FactoredInteger D, E;
    u64 F = 1;
    u64 nu_root = 1;  // nu = nu_root^2
    u64 w1_scale = 1;  // w1 = w1_scale * mu
    u64 w2_scale = 1;  // w2 = w2_scale * lambda
    std::vector<CoprimeStep> steps;
    u64 obstruction = 0;  // prime dividing D and E but not F nu: no solutions at all

    u64 nu() const { return nu_root * nu_root; }
    u64 Fprime() const { return F * nu_root * nu_root; }
    Factorization Fprime_factors() const;
};

CoprimeForm coprimify(const TernaryEquation& eq);
CoprimeForm coprimify(const FactoredInteger& a, const FactoredInteger& b, u64 F, u64 nu_root, u64 p);

// ---- local solubility ----

struct LocalWitness {
    std::string test;  // "qr", "power", "padic"
    u64 q;
};

std::optional<LocalWitness> local_eliminates(const CoprimeForm& form);

// u a unit modulo q^t, is u a k-th power of a q-adic unit? Needs t large enough.
bool unit_is_power(u64 u, u64 k, u64 q);
u64 local_precision(u64 q, u64 n, u64 m);

struct QCoeff {
    i64 val;
    u64 unit;  // modulo q^t
};
// Is A X^n + B Y^m = C soluble in Z_q? C must be nonzero; A, B nonzero.
bool zq_soluble(QCoeff A, QCoeff B, QCoeff C, u64 n, u64 m, u64 q, int t);
// convenience wrapper on integer coefficients
bool zq_soluble_int(i64 A, i64 B, i64 C, u64 n, u64 m, u64 q);

}  // namespace cubesieve
