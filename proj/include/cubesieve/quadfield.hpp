#pragma once

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "cubesieve/arith.hpp"

namespace cubesieve {

// K = Q(sqrt(-m)); integral basis 1, ω with ω = sqrt(-m) or (1 + sqrt(-m))/2
struct QuadField {
    i64 m;
    i64 disc;
    bool half;  // ω = (1 + sqrt(-m))/2, i.e. m = 3 mod 4
    i64 c0;     // ω^2 = ω - c0 when half
    int roots_of_unity;

    static QuadField make(i64 m);
};

struct ReducedForm {
    i64 a, b, c;
    bool operator==(const ReducedForm&) const = default;
};

struct ClassGroup {
    std::vector<ReducedForm> forms;
    u64 h;
};

ClassGroup class_group(i64 disc);
u64 class_number(i64 disc);

// x + y ω
struct QElem {
    mpz_class x, y;
};
QElem qmul(const QuadField& K, const QElem& a, const QElem& b);
QElem qconj(const QuadField& K, const QElem& a);
mpz_class qnorm(const QuadField& K, const QElem& a);
QElem qpow(const QuadField& K, QElem a, u64 e);
// sqrt(-m) in the integral basis
QElem sqrt_minus_m(const QuadField& K);

// a Z + (b + c ω) Z in Hermite normal form
struct Ideal {
    mpz_class a, b, c;
    mpz_class norm() const { return a * c; }
    bool operator==(const Ideal& o) const { return a == o.a && b == o.b && c == o.c; }
};

Ideal ideal_from_generators(const std::vector<QElem>& gens);
Ideal ideal_mul(const QuadField& K, const Ideal& I, const Ideal& J);
Ideal ideal_pow(const QuadField& K, const Ideal& I, u64 e);
bool ideal_contains(const Ideal& I, const QElem& a);
Ideal principal_ideal(const QuadField& K, const QElem& g);

std::optional<QElem> principal_generator(const QuadField& K, const Ideal& I);

enum class SplitKind { Split, Inert, Ramified };

struct PrimeIdeal {
    u64 ell;
    SplitKind kind;
    u64 rho;  // ω = rho mod P (split and ramified)
    int f;    // residue degree
    int e;    // ramification index

    Ideal ideal() const;
    std::string describe() const;
    bool operator==(const PrimeIdeal& o) const { return ell == o.ell && kind == o.kind && rho == o.rho; }
    bool operator<(const PrimeIdeal& o) const { return ell != o.ell ? ell < o.ell : rho < o.rho; }
};

struct Splitting {
    SplitKind kind;
    std::vector<PrimeIdeal> ideals;  // two for split, one otherwise
};

Splitting split_prime(const QuadField& K, u64 q);
PrimeIdeal prime_conj(const QuadField& K, const PrimeIdeal& P);
int prime_valuation(const QuadField& K, const PrimeIdeal& P, QElem a);
// ord_P of a rational integer
int prime_valuation_int(const PrimeIdeal& P, u64 n);
// ord_P(sqrt(-m))
int prime_valuation_sqrt(const QuadField& K, const PrimeIdeal& P);
// order of the class of P and a generator of P^order
struct ClassOrder {
    int order;
    QElem generator;
};
ClassOrder prime_class_order(const QuadField& K, const PrimeIdeal& P);

// images of ω in F_q modulo the two primes above a split q
std::pair<u64, u64> omega_images(const QuadField& K, u64 q);
u64 elem_mod(const QElem& a, u64 omega_image, u64 q);

// ---- Selmer candidates ----

struct SelmerGenerator {
    PrimeIdeal P;
    int order;
    QElem gamma;  // (gamma) = P^order
};

struct SelmerCandidate {
    std::vector<u64> exps;  // one per generator, mod p
    // ord_P(ε) mod p for each generator's prime
    std::vector<u64> support(const std::vector<SelmerGenerator>& gens, u64 p) const;
};

struct SelmerSet {
    QuadField K;
    u64 p;
    std::vector<SelmerGenerator> gens;
    bool inconclusive = false;
    std::string reason;
    // per rational prime, the admissible exponent blocks; the candidates are
    // the cartesian product
    struct Block {
        u64 ell;
        std::vector<std::size_t> gen_index;
        std::vector<std::vector<u64>> choices;
    };
    std::vector<Block> blocks;

    mpz_class size() const;
    std::vector<SelmerCandidate> enumerate(std::size_t cap) const;
};

// G must be closed under conjugation; R is the norm coefficient
SelmerSet selmer_candidates(const QuadField& K, const std::vector<PrimeIdeal>& G, u64 p, const FactoredInteger& R);

// value of ε as an element of O; only practical when p is small
QElem selmer_value(const QuadField& K, const SelmerSet& S, const SelmerCandidate& c);

// ---- descent filters ----

struct DescentData {
    QuadField K;
    u64 p;
    FactoredInteger s;
    u64 n;
};

struct ValuationWitness {
    PrimeIdeal prime;
    int condition;  // 1, 2 or 3
};

std::optional<ValuationWitness> valuation_check(const SelmerSet& S, const SelmerCandidate& c, const DescentData& d);
// checks the three conditions at one prime given the ord values mod p
int valuation_conditions(u64 p, i64 ord_s, i64 ord_nsqrt, i64 ord_2s, i64 ord_2nsqrt, i64 ord_eps, i64 ord_epsbar);

// character test at auxiliary primes q = 2kp+1, built lazily
class AuxPrimeSieve {
public:
    AuxPrimeSieve(const SelmerSet& S, const DescentData& d, u64 kmax, std::vector<u64> excluded_primes);
    std::optional<u64> check(const SelmerCandidate& c);
    // evaluates only the given auxiliary prime; nullopt if q is not usable
    std::optional<bool> chi_empty_at(const SelmerCandidate& c, u64 q);

private:
    struct Aux {
        u64 q, k;
        u64 w1, w2;
        u64 s_mod;
        u64 nsq1, nsq2;                          // n sqrt(-m) at the two primes
        std::vector<u64> g1, g2;                 // generator images
        std::vector<u64> chi;                    // {0} ∪ μ_2k
    };
    bool extend();
    std::optional<Aux> build(u64 q) const;
    bool empty_at(const Aux& a, const SelmerCandidate& c) const;

    const SelmerSet& S_;
    DescentData d_;
    u64 kmax_;
    u64 next_k_ = 1;
    std::vector<u64> excluded_;
    std::vector<Aux> aux_;
};

}  // namespace cubesieve
