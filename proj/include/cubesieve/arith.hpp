#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace cubesieve {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }
u64 powmod(u64 base, u64 exp, u64 m);
// inverse of a modulo m, requires gcd(a, m) = 1
u64 invmod(u64 a, u64 m);
inline u64 modred(i64 a, u64 m) {
    i64 r = a % static_cast<i64>(m);
    return static_cast<u64>(r < 0 ? r + static_cast<i64>(m) : r);
}

bool is_prime(u64 n);

using Factorization = std::vector<std::pair<u64, int>>;

// Smallest-prime-factor table up to 10^7, built on first use.
const std::vector<std::uint32_t>& spf_table();
constexpr u64 kSpfLimit = 10'000'000;

Factorization factorize(u64 n);
std::vector<u64> prime_support(u64 n);
u64 radical(u64 n);
u64 pollard_rho(u64 n);

int jacobi(i64 a, u64 n);
int kronecker(i64 a, u64 n);

struct SquarefreeSplit {
    u64 c;
    u64 d;
};
SquarefreeSplit squarefree_decompose(u64 n);

std::vector<u64> primes_up_to(u64 n);
std::vector<u64> primes_in(u64 lo, u64 hi);

u64 isqrt(u64 n);
bool is_square(u64 n);

// sqrt of a modulo an odd prime q; a must be a quadratic residue
u64 sqrt_mod(u64 a, u64 q);
// generator of the multiplicative group of F_q
u64 primitive_root(u64 q);

// valuation of n at prime l, n != 0
int valuation(u64 n, u64 l);

// base^(alpha*p + beta)
struct PrimePower {
    u64 base;
    i64 alpha;
    i64 beta;
    i64 exponent(u64 p) const { return alpha * static_cast<i64>(p) + beta; }
};

class FactoredInteger {
public:
    FactoredInteger() = default;
    FactoredInteger(int sign, std::vector<PrimePower> factors);
    static FactoredInteger from_integer(i64 n);

    int sign() const { return sign_; }
    const std::vector<PrimePower>& factors() const { return factors_; }

    i64 exponent_of(u64 prime, u64 p) const;
    std::vector<u64> support(u64 p) const;
    bool is_one(u64 p) const;
    bool valid_for(u64 p) const;

    FactoredInteger times(const FactoredInteger& o) const;
    // multiply by base^(alpha*p+beta); exponents may go negative transiently
    FactoredInteger times_power(u64 base, i64 alpha, i64 beta) const;

    mpz_class materialize(u64 p) const;
    std::string to_string() const;

    bool operator==(const FactoredInteger&) const = default;

private:
    void normalize();
    int sign_ = 1;
    std::vector<PrimePower> factors_;
};

u64 factored_eval_mod(const FactoredInteger& f, u64 p, u64 q);
// unit part and valuation of f at prime q, unit part reduced mod q^t (q^t < 2^63)
struct LocalUnit {
    i64 val;
    u64 unit;
};
LocalUnit factored_local(const FactoredInteger& f, u64 p, u64 q, u64 qt);

}  // namespace cubesieve
