#include "cubesieve/arith.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cubesieve {

u64 powmod(u64 base, u64 exp, u64 m) {
    if (m == 1) return 0;
    u64 result = 1;
    base %= m;
    while (exp) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

u64 invmod(u64 a, u64 m) {
    i128 t = 0, nt = 1;
    i128 r = m, nr = a % m;
    while (nr) {
        i128 q = r / nr;
        t -= q * nt;
        std::swap(t, nt);
        r -= q * nr;
        std::swap(r, nr);
    }
    if (r != 1) throw std::domain_error("invmod: not invertible");
    if (t < 0) t += m;
    return static_cast<u64>(t);
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // first twelve primes are a complete witness set below 3.3e24
    for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

const std::vector<std::uint32_t>& spf_table() {
    static std::vector<std::uint32_t> table;
    static std::once_flag once;
    std::call_once(once, [] {
        table.assign(kSpfLimit + 1, 0);
        for (u64 i = 2; i <= kSpfLimit; ++i) {
            if (table[i]) continue;
            table[i] = static_cast<std::uint32_t>(i);
            if (i * i > kSpfLimit) continue;
            for (u64 j = i * i; j <= kSpfLimit; j += i)
                if (!table[j]) table[j] = static_cast<std::uint32_t>(i);
        }
    });
    return table;
}

u64 pollard_rho(u64 n) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        u64 x = 2, y = 2, d = 1;
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        while (d == 1) {
            // batch gcds
            u64 prod = 1;
            u64 xs = x, ys = y;
            for (int i = 0; i < 64; ++i) {
                x = f(x);
                y = f(f(y));
                prod = mulmod(prod, x > y ? x - y : y - x, n);
            }
            d = std::gcd(prod, n);
            if (d == n) {
                x = xs;
                y = ys;
                do {
                    x = f(x);
                    y = f(f(y));
                    d = std::gcd(x > y ? x - y : y - x, n);
                } while (d == 1);
            }
        }
        if (d != n) return d;
    }
}

static void factor_into(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (n <= kSpfLimit) {
        const auto& spf = spf_table();
        while (n > 1) {
            out.push_back(spf[n]);
            n /= spf[n];
        }
        return;
    }
    for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}) {
        while (n % p == 0) {
            out.push_back(p);
            n /= p;
        }
    }
    if (n == 1) return;
    if (n <= kSpfLimit) return factor_into(n, out);
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    u64 d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

Factorization factorize(u64 n) {
    if (n == 0) throw std::domain_error("factorize(0)");
    std::vector<u64> ps;
    factor_into(n, ps);
    std::sort(ps.begin(), ps.end());
    Factorization f;
    for (u64 p : ps) {
        if (!f.empty() && f.back().first == p)
            ++f.back().second;
        else
            f.emplace_back(p, 1);
    }
    return f;
}

std::vector<u64> prime_support(u64 n) {
    std::vector<u64> out;
    for (auto [p, e] : factorize(n)) out.push_back(p);
    return out;
}

u64 radical(u64 n) {
    u64 r = 1;
    for (auto [p, e] : factorize(n)) r *= p;
    return r;
}

int jacobi(i64 a_in, u64 n) {
    if (n == 0 || n % 2 == 0) throw std::domain_error("jacobi: n must be odd positive");
    u64 a = modred(a_in, n);
    int result = 1;
    while (a) {
        while (a % 2 == 0) {
            a /= 2;
            u64 r = n % 8;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

int kronecker(i64 a, u64 n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    while (n % 2 == 0) {
        n /= 2;
        if (a % 2 == 0) return 0;
        i64 r = ((a % 8) + 8) % 8;
        if (r == 3 || r == 5) result = -result;
    }
    return n == 1 ? result : result * jacobi(a, n);
}

SquarefreeSplit squarefree_decompose(u64 n) {
    SquarefreeSplit s{1, 1};
    for (auto [p, e] : factorize(n)) {
        for (int i = 0; i < e / 2; ++i) s.d *= p;
        if (e % 2) s.c *= p;
    }
    return s;
}

std::vector<u64> primes_up_to(u64 n) {
    std::vector<u64> out;
    if (n < 2) return out;
    std::vector<bool> comp(n + 1, false);
    for (u64 i = 2; i <= n; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= n; j += i) comp[j] = true;
    }
    return out;
}

std::vector<u64> primes_in(u64 lo, u64 hi) {
    std::vector<u64> out;
    for (u64 p : primes_up_to(hi))
        if (p >= lo) out.push_back(p);
    return out;
}

u64 isqrt(u64 n) {
    u64 r = std::min<u64>(static_cast<u64>(std::sqrt(static_cast<long double>(n))), 4294967295ULL);
    while (static_cast<u128>(r) * r > n) --r;
    while (r < 4294967295ULL && static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

bool is_square(u64 n) {
    u64 r = isqrt(n);
    return r * r == n;
}

u64 sqrt_mod(u64 a, u64 q) {
    a %= q;
    if (a == 0) return 0;
    if (q == 2) return a;
    if (q % 4 == 3) return powmod(a, (q + 1) / 4, q);
    // Tonelli-Shanks
    u64 Q = q - 1;
    int S = 0;
    while (Q % 2 == 0) {
        Q /= 2;
        ++S;
    }
    u64 z = 2;
    while (powmod(z, (q - 1) / 2, q) != q - 1) ++z;
    u64 M = S, c = powmod(z, Q, q), t = powmod(a, Q, q), R = powmod(a, (Q + 1) / 2, q);
    while (t != 1) {
        u64 i = 0, tt = t;
        while (tt != 1) {
            tt = mulmod(tt, tt, q);
            ++i;
            if (i == M) throw std::domain_error("sqrt_mod: non-residue");
        }
        u64 b = c;
        for (u64 j = 0; j + i + 1 < M; ++j) b = mulmod(b, b, q);
        M = i;
        c = mulmod(b, b, q);
        t = mulmod(t, c, q);
        R = mulmod(R, b, q);
    }
    return R;
}

u64 primitive_root(u64 q) {
    if (q == 2) return 1;
    auto fs = prime_support(q - 1);
    for (u64 g = 2;; ++g) {
        bool ok = true;
        for (u64 f : fs)
            if (powmod(g, (q - 1) / f, q) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
}

int valuation(u64 n, u64 l) {
    int v = 0;
    while (n % l == 0) {
        n /= l;
        ++v;
    }
    return v;
}

FactoredInteger::FactoredInteger(int sign, std::vector<PrimePower> factors)
    : sign_(sign < 0 ? -1 : 1), factors_(std::move(factors)) {
    normalize();
}

FactoredInteger FactoredInteger::from_integer(i64 n) {
    if (n == 0) throw std::domain_error("FactoredInteger: zero");
    std::vector<PrimePower> fs;
    for (auto [p, e] : factorize(static_cast<u64>(n < 0 ? -n : n))) fs.push_back({p, 0, e});
    return FactoredInteger(n < 0 ? -1 : 1, std::move(fs));
}

void FactoredInteger::normalize() {
    std::sort(factors_.begin(), factors_.end(),
              [](const PrimePower& a, const PrimePower& b) { return a.base < b.base; });
    std::vector<PrimePower> merged;
    for (const auto& f : factors_) {
        if (!merged.empty() && merged.back().base == f.base) {
            merged.back().alpha += f.alpha;
            merged.back().beta += f.beta;
        } else {
            merged.push_back(f);
        }
    }
    std::erase_if(merged, [](const PrimePower& f) { return f.alpha == 0 && f.beta == 0; });
    factors_ = std::move(merged);
}

i64 FactoredInteger::exponent_of(u64 prime, u64 p) const {
    for (const auto& f : factors_)
        if (f.base == prime) return f.exponent(p);
    return 0;
}

std::vector<u64> FactoredInteger::support(u64 p) const {
    std::vector<u64> out;
    for (const auto& f : factors_)
        if (f.exponent(p) > 0) out.push_back(f.base);
    return out;
}

bool FactoredInteger::is_one(u64 p) const { return sign_ == 1 && support(p).empty(); }

bool FactoredInteger::valid_for(u64 p) const {
    return std::all_of(factors_.begin(), factors_.end(),
                       [p](const PrimePower& f) { return f.exponent(p) >= 0; });
}

FactoredInteger FactoredInteger::times(const FactoredInteger& o) const {
    auto fs = factors_;
    fs.insert(fs.end(), o.factors_.begin(), o.factors_.end());
    return FactoredInteger(sign_ * o.sign_, std::move(fs));
}

FactoredInteger FactoredInteger::times_power(u64 base, i64 alpha, i64 beta) const {
    auto fs = factors_;
    fs.push_back({base, alpha, beta});
    return FactoredInteger(sign_, std::move(fs));
}

mpz_class FactoredInteger::materialize(u64 p) const {
    mpz_class v = sign_;
    for (const auto& f : factors_) {
        i64 e = f.exponent(p);
        if (e < 0) throw std::domain_error("materialize: negative exponent");
        mpz_class t;
        mpz_ui_pow_ui(t.get_mpz_t(), f.base, static_cast<unsigned long>(e));
        v *= t;
    }
    return v;
}

std::string FactoredInteger::to_string() const {
    std::ostringstream os;
    if (sign_ < 0) os << "-";
    if (factors_.empty()) os << "1";
    bool first = true;
    for (const auto& f : factors_) {
        if (!first) os << "*";
        first = false;
        os << f.base << "^(";
        if (f.alpha) os << f.alpha << "p";
        if (f.beta > 0 && f.alpha) os << "+";
        if (f.beta || !f.alpha) os << f.beta;
        os << ")";
    }
    return os.str();
}

u64 factored_eval_mod(const FactoredInteger& f, u64 p, u64 q) {
    u64 v = 1 % q;
    for (const auto& pp : f.factors()) {
        i64 e = pp.exponent(p);
        if (e < 0) throw std::domain_error("factored_eval_mod: negative exponent");
        if (pp.base % q == 0) {
            if (e > 0) return 0;
            continue;
        }
        // Fermat reduction; keep exponent 0 distinct from q-1
        u64 re = static_cast<u64>(e);
        if (re >= q - 1) re = (re % (q - 1)) + (q - 1);
        v = mulmod(v, powmod(pp.base, re, q), q);
    }
    if (f.sign() < 0 && v) v = q - v;
    return v;
}

LocalUnit factored_local(const FactoredInteger& f, u64 p, u64 q, u64 qt) {
    LocalUnit out{0, 1 % qt};
    for (const auto& pp : f.factors()) {
        i64 e = pp.exponent(p);
        if (pp.base == q) {
            out.val += e;
            continue;
        }
        out.unit = mulmod(out.unit, powmod(pp.base, static_cast<u64>(e), qt), qt);
    }
    if (f.sign() < 0) out.unit = (qt - out.unit) % qt;
    return out;
}

}  // namespace cubesieve
