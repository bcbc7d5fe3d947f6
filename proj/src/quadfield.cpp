#include "cubesieve/quadfield.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cubesieve {

QuadField QuadField::make(i64 m) {
    if (m < 1) throw std::domain_error("QuadField: m must be positive");
    if (squarefree_decompose(static_cast<u64>(m)).d != 1) throw std::domain_error("QuadField: m must be squarefree");
    QuadField K{};
    K.m = m;
    K.half = m % 4 == 3;
    K.disc = K.half ? -m : -4 * m;
    K.c0 = K.half ? (1 + m) / 4 : 0;
    K.roots_of_unity = m == 1 ? 4 : (m == 3 ? 6 : 2);
    return K;
}

ClassGroup class_group(i64 disc) {
    if (disc >= 0 || (((disc % 4) + 4) % 4 != 0 && ((disc % 4) + 4) % 4 != 1))
        throw std::domain_error("class_group: discriminant must be negative and 0 or 1 mod 4");
    static std::mutex mu;
    static std::map<i64, ClassGroup> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(disc);
        if (it != cache.end()) return it->second;
    }
    ClassGroup g;
    const i64 D = -disc;
    for (i64 a = 1; 3 * a * a <= D; ++a) {
        for (i64 b = -a + 1; b <= a; ++b) {
            if (((b - disc) % 2 + 2) % 2 != 0) continue;
            i64 num = b * b - disc;
            if (num % (4 * a) != 0) continue;
            i64 c = num / (4 * a);
            if (c < a) continue;
            if (b < 0 && a == c) continue;
            if (std::gcd(std::gcd(a, b < 0 ? -b : b), c) != 1) continue;
            g.forms.push_back({a, b, c});
        }
    }
    g.h = g.forms.size();
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(disc, g);
    return g;
}

u64 class_number(i64 disc) { return class_group(disc).h; }

QElem qmul(const QuadField& K, const QElem& a, const QElem& b) {
    mpz_class yy = a.y * b.y;
    if (K.half) return {a.x * b.x - K.c0 * yy, a.x * b.y + a.y * b.x + yy};
    return {a.x * b.x - K.m * yy, a.x * b.y + a.y * b.x};
}

QElem qconj(const QuadField& K, const QElem& a) {
    if (K.half) return {a.x + a.y, -a.y};
    return {a.x, -a.y};
}

mpz_class qnorm(const QuadField& K, const QElem& a) {
    if (K.half) return a.x * a.x + a.x * a.y + K.c0 * a.y * a.y;
    return a.x * a.x + K.m * a.y * a.y;
}

QElem qpow(const QuadField& K, QElem a, u64 e) {
    QElem r{1, 0};
    while (e) {
        if (e & 1) r = qmul(K, r, a);
        a = qmul(K, a, a);
        e >>= 1;
    }
    return r;
}

QElem sqrt_minus_m(const QuadField& K) { return K.half ? QElem{-1, 2} : QElem{0, 1}; }

Ideal ideal_from_generators(const std::vector<QElem>& gens) {
    mpz_class ax = 0;  // gcd of x over vectors with y = 0
    QElem piv{0, 0};
    for (QElem v : gens) {
        while (v.y != 0) {
            if (piv.y == 0) {
                std::swap(piv, v);
                break;
            }
            mpz_class q;
            mpz_fdiv_q(q.get_mpz_t(), piv.y.get_mpz_t(), v.y.get_mpz_t());
            piv.x -= q * v.x;
            piv.y -= q * v.y;
            std::swap(piv, v);
            if (ax != 0) {
                piv.x %= ax;
                v.x %= ax;
            }
        }
        if (v.y == 0 && v.x != 0) {
            mpz_class t = abs(v.x);
            ax = gcd(ax, t);
        }
    }
    if (piv.y == 0 || ax == 0) throw std::domain_error("ideal_from_generators: not a full lattice");
    if (piv.y < 0) {
        piv.x = -piv.x;
        piv.y = -piv.y;
    }
    Ideal I{ax, piv.x, piv.y};
    mpz_fdiv_r(I.b.get_mpz_t(), I.b.get_mpz_t(), I.a.get_mpz_t());
    return I;
}

Ideal ideal_mul(const QuadField& K, const Ideal& I, const Ideal& J) {
    QElem i1{I.a, 0}, i2{I.b, I.c}, j1{J.a, 0}, j2{J.b, J.c};
    return ideal_from_generators({qmul(K, i1, j1), qmul(K, i1, j2), qmul(K, i2, j1), qmul(K, i2, j2)});
}

Ideal ideal_pow(const QuadField& K, const Ideal& I, u64 e) {
    Ideal r{1, 0, 1};
    Ideal b = I;
    while (e) {
        if (e & 1) r = ideal_mul(K, r, b);
        e >>= 1;
        if (e) b = ideal_mul(K, b, b);
    }
    return r;
}

bool ideal_contains(const Ideal& I, const QElem& a) {
    if (a.y % I.c != 0) return false;
    mpz_class k = a.y / I.c;
    mpz_class rest = a.x - k * I.b;
    return rest % I.a == 0;
}

Ideal principal_ideal(const QuadField& K, const QElem& g) {
    return ideal_from_generators({g, qmul(K, g, QElem{0, 1})});
}

std::optional<QElem> principal_generator(const QuadField& K, const Ideal& I) {
    QElem u{I.a, 0}, v{I.b, I.c};
    auto Q = [&](const QElem& e) -> mpz_class { return qnorm(K, e); };
    auto B2 = [&](const QElem& x, const QElem& y) -> mpz_class {
        QElem s{x.x + y.x, x.y + y.y};
        return Q(s) - Q(x) - Q(y);
    };
    if (Q(u) > Q(v)) std::swap(u, v);
    for (;;) {
        mpz_class num = B2(u, v), den = 2 * Q(u);
        // nearest integer to num/den
        mpz_class mu;
        mpz_class twice = 2 * num + den;
        mpz_fdiv_q(mu.get_mpz_t(), twice.get_mpz_t(), mpz_class(2 * den).get_mpz_t());
        v.x -= mu * u.x;
        v.y -= mu * u.y;
        if (Q(v) < Q(u))
            std::swap(u, v);
        else
            break;
    }
    if (Q(u) == I.norm()) return u;
    return std::nullopt;
}

Ideal PrimeIdeal::ideal() const {
    if (kind == SplitKind::Inert) return {mpz_class(ell), 0, mpz_class(ell)};
    return {mpz_class(ell), mpz_class((ell - rho % ell) % ell), 1};
}

std::string PrimeIdeal::describe() const {
    std::ostringstream os;
    os << "(" << ell;
    if (kind != SplitKind::Inert) os << ", w-" << rho;
    os << ")";
    return os.str();
}

namespace {

// roots of the minimal polynomial of ω modulo an odd prime q
std::vector<u64> omega_roots(const QuadField& K, u64 q) {
    u64 mq = static_cast<u64>(K.m) % q;
    u64 negm = (q - mq) % q;
    if (jacobi(static_cast<i64>(negm), q) == -1) return {};
    u64 t = sqrt_mod(negm, q);
    std::vector<u64> roots;
    if (K.half) {
        u64 inv2 = (q + 1) / 2;
        roots = {mulmod((1 + t) % q, inv2, q), mulmod((1 + q - t) % q, inv2, q)};
    } else {
        roots = {t, (q - t) % q};
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

}  // namespace

Splitting split_prime(const QuadField& K, u64 q) {
    Splitting s;
    if (q == 2) {
        if (!K.half) {
            s.kind = SplitKind::Ramified;
            s.ideals.push_back({2, SplitKind::Ramified, static_cast<u64>(K.m % 2), 1, 2});
        } else if (K.c0 % 2 == 0) {
            s.kind = SplitKind::Split;
            s.ideals.push_back({2, SplitKind::Split, 0, 1, 1});
            s.ideals.push_back({2, SplitKind::Split, 1, 1, 1});
        } else {
            s.kind = SplitKind::Inert;
            s.ideals.push_back({2, SplitKind::Inert, 0, 2, 1});
        }
        return s;
    }
    int k = kronecker(K.disc, q);
    if (k == -1) {
        s.kind = SplitKind::Inert;
        s.ideals.push_back({q, SplitKind::Inert, 0, 2, 1});
        return s;
    }
    auto roots = omega_roots(K, q);
    if (k == 0) {
        s.kind = SplitKind::Ramified;
        s.ideals.push_back({q, SplitKind::Ramified, roots.at(0), 1, 2});
    } else {
        s.kind = SplitKind::Split;
        for (u64 r : roots) s.ideals.push_back({q, SplitKind::Split, r, 1, 1});
    }
    return s;
}

PrimeIdeal prime_conj(const QuadField& K, const PrimeIdeal& P) {
    if (P.kind != SplitKind::Split) return P;
    PrimeIdeal Q = P;
    u64 l = P.ell;
    // conjugate root: -rho, or 1 - rho when ω = (1+sqrt(-m))/2
    Q.rho = K.half ? (1 + l - P.rho % l) % l : (l - P.rho % l) % l;
    return Q;
}

int prime_valuation(const QuadField& K, const PrimeIdeal& P, QElem a) {
    if (a.x == 0 && a.y == 0) throw std::domain_error("prime_valuation of zero");
    const mpz_class l(P.ell);
    if (P.kind == SplitKind::Inert) {
        int v = 0;
        while (a.x % l == 0 && a.y % l == 0) {
            a.x /= l;
            a.y /= l;
            ++v;
        }
        return v;
    }
    // tau lies in the conjugate of P; for a ramified prime, choose rho with ord_P(ω - rho) = 1
    mpz_class rho(P.rho);
    {
        QElem w{-rho, 1};
        if (P.kind == SplitKind::Ramified && qnorm(K, w) % (l * l) == 0) rho += l;
    }
    QElem tau = qconj(K, QElem{-rho, 1});
    int v = 0;
    for (;;) {
        mpz_class t = a.x + a.y * rho;
        if (t % l != 0) return v;
        a = qmul(K, a, tau);
        a.x /= l;
        a.y /= l;
        ++v;
    }
}

int prime_valuation_int(const PrimeIdeal& P, u64 n) { return P.e * valuation(n, P.ell); }

int prime_valuation_sqrt(const QuadField& K, const PrimeIdeal& P) {
    if (P.kind != SplitKind::Ramified) return 0;
    return static_cast<u64>(K.m) % P.ell == 0 ? 1 : 0;
}

ClassOrder prime_class_order(const QuadField& K, const PrimeIdeal& P) {
    Ideal I = P.ideal();
    Ideal cur = I;
    u64 h = class_number(K.disc);
    for (u64 o = 1; o <= h; ++o) {
        if (auto g = principal_generator(K, cur)) return {static_cast<int>(o), *g};
        cur = ideal_mul(K, cur, I);
    }
    throw std::logic_error("prime_class_order: order exceeds class number");
}

std::pair<u64, u64> omega_images(const QuadField& K, u64 q) {
    auto r = omega_roots(K, q);
    if (r.size() != 2) throw std::domain_error("omega_images: q does not split");
    return {r[0], r[1]};
}

u64 elem_mod(const QElem& a, u64 omega_image, u64 q) {
    mpz_class v = a.x + a.y * mpz_class(omega_image);
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), mpz_class(q).get_mpz_t());
    return r.get_ui();
}

}  // namespace cubesieve
