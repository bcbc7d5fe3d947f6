#pragma once

#include <functional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "cubesieve/arith.hpp"

namespace cubesieve {

// y^2 = x^3 + a4 x + a6
struct Weierstrass {
    mpq_class a4, a6;
    static Weierstrass E_r(const mpz_class& r) { return {mpq_class(20 * r * r), 0}; }
    static Weierstrass E_mordell() { return {0, -1125}; }
};

struct EllipticPoint {
    mpq_class X, Y;
    bool infinity = false;
    bool operator==(const EllipticPoint& o) const {
        return infinity == o.infinity && (infinity || (X == o.X && Y == o.Y));
    }
};

bool on_curve(const Weierstrass& E, const EllipticPoint& P);
EllipticPoint ec_add(const Weierstrass& E, const EllipticPoint& P, const EllipticPoint& Q);
EllipticPoint ec_mul(const Weierstrass& E, EllipticPoint P, u64 n);

struct SolutionTriple {
    mpz_class x, y, r;
    int p;
    bool satisfies() const;  // 9x(x^2 + 20 r^2) = y^p
};

struct P2Point {
    mpz_class r;
    EllipticPoint point;
};
P2Point p2_point(i64 A, i64 B);
SolutionTriple p2_solution(i64 A, i64 B);

struct MNSolution {
    SolutionTriple triple;
    EllipticPoint point;
    mpz_class gcd_xr;
};
MNSolution p2_mn_solution(i64 M, i64 N);

// integer polynomial, coefficient i multiplies x^i
using ZPoly = std::vector<mpz_class>;
ZPoly division_poly3(const mpz_class& A, const mpz_class& B);
ZPoly division_poly4_reduced(const mpz_class& A, const mpz_class& B);  // psi_4 / (2y)
ZPoly division_poly5(const mpz_class& A, const mpz_class& B);
std::vector<mpq_class> rational_roots(const ZPoly& f);

std::vector<EllipticPoint> torsion_subgroup(const mpz_class& r);

EllipticPoint p3_map(const mpz_class& x, const mpz_class& y, const mpz_class& r);
SolutionTriple p3_integer_point(u64 n);

// a σ^p - b τ^p = c r^2 with |σ|, |τ| <= bound and rmin <= r <= rmax
struct ThueSolution {
    mpz_class sigma, tau;
    u64 r;
    bool operator==(const ThueSolution& o) const { return sigma == o.sigma && tau == o.tau && r == o.r; }
};
std::vector<ThueSolution> thue_bruteforce(const mpz_class& a, const mpz_class& b, const mpz_class& c, u64 p, u64 rmin,
                                          u64 rmax, i64 bound, bool square_tau,
                                          const std::function<bool(u64)>& r_filter = nullptr);

struct P7Solution {
    u64 w2;
    u64 X;
    u64 r;
    mpz_class x;
    std::string reason;  // why it is not a genuine solution, empty for a counterexample
};
struct P7Verdict {
    int case_id;
    bool eliminated;
    std::vector<P7Solution> solutions;
};
P7Verdict p7_eliminate(int case_id);

struct ChabautyRow {
    int case_id;
    i64 k;                 // Y = k r / w1^5, X = w2 / w1^2
    mpz_class alpha, beta;  // Y^2 = alpha X^5 - beta
    mpz_class printed_beta;  // constant as it is usually quoted for this model
    std::vector<EllipticPoint> points;  // affine points listed
    bool model_ok = false;
    bool points_ok = false;
    std::string note;
};
struct ChabautyReport {
    std::vector<ChabautyRow> rows;
    bool ok = false;
};
ChabautyReport chabauty_check(int instantiations = 20);

}  // namespace cubesieve
