#include "cubesieve/descent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cubesieve {

bool XCondition::holds(i64 x) const {
    if (x == 0) return false;
    bool d3 = x % 3 == 0, d5 = x % 5 == 0;
    TwoAdic t = x % 2 != 0 ? TwoAdic::Odd : (x % 4 != 0 ? TwoAdic::Exactly2 : TwoAdic::By4);
    return d3 == three && d5 == five && t == two;
}

std::string XCondition::describe() const {
    std::string s = three ? "3|x" : "3∤x";
    switch (two) {
        case TwoAdic::Odd: s += ", x odd"; break;
        case TwoAdic::Exactly2: s += ", 2||x"; break;
        case TwoAdic::By4: s += ", 4|x"; break;
    }
    s += five ? ", 5|x" : ", 5∤x";
    return s;
}

namespace {

FactoredInteger fi(std::vector<PrimePower> f) { return FactoredInteger(1, std::move(f)); }

std::array<DescentCase, 12> build_cases() {
    using T = TwoAdic;
    const PrimePower three2{3, 2, -4}, five2{5, 2, -3}, two6{2, 2, -6}, two3{2, 2, -3}, three1{3, 1, -2};
    std::array<DescentCase, 12> c{{
        {1, {true, T::Odd, false}, {3}, fi({}), fi({three2}), 20, PatelData{1, 20, true, 1}, 81, 81, 1, 0},
        {2, {true, T::Odd, true}, {3, 5}, fi({}), fi({three2, five2}), 4, PatelData{5, 4, true, 5}, 10125, 10125, 1, 0},
        {3, {true, T::By4, false}, {2, 3}, fi({}), fi({two6, three2}), 5, PatelData{1, 5, false, 2}, 5184, 5184, 1, 0},
        {4, {true, T::By4, true}, {2, 3, 5}, fi({}), fi({two6, three2, five2}), 1, PatelData{5, 1, false, 10}, 648000, 648000, 1, 0},
        {5, {false, T::Odd, true}, {3, 5}, fi({three1}), fi({five2}), 4, std::nullopt, 1125, 125, 9, 0},
        {6, {false, T::By4, true}, {2, 3, 5}, fi({three1}), fi({two6, five2}), 1, std::nullopt, 72000, 8000, 9, 0},
        {7, {false, T::By4, false}, {2, 3}, fi({three1}), fi({two6}), 5, std::nullopt, 576, 64, 9, 0},
        {8, {false, T::Odd, false}, {3}, fi({three1}), fi({}), 20, std::nullopt, 9, 1, 9, 0},
        {9, {true, T::Exactly2, false}, {}, fi({}), fi({two3, three2}), 10, std::nullopt, 0, 0, 0, 2},
        {10, {true, T::Exactly2, true}, {}, fi({}), fi({two3, three2, five2}), 2, std::nullopt, 0, 0, 0, 2},
        {11, {false, T::Exactly2, true}, {}, fi({three1}), fi({two3, five2}), 2, std::nullopt, 0, 0, 0, 2},
        {12, {false, T::Exactly2, false}, {}, fi({three1}), fi({two3}), 10, std::nullopt, 0, 0, 0, 2},
    }};
    return c;
}

}  // namespace

const std::array<DescentCase, 12>& descent_cases() {
    static const std::array<DescentCase, 12> cases = build_cases();
    return cases;
}

const DescentCase& descent_case(int id) {
    if (id < 1 || id > 12) throw std::out_of_range("descent case id must be in 1..12");
    return descent_cases()[id - 1];
}

int classify_x(i64 x) {
    if (x == 0) throw std::domain_error("classify_x: x = 0");
    for (const auto& c : descent_cases())
        if (c.x.holds(x)) return c.id;
    throw std::logic_error("classify_x: no case matched");
}

bool admissible_r(int case_id, u64 r) {
    if (r == 0) return false;
    const auto& c = descent_case(case_id);
    return std::none_of(c.r_forbidden.begin(), c.r_forbidden.end(), [r](u64 q) { return r % q == 0; });
}

TernaryEquation instantiate_ternary(int case_id, u64 p, u64 r) {
    const auto& c = descent_case(case_id);
    if (c.fixed_bound && p > static_cast<u64>(c.fixed_bound))
        throw std::domain_error("case " + std::to_string(case_id) + " only allows p <= 2");
    if (p < 5 || !is_prime(p)) throw std::domain_error("instantiate_ternary: p must be a prime >= 5");
    if (!admissible_r(case_id, r)) throw std::domain_error("instantiate_ternary: r not admissible");
    return {case_id, p, r, c.a, c.b, c.rhs};
}

double mignotte_bound_real(int case_id, u64 rmax) {
    const auto& c = descent_case(case_id);
    if (c.fixed_bound) return c.fixed_bound;
    const double a = static_cast<double>(c.a_norm), b = static_cast<double>(c.b_norm);
    const double cmax = static_cast<double>(c.norm_multiplier) * static_cast<double>(c.rhs) *
                        static_cast<double>(rmax) * static_cast<double>(rmax);
    const double A = std::max({a, b, 3.0});
    const double t1 = 3.0 * std::log(1.5 * cmax / b);
    const double lA = std::log(A);
    const double t2 = 7400.0 * lA / std::log(1.0 + lA / std::fabs(std::log(a / b)));
    return std::max(t1, t2);
}

u64 mignotte_bound(int case_id, u64 rmax) {
    return static_cast<u64>(std::ceil(mignotte_bound_real(case_id, rmax)));
}

}  // namespace cubesieve
