#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cubesieve/arith.hpp"

namespace cubesieve {

enum class TwoAdic { Odd, Exactly2, By4 };

struct XCondition {
    bool three;
    TwoAdic two;
    bool five;
    bool holds(i64 x) const;
    std::string describe() const;
};

// C1 X^2 + C2 r^2 = w2^p with x = x_scale * X
struct PatelData {
    u64 C1;
    u64 C2_coeff;
    bool d_is_2r;
    u64 x_scale;
};

struct DescentCase {
    int id;
    XCondition x;
    std::vector<u64> r_forbidden;
    FactoredInteger a;  // coefficient of w2^p
    FactoredInteger b;  // coefficient of w1^(2p)
    u64 rhs;
    std::optional<PatelData> patel;
    u64 norm_multiplier;
    u64 a_norm;
    u64 b_norm;
    int fixed_bound;  // 2 for the parity cases, 0 otherwise
};

const std::array<DescentCase, 12>& descent_cases();
const DescentCase& descent_case(int id);

int classify_x(i64 x);
bool admissible_r(int case_id, u64 r);

// a w2^p - b w1^(2p) = rhs r^2
struct TernaryEquation {
    int case_id;
    u64 p;
    u64 r;
    FactoredInteger a;
    FactoredInteger b;
    u64 rhs;
    u64 c_rhs() const { return rhs * r * r; }
};

TernaryEquation instantiate_ternary(int case_id, u64 p, u64 r);

double mignotte_bound_real(int case_id, u64 rmax);
u64 mignotte_bound(int case_id, u64 rmax);

}  // namespace cubesieve
