#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubesieve/quadfield.hpp"
#include "cubesieve/sieves.hpp"

namespace cubesieve {

// s κ^p + n sqrt(-m) = ε η^p with R λ^p = (s κ^p)^2 + n^2 m
struct DescentSetup {
    u64 Eprime;
    FactoredInteger s;
    FactoredInteger R;  // norm coefficient D E'
    u64 m;
    u64 n;
    std::vector<u64> G_primes;  // rational primes below the ideal set
};

DescentSetup descent_setup(const CoprimeForm& f);

struct NfDescentResult {
    bool eliminated = false;
    bool inconclusive = false;
    std::string reason;
    u64 m = 0;
    mpz_class selmer_size = 0;  // |E|
    mpz_class after_valuation = 0;
    std::vector<u64> q_used;   // distinct auxiliary primes used by the character test
    std::vector<u64> survivor_exps;  // first unresolved candidate
};

NfDescentResult nfdescent_eliminates(const CoprimeForm& f, u64 kmax = 1000, std::size_t cap = 200000);

}  // namespace cubesieve
