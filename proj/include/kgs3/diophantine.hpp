//==============================================================================
// diophantine.hpp
// Membership tests for the Diophantine frequency set
//   Ω_γ = { ω : |ωℓ − j| ≥ γ/ℓ for all integers ℓ ≥ 1, j ≥ 0, ℓ ≠ j }
// certified exhaustively up to a finite horizon ell_max (every divisor the
// solver forms lives below the horizon), admissible-ε grids via ω² = 1 + ςε,
// and the resolvent margin min |ω²ℓ² − ω_j²| over range modes.
//==============================================================================
#pragma once

#include <vector>

#include "kgs3/field.hpp"

namespace kgs3 {

struct FrequencyCheck {
    double omega = 0.0;
    double gamma = 0.0;
    long ell_max = 0;         // finite certification horizon
    double margin = 0.0;      // min over checked pairs of |ωℓ−j| − γ/ℓ
    bool passed = false;      // margin ≥ 0
    long worst_ell = 0;       // pair attaining the margin
    long worst_j = 0;
};

FrequencyCheck in_omega_gamma(double omega, double gamma, long ell_max);

struct EpsOmega {
    double eps = 0.0;
    double omega = 0.0;
};

struct EmptyGrid : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Log-uniform ε samples mapped through ω_ε = √(1+ςε) (ς = −1 for p=2, +1 for
// p = 3, 5), filtered by the Ω_γ check. Throws EmptyGrid if nothing passes.
std::vector<EpsOmega> admissible_eps_grid(int p, double gamma, double eps_min,
                                          double eps_max, int count, long ell_max);

// ς for the frequency–amplitude link ω² = 1 + ςε.
int sigma_of_p(int p);

// min over represented non-kernel (ℓ,j) modes of |ω²ℓ² − ω_j²|.
double resolvent_margin(double omega, const SpatialBasis& basis, const Truncation& trunc);

}  // namespace kgs3
