#pragma once

// Variational treatment of the finite-dimensional bifurcation equation:
// constrained ratio optimization for m(G), scaled initialization, damped
// Newton iteration on the reduced-action gradient, and a sweep over
// minimal-period subspaces producing solutions with distinct periods.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kgs3/ls_solver.hpp"

namespace kgs3 {

struct EmptySubspace : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Stalled : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exponent of homogeneity of the leading nonlinear functional G:
// q = p+1 for p in {3,5}; q = 4 for p = 2 (quartic after one resolvent pass).
int homogeneity_q(int p);

// Kernel modes (ell = omega_j) with omega_j <= N_split and n | omega_j,
// listed as (ell, j) pairs in increasing j. Throws EmptySubspace if none.
std::vector<std::pair<long, long>> kernel_subspace_modes(const ProblemSpec& spec,
                                                         long subspace_n);

// Leading functional on the kernel sector.
//   p in {3,5}:  G(v) = 1/(p+1) * integral of v^{p+1} over space-time
//   p = 2:       G(v) = 1/2 * integral of v^2 * L_1^{-1} Pi_W(v^2)
double eval_G(const Field& v, const ProblemSpec& spec);

struct RatioEstimate {
    double m = 0.0;    // best ratio sign(G)*G(y)/|y|^q on the unit V^1 sphere
    Field y;           // maximizer, unit V^1 norm
    double witness = 0.0;  // ratio of the single lowest-mode witness
};

// Multi-restart projected-gradient optimization of the homogeneous ratio
// over the unit V^1 sphere of the n-periodic low kernel subspace.
// For p = 2 the quartic functional is negative-definite on its maximizing
// directions; the returned m is the maximum of -G (so m > 0 always).
RatioEstimate estimate_mG(const ProblemSpec& spec, long subspace_n, int restarts);

// Reduced action at v1 (range and high-kernel components solved internally)
// and its gradient as the V^1-Riesz representative, a field supported on
// the low kernel sector. An optional warm-start state is updated in place.
double eval_reduced_action(const Field& v1, const ProblemSpec& spec,
                           LSState* warm = nullptr);
Field grad_reduced_action(const Field& v1, const ProblemSpec& spec,
                          LSState* warm = nullptr);

struct MountainPassReport {
    int p = 0;
    double eps = 0.0;
    long subspace_n = 1;
    double mG = 0.0;
    Field maximizer_y;
    Field v1_star;
    LSState state;          // converged components at v1_star
    double grad_norm = 0.0; // final gradient norm in V^1
    double alphaR = 0.0;    // measured sup |dR(v)[v]| / |v|^q over the trajectory
    double action_value = 0.0;
    double residual = 0.0;  // full-equation relative residual of u*
    long minimal_divisor = 0;
    int newton_iters = 0;
    std::string note;
};

MountainPassReport find_critical_point(const ProblemSpec& spec, long subspace_n,
                                       int restarts = 10);

// Sweeps candidate divisors n; accepts a branch when its ratio strictly
// dominates every coarser subspace ratio with a 0.9 safety factor, then
// converges a critical point on it. Stops once k_star pairwise-distinct
// minimal divisors are certified or candidates are exhausted.
std::vector<MountainPassReport> multiplicity_sweep(const ProblemSpec& spec,
                                                   int k_star);

}  // namespace kgs3
