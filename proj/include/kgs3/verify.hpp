#pragma once

// Independent verification harness: exact identity checks on random fields,
// sampled space-time integrability ratios with refinement stability,
// resolvent-difference bounds, round-trip time evolution of computed orbits,
// and scaling/regularity sweeps.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kgs3/mountain_pass.hpp"

namespace kgs3 {

struct StepTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct VerifyCase {
    std::string name;
    bool passed = false;
    double margin = 0.0;  // nonnegative when passed
    std::string detail;
};

struct VerifyReport {
    std::string suite;
    std::uint64_t seed = 0;
    int cases_run = 0;
    int cases_passed = 0;
    std::vector<VerifyCase> cases;
    std::map<std::string, double> metrics;  // sampled sups, slopes, drifts, ...

    bool passed() const { return cases_run == cases_passed; }
    void add(const std::string& name, bool ok, double margin,
             const std::string& detail = "");
};

// Norm identities on kernel fields, vanishing kernel projection of spherical
// kernel squares, projector contraction, low/high frequency-cutoff smoothing
// inequalities, and the n-periodic subspace norm comparison.
VerifyReport check_exact_identities(std::uint64_t seed, int n_samples);

// Space-time integrability ratio sampling. Four inequalities are sampled on
// random normalized kernel tuples at spatial cap `cap` and at 2*cap; the
// assertable property is stability of the sampled sup under refinement
// (<= 25% change) plus the exact per-tuple integral bounds. `omega`/`gamma`
// configure the resolvent-weighted quartic variants; omega = 1 drops the
// 1/gamma weight.
VerifyReport check_strichartz(std::uint64_t seed, int n_samples, double delta,
                              int cap = 16, double omega_num = 0.0,
                              double gamma = 0.1);

// Resolvent difference bound |(L_omega^-1 - L_1^-1) w| <= 2 eps/gamma |w|_{+1}
// on random range fields, the uniform divisor margin gamma/2, and the linear
// eps-dependence of the difference.
VerifyReport check_resolvent_difference(std::uint64_t seed, int n_samples,
                                        double omega, double gamma, double eps);

// Stormer-Verlet round trip of the t=0 slice of a space-time field over
// `periods` periods T = 2 pi / omega with the given steps per period.
// With nonlinear=false integrates the free equation (calibration).
VerifyReport evolve_and_compare(const Field& u, const ProblemSpec& spec,
                                int steps_per_period, int periods = 1,
                                bool nonlinear = true);

// Fits log |v1*| vs log eps over the grid; slope target 1/(q-2).
VerifyReport scaling_sweep(const ProblemSpec& spec_template,
                           const std::vector<double>& eps_grid);

// Literal truncated-field bound |v1|_{V^{r+s}} <= N^{r+s-1} |v1|_{V^1} and
// the growth profile of the other components across the (r,s) grid.
VerifyReport regularity_sweep(const LSState& st,
                              const std::vector<std::pair<double, double>>& rs_grid,
                              int N);

}  // namespace kgs3
