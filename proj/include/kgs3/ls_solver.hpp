//==============================================================================
// ls_solver.hpp
// Fixed-point contraction solvers for the Lyapunov–Schmidt split of
//   L_ω u = u^p,  u = v₁ + v₂ + w,  ω² = 1 + ςε,
// where v₁ lives on kernel modes with frequency ≤ N, v₂ on kernel modes with
// frequency > N, and w on the range. Spectrally, L_ω multiplies cos(ℓt)e_j by
// (ω²ℓ² − ω_j²), which equals ςε ω_j² on kernel modes, so
//   v₂ = (ςε)⁻¹ A⁻¹ Π_{V>N}(u^p),    w = L_ω⁻¹ Π_W(u^p).
// For p = 2 the quadratic kernel degeneracy (Π_V of a kernel square vanishes)
// makes the translated unknown w̃ := w − L_ω⁻¹Π_W((v₁+v₂)²) the contracting
// variable; the solver iterates w̃ and reports the reconstructed w.
// The two equations are solved by alternating Gauss–Seidel sweeps with a joint
// stopping rule (both spectral residuals below fp_tol).
//==============================================================================
#pragma once

#include <memory>
#include <optional>

#include "kgs3/diophantine.hpp"
#include "kgs3/field.hpp"

namespace kgs3 {

struct Tolerances {
    double fp_tol = 1e-12;           // relative to the nonlinear forcing norm
    int max_iter = 400;
    double divergence_factor = 1e3;  // iterate-norm blowup guard
    double divisor_floor = 1e-12;
    double grad_tol = 1e-10;         // kernel-block residual, relative to forcing
};

struct Diverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ProblemSpec {
    int p = 5;                       // nonlinearity degree ∈ {2, 3, 5}
    BasisKind kind = BasisKind::spherical();
    double eps = 1e-3;
    double omega = 0.0;              // √(1+ςε); filled by finalize()
    double gamma = 0.1;
    double R = 1.0;
    Truncation trunc;
    Tolerances tol;
    double delta = 0.01;             // Sobolev-index offset for ball norms
    double c2 = 10.0, c3 = 10.0;     // ball-radius prefactors
    std::shared_ptr<const SpatialBasis> basis;

    int sigma() const { return sigma_of_p(p); }
    // ball radii (ρ₁, ρ₂, ρ₃) per nonlinearity degree, diagnostics only
    double rho1() const;
    double rho2() const;
    double rho3() const;
    double N_as_double() const { return static_cast<double>(trunc.N_split); }

    // Builds the basis, computes ω from ε, and validates the configuration
    // (including the Diophantine check at horizon ≥ Lmax).
    void finalize(long ell_max = 0);
};

struct LSState {
    Field v1, v2, w;
    Field wtilde;        // p = 2 only: translated range unknown (else zero)
    double res_v2 = 0.0; // spectral residual of the high-kernel equation
    double res_w = 0.0;  // spectral residual of the range equation
    int iters = 0;
};

// One full fixed-point solve of the high-kernel map at frozen (v₁, w).
// For p = 2 the `w` argument is the translated unknown w̃.
Field solve_v2(const Field& v1, const Field& w, const ProblemSpec& spec);

// Simultaneous fixed point of the (v₂, w) system at given v₁ by alternating
// sweeps; `warm` optionally seeds the iteration from a previous solution.
LSState solve_range(const Field& v1, const ProblemSpec& spec,
                    const LSState* warm = nullptr);

// ‖L_ω u − u^p‖_{H⁰H⁰} / ‖u^p‖_{H⁰H⁰} over the truncation — the single
// source of truth for "is u a solution".
double residual_full(const Field& u, const ProblemSpec& spec);

}  // namespace kgs3
