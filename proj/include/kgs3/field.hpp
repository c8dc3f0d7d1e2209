//==============================================================================
// field.hpp
// Time–space spectral fields u(t,x) = Σ_{ℓ,j} u_{ℓ,j} cos(ℓt) e_j(x) (even in
// time, real), their Sobolev norms, sector projectors, the linear operators
// A, A⁻¹ and L_ω⁻¹, dealiased nonlinear products, period-subspace
// restrictions and CSV serialization.
//
// Conventions fixed here once:
//  * Synthesis u = Σ u_{ℓ,j} cos(ℓt) e_j; since ∫cos²(ℓt) d̄t equals 1 for
//    ℓ ≥ 1 but 2 for ℓ = 0, the analysis coefficient at ℓ = 0 is half the
//    plain inner product. Synthesis and analysis are exact inverses.
//  * The resolvent is defined through its Fourier divisor only: L_ω acts on
//    cos(ℓt)e_j as multiplication by (ω²ℓ² − ω_j²), and the solver formulas
//    use L_ω⁻¹ exclusively.
//  * Products are Galerkin: dealiased collocation followed by projection back
//    onto the truncation (time grid M ≥ p·Lmax+1; spatial quadrature exact for
//    the configured product degree).
//==============================================================================
#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgs3/basis.hpp"

namespace kgs3 {

struct Truncation {
    int Lmax = 64;    // max time frequency
    int Jmax = 32;    // max spatial mode index
    int N_split = 8;  // kernel low/high frequency cutoff
    bool operator==(const Truncation&) const = default;
};

enum class Sector { V, W, VlowN, VhighN };

struct BasisMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct KernelOverlap : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SmallDivisor : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Field {
public:
    Field() = default;
    Field(std::shared_ptr<const SpatialBasis> basis, Truncation trunc);

    const SpatialBasis& basis() const { return *basis_; }
    const std::shared_ptr<const SpatialBasis>& basis_ptr() const { return basis_; }
    const Truncation& trunc() const { return trunc_; }
    int Lmax() const { return trunc_.Lmax; }
    int Jmax() const { return trunc_.Jmax; }

    double& at(int l, int j) { return c_[idx(l, j)]; }
    double at(int l, int j) const { return c_[idx(l, j)]; }
    const std::vector<double>& coeffs() const { return c_; }
    std::vector<double>& coeffs() { return c_; }

    bool same_layout(const Field& o) const {
        return basis_ == o.basis_ && trunc_ == o.trunc_;
    }

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(double a);
    friend Field operator+(Field a, const Field& b) { return a += b; }
    friend Field operator-(Field a, const Field& b) { return a -= b; }
    friend Field operator*(double a, Field f) { return f *= a; }

    double max_abs_coeff() const;

private:
    std::size_t idx(int l, int j) const {
        return static_cast<std::size_t>(l) * static_cast<std::size_t>(trunc_.Jmax + 1) +
               static_cast<std::size_t>(j);
    }
    std::shared_ptr<const SpatialBasis> basis_;
    Truncation trunc_;
    std::vector<double> c_;
};

// ‖u‖_{H^r_t H^s_z} = (Σ_ℓ ⟨ℓ⟩^{2r} Σ_j ω_j^{2s} |u_{ℓ,j}|²)^{1/2}, ⟨ℓ⟩ = max{1,|ℓ|}.
double norm_HrHs(const Field& u, double r, double s);
// Kernel norm ‖v‖_{V^s}: same sum restricted to kernel modes with weight ω_j^{2s}
// (for kernel fields norm_HrHs depends only on r+s and equals norm_V at s = r+s).
double norm_V(const Field& u, double s);

bool is_kernel_mode(const SpatialBasis& B, int l, int j);
Field project(const Field& u, Sector sec);

Field apply_A(const Field& u);      // multiply column j by ω_j²
Field apply_A_inv(const Field& u);  // divide column j by ω_j²

// Divide each coefficient by (ω²ℓ² − ω_j²). Throws KernelOverlap if a nonzero
// coefficient sits at ℓ = ω_j, SmallDivisor if a used divisor is below the floor.
Field apply_Lomega_inv(const Field& w, double omega, double divisor_floor = 1e-12);
// Multiply each coefficient by (ω²ℓ² − ω_j²) (spectral action of L_ω).
Field apply_Lomega(const Field& u, double omega);

// Dealiased Galerkin product/power via collocation.
Field multiply(const Field& u1, const Field& u2);
Field power(const Field& u, int p);
// Spherical-only exact convolution path (cosine product identity × the exact
// eigenfunction product rule); agrees with `multiply` on retained modes.
Field multiply_convolution(const Field& u1, const Field& u2);

// ∫∫ u d̄t (weighted d̄x): 2 × the (ℓ=0, j=0) coefficient.
double integral_spacetime(const Field& u);
// ∫∫ u1·u2 under the same measures, computed spectrally (mass 2 at ℓ=0).
double inner_L2(const Field& u1, const Field& u2);

// Keep kernel modes whose time frequency is divisible by n.
Field restrict_to_period_subspace(const Field& v, int n);
// gcd of active time frequencies (0 absorbing: a constant field returns 0,
// meaning "every period"); the minimal period is 2π/g.
int minimal_period_divisor(const Field& u, double rel_threshold = 1e-9);

// Collocation grids / transforms (exposed for the evolution integrator and G).
struct TimeGrid {
    int M = 0;                     // panels on [0,π]; nodes t_k = πk/M, k = 0..M
    std::vector<double> nodes;
    std::vector<double> weights;  // trapezoid weights for ∫ d̄t over the period (mass 2)
    static TimeGrid make(int M);
};
// values[k][q] layout: (M+1) × n_nodes, flattened row-major.
std::vector<double> synthesize(const Field& u, const TimeGrid& tg);
Field analyze(const std::vector<double>& values, const TimeGrid& tg,
              std::shared_ptr<const SpatialBasis> basis, Truncation trunc);

// CSV round-trip: header "ell,j,coeff", 17 significant digits, bit-exact.
std::string to_csv(const Field& u);
Field from_csv(const std::string& csv, std::shared_ptr<const SpatialBasis> basis,
               Truncation trunc);
// Real-space samples "t,x,u" on a uniform plot grid.
std::string realspace_csv(const Field& u, int nt, int nx);

}  // namespace kgs3
