//==============================================================================
// basis.hpp
// Spatial eigenbases on S³ for the two symmetry classes, their quadrature
// rules, and the exact (rational/integer) time and space integral formulas.
//
// Spherically symmetric class: e_n(x) = sin((n+1)x)/sin(x) on (0,π), which is
// the Chebyshev polynomial U_n(cos x); eigenfrequency ω_n = n+1 and the
// normalized measure d̄x = (2/π)dx with weight sin²x has total mass 1.
//
// Hopf class (momenta μ₁, μ₂): e_j(η) = N_j (1−cos2η)^{|μ₁|/2}
// (1+cos2η)^{|μ₂|/2} P_j^{(|μ₁|,|μ₂|)}(cos 2η) on (0,π/2), eigenfrequency
// ω_j = 2j+1+|μ₁|+|μ₂|; measure sin(2η)dη, total mass 1. The normalization
// N_j is fixed numerically from the quadrature norm (no closed form is used).
//==============================================================================
#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace kgs3 {

struct BasisKind {
    enum class Type { Spherical, Hopf };
    Type type = Type::Spherical;
    int mu1 = 0;  // Hopf momentum (sign irrelevant; |μ₁| is used)
    int mu2 = 0;

    static BasisKind spherical() { return BasisKind{Type::Spherical, 0, 0}; }
    static BasisKind hopf(int m1, int m2) { return BasisKind{Type::Hopf, m1, m2}; }

    bool is_spherical() const { return type == Type::Spherical; }
    // μ̲ := |μ₁| + |μ₂| + 1, the lowest eigenfrequency of the Hopf class.
    int mu_underline() const;
    bool operator==(const BasisKind&) const = default;
};

// Exact integer eigenfrequency ω_j (its square is the A-eigenvalue).
long omega(const BasisKind& kind, int j);

// e_n(x) = sin((n+1)x)/sin(x) with the removable singularities at x ∈ {0,π}
// evaluated by their analytic limits (n+1) and (n+1)(−1)ⁿ.
double eval_spherical_e(int n, double x);

// Jacobi polynomial P_j^{(a,b)}(x) by the three-term recurrence, plus first
// and second derivatives (via d/dx P_j^{(a,b)} = (j+a+b+1)/2 P_{j-1}^{(a+1,b+1)}).
double jacobi_poly(int j, int a, int b, double x);
double jacobi_poly_deriv(int j, int a, int b, double x);
double jacobi_poly_deriv2(int j, int a, int b, double x);

// Normalized Hopf eigenfunction e_j^{(μ₁,μ₂)}(η).
double eval_hopf_e(int j, int mu1, int mu2, double eta);

// Value together with ∂_η and ∂²_η, used for eigen-equation residual checks.
struct HopfEval {
    double value;
    double deta;
    double deta2;
};
HopfEval eval_hopf_e_derivs(int j, int mu1, int mu2, double eta);

// The m+1 indices of the exact spherical product expansion
// e_n e_m = Σ_{k=0}^{m} e_{n−m+2k} (indices swapped internally so n ≥ m).
std::vector<int> product_rule_indices(int n, int m);

// Exact rational value of ∫_T Π cos(ℓ_k t) d̄t with d̄t = dt/π (total mass 2):
// 2^{1−q} · #{σ ∈ {±1}^q : σ·ℓ = 0}, computed in integer arithmetic.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rational&) const = default;
};
Rational integral_time_product(const std::vector<long>& freqs);

// Exact integer values of the spherical eigenfunction integrals
//   ∫₀^π e_{j₁}…e_{j₆} sin²x d̄x  and  ∫₀^π e_{j₁}…e_{j₄} sin²x d̄x,
// computed by expanding triples (resp. pairs) with the product rule and
// matching indices through orthonormality. Bounds: 0 ≤ I₆ ≤ ω_min ω_min₂ ω_min₃
// and 0 ≤ I₄ ≤ ω_min, where ω_min… are the smallest eigenfrequencies involved.
std::int64_t integral_space6(const std::array<int, 6>& j);
std::int64_t integral_space4(const std::array<int, 4>& j);

// Coefficient expansion of a product of spherical eigenfunctions as an
// index → multiplicity map (dense vector), used by the integral formulas.
std::vector<std::int64_t> expand_spherical_product(const std::vector<int>& idx);

struct QuadratureRule {
    std::vector<double> nodes;    // abscissae in the spatial interval
    std::vector<double> weights;  // positive; sum = 1 (normalized measure)
    int exact_degree = 0;         // largest polynomial degree in cos-variable integrated exactly
};

// Immutable after construction; shared read access is safe.
struct SpatialBasis {
    BasisKind kind;
    int Jmax = 0;
    std::vector<long> omegas;                     // ω_j, j = 0..Jmax
    QuadratureRule quad;
    std::vector<std::vector<double>> node_values; // node_values[j][q] = e_j(x_q)
    std::vector<double> hopf_norm;                // N_j (Hopf only)

    // pmax: largest nonlinearity degree whose (pmax+1)-fold eigenfunction
    // products must be integrated exactly by `quad`.
    static SpatialBasis make(const BasisKind& kind, int Jmax, int pmax = 5);

    double eval(int j, double x) const;           // e_j at an arbitrary point
};

}  // namespace kgs3
