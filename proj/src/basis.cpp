#include "kgs3/basis.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

#include <gsl/gsl_integration.h>

namespace kgs3 {

int BasisKind::mu_underline() const {
    return std::abs(mu1) + std::abs(mu2) + 1;
}

long omega(const BasisKind& kind, int j) {
    if (j < 0) throw std::invalid_argument("omega: negative mode index");
    if (kind.is_spherical()) return static_cast<long>(j) + 1;
    return 2L * j + 1 + std::abs(kind.mu1) + std::abs(kind.mu2);
}

double eval_spherical_e(int n, double x) {
    if (n < 0) throw std::invalid_argument("eval_spherical_e: negative index");
    const double s = std::sin(x);
    // Near the removable singularities the quotient loses accuracy; switch to
    // the Chebyshev recurrence in c = cos x which is stable everywhere.
    if (std::abs(s) < 1e-8) {
        const double lim = n + 1.0;
        return (std::cos(x) < 0.0 && (n % 2 == 1)) ? -lim : lim;
    }
    return std::sin((n + 1) * x) / s;
}

//------------------------------------------------------------------------------
// Jacobi polynomials: standard three-term recurrence.
//------------------------------------------------------------------------------
double jacobi_poly(int j, int a, int b, double x) {
    if (j < 0) throw std::invalid_argument("jacobi_poly: negative degree");
    if (j == 0) return 1.0;
    double pm1 = 1.0;
    double p = 0.5 * (a - b) + 0.5 * (a + b + 2) * x;
    for (int n = 2; n <= j; ++n) {
        const double c1 = 2.0 * n * (n + a + b) * (2.0 * n + a + b - 2);
        const double c2 = (2.0 * n + a + b - 1) *
                          ((2.0 * n + a + b) * (2.0 * n + a + b - 2) * x +
                           static_cast<double>(a) * a - static_cast<double>(b) * b);
        const double c3 = 2.0 * (n + a - 1) * (n + b - 1) * (2.0 * n + a + b);
        const double pn = (c2 * p - c3 * pm1) / c1;
        pm1 = p;
        p = pn;
    }
    return p;
}

double jacobi_poly_deriv(int j, int a, int b, double x) {
    if (j == 0) return 0.0;
    return 0.5 * (j + a + b + 1) * jacobi_poly(j - 1, a + 1, b + 1, x);
}

double jacobi_poly_deriv2(int j, int a, int b, double x) {
    if (j <= 1) return 0.0;
    return 0.25 * (j + a + b + 1) * (j + a + b + 2) * jacobi_poly(j - 2, a + 2, b + 2, x);
}

//------------------------------------------------------------------------------
// Hopf eigenfunctions. The unnormalized function in c = cos 2η is
//   f_j(c) = (1−c)^{a/2} (1+c)^{b/2} P_j^{(a,b)}(c),  a = |μ₁|, b = |μ₂|,
// and e_j(η) = N_j f_j(cos 2η), with N_j fixed so ∫ e_j² sin(2η) dη = 1.
//------------------------------------------------------------------------------
namespace {

double hopf_unnormalized(int j, int a, int b, double c) {
    return std::pow(1.0 - c, 0.5 * a) * std::pow(1.0 + c, 0.5 * b) *
           jacobi_poly(j, a, b, c);
}

// N_j from the Gauss–Legendre quadrature norm; the integrand is a polynomial
// of degree 2j + a + b in c, so the rule below is exact.
double hopf_norm_constant(int j, int a, int b) {
    const std::size_t n = static_cast<std::size_t>(j + (a + b) / 2 + 4);
    gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(n);
    double s = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
        double c, wq;
        gsl_integration_glfixed_point(-1.0, 1.0, q, &c, &wq, t);
        const double f = hopf_unnormalized(j, a, b, c);
        s += 0.5 * wq * f * f;  // ∫ sin(2η)dη = ½∫dc
    }
    gsl_integration_glfixed_table_free(t);
    return 1.0 / std::sqrt(s);
}

}  // namespace

double eval_hopf_e(int j, int mu1, int mu2, double eta) {
    const int a = std::abs(mu1), b = std::abs(mu2);
    const double c = std::cos(2.0 * eta);
    return hopf_norm_constant(j, a, b) * hopf_unnormalized(j, a, b, c);
}

HopfEval eval_hopf_e_derivs(int j, int mu1, int mu2, double eta) {
    const int a = std::abs(mu1), b = std::abs(mu2);
    const double c = std::cos(2.0 * eta);
    const double N = hopf_norm_constant(j, a, b);

    // F(c) and its first two c-derivatives (product rule on the three factors).
    const double P = jacobi_poly(j, a, b, c);
    const double Pp = jacobi_poly_deriv(j, a, b, c);
    const double Ppp = jacobi_poly_deriv2(j, a, b, c);
    const double u = std::pow(1.0 - c, 0.5 * a);
    const double v = std::pow(1.0 + c, 0.5 * b);
    const double up = (a == 0) ? 0.0 : -0.5 * a * std::pow(1.0 - c, 0.5 * a - 1.0);
    const double vp = (b == 0) ? 0.0 : 0.5 * b * std::pow(1.0 + c, 0.5 * b - 1.0);
    const double upp = (a == 0) ? 0.0
                                : 0.25 * a * (a - 2.0) * std::pow(1.0 - c, 0.5 * a - 2.0);
    const double vpp = (b == 0) ? 0.0
                                : 0.25 * b * (b - 2.0) * std::pow(1.0 + c, 0.5 * b - 2.0);

    const double F = u * v * P;
    const double Fp = up * v * P + u * vp * P + u * v * Pp;
    const double Fpp = upp * v * P + u * vpp * P + u * v * Ppp +
                       2.0 * (up * vp * P + up * v * Pp + u * vp * Pp);

    // Chain rule through c(η) = cos 2η.
    const double cp = -2.0 * std::sin(2.0 * eta);
    const double cpp = -4.0 * std::cos(2.0 * eta);
    HopfEval out;
    out.value = N * F;
    out.deta = N * Fp * cp;
    out.deta2 = N * (Fpp * cp * cp + Fp * cpp);
    return out;
}

std::vector<int> product_rule_indices(int n, int m) {
    if (n < 0 || m < 0) throw std::invalid_argument("product_rule_indices: negative index");
    if (n < m) std::swap(n, m);
    std::vector<int> out;
    out.reserve(m + 1);
    for (int k = 0; k <= m; ++k) out.push_back(n - m + 2 * k);
    return out;
}

Rational integral_time_product(const std::vector<long>& freqs) {
    const std::size_t q = freqs.size();
    if (q == 0) return Rational{2, 1};  // total mass of d̄t
    if (q > 62) throw std::invalid_argument("integral_time_product: too many factors");
    std::int64_t count = 0;
    const std::uint64_t total = std::uint64_t{1} << q;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        std::int64_t s = 0;
        for (std::size_t k = 0; k < q; ++k)
            s += (mask >> k & 1u) ? freqs[k] : -freqs[k];
        if (s == 0) ++count;
    }
    std::int64_t den = std::int64_t{1} << (q - 1);
    std::int64_t g = std::gcd(count, den);
    if (g == 0) g = 1;
    return Rational{count / g, den / g};
}

std::vector<std::int64_t> expand_spherical_product(const std::vector<int>& idx) {
    std::vector<std::int64_t> coeff{1};  // starts as e₀ = 1
    coeff.resize(1);
    std::vector<std::int64_t> acc;
    bool first = true;
    for (int j : idx) {
        if (first) {
            coeff.assign(static_cast<std::size_t>(j) + 1, 0);
            coeff[static_cast<std::size_t>(j)] = 1;
            first = false;
            continue;
        }
        acc.assign(coeff.size() + static_cast<std::size_t>(j), 0);
        for (std::size_t a = 0; a < coeff.size(); ++a) {
            if (coeff[a] == 0) continue;
            for (int r : product_rule_indices(static_cast<int>(a), j))
                acc[static_cast<std::size_t>(r)] += coeff[a];
        }
        coeff.swap(acc);
    }
    if (first) coeff.assign(1, 1);  // empty product is e₀
    return coeff;
}

namespace {

std::int64_t match_integral(const std::vector<std::int64_t>& u,
                            const std::vector<std::int64_t>& v) {
    const std::size_t n = std::min(u.size(), v.size());
    std::int64_t s = 0;
    for (std::size_t i = 0; i < n; ++i) s += u[i] * v[i];
    return s;
}

}  // namespace

std::int64_t integral_space6(const std::array<int, 6>& j) {
    for (int v : j)
        if (v < 0) throw std::invalid_argument("integral_space6: negative index");
    const auto a = expand_spherical_product({j[0], j[1], j[2]});
    const auto b = expand_spherical_product({j[3], j[4], j[5]});
    return match_integral(a, b);
}

std::int64_t integral_space4(const std::array<int, 4>& j) {
    for (int v : j)
        if (v < 0) throw std::invalid_argument("integral_space4: negative index");
    const auto a = expand_spherical_product({j[0], j[1]});
    const auto b = expand_spherical_product({j[2], j[3]});
    return match_integral(a, b);
}

//------------------------------------------------------------------------------
// Basis construction.
//------------------------------------------------------------------------------
SpatialBasis SpatialBasis::make(const BasisKind& kind, int Jmax, int pmax) {
    if (Jmax < 0) throw std::invalid_argument("SpatialBasis: negative Jmax");
    SpatialBasis B;
    B.kind = kind;
    B.Jmax = Jmax;
    B.omegas.resize(static_cast<std::size_t>(Jmax) + 1);
    for (int j = 0; j <= Jmax; ++j) B.omegas[static_cast<std::size_t>(j)] = omega(kind, j);

    if (kind.is_spherical()) {
        // Gauss–Chebyshev (second kind) after c = cos x: nodes x_q = qπ/(M+1),
        // weights (2/(M+1)) sin²x_q under the normalized measure; exact for
        // polynomials in c up to degree 2M−1.
        const int degree_needed = (pmax + 1) * Jmax + 2;
        const int M = degree_needed / 2 + 2;
        B.quad.exact_degree = 2 * M - 1;
        B.quad.nodes.resize(static_cast<std::size_t>(M));
        B.quad.weights.resize(static_cast<std::size_t>(M));
        const double pi = std::acos(-1.0);
        for (int q = 1; q <= M; ++q) {
            const double x = pi * q / (M + 1);
            B.quad.nodes[static_cast<std::size_t>(q - 1)] = x;
            const double s = std::sin(x);
            B.quad.weights[static_cast<std::size_t>(q - 1)] = 2.0 / (M + 1) * s * s;
        }
        B.node_values.assign(static_cast<std::size_t>(Jmax) + 1,
                             std::vector<double>(static_cast<std::size_t>(M)));
        for (int j = 0; j <= Jmax; ++j)
            for (int q = 0; q < M; ++q)
                B.node_values[static_cast<std::size_t>(j)][static_cast<std::size_t>(q)] =
                    eval_spherical_e(j, B.quad.nodes[static_cast<std::size_t>(q)]);
    } else {
        // Gauss–Legendre in c = cos 2η. A (pmax+1)-fold eigenfunction product
        // carries polynomial degree ≤ (pmax+1)(Jmax + (|μ₁|+|μ₂|)/2) provided
        // pmax+1 is even (the only case exercised); size the rule generously.
        const int a = std::abs(kind.mu1), b = std::abs(kind.mu2);
        const int degree_needed = (pmax + 1) * (Jmax + a + b) + 2;
        const std::size_t M = static_cast<std::size_t>(degree_needed / 2 + 2);
        B.quad.exact_degree = static_cast<int>(2 * M - 1);
        B.quad.nodes.resize(M);
        B.quad.weights.resize(M);
        gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(M);
        for (std::size_t q = 0; q < M; ++q) {
            double c, wq;
            gsl_integration_glfixed_point(-1.0, 1.0, q, &c, &wq, t);
            B.quad.nodes[q] = 0.5 * std::acos(c);  // η
            B.quad.weights[q] = 0.5 * wq;          // sin(2η)dη = ½ dc
        }
        gsl_integration_glfixed_table_free(t);

        B.hopf_norm.resize(static_cast<std::size_t>(Jmax) + 1);
        B.node_values.assign(static_cast<std::size_t>(Jmax) + 1, std::vector<double>(M));
        for (int j = 0; j <= Jmax; ++j) {
            // Unnormalized values, then normalize with this rule's own norm so
            // discrete orthonormality holds to machine precision.
            double s = 0.0;
            std::vector<double>& row = B.node_values[static_cast<std::size_t>(j)];
            for (std::size_t q = 0; q < M; ++q) {
                const double c = std::cos(2.0 * B.quad.nodes[q]);
                row[q] = hopf_unnormalized(j, a, b, c);
                s += B.quad.weights[q] * row[q] * row[q];
            }
            const double N = 1.0 / std::sqrt(s);
            B.hopf_norm[static_cast<std::size_t>(j)] = N;
            for (double& v : row) v *= N;
        }
    }
    return B;
}

double SpatialBasis::eval(int j, double x) const {
    if (kind.is_spherical()) return eval_spherical_e(j, x);
    const int a = std::abs(kind.mu1), b = std::abs(kind.mu2);
    return hopf_norm[static_cast<std::size_t>(j)] *
           hopf_unnormalized(j, a, b, std::cos(2.0 * x));
}

}  // namespace kgs3
