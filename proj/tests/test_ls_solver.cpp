#include <doctest.h>

#include <cmath>

#include "kgs3/ls_solver.hpp"

using namespace kgs3;

namespace {
ProblemSpec make(int p, double eps) {
    ProblemSpec s;
    s.p = p;
    s.eps = eps;
    if (p == 3) {
        s.kind = BasisKind::hopf(2, 1);
        s.trunc.Jmax = 30;  // largest j with omega_j = 2j+4 <= Lmax
    }
    s.finalize();
    return s;
}
}  // namespace

TEST_CASE("finalize validates the configuration") {
    ProblemSpec s;
    s.p = 4;
    CHECK_THROWS_WITH_AS(s.finalize(), doctest::Contains("unsupported exponent"),
                         std::invalid_argument);
    ProblemSpec h;
    h.p = 5;
    h.kind = BasisKind::hopf(1, 1);
    CHECK_THROWS_AS(h.finalize(), std::invalid_argument);
    ProblemSpec ok = make(5, 1e-3);
    CHECK(ok.omega == doctest::Approx(std::sqrt(1.001)));
    ProblemSpec p2 = make(2, 1e-3);
    CHECK(p2.omega == doctest::Approx(std::sqrt(0.999)));
    CHECK(ok.rho1() > 0.0);
    CHECK(ok.rho2() > 0.0);
    CHECK(ok.rho3() > 0.0);
}

TEST_CASE("zero forcing gives the zero fixed point") {
    const ProblemSpec spec = make(5, 1e-3);
    Field v1(spec.basis, spec.trunc);
    const LSState st = solve_range(v1, spec);
    CHECK(norm_HrHs(st.v2, 0, 0) == 0.0);
    CHECK(norm_HrHs(st.w, 0, 0) == 0.0);
}

TEST_CASE("p=5 range equation: converged residuals on the constant-mode branch") {
    const ProblemSpec spec = make(5, 1e-3);
    Field v1(spec.basis, spec.trunc);
    v1.at(1, 0) = 0.2;  // near the expected amplitude scale eps^{1/4}
    const LSState st = solve_range(v1, spec);
    const double scale = std::max(1.0, norm_V(v1, 1.0));
    CHECK(st.res_v2 <= 10 * spec.tol.fp_tol * scale);
    CHECK(st.res_w <= 10 * spec.tol.fp_tol * scale);
    // spatially constant data keeps the solution on e_0: the high kernel
    // component vanishes identically
    CHECK(norm_HrHs(st.v2, 0, 0) <= 1e-14);
    CHECK(norm_HrHs(st.w, 0, 0) > 0.0);
    CHECK(norm_HrHs(st.w, 0, 0) < norm_V(v1, 1.0));
}

TEST_CASE("p=3 Hopf branch activates a genuine high-kernel component") {
    const ProblemSpec spec = make(3, 1e-3);
    Field v1(spec.basis, spec.trunc);
    v1.at(4, 0) = 0.1;  // lowest Hopf kernel mode, omega_0 = 4
    const LSState st = solve_range(v1, spec);
    const double scale = std::max(1.0, norm_V(v1, 1.0));
    CHECK(st.res_v2 <= 10 * spec.tol.fp_tol * scale);
    CHECK(st.res_w <= 10 * spec.tol.fp_tol * scale);
    // the cube of the lowest mode reaches kernel frequency 12 > N = 8
    CHECK(norm_HrHs(st.v2, 0, 0) > 1e-10);
    // on the Hopf sphere the direct cube overlap with the top-frequency
    // kernel row vanishes identically (products of three modes only reach
    // j = a+b+c+3, the kernel row needs j = a+b+c+4), so v2 is driven by
    // the v1^2 w cross term and stays well below w
    CHECK(norm_HrHs(st.v2, 0, 0) < norm_HrHs(st.w, 0, 0));
    CHECK(norm_HrHs(st.w, 0, 0) < norm_V(v1, 1.0));
}

TEST_CASE("p=2 translated range unknown is consistent") {
    const ProblemSpec spec = make(2, 1e-3);
    Field v1(spec.basis, spec.trunc);
    v1.at(1, 0) = 0.05;
    const LSState st = solve_range(v1, spec);
    const double scale = std::max(1.0, norm_V(v1, 1.0));
    CHECK(st.res_v2 <= 10 * spec.tol.fp_tol * scale);
    CHECK(st.res_w <= 10 * spec.tol.fp_tol * scale);
    // wtilde = w - L^-1 Pi_W (v1+v2)^2 reconstructs w
    Field vk = v1;
    vk += st.v2;
    Field rec = apply_Lomega_inv(project(power(vk, 2), Sector::W), spec.omega);
    rec += st.wtilde;
    rec -= st.w;
    CHECK(rec.max_abs_coeff() <= 1e-13);
    // the translated unknown is one order smaller than w itself
    CHECK(norm_HrHs(st.wtilde, 0, 0) < norm_HrHs(st.w, 0, 0));
}

TEST_CASE("warm starts reduce iteration counts") {
    const ProblemSpec spec = make(5, 1e-3);
    Field v1(spec.basis, spec.trunc);
    v1.at(1, 0) = 0.2;
    const LSState cold = solve_range(v1, spec);
    v1.at(1, 0) = 0.2001;
    const LSState warm = solve_range(v1, spec, &cold);
    CHECK(warm.iters <= cold.iters);
}

TEST_CASE("full residual measures the solution property") {
    const ProblemSpec spec = make(5, 1e-3);
    Field u(spec.basis, spec.trunc);
    CHECK(residual_full(u, spec) == 0.0);
    u.at(1, 0) = 0.2;
    CHECK(residual_full(u, spec) > 1e-3);  // bifurcation equation unsolved
}
