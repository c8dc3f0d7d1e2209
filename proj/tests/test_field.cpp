#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "kgs3/field.hpp"

using namespace kgs3;

namespace {
std::shared_ptr<const SpatialBasis> B() {
    static auto b = std::make_shared<const SpatialBasis>(
        SpatialBasis::make(BasisKind::spherical(), 16, 5));
    return b;
}
const Truncation TR{32, 16, 8};

Field random_field(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Field u(B(), TR);
    for (double& c : u.coeffs()) c = g(rng);
    return u;
}
}  // namespace

TEST_CASE("norms: hand values and the kernel identity") {
    Field u(B(), TR);
    u.at(3, 1) = 2.0;  // <l> = 3, omega_1 = 2
    CHECK(norm_HrHs(u, 1.0, 1.0) == doctest::Approx(3.0 * 2.0 * 2.0).epsilon(1e-14));
    CHECK(norm_HrHs(u, 0.0, 0.0) == doctest::Approx(2.0).epsilon(1e-14));

    Field v(B(), TR);
    v.at(1, 0) = 1.0;  // kernel mode
    v.at(4, 3) = 0.5;  // kernel mode (omega_3 = 4)
    const double ref = norm_V(v, 2.0);
    CHECK(norm_HrHs(v, 0.0, 2.0) == doctest::Approx(ref).epsilon(1e-14));
    CHECK(norm_HrHs(v, 2.0, 0.0) == doctest::Approx(ref).epsilon(1e-14));
    CHECK(norm_HrHs(v, 1.0, 1.0) == doctest::Approx(ref).epsilon(1e-14));
}

TEST_CASE("sector projectors partition the field") {
    Field u = random_field(3);
    Field s = project(u, Sector::V);
    s += project(u, Sector::W);
    s -= u;
    CHECK(s.max_abs_coeff() <= 1e-15);
    Field k = project(u, Sector::VlowN);
    k += project(u, Sector::VhighN);
    k -= project(u, Sector::V);
    CHECK(k.max_abs_coeff() <= 1e-15);
}

TEST_CASE("resolvent action: inverse composition and kernel guard") {
    Field w = project(random_field(5), Sector::W);
    const double omega = std::sqrt(1.001);
    Field rt = apply_Lomega_inv(apply_Lomega(w, omega), omega);
    rt -= w;
    CHECK(rt.max_abs_coeff() <= 1e-10);

    Field bad(B(), TR);
    bad.at(1, 0) = 1.0;  // kernel mode
    CHECK_THROWS_AS(apply_Lomega_inv(bad, omega), KernelOverlap);
}

TEST_CASE("A and its inverse") {
    Field u = random_field(9);
    Field rt = apply_A_inv(apply_A(u));
    rt -= u;
    CHECK(rt.max_abs_coeff() <= 1e-12);
}

TEST_CASE("products: collocation equals exact convolution") {
    Field a = random_field(21);
    Field b2 = random_field(22);
    // keep degrees inside the truncation so the Galerkin product is exact
    for (int l = 0; l <= TR.Lmax; ++l)
        for (int j = 0; j <= TR.Jmax; ++j)
            if (l > 12 || j > 6) {
                a.at(l, j) = 0.0;
                b2.at(l, j) = 0.0;
            }
    Field d = multiply(a, b2);
    d -= multiply_convolution(a, b2);
    CHECK(d.max_abs_coeff() <= 1e-12);
}

TEST_CASE("power and integrals: cos t e0 oracle") {
    Field c0(B(), TR);
    c0.at(1, 0) = 1.0;
    // integral of cos^2 t e_0^2 over space-time is 1
    CHECK(integral_spacetime(power(c0, 2)) == doctest::Approx(1.0).epsilon(1e-13));
    // power(,3): cos^3 t = (3/4)cos t + (1/4)cos 3t
    Field c3 = power(c0, 3);
    CHECK(c3.at(1, 0) == doctest::Approx(0.75).epsilon(1e-13));
    CHECK(c3.at(3, 0) == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(std::abs(c3.at(2, 0)) <= 1e-14);
    CHECK(inner_L2(c0, c0) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("analysis/synthesis round trip") {
    Field u = random_field(33);
    const TimeGrid tg = TimeGrid::make(2 * TR.Lmax + 1);
    Field rt = analyze(synthesize(u, tg), tg, u.basis_ptr(), u.trunc());
    rt -= u;
    CHECK(rt.max_abs_coeff() <= 1e-11);
}

TEST_CASE("period subspaces and minimal divisors") {
    Field v(B(), TR);
    v.at(2, 1) = 1.0;  // kernel, frequency 2
    v.at(4, 3) = 0.5;  // kernel, frequency 4
    v.at(6, 5) = 0.25;
    CHECK(minimal_period_divisor(v) == 2);
    Field r = restrict_to_period_subspace(v, 4);
    CHECK(r.at(4, 3) == 0.5);
    CHECK(r.at(2, 1) == 0.0);
    Field constant(B(), TR);
    constant.at(0, 0) = 1.0;
    CHECK(minimal_period_divisor(constant) == 0);
}

TEST_CASE("CSV round trip is bit exact") {
    Field u = random_field(44);
    const std::string csv = to_csv(u);
    Field rt = from_csv(csv, u.basis_ptr(), u.trunc());
    rt -= u;
    CHECK(rt.max_abs_coeff() == 0.0);
    CHECK(csv.rfind("ell,j,coeff", 0) == 0);
}
