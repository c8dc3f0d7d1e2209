#include "kgs3/ls_solver.hpp"

#include <cmath>

namespace kgs3 {

double ProblemSpec::rho1() const {
    const double e = std::abs(eps);
    return (p == 5) ? std::pow(e, 0.25) * R : std::sqrt(e) * R;
}

double ProblemSpec::rho2() const {
    const double e = std::abs(eps);
    const double N = N_as_double();
    switch (p) {
        case 5: return c2 * std::pow(N, 10.0 * delta) * std::pow(R, 5) * std::pow(e, 0.25);
        case 3: return c2 * std::pow(R, 3) * std::pow(N, 4.0 * delta) * std::sqrt(e);
        default: return c2 / gamma * std::pow(R, 3) * std::sqrt(e);
    }
}

double ProblemSpec::rho3() const {
    const double e = std::abs(eps);
    const double N = N_as_double();
    switch (p) {
        case 5: return c3 / gamma * std::pow(N, 5.0 + 10.0 * delta) * std::pow(R, 5) * std::pow(e, 1.25);
        case 3: return c3 / gamma * std::pow(N, 3.0 + 6.0 * delta) * std::pow(R, 3) * std::pow(e, 1.5);
        default: return c3 / (gamma * gamma) * std::pow(e, 1.5) * std::pow(R, 3) * std::pow(N, 3.0 + 6.0 * delta);
    }
}

void ProblemSpec::finalize(long ell_max) {
    if (p != 2 && p != 3 && p != 5)
        throw std::invalid_argument("ProblemSpec: unsupported exponent p=" + std::to_string(p));
    if ((p == 2 || p == 5) && !kind.is_spherical())
        throw std::invalid_argument("ProblemSpec: p=2 and p=5 require the spherical class");
    if (eps <= 0.0) throw std::invalid_argument("ProblemSpec: eps must be positive");
    const double om2 = 1.0 + sigma() * eps;
    if (om2 <= 0.0) throw std::invalid_argument("ProblemSpec: omega^2 <= 0");
    omega = std::sqrt(om2);
    if (!basis || basis->kind != kind || basis->Jmax < trunc.Jmax)
        basis = std::make_shared<const SpatialBasis>(SpatialBasis::make(kind, trunc.Jmax, p));
    const long om_top = basis->omegas[static_cast<std::size_t>(trunc.Jmax)];
    if (om_top > trunc.Lmax)
        throw std::invalid_argument(
            "ProblemSpec: Lmax must cover the largest spatial eigenfrequency (" +
            std::to_string(om_top) + ")");
    if (trunc.N_split < 1 || trunc.N_split > om_top)
        throw std::invalid_argument("ProblemSpec: N_split out of range");
    const long horizon = ell_max > 0 ? ell_max : trunc.Lmax;
    const FrequencyCheck chk = in_omega_gamma(omega, gamma, std::max<long>(horizon, trunc.Lmax));
    if (!chk.passed)
        throw std::invalid_argument("ProblemSpec: frequency rejected by the Diophantine check");
}

namespace {

// Π_{V>N}(u^p)-forcing for the high-kernel update. For p=2 the pure kernel
// square (v₁+v₂)² has no kernel projection, so the equivalent cancellation-
// free forcing (2(v₁+v₂)+w)·w is used instead of u² to avoid amplifying
// collocation roundoff by 1/ε.
Field high_kernel_forcing(const Field& v1, const Field& v2, const Field& w,
                          const ProblemSpec& spec) {
    if (spec.p == 2) {
        Field lin = v1;
        lin += v2;
        lin *= 2.0;
        lin += w;
        return project(multiply(lin, w), Sector::VhighN);
    }
    Field u = v1;
    u += v2;
    u += w;
    return project(power(u, spec.p), Sector::VhighN);
}

Field range_forcing(const Field& v1, const Field& v2, const Field& w,
                    const ProblemSpec& spec) {
    Field u = v1;
    u += v2;
    u += w;
    return project(power(u, spec.p), Sector::W);
}

}  // namespace

Field solve_v2(const Field& v1, const Field& w_in, const ProblemSpec& spec) {
    const double scale = std::max(1.0, norm_V(v1, 1.0));
    const double inv_se = 1.0 / (spec.sigma() * spec.eps);
    Field v2(v1.basis_ptr(), v1.trunc());
    for (int it = 0; it < spec.tol.max_iter; ++it) {
        Field w = w_in;
        if (spec.p == 2) {
            // input w is the translated unknown w̃; reconstruct the range part
            Field vk = v1;
            vk += v2;
            w += apply_Lomega_inv(project(power(vk, 2), Sector::W), spec.omega,
                                  spec.tol.divisor_floor);
        }
        Field next = apply_A_inv(high_kernel_forcing(v1, v2, w, spec));
        next *= inv_se;
        Field diff = next;
        diff -= v2;
        const double inc = norm_HrHs(diff, 0.0, 0.0);
        v2 = next;
        const double nrm = norm_HrHs(v2, 0.0, 0.0);
        if (!std::isfinite(nrm) || nrm > spec.tol.divergence_factor * scale)
            throw Diverged("solve_v2: iterate norm exceeded the divergence guard");
        if (inc <= spec.tol.fp_tol * scale) return v2;
    }
    throw Diverged("solve_v2: max_iter reached without convergence");
}

LSState solve_range(const Field& v1, const ProblemSpec& spec, const LSState* warm) {
    LSState st;
    st.v1 = v1;
    st.v2 = (warm && warm->v2.same_layout(v1)) ? warm->v2 : Field(v1.basis_ptr(), v1.trunc());
    st.w = (warm && warm->w.same_layout(v1)) ? warm->w : Field(v1.basis_ptr(), v1.trunc());
    st.wtilde = Field(v1.basis_ptr(), v1.trunc());

    const double scale = std::max(1.0, norm_V(v1, 1.0));
    const double inv_se = 1.0 / (spec.sigma() * spec.eps);

    for (int it = 1; it <= spec.tol.max_iter; ++it) {
        st.iters = it;
        // high-kernel half sweep
        Field fv2 = high_kernel_forcing(v1, st.v2, st.w, spec);
        Field v2n = apply_A_inv(fv2);
        v2n *= inv_se;
        Field dv2 = v2n;
        dv2 -= st.v2;
        st.v2 = v2n;
        // range half sweep
        Field fw = range_forcing(v1, st.v2, st.w, spec);
        Field wn = apply_Lomega_inv(fw, spec.omega, spec.tol.divisor_floor);
        Field dw = wn;
        dw -= st.w;
        st.w = wn;

        // tolerances track the size of the nonlinear forcing so that the
        // achieved equation residuals are small relative to |u^p|
        const double fscale =
            std::max(norm_HrHs(fv2, 0.0, 0.0) + norm_HrHs(fw, 0.0, 0.0), 1e-290);
        const double tol = spec.tol.fp_tol * fscale;

        const double inc = std::max(norm_HrHs(dv2, 0.0, 0.0), norm_HrHs(dw, 0.0, 0.0));
        const double nv2 = norm_HrHs(st.v2, 0.0, 0.0);
        const double nw = norm_HrHs(st.w, 0.0, 0.0);
        if (!std::isfinite(nv2) || !std::isfinite(nw) ||
            std::max(nv2, nw) > spec.tol.divergence_factor * scale)
            throw Diverged("solve_range: iterate norm exceeded the divergence guard");
        if (inc <= tol) {
            // independent residual check at the joint exit
            Field fv2e = high_kernel_forcing(v1, st.v2, st.w, spec);
            Field rv2 = apply_A(st.v2);
            rv2 *= spec.sigma() * spec.eps;
            rv2 -= fv2e;
            st.res_v2 = norm_HrHs(rv2, 0.0, 0.0);
            Field fwe = range_forcing(v1, st.v2, st.w, spec);
            Field rw = project(apply_Lomega(st.w, spec.omega), Sector::W);
            rw -= fwe;
            st.res_w = norm_HrHs(rw, 0.0, 0.0);
            if (std::max(st.res_v2, st.res_w) <= 10.0 * tol) {
                if (spec.p == 2) {
                    Field vk = v1;
                    vk += st.v2;
                    st.wtilde = st.w;
                    st.wtilde -= apply_Lomega_inv(project(power(vk, 2), Sector::W),
                                                  spec.omega, spec.tol.divisor_floor);
                }
                return st;
            }
        }
    }
    throw Diverged("solve_range: max_iter reached; last residuals v2=" +
                   std::to_string(st.res_v2) + " w=" + std::to_string(st.res_w));
}

double residual_full(const Field& u, const ProblemSpec& spec) {
    Field up = power(u, spec.p);
    Field r = apply_Lomega(u, spec.omega);
    r -= up;
    const double den = norm_HrHs(up, 0.0, 0.0);
    if (den == 0.0) return norm_HrHs(r, 0.0, 0.0) == 0.0 ? 0.0 : 1.0;
    return norm_HrHs(r, 0.0, 0.0) / den;
}

}  // namespace kgs3
