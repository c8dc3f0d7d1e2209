#include "kgs3/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace kgs3 {

void VerifyReport::add(const std::string& name, bool ok, double margin,
                       const std::string& detail) {
    cases.push_back({name, ok, margin, detail});
    ++cases_run;
    if (ok) ++cases_passed;
}

namespace {

std::shared_ptr<const SpatialBasis> shared_spherical(int Jmax) {
    return std::make_shared<const SpatialBasis>(
        SpatialBasis::make(BasisKind::spherical(), Jmax, 5));
}

// random kernel field with support on frequencies <= cap (unit V^1 norm)
Field random_kernel(std::mt19937_64& rng, std::shared_ptr<const SpatialBasis> B,
                    const Truncation& tr, long cap) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Field v(B, tr);
    for (int j = 0; j <= tr.Jmax; ++j) {
        const long w = B->omegas[static_cast<std::size_t>(j)];
        if (w > cap || w > tr.Lmax) continue;
        v.at(static_cast<int>(w), j) = gauss(rng);
    }
    const double n = norm_V(v, 1.0);
    if (n > 0.0) v *= 1.0 / n;
    return v;
}

Field random_full(std::mt19937_64& rng, std::shared_ptr<const SpatialBasis> B,
                  const Truncation& tr) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Field u(B, tr);
    for (double& c : u.coeffs()) c = gauss(rng);
    return u;
}

}  // namespace

VerifyReport check_exact_identities(std::uint64_t seed, int n_samples) {
    VerifyReport rep;
    rep.suite = "exact_identities";
    rep.seed = seed;
    std::mt19937_64 rng(seed);
    auto B = shared_spherical(32);
    const Truncation tr{64, 32, 8};

    // kernel norm identities: H^r H^s depends on r+s only and matches the
    // t=0 spatial norm
    {
        const std::pair<double, double> splits[] = {
            {0.0, 2.0}, {1.0, 1.0}, {2.0, 0.0}, {0.5, 1.5}, {1.5, 0.5}};
        double worst = 0.0;
        for (int i = 0; i < std::min(n_samples, 50); ++i) {
            Field v = random_kernel(rng, B, tr, 33);
            const double ref = norm_V(v, 2.0);
            double slice = 0.0;  // t=0 spatial H^2 norm from kernel coefficients
            for (int j = 0; j <= tr.Jmax; ++j) {
                const long w = B->omegas[static_cast<std::size_t>(j)];
                if (w > tr.Lmax) continue;
                const double c = v.at(static_cast<int>(w), j);
                slice += std::pow(static_cast<double>(w), 4.0) * c * c;
            }
            worst = std::max(worst, std::abs(std::sqrt(slice) - ref) / ref);
            for (const auto& [r, s] : splits)
                worst = std::max(worst, std::abs(norm_HrHs(v, r, s) - ref) / ref);
        }
        rep.add("kernel_norm_identities", worst <= 1e-12, 1e-12 - worst);
        rep.metrics["norm_identity_worst_rel"] = worst;
    }

    // kernel projection of a spherical kernel square vanishes
    {
        double worst = 0.0;
        for (int i = 0; i < n_samples; ++i) {
            Field v = random_kernel(rng, B, tr, 33);
            worst = std::max(worst, project(power(v, 2), Sector::V).max_abs_coeff());
        }
        rep.add("kernel_square_projection_vanishes", worst <= 1e-12, 1e-12 - worst);
        rep.metrics["kernel_square_worst_coeff"] = worst;
    }

    // projectors are contractions in every H^r H^s used
    {
        double worst = -1e300;
        for (int i = 0; i < std::min(n_samples, 20); ++i) {
            Field u = random_full(rng, B, tr);
            const double nu = norm_HrHs(u, 1.0, 1.0);
            for (Sector sec : {Sector::V, Sector::W, Sector::VlowN, Sector::VhighN})
                worst = std::max(worst, norm_HrHs(project(u, sec), 1.0, 1.0) - nu);
        }
        rep.add("projector_contraction", worst <= 0.0, -worst);
    }

    // frequency-cutoff smoothing: low part gains, high part loses powers of N
    {
        const double N = static_cast<double>(tr.N_split);
        double worst = -1e300;
        for (int i = 0; i < std::min(n_samples, 20); ++i) {
            Field v = random_kernel(rng, B, tr, 33);
            const double low =
                norm_V(project(v, Sector::VlowN), 2.0) - N * norm_V(v, 1.0);
            const double high =
                norm_V(project(v, Sector::VhighN), 1.0) - norm_V(v, 2.0) / N;
            worst = std::max({worst, low, high});
        }
        rep.add("cutoff_smoothing", worst <= 1e-12, 1e-12 - worst);
    }

    // n-periodic subspace: lower-index norms controlled by n^{s-s'}
    {
        double worst = -1e300;
        for (int i = 0; i < std::min(n_samples, 20); ++i) {
            for (int n : {2, 3}) {
                Field v = restrict_to_period_subspace(random_kernel(rng, B, tr, 33), n);
                const double lhs = norm_V(v, 0.5);
                const double rhs = std::pow(n, 0.5 - 1.5) * norm_V(v, 1.5);
                worst = std::max(worst, lhs - rhs);
            }
        }
        rep.add("period_subspace_norms", worst <= 1e-12, 1e-12 - worst);
    }

    // collocation product agrees with the exact convolution product
    {
        double worst = 0.0;
        for (int i = 0; i < 5; ++i) {
            Field a = random_kernel(rng, B, tr, 12);
            Field b = random_kernel(rng, B, tr, 12);
            Field d = multiply(a, b);
            d -= multiply_convolution(a, b);
            worst = std::max(worst, d.max_abs_coeff());
        }
        rep.add("product_path_agreement", worst <= 1e-12, 1e-12 - worst);
    }
    return rep;
}

namespace {

// exact space-time integral of a product of six (or four) fields by dealiased
// collocation: time grid exact for the total trigonometric degree, spatial
// quadrature exact for the product degree of the basis
double integral_of_product(const std::vector<const Field*>& vs) {
    const Field& f0 = *vs.front();
    int Lsum = 0;
    for (const Field* v : vs) Lsum += v->Lmax();
    const TimeGrid tg = TimeGrid::make(Lsum / 2 + 2);
    const std::size_t Q = f0.basis().quad.nodes.size();
    std::vector<std::vector<double>> vals;
    vals.reserve(vs.size());
    for (const Field* v : vs) vals.push_back(synthesize(*v, tg));
    const auto& wq = f0.basis().quad.weights;
    double acc = 0.0;
    for (int k = 0; k <= tg.M; ++k) {
        const std::size_t row = static_cast<std::size_t>(k) * Q;
        double rowsum = 0.0;
        for (std::size_t q = 0; q < Q; ++q) {
            double prod = wq[q];
            for (const auto& a : vals) prod *= a[row + q];
            rowsum += prod;
        }
        acc += tg.weights[static_cast<std::size_t>(k)] * rowsum;
    }
    return acc;
}

struct StrichartzSups {
    double r1 = 0.0, r2 = 0.0, r3 = 0.0, r4 = 0.0;
};

StrichartzSups sample_sups(std::uint64_t seed, int n_samples, double delta,
                           int cap, double omega, double gamma) {
    auto B = shared_spherical(2 * cap);
    const Truncation tr{2 * cap + 2, 2 * cap, 8};
    const bool unit_omega = omega == 1.0;
    // Each sample draws from its own generator so that the low-frequency
    // tuples are identical draws at every refinement level: refining the basis
    // then only adds candidate tuples with high-frequency content, and the
    // sampled sup is stable unless those enlarge the ratio.
    const long low_cap = std::min<long>(8, cap);
    StrichartzSups s;
    for (int i = 0; i < n_samples; ++i) {
        std::mt19937_64 rng(seed * 1000003ULL + static_cast<std::uint64_t>(i));
        const long support = (i % 4 == 3) ? cap : low_cap;
        std::vector<Field> v;
        v.reserve(6);
        if (i == 0) {
            // concentrated witness: all six factors equal to cos t * e_0
            Field c0(B, tr);
            c0.at(1, 0) = 1.0;
            for (int k = 0; k < 6; ++k) v.push_back(c0);
        } else {
            for (int k = 0; k < 6; ++k) v.push_back(random_kernel(rng, B, tr, support));
        }
        std::vector<const Field*> ptrs = {&v[0], &v[1], &v[2], &v[3], &v[4], &v[5]};
        const double lhs6 = std::abs(integral_of_product(ptrs));
        double den1 = 1.0, den2 = 1.0;
        for (int k = 0; k < 6; ++k) den1 *= norm_V(v[k], 5.0 / 6.0 + delta);
        for (int k = 0; k < 5; ++k) den2 *= norm_V(v[k], 1.0 + delta);
        den2 *= norm_V(v[5], -delta);
        s.r1 = std::max(s.r1, lhs6 / den1);
        s.r2 = std::max(s.r2, lhs6 / den2);

        Field g = project(multiply(v[2], v[3]), Sector::W);
        Field Lg = apply_Lomega_inv(g, omega);
        Field h = multiply(v[0], v[1]);
        const double lhs4 = std::abs(inner_L2(h, Lg));
        const double weight = unit_omega ? 1.0 : gamma;  // ratio vs C/gamma
        double den3 = 1.0;
        for (int k = 0; k < 4; ++k) den3 *= norm_V(v[k], 0.5 + delta);
        double den4 = norm_V(v[0], -delta);
        for (int k = 1; k < 4; ++k) den4 *= norm_V(v[k], 2.0 / 3.0 + delta);
        s.r3 = std::max(s.r3, weight * lhs4 / den3);
        s.r4 = std::max(s.r4, weight * lhs4 / den4);
    }
    return s;
}

}  // namespace

VerifyReport check_strichartz(std::uint64_t seed, int n_samples, double delta,
                              int cap, double omega_num, double gamma) {
    VerifyReport rep;
    rep.suite = "strichartz";
    rep.seed = seed;
    const double omega = omega_num > 0.0 ? omega_num : std::sqrt(1.0 + 1e-3);
    {
        const FrequencyCheck chk = in_omega_gamma(omega, gamma, 4 * cap + 4);
        rep.add("omega_certified", chk.passed, chk.margin);
    }

    std::mt19937_64 rng(seed);
    const StrichartzSups coarse = sample_sups(seed, n_samples, delta, cap, omega, gamma);
    const StrichartzSups fine = sample_sups(seed, n_samples, delta, 2 * cap, omega, gamma);

    const std::pair<std::string, std::pair<double, double>> pairs[] = {
        {"sextic_kernel", {coarse.r1, fine.r1}},
        {"sextic_dual_exponent", {coarse.r2, fine.r2}},
        {"quartic_resolvent", {coarse.r3, fine.r3}},
        {"quartic_resolvent_dual", {coarse.r4, fine.r4}}};
    for (const auto& [name, su] : pairs) {
        const double rel = std::abs(su.second - su.first) / std::max(su.first, su.second);
        rep.add("refinement_stability_" + name, rel <= 0.25, 0.25 - rel);
        rep.metrics["sup_" + name + "_coarse"] = su.first;
        rep.metrics["sup_" + name + "_fine"] = su.second;
    }

    // exact per-tuple integral bounds exercised on random index tuples
    {
        std::uniform_int_distribution<int> pick(0, cap - 1);
        double worst6 = 1e300, worst4 = 1e300;
        const int tuples = std::max(10000, n_samples);
        for (int i = 0; i < tuples; ++i) {
            std::array<int, 6> t6;
            for (int& x : t6) x = pick(rng);
            const long I6 = integral_space6(t6);
            std::array<long, 6> om;
            for (int k = 0; k < 6; ++k) om[static_cast<std::size_t>(k)] = t6[static_cast<std::size_t>(k)] + 1;
            std::sort(om.begin(), om.end());
            worst6 = std::min({worst6, static_cast<double>(I6),
                               static_cast<double>(om[0] * om[1] * om[2] - I6)});
            std::array<int, 4> t4;
            for (int& x : t4) x = pick(rng);
            const long I4 = integral_space4(t4);
            long wmin = t4[0] + 1;
            for (int k = 1; k < 4; ++k) wmin = std::min<long>(wmin, t4[static_cast<std::size_t>(k)] + 1);
            worst4 = std::min({worst4, static_cast<double>(I4),
                               static_cast<double>(wmin - I4)});
        }
        rep.add("per_tuple_bounds_sextic", worst6 >= 0.0, worst6);
        rep.add("per_tuple_bounds_quartic", worst4 >= 0.0, worst4);
    }

    // diagonal cross-check: the sextic integral of cos t * e_0 equals 5/8
    {
        auto B = shared_spherical(2 * cap);
        const Truncation tr{2 * cap + 2, 2 * cap, 8};
        Field c0(B, tr);
        c0.at(1, 0) = 1.0;
        std::vector<const Field*> six(6, &c0);
        const double val = integral_of_product(six);
        rep.add("diagonal_sextic_value", std::abs(val - 5.0 / 8.0) <= 1e-12,
                1e-12 - std::abs(val - 5.0 / 8.0));
        rep.metrics["diagonal_sextic_value"] = val;
    }

    // unit-frequency variant (resolvent weight 1 instead of 1/gamma): reported
    {
        const StrichartzSups unit =
            sample_sups(seed + 2, std::max(4, n_samples / 2), delta, cap, 1.0, gamma);
        rep.metrics["sup_quartic_resolvent_omega1"] = unit.r3;
        rep.metrics["sup_quartic_resolvent_dual_omega1"] = unit.r4;
    }
    return rep;
}

VerifyReport check_resolvent_difference(std::uint64_t seed, int n_samples,
                                        double omega, double gamma, double eps) {
    VerifyReport rep;
    rep.suite = "resolvent_difference";
    rep.seed = seed;
    auto B = shared_spherical(32);
    const Truncation tr{64, 32, 8};

    const FrequencyCheck chk = in_omega_gamma(omega, gamma, tr.Lmax);
    rep.add("omega_certified", chk.passed, chk.margin);

    const double rm = resolvent_margin(omega, *B, tr);
    rep.add("divisor_margin_gamma_half", rm >= gamma / 2.0, rm - gamma / 2.0);
    rep.metrics["resolvent_margin"] = rm;

    std::mt19937_64 rng(seed);
    double worst = 1e300;
    for (int i = 0; i < n_samples; ++i) {
        Field w = project(random_full(rng, B, tr), Sector::W);
        Field d = apply_Lomega_inv(w, omega);
        d -= apply_Lomega_inv(w, 1.0);
        for (const auto& [r, s] : {std::pair{0.0, 0.0}, std::pair{1.0, 1.0}}) {
            const double lhs = norm_HrHs(d, r, s);
            const double rhs = 2.0 * eps / gamma * norm_HrHs(w, r + 1.0, s);
            worst = std::min(worst, rhs - lhs);
        }
    }
    rep.add("difference_bound", worst >= 0.0, worst);
    rep.metrics["difference_bound_worst_margin"] = worst;

    // the difference scales linearly in eps at fixed w (single mode (2,0))
    {
        Field w(B, tr);
        w.at(2, 0) = 1.0;
        auto diff_at = [&](double e) {
            const double om = std::sqrt(1.0 + e);
            Field d = apply_Lomega_inv(w, om);
            d -= apply_Lomega_inv(w, 1.0);
            return norm_HrHs(d, 0.0, 0.0);
        };
        const double slope = std::log2(diff_at(eps) / diff_at(eps / 2.0));
        rep.add("eps_linearity", std::abs(slope - 1.0) <= 0.05,
                0.05 - std::abs(slope - 1.0));
        rep.metrics["eps_slope"] = slope;
    }

    // sharpness direction: without the extra time derivative the bound fails
    // for frequency-concentrated fields (reported, not asserted)
    {
        Field w(B, tr);
        w.at(tr.Lmax, 0) = 1.0;  // high-frequency single mode
        Field d = apply_Lomega_inv(w, omega);
        d -= apply_Lomega_inv(w, 1.0);
        rep.metrics["unweighted_ratio_high_ell"] =
            norm_HrHs(d, 0.0, 0.0) / (2.0 * eps / gamma * norm_HrHs(w, 0.0, 0.0));
    }
    return rep;
}

VerifyReport evolve_and_compare(const Field& u, const ProblemSpec& spec,
                                int steps_per_period, int periods, bool nonlinear) {
    VerifyReport rep;
    rep.suite = "evolution_round_trip";
    const auto& B = u.basis();
    const int J = u.Jmax();
    const std::size_t Q = B.quad.nodes.size();
    const double omega = spec.omega > 0.0 ? spec.omega : 1.0;
    const double T = 2.0 * std::acos(-1.0) / omega;
    const double dt = T / steps_per_period;
    const double om_max = static_cast<double>(B.omegas[static_cast<std::size_t>(J)]);
    if (dt * om_max > 1.0)
        throw StepTooLarge("evolve_and_compare: dt * max omega_j > 1");

    // t = 0 slice in spatial coefficients; zero initial velocity
    std::vector<double> a(static_cast<std::size_t>(J) + 1, 0.0);
    for (int j = 0; j <= J; ++j)
        for (int l = 0; l <= u.Lmax(); ++l) a[static_cast<std::size_t>(j)] += u.at(l, j);
    const std::vector<double> a0 = a;
    std::vector<double> vel(a.size(), 0.0);

    std::vector<double> phi(Q), fq(Q);
    auto force = [&](const std::vector<double>& aa, std::vector<double>& out) {
        for (std::size_t q = 0; q < Q; ++q) {
            double s = 0.0;
            for (int j = 0; j <= J; ++j)
                s += aa[static_cast<std::size_t>(j)] * B.node_values[static_cast<std::size_t>(j)][q];
            phi[q] = s;
        }
        for (std::size_t q = 0; q < Q; ++q) {
            double y = phi[q];
            for (int k = 1; k < spec.p; ++k) y *= phi[q];
            fq[q] = y;
        }
        for (int j = 0; j <= J; ++j) {
            const double wj = static_cast<double>(B.omegas[static_cast<std::size_t>(j)]);
            double proj = 0.0;
            if (nonlinear)
                for (std::size_t q = 0; q < Q; ++q)
                    proj += B.quad.weights[q] * fq[q] * B.node_values[static_cast<std::size_t>(j)][q];
            out[static_cast<std::size_t>(j)] =
                -wj * wj * aa[static_cast<std::size_t>(j)] - proj;
        }
    };
    auto energy = [&](const std::vector<double>& aa, const std::vector<double>& vv) {
        double e = 0.0;
        for (int j = 0; j <= J; ++j) {
            const double wj = static_cast<double>(B.omegas[static_cast<std::size_t>(j)]);
            e += 0.5 * vv[static_cast<std::size_t>(j)] * vv[static_cast<std::size_t>(j)] +
                 0.5 * wj * wj * aa[static_cast<std::size_t>(j)] * aa[static_cast<std::size_t>(j)];
        }
        if (nonlinear) {
            for (std::size_t q = 0; q < Q; ++q) {
                double s = 0.0;
                for (int j = 0; j <= J; ++j)
                    s += aa[static_cast<std::size_t>(j)] * B.node_values[static_cast<std::size_t>(j)][q];
                double y = s;
                for (int k = 1; k <= spec.p; ++k) y *= s;
                e += B.quad.weights[q] * y / (spec.p + 1);
            }
        }
        return e;
    };

    std::vector<double> F(a.size());
    force(a, F);
    const double E0 = energy(a, vel);
    double Edrift = 0.0;
    for (long step = 0; step < static_cast<long>(steps_per_period) * periods; ++step) {
        for (std::size_t j = 0; j < a.size(); ++j) vel[j] += 0.5 * dt * F[j];
        for (std::size_t j = 0; j < a.size(); ++j) a[j] += dt * vel[j];
        force(a, F);
        for (std::size_t j = 0; j < a.size(); ++j) vel[j] += 0.5 * dt * F[j];
        if ((step + 1) % 1024 == 0)
            Edrift = std::max(Edrift, std::abs(energy(a, vel) - E0) / std::abs(E0));
    }
    Edrift = std::max(Edrift, std::abs(energy(a, vel) - E0) / std::abs(E0));

    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        num += (a[j] - a0[j]) * (a[j] - a0[j]);
        den += a0[j] * a0[j];
    }
    const double mismatch = std::sqrt(num / den);
    const double tol = nonlinear ? 1e-4 : 1e-10;
    rep.add("round_trip_mismatch", mismatch <= tol, tol - mismatch);
    rep.metrics["mismatch"] = mismatch;
    rep.metrics["energy_drift"] = Edrift;
    rep.metrics["period"] = T;
    return rep;
}

VerifyReport scaling_sweep(const ProblemSpec& spec_template,
                           const std::vector<double>& eps_grid) {
    VerifyReport rep;
    rep.suite = "scaling_law";
    std::vector<double> xs, ys;
    for (double e : eps_grid) {
        ProblemSpec spec = spec_template;
        spec.eps = e;
        spec.finalize();
        const MountainPassReport mp = find_critical_point(spec, 1, 6);
        xs.push_back(std::log(e));
        ys.push_back(std::log(norm_V(mp.v1_star, 1.0)));
        rep.metrics["v1_norm_eps_" + std::to_string(e)] = norm_V(mp.v1_star, 1.0);
    }
    const std::size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, see = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ys[i] - my - slope * (xs[i] - mx);
        see += r * r;
    }
    const double width =
        n > 2 ? std::sqrt(see / (static_cast<double>(n) - 2.0) / sxx) : 0.0;
    const double target = 1.0 / (homogeneity_q(spec_template.p) - 2);
    rep.add("slope_matches_amplitude_law", std::abs(slope - target) <= 0.05,
            0.05 - std::abs(slope - target));
    rep.metrics["slope"] = slope;
    rep.metrics["slope_target"] = target;
    rep.metrics["slope_confidence_width"] = width;
    return rep;
}

VerifyReport regularity_sweep(const LSState& st,
                              const std::vector<std::pair<double, double>>& rs_grid,
                              int N) {
    VerifyReport rep;
    rep.suite = "regularity_profile";
    double worst = 1e300;
    for (const auto& [r, s] : rs_grid) {
        const double t = r + s;
        const double lhs = norm_V(st.v1, t);
        const double rhs = std::pow(static_cast<double>(N), t - 1.0) * norm_V(st.v1, 1.0);
        worst = std::min(worst, rhs - lhs + 1e-12 * rhs);
        const std::string tag = "_r" + std::to_string(r) + "_s" + std::to_string(s);
        rep.metrics["v2_norm" + tag] = norm_HrHs(st.v2, r, s);
        rep.metrics["w_norm" + tag] = norm_HrHs(st.w, r, s);
        rep.metrics["v1_norm" + tag] = norm_HrHs(st.v1, r, s);
    }
    rep.add("truncated_field_bound", worst >= 0.0, worst);
    return rep;
}

}  // namespace kgs3
