#include "kgs3/mountain_pass.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace kgs3 {

int homogeneity_q(int p) { return p == 2 ? 4 : p + 1; }

std::vector<std::pair<long, long>> kernel_subspace_modes(const ProblemSpec& spec,
                                                         long subspace_n) {
    if (subspace_n < 1) throw std::invalid_argument("subspace_n must be >= 1");
    std::vector<std::pair<long, long>> modes;
    const auto& om = spec.basis->omegas;
    for (long j = 0; j <= spec.trunc.Jmax; ++j) {
        const long w = om[static_cast<std::size_t>(j)];
        if (w <= spec.trunc.N_split && w % subspace_n == 0 && w <= spec.trunc.Lmax)
            modes.emplace_back(w, j);
    }
    if (modes.empty())
        throw EmptySubspace("no low kernel modes with frequency divisible by " +
                            std::to_string(subspace_n));
    return modes;
}

double eval_G(const Field& v, const ProblemSpec& spec) {
    if (spec.p == 2) {
        Field sq = power(v, 2);
        Field lw = apply_Lomega_inv(project(sq, Sector::W), 1.0, spec.tol.divisor_floor);
        return 0.5 * inner_L2(sq, lw);
    }
    return integral_spacetime(power(v, spec.p + 1)) / (spec.p + 1);
}

namespace {

// Sign flip making the optimized functional positive on its maximizers:
// for p = 2 the quartic functional is negative where it matters, and the
// mountain-pass level uses m = -inf rather than sup.
double sign_G(int p) { return p == 2 ? -1.0 : 1.0; }

struct RatioProblem {
    const ProblemSpec* spec;
    std::vector<std::pair<long, long>> modes;  // (ell, j)
    Truncation small_trunc;                    // trimmed layout for fast evaluation

    Field make_field(const std::vector<double>& c, const Truncation& tr) const {
        Field v(spec->basis, tr);
        for (std::size_t i = 0; i < modes.size(); ++i)
            v.at(static_cast<int>(modes[i].first), static_cast<int>(modes[i].second)) = c[i];
        return v;
    }

    // normalize to unit V^1 norm in place; returns previous norm
    double normalize(std::vector<double>& c) const {
        double s = 0.0;
        for (std::size_t i = 0; i < modes.size(); ++i) {
            const double w = static_cast<double>(modes[i].first);
            s += w * w * c[i] * c[i];
        }
        s = std::sqrt(s);
        if (s > 0.0)
            for (double& x : c) x /= s;
        return s;
    }

    double value(const std::vector<double>& c) const {
        return sign_G(spec->p) * eval_G(make_field(c, small_trunc), *spec);
    }

    // Euclidean gradient of the signed functional in the mode coordinates.
    std::vector<double> gradient(const std::vector<double>& c) const {
        const Field v = make_field(c, small_trunc);
        std::vector<double> g(modes.size());
        if (spec->p == 2) {
            Field lw = apply_Lomega_inv(project(power(v, 2), Sector::W), 1.0,
                                        spec->tol.divisor_floor);
            Field pr = multiply(v, lw);
            for (std::size_t i = 0; i < modes.size(); ++i)
                g[i] = sign_G(2) * 2.0 *
                       pr.at(static_cast<int>(modes[i].first),
                             static_cast<int>(modes[i].second));
        } else {
            Field pw = power(v, spec->p);
            for (std::size_t i = 0; i < modes.size(); ++i)
                g[i] = pw.at(static_cast<int>(modes[i].first),
                             static_cast<int>(modes[i].second));
        }
        return g;
    }
};

// Projected-gradient ascent of the 0-homogeneous ratio on the unit V^1
// sphere (metric diag(omega^2)); returns the final value.
double ascend(const RatioProblem& rp, std::vector<double>& c) {
    rp.normalize(c);
    double f = rp.value(c);
    double step = 0.5;
    for (int it = 0; it < 4000; ++it) {
        const std::vector<double> g = rp.gradient(c);
        // tangent direction in the omega^2 metric
        std::vector<double> d(c.size());
        double gc = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) gc += g[i] * c[i];
        double dn = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            const double w2 = static_cast<double>(rp.modes[i].first) *
                              static_cast<double>(rp.modes[i].first);
            d[i] = g[i] / w2 - gc * c[i];
            dn += w2 * d[i] * d[i];
        }
        if (std::sqrt(dn) <= 1e-14 * std::max(1.0, std::abs(f))) break;
        bool moved = false;
        while (step > 1e-16) {
            std::vector<double> cn(c.size());
            for (std::size_t i = 0; i < c.size(); ++i) cn[i] = c[i] + step * d[i];
            rp.normalize(cn);
            const double fn = rp.value(cn);
            if (fn > f) {
                c = std::move(cn);
                f = fn;
                step *= 1.3;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
    }
    return f;
}

}  // namespace

RatioEstimate estimate_mG(const ProblemSpec& spec, long subspace_n, int restarts) {
    RatioProblem rp;
    rp.spec = &spec;
    rp.modes = kernel_subspace_modes(spec, subspace_n);
    rp.small_trunc = Truncation{(spec.p + 1) * spec.trunc.N_split, spec.trunc.Jmax,
                                spec.trunc.N_split};
    const std::size_t d = rp.modes.size();

    // witness: the lowest-frequency single mode of the subspace
    std::vector<double> c0(d, 0.0);
    c0[0] = 1.0;
    rp.normalize(c0);
    const double witness = rp.value(c0);

    double best = -1e300;
    std::vector<double> cbest;
    std::mt19937_64 rng(0x5DEECE66DULL + 97ULL * static_cast<unsigned long long>(subspace_n));
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int r = 0; r < std::max(1, restarts); ++r) {
        std::vector<double> c(d);
        if (r == 0) {
            c = c0;
        } else {
            for (double& x : c) x = gauss(rng);
        }
        const double f = ascend(rp, c);
        if (f > best) {
            best = f;
            cbest = c;
        }
    }
    if (best < witness - 1e-12)
        throw std::logic_error("ratio optimization fell below its witness value");

    RatioEstimate out;
    out.m = best;
    out.witness = witness;
    rp.normalize(cbest);
    out.y = rp.make_field(cbest, spec.trunc);
    return out;
}

namespace {

double action_of_state(const Field& u, const ProblemSpec& spec) {
    double quad = 0.0;
    const auto& om = spec.basis->omegas;
    for (int l = 0; l <= u.Lmax(); ++l) {
        const double mass = (l == 0) ? 2.0 : 1.0;
        const double wl2 = spec.omega * spec.omega * l * l;
        for (int j = 0; j <= u.Jmax(); ++j) {
            const double wj = static_cast<double>(om[static_cast<std::size_t>(j)]);
            const double c = u.at(l, j);
            quad += mass * (wl2 - wj * wj) * c * c;
        }
    }
    return 0.5 * quad - integral_spacetime(power(u, spec.p + 1)) / (spec.p + 1);
}

Field grad_field(const Field& v1, const ProblemSpec& spec, LSState& st) {
    Field u = v1;
    u += st.v2;
    u += st.w;
    const Field pw = power(u, spec.p);
    Field g(v1.basis_ptr(), v1.trunc());
    const double se = spec.sigma() * spec.eps;
    const auto& om = spec.basis->omegas;
    for (int j = 0; j <= v1.Jmax(); ++j) {
        const long w = om[static_cast<std::size_t>(j)];
        if (w > spec.trunc.N_split || w > v1.Lmax()) continue;
        const int l = static_cast<int>(w);
        const double wj2 = static_cast<double>(w) * static_cast<double>(w);
        g.at(l, j) = (se * wj2 * v1.at(l, j) - pw.at(l, j)) / wj2;
    }
    return g;
}

}  // namespace

double eval_reduced_action(const Field& v1, const ProblemSpec& spec, LSState* warm) {
    LSState st = solve_range(v1, spec, warm);
    if (warm) *warm = st;
    Field u = st.v1;
    u += st.v2;
    u += st.w;
    return action_of_state(u, spec);
}

Field grad_reduced_action(const Field& v1, const ProblemSpec& spec, LSState* warm) {
    LSState st = solve_range(v1, spec, warm);
    if (warm) *warm = st;
    return grad_field(v1, spec, st);
}

MountainPassReport find_critical_point(const ProblemSpec& spec, long subspace_n,
                                       int restarts) {
    MountainPassReport rep;
    rep.p = spec.p;
    rep.eps = spec.eps;
    rep.subspace_n = subspace_n;

    const RatioEstimate re = estimate_mG(spec, subspace_n, restarts);
    rep.mG = re.m;
    rep.maximizer_y = re.y;

    const int q = homogeneity_q(spec.p);
    const double amp = std::pow(spec.eps / (q * re.m), 1.0 / (q - 2));
    const auto modes = kernel_subspace_modes(spec, subspace_n);
    const std::size_t d = modes.size();

    std::vector<double> c(d);
    for (std::size_t i = 0; i < d; ++i)
        c[i] = amp * re.y.at(static_cast<int>(modes[i].first),
                             static_cast<int>(modes[i].second));

    LSState warm;
    const double se = spec.sigma() * spec.eps;

    auto make_v1 = [&](const std::vector<double>& cc) {
        Field v(spec.basis, spec.trunc);
        for (std::size_t i = 0; i < d; ++i)
            v.at(static_cast<int>(modes[i].first), static_cast<int>(modes[i].second)) = cc[i];
        return v;
    };
    // Convergence is judged on the kernel-block equation residual relative to
    // the size of the nonlinear forcing, so that the assembled solution meets a
    // uniform relative residual target across amplitudes.
    double last_resk = 0.0;
    double last_fscale = 1.0;
    auto eval_grad = [&](const std::vector<double>& cc, Field* full) {
        Field v = make_v1(cc);
        Field g = grad_reduced_action(v, spec, &warm);
        Field u = v;
        u += warm.v2;
        u += warm.w;
        last_fscale = std::max(norm_HrHs(power(u, spec.p), 0.0, 0.0), 1e-290);
        Field B(v.basis_ptr(), v.trunc());
        for (std::size_t i = 0; i < d; ++i) {
            const double wj2 = static_cast<double>(modes[i].first) *
                               static_cast<double>(modes[i].first);
            B.at(static_cast<int>(modes[i].first), static_cast<int>(modes[i].second)) =
                wj2 * g.at(static_cast<int>(modes[i].first),
                           static_cast<int>(modes[i].second));
        }
        last_resk = norm_HrHs(B, 0.0, 0.0);
        if (full) *full = g;
        Eigen::VectorXd F(static_cast<Eigen::Index>(d));
        for (std::size_t i = 0; i < d; ++i)
            F[static_cast<Eigen::Index>(i)] =
                g.at(static_cast<int>(modes[i].first), static_cast<int>(modes[i].second));
        return F;
    };
    auto record_alphaR = [&](const std::vector<double>& cc, const Field& g) {
        Field v = make_v1(cc);
        const double nv = norm_V(v, 1.0);
        if (nv == 0.0) return;
        double dpsi = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            const double w2 = static_cast<double>(modes[i].first) *
                              static_cast<double>(modes[i].first);
            dpsi += w2 * cc[i] *
                    g.at(static_cast<int>(modes[i].first), static_cast<int>(modes[i].second));
        }
        // remainder pairing dR(v)[v] = dPsi(v)[v] - sigma*eps*|v|^2 + q*m-part
        const double dr =
            dpsi - se * nv * nv + q * sign_G(spec.p) * eval_G(v, spec);
        rep.alphaR = std::max(rep.alphaR, std::abs(dr) / std::pow(nv, q));
    };

    Field gfull;
    Eigen::VectorXd F = eval_grad(c, &gfull);
    record_alphaR(c, gfull);
    double lambda = 0.0;
    for (int it = 0; it < 80; ++it) {
        rep.newton_iters = it;
        const double nv1 = norm_V(make_v1(c), 1.0);
        rep.grad_norm = norm_V(gfull, 1.0);
        if (last_resk <= spec.tol.grad_tol * last_fscale) break;
        if (nv1 > 50.0 * amp)
            throw Diverged("find_critical_point: iterate left the admissible ball");

        // finite-difference Jacobian of the gradient
        Eigen::MatrixXd J(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        const double h = 1e-6 * std::max(1.0, amp);
        for (std::size_t k = 0; k < d; ++k) {
            std::vector<double> cp = c;
            cp[k] += h;
            J.col(static_cast<Eigen::Index>(k)) = (eval_grad(cp, nullptr) - F) / h;
        }

        bool accepted = false;
        for (int damp = 0; damp < 10 && !accepted; ++damp) {
            Eigen::MatrixXd Jd = J;
            if (lambda > 0.0)
                Jd += lambda * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d),
                                                         static_cast<Eigen::Index>(d));
            const Eigen::VectorXd s = Jd.fullPivLu().solve(-F);
            double t = 1.0;
            for (int ls = 0; ls < 30; ++ls) {
                std::vector<double> cn = c;
                for (std::size_t i = 0; i < d; ++i)
                    cn[i] += t * s[static_cast<Eigen::Index>(i)];
                Field gnew;
                Eigen::VectorXd Fn = eval_grad(cn, &gnew);
                if (Fn.norm() <= (1.0 - 1e-4 * t) * F.norm()) {
                    c = std::move(cn);
                    F = std::move(Fn);
                    gfull = gnew;
                    record_alphaR(c, gfull);
                    accepted = true;
                    lambda = (lambda > 0.0) ? lambda * 0.3 : 0.0;
                    if (lambda < 1e-12) lambda = 0.0;
                    break;
                }
                t *= 0.5;
            }
            if (!accepted) lambda = (lambda == 0.0) ? 1e-4 : lambda * 10.0;
        }
        if (!accepted) throw Stalled("find_critical_point: line search failed");
    }
    rep.grad_norm = norm_V(gfull, 1.0);
    if (last_resk > spec.tol.grad_tol * last_fscale)
        throw Stalled("find_critical_point: gradient tolerance not reached");

    rep.v1_star = make_v1(c);
    rep.state = solve_range(rep.v1_star, spec, &warm);
    Field u = rep.v1_star;
    u += rep.state.v2;
    u += rep.state.w;
    rep.action_value = action_of_state(u, spec);
    rep.residual = residual_full(u, spec);
    rep.minimal_divisor = minimal_period_divisor(u);
    return rep;
}

std::vector<MountainPassReport> multiplicity_sweep(const ProblemSpec& spec, int k_star) {
    std::map<long, double> ratio;
    for (long n = 1; n <= spec.trunc.N_split; ++n) {
        try {
            ratio[n] = estimate_mG(spec, n, 8).m;
        } catch (const EmptySubspace&) {
        }
    }
    std::vector<MountainPassReport> out;
    for (const auto& [n, mn] : ratio) {
        if (static_cast<int>(out.size()) >= k_star) break;
        // accept only when this subspace's ratio strictly dominates every
        // finer-period (coarser-divisor-multiple) subspace with a 0.9 margin
        bool dominant = true;
        for (const auto& [k, mk] : ratio)
            if (k > n && k % n == 0 && mk > 0.9 * mn) dominant = false;
        if (!dominant) continue;
        try {
            MountainPassReport rep = find_critical_point(spec, n);
            bool dup = false;
            for (const auto& r : out)
                if (r.minimal_divisor == rep.minimal_divisor) dup = true;
            if (!dup) out.push_back(std::move(rep));
        } catch (const std::exception& e) {
            MountainPassReport bad;
            bad.p = spec.p;
            bad.eps = spec.eps;
            bad.subspace_n = n;
            bad.note = std::string("branch failed: ") + e.what();
            // failed branches are recorded but never counted
        }
    }
    if (static_cast<int>(out.size()) < k_star && !out.empty())
        out.back().note = "insufficient branches: found " + std::to_string(out.size()) +
                          " of " + std::to_string(k_star);
    return out;
}

}  // namespace kgs3
