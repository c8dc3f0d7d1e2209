#include "kgs3/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace kgs3 {

namespace {
const double PI = std::acos(-1.0);

void check_same(const Field& a, const Field& b, const char* op) {
    if (!a.same_layout(b))
        throw BasisMismatch(std::string(op) + ": fields have different basis/truncation");
}
}  // namespace

Field::Field(std::shared_ptr<const SpatialBasis> basis, Truncation trunc)
    : basis_(std::move(basis)), trunc_(trunc) {
    if (!basis_) throw std::invalid_argument("Field: null basis");
    if (trunc_.Jmax > basis_->Jmax)
        throw std::invalid_argument("Field: truncation Jmax exceeds basis Jmax");
    c_.assign(static_cast<std::size_t>(trunc_.Lmax + 1) *
                  static_cast<std::size_t>(trunc_.Jmax + 1),
              0.0);
}

Field& Field::operator+=(const Field& o) {
    check_same(*this, o, "operator+");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}
Field& Field::operator-=(const Field& o) {
    check_same(*this, o, "operator-");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}
Field& Field::operator*=(double a) {
    for (double& v : c_) v *= a;
    return *this;
}

double Field::max_abs_coeff() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
}

double norm_HrHs(const Field& u, double r, double s) {
    double sum = 0.0;
    for (int l = 0; l <= u.Lmax(); ++l) {
        const double lw = std::pow(std::max(1.0, static_cast<double>(l)), 2.0 * r);
        for (int j = 0; j <= u.Jmax(); ++j) {
            const double c = u.at(l, j);
            if (c == 0.0) continue;
            const double om = static_cast<double>(u.basis().omegas[static_cast<std::size_t>(j)]);
            sum += lw * std::pow(om, 2.0 * s) * c * c;
        }
    }
    return std::sqrt(sum);
}

double norm_V(const Field& u, double s) {
    double sum = 0.0;
    for (int j = 0; j <= u.Jmax(); ++j) {
        const long om = u.basis().omegas[static_cast<std::size_t>(j)];
        if (om > u.Lmax()) break;
        const double c = u.at(static_cast<int>(om), j);
        if (c == 0.0) continue;
        sum += std::pow(static_cast<double>(om), 2.0 * s) * c * c;
    }
    return std::sqrt(sum);
}

bool is_kernel_mode(const SpatialBasis& B, int l, int j) {
    return B.omegas[static_cast<std::size_t>(j)] == l;
}

Field project(const Field& u, Sector sec) {
    Field out = u;
    const auto& B = u.basis();
    for (int l = 0; l <= u.Lmax(); ++l) {
        for (int j = 0; j <= u.Jmax(); ++j) {
            const bool ker = is_kernel_mode(B, l, j);
            const long om = B.omegas[static_cast<std::size_t>(j)];
            bool keep = false;
            switch (sec) {
                case Sector::V: keep = ker; break;
                case Sector::W: keep = !ker; break;
                case Sector::VlowN: keep = ker && om <= u.trunc().N_split; break;
                case Sector::VhighN: keep = ker && om > u.trunc().N_split; break;
            }
            if (!keep) out.at(l, j) = 0.0;
        }
    }
    return out;
}

Field apply_A(const Field& u) {
    Field out = u;
    for (int j = 0; j <= u.Jmax(); ++j) {
        const double om2 = static_cast<double>(u.basis().omegas[static_cast<std::size_t>(j)]);
        const double w = om2 * om2;
        for (int l = 0; l <= u.Lmax(); ++l) out.at(l, j) *= w;
    }
    return out;
}

Field apply_A_inv(const Field& u) {
    Field out = u;
    for (int j = 0; j <= u.Jmax(); ++j) {
        const double om = static_cast<double>(u.basis().omegas[static_cast<std::size_t>(j)]);
        const double w = 1.0 / (om * om);
        for (int l = 0; l <= u.Lmax(); ++l) out.at(l, j) *= w;
    }
    return out;
}

Field apply_Lomega_inv(const Field& w, double omega, double divisor_floor) {
    Field out = w;
    const double om2 = omega * omega;
    for (int l = 0; l <= w.Lmax(); ++l) {
        for (int j = 0; j <= w.Jmax(); ++j) {
            const double c = w.at(l, j);
            if (c == 0.0) continue;
            const double oj = static_cast<double>(w.basis().omegas[static_cast<std::size_t>(j)]);
            if (is_kernel_mode(w.basis(), l, j))
                throw KernelOverlap("apply_Lomega_inv: nonzero coefficient at kernel mode (l=" +
                                    std::to_string(l) + ", j=" + std::to_string(j) + ")");
            const double d = om2 * static_cast<double>(l) * l - oj * oj;
            if (std::abs(d) < divisor_floor)
                throw SmallDivisor("apply_Lomega_inv: divisor below floor at (l=" +
                                   std::to_string(l) + ", j=" + std::to_string(j) + ")");
            out.at(l, j) = c / d;
        }
    }
    return out;
}

Field apply_Lomega(const Field& u, double omega) {
    Field out = u;
    const double om2 = omega * omega;
    for (int l = 0; l <= u.Lmax(); ++l) {
        for (int j = 0; j <= u.Jmax(); ++j) {
            const double oj = static_cast<double>(u.basis().omegas[static_cast<std::size_t>(j)]);
            out.at(l, j) *= om2 * static_cast<double>(l) * l - oj * oj;
        }
    }
    return out;
}

//------------------------------------------------------------------------------
// Collocation transforms. Time uses the trapezoid/DCT-I rule on t_k = πk/M,
// exact for cos(at)cos(bt) whenever a+b < 2M; space uses the basis quadrature.
//------------------------------------------------------------------------------
TimeGrid TimeGrid::make(int M) {
    TimeGrid tg;
    tg.M = M;
    tg.nodes.resize(static_cast<std::size_t>(M) + 1);
    tg.weights.resize(static_cast<std::size_t>(M) + 1);
    for (int k = 0; k <= M; ++k) {
        tg.nodes[static_cast<std::size_t>(k)] = PI * k / M;
        tg.weights[static_cast<std::size_t>(k)] =
            (k == 0 || k == M) ? 1.0 / M : 2.0 / M;  // ∫ d̄t over the period (mass 2)
    }
    return tg;
}

std::vector<double> synthesize(const Field& u, const TimeGrid& tg) {
    const int M = tg.M, L = u.Lmax(), J = u.Jmax();
    const std::size_t Q = u.basis().quad.nodes.size();
    // time synthesis: Bmat[k][j] = Σ_ℓ u_{ℓ,j} cos(ℓ t_k)
    std::vector<double> Bmat(static_cast<std::size_t>(M + 1) * static_cast<std::size_t>(J + 1),
                             0.0);
    for (int k = 0; k <= M; ++k) {
        const double t = tg.nodes[static_cast<std::size_t>(k)];
        for (int l = 0; l <= L; ++l) {
            const double cl = std::cos(l * t);
            const std::size_t row = static_cast<std::size_t>(k) * (J + 1);
            for (int j = 0; j <= J; ++j) Bmat[row + static_cast<std::size_t>(j)] += u.at(l, j) * cl;
        }
    }
    // space synthesis: out[k][q] = Σ_j Bmat[k][j] e_j(x_q)
    std::vector<double> out(static_cast<std::size_t>(M + 1) * Q, 0.0);
    const auto& E = u.basis().node_values;
    for (int k = 0; k <= M; ++k) {
        const std::size_t row = static_cast<std::size_t>(k) * (J + 1);
        const std::size_t orow = static_cast<std::size_t>(k) * Q;
        for (int j = 0; j <= J; ++j) {
            const double b = Bmat[row + static_cast<std::size_t>(j)];
            if (b == 0.0) continue;
            const auto& ej = E[static_cast<std::size_t>(j)];
            for (std::size_t q = 0; q < Q; ++q) out[orow + q] += b * ej[q];
        }
    }
    return out;
}

Field analyze(const std::vector<double>& values, const TimeGrid& tg,
              std::shared_ptr<const SpatialBasis> basis, Truncation trunc) {
    const int M = tg.M, L = trunc.Lmax, J = trunc.Jmax;
    const std::size_t Q = basis->quad.nodes.size();
    // spatial analysis: Bmat[k][j] = Σ_q w_q values[k][q] e_j(x_q)
    std::vector<double> Bmat(static_cast<std::size_t>(M + 1) * static_cast<std::size_t>(J + 1),
                             0.0);
    const auto& E = basis->node_values;
    const auto& wq = basis->quad.weights;
    for (int k = 0; k <= M; ++k) {
        const std::size_t vrow = static_cast<std::size_t>(k) * Q;
        const std::size_t brow = static_cast<std::size_t>(k) * (J + 1);
        for (int j = 0; j <= J; ++j) {
            const auto& ej = E[static_cast<std::size_t>(j)];
            double s = 0.0;
            for (std::size_t q = 0; q < Q; ++q) s += wq[q] * values[vrow + q] * ej[q];
            Bmat[brow + static_cast<std::size_t>(j)] = s;
        }
    }
    // time analysis: c_{ℓ,j} = ∫ B(t,j) cos(ℓt) d̄t, halved at ℓ = 0.
    Field out(std::move(basis), trunc);
    for (int l = 0; l <= L; ++l) {
        const double scale = (l == 0) ? 0.5 : 1.0;
        for (int k = 0; k <= M; ++k) {
            const double f = tg.weights[static_cast<std::size_t>(k)] *
                             std::cos(l * tg.nodes[static_cast<std::size_t>(k)]) * scale;
            const std::size_t brow = static_cast<std::size_t>(k) * (J + 1);
            for (int j = 0; j <= J; ++j)
                out.at(l, j) += f * Bmat[brow + static_cast<std::size_t>(j)];
        }
    }
    return out;
}

Field multiply(const Field& u1, const Field& u2) {
    check_same(u1, u2, "multiply");
    const int M = 2 * u1.Lmax() + 1;
    const TimeGrid tg = TimeGrid::make(M);
    std::vector<double> a = synthesize(u1, tg);
    const std::vector<double> b = synthesize(u2, tg);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
    return analyze(a, tg, u1.basis_ptr(), u1.trunc());
}

Field power(const Field& u, int p) {
    if (p < 1) throw std::invalid_argument("power: exponent must be >= 1");
    if (p == 1) return u;
    const int M = p * u.Lmax() + 1;
    const TimeGrid tg = TimeGrid::make(M);
    std::vector<double> a = synthesize(u, tg);
    for (double& v : a) {
        double y = v;
        for (int k = 1; k < p; ++k) y *= v;
        v = y;
    }
    return analyze(a, tg, u.basis_ptr(), u.trunc());
}

Field multiply_convolution(const Field& u1, const Field& u2) {
    check_same(u1, u2, "multiply_convolution");
    if (!u1.basis().kind.is_spherical())
        throw BasisMismatch("multiply_convolution: spherical basis only");
    Field out(u1.basis_ptr(), u1.trunc());
    const int L = u1.Lmax(), J = u1.Jmax();
    for (int l1 = 0; l1 <= L; ++l1)
        for (int j1 = 0; j1 <= J; ++j1) {
            const double a = u1.at(l1, j1);
            if (a == 0.0) continue;
            for (int l2 = 0; l2 <= L; ++l2)
                for (int j2 = 0; j2 <= J; ++j2) {
                    const double b = u2.at(l2, j2);
                    if (b == 0.0) continue;
                    const double ab = a * b;
                    // cos l₁t cos l₂t = ½cos((l₁+l₂)t) + ½cos(|l₁−l₂|t); at
                    // ℓ=0 the synthesis coefficient equals ½∫, matching the
                    // halved analysis convention automatically.
                    for (int pass = 0; pass < 2; ++pass) {
                        const int l = pass == 0 ? l1 + l2 : std::abs(l1 - l2);
                        if (l > L) continue;
                        const double tf = 0.5;
                        for (int r : product_rule_indices(j1, j2)) {
                            if (r > J) continue;
                            out.at(l, r) += ab * tf;
                        }
                    }
                }
        }
    return out;
}

double integral_spacetime(const Field& u) { return 2.0 * u.at(0, 0); }

double inner_L2(const Field& u1, const Field& u2) {
    check_same(u1, u2, "inner_L2");
    double s = 0.0;
    for (int l = 0; l <= u1.Lmax(); ++l) {
        const double mass = (l == 0) ? 2.0 : 1.0;
        for (int j = 0; j <= u1.Jmax(); ++j) s += mass * u1.at(l, j) * u2.at(l, j);
    }
    return s;
}

Field restrict_to_period_subspace(const Field& v, int n) {
    if (n < 1) throw std::invalid_argument("restrict_to_period_subspace: n must be >= 1");
    Field out = project(v, Sector::V);
    for (int j = 0; j <= v.Jmax(); ++j) {
        const long om = v.basis().omegas[static_cast<std::size_t>(j)];
        if (om > v.Lmax()) break;
        if (om % n != 0) out.at(static_cast<int>(om), j) = 0.0;
    }
    return out;
}

int minimal_period_divisor(const Field& u, double rel_threshold) {
    const double thresh = rel_threshold * u.max_abs_coeff();
    int g = 0;
    for (int l = 1; l <= u.Lmax(); ++l)
        for (int j = 0; j <= u.Jmax(); ++j)
            if (std::abs(u.at(l, j)) > thresh) {
                g = std::gcd(g, l);
                break;
            }
    return g;
}

//------------------------------------------------------------------------------
// Serialization.
//------------------------------------------------------------------------------
std::string to_csv(const Field& u) {
    std::string out = "ell,j,coeff\n";
    char buf[64];
    for (int l = 0; l <= u.Lmax(); ++l)
        for (int j = 0; j <= u.Jmax(); ++j) {
            std::snprintf(buf, sizeof buf, "%d,%d,%.17g\n", l, j, u.at(l, j));
            out += buf;
        }
    return out;
}

Field from_csv(const std::string& csv, std::shared_ptr<const SpatialBasis> basis,
               Truncation trunc) {
    Field out(std::move(basis), trunc);
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line.rfind("ell,j,coeff", 0) != 0)
        throw std::runtime_error("from_csv: missing header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        int l = 0, j = 0;
        double c = 0.0;
        if (std::sscanf(line.c_str(), "%d,%d,%lg", &l, &j, &c) != 3)
            throw std::runtime_error("from_csv: malformed row: " + line);
        if (l < 0 || l > trunc.Lmax || j < 0 || j > trunc.Jmax)
            throw std::runtime_error("from_csv: index out of range: " + line);
        out.at(l, j) = c;
    }
    return out;
}

std::string realspace_csv(const Field& u, int nt, int nx) {
    const bool sph = u.basis().kind.is_spherical();
    const double xmax = sph ? PI : PI / 2.0;
    std::string out = "t,x,u\n";
    char buf[96];
    for (int it = 0; it < nt; ++it) {
        const double t = 2.0 * PI * it / nt;
        for (int ix = 1; ix < nx; ++ix) {
            const double x = xmax * ix / nx;
            double s = 0.0;
            for (int j = 0; j <= u.Jmax(); ++j) {
                double bj = 0.0;
                for (int l = 0; l <= u.Lmax(); ++l) bj += u.at(l, j) * std::cos(l * t);
                if (bj != 0.0) s += bj * u.basis().eval(j, x);
            }
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", t, x, s);
            out += buf;
        }
    }
    return out;
}

}  // namespace kgs3
