#include "kgs3/diophantine.hpp"

#include <cmath>
#include <limits>

namespace kgs3 {

FrequencyCheck in_omega_gamma(double omega, double gamma, long ell_max) {
    FrequencyCheck chk;
    chk.omega = omega;
    chk.gamma = gamma;
    chk.ell_max = ell_max;
    chk.margin = std::numeric_limits<double>::infinity();
    for (long l = 1; l <= ell_max; ++l) {
        const double wl = omega * static_cast<double>(l);
        // Only the nearest integers can minimize |ωℓ − j|; skip j = ℓ and
        // j < 0 per the definition.
        const long lo = static_cast<long>(std::floor(wl));
        for (long j = lo; j <= lo + 1; ++j) {
            if (j < 0 || j == l) continue;
            const double m = std::abs(wl - static_cast<double>(j)) - gamma / static_cast<double>(l);
            if (m < chk.margin) {
                chk.margin = m;
                chk.worst_ell = l;
                chk.worst_j = j;
            }
        }
    }
    chk.passed = chk.margin >= 0.0;
    return chk;
}

int sigma_of_p(int p) {
    if (p == 2) return -1;
    if (p == 3 || p == 5) return +1;
    throw std::invalid_argument("sigma_of_p: unsupported exponent p=" + std::to_string(p));
}

std::vector<EpsOmega> admissible_eps_grid(int p, double gamma, double eps_min,
                                          double eps_max, int count, long ell_max) {
    if (!(0.0 < eps_min && eps_min < eps_max))
        throw std::invalid_argument("admissible_eps_grid: need 0 < eps_min < eps_max");
    if (count < 1) throw std::invalid_argument("admissible_eps_grid: count must be >= 1");
    const int sigma = sigma_of_p(p);
    std::vector<EpsOmega> out;
    for (int i = 0; i < count; ++i) {
        const double f = (count == 1) ? 0.0 : static_cast<double>(i) / (count - 1);
        const double eps = eps_min * std::pow(eps_max / eps_min, f);
        const double om2 = 1.0 + sigma * eps;
        if (om2 <= 0.0) continue;
        const double omega = std::sqrt(om2);
        if (in_omega_gamma(omega, gamma, ell_max).passed) out.push_back({eps, omega});
    }
    if (out.empty())
        throw EmptyGrid("admissible_eps_grid: no sample passed the frequency check "
                        "(lower gamma or widen the range)");
    return out;
}

double resolvent_margin(double omega, const SpatialBasis& basis, const Truncation& trunc) {
    double m = std::numeric_limits<double>::infinity();
    const double om2 = omega * omega;
    for (int l = 0; l <= trunc.Lmax; ++l)
        for (int j = 0; j <= trunc.Jmax; ++j) {
            const long oj = basis.omegas[static_cast<std::size_t>(j)];
            if (oj == l) continue;  // kernel mode, not part of the range
            const double d = std::abs(om2 * static_cast<double>(l) * l -
                                      static_cast<double>(oj) * oj);
            if (d < m) m = d;
        }
    return m;
}

}  // namespace kgs3
