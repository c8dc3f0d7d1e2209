// Command-line front end: configuration-driven solves, sweeps, multiplicity
// searches, verification suites, and evolution round trips, with JSON/CSV
// reports and a hashed output manifest.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "kgs3/mountain_pass.hpp"
#include "kgs3/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace kgs3;

namespace {

constexpr const char* kSchemaVersion = "1.0";

//------------------------------------------------------------------------------
// configuration
//------------------------------------------------------------------------------
struct RunConfig {
    int p = 5;
    std::string symmetry = "auto";  // "auto" | "spherical" | "hopf"
    int mu1 = 2, mu2 = 1;
    double gamma = 0.1;
    std::vector<double> eps_list;
    double eps_min = 1e-4, eps_max = 1e-2;
    int eps_count = 5;
    long ell_max = 0;
    Truncation trunc;
    Tolerances tol;
    double R = 1.0;
    int k_star = 2;
    std::vector<std::string> suites;
    std::uint64_t seed = 20240801;
    int n_samples = 40;
    int steps_per_period = 1 << 14;
    std::string out_dir = "out";
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json flat_to_json(const std::string& text) {
    json j = json::object();
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        json* node = &j;
        std::size_t pos = 0;
        while (true) {
            const auto dot = key.find('.', pos);
            const std::string part = key.substr(pos, dot - pos);
            if (dot == std::string::npos) {
                json parsed = json::parse(val, nullptr, false);
                if (parsed.is_discarded()) parsed = val;  // bare string
                (*node)[part] = parsed;
                break;
            }
            node = &(*node)[part];
            pos = dot + 1;
        }
    }
    return j;
}

void reject_unknown(const json& j, const std::vector<std::string>& allowed,
                    const std::string& where) {
    for (const auto& [k, v] : j.items())
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
            throw ConfigError("unknown key '" + where + k + "'");
}

RunConfig parse_config(const std::string& path) {
    RunConfig c;
    if (path.empty()) return c;
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    json j;
    if (first != std::string::npos && text[first] == '{') {
        j = json::parse(text, nullptr, false);
        if (j.is_discarded()) throw ConfigError("invalid JSON config");
    } else {
        j = flat_to_json(text);
    }
    reject_unknown(j, {"problem", "frequency", "truncation", "solver", "multiplicity",
                       "verify", "output", "evolve"},
                   "");
    if (j.contains("problem")) {
        const json& p = j["problem"];
        reject_unknown(p, {"p", "symmetry", "mu1", "mu2"}, "problem.");
        c.p = p.value("p", c.p);
        c.symmetry = p.value("symmetry", c.symmetry);
        c.mu1 = p.value("mu1", c.mu1);
        c.mu2 = p.value("mu2", c.mu2);
    }
    if (j.contains("frequency")) {
        const json& f = j["frequency"];
        reject_unknown(f, {"gamma", "eps", "eps_min", "eps_max", "count", "ell_max"},
                       "frequency.");
        c.gamma = f.value("gamma", c.gamma);
        if (f.contains("eps")) {
            if (f["eps"].is_array())
                c.eps_list = f["eps"].get<std::vector<double>>();
            else
                c.eps_list = {f["eps"].get<double>()};
        }
        c.eps_min = f.value("eps_min", c.eps_min);
        c.eps_max = f.value("eps_max", c.eps_max);
        c.eps_count = f.value("count", c.eps_count);
        c.ell_max = f.value("ell_max", c.ell_max);
    }
    if (j.contains("truncation")) {
        const json& t = j["truncation"];
        reject_unknown(t, {"Lmax", "Jmax", "N_split"}, "truncation.");
        c.trunc.Lmax = t.value("Lmax", c.trunc.Lmax);
        c.trunc.Jmax = t.value("Jmax", c.trunc.Jmax);
        c.trunc.N_split = t.value("N_split", c.trunc.N_split);
    }
    if (j.contains("solver")) {
        const json& s = j["solver"];
        reject_unknown(s, {"fp_tol", "grad_tol", "max_iter", "R"}, "solver.");
        c.tol.fp_tol = s.value("fp_tol", c.tol.fp_tol);
        c.tol.grad_tol = s.value("grad_tol", c.tol.grad_tol);
        c.tol.max_iter = s.value("max_iter", c.tol.max_iter);
        c.R = s.value("R", c.R);
    }
    if (j.contains("multiplicity")) {
        reject_unknown(j["multiplicity"], {"k_star"}, "multiplicity.");
        c.k_star = j["multiplicity"].value("k_star", c.k_star);
    }
    if (j.contains("verify")) {
        const json& v = j["verify"];
        reject_unknown(v, {"suites", "seed", "n_samples"}, "verify.");
        if (v.contains("suites")) c.suites = v["suites"].get<std::vector<std::string>>();
        c.seed = v.value("seed", c.seed);
        c.n_samples = v.value("n_samples", c.n_samples);
    }
    if (j.contains("evolve")) {
        reject_unknown(j["evolve"], {"steps_per_period"}, "evolve.");
        c.steps_per_period = j["evolve"].value("steps_per_period", c.steps_per_period);
    }
    if (j.contains("output")) {
        const json& o = j["output"];
        reject_unknown(o, {"directory", "formats"}, "output.");
        c.out_dir = o.value("directory", c.out_dir);
    }
    return c;
}

ProblemSpec make_spec(const RunConfig& c, double eps) {
    ProblemSpec spec;
    if (c.p != 2 && c.p != 3 && c.p != 5)
        throw ConfigError("unsupported exponent p=" + std::to_string(c.p));
    spec.p = c.p;
    bool auto_hopf = false;
    if (c.symmetry == "auto") {
        if (c.p == 3) {
            spec.kind = BasisKind::hopf(c.mu1, c.mu2);
            auto_hopf = true;
        } else {
            spec.kind = BasisKind::spherical();
        }
    } else if (c.symmetry == "spherical")
        spec.kind = BasisKind::spherical();
    else if (c.symmetry == "hopf")
        spec.kind = BasisKind::hopf(c.mu1, c.mu2);
    else
        throw ConfigError("unknown symmetry '" + c.symmetry + "'");
    spec.eps = eps;
    spec.gamma = c.gamma;
    spec.R = c.R;
    spec.trunc = c.trunc;
    if (auto_hopf) {
        // keep every spatial eigenfrequency representable in time: lower Jmax
        // until 2*Jmax + 1 + |mu1| + |mu2| fits below Lmax
        const long base = 1 + std::abs(c.mu1) + std::abs(c.mu2);
        const int jcap = static_cast<int>((spec.trunc.Lmax - base) / 2);
        spec.trunc.Jmax = std::min(spec.trunc.Jmax, jcap);
    }
    spec.tol = c.tol;
    spec.finalize(c.ell_max);
    return spec;
}

std::vector<double> eps_grid_of(const RunConfig& c) {
    if (!c.eps_list.empty()) return c.eps_list;
    std::vector<double> out;
    const auto grid = admissible_eps_grid(c.p, c.gamma, c.eps_min, c.eps_max,
                                          c.eps_count, std::max<long>(c.ell_max, c.trunc.Lmax));
    for (const auto& eo : grid) out.push_back(eo.eps);
    return out;
}

//------------------------------------------------------------------------------
// output: files, hashes, manifest
//------------------------------------------------------------------------------
std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

struct OutputDir {
    fs::path dir;
    json manifest_entries = json::array();

    explicit OutputDir(const std::string& d) : dir(d) { fs::create_directories(dir); }

    void write(const std::string& name, const std::string& content) {
        std::ofstream out(dir / name, std::ios::binary);
        out << content;
        char hex[32];
        std::snprintf(hex, sizeof hex, "%016llx",
                      static_cast<unsigned long long>(fnv1a64(content)));
        manifest_entries.push_back(
            {{"file", name}, {"bytes", content.size()}, {"fnv1a64", hex}});
    }
    void finish() {
        json m = {{"schema_version", kSchemaVersion}, {"files", manifest_entries}};
        std::ofstream out(dir / "manifest.json", std::ios::binary);
        out << m.dump(2) << "\n";
    }
};

json spec_json(const ProblemSpec& s) {
    return {{"p", s.p},
            {"symmetry", s.kind.is_spherical() ? "spherical" : "hopf"},
            {"mu1", s.kind.mu1},
            {"mu2", s.kind.mu2},
            {"eps", s.eps},
            {"omega", s.omega},
            {"gamma", s.gamma},
            {"Lmax", s.trunc.Lmax},
            {"Jmax", s.trunc.Jmax},
            {"N_split", s.trunc.N_split}};
}

json report_json(const MountainPassReport& r, const ProblemSpec& spec) {
    return {{"schema_version", kSchemaVersion},
            {"spec", spec_json(spec)},
            {"subspace_n", r.subspace_n},
            {"mG", r.mG},
            {"action_value", r.action_value},
            {"grad_norm", r.grad_norm},
            {"alphaR", r.alphaR},
            {"residual", r.residual},
            {"minimal_divisor", r.minimal_divisor},
            {"newton_iters", r.newton_iters},
            {"fixed_point_iters", r.state.iters},
            {"norm_v1_V1", norm_V(r.v1_star, 1.0)},
            {"norm_v2_H0", norm_HrHs(r.state.v2, 0.0, 0.0)},
            {"norm_w_H0", norm_HrHs(r.state.w, 0.0, 0.0)},
            {"note", r.note}};
}

json verify_json(const VerifyReport& r) {
    json cases = json::array();
    for (const auto& c : r.cases)
        cases.push_back({{"name", c.name},
                         {"passed", c.passed},
                         {"margin", c.margin},
                         {"detail", c.detail}});
    return {{"schema_version", kSchemaVersion},
            {"suite", r.suite},
            {"seed", r.seed},
            {"cases_run", r.cases_run},
            {"cases_passed", r.cases_passed},
            {"cases", cases},
            {"metrics", r.metrics}};
}

void write_error(OutputDir& out, const std::string& msg) {
    out.write("error.json",
              json({{"schema_version", kSchemaVersion}, {"error", msg}}).dump(2) + "\n");
    out.finish();
    std::cerr << "error: " << msg << "\n";
}

//------------------------------------------------------------------------------
// commands
//------------------------------------------------------------------------------
int cmd_solve(const RunConfig& c) {
    OutputDir out(c.out_dir);
    try {
        const double eps = eps_grid_of(c).front();
        const ProblemSpec spec = make_spec(c, eps);
        const MountainPassReport rep = find_critical_point(spec, 1);
        out.write("report.json", report_json(rep, spec).dump(2) + "\n");
        out.write("v1.csv", to_csv(rep.v1_star));
        out.write("v2.csv", to_csv(rep.state.v2));
        out.write("w.csv", to_csv(rep.state.w));
        Field u = rep.v1_star;
        u += rep.state.v2;
        u += rep.state.w;
        out.write("u_realspace.csv", realspace_csv(u, 64, 64));
        out.finish();
        return rep.residual <= 1e-8 ? 0 : 2;
    } catch (const Diverged& e) {
        write_error(out, e.what());
        return 2;
    } catch (const Stalled& e) {
        write_error(out, e.what());
        return 2;
    } catch (const std::exception& e) {
        write_error(out, e.what());
        return 1;
    }
}

int cmd_sweep(const RunConfig& c) {
    OutputDir out(c.out_dir);
    try {
        const std::vector<double> grid = eps_grid_of(c);
        if (grid.size() < 2) throw ConfigError("sweep needs >= 2 eps values");
        ProblemSpec tmpl = make_spec(c, grid.front());
        const VerifyReport rep = scaling_sweep(tmpl, grid);
        out.write("sweep_report.json", verify_json(rep).dump(2) + "\n");
        out.finish();
        return rep.passed() ? 0 : 2;
    } catch (const Diverged& e) {
        write_error(out, e.what());
        return 2;
    } catch (const std::exception& e) {
        write_error(out, e.what());
        return 1;
    }
}

int cmd_multiplicity(const RunConfig& c) {
    OutputDir out(c.out_dir);
    try {
        const double eps = eps_grid_of(c).front();
        const ProblemSpec spec = make_spec(c, eps);
        const auto reps = multiplicity_sweep(spec, c.k_star);
        json combined = json::array();
        int i = 0;
        for (const auto& r : reps) {
            const json rj = report_json(r, spec);
            out.write("branch_" + std::to_string(i++) + ".json", rj.dump(2) + "\n");
            combined.push_back(rj);
        }
        out.write("multiplicity_report.json",
                  json({{"schema_version", kSchemaVersion},
                        {"k_star", c.k_star},
                        {"found", reps.size()},
                        {"branches", combined}})
                          .dump(2) +
                      "\n");
        out.finish();
        return static_cast<int>(reps.size()) >= c.k_star ? 0 : 2;
    } catch (const std::exception& e) {
        write_error(out, e.what());
        return 1;
    }
}

int cmd_verify(const RunConfig& c) {
    OutputDir out(c.out_dir);
    try {
        std::vector<std::string> suites = c.suites;
        if (suites.empty())
            suites = {"exact_identities", "strichartz", "resolvent", "evolution",
                      "scaling", "regularity"};
        bool all_ok = true;
        // shared small solve for the solution-dependent suites
        std::optional<MountainPassReport> solved;
        std::optional<ProblemSpec> solved_spec;
        auto ensure_solve = [&]() {
            if (!solved) {
                solved_spec = make_spec(c, eps_grid_of(c).front());
                solved = find_critical_point(*solved_spec, 1);
            }
        };
        for (const std::string& s : suites) {
            VerifyReport rep;
            if (s == "exact_identities") {
                rep = check_exact_identities(c.seed, c.n_samples);
            } else if (s == "strichartz") {
                rep = check_strichartz(c.seed, std::min(c.n_samples, 24), 0.01, 16,
                                       0.0, c.gamma);
            } else if (s == "resolvent") {
                const double eps = eps_grid_of(c).front();
                rep = check_resolvent_difference(c.seed, c.n_samples,
                                                 std::sqrt(1.0 + eps), c.gamma, eps);
            } else if (s == "evolution") {
                ensure_solve();
                Field u = solved->v1_star;
                u += solved->state.v2;
                u += solved->state.w;
                rep = evolve_and_compare(u, *solved_spec, c.steps_per_period);
            } else if (s == "scaling") {
                std::vector<double> grid = eps_grid_of(c);
                if (grid.size() < 2) {
                    // a single configured eps cannot support a slope fit; fall
                    // back to the default admissible band around it
                    RunConfig cg = c;
                    cg.eps_list.clear();
                    grid = eps_grid_of(cg);
                }
                const ProblemSpec tmpl = make_spec(c, grid.front());
                rep = scaling_sweep(tmpl, grid);
            } else if (s == "regularity") {
                ensure_solve();
                rep = regularity_sweep(solved->state,
                                       {{0.0, 1.0}, {1.0, 1.0}, {0.5, 1.5}, {2.0, 1.0}},
                                       solved_spec->trunc.N_split);
            } else {
                throw ConfigError("unknown verify suite '" + s + "'");
            }
            out.write(rep.suite + ".json", verify_json(rep).dump(2) + "\n");
            all_ok = all_ok && rep.passed();
        }
        out.finish();
        return all_ok ? 0 : 2;
    } catch (const std::exception& e) {
        write_error(out, e.what());
        return 1;
    }
}

int cmd_evolve(const RunConfig& c) {
    OutputDir out(c.out_dir);
    try {
        const ProblemSpec spec = make_spec(c, eps_grid_of(c).front());
        const MountainPassReport rep = find_critical_point(spec, 1);
        Field u = rep.v1_star;
        u += rep.state.v2;
        u += rep.state.w;
        const VerifyReport ev = evolve_and_compare(u, spec, c.steps_per_period);
        out.write("solve_report.json", report_json(rep, spec).dump(2) + "\n");
        out.write("evolution_report.json", verify_json(ev).dump(2) + "\n");
        out.finish();
        return ev.passed() ? 0 : 2;
    } catch (const Diverged& e) {
        write_error(out, e.what());
        return 2;
    } catch (const std::exception& e) {
        write_error(out, e.what());
        return 1;
    }
}

int cmd_selftest(const RunConfig& c) {
    OutputDir out(c.out_dir);
    try {
        bool ok = true;
        const VerifyReport ids = check_exact_identities(20240801, 50);
        out.write("selftest_identities.json", verify_json(ids).dump(2) + "\n");
        ok = ok && ids.passed();

        // basis oracles: time-product formula vs quadrature; eigen residuals
        VerifyReport basis_rep;
        basis_rep.suite = "selftest_basis";
        basis_rep.seed = 20240801;
        {
            std::mt19937_64 rng(20240801);
            std::uniform_int_distribution<long> pick(0, 9);
            double worst = 0.0;
            for (int i = 0; i < 100; ++i) {
                std::vector<long> ells(4);
                for (long& l : ells) l = pick(rng);
                const Rational r = integral_time_product(ells);
                const int M = 64;
                const TimeGrid tg = TimeGrid::make(M);
                double q = 0.0;
                for (int k = 0; k <= M; ++k) {
                    double prod = 1.0;
                    for (long l : ells)
                        prod *= std::cos(static_cast<double>(l) * tg.nodes[static_cast<std::size_t>(k)]);
                    q += tg.weights[static_cast<std::size_t>(k)] * prod;
                }
                worst = std::max(worst, std::abs(q - r.value()));
            }
            basis_rep.add("time_product_vs_quadrature", worst <= 1e-12, 1e-12 - worst);
        }
        {
            const int m1 = 2, m2 = 1;
            auto B = std::make_shared<const SpatialBasis>(
                SpatialBasis::make(BasisKind::hopf(m1, m2), 12, 3));
            double worst = 0.0;
            for (int j = 0; j <= 12; ++j) {
                const double wj = static_cast<double>(B->omegas[static_cast<std::size_t>(j)]);
                for (std::size_t q = 2; q + 2 < B->quad.nodes.size(); q += 7) {
                    const double eta = B->quad.nodes[q];
                    const HopfEval he = eval_hopf_e_derivs(j, m1, m2, eta);
                    const double sn = std::sin(eta), cs = std::cos(eta);
                    const double lap = he.deta2 +
                                       2.0 * std::cos(2.0 * eta) / std::sin(2.0 * eta) * he.deta -
                                       (m1 * m1) / (sn * sn) * he.value -
                                       (m2 * m2) / (cs * cs) * he.value;
                    worst = std::max(worst, std::abs(lap - (1.0 - wj * wj) * he.value));
                }
            }
            basis_rep.add("hopf_eigen_residual", worst <= 1e-8, 1e-8 - worst);
        }
        out.write("selftest_basis.json", verify_json(basis_rep).dump(2) + "\n");
        ok = ok && basis_rep.passed();

        out.finish();
        (void)c;
        return ok ? 0 : 2;
    } catch (const std::exception& e) {
        write_error(out, e.what());
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral solver for time-periodic waves on the three-sphere"};
    app.require_subcommand(1);
    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    int jobs = 1;
    app.add_option("--config", config_path, "configuration file (JSON or key=value)");
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_option("--seed", seed, "seed override for verification suites");
    app.add_option("--jobs", jobs, "worker pool size (tasks stay deterministic)");
    auto* sub_solve = app.add_subcommand("solve", "converge one periodic solution");
    auto* sub_sweep = app.add_subcommand("sweep", "amplitude scaling sweep over eps");
    auto* sub_mult = app.add_subcommand("multiplicity", "search distinct minimal periods");
    auto* sub_verify = app.add_subcommand("verify", "run verification suites");
    auto* sub_evolve = app.add_subcommand("evolve", "solve then time-evolve one period");
    auto* sub_self = app.add_subcommand("selftest", "fixed-seed oracle self checks");
    // global options may appear after the subcommand name
    for (CLI::App* s : {sub_solve, sub_sweep, sub_mult, sub_verify, sub_evolve, sub_self})
        s->fallthrough();
    CLI11_PARSE(app, argc, argv);

    RunConfig c;
    try {
        c = parse_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    if (!out_dir.empty()) c.out_dir = out_dir;
    if (seed != 0) c.seed = seed;

    if (sub_solve->parsed()) return cmd_solve(c);
    if (sub_sweep->parsed()) return cmd_sweep(c);
    if (sub_mult->parsed()) return cmd_multiplicity(c);
    if (sub_verify->parsed()) return cmd_verify(c);
    if (sub_evolve->parsed()) return cmd_evolve(c);
    if (sub_self->parsed()) return cmd_selftest(c);
    return 1;
}
