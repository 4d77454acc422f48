// jx: pseudospectral runs of the relaxation system and its diffusive limit,
// two-directory comparison, eps sweeps with rate fits, symbol spectra, and
// frequency-localized norms of snapshot directories.
//
// Exit codes: 0 success, 2 validation failure, 3 numerical failure.

#include <cstdio>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jinxin/sweep.hpp"
#include "jinxin/symbol.hpp"

using namespace jinxin;

namespace {

struct KeyFlag {
    const char* flag;
    const char* key;
    const char* help;
};

const std::vector<KeyFlag> kBaseFlags = {
    {"--d", "model.d", "space dimension (1..3)"},
    {"--n", "model.n", "components per field"},
    {"--a", "model.a", "wave speeds a_i > 0 (comma list, one per direction)"},
    {"--ubar", "model.ubar", "background state u-bar"},
    {"--vbar", "model.vbar", "background state v-bar"},
    {"--flux", "model.flux", "flux kind: zero|quadratic|burgers1d|polynomial"},
    {"--flux-coeff", "model.flux_coeff",
     "flux coefficients (comma list; ';'-separated rows for polynomial)"},
    {"--N", "grid.N", "modes per axis (power of two >= 8)"},
    {"--L", "grid.L", "domain scale: torus of side 2*pi*L"},
    {"--dt", "time.dt", "time step"},
    {"--T", "time.T", "final time"},
    {"--stride", "time.stride", "snapshot stride in steps (0: first and last only)"},
    {"--k0", "lp.k0", "threshold offset: J_eps = -floor(log2 eps) - k0"},
    {"--j-min", "lp.j_min", "lowest dyadic block of the analysis range"},
    {"--j-max", "lp.j_max", "highest dyadic block of the analysis range"},
    {"--amp", "init.amp", "initial perturbation amplitude (Besov-normalized)"},
    {"--band-lo", "init.band_lo", "initial data: lowest dyadic block"},
    {"--band-hi", "init.band_hi", "initial data: highest dyadic block"},
    {"--discrepancy", "init.discrepancy",
     "initial relaxation-vs-limit discrepancy, in units of eps"},
    {"--discrepancy-low", "init.discrepancy_low",
     "low-frequency weight inside the discrepancy profile"},
    {"--seed", "seed", "master seed for all random data"},
    {"--output", "output", "output directory"},
};
const KeyFlag kEpsFlag = {"--eps", "model.eps", "relaxation parameter in (0,1)"};
const KeyFlag kSchemeFlag = {"--scheme", "scheme", "time integrator: strang_ap|etd"};
const std::vector<KeyFlag> kSweepFlags = {
    {"--sweep-eps", "sweep.eps", "eps values (comma list; >= 3, distinct, >= 2 octaves)"},
    {"--sigmas", "sweep.sigmas", "extra rate exponents sigma in (0,1) (comma list)"},
};

// config assembly: optional file + flag overrides, all funneled through
// parse_config so every constraint is checked in one place
struct ConfigCli {
    CLI::App* cmd = nullptr;
    std::string path;
    std::vector<KeyFlag> flags;
    std::map<std::string, std::string> raw;

    void attach(CLI::App* c, bool with_eps, bool with_scheme, bool with_sweep) {
        cmd = c;
        cmd->add_option("--config", path, "run configuration file (key = value lines)");
        if (with_eps) flags.push_back(kEpsFlag);
        flags.insert(flags.end(), kBaseFlags.begin(), kBaseFlags.end());
        if (with_scheme) flags.push_back(kSchemeFlag);
        if (with_sweep) flags.insert(flags.end(), kSweepFlags.begin(), kSweepFlags.end());
        for (const KeyFlag& f : flags) cmd->add_option(f.flag, raw[f.key], f.help);
    }

    ConfigResult load(const std::string& extra = "") const {
        std::string text = extra;
        std::set<std::string> over;
        for (const KeyFlag& f : flags)
            if (cmd->count(f.flag) > 0) over.insert(f.key);
        if (!path.empty()) {
            std::ifstream in(path);
            if (!in) {
                ConfigResult r;
                r.errors.push_back("cannot open config file: " + path);
                return r;
            }
            std::string line;
            while (std::getline(in, line)) {
                std::string bare = line.substr(0, line.find('#'));
                std::size_t eq = bare.find('=');
                if (eq != std::string::npos &&
                    over.count(jinxin::detail::trim(bare.substr(0, eq))))
                    continue;  // flag wins over the file
                text += line;
                text += '\n';
            }
        }
        for (const KeyFlag& f : flags)
            if (over.count(f.key)) text += std::string(f.key) + " = " + raw.at(f.key) + "\n";
        return parse_config(text);
    }
};

// base document for subcommands that read existing snapshot dirs: geometry
// comes from the first snapshot header, not from flags
std::string config_from_snapshot(const std::string& dir) {
    std::vector<std::string> files = list_snapshots(dir, "u");
    if (files.empty()) throw std::runtime_error("no u_*.bin snapshots in " + dir);
    SnapshotMeta m = read_snapshot(files.front()).second;
    std::ostringstream os;
    os << "model.eps = " << (m.eps > 0.0 && m.eps < 1.0 ? format_double(m.eps) : "0.5") << "\n"
       << "model.d = " << m.d << "\nmodel.n = " << m.n << "\n"
       << "grid.N = " << m.N << "\ngrid.L = " << format_double(m.L) << "\n";
    if (m.d > 1) {
        os << "model.a = 1";
        for (int k = 1; k < m.d; ++k) os << ",1";
        os << "\n";
    }
    return os.str();
}

int require_ok(const ConfigResult& r) {
    if (r.ok()) return 0;
    std::cerr << r.error_text();
    return 2;
}

int cmd_simulate(const ConfigCli& cc) {
    ConfigResult r = cc.load();
    if (int rc = require_ok(r)) return rc;
    Trajectory traj = run_relax_system(r.config, r.config.eps, r.config.output);
    std::cout << "wrote " << traj.size() << " snapshots and norms.csv to " << r.config.output
              << "\n";
    return 0;
}

int cmd_limit(const ConfigCli& cc) {
    ConfigResult r = cc.load();
    if (int rc = require_ok(r)) return rc;
    Trajectory traj = run_limit_system(r.config, r.config.output);
    std::cout << "wrote " << traj.size() << " snapshots and norms.csv to " << r.config.output
              << "\n";
    return 0;
}

int cmd_sweep(const ConfigCli& cc) {
    ConfigResult r = cc.load();
    if (int rc = require_ok(r)) return rc;
    if (r.config.sweep_eps.size() < 3) {
        std::cerr << "sweep.eps: need at least 3 values (got "
                  << r.config.sweep_eps.size() << ")\n";
        return 2;
    }
    json rep = run_sweep(r.config);
    int ok = 0;
    for (const auto& run : rep["runs"]) {
        std::cout << "eps " << format_double(run["eps"].get<double>()) << ": ";
        if (run["status"] == "ok") {
            ++ok;
            std::cout << "ok  total = " << format_double(run["norms"]["total"].get<double>())
                      << "\n";
        } else {
            std::cout << "FAILED  " << run["error"].get<std::string>() << "\n";
        }
    }
    for (const auto& [name, fit] : rep["fits"].items()) {
        std::cout << "fit " << name << ": ";
        if (fit.contains("slope"))
            std::cout << "slope = " << format_double(fit["slope"].get<double>())
                      << "  r2 = " << format_double(fit["r2"].get<double>()) << "\n";
        else
            std::cout << fit["error"].get<std::string>() << "\n";
    }
    std::cout << "report: " << r.config.output << "/report.json\n";
    return ok > 0 ? 0 : 3;
}

int cmd_compare(const ConfigCli& cc, const std::string& dir_a, const std::string& dir_b,
                const std::string& outdir) {
    ConfigResult r = cc.load(cc.path.empty() ? config_from_snapshot(dir_a) : "");
    if (int rc = require_ok(r)) return rc;
    json rep = compare_report(dir_a, dir_b, r.config, outdir);
    for (const auto& [name, vals] : rep["norms"].items())
        std::cout << name << " = " << format_double(vals[0].get<double>()) << "\n";
    std::cout << "report: " << outdir << "/report.json\n";
    return 0;
}

int cmd_spectrum(const std::string& a_csv, const std::string& eps_csv,
                 const std::vector<std::string>& xi_list, int kmax, const std::string& out) {
    std::vector<double> a, eps_vals;
    for (const std::string& p : jinxin::detail::split(a_csv, ',')) {
        double v;
        if (!jinxin::detail::parse_one_double(p, v))
            throw std::invalid_argument("--a: not a number: '" + p + "'");
        a.push_back(v);
    }
    for (const std::string& p : jinxin::detail::split(eps_csv, ',')) {
        double v;
        if (!jinxin::detail::parse_one_double(p, v))
            throw std::invalid_argument("--eps: not a number: '" + p + "'");
        eps_vals.push_back(v);
    }
    const std::size_t d = a.size();
    std::vector<std::vector<double>> xis;
    for (const std::string& s : xi_list) {
        std::vector<double> xi;
        for (const std::string& p : jinxin::detail::split(s, ',')) {
            double v;
            if (!jinxin::detail::parse_one_double(p, v))
                throw std::invalid_argument("--xi: not a number: '" + p + "'");
            xi.push_back(v);
        }
        if (xi.size() != d)
            throw std::invalid_argument("--xi: need exactly " + std::to_string(d) +
                                        " components");
        xis.push_back(std::move(xi));
    }
    if (xis.empty())  // default: integer frequencies along the first axis
        for (int k = 0; k <= kmax; ++k) {
            std::vector<double> xi(d, 0.0);
            xi[0] = double(k);
            xis.push_back(std::move(xi));
        }

    std::ofstream file;
    if (out != "-") file.open(out, std::ios::trunc);
    std::ostream& os = out == "-" ? std::cout : file;
    if (out != "-" && !file) throw std::runtime_error("cannot open " + out);

    for (std::size_t k = 0; k < d; ++k) os << "xi" << k + 1 << ",";
    os << "eps,re_lambda3,im_lambda3,re_lambda4,im_lambda4,regime\n";
    for (double eps : eps_vals) {
        SymbolParams P(eps, a);
        for (const auto& xi : xis) {
            ModeEigen e = eigenvalues(xi, P);
            for (double c : xi) os << format_double(c) << ",";
            os << format_double(eps) << "," << format_double(e.lam3().real()) << ","
               << format_double(e.lam3().imag()) << "," << format_double(e.lam4().real()) << ","
               << format_double(e.lam4().imag()) << "," << regime_name(e.regime) << "\n";
        }
    }
    if (out != "-") std::cout << "wrote " << out << "\n";
    return 0;
}

int cmd_norms(const std::string& dir, std::string s_csv, const std::string& r_str,
              const std::string& range_name, const std::string& rho_str, int k0,
              const std::string& out) {
    double eps = 0.0;
    Trajectory traj = trajectory_from_dir(dir, &eps);
    const Grid& g = traj.front().u.grid;

    double r = 1.0;
    if (!jinxin::detail::parse_one_double(r_str, r))
        throw std::invalid_argument("--r: must be 'inf' or a number >= 1");

    if (s_csv.empty()) {
        const double hd = 0.5 * double(g.d);
        s_csv = format_double(hd - 2.0) + "," + format_double(hd - 1.0) + "," +
                format_double(hd);
    }
    std::vector<double> ss;
    for (const std::string& p : jinxin::detail::split(s_csv, ',')) {
        double v;
        if (!jinxin::detail::parse_one_double(p, v))
            throw std::invalid_argument("--s: not a number: '" + p + "'");
        ss.push_back(v);
    }
    FreqRange range;
    if (range_name == "all") range = FreqRange::all;
    else if (range_name == "low") range = FreqRange::low;
    else if (range_name == "high") range = FreqRange::high;
    else throw std::invalid_argument("--range: must be all|low|high");
    double rho = std::numeric_limits<double>::infinity();
    if (rho_str != "inf" && !jinxin::detail::parse_one_double(rho_str, rho))
        throw std::invalid_argument("--rho: must be 'inf' or a number >= 1");

    int J = 0;
    if (range != FreqRange::all) {
        if (!(eps > 0.0))
            throw std::invalid_argument(
                "--range low/high needs relaxation snapshots (eps > 0 in the header)");
        J = threshold_Jeps(eps, k0);
    }

    DyadicFilter f = build_partition(g);
    TimeBlockHistory h;
    for (const FieldSnapshot& fs : traj) h.push(fs.t, block_norms(fs.u, f));

    std::ofstream file;
    if (out != "-") file.open(out, std::ios::trunc);
    std::ostream& os = out == "-" ? std::cout : file;
    if (out != "-" && !file) throw std::runtime_error("cannot open " + out);

    os << kNormCsvHeader;
    const bool instant = std::isinf(rho);
    for (std::size_t k = 0; k < h.t.size(); ++k) {
        if (!instant && k == 0) continue;  // running integral needs an interval
        TimeBlockHistory head;
        head.j_min = h.j_min;
        head.j_max = h.j_max;
        if (!instant) {
            head.t.assign(h.t.begin(), h.t.begin() + long(k) + 1);
            head.bj.assign(h.bj.begin(), h.bj.begin() + long(k) + 1);
        }
        for (double s : ss) {
            const double v = instant
                                 ? besov_norm_from_blocks(h.bj[k], h.j_min, h.j_max,
                                                          {s, r, range}, J)
                                 : chemin_lerner_norm(head, rho, s, r, range, J);
            os << norm_csv_row(h.t[k], s, r, range, rho, v);
        }
    }
    if (out != "-") std::cout << "wrote " << out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "jx: pseudospectral relaxation system, its diffusive limit, and "
        "frequency-localized diagnostics"};
    app.require_subcommand(1);

    ConfigCli sim_cc, lim_cc, swp_cc, cmp_cc;
    CLI::App* sim = app.add_subcommand("simulate", "run the relaxation system");
    sim_cc.attach(sim, true, true, false);
    CLI::App* lim = app.add_subcommand("limit", "run the limit system");
    lim_cc.attach(lim, false, false, false);
    CLI::App* swp = app.add_subcommand("sweep", "eps sweep: run pairs, error norms, rate fits");
    swp_cc.attach(swp, true, true, true);

    CLI::App* cmp = app.add_subcommand("compare", "error norms between two snapshot dirs");
    std::string cmp_a, cmp_b, cmp_out = "compare";
    cmp->add_option("dir_a", cmp_a, "first snapshot directory")->required();
    cmp->add_option("dir_b", cmp_b, "second snapshot directory")->required();
    cmp->add_option("--out", cmp_out, "report directory");
    cmp_cc.attach(cmp, true, false, false);

    CLI::App* spc = app.add_subcommand("spectrum", "symbol eigenvalue table (CSV)");
    std::string spc_a = "1", spc_eps, spc_out = "-";
    std::vector<std::string> spc_xi;
    int spc_kmax = 16;
    spc->add_option("--a", spc_a, "wave speeds a_i (comma list; sets the dimension)");
    spc->add_option("--eps", spc_eps, "eps values (comma list, each in (0,1])")->required();
    spc->add_option("--xi", spc_xi, "frequency vector (comma list, repeatable)");
    spc->add_option("--kmax", spc_kmax, "default xi set: (0..kmax, 0, ...) on the first axis");
    spc->add_option("--out", spc_out, "output file ('-' for stdout)");

    CLI::App* nrm = app.add_subcommand("norms", "Besov / Chemin-Lerner norms of a snapshot dir");
    std::string nrm_dir, nrm_s, nrm_range = "all", nrm_rho = "inf", nrm_out = "-";
    std::string nrm_r = "1";
    int nrm_k0 = 2;
    nrm->add_option("dir", nrm_dir, "snapshot directory (u_*.bin)")->required();
    nrm->add_option("--s", nrm_s, "regularity indices (comma list; default d/2-2,d/2-1,d/2)");
    nrm->add_option("--r", nrm_r, "summation exponent r >= 1 (inf allowed)");
    nrm->add_option("--range", nrm_range, "frequency range: all|low|high");
    nrm->add_option("--rho", nrm_rho,
                    "time exponent: 'inf' for per-stamp norms, >= 1 for running integrals");
    nrm->add_option("--k0", nrm_k0, "threshold offset for low/high splits");
    nrm->add_option("--out", nrm_out, "output file ('-' for stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_cc);
        if (lim->parsed()) return cmd_limit(lim_cc);
        if (swp->parsed()) return cmd_sweep(swp_cc);
        if (cmp->parsed()) return cmd_compare(cmp_cc, cmp_a, cmp_b, cmp_out);
        if (spc->parsed()) return cmd_spectrum(spc_a, spc_eps, spc_xi, spc_kmax, spc_out);
        if (nrm->parsed()) return cmd_norms(nrm_dir, nrm_s, nrm_r, nrm_range, nrm_rho, nrm_k0,
                                            nrm_out);
    } catch (const NumericalFailure& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
