#pragma once

// Run orchestration: deterministic initial data, single simulate/limit runs
// with snapshot + norm-CSV artifacts, directory-to-trajectory loading, the
// two-directory compare report, and the eps-sweep rate report.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "jinxin/config.hpp"
#include "jinxin/diagnostics.hpp"
#include "jinxin/io.hpp"

namespace jinxin {

using nlohmann::json;

// ---------------------------------------------------------------- initial data

// shared base state u0*: ubar + amp * band-limited random field (same seed for
// every eps of a sweep, so the limit initial data never varies across eps)
inline RealField initial_state_star(const RunConfig& c, const Grid& g, const DyadicFilter& f) {
    auto [lo, hi] = c.band(f);
    RealField u0(g);
    for (double& v : u0.a) v = c.ubar;
    if (c.init_amp > 0.0) {
        RealField pert = to_physical(random_perturbation(c.seed, c.init_amp, lo, hi, g));
        for (std::size_t i = 0; i < u0.a.size(); ++i) u0.a[i] += pert.a[i];
    }
    return u0;
}

// discrepancy profile Psi = disc_low * (shell at the lowest band block) + (shell
// at the eps threshold 2^{J_eps}), jointly normalized so that its norm in the
// (d/2-2) cap (d/2-1) intersection is exactly 1
inline SpectralField discrepancy_profile(const RunConfig& c, const Grid& g,
                                         const DyadicFilter& f, double eps) {
    const int J = threshold_Jeps(eps, c.k0);
    auto [lo, hi] = c.band(f);
    if (J < f.j_min || J > hi)
        throw std::invalid_argument("discrepancy: threshold block 2^J_eps not resolved");
    SpectralField psi = random_perturbation(c.seed + 101u, 1.0, lo, lo, g);
    for (cplx& v : psi.a) v *= c.disc_low;
    axpy(psi, 1.0, random_perturbation(c.seed + 202u, 1.0, J, J, g));
    const double hd = 0.5 * double(g.d);
    double nrm = besov_norm(psi, {hd - 2.0, 1.0, FreqRange::all}, f) +
                 besov_norm(psi, {hd - 1.0, 1.0, FreqRange::all}, f);
    if (!(nrm > 0.0)) throw std::runtime_error("discrepancy: empty profile");
    for (cplx& v : psi.a) v /= nrm;
    return psi;
}

// u0 = u0* + disc_amp * eps * Psi, so the initial discrepancy is <= eps exactly
inline RealField initial_state(const RunConfig& c, const Grid& g, const DyadicFilter& f,
                               double eps) {
    RealField u0 = initial_state_star(c, g, f);
    if (c.disc_amp > 0.0) {
        RealField d = to_physical(discrepancy_profile(c, g, f, eps));
        for (std::size_t i = 0; i < u0.a.size(); ++i) u0.a[i] += c.disc_amp * eps * d.a[i];
    }
    return u0;
}

// ------------------------------------------------------------- norm streaming

// instantaneous Besov rows of the u field at one stamp: s in {d/2-2, d/2-1, d/2},
// r = 1, rho written as inf; low/high ranges only when an eps threshold exists
inline void stream_norm_rows(std::ostream& out, const SpectralField& u, double t,
                             const DyadicFilter& f, int J, bool with_ranges) {
    const double hd = 0.5 * double(u.grid.d);
    const double inf = std::numeric_limits<double>::infinity();
    for (double s : {hd - 2.0, hd - 1.0, hd}) {
        out << norm_csv_row(t, s, 1.0, FreqRange::all, inf,
                            besov_norm(u, {s, 1.0, FreqRange::all}, f));
        if (with_ranges) {
            out << norm_csv_row(t, s, 1.0, FreqRange::low, inf,
                                besov_norm(u, {s, 1.0, FreqRange::low}, f, J));
            out << norm_csv_row(t, s, 1.0, FreqRange::high, inf,
                                besov_norm(u, {s, 1.0, FreqRange::high}, f, J));
        }
    }
}

namespace detail {

inline void write_stamp(const std::string& dir, int idx, const FieldSnapshot& fs, double eps) {
    write_snapshot(dir + "/" + snapshot_name("u", idx), to_physical(fs.u), fs.t, eps);
    for (std::size_t i = 0; i < fs.v.size(); ++i)
        write_snapshot(dir + "/" + snapshot_name("v" + std::to_string(i), int(idx)),
                       to_physical(fs.v[i]), fs.t, eps);
}

}  // namespace detail

// ------------------------------------------------------------------- run pair

// relaxation-system run: writes u_/v*_ snapshots and norms.csv, returns the
// unscaled trajectory
inline Trajectory run_relax_system(const RunConfig& c, double eps, const std::string& outdir) {
    std::filesystem::create_directories(outdir);
    Grid g = c.grid();
    ModelParams P = c.model(eps);
    DyadicFilter f = c.filter(g);
    const int J = threshold_Jeps(eps, c.k0);
    RelaxState s0 = well_prepared_init(initial_state(c, g, f, eps), P);

    std::ofstream norms(outdir + "/norms.csv", std::ios::trunc);
    norms << kNormCsvHeader;
    Trajectory traj;
    auto cb = [&](const RelaxState& st) {
        FieldSnapshot fs = unscale(st, P);
        detail::write_stamp(outdir, int(traj.size()), fs, eps);
        stream_norm_rows(norms, fs.u, st.t, f, J, true);
        traj.push_back(std::move(fs));
    };
    simulate(std::move(s0), P, c.dt, c.nsteps(), c.scheme, c.stride, cb);
    return traj;
}

// limit-system run from the shared base state u0* (eps never enters; snapshot
// headers record eps = 0)
inline Trajectory run_limit_system(const RunConfig& c, const std::string& outdir) {
    std::filesystem::create_directories(outdir);
    Grid g = c.grid();
    ModelParams P = c.model();  // a_i, flux; eps is irrelevant to the limit stepper
    DyadicFilter f = c.filter(g);
    LimitState s0;
    s0.u = to_spectral(initial_state_star(c, g, f));
    dealias(s0.u);

    std::ofstream norms(outdir + "/norms.csv", std::ios::trunc);
    norms << kNormCsvHeader;
    Trajectory traj;
    auto cb = [&](const LimitState& st) {
        FieldSnapshot fs = limit_snapshot(st, P);
        detail::write_stamp(outdir, int(traj.size()), fs, 0.0);
        stream_norm_rows(norms, fs.u, st.t, f, 0, false);
        traj.push_back(std::move(fs));
    };
    simulate_limit(std::move(s0), P, c.dt, c.nsteps(), c.stride, cb);
    return traj;
}

// ------------------------------------------------------------ directory loads

inline Trajectory trajectory_from_dir(const std::string& dir, double* eps_out = nullptr) {
    Trajectory traj;
    std::vector<std::string> ufiles = list_snapshots(dir, "u");
    if (ufiles.empty()) throw std::runtime_error("no u_*.bin snapshots in " + dir);
    for (std::size_t idx = 0; idx < ufiles.size(); ++idx) {
        auto [u, meta] = read_snapshot(ufiles[idx]);
        if (eps_out && idx == 0) *eps_out = meta.eps;
        FieldSnapshot fs;
        fs.t = meta.t;
        fs.u = to_spectral(u);
        for (int i = 0;; ++i) {
            std::string path =
                dir + "/" + snapshot_name("v" + std::to_string(i), int(idx));
            if (!std::filesystem::exists(path)) break;
            auto [v, vmeta] = read_snapshot(path);
            if (std::abs(vmeta.t - meta.t) > 1e-12 * std::max(1.0, std::abs(meta.t)))
                throw std::runtime_error("snapshot stamp mismatch inside " + dir);
            fs.v.push_back(to_spectral(v));
        }
        traj.push_back(std::move(fs));
    }
    return traj;
}

// ---------------------------------------------------------------- reports

namespace detail {

inline void write_series_csv(const std::string& path, const TimeBlockHistory& h) {
    std::ofstream out(path, std::ios::trunc);
    out << "t,j,value\n";
    for (std::size_t k = 0; k < h.t.size(); ++k)
        for (int j = h.j_min; j <= h.j_max; ++j)
            out << format_double(h.t[k]) << ',' << j << ','
                << format_double(h.bj[k][std::size_t(j - h.j_min)]) << '\n';
}

inline json norms_to_json(const ErrorNormReport& rep) {
    json out;
    out["u_linf"] = rep.rate.u_linf;
    out["u_l1"] = rep.rate.u_l1;
    out["u_lt2"] = rep.rate.u_lt2;
    out["v_l1"] = rep.rate.v_l1;
    out["total"] = rep.rate.total();
    for (const auto& [s, v] : rep.sigma) out["sigma_" + format_double(s)] = v;
    return out;
}

}  // namespace detail

// compare two snapshot directories (relaxation run vs limit run); emits
// report.json plus the block-norm time series of the differences
inline json compare_report(const std::string& dir_a, const std::string& dir_b,
                           const RunConfig& c, const std::string& outdir) {
    std::filesystem::create_directories(outdir);
    double eps_a = 0.0, eps_b = 0.0;
    Trajectory a = trajectory_from_dir(dir_a, &eps_a);
    Trajectory b = trajectory_from_dir(dir_b, &eps_b);
    const double eps = eps_a > 0.0 ? eps_a : (eps_b > 0.0 ? eps_b : c.eps);
    Grid g = c.grid();
    DyadicFilter f = c.filter(g);
    const int J = threshold_Jeps(eps, c.k0);
    ErrorNormReport rep = error_norms(a, b, f, J, c.sigmas);

    detail::write_series_csv(outdir + "/series_u.csv", rep.series.u);
    detail::write_series_csv(outdir + "/series_v.csv", rep.series.v);

    json out;
    out["eps"] = json::array({eps});
    out["J_eps"] = J;
    json norms = detail::norms_to_json(rep);
    for (auto& [key, val] : norms.items()) out["norms"][key] = json::array({val});
    out["fits"] = json::object();  // rate fits need a sweep (>= 3 eps values)
    std::ofstream(outdir + "/report.json", std::ios::trunc) << out.dump(2) << '\n';
    return out;
}

namespace detail {

// one sweep member: relaxation + limit run pair sharing u0*, then the error
// norms of their difference
inline json sweep_entry(const RunConfig& c, double eps) {
    const std::string dir = c.output + "/eps_" + format_double(eps);
    json entry;
    entry["eps"] = eps;
    try {
        Trajectory a = run_relax_system(c, eps, dir + "/jinxin");
        Trajectory b = run_limit_system(c, dir + "/limit");
        Grid g = c.grid();
        DyadicFilter f = c.filter(g);
        const int J = threshold_Jeps(eps, c.k0);
        ErrorNormReport rep = error_norms(a, b, f, J, c.sigmas);
        write_series_csv(dir + "/series_u.csv", rep.series.u);
        write_series_csv(dir + "/series_v.csv", rep.series.v);
        entry["status"] = "ok";
        entry["norms"] = norms_to_json(rep);
    } catch (const NumericalFailure& e) {
        entry["status"] = "failed";
        entry["error"] = e.what();
        entry["t"] = e.t;
    }
    return entry;
}

}  // namespace detail

// full eps sweep: the run pairs execute in a small work pool (they share no
// mutable state; every artifact lands in its own eps_* directory), then the
// report is assembled single-threaded in eps order, so output is deterministic
// regardless of scheduling.  Rate fits cover every aggregate norm across the
// eps values that succeeded.
inline json run_sweep(const RunConfig& c) {
    if (c.sweep_eps.size() < 3)
        throw std::invalid_argument("run_sweep: sweep.eps needs at least 3 values");
    std::filesystem::create_directories(c.output);

    std::vector<json> entries(c.sweep_eps.size());
    {
        std::atomic<std::size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mu;
        auto worker = [&] {
            for (std::size_t i = next.fetch_add(1); i < c.sweep_eps.size();
                 i = next.fetch_add(1)) {
                try {
                    entries[i] = detail::sweep_entry(c, c.sweep_eps[i]);
                } catch (...) {  // NumericalFailure stays per-entry; this is config/IO
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        };
        const std::size_t pool = std::min<std::size_t>(
            c.sweep_eps.size(), std::max(1u, std::thread::hardware_concurrency()));
        std::vector<std::thread> workers;
        for (std::size_t w = 1; w < pool; ++w) workers.emplace_back(worker);
        worker();
        for (std::thread& w : workers) w.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    json runs = json::array();
    std::vector<double> ok_eps;
    std::map<std::string, std::vector<double>> values;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        json& entry = entries[i];
        if (entry["status"] == "ok") {
            ok_eps.push_back(c.sweep_eps[i]);
            for (auto& [key, val] : entry["norms"].items())
                values[key].push_back(val.get<double>());
        }
        runs.push_back(std::move(entry));
    }

    json out;
    out["eps"] = c.sweep_eps;
    out["runs"] = runs;
    out["fits"] = json::object();
    std::vector<std::string> names = {"u_linf", "u_l1", "u_lt2", "v_l1", "total"};
    for (double s : c.sigmas) names.push_back("sigma_" + format_double(s));
    for (const std::string& name : names) {
        const std::vector<double>& vals = values[name];
        out["norms"][name] = vals;
        if (vals.size() < 3) {
            out["fits"][name] = {{"error", "fewer than 3 successful runs"}};
            continue;
        }
        try {
            RateFit fit = rate_fit(ok_eps, vals);
            out["fits"][name] = {{"slope", fit.slope},
                                 {"intercept", fit.intercept},
                                 {"r2", fit.r2}};
        } catch (const std::exception& e) {
            // e.g. all-zero errors on a zero-perturbation plan
            out["fits"][name] = {{"error", e.what()}};
        }
    }
    std::ofstream(c.output + "/report.json", std::ios::trunc) << out.dump(2) << '\n';
    return out;
}

}  // namespace jinxin
