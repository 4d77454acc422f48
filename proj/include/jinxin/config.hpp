#pragma once

// Flat dotted key=value run configuration: UTF-8 text, '#' comments, one
// "section.key = value" per line.  parse_config collects *all* violations
// (unknown keys, malformed numbers, constraint breaches) instead of stopping
// at the first, so a bad file is diagnosed in one pass.

#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "jinxin/flux.hpp"
#include "jinxin/littlewood_paley.hpp"
#include "jinxin/relaxation.hpp"

namespace jinxin {

struct RunConfig {
    // model.*
    double eps = 0.1;
    int d = 1, n = 1;
    std::vector<double> a;  // defaults to ones once d is known
    double ubar = 0.0, vbar = 0.0;
    FluxKind flux_kind = FluxKind::zero;
    std::vector<double> flux_coeff;               // quadratic: one per direction
    std::vector<std::vector<double>> poly_coeff;  // polynomial: rows per direction
    // grid.*
    int N = 64;
    double L = 1.0;
    // time.*
    double dt = 1e-3, T = 0.1;
    int stride = 0;  // 0: snapshots at t=0 and t=T only
    // lp.*
    int k0 = 2;
    bool custom_j = false;
    int j_min = 0, j_max = 0;
    // init.*
    double init_amp = 1e-2;
    bool custom_band = false;
    int band_lo = 0, band_hi = 0;
    double disc_amp = 0.0;  // initial-data discrepancy, in units of eps
    double disc_low = 0.3;  // low-frequency weight inside the discrepancy profile
    // sweep.*
    std::vector<double> sweep_eps;
    std::vector<double> sigmas = {0.5};
    // top level
    Scheme scheme = Scheme::strang_ap;
    std::uint64_t seed = 1;
    std::string output = ".";

    FluxSpec flux() const {
        switch (flux_kind) {
            case FluxKind::zero: return FluxSpec::zero();
            case FluxKind::quadratic: return FluxSpec::quadratic(flux_coeff);
            case FluxKind::burgers1d: return FluxSpec::burgers1d();
            default: return FluxSpec::polynomial(poly_coeff);
        }
    }
    ModelParams model(double eps_override = 0.0) const {
        return ModelParams(SymbolParams(eps_override > 0.0 ? eps_override : eps, a), n, ubar,
                           vbar, flux());
    }
    Grid grid() const { return Grid(d, n, N, L); }
    DyadicFilter filter(const Grid& g) const {
        return custom_j ? build_partition(g, j_min, j_max) : build_partition(g);
    }
    // default initial-data band: well inside the resolved dyadic range
    std::pair<int, int> band(const DyadicFilter& f) const {
        if (custom_band) return {band_lo, band_hi};
        return {f.j_min + 2, f.j_max - 2};
    }
    int nsteps() const { return int(std::lround(T / dt)); }
};

struct ConfigResult {
    RunConfig config;
    std::vector<std::string> errors;
    bool ok() const { return errors.empty(); }
    std::string error_text() const {
        std::string all;
        for (const std::string& e : errors) {
            all += e;
            all += '\n';
        }
        return all;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline bool parse_one_double(const std::string& s, double& out) {
    errno = 0;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && !s.empty() && errno == 0;
}

inline bool parse_one_int(const std::string& s, long long& out) {
    errno = 0;
    char* end = nullptr;
    out = std::strtoll(s.c_str(), &end, 10);
    return end == s.c_str() + s.size() && !s.empty() && errno == 0;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(trim(item));
    if (!s.empty() && s.back() == sep) parts.push_back("");
    return parts;
}

}  // namespace detail

inline ConfigResult parse_config(const std::string& text) {
    using detail::parse_one_double;
    using detail::parse_one_int;
    using detail::split;
    using detail::trim;

    ConfigResult res;
    RunConfig& c = res.config;
    auto err = [&](const std::string& m) { res.errors.push_back(m); };

    std::set<std::string> seen;
    bool a_set = false, coeff_set = false;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            err("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) {
            err("line " + std::to_string(lineno) + ": empty key or value");
            continue;
        }
        if (!seen.insert(key).second) {
            err(key + ": duplicate key");
            continue;
        }

        auto want_double = [&](double& slot) {
            double v;
            if (parse_one_double(val, v)) slot = v;
            else err(key + ": not a number: '" + val + "'");
        };
        auto want_int = [&](int& slot) {
            long long v;
            if (parse_one_int(val, v)) slot = int(v);
            else err(key + ": not an integer: '" + val + "'");
        };
        auto want_list = [&](std::vector<double>& slot) {
            std::vector<double> out;
            bool ok = true;
            for (const std::string& p : split(val, ',')) {
                double v;
                if (parse_one_double(p, v)) out.push_back(v);
                else { ok = false; err(key + ": not a number: '" + p + "'"); }
            }
            if (ok) slot = std::move(out);
        };

        if (key == "model.eps") want_double(c.eps);
        else if (key == "model.d") want_int(c.d);
        else if (key == "model.n") want_int(c.n);
        else if (key == "model.a") { want_list(c.a); a_set = true; }
        else if (key == "model.ubar") want_double(c.ubar);
        else if (key == "model.vbar") want_double(c.vbar);
        else if (key == "model.flux") {
            try { c.flux_kind = flux_kind_from_name(val); }
            catch (const std::exception& e) { err(key + ": " + e.what()); }
        }
        else if (key == "model.flux_coeff") {
            // quadratic: comma list; polynomial: ';'-separated rows of comma lists
            coeff_set = true;
            c.poly_coeff.clear();
            bool ok = true;
            for (const std::string& row : split(val, ';')) {
                std::vector<double> r;
                for (const std::string& p : split(row, ',')) {
                    double v;
                    if (parse_one_double(p, v)) r.push_back(v);
                    else { ok = false; err(key + ": not a number: '" + p + "'"); }
                }
                c.poly_coeff.push_back(std::move(r));
            }
            if (ok && c.poly_coeff.size() == 1) c.flux_coeff = c.poly_coeff.front();
        }
        else if (key == "grid.N") want_int(c.N);
        else if (key == "grid.L") want_double(c.L);
        else if (key == "time.dt") want_double(c.dt);
        else if (key == "time.T") want_double(c.T);
        else if (key == "time.stride") want_int(c.stride);
        else if (key == "lp.k0") want_int(c.k0);
        else if (key == "lp.j_min") { want_int(c.j_min); c.custom_j = true; }
        else if (key == "lp.j_max") { want_int(c.j_max); c.custom_j = true; }
        else if (key == "init.amp") want_double(c.init_amp);
        else if (key == "init.band_lo") { want_int(c.band_lo); c.custom_band = true; }
        else if (key == "init.band_hi") { want_int(c.band_hi); c.custom_band = true; }
        else if (key == "init.discrepancy") want_double(c.disc_amp);
        else if (key == "init.discrepancy_low") want_double(c.disc_low);
        else if (key == "sweep.eps") want_list(c.sweep_eps);
        else if (key == "sweep.sigmas") want_list(c.sigmas);
        else if (key == "scheme") {
            try { c.scheme = scheme_from_name(val); }
            catch (const std::exception& e) { err(key + ": " + e.what()); }
        }
        else if (key == "seed") {
            long long v;
            if (parse_one_int(val, v) && v >= 0) c.seed = std::uint64_t(v);
            else err(key + ": not a non-negative integer: '" + val + "'");
        }
        else if (key == "output") c.output = val;
        else err(key + ": unknown key");
    }

    // ---- constraint validation (collect everything) ----
    if (!(c.eps > 0.0 && c.eps < 1.0))
        err("model.eps ∉ (0,1) (got " + std::to_string(c.eps) + ")");
    if (c.d < 1 || c.d > 3) err("model.d: must be 1, 2, or 3");
    if (c.n < 1) err("model.n: must be >= 1");
    if (!a_set) c.a.assign(std::size_t(std::max(c.d, 1)), 1.0);
    if (c.d >= 1 && c.d <= 3 && int(c.a.size()) != c.d)
        err("model.a: need exactly " + std::to_string(c.d) + " entries");
    for (std::size_t i = 0; i < c.a.size(); ++i)
        if (!(c.a[i] > 0.0))
            err("model.a: entry " + std::to_string(i + 1) + " must be positive");
    if (c.ubar < 0.0) err("model.ubar: must be >= 0");
    if (c.vbar < 0.0) err("model.vbar: must be >= 0");

    if (c.flux_kind == FluxKind::quadratic && int(c.flux_coeff.size()) != c.d)
        err("model.flux_coeff: quadratic flux needs one coefficient per direction");
    if (c.flux_kind == FluxKind::polynomial && int(c.poly_coeff.size()) != c.d)
        err("model.flux_coeff: polynomial flux needs one row per direction (';'-separated)");
    if (c.flux_kind == FluxKind::burgers1d) {
        if (c.d != 1) err("model.flux: burgers1d requires model.d = 1");
        if (c.ubar != 0.0 || c.vbar != 0.0)
            err("model.flux: burgers1d requires ubar = vbar = 0");
    }
    if (c.flux_kind != FluxKind::quadratic && c.flux_kind != FluxKind::polynomial && coeff_set)
        err("model.flux_coeff: only meaningful for quadratic/polynomial flux");

    if (c.N < 8 || (c.N & (c.N - 1)) != 0) err("grid.N: must be a power of two >= 8");
    if (!(c.L > 0.0)) err("grid.L: must be positive");
    if (!(c.dt > 0.0)) err("time.dt: must be positive");
    if (!(c.T > 0.0)) err("time.T: must be positive");
    if (c.T > 0.0 && c.dt > 0.0 && c.nsteps() < 1) err("time.T: shorter than one time step");
    if (c.stride < 0) err("time.stride: must be >= 0");
    if (c.k0 < 0) err("lp.k0: must be >= 0");
    if (c.custom_j && !(c.j_min < c.j_max)) err("lp.j_min/j_max: need j_min < j_max");
    if (!(c.init_amp >= 0.0)) err("init.amp: must be >= 0");
    if (c.custom_band && c.band_lo > c.band_hi) err("init.band_lo/band_hi: need lo <= hi");
    if (!(c.disc_amp >= 0.0 && c.disc_amp <= 1.0))
        err("init.discrepancy: must lie in [0,1] (units of eps)");
    if (!(c.disc_low >= 0.0)) err("init.discrepancy_low: must be >= 0");

    if (!c.sweep_eps.empty()) {
        std::set<double> uniq(c.sweep_eps.begin(), c.sweep_eps.end());
        if (uniq.size() != c.sweep_eps.size()) err("sweep.eps: values must be distinct");
        double lo = 1.0, hi = 0.0;
        for (double e : c.sweep_eps) {
            if (!(e > 0.0 && e < 1.0)) {
                err("sweep.eps ∉ (0,1) (got " + std::to_string(e) + ")");
                break;
            }
            lo = std::min(lo, e);
            hi = std::max(hi, e);
        }
        if (hi > 0.0 && hi < 4.0 * lo) err("sweep.eps: must span at least two octaves");
    }
    for (double s : c.sigmas)
        if (!(s > 0.0 && s < 1.0)) {
            err("sweep.sigmas: values must lie in (0,1)");
            break;
        }

    // cross checks that need constructible pieces
    if (res.ok()) {
        try { (void)c.model(); }
        catch (const std::exception& e) { err(std::string("model: ") + e.what()); }
        try {
            Grid g = c.grid();
            DyadicFilter f = c.filter(g);
            auto [lo, hi] = c.band(f);
            if (lo < f.j_min || hi > f.j_max)
                err("init.band: outside the dyadic range of the grid");
            if (c.disc_amp > 0.0) {
                // the discrepancy profile places one shell at 2^{J_eps}
                std::vector<double> eset = c.sweep_eps.empty()
                                               ? std::vector<double>{c.eps}
                                               : c.sweep_eps;
                for (double e : eset) {
                    int J = threshold_Jeps(e, c.k0);
                    if (J < f.j_min || J > hi) {
                        err("init.discrepancy: threshold block j = " + std::to_string(J) +
                            " (eps = " + std::to_string(e) +
                            ") outside the initial band; raise init.band_hi, grid.N, or "
                            "lower lp.k0");
                        break;
                    }
                }
            }
        } catch (const std::exception& e) {
            err(std::string("grid/lp: ") + e.what());
        }
    }
    return res;
}

inline ConfigResult load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        ConfigResult r;
        r.errors.push_back("cannot open config file: " + path);
        return r;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace jinxin
