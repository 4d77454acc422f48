#pragma once

// Time integration of the rescaled relaxation system
//
//   d_t m   + (1/eps) sum_i dx_i w_i = 0
//   d_t w_i + (1/eps) a_i dx_i m + w_i/eps^2 = (1/eps) g_i(m),
//
// where m = u - ubar, w_i = eps (v_i - vbar), g_i(m) = f_i(ubar+m) - vbar.
// Two eps-uniformly stable schemes:
//
//   etd        exact per-mode propagator for the full linear part plus an
//              exponential-midpoint treatment of the Duhamel source term;
//              exact when f == 0, stiffly accurate as eps -> 0
//   strang_ap  Strang splitting R(dt/2) H(dt) R(dt/2) of two exactly solved
//              substeps: R damps w toward eps g(m) (m frozen), H is the
//              per-mode acoustic rotation (damping and source excluded);
//              asymptotic-preserving and non-expansive in the weighted norm
//
// Nyquist rows carry no conjugate partner, so their odd derivative vanishes;
// the per-mode tables treat them as xi = 0 (matching grid::derivative) to
// keep fields real.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "flux.hpp"
#include "grid.hpp"
#include "littlewood_paley.hpp"
#include "rng.hpp"
#include "symbol.hpp"

namespace jinxin {

enum class Scheme { strang_ap, etd };

inline const char* scheme_name(Scheme s) { return s == Scheme::etd ? "etd" : "strang_ap"; }

inline Scheme scheme_from_name(const std::string& s) {
    if (s == "etd") return Scheme::etd;
    if (s == "strang_ap") return Scheme::strang_ap;
    throw std::invalid_argument("unknown scheme: " + s);
}

struct RelaxState {
    double t = 0.0;
    SpectralField m;                // u - ubar
    std::vector<SpectralField> w;   // per direction, eps (v_i - vbar)
};

namespace detail {

inline void check_model_grid(const Grid& g, const ModelParams& P, const char* who) {
    if (g.d != P.d() || g.n != P.n)
        throw std::invalid_argument(std::string(who) + ": grid dimensions do not match the model");
}

struct ModeTables {
    std::vector<std::vector<double>> xi;  // [axis][point], Nyquist rows zeroed
    std::vector<double> S;                // sum_i a_i xi_i^2
};

inline ModeTables mode_tables(const Grid& g, const SymbolParams& sym) {
    ModeTables t;
    t.xi.assign(std::size_t(g.d), std::vector<double>(g.points(), 0.0));
    t.S.assign(g.points(), 0.0);
    for (std::size_t p = 0; p < g.points(); ++p) {
        auto idx = g.unflatten(p);
        for (int ax = 0; ax < g.d; ++ax) {
            const int k = g.kint(idx[std::size_t(ax)]);
            const double x = (k == g.N / 2) ? 0.0 : double(k) / g.L;
            t.xi[std::size_t(ax)][p] = x;
            t.S[p] += sym.a[std::size_t(ax)] * x * x;
        }
    }
    return t;
}

inline void check_finite(const RelaxState& s) {
    auto scan = [&](const SpectralField& f) {
        for (const cplx& z : f.a)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw NumericalFailure(s.t);
    };
    scan(s.m);
    for (const auto& wi : s.w) scan(wi);
}

}  // namespace detail

// dealiased spectral source fields g_i(m); empty vector when f == 0
inline std::vector<SpectralField> source_fields(const SpectralField& m, const ModelParams& P) {
    if (P.flux.kind == FluxKind::zero) return {};
    const Grid& g = m.grid;
    RealField mp = to_physical(m);
    RealField gi(g);
    std::vector<SpectralField> out;
    out.reserve(std::size_t(g.d));
    for (int i = 0; i < g.d; ++i) {
        for (int c = 0; c < g.n; ++c) {
            const double* src = mp.comp(c);
            double* dst = gi.comp(c);
            for (std::size_t p = 0; p < g.points(); ++p) dst[p] = P.g(i, src[p]);
        }
        SpectralField gh = to_spectral(gi);
        dealias(gh);
        out.push_back(std::move(gh));
    }
    return out;
}

// v_i0 = -a_i dx_i u0 + f_i(u0), so the effective mode vanishes at t = 0
inline RelaxState well_prepared_init(const RealField& u0, const ModelParams& P) {
    detail::check_model_grid(u0.grid, P, "well_prepared_init");
    RelaxState st;
    st.m = to_spectral(u0);
    dealias(st.m);
    for (int c = 0; c < u0.grid.n; ++c) st.m.comp(c)[0] -= P.ubar;
    auto gh = source_fields(st.m, P);
    st.w.resize(std::size_t(P.d()));
    for (int i = 0; i < P.d(); ++i) {
        SpectralField vi = gh.empty() ? SpectralField(u0.grid) : gh[std::size_t(i)];
        axpy(vi, -P.sym.a[std::size_t(i)], derivative(st.m, i));
        for (cplx& z : vi.a) z *= P.sym.eps;
        st.w[std::size_t(i)] = std::move(vi);
    }
    return st;
}

// mean-free real field supported on dyadic shells |xi| in [2^j_lo, 2^j_hi],
// rescaled so its homogeneous B^{d/2-1} + B^{d/2} (r = 1) norm equals eta
inline SpectralField random_perturbation(std::uint64_t seed, double eta, int j_lo, int j_hi,
                                         const Grid& g) {
    if (j_lo > j_hi) throw std::invalid_argument("random_perturbation: empty band");
    RealField noise(g);
    for (std::size_t i = 0; i < noise.a.size(); ++i)
        noise.a[i] = philox_pm1_pair(seed, i, 1).first;
    SpectralField nh = to_spectral(noise);

    const double lo = std::ldexp(1.0, j_lo) * (1.0 - 1e-12);
    const double hi = std::ldexp(1.0, j_hi) * (1.0 + 1e-12);
    std::size_t kept = 0;
    for (std::size_t p = 0; p < g.points(); ++p) {
        auto idx = g.unflatten(p);
        bool nyq = false;
        for (int ax = 0; ax < g.d; ++ax) nyq |= g.kint(idx[std::size_t(ax)]) == g.N / 2;
        const double r = g.xi_norm(p);
        const bool keep = !nyq && r >= lo && r <= hi;
        if (keep) {
            ++kept;
        } else {
            for (int c = 0; c < g.n; ++c) nh.comp(c)[p] = 0.0;
        }
    }
    if (kept == 0) throw std::invalid_argument("random_perturbation: band holds no resolved modes");
    if (eta == 0.0) {
        for (cplx& z : nh.a) z = 0.0;
        return nh;
    }
    DyadicFilter f = build_partition(g);
    const double s0 = 0.5 * g.d;
    const double nrm = besov_norm(nh, {s0 - 1.0, 1.0, FreqRange::all}, f) +
                       besov_norm(nh, {s0, 1.0, FreqRange::all}, f);
    for (cplx& z : nh.a) z *= eta / nrm;
    return nh;
}

// R(tau): exact solution of d_t w_i = -w_i/eps^2 + (1/eps) g_i(m), m frozen
inline void relax_source_substep(RelaxState& s, double tau, const ModelParams& P) {
    const double eps = P.sym.eps;
    const double e = std::exp(-tau / (eps * eps));
    auto gh = source_fields(s.m, P);
    for (int i = 0; i < P.d(); ++i) {
        SpectralField& wi = s.w[std::size_t(i)];
        if (gh.empty()) {
            for (cplx& z : wi.a) z *= e;
        } else {
            const SpectralField& gi = gh[std::size_t(i)];
            for (std::size_t k = 0; k < wi.a.size(); ++k)
                wi.a[k] = e * wi.a[k] + eps * (1.0 - e) * gi.a[k];
        }
    }
}

// H(tau): exact per-mode rotation of the undamped acoustic pair (m_hat, p),
// p = sum_i xi_i w_hat_i, at angular rate sqrt(S)/eps; the complement of the
// forcing direction is frozen
inline void hyperbolic_substep(RelaxState& s, double tau, const ModelParams& P) {
    const Grid& g = s.m.grid;
    detail::check_model_grid(g, P, "hyperbolic_substep");
    const double eps = P.sym.eps;
    const auto tabs = detail::mode_tables(g, P.sym);
    const std::size_t M = g.points();
    std::vector<cplx*> wp(std::size_t(g.d));
    for (int c = 0; c < g.n; ++c) {
        cplx* mp = s.m.comp(c);
        for (int i = 0; i < g.d; ++i) wp[std::size_t(i)] = s.w[std::size_t(i)].comp(c);
        for (std::size_t p = 0; p < M; ++p) {
            const double S = tabs.S[p];
            if (S == 0.0) continue;
            const double rootS = std::sqrt(S);
            const double om = rootS / eps;
            const double c0 = std::cos(om * tau), s0 = std::sin(om * tau);
            cplx pp = 0.0;
            for (int i = 0; i < g.d; ++i) pp += tabs.xi[std::size_t(i)][p] * wp[std::size_t(i)][p];
            const cplx mh = mp[p];
            const cplx pnew = cplx(0.0, -s0 * rootS) * mh + c0 * pp;
            mp[p] = c0 * mh + cplx(0.0, -s0 / rootS) * pp;
            const cplx dalpha = (pnew - pp) / S;
            for (int i = 0; i < g.d; ++i)
                wp[std::size_t(i)][p] += dalpha * P.sym.a[std::size_t(i)] * tabs.xi[std::size_t(i)][p];
        }
    }
}

class RelaxStepper {
  public:
    RelaxStepper(const Grid& g, const ModelParams& P, double dt, Scheme scheme)
        : grid_(g), params_(P), dt_(dt), scheme_(scheme), tabs_(detail::mode_tables(g, P.sym)) {
        if (!(dt > 0.0)) throw std::invalid_argument("RelaxStepper: dt must be > 0");
        detail::check_model_grid(g, P, "RelaxStepper");
        if (scheme_ == Scheme::etd) {
            fill_etd(half_, dt / 2.0);
            fill_etd(full_, dt);
        }
    }

    double dt() const { return dt_; }
    Scheme scheme() const { return scheme_; }

    void step(RelaxState& s) const {
        if (scheme_ == Scheme::etd) {
            auto N0 = scaled_source(s.m);
            RelaxState mid = s;
            apply_propagator(mid, half_);
            if (!N0.empty()) add_duhamel(mid, half_, N0);
            auto N1 = scaled_source(mid.m);
            apply_propagator(s, full_);
            if (!N1.empty()) add_duhamel(s, full_, N1);
        } else {
            relax_source_substep(s, dt_ / 2.0, params_);
            hyperbolic_substep(s, dt_, params_);
            relax_source_substep(s, dt_ / 2.0, params_);
        }
        s.t += dt_;
        detail::check_finite(s);
    }

  private:
    struct EtdTab {
        std::vector<detail::PropScalars> prop;
        std::vector<detail::DuhamelScalars> duh;
    };

    void fill_etd(EtdTab& tab, double tau) {
        const std::size_t M = grid_.points();
        tab.prop.resize(M);
        tab.duh.resize(M);
        for (std::size_t p = 0; p < M; ++p) {
            tab.prop[p] = detail::prop_scalars(tabs_.S[p], params_.sym.eps, tau);
            tab.duh[p] = detail::duhamel_scalars(tabs_.S[p], params_.sym.eps, tau);
        }
    }

    // (1/eps) g_hat_i(m), the Duhamel integrand
    std::vector<SpectralField> scaled_source(const SpectralField& m) const {
        auto gh = source_fields(m, params_);
        for (auto& f : gh)
            for (cplx& z : f.a) z /= params_.sym.eps;
        return gh;
    }

    void apply_propagator(RelaxState& s, const EtdTab& tab) const {
        const double eps = params_.sym.eps;
        const double mu = -0.5 / (eps * eps);
        const std::size_t M = grid_.points();
        std::vector<cplx*> wp(std::size_t(grid_.d));
        for (int c = 0; c < grid_.n; ++c) {
            cplx* mp = s.m.comp(c);
            for (int i = 0; i < grid_.d; ++i) wp[std::size_t(i)] = s.w[std::size_t(i)].comp(c);
            for (std::size_t p = 0; p < M; ++p) {
                const auto& ps = tab.prop[p];
                const double S = tabs_.S[p];
                if (S == 0.0) {
                    for (int i = 0; i < grid_.d; ++i) wp[std::size_t(i)][p] *= ps.decay;
                    continue;
                }
                cplx pp = 0.0;
                for (int i = 0; i < grid_.d; ++i)
                    pp += tabs_.xi[std::size_t(i)][p] * wp[std::size_t(i)][p];
                const double E00 = ps.C - mu * ps.Ssc;
                const double E11 = ps.C + mu * ps.Ssc;
                const cplx mh = mp[p];
                mp[p] = E00 * mh + cplx(0.0, -ps.Ssc / eps) * pp;
                const cplx alpha = cplx(0.0, -ps.Ssc / eps) * mh + (E11 / S) * pp;
                const cplx beta = pp / S;
                for (int i = 0; i < grid_.d; ++i) {
                    const double gi = params_.sym.a[std::size_t(i)] * tabs_.xi[std::size_t(i)][p];
                    wp[std::size_t(i)][p] = alpha * gi + ps.decay * (wp[std::size_t(i)][p] - beta * gi);
                }
            }
        }
    }

    void add_duhamel(RelaxState& s, const EtdTab& tab, const std::vector<SpectralField>& N) const {
        const double eps = params_.sym.eps;
        const double mu = -0.5 / (eps * eps);
        const std::size_t M = grid_.points();
        std::vector<cplx*> wp(std::size_t(grid_.d));
        std::vector<const cplx*> np(std::size_t(grid_.d));
        for (int c = 0; c < grid_.n; ++c) {
            cplx* mp = s.m.comp(c);
            for (int i = 0; i < grid_.d; ++i) {
                wp[std::size_t(i)] = s.w[std::size_t(i)].comp(c);
                np[std::size_t(i)] = N[std::size_t(i)].comp(c);
            }
            for (std::size_t p = 0; p < M; ++p) {
                const auto& ds = tab.duh[p];
                const double S = tabs_.S[p];
                if (S == 0.0) {
                    for (int i = 0; i < grid_.d; ++i) wp[std::size_t(i)][p] += ds.q * np[std::size_t(i)][p];
                    continue;
                }
                cplx pn = 0.0;
                for (int i = 0; i < grid_.d; ++i)
                    pn += tabs_.xi[std::size_t(i)][p] * np[std::size_t(i)][p];
                mp[p] += cplx(0.0, -ds.C2 / eps) * pn;
                const double Phi11 = ds.C1 + mu * ds.C2;
                const cplx shear = (Phi11 - ds.q) / S * pn;
                for (int i = 0; i < grid_.d; ++i) {
                    const double gi = params_.sym.a[std::size_t(i)] * tabs_.xi[std::size_t(i)][p];
                    wp[std::size_t(i)][p] += shear * gi + ds.q * np[std::size_t(i)][p];
                }
            }
        }
    }

    Grid grid_;
    ModelParams params_;
    double dt_;
    Scheme scheme_;
    detail::ModeTables tabs_;
    EtdTab half_, full_;
};

inline RelaxState simulate(RelaxState s, const ModelParams& P, double dt, int nsteps, Scheme scheme,
                           int stride = 0,
                           const std::function<void(const RelaxState&)>& on_snapshot = {}) {
    RelaxStepper st(s.m.grid, P, dt, scheme);
    if (on_snapshot) on_snapshot(s);
    for (int k = 1; k <= nsteps; ++k) {
        st.step(s);
        if (on_snapshot && ((stride > 0 && k % stride == 0) || k == nsteps)) on_snapshot(s);
    }
    return s;
}

}  // namespace jinxin
