#pragma once

// Solver for the limiting viscous conservation law
//
//   d_t u* + sum_i dx_i f_i(u*) = sum_i a_i dxx_i u*,
//
// by an integrating-factor midpoint scheme: the diffusion semigroup
// G(tau) = e^{-sum_i a_i xi_i^2 tau} is applied exactly per mode and the
// dealiased flux divergence is advanced by explicit midpoint (order 2).
// Also the gradient-flux reconstruction of the companion velocity
// v*_i = -a_i dx_i u* + f_i(u*).

#include <cmath>
#include <functional>
#include <vector>

#include "flux.hpp"
#include "grid.hpp"

namespace jinxin {

struct LimitState {
    double t = 0.0;
    SpectralField u;
};

namespace detail {

// -sum_i dx_i f_i(u), dealiased; the zero mode is untouched (conservation)
inline SpectralField flux_divergence(const SpectralField& uh, const ModelParams& P) {
    const Grid& g = uh.grid;
    SpectralField acc(g);
    if (P.flux.kind == FluxKind::zero) return acc;
    RealField u = to_physical(uh);
    RealField fi(g);
    for (int i = 0; i < g.d; ++i) {
        for (int c = 0; c < g.n; ++c) {
            const double* src = u.comp(c);
            double* dst = fi.comp(c);
            for (std::size_t p = 0; p < g.points(); ++p) dst[p] = P.f(i, src[p]);
        }
        SpectralField fh = to_spectral(fi);
        dealias(fh);
        axpy(acc, -1.0, derivative(fh, i));
    }
    return acc;
}

// e^{-sum_i a_i xi_i^2 tau} per lattice point
inline std::vector<double> heat_factors(const Grid& g, const ModelParams& P, double tau) {
    std::vector<double> out(g.points());
    for (std::size_t p = 0; p < g.points(); ++p) {
        auto idx = g.unflatten(p);
        double s = 0.0;
        for (int ax = 0; ax < g.d; ++ax) {
            const double xi = g.xi(idx[std::size_t(ax)]);
            s += P.sym.a[std::size_t(ax)] * xi * xi;
        }
        out[p] = std::exp(-s * tau);
    }
    return out;
}

inline void scale_modes(SpectralField& u, const std::vector<double>& fac) {
    for (int c = 0; c < u.grid.n; ++c) {
        cplx* dst = u.comp(c);
        for (std::size_t p = 0; p < u.grid.points(); ++p) dst[p] *= fac[p];
    }
}

inline void check_finite(const SpectralField& u, double t) {
    for (const cplx& z : u.a)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw NumericalFailure(t);
}

}  // namespace detail

// caches the semigroup factors for a fixed step size
class LimitStepper {
  public:
    LimitStepper(const Grid& g, const ModelParams& P, double dt)
        : params_(P), dt_(dt), half_(detail::heat_factors(g, P, dt / 2.0)),
          full_(detail::heat_factors(g, P, dt)) {
        if (!(dt > 0.0)) throw std::invalid_argument("LimitStepper: dt must be > 0");
    }

    double dt() const { return dt_; }

    void step(LimitState& s) const {
        // u_mid = G(dt/2) [u + (dt/2) D(u)];  u+ = G(dt) u + dt G(dt/2) D(u_mid)
        SpectralField mid = s.u;
        axpy(mid, dt_ / 2.0, detail::flux_divergence(s.u, params_));
        detail::scale_modes(mid, half_);

        SpectralField kick = detail::flux_divergence(mid, params_);
        detail::scale_modes(kick, half_);
        detail::scale_modes(s.u, full_);
        axpy(s.u, dt_, kick);

        s.t += dt_;
        detail::check_finite(s.u, s.t);
    }

  private:
    ModelParams params_;
    double dt_;
    std::vector<double> half_, full_;
};

inline LimitState limit_step(LimitState s, double dt, const ModelParams& P) {
    LimitStepper st(s.u.grid, P, dt);
    st.step(s);
    return s;
}

// v*_i = -a_i dx_i u* + f_i(u*), dealiased
inline std::vector<SpectralField> darcy_reconstruct(const SpectralField& uh, const ModelParams& P) {
    const Grid& g = uh.grid;
    RealField u = to_physical(uh);
    std::vector<SpectralField> v;
    v.reserve(std::size_t(g.d));
    RealField fi(g);
    for (int i = 0; i < g.d; ++i) {
        for (int c = 0; c < g.n; ++c) {
            const double* src = u.comp(c);
            double* dst = fi.comp(c);
            for (std::size_t p = 0; p < g.points(); ++p) dst[p] = P.f(i, src[p]);
        }
        SpectralField fh = to_spectral(fi);
        dealias(fh);
        axpy(fh, -P.sym.a[std::size_t(i)], derivative(uh, i));
        v.push_back(std::move(fh));
    }
    return v;
}

// advance nsteps, invoking the callback at t=0, every `stride` steps, and at
// the end (stride <= 0 suppresses intermediate calls)
inline LimitState simulate_limit(LimitState s, const ModelParams& P, double dt, int nsteps,
                                 int stride = 0,
                                 const std::function<void(const LimitState&)>& on_snapshot = {}) {
    LimitStepper st(s.u.grid, P, dt);
    if (on_snapshot) on_snapshot(s);
    for (int k = 1; k <= nsteps; ++k) {
        st.step(s);
        if (on_snapshot && ((stride > 0 && k % stride == 0) || k == nsteps)) on_snapshot(s);
    }
    return s;
}

}  // namespace jinxin
