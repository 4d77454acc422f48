#pragma once

// Periodic pseudospectral grid: uniform N^d lattice on [0, 2*pi*L)^d with
// full complex Fourier coefficients per component.  Conventions:
//   u(x_p) = sum_k uhat_k e^{i k.x_p},   uhat_k = N^-d sum_p u(x_p) e^{-i k.x_p},
// integer wavenumbers {-N/2+1, ..., N/2} scaled by 1/L, and
//   ||u||_L2^2 = (2 pi L)^d sum_k |uhat_k|^2.

#include <array>
#include <cmath>
#include <complex>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace jinxin {

using cplx = std::complex<double>;

struct Grid {
    int d = 1;       // space dimension, 1..3
    int n = 1;       // number of field components
    int N = 8;       // points per axis, power of two >= 8
    double L = 1.0;  // box scale: period 2*pi*L per axis

    Grid() = default;
    Grid(int d_, int n_, int N_, double L_ = 1.0) : d(d_), n(n_), N(N_), L(L_) {
        if (d < 1 || d > 3) throw std::invalid_argument("Grid: d must be 1, 2 or 3");
        if (n < 1) throw std::invalid_argument("Grid: n must be >= 1");
        if (N < 8 || (N & (N - 1)) != 0) throw std::invalid_argument("Grid: N must be a power of two >= 8");
        if (!(L > 0.0)) throw std::invalid_argument("Grid: L must be positive");
    }

    bool operator==(const Grid&) const = default;

    std::size_t points() const {
        std::size_t s = 1;
        for (int i = 0; i < d; ++i) s *= std::size_t(N);
        return s;
    }
    std::size_t size() const { return std::size_t(n) * points(); }

    // integer wavenumber along one axis for lattice index i in [0, N)
    int kint(int i) const { return i <= N / 2 ? i : i - N; }
    // physical wavenumber component
    double xi(int i) const { return kint(i) / L; }
    // physical coordinate
    double x(int i) const { return 2.0 * std::numbers::pi * L * double(i) / double(N); }

    // decompose a flat lattice index into per-axis indices (row-major, axis 0 slowest)
    std::array<int, 3> unflatten(std::size_t p) const {
        std::array<int, 3> idx{0, 0, 0};
        for (int ax = d - 1; ax >= 0; --ax) {
            idx[std::size_t(ax)] = int(p % std::size_t(N));
            p /= std::size_t(N);
        }
        return idx;
    }

    // |xi| of lattice point p
    double xi_norm(std::size_t p) const {
        auto idx = unflatten(p);
        double s = 0.0;
        for (int ax = 0; ax < d; ++ax) { double v = xi(idx[std::size_t(ax)]); s += v * v; }
        return std::sqrt(s);
    }

    double min_nonzero_xi() const { return 1.0 / L; }
    double max_xi() const { return std::sqrt(double(d)) * (N / 2) / L; }

    double cell_volume() const { return std::pow(2.0 * std::numbers::pi * L / N, d); }
    double box_volume() const { return std::pow(2.0 * std::numbers::pi * L, d); }
};

struct RealField {
    Grid grid;
    std::vector<double> a;  // component-slowest, row-major lattice

    RealField() = default;
    explicit RealField(const Grid& g) : grid(g), a(g.size(), 0.0) {}

    double* comp(int c) { return a.data() + std::size_t(c) * grid.points(); }
    const double* comp(int c) const { return a.data() + std::size_t(c) * grid.points(); }
};

struct SpectralField {
    Grid grid;
    std::vector<cplx> a;  // same layout as RealField

    SpectralField() = default;
    explicit SpectralField(const Grid& g) : grid(g), a(g.size(), cplx(0.0, 0.0)) {}

    cplx* comp(int c) { return a.data() + std::size_t(c) * grid.points(); }
    const cplx* comp(int c) const { return a.data() + std::size_t(c) * grid.points(); }
};

namespace detail {

// FFTW plans are cached per (d, N, sign) and reused via a private buffer.
// Plan creation with FFTW_ESTIMATE is deterministic, so repeated runs are
// bit-identical.  The cache is thread_local (each worker transforms through
// its own plans/buffers); the FFTW planner itself is not reentrant, so plan
// creation/destruction lock one process-wide mutex.
inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftPlan {
    fftw_plan plan = nullptr;
    std::vector<cplx> buf;
    ~FftPlan() {
        if (plan) {
            std::lock_guard<std::mutex> lock(planner_mutex());
            fftw_destroy_plan(plan);
        }
    }
};

inline FftPlan& fft_plan(const Grid& g, int sign) {
    thread_local std::map<std::tuple<int, int, int>, FftPlan> cache;
    auto key = std::make_tuple(g.d, g.N, sign);
    auto it = cache.find(key);
    if (it == cache.end()) {
        auto& entry = cache[key];
        entry.buf.assign(g.points(), cplx(0.0, 0.0));
        std::array<int, 3> dims{g.N, g.N, g.N};
        std::lock_guard<std::mutex> lock(planner_mutex());
        entry.plan = fftw_plan_dft(g.d, dims.data(),
                                   reinterpret_cast<fftw_complex*>(entry.buf.data()),
                                   reinterpret_cast<fftw_complex*>(entry.buf.data()),
                                   sign, FFTW_ESTIMATE);
        return entry;
    }
    return it->second;
}

}  // namespace detail

inline SpectralField to_spectral(const RealField& u) {
    SpectralField out(u.grid);
    auto& p = detail::fft_plan(u.grid, FFTW_FORWARD);
    const std::size_t M = u.grid.points();
    const double scale = 1.0 / double(M);
    for (int c = 0; c < u.grid.n; ++c) {
        for (std::size_t i = 0; i < M; ++i) p.buf[i] = cplx(u.comp(c)[i], 0.0);
        fftw_execute(p.plan);
        for (std::size_t i = 0; i < M; ++i) out.comp(c)[i] = p.buf[i] * scale;
    }
    return out;
}

inline RealField to_physical(const SpectralField& u) {
    RealField out(u.grid);
    auto& p = detail::fft_plan(u.grid, FFTW_BACKWARD);
    const std::size_t M = u.grid.points();
    for (int c = 0; c < u.grid.n; ++c) {
        std::memcpy(p.buf.data(), u.comp(c), M * sizeof(cplx));
        fftw_execute(p.plan);
        for (std::size_t i = 0; i < M; ++i) out.comp(c)[i] = p.buf[i].real();
    }
    return out;
}

// d/dx_axis: multiply by i*xi_axis.  The Nyquist mode has no conjugate partner,
// so its odd-derivative multiplier is zeroed to keep real fields real.
inline SpectralField derivative(const SpectralField& u, int axis) {
    if (axis < 0 || axis >= u.grid.d) throw std::invalid_argument("derivative: axis out of range");
    SpectralField out(u.grid);
    const Grid& g = u.grid;
    const std::size_t M = g.points();
    std::size_t stride = 1;
    for (int ax = g.d - 1; ax > axis; --ax) stride *= std::size_t(g.N);
    for (int c = 0; c < g.n; ++c) {
        const cplx* src = u.comp(c);
        cplx* dst = out.comp(c);
        for (std::size_t i = 0; i < M; ++i) {
            int ki = int((i / stride) % std::size_t(g.N));
            int k = g.kint(ki);
            if (k == g.N / 2) { dst[i] = 0.0; continue; }
            dst[i] = cplx(0.0, double(k) / g.L) * src[i];
        }
    }
    return out;
}

// 2/3-rule: zero every coefficient with 3*|k_i| > N on any axis.
inline void dealias(SpectralField& u) {
    const Grid& g = u.grid;
    const std::size_t M = g.points();
    std::vector<bool> kill(M, false);
    for (std::size_t i = 0; i < M; ++i) {
        auto idx = g.unflatten(i);
        for (int ax = 0; ax < g.d; ++ax) {
            if (3 * std::abs(g.kint(idx[std::size_t(ax)])) > g.N) { kill[i] = true; break; }
        }
    }
    for (int c = 0; c < g.n; ++c) {
        cplx* dst = u.comp(c);
        for (std::size_t i = 0; i < M; ++i)
            if (kill[i]) dst[i] = 0.0;
    }
}

inline double l2_norm(const RealField& u) {
    double s = 0.0;
    for (double v : u.a) s += v * v;
    return std::sqrt(s * u.grid.cell_volume());
}

inline double l2_norm(const SpectralField& u) {
    double s = 0.0;
    for (const cplx& v : u.a) s += std::norm(v);
    return std::sqrt(s * u.grid.box_volume());
}

// real L2 inner product (all components)
inline double inner(const SpectralField& u, const SpectralField& v) {
    if (!(u.grid == v.grid)) throw std::invalid_argument("inner: grid mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < u.a.size(); ++i)
        s += u.a[i].real() * v.a[i].real() + u.a[i].imag() * v.a[i].imag();
    return s * u.grid.box_volume();
}

inline cplx mean(const SpectralField& u, int c) { return u.comp(c)[0]; }

inline double max_conjugate_asymmetry(const SpectralField& u) {
    const Grid& g = u.grid;
    const std::size_t M = g.points();
    double worst = 0.0;
    for (int c = 0; c < g.n; ++c) {
        const cplx* s = u.comp(c);
        for (std::size_t i = 0; i < M; ++i) {
            auto idx = g.unflatten(i);
            std::size_t j = 0;
            bool ok = true;
            for (int ax = 0; ax < g.d; ++ax) {
                int m = (g.N - idx[std::size_t(ax)]) % g.N;
                // Nyquist rows are self-paired only through themselves
                j = j * std::size_t(g.N) + std::size_t(m);
                (void)ok;
            }
            worst = std::max(worst, std::abs(s[i] - std::conj(s[j])));
        }
    }
    return worst;
}

// elementwise helpers used throughout the steppers
inline SpectralField& axpy(SpectralField& y, double alpha, const SpectralField& x) {
    for (std::size_t i = 0; i < y.a.size(); ++i) y.a[i] += alpha * x.a[i];
    return y;
}

inline SpectralField diff(const SpectralField& u, const SpectralField& v) {
    SpectralField out = u;
    for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] -= v.a[i];
    return out;
}

}  // namespace jinxin
