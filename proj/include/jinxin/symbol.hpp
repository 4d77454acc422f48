#pragma once

// Fourier-mode analysis of the linearized rescaled relaxation system.  Per
// wavevector xi the state (m_hat, w_hat_1..w_hat_d) evolves by
//
//   d/dt m_hat   = -(i/eps) sum_k xi_k w_hat_k
//   d/dt w_hat_k = -(i/eps) a_k xi_k m_hat - w_hat_k / eps^2,
//
// i.e. the (d+1)x(d+1) symbol below.  Writing p = sum_k xi_k w_hat_k and
// S = sum_k a_k xi_k^2, the (m_hat, p) plane closes on itself with trace
// -1/eps^2 and determinant S/eps^2, giving eigenvalues
//
//   lambda_{3,4} = -1/(2 eps^2) +- (1/(2 eps)) sqrt(1/eps^2 - 4 S)
//
// next to d-1 trivial branches -1/eps^2 (the part of w orthogonal to the
// forcing direction g = (a_k xi_k)).  Exponentials and their time integrals
// (Duhamel weights) are evaluated in closed form, with series fallbacks that
// stay accurate across the degenerate transition 4 S eps^2 = 1.

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "grid.hpp"

namespace jinxin {

struct SymbolParams {
    double eps = 0.5;
    std::vector<double> a;  // per-axis wave speeds a_i > 0 (A_i = a_i I)

    SymbolParams(double eps_, std::vector<double> a_) : eps(eps_), a(std::move(a_)) {
        if (!(eps > 0.0 && eps <= 1.0))
            throw std::invalid_argument("SymbolParams: eps must lie in (0,1]");
        if (a.empty() || a.size() > 3)
            throw std::invalid_argument("SymbolParams: need 1..3 coefficients a_i");
        for (double ai : a)
            if (!(ai > 0.0)) throw std::invalid_argument("SymbolParams: all a_i must be positive");
    }
    int d() const { return int(a.size()); }

    // S = sum_k a_k xi_k^2
    double weighted_xi2(const std::vector<double>& xi) const {
        if (int(xi.size()) != d()) throw std::invalid_argument("SymbolParams: xi dimension mismatch");
        double s = 0.0;
        for (int k = 0; k < d(); ++k) s += a[std::size_t(k)] * xi[std::size_t(k)] * xi[std::size_t(k)];
        return s;
    }
};

enum class SpectralRegime { low, degenerate, high };

inline const char* regime_name(SpectralRegime r) {
    switch (r) {
        case SpectralRegime::low: return "low";
        case SpectralRegime::degenerate: return "degenerate";
        default: return "high";
    }
}

struct ModeEigen {
    int count = 0;                 // d + 1
    std::array<cplx, 4> lam{};     // d-1 trivial branches first, then lambda_3, lambda_4
    double Delta = 0.0;            // 1/eps^2 - 4 S
    SpectralRegime regime = SpectralRegime::low;

    cplx lam3() const { return lam[std::size_t(count - 2)]; }
    cplx lam4() const { return lam[std::size_t(count - 1)]; }
};

struct SmallMat {
    int dim = 0;
    std::array<cplx, 16> a{};

    explicit SmallMat(int dim_ = 0) : dim(dim_) {
        if (dim < 0 || dim > 4) throw std::invalid_argument("SmallMat: dim must be 0..4");
    }
    cplx& at(int i, int j) { return a[std::size_t(i * dim + j)]; }
    const cplx& at(int i, int j) const { return a[std::size_t(i * dim + j)]; }
};

inline SmallMat operator*(const SmallMat& x, const SmallMat& y) {
    SmallMat z(x.dim);
    for (int i = 0; i < x.dim; ++i)
        for (int j = 0; j < x.dim; ++j) {
            cplx s = 0.0;
            for (int k = 0; k < x.dim; ++k) s += x.at(i, k) * y.at(k, j);
            z.at(i, j) = s;
        }
    return z;
}

inline SmallMat symbol_matrix(const std::vector<double>& xi, const SymbolParams& P) {
    const int d = P.d();
    const double e2 = P.eps * P.eps;
    SmallMat A(d + 1);
    for (int k = 0; k < d; ++k) {
        A.at(0, k + 1) = cplx(0.0, -xi[std::size_t(k)] / P.eps);
        A.at(k + 1, 0) = cplx(0.0, -P.a[std::size_t(k)] * xi[std::size_t(k)] / P.eps);
        A.at(k + 1, k + 1) = cplx(-1.0 / e2, 0.0);
    }
    return A;
}

// tolerance below which the discriminant counts as degenerate (dimensionless
// via the eps^4 scaling); the propagator itself is evaluated uniformly and
// does not branch on this tag
inline constexpr double kDegenerateTol = 1e-12;

inline ModeEigen eigenvalues(const std::vector<double>& xi, const SymbolParams& P) {
    const int d = P.d();
    const double e2 = P.eps * P.eps;
    const double S = P.weighted_xi2(xi);
    const double Delta = 1.0 / e2 - 4.0 * S;

    ModeEigen out;
    out.count = d + 1;
    out.Delta = Delta;
    out.regime = std::abs(Delta) * e2 * e2 < kDegenerateTol
                     ? SpectralRegime::degenerate
                     : (Delta > 0.0 ? SpectralRegime::low : SpectralRegime::high);

    for (int k = 0; k + 2 < out.count; ++k) out.lam[std::size_t(k)] = cplx(-1.0 / e2, 0.0);
    const double mu = -0.5 / e2;
    const cplx theta = Delta >= 0.0 ? cplx(std::sqrt(Delta) / (2.0 * P.eps), 0.0)
                                    : cplx(0.0, std::sqrt(-Delta) / (2.0 * P.eps));
    out.lam[std::size_t(d - 1)] = mu + theta;
    out.lam[std::size_t(d)] = mu - theta;
    return out;
}

namespace detail {

// E = exp(t B) on the (m_hat, p) plane equals
//   e^{mu t} [cosh(theta t) I + t sinhc(theta t) (B - mu I)],
// with theta^2 = mu^2 - S/eps^2 of either sign.  C and Ssc below are
// e^{mu t} cosh(theta t) and e^{mu t} t sinhc(theta t), evaluated without
// overflow (factored exponentials) and without a 0/0 at theta = 0 (series in
// h = (theta t)^2 once |h| is tiny).
struct PropScalars {
    double C = 1.0;
    double Ssc = 0.0;
    double decay = 1.0;  // e^{-t/eps^2}, the trivial-branch factor
};

inline PropScalars prop_scalars(double S, double eps, double t) {
    const double e2 = eps * eps;
    const double mu = -0.5 / e2;
    const double th2 = mu * mu - S / e2;
    const double h = th2 * t * t;
    PropScalars out;
    if (std::abs(h) < 1e-8) {
        const double emu = std::exp(mu * t);
        out.C = emu * (1.0 + h / 2.0 + h * h / 24.0);
        out.Ssc = emu * t * (1.0 + h / 6.0 + h * h / 120.0);
    } else if (th2 > 0.0) {
        const double th = std::sqrt(th2);
        const double ep = std::exp((mu + th) * t);
        const double em = std::exp((mu - th) * t);
        out.C = 0.5 * (ep + em);
        out.Ssc = (ep - em) / (2.0 * th);
    } else {
        const double om = std::sqrt(-th2);
        const double emu = std::exp(mu * t);
        out.C = emu * std::cos(om * t);
        out.Ssc = emu * std::sin(om * t) / om;
    }
    out.decay = std::exp(-t / e2);
    return out;
}

// int_0^t e^{lambda s} ds with a series guard for tiny |lambda t|
inline cplx expint_h(cplx lam, double t) {
    const cplx z = lam * t;
    if (std::abs(z) < 1e-4) return t * (1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0);
    return (std::exp(z) - 1.0) / lam;
}

// scalar weights of Phi1 = int_0^t exp(s B) ds = C1 I + C2 (B - mu I), plus
// the trivial-branch weight q = int_0^t e^{-s/eps^2} ds
struct DuhamelScalars {
    double C1 = 0.0;
    double C2 = 0.0;
    double q = 0.0;
};

inline DuhamelScalars duhamel_scalars(double S, double eps, double t) {
    const double e2 = eps * eps;
    const double mu = -0.5 / e2;
    const double th2 = mu * mu - S / e2;
    DuhamelScalars out;
    out.q = -e2 * std::expm1(-t / e2);
    if (th2 >= 0.0) {
        const double th = std::sqrt(th2);
        if (mu + th == 0.0)  // S = 0: the slow branch is exactly neutral
            out.C1 = 0.5 * (t + expint_h(cplx(mu - th, 0.0), t).real());
        else
            out.C1 = 0.5 * (expint_h(cplx(mu + th, 0.0), t).real() +
                            expint_h(cplx(mu - th, 0.0), t).real());
    } else {
        out.C1 = expint_h(cplx(mu, std::sqrt(-th2)), t).real();
    }
    const PropScalars E = prop_scalars(S, eps, t);
    const double E00 = E.C - mu * E.Ssc;
    out.C2 = S > 0.0 ? e2 * (1.0 - E00) / S : 0.0;
    return out;
}

// assemble the full (d+1)x(d+1) operator from its (m_hat, p)-plane action
// (four scalars) and the trivial-branch factor: rows 1..d act on w via the
// rank-one projector g xi^T / S plus decay on the complement
inline SmallMat assemble_mode_operator(const std::vector<double>& xi, const SymbolParams& P,
                                       double M00, double M01_over, double M10_over, double M11,
                                       double triv) {
    // M01_over and M10_over are the (m,p) entries with the -i/eps factors
    // stripped: E01 = -i/eps * M01_over, E10 = -i S/eps * M10_over
    const int d = P.d();
    const double S = P.weighted_xi2(xi);
    SmallMat out(d + 1);
    if (S == 0.0) {
        out.at(0, 0) = M00;
        for (int k = 1; k <= d; ++k) out.at(k, k) = triv;
        return out;
    }
    const cplx E01 = cplx(0.0, -1.0 / P.eps) * M01_over;
    const cplx E10s = cplx(0.0, -1.0 / P.eps) * M10_over;  // E10 / S after g_i factor
    out.at(0, 0) = M00;
    for (int k = 0; k < d; ++k) out.at(0, k + 1) = E01 * xi[std::size_t(k)];
    for (int i = 0; i < d; ++i) {
        const double gi = P.a[std::size_t(i)] * xi[std::size_t(i)];
        out.at(i + 1, 0) = E10s * gi;
        for (int k = 0; k < d; ++k) {
            cplx v = gi * xi[std::size_t(k)] * (M11 - triv) / S;
            if (i == k) v += triv;
            out.at(i + 1, k + 1) = v;
        }
    }
    return out;
}

}  // namespace detail

// exact exp(dt A_hat(xi))
inline SmallMat propagator(const std::vector<double>& xi, const SymbolParams& P, double dt) {
    if (!(dt >= 0.0)) throw std::invalid_argument("propagator: dt must be >= 0");
    const double S = P.weighted_xi2(xi);
    const double mu = -0.5 / (P.eps * P.eps);
    const auto sc = detail::prop_scalars(S, P.eps, dt);
    const double E00 = sc.C - mu * sc.Ssc;
    const double E11 = sc.C + mu * sc.Ssc;
    return detail::assemble_mode_operator(xi, P, S == 0.0 ? 1.0 : E00, sc.Ssc, sc.Ssc, E11,
                                          sc.decay);
}

// exact int_0^dt exp(s A_hat(xi)) ds (first Duhamel weight)
inline SmallMat duhamel_phi1(const std::vector<double>& xi, const SymbolParams& P, double dt) {
    if (!(dt >= 0.0)) throw std::invalid_argument("duhamel_phi1: dt must be >= 0");
    const double S = P.weighted_xi2(xi);
    const double mu = -0.5 / (P.eps * P.eps);
    const auto sc = detail::duhamel_scalars(S, P.eps, dt);
    const double F00 = sc.C1 - mu * sc.C2;
    const double F11 = sc.C1 + mu * sc.C2;
    return detail::assemble_mode_operator(xi, P, S == 0.0 ? dt : F00, sc.C2, sc.C2, F11, sc.q);
}

struct OverdampingPoint {
    double eps = 0.0;
    double gap = 0.0;  // least-negative nonzero Re(lambda)
    SpectralRegime regime = SpectralRegime::low;
};

inline std::vector<OverdampingPoint> overdamping_curve(const std::vector<double>& a,
                                                       const std::vector<double>& xi,
                                                       const std::vector<double>& eps_list) {
    std::vector<OverdampingPoint> out;
    out.reserve(eps_list.size());
    for (double eps : eps_list) {
        SymbolParams P(eps, a);
        ModeEigen me = eigenvalues(xi, P);
        double gap = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < me.count; ++k) {
            const double re = me.lam[std::size_t(k)].real();
            if (re != 0.0) gap = std::max(gap, re);
        }
        out.push_back({eps, gap, me.regime});
    }
    return out;
}

}  // namespace jinxin
