#pragma once

// Flux closures f_i(u) about an equilibrium (ubar, vbar) with f_i(ubar) = vbar
// and f_i'(ubar) = 0 (the source is at least quadratic in u - ubar), plus the
// bundled model parameters.  All supported closures act componentwise on u,
// so Jacobians are diagonal and a scalar evaluator per direction suffices.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "symbol.hpp"

namespace jinxin {

enum class FluxKind { zero, quadratic, burgers1d, polynomial };

inline const char* flux_kind_name(FluxKind k) {
    switch (k) {
        case FluxKind::zero: return "zero";
        case FluxKind::quadratic: return "quadratic";
        case FluxKind::burgers1d: return "burgers1d";
        default: return "polynomial";
    }
}

inline FluxKind flux_kind_from_name(const std::string& s) {
    if (s == "zero") return FluxKind::zero;
    if (s == "quadratic") return FluxKind::quadratic;
    if (s == "burgers1d") return FluxKind::burgers1d;
    if (s == "polynomial") return FluxKind::polynomial;
    throw std::invalid_argument("unknown flux kind: " + s);
}

struct FluxSpec {
    FluxKind kind = FluxKind::zero;
    std::vector<double> quad_c;               // quadratic: one coefficient per direction
    std::vector<std::vector<double>> poly_c;  // polynomial: [direction][power-2] coefficients

    static FluxSpec zero() { return {}; }
    static FluxSpec quadratic(std::vector<double> c) {
        FluxSpec f;
        f.kind = FluxKind::quadratic;
        f.quad_c = std::move(c);
        return f;
    }
    static FluxSpec burgers1d() {
        FluxSpec f;
        f.kind = FluxKind::burgers1d;
        return f;
    }
    static FluxSpec polynomial(std::vector<std::vector<double>> c) {
        FluxSpec f;
        f.kind = FluxKind::polynomial;
        f.poly_c = std::move(c);
        return f;
    }
};

struct NumericalFailure : std::runtime_error {
    double t;
    explicit NumericalFailure(double t_)
        : std::runtime_error("numerical failure (NaN/overflow) at t = " + std::to_string(t_)),
          t(t_) {}
};

struct ModelParams {
    SymbolParams sym;  // eps and the wave speeds a_i
    int n = 1;         // components per field
    double ubar = 0.0;
    double vbar = 0.0;
    FluxSpec flux;

    ModelParams(SymbolParams sym_, int n_, double ubar_, double vbar_, FluxSpec flux_,
                bool strict_equilibrium = true)
        : sym(std::move(sym_)), n(n_), ubar(ubar_), vbar(vbar_), flux(std::move(flux_)) {
        if (n < 1) throw std::invalid_argument("ModelParams: n must be >= 1");
        if (ubar < 0.0 || vbar < 0.0)
            throw std::invalid_argument("ModelParams: equilibrium must be non-negative");
        validate_flux_shape();
        if (strict_equilibrium) validate_equilibrium();
    }

    int d() const { return sym.d(); }

    // scalar flux along direction i at component value y
    double f(int i, double y) const {
        switch (flux.kind) {
            case FluxKind::zero:
                return vbar;
            case FluxKind::quadratic: {
                const double s = y - ubar;
                return vbar + flux.quad_c[std::size_t(i)] * s * s;
            }
            case FluxKind::burgers1d:
                return 0.5 * y * y;
            default: {
                const double s = y - ubar;
                double acc = vbar, pw = s * s;
                for (double c : flux.poly_c[std::size_t(i)]) {
                    acc += c * pw;
                    pw *= s;
                }
                return acc;
            }
        }
    }

    // d f_i / d y (diagonal Jacobian entry)
    double fprime(int i, double y) const {
        switch (flux.kind) {
            case FluxKind::zero:
                return 0.0;
            case FluxKind::quadratic:
                return 2.0 * flux.quad_c[std::size_t(i)] * (y - ubar);
            case FluxKind::burgers1d:
                return y;
            default: {
                const double s = y - ubar;
                double acc = 0.0, pw = s;
                double p = 2.0;
                for (double c : flux.poly_c[std::size_t(i)]) {
                    acc += c * p * pw;
                    pw *= s;
                    p += 1.0;
                }
                return acc;
            }
        }
    }

    // g_i(m) = f_i(ubar + m) - f_i(ubar), the relaxation source
    double g(int i, double m) const { return f(i, ubar + m) - vbar; }

  private:
    void validate_flux_shape() const {
        const std::size_t dd = std::size_t(d());
        if (flux.kind == FluxKind::quadratic && flux.quad_c.size() != dd)
            throw std::invalid_argument("ModelParams: quadratic flux needs one coefficient per direction");
        if (flux.kind == FluxKind::polynomial && flux.poly_c.size() != dd)
            throw std::invalid_argument("ModelParams: polynomial flux needs one coefficient row per direction");
        if (flux.kind == FluxKind::burgers1d && d() != 1)
            throw std::invalid_argument("ModelParams: burgers1d flux requires d = 1");
    }

    // f_i(ubar) = vbar and f_i'(ubar) = 0, checked numerically
    void validate_equilibrium() const {
        for (int i = 0; i < d(); ++i) {
            if (std::abs(f(i, ubar) - vbar) > 1e-12 * std::max(1.0, std::abs(vbar)))
                throw std::invalid_argument("ModelParams: flux violates f_i(ubar) = vbar");
            if (std::abs(fprime(i, ubar)) > 1e-12)
                throw std::invalid_argument("ModelParams: flux violates f_i'(ubar) = 0");
        }
    }
};

}  // namespace jinxin
