#pragma once

// Discrete Littlewood-Paley decomposition on the periodic grid, homogeneous
// Besov norms (p = 2), low/high splitting at a dyadic threshold J, and
// Chemin-Lerner (time-integrated) norms over snapshot histories.
//
// The radial cutoff chi is the standard smooth bump transition: chi = 1 on
// [0, 3/4], 0 outside [0, 4/3]; phi(rho) = chi(rho/2) - chi(rho) is supported
// in [3/4, 8/3] and the shifted family {phi(2^-j rho)} telescopes to
// chi(rho 2^-(j_max+1)) - chi(rho 2^-j_min), hence sums to exactly 1 on
// [(4/3) 2^j_min, (3/2) 2^j_max].

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "grid.hpp"

namespace jinxin {

inline double lp_chi(double rho) {
    constexpr double a = 0.75, b = 4.0 / 3.0;
    if (rho <= a) return 1.0;
    if (rho >= b) return 0.0;
    auto bump = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
    const double x = (b - rho) / (b - a);
    const double gx = bump(x);
    return gx / (gx + bump(1.0 - x));
}

inline double lp_phi(double rho) { return lp_chi(0.5 * rho) - lp_chi(rho); }

struct DyadicFilter {
    Grid grid;
    int j_min = 0;
    int j_max = 0;
    std::vector<std::vector<double>> phi_values;  // [j - j_min][lattice point]

    int blocks() const { return j_max - j_min + 1; }
    const std::vector<double>& mult(int j) const {
        if (j < j_min || j > j_max) throw std::out_of_range("DyadicFilter: block index outside [j_min, j_max]");
        return phi_values[std::size_t(j - j_min)];
    }
};

// widest range whose partition covers every resolved nonzero wavenumber
inline int default_j_min(const Grid& g) {
    return int(std::floor(std::log2(0.75 * g.min_nonzero_xi())));
}
inline int default_j_max(const Grid& g) {
    return int(std::ceil(std::log2(g.max_xi() / 1.5)));
}

inline DyadicFilter build_partition(const Grid& g, int j_min, int j_max) {
    if (j_min >= j_max) throw std::invalid_argument("build_partition: need j_min < j_max");
    // partition of unity must hold from the smallest nonzero wavenumber ...
    if ((4.0 / 3.0) * std::ldexp(1.0, j_min) > g.min_nonzero_xi() * (1.0 + 1e-12))
        throw std::invalid_argument("build_partition: j_min too large for the box scale");
    // ... up to the largest resolved one (grid corner)
    if (1.5 * std::ldexp(1.0, j_max) < g.max_xi() * (1.0 - 1e-12))
        throw std::invalid_argument("build_partition: j_max too small for the grid resolution");

    DyadicFilter f;
    f.grid = g;
    f.j_min = j_min;
    f.j_max = j_max;
    f.phi_values.assign(std::size_t(f.blocks()), std::vector<double>(g.points(), 0.0));
    for (int j = j_min; j <= j_max; ++j) {
        const double scale = std::ldexp(1.0, -j);
        auto& m = f.phi_values[std::size_t(j - j_min)];
        for (std::size_t p = 0; p < g.points(); ++p) m[p] = lp_phi(scale * g.xi_norm(p));
    }
    return f;
}

inline DyadicFilter build_partition(const Grid& g) {
    return build_partition(g, default_j_min(g), default_j_max(g));
}

inline SpectralField dyadic_block(const SpectralField& u, int j, const DyadicFilter& f) {
    if (!(u.grid == f.grid)) throw std::invalid_argument("dyadic_block: grid mismatch");
    const auto& m = f.mult(j);
    SpectralField out(u.grid);
    const std::size_t M = u.grid.points();
    for (int c = 0; c < u.grid.n; ++c) {
        const cplx* src = u.comp(c);
        cplx* dst = out.comp(c);
        for (std::size_t p = 0; p < M; ++p) dst[p] = m[p] * src[p];
    }
    return out;
}

// per-block L2 norms over all components, indexed j_min..j_max
inline std::vector<double> block_norms(const SpectralField& u, const DyadicFilter& f) {
    if (!(u.grid == f.grid)) throw std::invalid_argument("block_norms: grid mismatch");
    const std::size_t M = u.grid.points();
    std::vector<double> out(std::size_t(f.blocks()), 0.0);
    for (int j = f.j_min; j <= f.j_max; ++j) {
        const auto& m = f.mult(j);
        double s = 0.0;
        for (int c = 0; c < u.grid.n; ++c) {
            const cplx* src = u.comp(c);
            for (std::size_t p = 0; p < M; ++p) s += m[p] * m[p] * std::norm(src[p]);
        }
        out[std::size_t(j - f.j_min)] = std::sqrt(s * u.grid.box_volume());
    }
    return out;
}

enum class FreqRange { all, low, high };

struct BesovSpec {
    double s = 0.0;                                    // regularity index
    double r = 1.0;                                    // summation exponent (inf allowed)
    FreqRange range = FreqRange::all;
};

namespace detail {

inline double lr_aggregate(const std::vector<double>& terms, double r) {
    if (std::isinf(r)) {
        double m = 0.0;
        for (double v : terms) m = std::max(m, v);
        return m;
    }
    if (!(r >= 1.0)) throw std::invalid_argument("summation exponent r must be >= 1 or inf");
    if (r == 1.0) {
        double s = 0.0;
        for (double v : terms) s += v;
        return s;
    }
    double s = 0.0;
    for (double v : terms) s += std::pow(v, r);
    return std::pow(s, 1.0 / r);
}

// inclusive j-bounds selected by a frequency range; low keeps j <= J,
// high keeps j >= J - 1 (the one-block overlap is intentional)
inline std::pair<int, int> range_bounds(int j_min, int j_max, FreqRange range, int J) {
    switch (range) {
        case FreqRange::low: return {j_min, std::min(j_max, J)};
        case FreqRange::high: return {std::max(j_min, J - 1), j_max};
        default: return {j_min, j_max};
    }
}

}  // namespace detail

inline double besov_norm_from_blocks(const std::vector<double>& bj, int j_min, int j_max,
                                     const BesovSpec& spec, int J_eps = 0) {
    auto [lo, hi] = detail::range_bounds(j_min, j_max, spec.range, J_eps);
    std::vector<double> terms;
    for (int j = lo; j <= hi; ++j)
        terms.push_back(std::pow(2.0, spec.s * j) * bj[std::size_t(j - j_min)]);
    return detail::lr_aggregate(terms, spec.r);
}

inline double besov_norm(const SpectralField& u, const BesovSpec& spec, const DyadicFilter& f,
                         int J_eps = 0) {
    return besov_norm_from_blocks(block_norms(u, f), f.j_min, f.j_max, spec, J_eps);
}

// low = sum of blocks j <= J-1, high = u - mean - low
inline std::pair<SpectralField, SpectralField> split_lowhigh(const SpectralField& u, int J,
                                                             const DyadicFilter& f) {
    if (!(u.grid == f.grid)) throw std::invalid_argument("split_lowhigh: grid mismatch");
    SpectralField low(u.grid), high = u;
    const std::size_t M = u.grid.points();
    std::vector<double> lowmult(M, 0.0);
    for (int j = f.j_min; j <= std::min(f.j_max, J - 1); ++j) {
        const auto& m = f.mult(j);
        for (std::size_t p = 0; p < M; ++p) lowmult[p] += m[p];
    }
    for (int c = 0; c < u.grid.n; ++c) {
        const cplx* src = u.comp(c);
        cplx* lo = low.comp(c);
        cplx* hivals = high.comp(c);
        for (std::size_t p = 0; p < M; ++p) {
            lo[p] = lowmult[p] * src[p];
            hivals[p] -= lo[p];
        }
        hivals[0] -= src[0];  // drop the mean from the high part
    }
    return {std::move(low), std::move(high)};
}

inline int threshold_Jeps(double eps, int k0) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("threshold_Jeps: eps must lie in (0,1)");
    if (k0 < 0) throw std::invalid_argument("threshold_Jeps: k0 must be >= 0");
    return -int(std::floor(std::log2(eps))) - k0;
}

// per-stamp dyadic block norms of a trajectory
struct TimeBlockHistory {
    int j_min = 0;
    int j_max = -1;
    std::vector<double> t;
    std::vector<std::vector<double>> bj;  // [stamp][j - j_min]

    void push(double time, std::vector<double> norms) {
        if (!t.empty() && !(time > t.back()))
            throw std::invalid_argument("TimeBlockHistory: stamps must be strictly increasing");
        if (j_max < j_min) {
            j_min = 0;
            j_max = int(norms.size()) - 1;
        }
        if (int(norms.size()) != j_max - j_min + 1)
            throw std::invalid_argument("TimeBlockHistory: block count changed between stamps");
        for (double v : norms)
            if (!(v >= 0.0)) throw std::invalid_argument("TimeBlockHistory: block norms must be >= 0");
        t.push_back(time);
        bj.push_back(std::move(norms));
    }

    void push(double time, const SpectralField& u, const DyadicFilter& f) {
        if (bj.empty()) {
            j_min = f.j_min;
            j_max = f.j_max;
        } else if (j_min != f.j_min || j_max != f.j_max) {
            throw std::invalid_argument("TimeBlockHistory: filter range changed between stamps");
        }
        push(time, block_norms(u, f));
    }
};

// L-tilde^rho_T(B^s_{2,r}) over the recorded stamps: composite-trapezoid time
// integral of b_j^rho inside each block, then the l^r-in-j aggregation
inline double chemin_lerner_norm(const TimeBlockHistory& h, double rho, double s, double r,
                                 FreqRange range = FreqRange::all, int J_eps = 0) {
    if (h.t.empty()) throw std::invalid_argument("chemin_lerner_norm: empty history");
    const bool sup_in_time = std::isinf(rho);
    if (!sup_in_time && h.t.size() < 2)
        throw std::invalid_argument("chemin_lerner_norm: need at least two stamps for finite rho");
    if (!sup_in_time && !(rho >= 1.0))
        throw std::invalid_argument("chemin_lerner_norm: rho must be >= 1 or inf");

    auto [lo, hi] = detail::range_bounds(h.j_min, h.j_max, range, J_eps);
    std::vector<double> terms;
    for (int j = lo; j <= hi; ++j) {
        const std::size_t jj = std::size_t(j - h.j_min);
        double tv;
        if (sup_in_time) {
            tv = 0.0;
            for (const auto& row : h.bj) tv = std::max(tv, row[jj]);
        } else {
            double integral = 0.0;
            for (std::size_t k = 0; k + 1 < h.t.size(); ++k)
                integral += 0.5 * (h.t[k + 1] - h.t[k]) *
                            (std::pow(h.bj[k][jj], rho) + std::pow(h.bj[k + 1][jj], rho));
            tv = std::pow(integral, 1.0 / rho);
        }
        terms.push_back(std::pow(2.0, s * j) * tv);
    }
    return detail::lr_aggregate(terms, r);
}

}  // namespace jinxin
