#pragma once
// Receiving-site observables: efficiency at a given length, revival-peak
// search, closed-form predictions, and the comparison against the effective
// two-site Rabi model.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cradle/chain.hpp"
#include "cradle/propagator.hpp"

namespace cradle {

struct TransferPeak {
    double tau_star = 0.0;  // mm, strictly inside the search window
    double eta_star = 0.0;  // receiving-site probability at tau_star
};

inline double transfer_efficiency(const CouplingMatrix& h, int receiving_site,
                                  double z) {
    const TransferAmplitude amp(h, receiving_site);
    return amp.probability(z);
}

// Closed-form receiving time pi*sqrt(N-2)/(2*Jw) for the boundary-controlled
// chain; the numerical peak drifts a few percent from this at finite alpha.
inline double analytic_receiving_time(const ChainSpec& spec) {
    return M_PI * std::sqrt(static_cast<double>(spec.n_sites - 2)) /
           (2.0 * spec.weak_coupling);
}

// Strength of the emergent sender-receiver coupling, Jw/sqrt(N-1).
inline double effective_coupling(const ChainSpec& spec) {
    return spec.weak_coupling / std::sqrt(static_cast<double>(spec.n_sites - 1));
}

// Search window bracketing the first revival with generous margin on both
// sides; used wherever a config does not pin the window explicitly.
inline std::pair<double, double> default_search_window(const ChainSpec& spec) {
    const double tau = analytic_receiving_time(spec);
    return {0.2 * tau, 3.0 * tau};
}

inline TransferPeak find_optimal_receiving_time(const CouplingMatrix& h,
                                                int receiving_site, double window_lo,
                                                double window_hi) {
    if (!(window_lo > 0.0) || !(window_hi > window_lo))
        throw std::invalid_argument("search window must satisfy 0 < lo < hi");
    const TransferAmplitude amp(h, receiving_site);

    // Coarse scan: 2001 points gives step = window/2000.
    constexpr int n_grid = 2001;
    const double step = (window_hi - window_lo) / (n_grid - 1);
    std::vector<double> zs(n_grid), ps(n_grid);
    for (int i = 0; i < n_grid; ++i) {
        zs[i] = window_lo + step * i;
        ps[i] = amp.probability(zs[i]);
    }
    const double grid_max = *std::max_element(ps.begin(), ps.end());

    // First interior grid maximum at or above half the window maximum.  The
    // half-maximum filter skips the micro-ripples (orders of magnitude below
    // the revival) that otherwise count as the "first" local maximum.
    int k = -1;
    for (int i = 1; i + 1 < n_grid; ++i) {
        if (ps[i] >= ps[i - 1] && ps[i] >= ps[i + 1] && ps[i] >= 0.5 * grid_max) {
            k = i;
            break;
        }
    }
    if (k < 0) throw std::runtime_error("peak at window boundary");

    // Iterated parabolic refinement on the bracketing triple.
    double a = zs[k - 1], b = zs[k], c = zs[k + 1];
    double fa = ps[k - 1], fb = ps[k], fc = ps[k + 1];
    for (int iter = 0; iter < 80; ++iter) {
        const double d1 = (b - a) * (fb - fc);
        const double d2 = (b - c) * (fb - fa);
        const double den = d1 - d2;
        if (den == 0.0) break;
        const double v = b - 0.5 * ((b - a) * d1 - (b - c) * d2) / den;
        if (!(a < v && v < c) || v == b) break;
        const double fv = amp.probability(v);
        if (v < b) {
            if (fv >= fb) {
                c = b;
                fc = fb;
                b = v;
                fb = fv;
            } else {
                a = v;
                fa = fv;
            }
        } else {
            if (fv >= fb) {
                a = b;
                fa = fb;
                b = v;
                fb = fv;
            } else {
                c = v;
                fc = fv;
            }
        }
        if (std::abs(c - a) <= 1e-6 * std::abs(b)) break;
    }
    return {b, fb};
}

inline TransferPeak find_optimal_receiving_time(const CouplingMatrix& h,
                                                int receiving_site,
                                                std::pair<double, double> window) {
    return find_optimal_receiving_time(h, receiving_site, window.first, window.second);
}

// RMS gap between the last-site probability of `h` and the two-site Rabi
// prediction sin^2(j_eff*z), sampled uniformly on [0, z_max].
inline double rabi_rms(const CouplingMatrix& h, double j_eff, double z_max,
                       int n_points = 2001) {
    if (!(z_max > 0.0)) throw std::invalid_argument("z_max must be positive");
    if (n_points < 2) throw std::invalid_argument("need at least two sample points");
    const TransferAmplitude amp(h, h.dim());
    double acc = 0.0;
    for (int i = 0; i < n_points; ++i) {
        const double z = z_max * i / (n_points - 1);
        const double s = std::sin(j_eff * z);
        const double diff = amp.probability(z) - s * s;
        acc += diff * diff;
    }
    return std::sqrt(acc / n_points);
}

inline double rabi_comparison(const ChainSpec& spec, double z_max) {
    const double j_eff = effective_coupling(spec);
    const double period = M_PI / j_eff;
    if (z_max < period * (1.0 - 1e-9))
        throw std::invalid_argument("z_max shorter than one effective Rabi period");
    return rabi_rms(build_hamiltonian(spec), j_eff, z_max);
}

}  // namespace cradle
