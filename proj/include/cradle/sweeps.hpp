#pragma once
// Scripted parameter studies: weak-pitch (receiving time vs 1/alpha),
// strong-pitch robustness, NNN-attenuation scan, and defect-distance scan.
// Every sweep is a pure function of its plan, so identical inputs give
// identical records; points are reported sorted by parameter value.

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cradle/chain.hpp"
#include "cradle/coupling_law.hpp"
#include "cradle/fit.hpp"
#include "cradle/observables.hpp"
#include "cradle/version.hpp"

namespace cradle {

struct SweepPoint {
    double param_value = 0.0;
    double tau_mm = 0.0;
    double eta = 0.0;
};

struct SweepResult {
    std::string param_name;
    std::vector<SweepPoint> points;  // sorted ascending by param_value
    std::string chain_note;          // base-chain snapshot for the CSV header
    std::string version = tool_version;
};

namespace detail {

inline void require_strictly_monotone(const std::vector<double>& values,
                                      const char* what) {
    if (values.empty())
        throw std::invalid_argument(std::string(what) + " list must not be empty");
    if (values.size() < 2) return;
    const bool increasing = values[1] > values[0];
    for (size_t i = 1; i < values.size(); ++i) {
        const bool ok = increasing ? values[i] > values[i - 1] : values[i] < values[i - 1];
        if (!ok)
            throw std::invalid_argument(std::string(what) +
                                        " list must be strictly monotone");
    }
}

inline std::string chain_note(int n_sites, const char* strong, const char* weak) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "N=%d J=%s Jw=%s", n_sites, strong, weak);
    return buf;
}

inline std::string format_coupling(double j) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g/mm", j);
    return buf;
}

inline void sort_by_param(SweepResult& result) {
    std::sort(result.points.begin(), result.points.end(),
              [](const SweepPoint& a, const SweepPoint& b) {
                  return a.param_value < b.param_value;
              });
}

}  // namespace detail

// Strong coupling implied by the fitted tau*-vs-1/alpha slope.
inline double implied_strong_coupling(int n_sites, double slope) {
    if (slope <= 0.0)
        throw std::invalid_argument("implied coupling needs a positive fit slope");
    return M_PI * std::sqrt(static_cast<double>(n_sites - 2)) / (2.0 * slope);
}

// Scans the weak pitch at fixed J: per pitch, Jw = law(pitch), the revival
// peak is located, and tau* is fitted against 1/alpha = J/Jw.
inline std::pair<SweepResult, FitResult> sweep_alpha(
    int n_sites, double strong_coupling, const std::vector<double>& weak_pitches_um,
    const CouplingLaw& law) {
    detail::require_strictly_monotone(weak_pitches_um, "weak pitch");
    SweepResult sweep;
    sweep.param_name = "weak_pitch";
    sweep.chain_note = detail::chain_note(
        n_sites, detail::format_coupling(strong_coupling).c_str(), "law(weak_pitch)");
    std::vector<std::pair<double, double>> tau_vs_inv_alpha;
    for (const double pitch : weak_pitches_um) {
        const double jw = coupling_from_pitch(pitch, law);
        const ChainSpec spec = ChainSpec::from_couplings(n_sites, strong_coupling, jw);
        const TransferPeak peak = find_optimal_receiving_time(
            build_hamiltonian(spec), n_sites, default_search_window(spec));
        sweep.points.push_back({pitch, peak.tau_star, peak.eta_star});
        tau_vs_inv_alpha.emplace_back(strong_coupling / jw, peak.tau_star);
    }
    const FitResult fit = linear_fit(tau_vs_inv_alpha);
    detail::sort_by_param(sweep);
    return {sweep, fit};
}

// Scans the strong pitch at fixed Jw: J = law(pitch) per point.  The
// closed-form receiving time has no J dependence, so tau* should barely move.
inline SweepResult sweep_strong_coupling(int n_sites, double weak_coupling,
                                         const std::vector<double>& strong_pitches_um,
                                         const CouplingLaw& law) {
    detail::require_strictly_monotone(strong_pitches_um, "strong pitch");
    SweepResult sweep;
    sweep.param_name = "strong_pitch";
    sweep.chain_note = detail::chain_note(n_sites, "law(strong_pitch)",
                                          detail::format_coupling(weak_coupling).c_str());
    for (const double pitch : strong_pitches_um) {
        const ChainSpec spec = ChainSpec::from_couplings(
            n_sites, coupling_from_pitch(pitch, law), weak_coupling);
        const TransferPeak peak = find_optimal_receiving_time(
            build_hamiltonian(spec), n_sites, default_search_window(spec));
        sweep.points.push_back({pitch, peak.tau_star, peak.eta_star});
    }
    detail::sort_by_param(sweep);
    return sweep;
}

// Scans the NNN attenuation m on the island-free modified chain.  The law is
// only consulted in shadowed mode (bare NNN value from twice the strong pitch).
inline SweepResult sweep_m(const ChainSpec& spec, const std::vector<double>& m_values,
                           NnnMode mode, const CouplingLaw& law = default_coupling_law()) {
    detail::require_strictly_monotone(m_values, "m");
    SweepResult sweep;
    sweep.param_name = "nnn_m";
    sweep.chain_note = detail::chain_note(
        spec.n_sites, detail::format_coupling(spec.strong_coupling).c_str(),
        detail::format_coupling(spec.weak_coupling).c_str());
    for (const double m : m_values) {
        DefectSpec defect;
        defect.nnn_attenuation = m;
        defect.nnn_mode = mode;
        const TransferPeak peak =
            find_optimal_receiving_time(build_modified_hamiltonian(spec, defect, law),
                                        spec.n_sites, default_search_window(spec));
        sweep.points.push_back({m, peak.tau_star, peak.eta_star});
    }
    detail::sort_by_param(sweep);
    return sweep;
}

// Scans the island distance at fixed attenuation.  Efficiency is read at the
// original receiving site; population left on the island counts as loss.
inline SweepResult sweep_defect_distance(const ChainSpec& spec,
                                         const DefectSpec& defect_base,
                                         const std::vector<double>& distances_um,
                                         const CouplingLaw& law) {
    detail::require_strictly_monotone(distances_um, "defect distance");
    SweepResult sweep;
    sweep.param_name = "defect_distance";
    sweep.chain_note = detail::chain_note(
        spec.n_sites, detail::format_coupling(spec.strong_coupling).c_str(),
        detail::format_coupling(spec.weak_coupling).c_str());
    for (const double d : distances_um) {
        DefectSpec defect = defect_base;
        defect.distance_um = d;
        const TransferPeak peak =
            find_optimal_receiving_time(build_defect_chain(spec, defect, law),
                                        spec.n_sites, default_search_window(spec));
        sweep.points.push_back({d, peak.tau_star, peak.eta_star});
    }
    detail::sort_by_param(sweep);
    return sweep;
}

}  // namespace cradle
