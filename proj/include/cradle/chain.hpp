#pragma once
// Chain geometry -> single-excitation coupling matrices.
//
// The boundary-controlled chain couples its two end sites (sender, receiver)
// weakly (Jw = alpha*J) to a strongly coupled interior chain (J).  Variants:
// next-nearest-neighbour terms, an attached island ("defect") site, the
// fully engineered sqrt(i(N-i)) ladder, and the effective two-site model.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "cradle/coupling_law.hpp"

namespace cradle {

struct CouplingMatrix {
    Eigen::MatrixXd h;  // symmetric, zero diagonal, entries in mm^-1

    int dim() const { return static_cast<int>(h.rows()); }
};

inline void validate_coupling_matrix(const CouplingMatrix& cm) {
    const auto& h = cm.h;
    if (h.rows() != h.cols())
        throw std::invalid_argument("coupling matrix must be square");
    for (int i = 0; i < h.rows(); ++i) {
        if (h(i, i) != 0.0)
            throw std::invalid_argument("coupling matrix must have zero diagonal (site " +
                                        std::to_string(i + 1) + ")");
        for (int j = i + 1; j < h.cols(); ++j) {
            if (h(i, j) != h(j, i))
                throw std::invalid_argument("coupling matrix must be exactly symmetric");
            if (h(i, j) < 0.0)
                throw std::invalid_argument("couplings must be non-negative");
        }
    }
}

struct ChainSpec {
    int n_sites = 0;               // total, including sender and receiver
    double strong_coupling = 0.0;  // J, mm^-1
    double weak_coupling = 0.0;    // Jw = alpha*J, mm^-1
    std::optional<double> strong_pitch_um;
    std::optional<double> weak_pitch_um;
    std::string conflict_note;  // set when pitches and couplings disagreed

    double alpha() const { return weak_coupling / strong_coupling; }

    // Diagnostic only: the transfer analysis assumes alpha < 1/sqrt(N).
    bool in_transfer_regime() const {
        return alpha() < 1.0 / std::sqrt(static_cast<double>(n_sites));
    }

    static ChainSpec from_couplings(int n, double strong, double weak) {
        if (n < 3)
            throw std::invalid_argument("chain needs at least 3 sites, got " +
                                        std::to_string(n));
        if (strong <= 0.0)
            throw std::invalid_argument("strong coupling must be positive, got " +
                                        std::to_string(strong));
        if (weak <= 0.0 || weak > strong)
            throw std::invalid_argument(
                "weak coupling must satisfy 0 < Jw <= J, got Jw=" + std::to_string(weak) +
                ", J=" + std::to_string(strong));
        ChainSpec s;
        s.n_sites = n;
        s.strong_coupling = strong;
        s.weak_coupling = weak;
        return s;
    }

    static ChainSpec from_pitches(int n, double strong_pitch_um, double weak_pitch_um,
                                  const CouplingLaw& law) {
        ChainSpec s = from_couplings(n, coupling_from_pitch(strong_pitch_um, law),
                                     coupling_from_pitch(weak_pitch_um, law));
        s.strong_pitch_um = strong_pitch_um;
        s.weak_pitch_um = weak_pitch_um;
        return s;
    }
};

enum class NnnMode { none, uniform, shadowed };

inline std::string to_string(NnnMode mode) {
    switch (mode) {
        case NnnMode::none: return "none";
        case NnnMode::uniform: return "uniform";
        case NnnMode::shadowed: return "shadowed";
    }
    throw std::invalid_argument("unknown nnn mode");
}

inline NnnMode nnn_mode_from_string(const std::string& s) {
    if (s == "none") return NnnMode::none;
    if (s == "uniform") return NnnMode::uniform;
    if (s == "shadowed") return NnnMode::shadowed;
    throw std::invalid_argument("unknown nnn mode '" + s +
                                "' (expected none, uniform, or shadowed)");
}

struct DefectSpec {
    int attach_site = 0;      // 1-based chain site the island couples to; 0 = central
    double distance_um = 0.0; // island-to-chain distance d
    double nnn_attenuation = 0.0;  // m
    NnnMode nnn_mode = NnnMode::none;

    int resolved_attach_site(int n_sites) const {
        return attach_site == 0 ? (n_sites + 1) / 2 : attach_site;
    }

    // The island distance is checked by attach_defect, the only place it is
    // used; the modified chain without an island needs no distance.
    void validate(int n_sites) const {
        const int c = resolved_attach_site(n_sites);
        if (c < 2 || c > n_sites - 1)
            throw std::invalid_argument("defect attach site must lie in [2, N-1], got " +
                                        std::to_string(c));
        if (nnn_attenuation < 0.0 || nnn_attenuation >= 1.0)
            throw std::invalid_argument("nnn attenuation m must lie in [0, 1), got " +
                                        std::to_string(nnn_attenuation));
    }
};

inline CouplingMatrix build_hamiltonian(const ChainSpec& spec) {
    const int n = spec.n_sites;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    h(0, 1) = h(1, 0) = spec.weak_coupling;
    h(n - 2, n - 1) = h(n - 1, n - 2) = spec.weak_coupling;
    for (int i = 1; i < n - 2; ++i) h(i, i + 1) = h(i + 1, i) = spec.strong_coupling;
    return CouplingMatrix{std::move(h)};
}

// Next-nearest-neighbour variants.  "uniform" places m*J on every interior
// NNN pair (sites 2..N-3 to their +2 neighbours, 1-based).  "shadowed" gives
// every interior pair the bare two-pitch coupling A*exp(-k*2*p_s) and
// attenuates only the pair straddled by the defect to m times that value.
inline CouplingMatrix build_modified_hamiltonian(const ChainSpec& spec,
                                                 const DefectSpec& defect,
                                                 const CouplingLaw& law) {
    defect.validate(spec.n_sites);
    CouplingMatrix cm = build_hamiltonian(spec);
    auto& h = cm.h;
    const int n = spec.n_sites;
    switch (defect.nnn_mode) {
        case NnnMode::none:
            break;
        case NnnMode::uniform: {
            const double j2 = defect.nnn_attenuation * spec.strong_coupling;
            for (int i = 2; i <= n - 3; ++i)  // 1-based site indices
                h(i - 1, i + 1) = h(i + 1, i - 1) = j2;
            break;
        }
        case NnnMode::shadowed: {
            const double ps = spec.strong_pitch_um
                                  ? *spec.strong_pitch_um
                                  : pitch_from_coupling(spec.strong_coupling, law);
            const double j2 = coupling_from_pitch(2.0 * ps, law);
            const int c = defect.resolved_attach_site(n);
            for (int i = 2; i <= n - 3; ++i) {
                const double v = (i == c - 1) ? defect.nnn_attenuation * j2 : j2;
                h(i - 1, i + 1) = h(i + 1, i - 1) = v;
            }
            break;
        }
    }
    return cm;
}

// Appends the island as site n+1, coupled to the attach site through the same
// exponential pitch law evaluated at the island distance.
inline CouplingMatrix attach_defect(const CouplingMatrix& cm, const DefectSpec& defect,
                                    const CouplingLaw& law) {
    const int n = cm.dim();
    defect.validate(n);
    if (defect.distance_um <= 0.0)
        throw std::invalid_argument("defect distance must be positive, got " +
                                    std::to_string(defect.distance_um));
    const int c = defect.resolved_attach_site(n);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n + 1, n + 1);
    h.topLeftCorner(n, n) = cm.h;
    h(c - 1, n) = h(n, c - 1) = coupling_from_pitch(defect.distance_um, law);
    return CouplingMatrix{std::move(h)};
}

inline CouplingMatrix build_defect_chain(const ChainSpec& spec, const DefectSpec& defect,
                                         const CouplingLaw& law) {
    return attach_defect(build_modified_hamiltonian(spec, defect, law), defect, law);
}

// Fully engineered ladder J_i = (lambda/2)*sqrt(i(N-i)): perfect end-to-end
// transfer at z = pi/lambda.
inline CouplingMatrix build_pst_hamiltonian(int n_sites, double lambda) {
    if (n_sites < 2)
        throw std::invalid_argument("engineered ladder needs at least 2 sites, got " +
                                    std::to_string(n_sites));
    if (lambda <= 0.0)
        throw std::invalid_argument("rate scale lambda must be positive, got " +
                                    std::to_string(lambda));
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n_sites, n_sites);
    for (int i = 1; i < n_sites; ++i) {
        const double j = 0.5 * lambda * std::sqrt(static_cast<double>(i) * (n_sites - i));
        h(i - 1, i) = h(i, i - 1) = j;
    }
    return CouplingMatrix{std::move(h)};
}

// Two-site reduction: the ends talk through the chain at J_eff = Jw/sqrt(N-1).
inline CouplingMatrix effective_two_site_hamiltonian(const ChainSpec& spec) {
    const double j_eff =
        spec.weak_coupling / std::sqrt(static_cast<double>(spec.n_sites - 1));
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2, 2);
    h(0, 1) = h(1, 0) = j_eff;
    return CouplingMatrix{std::move(h)};
}

}  // namespace cradle
