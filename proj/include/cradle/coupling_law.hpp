#pragma once
// Evanescent coupling vs waveguide pitch: J(p) = A * exp(-k * p).
// Couplings are rates in mm^-1, pitches in um.

#include <cmath>
#include <stdexcept>
#include <string>

namespace cradle {

struct CouplingLaw {
    double amplitude_per_mm;  // rate extrapolated to zero pitch
    double decay_per_um;

    CouplingLaw(double amplitude, double decay)
        : amplitude_per_mm(amplitude), decay_per_um(decay) {
        if (amplitude <= 0.0 || decay <= 0.0)
            throw std::invalid_argument(
                "coupling law requires positive amplitude and decay, got A=" +
                std::to_string(amplitude) + ", k=" + std::to_string(decay));
    }
};

// Calibration of the femtosecond-written waveguide arrays this model targets.
inline CouplingLaw default_coupling_law() { return CouplingLaw(3.944, 0.1899); }

inline double coupling_from_pitch(double pitch_um, const CouplingLaw& law) {
    if (pitch_um < 0.0)
        throw std::invalid_argument("pitch must be non-negative, got " +
                                    std::to_string(pitch_um));
    return law.amplitude_per_mm * std::exp(-law.decay_per_um * pitch_um);
}

inline double pitch_from_coupling(double coupling_per_mm, const CouplingLaw& law) {
    if (coupling_per_mm <= 0.0 || coupling_per_mm > law.amplitude_per_mm)
        throw std::invalid_argument(
            "coupling must lie in (0, A] to invert the pitch law, got " +
            std::to_string(coupling_per_mm));
    return std::log(law.amplitude_per_mm / coupling_per_mm) / law.decay_per_um;
}

}  // namespace cradle
