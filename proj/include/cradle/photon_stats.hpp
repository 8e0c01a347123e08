#pragma once
// Gate-based Monte Carlo of the heralded photon-pair source feeding a
// Hanbury-Brown--Twiss splitter (herald detector d1, signal arms d2/d3), and
// the coincidence-ratio estimators with delta-method standard errors.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace cradle {

enum class SourceKind { heralded_pair, thermal, coherent };
enum class PairLaw { bernoulli, poisson };  // heralded pair-number statistics

inline std::string to_string(SourceKind kind) {
    switch (kind) {
        case SourceKind::heralded_pair: return "heralded";
        case SourceKind::thermal: return "thermal";
        case SourceKind::coherent: return "coherent";
    }
    throw std::invalid_argument("unknown source kind");
}

inline SourceKind source_kind_from_string(const std::string& s) {
    if (s == "heralded" || s == "heralded_pair") return SourceKind::heralded_pair;
    if (s == "thermal") return SourceKind::thermal;
    if (s == "coherent") return SourceKind::coherent;
    throw std::invalid_argument("unknown source kind '" + s +
                                "' (expected heralded, thermal, or coherent)");
}

struct SourceModel {
    SourceKind kind = SourceKind::heralded_pair;
    PairLaw pair_law = PairLaw::bernoulli;  // consulted for heralded_pair only
    double mean_photons = 0.0;              // mu, photons or pairs per gate
    double transmission = 1.0;              // signal-arm survival probability
    double herald_efficiency = 1.0;         // herald-arm detection probability
    double dark_count_prob = 0.0;           // per detector per gate

    void validate() const {
        if (!(mean_photons > 0.0))
            throw std::invalid_argument("mean photon number must be positive, got " +
                                        std::to_string(mean_photons));
        if (kind == SourceKind::heralded_pair && pair_law == PairLaw::bernoulli &&
            mean_photons > 1.0)
            throw std::invalid_argument(
                "bernoulli pair statistics need mu <= 1, got " +
                std::to_string(mean_photons));
        for (double p : {transmission, herald_efficiency, dark_count_prob})
            if (p < 0.0 || p > 1.0)
                throw std::invalid_argument(
                    "detection probabilities must lie in [0, 1], got " +
                    std::to_string(p));
    }
};

struct DetectionRecord {
    std::uint64_t gate = 0;
    bool d1 = false;  // herald
    bool d2 = false;  // signal, transmitted splitter port
    bool d3 = false;  // signal, reflected splitter port
};

namespace stats_detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

}  // namespace stats_detail

// Counter-based stream: the state hashes (seed, gate), so gate k's draws never
// depend on how much randomness earlier gates consumed — simulating gates in
// any order or in parallel reproduces the sequential stream bit for bit.
class GateRng {
  public:
    GateRng(std::uint64_t seed, std::uint64_t gate)
        : state_(stats_detail::mix64(seed + 0x9E3779B97F4A7C15ULL * (gate + 1))) {}

    double uniform() {  // [0, 1), 53-bit
        state_ += 0x9E3779B97F4A7C15ULL;
        return static_cast<double>(stats_detail::mix64(state_) >> 11) * 0x1.0p-53;
    }

  private:
    std::uint64_t state_;
};

namespace stats_detail {

inline int draw_poisson(GateRng& rng, double mean) {
    const double floor_p = std::exp(-mean);
    int n = -1;
    double p = 1.0;
    do {
        ++n;
        p *= rng.uniform();
    } while (p > floor_p);
    return n;
}

// Thermal occupation is geometric: P(n) = mu^n / (1+mu)^(n+1).
inline int draw_thermal(GateRng& rng, double mean) {
    const double step = mean / (1.0 + mean);
    int n = 0;
    while (rng.uniform() < step) ++n;
    return n;
}

}  // namespace stats_detail

// One record per gate.  Fixed draw order within a gate: photon/pair number,
// herald detection per pair, then per signal photon survival and routing,
// then one dark-count draw per detector.
inline std::vector<DetectionRecord> simulate_trials(const SourceModel& model,
                                                    std::uint64_t n_gates,
                                                    std::uint64_t seed) {
    model.validate();
    if (n_gates == 0) throw std::invalid_argument("need at least one gate");
    std::vector<DetectionRecord> records;
    records.reserve(n_gates);
    for (std::uint64_t gate = 0; gate < n_gates; ++gate) {
        GateRng rng(seed, gate);
        int n_photons = 0;
        switch (model.kind) {
            case SourceKind::heralded_pair:
                n_photons = model.pair_law == PairLaw::bernoulli
                                ? (rng.uniform() < model.mean_photons ? 1 : 0)
                                : stats_detail::draw_poisson(rng, model.mean_photons);
                break;
            case SourceKind::thermal:
                n_photons = stats_detail::draw_thermal(rng, model.mean_photons);
                break;
            case SourceKind::coherent:
                n_photons = stats_detail::draw_poisson(rng, model.mean_photons);
                break;
        }
        DetectionRecord rec;
        rec.gate = gate;
        if (model.kind == SourceKind::heralded_pair)
            for (int i = 0; i < n_photons; ++i)
                if (rng.uniform() < model.herald_efficiency) rec.d1 = true;
        for (int i = 0; i < n_photons; ++i) {
            if (rng.uniform() >= model.transmission) continue;  // photon lost
            if (rng.uniform() < 0.5)
                rec.d2 = true;
            else
                rec.d3 = true;
        }
        if (rng.uniform() < model.dark_count_prob) rec.d1 = true;
        if (rng.uniform() < model.dark_count_prob) rec.d2 = true;
        if (rng.uniform() < model.dark_count_prob) rec.d3 = true;
        records.push_back(rec);
    }
    return records;
}

// Per-gate click patterns binned into the 8 cells d1 + 2*d2 + 4*d3; every
// estimator and its covariance is a function of these multinomial counts.
struct ClickCounts {
    std::uint64_t n_gates = 0;
    std::array<std::uint64_t, 8> cells{};

    void add(const DetectionRecord& rec) {
        ++n_gates;
        ++cells[(rec.d1 ? 1 : 0) + (rec.d2 ? 2 : 0) + (rec.d3 ? 4 : 0)];
    }

    // Gates where every listed detector clicked (other detectors free).
    std::uint64_t coincidences(bool d1, bool d2, bool d3) const {
        const int need = (d1 ? 1 : 0) + (d2 ? 2 : 0) + (d3 ? 4 : 0);
        std::uint64_t n = 0;
        for (int c = 0; c < 8; ++c)
            if ((c & need) == need) n += cells[c];
        return n;
    }

    std::uint64_t n1() const { return coincidences(true, false, false); }
    std::uint64_t n2() const { return coincidences(false, true, false); }
    std::uint64_t n3() const { return coincidences(false, false, true); }
    std::uint64_t n12() const { return coincidences(true, true, false); }
    std::uint64_t n13() const { return coincidences(true, false, true); }
    std::uint64_t n23() const { return coincidences(false, true, true); }
    std::uint64_t n123() const { return coincidences(true, true, true); }
};

inline ClickCounts count_clicks(const std::vector<DetectionRecord>& records) {
    ClickCounts counts;
    for (const auto& rec : records) counts.add(rec);
    return counts;
}

struct Probabilities {
    double p1 = 0, p2 = 0, p3 = 0, p12 = 0, p13 = 0, p123 = 0;
};

inline Probabilities estimate_probabilities(const ClickCounts& counts) {
    if (counts.n_gates == 0) throw std::invalid_argument("no detection records");
    const double n = static_cast<double>(counts.n_gates);
    return {counts.n1() / n,  counts.n2() / n,  counts.n3() / n,
            counts.n12() / n, counts.n13() / n, counts.n123() / n};
}

inline Probabilities estimate_probabilities(const std::vector<DetectionRecord>& records) {
    return estimate_probabilities(count_clicks(records));
}

struct CorrelationEstimate {
    std::string estimator;
    double value = 0.0;
    double std_error = 0.0;
    ClickCounts counts;
};

namespace stats_detail {

// A linear statistic over the 8 cells: p_w = sum_c w[c] * cells[c] / n.
using CellWeights = std::array<double, 8>;

inline CellWeights coincidence_weights(bool d1, bool d2, bool d3) {
    const int need = (d1 ? 1 : 0) + (d2 ? 2 : 0) + (d3 ? 4 : 0);
    CellWeights w{};
    for (int c = 0; c < 8; ++c) w[c] = ((c & need) == need) ? 1.0 : 0.0;
    return w;
}

inline CellWeights sum_weights(const CellWeights& a, const CellWeights& b) {
    CellWeights w{};
    for (int c = 0; c < 8; ++c) w[c] = a[c] + b[c];
    return w;
}

struct RatioFactor {
    CellWeights weights;
    int sign;  // +1 numerator, -1 denominator
};

// Value and delta-method standard error of prod_i p_i^{sign_i} under the
// multinomial covariance Cov(p_w, p_v) = (sum_c w_c v_c p_c - p_w p_v) / n.
// Callers guarantee positive denominators; a vanishing numerator factor gets
// the one-sided gradient (the estimate is 0 and only that factor moves it).
inline void delta_ratio(const ClickCounts& counts, const std::vector<RatioFactor>& factors,
                        double& value, double& std_error) {
    const double n = static_cast<double>(counts.n_gates);
    const size_t k = factors.size();
    std::vector<double> p(k);
    for (size_t i = 0; i < k; ++i) {
        double acc = 0.0;
        for (int c = 0; c < 8; ++c) acc += factors[i].weights[c] * counts.cells[c];
        p[i] = acc / n;
    }
    int zero_at = -1, zero_count = 0;
    for (size_t i = 0; i < k; ++i)
        if (factors[i].sign > 0 && p[i] == 0.0) {
            zero_at = static_cast<int>(i);
            ++zero_count;
        }
    std::vector<double> grad(k, 0.0);
    if (zero_count == 0) {
        value = 1.0;
        for (size_t i = 0; i < k; ++i)
            value *= factors[i].sign > 0 ? p[i] : 1.0 / p[i];
        for (size_t i = 0; i < k; ++i) grad[i] = value * factors[i].sign / p[i];
    } else {
        value = 0.0;
        if (zero_count == 1) {
            double g = 1.0;
            for (size_t i = 0; i < k; ++i) {
                if (static_cast<int>(i) == zero_at) continue;
                g *= factors[i].sign > 0 ? p[i] : 1.0 / p[i];
            }
            // The plug-in variance of an empty cell is zero, which would
            // report false certainty; floor the count at one event so the
            // error reflects the resolution of the run.
            std_error = g * std::sqrt((1.0 / n) * (1.0 - 1.0 / n) / n);
            return;
        }
        std_error = 0.0;
        return;
    }
    double var = 0.0;
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) {
            double cross = 0.0;
            for (int c = 0; c < 8; ++c)
                cross += factors[i].weights[c] * factors[j].weights[c] * counts.cells[c];
            const double cov = (cross / n - p[i] * p[j]) / n;
            var += grad[i] * grad[j] * cov;
        }
    std_error = std::sqrt(std::max(var, 0.0));
}

}  // namespace stats_detail

// Anti-correlation g2(0) = p1*p123 / (p12*p13): 0 for an ideal heralded
// single photon, 1 for independent streams.
inline CorrelationEstimate g2_zero(const ClickCounts& counts) {
    if (counts.n12() == 0 || counts.n13() == 0)
        throw std::runtime_error(
            "insufficient coincidences for g2(0): n12=" + std::to_string(counts.n12()) +
            ", n13=" + std::to_string(counts.n13()));
    using stats_detail::coincidence_weights;
    CorrelationEstimate est;
    est.estimator = "g2_zero";
    est.counts = counts;
    stats_detail::delta_ratio(counts,
                              {{coincidence_weights(true, false, false), +1},
                               {coincidence_weights(true, true, true), +1},
                               {coincidence_weights(true, true, false), -1},
                               {coincidence_weights(true, false, true), -1}},
                              est.value, est.std_error);
    return est;
}

// Herald-signal cross-correlation g_si = (p12+p13) / (p1*(p2+p3)): 1/mu for a
// lossless Bernoulli pair source, 1 for independent streams.
inline CorrelationEstimate g_si(const ClickCounts& counts) {
    if (counts.n1() == 0 || counts.n2() + counts.n3() == 0)
        throw std::runtime_error(
            "insufficient singles for g_si: n1=" + std::to_string(counts.n1()) +
            ", n2+n3=" + std::to_string(counts.n2() + counts.n3()));
    using stats_detail::coincidence_weights;
    const auto w2 = coincidence_weights(false, true, false);
    const auto w3 = coincidence_weights(false, false, true);
    const auto w12 = coincidence_weights(true, true, false);
    const auto w13 = coincidence_weights(true, false, true);
    CorrelationEstimate est;
    est.estimator = "g_si";
    est.counts = counts;
    stats_detail::delta_ratio(counts,
                              {{stats_detail::sum_weights(w12, w13), +1},
                               {coincidence_weights(true, false, false), -1},
                               {stats_detail::sum_weights(w2, w3), -1}},
                              est.value, est.std_error);
    return est;
}

// Unconditional signal-arm autocorrelation p23 / (p2*p3): 2 for thermal
// light, 1 for coherent light, herald ignored.
inline CorrelationEstimate g2_signal(const ClickCounts& counts) {
    if (counts.n2() == 0 || counts.n3() == 0)
        throw std::runtime_error(
            "insufficient singles for signal-arm g2: n2=" + std::to_string(counts.n2()) +
            ", n3=" + std::to_string(counts.n3()));
    using stats_detail::coincidence_weights;
    CorrelationEstimate est;
    est.estimator = "g2_signal";
    est.counts = counts;
    stats_detail::delta_ratio(counts,
                              {{coincidence_weights(false, true, true), +1},
                               {coincidence_weights(false, true, false), -1},
                               {coincidence_weights(false, false, true), -1}},
                              est.value, est.std_error);
    return est;
}

// Cross-check for the delta-method errors: multinomial bootstrap over the
// cell counts.  A replicate that breaks the estimator's preconditions (e.g.
// a coincidence bin resampled to zero) propagates that estimator's error.
template <typename Estimator>
double bootstrap_se(const ClickCounts& counts, Estimator estimator, int n_replicates,
                    std::uint64_t seed) {
    if (counts.n_gates == 0) throw std::invalid_argument("no detection records");
    if (n_replicates < 2)
        throw std::invalid_argument("bootstrap needs at least two replicates");
    std::mt19937_64 rng(seed);
    std::vector<double> values;
    values.reserve(n_replicates);
    for (int rep = 0; rep < n_replicates; ++rep) {
        ClickCounts re;
        re.n_gates = counts.n_gates;
        std::uint64_t remaining = counts.n_gates;
        double prob_left = 1.0;
        for (int c = 0; c < 8; ++c) {
            if (c == 7 || prob_left <= 0.0) {
                re.cells[c] = (c == 7) ? remaining : 0;
                if (c == 7) remaining = 0;
                continue;
            }
            const double p_c = static_cast<double>(counts.cells[c]) / counts.n_gates;
            const double cond = std::min(1.0, std::max(0.0, p_c / prob_left));
            std::binomial_distribution<std::uint64_t> binom(remaining, cond);
            const std::uint64_t k = binom(rng);
            re.cells[c] = k;
            remaining -= k;
            prob_left -= p_c;
        }
        values.push_back(estimator(re));
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= values.size();
    double acc = 0.0;
    for (double v : values) acc += (v - mean) * (v - mean);
    return std::sqrt(acc / (values.size() - 1));
}

}  // namespace cradle
