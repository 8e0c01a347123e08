#pragma once
// Exact single-excitation evolution |psi(z)> = exp(-i H z) |psi(0)> via
// spectral decomposition (hbar = 1, z is propagation length in mm).

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cradle/chain.hpp"

namespace cradle {

using StateVector = Eigen::VectorXcd;

inline StateVector site_state(int dim, int site) {
    if (site < 1 || site > dim)
        throw std::invalid_argument("site index " + std::to_string(site) +
                                    " out of range [1, " + std::to_string(dim) + "]");
    StateVector psi = StateVector::Zero(dim);
    psi(site - 1) = 1.0;
    return psi;
}

struct Spectrum {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXd eigenvectors;  // orthonormal columns
};

// Deterministic ordering: eigenvalues ascending, and each eigenvector's first
// component of non-negligible magnitude made positive, so repeated runs are
// bit-identical.
inline Spectrum eigendecompose(const CouplingMatrix& cm) {
    validate_coupling_matrix(cm);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cm.h);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigendecomposition failed to converge");
    Spectrum s{solver.eigenvalues(), solver.eigenvectors()};
    for (int k = 0; k < s.eigenvectors.cols(); ++k) {
        for (int i = 0; i < s.eigenvectors.rows(); ++i) {
            const double v = s.eigenvectors(i, k);
            if (std::abs(v) > 1e-12) {
                if (v < 0.0) s.eigenvectors.col(k) = -s.eigenvectors.col(k);
                break;
            }
        }
    }
    return s;
}

namespace detail {

inline void check_normalized(const StateVector& psi) {
    if (std::abs(psi.squaredNorm() - 1.0) > 1e-12)
        throw std::invalid_argument("state vector must be normalized");
}

}  // namespace detail

inline StateVector evolve(const Spectrum& s, const StateVector& psi0, double z) {
    if (psi0.size() != s.eigenvalues.size())
        throw std::invalid_argument("state dimension " + std::to_string(psi0.size()) +
                                    " does not match matrix dimension " +
                                    std::to_string(s.eigenvalues.size()));
    detail::check_normalized(psi0);
    const std::complex<double> minus_i(0.0, -1.0);
    Eigen::VectorXcd modal = s.eigenvectors.transpose() * psi0;
    for (int k = 0; k < modal.size(); ++k)
        modal(k) *= std::exp(minus_i * s.eigenvalues(k) * z);
    return s.eigenvectors * modal;
}

inline StateVector evolve(const CouplingMatrix& cm, const StateVector& psi0, double z) {
    return evolve(eigendecompose(cm), psi0, z);
}

// Receiving-site probability as a function of z, reduced to the mode weights
// w_k = V[r,k] * V[1,k]; evaluating p_r(z) = |sum_k w_k exp(-i l_k z)|^2 costs
// O(N) per z, which is what makes dense peak searches cheap.
class TransferAmplitude {
  public:
    TransferAmplitude(const CouplingMatrix& cm, int receiving_site)
        : TransferAmplitude(eigendecompose(cm), receiving_site) {}

    TransferAmplitude(const Spectrum& s, int receiving_site)
        : eigenvalues_(s.eigenvalues),
          weights_(s.eigenvalues.size()) {
        const int n = static_cast<int>(s.eigenvalues.size());
        if (receiving_site < 1 || receiving_site > n)
            throw std::invalid_argument("receiving site " + std::to_string(receiving_site) +
                                        " out of range [1, " + std::to_string(n) + "]");
        for (int k = 0; k < n; ++k)
            weights_(k) = s.eigenvectors(receiving_site - 1, k) * s.eigenvectors(0, k);
    }

    double probability(double z) const {
        std::complex<double> amp(0.0, 0.0);
        for (int k = 0; k < eigenvalues_.size(); ++k)
            amp += weights_(k) * std::exp(std::complex<double>(0.0, -eigenvalues_(k) * z));
        return std::norm(amp);
    }

  private:
    Eigen::VectorXd eigenvalues_;
    Eigen::VectorXd weights_;
};

struct ProbabilityField {
    std::vector<double> z_mm;  // grid {0, step, ..., z_max}
    Eigen::MatrixXd p;         // row per z, column per site
};

inline ProbabilityField probability_map(const CouplingMatrix& cm, const StateVector& psi0,
                                        double z_max, double z_step) {
    if (z_step <= 0.0)
        throw std::invalid_argument("z step must be positive, got " +
                                    std::to_string(z_step));
    if (z_max < z_step)
        throw std::invalid_argument("z max must be at least one step");
    const Spectrum s = eigendecompose(cm);
    const int n_steps = static_cast<int>(std::floor(z_max / z_step + 1e-9));
    ProbabilityField field;
    field.z_mm.reserve(n_steps + 1);
    field.p.resize(n_steps + 1, cm.dim());
    for (int r = 0; r <= n_steps; ++r) {
        const double z = r * z_step;
        field.z_mm.push_back(z);
        const StateVector psi = evolve(s, psi0, z);
        for (int i = 0; i < cm.dim(); ++i) field.p(r, i) = std::norm(psi(i));
        const double total = field.p.row(r).sum();
        if (std::abs(total - 1.0) > 1e-10)
            throw std::runtime_error("probability row at z=" + std::to_string(z) +
                                     " sums to " + std::to_string(total));
    }
    return field;
}

}  // namespace cradle
