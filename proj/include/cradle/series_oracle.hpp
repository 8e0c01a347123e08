#pragma once
// Independent evolution route for cross-validation: exp(-iHz) by scaling and
// squaring of a truncated Taylor series, on hand-rolled dense complex
// arithmetic.  Deliberately shares no code with the spectral propagator.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "cradle/chain.hpp"
#include "cradle/propagator.hpp"

namespace cradle {

namespace oracle_detail {

using cmat = std::vector<std::complex<double>>;  // row-major n*n

inline cmat matmul(const cmat& a, const cmat& b, int n) {
    cmat c(static_cast<size_t>(n) * n, {0.0, 0.0});
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const std::complex<double> aik = a[i * n + k];
            if (aik == std::complex<double>(0.0, 0.0)) continue;
            for (int j = 0; j < n; ++j) c[i * n + j] += aik * b[k * n + j];
        }
    return c;
}

}  // namespace oracle_detail

inline StateVector evolve_oracle(const CouplingMatrix& cm, const StateVector& psi0,
                                 double z) {
    validate_coupling_matrix(cm);
    const int n = cm.dim();
    if (psi0.size() != n)
        throw std::invalid_argument("state dimension does not match matrix dimension");
    detail::check_normalized(psi0);

    using oracle_detail::cmat;

    // Scale so the argument norm is at most 1/2; inf-norm bounds the spectral norm.
    double norm = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += std::abs(cm.h(i, j));
        norm = std::max(norm, row);
    }
    norm *= std::abs(z);
    int squarings = 0;
    while (norm > 0.5) {
        norm *= 0.5;
        ++squarings;
    }
    const double scale = std::ldexp(z, -squarings);  // z / 2^squarings

    // Truncate when the tail bound sum_{j>K} theta^j/j! <= 2*theta^(K+1)/(K+1)!
    // (theta <= 1/2) drops below 1e-13; the squared-up error stays < 1e-12.
    int terms = 1;
    double tail = 2.0 * 0.5;
    while (tail >= 1e-13) {
        ++terms;
        tail *= 0.5 / (terms + 1);
    }

    cmat u(static_cast<size_t>(n) * n, {0.0, 0.0});
    cmat power(u);
    for (int i = 0; i < n; ++i) u[i * n + i] = power[i * n + i] = 1.0;
    const std::complex<double> arg(0.0, -scale);
    double factorial = 1.0;
    cmat m(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i * n + j] = arg * cm.h(i, j);
    for (int k = 1; k <= terms; ++k) {
        power = oracle_detail::matmul(power, m, n);
        factorial *= k;
        for (size_t idx = 0; idx < u.size(); ++idx) u[idx] += power[idx] / factorial;
    }
    for (int s = 0; s < squarings; ++s) u = oracle_detail::matmul(u, u, n);

    StateVector out(n);
    for (int i = 0; i < n; ++i) {
        std::complex<double> acc(0.0, 0.0);
        for (int j = 0; j < n; ++j) acc += u[i * n + j] * psi0(j);
        out(i) = acc;
    }
    return out;
}

}  // namespace cradle
