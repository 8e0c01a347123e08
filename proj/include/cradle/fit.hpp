#pragma once
// Ordinary least squares for the receiving-time-vs-1/alpha law and friends.

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cradle {

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
};

inline FitResult linear_fit(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2)
        throw std::invalid_argument("linear fit needs at least two points");
    double mean_x = 0.0, mean_y = 0.0;
    for (const auto& [x, y] : points) {
        mean_x += x;
        mean_y += y;
    }
    mean_x /= points.size();
    mean_y /= points.size();
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : points) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if (sxx <= 0.0)
        throw std::invalid_argument("linear fit is degenerate: x values are all equal");
    FitResult fit;
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;
    double acc = 0.0;
    for (const auto& [x, y] : points) {
        const double r = y - (fit.slope * x + fit.intercept);
        acc += r * r;
    }
    fit.residual_rms = std::sqrt(acc / points.size());
    return fit;
}

}  // namespace cradle
