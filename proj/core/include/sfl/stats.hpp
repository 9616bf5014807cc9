#pragma once

#include <cstdint>
#include <vector>

namespace sfl {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_lo = 0.0;  // 95% residual-bootstrap interval
    double slope_hi = 0.0;
};

LineFit ols(const std::vector<double>& x, const std::vector<double>& y);
// OLS plus a percentile interval from `resamples` residual-bootstrap refits.
LineFit ols_bootstrap(const std::vector<double>& x, const std::vector<double>& y, int resamples, std::uint64_t seed);

// n points log-spaced on [lo, hi]
std::vector<double> log_space(double lo, double hi, int n);

}  // namespace sfl
