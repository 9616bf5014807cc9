#include "sfl/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sfl/error.hpp"

namespace sfl {

LineFit ols(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) fail(ErrorKind::DegenerateFit, "need at least two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) mx += x[i], my += y[i];
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) fail(ErrorKind::DegenerateFit, "abscissae do not vary");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.slope_lo = f.slope_hi = f.slope;
    return f;
}

LineFit ols_bootstrap(const std::vector<double>& x, const std::vector<double>& y, int resamples, std::uint64_t seed) {
    LineFit f = ols(x, y);
    const std::size_t n = x.size();
    std::vector<double> fitted(n), resid(n);
    for (std::size_t i = 0; i < n; ++i) {
        fitted[i] = f.intercept + f.slope * x[i];
        resid[i] = y[i] - fitted[i];
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<double> slopes;
    slopes.reserve(resamples);
    std::vector<double> yb(n);
    for (int b = 0; b < resamples; ++b) {
        for (std::size_t i = 0; i < n; ++i) yb[i] = fitted[i] + resid[pick(rng)];
        slopes.push_back(ols(x, yb).slope);
    }
    std::sort(slopes.begin(), slopes.end());
    if (!slopes.empty()) {
        const auto at = [&](double q) {
            const double pos = q * (slopes.size() - 1);
            const std::size_t i = static_cast<std::size_t>(pos);
            const double frac = pos - i;
            return i + 1 < slopes.size() ? slopes[i] * (1 - frac) + slopes[i + 1] * frac : slopes[i];
        };
        f.slope_lo = at(0.025);
        f.slope_hi = at(0.975);
    }
    return f;
}

std::vector<double> log_space(double lo, double hi, int n) {
    if (!(lo > 0.0 && hi >= lo) || n < 1) fail(ErrorKind::InvalidArgument, "bad log grid");
    std::vector<double> g(n);
    if (n == 1) return {lo};
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) g[i] = std::exp(a + (b - a) * i / (n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

}  // namespace sfl
