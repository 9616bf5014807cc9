#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sfl/thermo.hpp"

namespace sfl {

struct AtlasEntry {
    Word word;
    MoebiusMap g;
    double kappa = 0.0;  // d(o, g o)
    double r = 1.0;      // e^{-kappa}
    BoundaryPoint xm;    // endpoint of the ray o -> g^{-1} o
    BoundaryPoint eta;
    bool has_eta = false;
};

AtlasEntry make_entry(const SchottkyGroup& G, const Word& w);

// e^{-2 C0} r_n <= r < r_n with r_n = e^{-4 C0 n}
struct Shell {
    int n = 0;
    std::vector<AtlasEntry> members;
};

bool in_shell(double kappa, double c0, int n);

// Shells 1..n_max, members in lexicographic word order.
std::vector<Shell> enumerate_shells(const SchottkyGroup& G, double c0, int n_max, std::size_t cost_cap = 20000000);

struct Shadow {
    BoundaryPoint axis;
    double radius = 0.0;  // chordal, half the S^2 chord
};

// Directions whose ray from o passes within `aperture` of g^{-1} o.
Shadow shadow_of(const AtlasEntry& e, double aperture);
bool shadow_contains(const Shadow& s, const BoundaryPoint& xi);

// f_g(xi) = e^{-delta B_xi(g^{-1} o, o)}
double f_gamma(const AtlasEntry& e, const BoundaryPoint& xi, double delta);

// Picks eta among limit points of the inverse word and its extensions,
// nearest to the axis inside the inner shadow of aperture c0 / 2.
void assign_eta(const SchottkyGroup& G, AtlasEntry& e, double c0);

struct CoverReport {
    std::size_t points = 0;
    std::size_t uncovered = 0;
    std::size_t multiplicity = 0;  // max shadows over one point
};

CoverReport shell_cover(const Shell& s, double c0, const std::vector<BoundaryPoint>& points);

// Smallest value of the candidate list whose shell-1 shadows cover `points`.
double choose_c0(const SchottkyGroup& G, const std::vector<BoundaryPoint>& points,
                 const std::vector<double>& candidates = {1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0});

// P_n R on `points` from the values R(eta_g) of every member.
std::vector<double> pn_apply(const Shell& s, const std::vector<double>& r_at_eta, const std::vector<BoundaryPoint>& points,
                             double delta);

// Limit points of all words of length `depth`, deduplicated at 1e-12.
std::vector<BoundaryPoint> evaluation_grid(const SchottkyGroup& G, int depth);

struct WalkParams {
    double c0 = 0.0;  // 0 picks it from the shell-1 cover
    double beta = 0.4;
    double delta = 0.0;
    int grid_depth = 8;
    std::size_t cost_cap = 20000000;
};

struct WalkState {
    WalkParams params;
    int stage = 0;
    std::vector<BoundaryPoint> grid;
    std::vector<double> R;  // R_stage on the grid
    std::vector<Shell> shells;
    std::vector<std::vector<double>> nu;  // nu[n-1][member]
    std::vector<double> c7;               // per stage
    std::vector<double> r_max;            // max R_n on the grid, n = 0..stage
    std::vector<std::vector<double>> u;   // u_n on the grid, n = 1..stage
    // R_n anywhere, n <= stage
    double R_at(const BoundaryPoint& xi, int n) const;
    double R_at(const BoundaryPoint& xi) const { return R_at(xi, stage); }
    double ledger_error() const;
};

WalkState run_iteration(const SchottkyGroup& G, const WalkParams& params, int M);

struct StationarityReport {
    double pointwise = 0.0;  // max |sum nu f - 1| on the grid
    double max_R = 0.0;
    double ledger = 0.0;
    std::vector<double> weak;  // per test function
};

// Test functions 1, Re z, Im z, Re z^2 when `test_fns` is empty. stage < 0
// means state.stage; earlier stages reuse the same shells and weights.
StationarityReport stationarity_residual(const WalkState& state, const DiscreteMeasure& mu,
                                         const std::vector<std::function<double(cplx)>>& test_fns = {},
                                         int stage = -1);

struct MomentReport {
    double eps1 = 0.0;
    double decay_constant = 0.0;  // C in R_n <= (1 - beta / C)^n
    std::vector<double> shell_sums;
    std::vector<double> ratios;
    std::vector<double> envelope;
    bool summable = false;  // final ratio < 1
};

MomentReport exponential_moment(const WalkState& state, double eps1);

struct LipschitzReport {
    std::size_t pairs = 0;
    std::size_t violations = 0;
    double worst = 0.0;  // max lhs / rhs
};

// |R_n(xi)/R_n(eta) - 1| <= (d_o(xi, eta) / r_{n+1})^{1/2} on nearby limit points
LipschitzReport lipschitz_check(const SchottkyGroup& G, const WalkState& state, std::size_t n_pairs,
                                std::uint64_t seed = 1);

}  // namespace sfl
