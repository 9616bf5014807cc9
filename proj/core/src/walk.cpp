#include "sfl/walk.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>

#include "sfl/error.hpp"
#include "sfl/parallel.hpp"

namespace sfl {

AtlasEntry make_entry(const SchottkyGroup& G, const Word& w) {
    AtlasEntry e;
    e.word = w;
    e.g = G.matrix_of(w);
    e.kappa = displacement(e.g);
    e.r = std::exp(-e.kappa);
    e.xm = ray_endpoint(e.g);
    return e;
}

bool in_shell(double kappa, double c0, int n) { return kappa > 4.0 * c0 * n && kappa <= 4.0 * c0 * n + 2.0 * c0; }

namespace {

int shell_index(double kappa, double c0, int n_max) {
    const int n = static_cast<int>(std::floor(kappa / (4.0 * c0)));
    for (int m = std::max(1, n - 1); m <= std::min(n_max, n + 1); ++m)
        if (in_shell(kappa, c0, m)) return m;
    return 0;
}

}  // namespace

std::vector<Shell> enumerate_shells(const SchottkyGroup& G, double c0, int n_max, std::size_t cost_cap) {
    if (!(c0 > 0.0)) fail(ErrorKind::InvalidArgument, "C0 must be positive");
    if (n_max < 1) return {};
    double margin = 0.0;
    for (int l = 0; l < G.letters(); ++l) margin = std::max(margin, displacement(G.generator(l)));
    const double reach = 4.0 * c0 * n_max + 2.0 * c0;
    const int L = G.letters();

    struct Found {
        std::vector<std::vector<AtlasEntry>> by_shell;
        std::size_t explored = 0;
    };
    std::vector<Found> per(L);
    std::atomic<std::size_t> explored{0};
    parallel_for(L, [&](std::size_t first) {
        Found& f = per[first];
        f.by_shell.resize(n_max + 1);
        struct Node {
            Word w;
            MoebiusMap g;
        };
        std::vector<Node> stack{{Word{static_cast<int>(first)}, G.generator(static_cast<int>(first))}};
        while (!stack.empty()) {
            Node nd = std::move(stack.back());
            stack.pop_back();
            if (++explored > cost_cap) fail(ErrorKind::CostCap, "shell enumeration exceeded the word budget");
            const double kappa = displacement(nd.g);
            const int n = shell_index(kappa, c0, n_max);
            if (n > 0) {
                AtlasEntry e;
                e.word = nd.w;
                e.g = nd.g;
                e.kappa = kappa;
                e.r = std::exp(-kappa);
                e.xm = ray_endpoint(nd.g);
                f.by_shell[n].push_back(std::move(e));
            }
            const bool prune = kappa > reach + margin;
            // children pushed in reverse so they pop in lexicographic order
            for (int l = L - 1; l >= 0; --l) {
                if (l == G.inverse_letter(nd.w.back())) continue;
                MoebiusMap child = compose(nd.g, G.generator(l));
                if (prune) {
                    if (displacement(child) <= reach)
                        fail(ErrorKind::NonConvergence, "pruning margin violated by " + word_to_string(nd.w));
                    continue;
                }
                Word cw = nd.w;
                cw.push_back(l);
                stack.push_back({std::move(cw), child});
            }
        }
    });
    std::vector<Shell> shells(n_max);
    for (int n = 1; n <= n_max; ++n) {
        shells[n - 1].n = n;
        for (auto& f : per)
            for (auto& e : f.by_shell[n]) shells[n - 1].members.push_back(std::move(e));
        if (shells[n - 1].members.empty())
            fail(ErrorKind::EmptyShell, "shell " + std::to_string(n) + " is empty for C0 = " + std::to_string(c0));
    }
    return shells;
}

Shadow shadow_of(const AtlasEntry& e, double aperture) {
    Shadow s;
    s.axis = e.xm;
    const double sa = std::sinh(aperture) / std::sinh(e.kappa);
    if (!(e.kappa > aperture) || sa >= 1.0) {
        s.radius = 1.0;
        return s;
    }
    s.radius = std::sin(0.5 * std::asin(sa));
    return s;
}

bool shadow_contains(const Shadow& s, const BoundaryPoint& xi) { return chordal_distance(s.axis, xi) <= s.radius; }

double f_gamma(const AtlasEntry& e, const BoundaryPoint& xi, double delta) {
    return std::exp(delta * std::log(spherical_derivative(e.g, xi)));
}

void assign_eta(const SchottkyGroup& G, AtlasEntry& e, double c0) {
    const Shadow inner = shadow_of(e, 0.5 * c0);
    std::vector<Word> level{G.inverse_word(e.word)};
    double best = HUGE_VAL;
    for (int ext = 0; ext <= 4; ++ext) {
        for (const Word& w : level) {
            const BoundaryPoint p = G.limit_point(w);
            const double d = chordal_distance(inner.axis, p);
            if (d <= inner.radius && d < best) {
                best = d;
                e.eta = p;
                e.has_eta = true;
            }
        }
        if (e.has_eta && ext >= 2) return;
        std::vector<Word> next;
        for (const Word& w : level)
            for (int l = 0; l < G.letters(); ++l)
                if (l != G.inverse_letter(w.back())) next.push_back(concat(w, Word{l}));
        level.swap(next);
    }
    if (!e.has_eta) fail(ErrorKind::MissingEta, "no limit point in the inner shadow of " + word_to_string(e.word));
}

CoverReport shell_cover(const Shell& s, double c0, const std::vector<BoundaryPoint>& points) {
    CoverReport rep;
    rep.points = points.size();
    std::vector<Shadow> sh;
    for (const auto& e : s.members) sh.push_back(shadow_of(e, c0));
    std::vector<std::size_t> mult(points.size(), 0);
    parallel_for(points.size(), [&](std::size_t i) {
        for (const auto& x : sh) mult[i] += shadow_contains(x, points[i]);
    });
    for (auto m : mult) {
        rep.uncovered += m == 0;
        rep.multiplicity = std::max(rep.multiplicity, m);
    }
    return rep;
}

double choose_c0(const SchottkyGroup& G, const std::vector<BoundaryPoint>& points, const std::vector<double>& candidates) {
    for (double c0 : candidates) {
        std::vector<Shell> s;
        try {
            s = enumerate_shells(G, c0, 1);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::EmptyShell) continue;
            throw;
        }
        if (shell_cover(s[0], c0, points).uncovered == 0) return c0;
    }
    fail(ErrorKind::NonConvergence, "no candidate C0 gives a shell-1 cover");
}

std::vector<double> pn_apply(const Shell& s, const std::vector<double>& r_at_eta, const std::vector<BoundaryPoint>& points,
                             double delta) {
    if (r_at_eta.size() != s.members.size()) fail(ErrorKind::InvalidArgument, "one R value per member expected");
    std::vector<double> w(s.members.size());
    for (std::size_t m = 0; m < w.size(); ++m) {
        if (!s.members[m].has_eta) fail(ErrorKind::MissingEta, "member without eta");
        w[m] = r_at_eta[m] * std::pow(s.members[m].r, delta);
    }
    std::vector<double> out(points.size(), 0.0);
    parallel_for(points.size(), [&](std::size_t i) {
        double acc = 0.0;
        for (std::size_t m = 0; m < w.size(); ++m) acc += w[m] * f_gamma(s.members[m], points[i], delta);
        out[i] = acc;
    });
    return out;
}

std::vector<BoundaryPoint> evaluation_grid(const SchottkyGroup& G, int depth) {
    const auto pts = G.limit_points(depth);
    std::vector<std::size_t> order(pts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto key = [&](std::size_t i) { return pts[i].unit(); };
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return key(i) < key(j); });
    std::vector<bool> drop(pts.size(), false);
    for (std::size_t q = 1; q < order.size(); ++q)
        if (chordal_distance(pts[order[q]], pts[order[q - 1]]) < 1e-12) drop[order[q]] = true;
    std::vector<BoundaryPoint> out;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (!drop[i]) out.push_back(pts[i]);
    return out;
}

double WalkState::R_at(const BoundaryPoint& xi, int n) const {
    double s = 0.0;
    for (int k = 0; k < n; ++k)
        for (std::size_t m = 0; m < nu[k].size(); ++m) s += nu[k][m] * f_gamma(shells[k].members[m], xi, params.delta);
    return 1.0 - s;
}

double WalkState::ledger_error() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double s = R[i];
        for (const auto& un : u) s += un[i];
        worst = std::max(worst, std::abs(1.0 - s));
    }
    return worst;
}

WalkState run_iteration(const SchottkyGroup& G, const WalkParams& params, int M) {
    if (M < 0) fail(ErrorKind::InvalidArgument, "M must be nonnegative");
    if (!(params.delta > 0.0 && params.delta < 2.0)) fail(ErrorKind::InvalidArgument, "delta must lie in (0, 2)");
    WalkState st;
    st.params = params;
    st.grid = evaluation_grid(G, params.grid_depth);
    if (!(st.params.c0 > 0.0)) st.params.c0 = choose_c0(G, st.grid);
    const double c0 = st.params.c0, beta = params.beta;
    if (!(beta > 0.0) || !(1.0 - beta > beta + std::exp(-4.0 * c0)))
        fail(ErrorKind::InvalidArgument, "beta violates 1 - beta > beta + e^{-4 C0}");
    st.R.assign(st.grid.size(), 1.0);
    st.r_max.push_back(1.0);
    if (M == 0) return st;
    st.shells = enumerate_shells(G, c0, M, params.cost_cap);
    for (auto& sh : st.shells) {
        parallel_for(sh.members.size(), [&](std::size_t m) { assign_eta(G, sh.members[m], c0); });
    }
    for (int n = 0; n < M; ++n) {
        const Shell& S = st.shells[n];
        std::vector<double> r_eta(S.members.size());
        parallel_for(S.members.size(), [&](std::size_t m) { r_eta[m] = st.R_at(S.members[m].eta, n); });
        for (double v : r_eta)
            if (!(v > 0.0)) fail(ErrorKind::PositivityLost, "R is not positive at some eta");
        const std::vector<double> P = pn_apply(S, r_eta, st.grid, params.delta);
        double c7 = 0.0;
        for (std::size_t i = 0; i < P.size(); ++i) c7 = std::max(c7, P[i] / st.R[i]);
        if (!(c7 > 0.0)) fail(ErrorKind::PositivityLost, "P R vanishes on the grid");
        std::vector<double> un(P.size());
        double rmax = 0.0;
        for (std::size_t i = 0; i < P.size(); ++i) {
            un[i] = beta / c7 * P[i];
            st.R[i] -= un[i];
            if (!(st.R[i] > 0.0)) fail(ErrorKind::PositivityLost, "R dropped to zero on the grid");
            rmax = std::max(rmax, st.R[i]);
        }
        std::vector<double> nun(S.members.size());
        for (std::size_t m = 0; m < nun.size(); ++m)
            nun[m] = r_eta[m] * std::pow(S.members[m].r, params.delta) * beta / c7;
        st.nu.push_back(std::move(nun));
        st.u.push_back(std::move(un));
        st.c7.push_back(c7);
        st.r_max.push_back(rmax);
        st.stage = n + 1;
    }
    return st;
}

StationarityReport stationarity_residual(const WalkState& state, const DiscreteMeasure& mu,
                                         const std::vector<std::function<double(cplx)>>& test_fns, int stage) {
    const int n = stage < 0 ? state.stage : stage;
    if (n > state.stage) fail(ErrorKind::InvalidArgument, "stage beyond the iteration");
    std::vector<std::function<double(cplx)>> fns = test_fns;
    if (fns.empty())
        fns = {[](cplx) { return 1.0; }, [](cplx z) { return z.real(); }, [](cplx z) { return z.imag(); },
               [](cplx z) { return (z * z).real(); }};
    StationarityReport rep;
    std::vector<double> dev(state.grid.size());
    parallel_for(state.grid.size(), [&](std::size_t i) { dev[i] = std::abs(state.R_at(state.grid[i], n)); });
    for (double d : dev) rep.pointwise = std::max(rep.pointwise, d);
    rep.max_R = state.r_max[n];
    rep.ledger = state.ledger_error();
    // nu * mu has density sum nu f_g against mu
    std::vector<double> density(mu.atoms.size());
    parallel_for(mu.atoms.size(), [&](std::size_t i) { density[i] = 1.0 - state.R_at(BoundaryPoint(mu.atoms[i].z), n); });
    for (const auto& f : fns) {
        double pushed = 0.0, base = 0.0;
        for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
            const double v = mu.atoms[i].mass * f(mu.atoms[i].z);
            pushed += v * density[i];
            base += v;
        }
        rep.weak.push_back(std::abs(pushed - base));
    }
    return rep;
}

MomentReport exponential_moment(const WalkState& state, double eps1) {
    MomentReport rep;
    rep.eps1 = eps1;
    double rho = 0.0;
    for (int n = 1; n <= state.stage; ++n) rho = std::max(rho, std::pow(state.r_max[n], 1.0 / n));
    rep.decay_constant = rho < 1.0 ? state.params.beta / (1.0 - rho) : HUGE_VAL;
    const double c4 = 4.0 * state.params.c0;
    for (int n = 1; n <= state.stage; ++n) {
        double s = 0.0;
        const auto& S = state.shells[n - 1];
        for (std::size_t m = 0; m < S.members.size(); ++m) s += state.nu[n - 1][m] * std::pow(S.members[m].r, -eps1);
        rep.shell_sums.push_back(s);
        rep.envelope.push_back(std::pow(rho, n) * std::exp(eps1 * c4 * (n + 1)));
    }
    for (std::size_t i = 1; i < rep.shell_sums.size(); ++i) rep.ratios.push_back(rep.shell_sums[i] / rep.shell_sums[i - 1]);
    rep.summable = !rep.ratios.empty();
    for (double q : rep.ratios) rep.summable = rep.summable && q < 1.0;
    return rep;
}

LipschitzReport lipschitz_check(const SchottkyGroup& G, const WalkState& state, std::size_t n_pairs,
                                std::uint64_t seed) {
    LipschitzReport rep;
    const int depth = state.params.grid_depth;
    const double r_next = std::exp(-4.0 * state.params.c0 * (state.stage + 1));
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, G.word_count(depth) - 1);
    std::uniform_int_distribution<int> ext(0, G.letters() - 2);
    for (std::size_t p = 0; p < n_pairs; ++p) {
        const Word w = G.word_at(depth, pick(rng));
        Word v = w;
        // a nearby point: two more letters into the same cylinder
        for (int k = 0; k < 2; ++k) {
            int l = ext(rng);
            if (l >= G.inverse_letter(v.back())) ++l;
            v.push_back(l);
        }
        const BoundaryPoint xi = G.limit_point(w), eta = G.limit_point(v);
        const double d = chordal_distance(xi, eta);
        const double lhs = std::abs(state.R_at(xi) / state.R_at(eta) - 1.0);
        const double rhs = std::sqrt(d / r_next);
        ++rep.pairs;
        if (lhs > rhs) ++rep.violations;
        if (rhs > 0.0) rep.worst = std::max(rep.worst, lhs / rhs);
    }
    return rep;
}

}  // namespace sfl
