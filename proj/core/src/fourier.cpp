#include "sfl/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sfl/error.hpp"
#include "sfl/parallel.hpp"
#include "sfl/stats.hpp"

namespace sfl {

namespace {

double pairing(cplx xi, cplx x) { return xi.real() * x.real() + xi.imag() * x.imag(); }

void guard(const DiscreteMeasure& mu, double frequency) {
    if (mu.resolution * frequency > kResolutionGuard * (1.0 + 1e-12))
        fail(ErrorKind::ResolutionExceeded, "frequency too high for the measure resolution");
}

}  // namespace

cplx mu_hat_unguarded(const DiscreteMeasure& mu, cplx xi) {
    double re = 0.0, im = 0.0;
    for (const auto& a : mu.atoms) {
        const double p = pairing(xi, a.z);
        re += a.mass * std::cos(p);
        im -= a.mass * std::sin(p);
    }
    return {re, im};
}

cplx mu_hat(const DiscreteMeasure& mu, cplx xi) {
    guard(mu, std::abs(xi));
    return mu_hat_unguarded(mu, xi);
}

Phase Phase::linear(cplx theta) {
    return Phase{[theta](cplx z) { return pairing(theta, z); }, [theta](cplx) { return theta; }};
}

Phase Phase::moebius(cplx theta, const MoebiusMap& m) {
    return Phase{[theta, m](cplx z) { return pairing(theta, m.apply(z)); },
                 [theta, m](cplx z) { return theta * std::conj(derivative(m, z)); }};
}

OscillatoryResult oscillatory_integral(const DiscreteMeasure& mu, const OscillatorySpec& spec) {
    OscillatoryResult r;
    r.grad_inf = HUGE_VAL;
    for (const auto& a : mu.atoms) {
        const double g = std::abs(spec.phase.gradient(a.z));
        r.grad_inf = std::min(r.grad_inf, g);
        r.grad_sup = std::max(r.grad_sup, g);
    }
    guard(mu, std::abs(spec.t) * r.grad_sup);
    cplx acc = 0.0;
    for (const auto& a : mu.atoms)
        acc += a.mass * std::polar(1.0, spec.t * spec.phase.value(a.z)) * spec.amplitude(a.z);
    r.value = acc;
    return r;
}

std::vector<cplx> unit_directions(int m) {
    std::vector<cplx> d(m);
    for (int k = 0; k < m; ++k) d[k] = std::polar(1.0, std::numbers::pi * k / m);
    return d;
}

DecayFit fit_decay(const DiscreteMeasure& mu, const std::vector<cplx>& directions, const std::vector<double>& t_grid,
                   std::uint64_t seed) {
    if (directions.size() < 16) fail(ErrorKind::InvalidArgument, "fit_decay needs at least 16 directions");
    if (t_grid.size() < 3) fail(ErrorKind::DegenerateFit, "fit_decay needs at least 3 frequencies");
    const auto [tmin, tmax] = std::minmax_element(t_grid.begin(), t_grid.end());
    if (!(*tmin > 0.0) || std::log10(*tmax / *tmin) < 1.0)
        fail(ErrorKind::DegenerateFit, "frequency range spans less than one decade");
    double dmax = 0.0;
    for (auto d : directions) dmax = std::max(dmax, std::abs(d));
    guard(mu, *tmax * dmax);
    DecayFit fit;
    fit.t = t_grid;
    const std::size_t nd = directions.size(), nt = t_grid.size();
    fit.values.resize(nt * nd);
    // projections once per direction, then all frequencies
    parallel_for(nd, [&](std::size_t j) {
        std::vector<double> proj(mu.atoms.size());
        for (std::size_t i = 0; i < mu.atoms.size(); ++i) proj[i] = pairing(directions[j], mu.atoms[i].z);
        for (std::size_t q = 0; q < nt; ++q) {
            double re = 0.0, im = 0.0;
            for (std::size_t i = 0; i < proj.size(); ++i) {
                const double p = t_grid[q] * proj[i];
                re += mu.atoms[i].mass * std::cos(p);
                im -= mu.atoms[i].mass * std::sin(p);
            }
            fit.values[q * nd + j] = {re, im};
        }
    });
    std::vector<double> lx, ly;
    for (std::size_t q = 0; q < nt; ++q) {
        double s = 0.0;
        for (std::size_t j = 0; j < nd; ++j) s = std::max(s, std::abs(fit.values[q * nd + j]));
        fit.sup_abs.push_back(s);
        if (!(s > 0.0)) fail(ErrorKind::DegenerateFit, "Fourier transform vanishes on a full circle");
        lx.push_back(std::log(t_grid[q]));
        ly.push_back(std::log(s));
    }
    const LineFit lf = ols_bootstrap(lx, ly, 200, seed);
    fit.epsilon = -lf.slope;
    fit.ci_lo = -lf.slope_hi;
    fit.ci_hi = -lf.slope_lo;
    return fit;
}

NonDecayReport fuchsian_nondecay_check(const DiscreteMeasure& mu, const std::vector<double>& scales) {
    if (scales.empty()) fail(ErrorKind::InvalidArgument, "empty direction set");
    for (const auto& a : mu.atoms)
        if (a.mass > 0.0 && std::abs(a.z.imag()) > 1e-6)
            fail(ErrorKind::SupportNotOnLine, "measure is not supported on the real axis");
    NonDecayReport r;
    r.scales = scales;
    r.total_mass = mu.total_mass;
    r.pass = true;
    for (double s : scales) {
        // the phase s Im x stays below s 1e-6 on the support, so no resolution guard is needed
        const double ai = std::abs(mu_hat_unguarded(mu, cplx(0.0, s)));
        r.abs_imaginary.push_back(ai);
        r.abs_real.push_back(std::abs(mu_hat_unguarded(mu, cplx(s, 0.0))));
        if (std::abs(ai - mu.total_mass) > 1e-6 * std::max(1.0, mu.total_mass)) r.pass = false;
    }
    return r;
}

std::size_t TupleSystem::tuple_count() const {
    std::size_t n = 1;
    for (const auto& s : slots) n *= s.size();
    return n;
}

TupleSystem make_tuple_system(const Partition& Z, const std::vector<Word>& A) {
    if (A.size() < 2) fail(ErrorKind::InvalidArgument, "tuple system needs k >= 1");
    TupleSystem ts;
    ts.k = static_cast<int>(A.size()) - 1;
    ts.A = A;
    ts.slots.resize(ts.k);
    for (int j = 1; j <= ts.k; ++j)
        for (const Word& b : Z.words)
            if (b.front() == A[j - 1].back() && b.back() == A[j].front()) ts.slots[j - 1].push_back(b);
    return ts;
}

Word star_word(const TupleSystem& ts, const std::vector<std::size_t>& choice) {
    Word w = drop_last(ts.A[0]);
    for (int j = 1; j <= ts.k; ++j) {
        const Word b = drop_last(ts.slots[j - 1][choice[j - 1]]);
        w.insert(w.end(), b.begin(), b.end());
        const Word a = drop_last(ts.A[j]);
        w.insert(w.end(), a.begin(), a.end());
    }
    return w;
}

std::vector<Word> random_tuple(const Partition& Z, int k, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, Z.words.size() - 1);
    for (int attempt = 0; attempt < 100000; ++attempt) {
        std::vector<Word> A;
        for (int j = 0; j <= k; ++j) A.push_back(Z.words[pick(rng)]);
        if (path_count(Z, A) > 0) return A;
    }
    fail(ErrorKind::InvalidArgument, "no admissible tuple found");
}

ZetaTable make_zeta_table(const SchottkyGroup& G, const TupleSystem& ts, double tau) {
    ZetaTable zt;
    zt.tau = tau;
    zt.zeta.resize(ts.k);
    for (int j = 1; j <= ts.k; ++j) {
        const cplx x = G.anchor(ts.A[j]);
        const Word head = drop_last(ts.A[j - 1]);
        for (const Word& b : ts.slots[j - 1]) {
            const MoebiusMap g = G.matrix_of(concat(head, drop_last(b)));
            zt.zeta[j - 1].push_back(derivative(g, x) / (tau * tau));
        }
    }
    return zt;
}

ExpSumResult exponential_sum(const TupleSystem& ts, const ZetaTable& zt, cplx eta, const ExpSumOptions& opt) {
    ExpSumResult res;
    const double m = std::abs(eta);
    const double lo = std::pow(zt.tau, -0.125), hi = opt.window_C * std::pow(zt.tau, -0.5);
    res.window_violation = m < lo * (1 - 1e-12) || m > hi * (1 + 1e-12);
    if (res.window_violation && !opt.override_window)
        fail(ErrorKind::WindowViolation, "eta outside the window J_tau");
    res.terms = ts.tuple_count();
    if (res.terms == 0) return res;
    // nested enumeration with partial products carried level by level
    std::vector<cplx> level{eta};
    for (int j = 0; j + 1 < ts.k; ++j) {
        std::vector<cplx> next;
        next.reserve(level.size() * zt.zeta[j].size());
        for (cplx p : level)
            for (cplx z : zt.zeta[j]) next.push_back(p * z);
        level.swap(next);
    }
    double re = 0.0, im = 0.0;
    const double two_pi = 2.0 * std::numbers::pi;
    for (cplx p : level)
        for (cplx z : zt.zeta[ts.k - 1]) {
            const double ph = two_pi * (p * z).real();
            re += std::cos(ph);
            im += std::sin(ph);
        }
    res.value = {re, im};
    return res;
}

std::size_t path_count(const Partition& Z, const std::vector<Word>& A) {
    int letters = 0;
    for (const Word& w : Z.words)
        for (int l : w) letters = std::max(letters, l + 1);
    for (const Word& w : A)
        for (int l : w) letters = std::max(letters, l + 1);
    std::vector<std::size_t> count(letters * letters, 0);
    for (const Word& w : Z.words) ++count[w.front() * letters + w.back()];
    std::size_t n = 1;
    for (std::size_t j = 1; j < A.size(); ++j) n *= count[A[j - 1].back() * letters + A[j].front()];
    return n;
}

double mean_normalized_modulus(const SchottkyGroup& G, const Partition& Z, int k, double radius, int n_tuples,
                               int n_args, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    double total = 0.0;
    for (int s = 0; s < n_tuples; ++s) {
        const TupleSystem ts = make_tuple_system(Z, random_tuple(Z, k, rng));
        const ZetaTable zt = make_zeta_table(G, ts, Z.tau);
        double acc = 0.0;
        for (int q = 0; q < n_args; ++q) {
            const cplx eta = std::polar(radius, 2.0 * std::numbers::pi * (q + 0.5) / n_args);
            const ExpSumResult r = exponential_sum(ts, zt, eta, {10.0, true});
            acc += std::abs(r.value) / static_cast<double>(r.terms);
        }
        total += acc / n_args;
    }
    return total / n_tuples;
}

double tau_from_t(double t, int k) { return std::pow(std::abs(t), -1.0 / (2.0 * k + 1.5)); }

double predicted_exponent(double delta, int k, double eps) {
    const double q = 2.0 * k + 1.5;
    return std::min(delta / (4.0 * q), eps / (8.0 * q));
}

BoundChain bd_pipeline(const PSMeasure& mu, const OscillatorySpec& spec, int k, double window_C, std::uint64_t seed) {
    if (k < 1 || k > 3) fail(ErrorKind::InvalidArgument, "bd_pipeline needs k in [1, 3]");
    const SchottkyGroup& G = mu.group();
    const double delta = mu.delta();
    BoundChain bc;
    bc.t = spec.t;
    bc.k = k;
    bc.tau = tau_from_t(spec.t, k);
    const Partition Z = build_partition(mu, bc.tau);
    bc.partition_size = Z.words.size();
    const double cost = std::pow(static_cast<double>(Z.words.size()), 2 * k + 1);
    if (cost > 1e9) fail(ErrorKind::CostCap, "#Z(tau)^(2k+1) exceeds 1e9 terms");

    // left side on a measure resolved for this frequency
    double gsup = 0.0;
    for (const auto& a : mu.discrete().atoms) gsup = std::max(gsup, std::abs(spec.phase.gradient(a.z)));
    const double need = kResolutionGuard / std::max(1e-300, std::abs(spec.t) * gsup);
    const DiscreteMeasure fine = mu.discrete().resolution <= need ? mu.discrete() : mu.refined(need);
    bc.lhs = std::norm(oscillatory_integral(fine, spec).value);

    // atoms of the base measure grouped by base disc
    std::vector<std::vector<Atom>> in_disc(G.letters());
    for (const auto& a : mu.discrete().atoms) {
        const int j = G.disc_containing(a.z);
        if (j >= 0) in_disc[j].push_back(a);
    }
    // enumerate A in Z^{k+1} by odometer
    const std::size_t nz = Z.words.size();
    std::vector<std::size_t> idx(k + 1, 0);
    double s_os1 = 0.0, s_com = 0.0;
    const int n_rad = 16, n_arg = 32;
    const double eta_lo = std::pow(bc.tau, -0.125), eta_hi = window_C * std::pow(bc.tau, -0.5);
    std::vector<std::vector<Word>> As;
    for (;;) {
        std::vector<Word> A;
        for (auto i : idx) A.push_back(Z.words[i]);
        As.push_back(std::move(A));
        int p = k;
        while (p >= 0 && ++idx[p] == nz) idx[p--] = 0;
        if (p < 0) break;
    }
    std::vector<double> part_os1(As.size(), 0.0), part_com(As.size(), 0.0);
    parallel_for(As.size(), [&](std::size_t ai) {
        const TupleSystem ts = make_tuple_system(Z, As[ai]);
        if (ts.tuple_count() == 0) return;
        const Word& ak = ts.A[k];
        const MoebiusMap wk = G.matrix_of(drop_last(ak));
        const auto& atoms = in_disc[ak.back()];
        // squared integrals over every admissible tuple
        std::vector<std::size_t> choice(k, 0);
        for (;;) {
            const MoebiusMap g = G.matrix_of(star_word(ts, choice));
            cplx integral = 0.0;
            for (const auto& at : atoms) {
                const BoundaryPoint bx(at.z);
                integral += at.mass * std::pow(spherical_derivative(wk, bx), delta) *
                            std::polar(1.0, spec.t * spec.phase.value(g.apply(at.z)));
            }
            part_os1[ai] += std::norm(integral);
            int p = k - 1;
            while (p >= 0 && ++choice[p] == ts.slots[p].size()) choice[p--] = 0;
            if (p < 0) break;
        }
        // sup over the eta window
        const ZetaTable zt = make_zeta_table(G, ts, bc.tau);
        double best = 0.0;
        for (int q = 0; q < n_rad; ++q) {
            const double rad = eta_lo * std::pow(eta_hi / eta_lo, q / double(n_rad - 1));
            for (int a = 0; a < n_arg; ++a) {
                const cplx eta = std::polar(rad, 2.0 * std::numbers::pi * a / n_arg);
                best = std::max(best, std::abs(exponential_sum(ts, zt, eta, {window_C, true}).value));
            }
        }
        part_com[ai] = best;
    });
    for (std::size_t i = 0; i < As.size(); ++i) s_os1 += part_os1[i], s_com += part_com[i];
    bc.rhs_os1 = std::pow(bc.tau, (2 * k - 1) * delta) * s_os1;
    bc.const_os1 = bc.lhs / (bc.rhs_os1 + bc.tau * bc.tau);
    bc.rhs_comsum = std::pow(bc.tau, (2 * k + 1) * delta) * s_com;
    bc.const_comsum = bc.lhs / (bc.rhs_comsum + std::pow(bc.tau, delta / 4.0));

    // sum-product exponent from the decay of normalized sums across the window
    std::vector<double> lx, ly;
    for (int q = 0; q < 6; ++q) {
        const double rad = eta_lo * std::pow(eta_hi / eta_lo, q / 5.0);
        const double m = mean_normalized_modulus(G, Z, k, rad, 20, 8, seed);
        if (m > 0.0) {
            lx.push_back(std::log(rad));
            ly.push_back(std::log(m));
        }
    }
    bc.eps_sum_product = lx.size() >= 2 ? std::max(0.0, -ols(lx, ly).slope) : 0.0;
    bc.eps_tilde = predicted_exponent(delta, k, bc.eps_sum_product);
    return bc;
}

}  // namespace sfl
