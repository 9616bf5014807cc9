#include "sfl/nonconc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sfl/error.hpp"
#include "sfl/parallel.hpp"
#include "sfl/stats.hpp"

namespace sfl {

LambdaMeasure lambda_measure(const ZetaTable& zt, int j, double delta) {
    if (j < 1 || j > static_cast<int>(zt.zeta.size())) fail(ErrorKind::InvalidArgument, "lambda index out of range");
    return LambdaMeasure{zt.zeta[j - 1], std::pow(zt.tau, delta)};
}

std::vector<LambdaMeasure> lambda_family(const SchottkyGroup& G, const Partition& Z, int k, int n_tuples,
                                         std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<LambdaMeasure> out;
    for (int s = 0; s < n_tuples; ++s) {
        const TupleSystem ts = make_tuple_system(Z, random_tuple(Z, k, rng));
        const ZetaTable zt = make_zeta_table(G, ts, Z.tau);
        for (int j = 1; j <= k; ++j) out.push_back(lambda_measure(zt, j, Z.delta));
    }
    return out;
}

double line_concentration(const LambdaMeasure& lam, double sigma, int n_angles) {
    const std::size_t n = lam.atoms.size();
    if (n == 0) return 0.0;
    std::vector<double> proj(n);
    std::size_t best = 0;
    for (int q = 0; q < n_angles; ++q) {
        const cplx rot = std::polar(1.0, std::numbers::pi * q / n_angles);
        for (std::size_t i = 0; i < n; ++i) proj[i] = (rot * lam.atoms[i]).real();
        std::sort(proj.begin(), proj.end());
        std::size_t lo = 0;
        for (std::size_t hi = 0; hi < n; ++hi) {
            while (proj[hi] - proj[lo] > 2.0 * sigma) ++lo;
            best = std::max(best, hi - lo + 1);
        }
    }
    return lam.atom_mass * static_cast<double>(best);
}

namespace {

struct Fit {
    double slope, lo, hi;
};

Fit log_log_fit(const std::vector<double>& x, const std::vector<double>& y, std::uint64_t seed) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] > 0.0 && y[i] > 0.0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    if (lx.size() < 3) fail(ErrorKind::DegenerateFit, "fewer than three positive points to fit");
    const LineFit f = ols_bootstrap(lx, ly, 200, seed);
    return {f.slope, f.slope_lo, f.slope_hi};
}

void check_sigma_grid(const std::vector<double>& grid, double tau) {
    if (grid.size() < 3) fail(ErrorKind::DegenerateFit, "sigma grid needs at least three points");
    const auto [lo, hi] = std::minmax_element(grid.begin(), grid.end());
    if (!(*lo > 0.0) || !(*hi < 1.0)) fail(ErrorKind::InvalidArgument, "sigma must lie in (0, 1)");
    if (tau > 0.0) {
        if (*lo <= std::sqrt(tau)) fail(ErrorKind::InvalidArgument, "sigma grid must stay above tau^{1/2}");
        if (std::log10(*hi / *lo) < 0.25) fail(ErrorKind::DegenerateFit, "sigma grid spans under a quarter decade");
    }
}

}  // namespace

KappaFit fit_kappa(const std::vector<LambdaMeasure>& family, const std::vector<double>& sigma_grid, double tau,
                   std::uint64_t seed) {
    check_sigma_grid(sigma_grid, tau);
    if (family.empty()) fail(ErrorKind::DegenerateFit, "empty lambda family");
    KappaFit kf;
    kf.sigma = sigma_grid;
    kf.worst.assign(sigma_grid.size(), 0.0);
    std::vector<std::vector<double>> per(family.size());
    parallel_for(family.size(), [&](std::size_t i) {
        for (double s : sigma_grid) per[i].push_back(line_concentration(family[i], s));
    });
    for (const auto& row : per)
        for (std::size_t q = 0; q < row.size(); ++q) kf.worst[q] = std::max(kf.worst[q], row[q]);
    const Fit f = log_log_fit(kf.sigma, kf.worst, seed);
    kf.kappa = f.slope;
    kf.ci_lo = f.lo;
    kf.ci_hi = f.hi;
    return kf;
}

double det3(cplx u1, cplx u2, cplx u3) {
    const double x1 = u1.real(), y1 = u1.imag(), x2 = u2.real(), y2 = u2.imag(), x3 = u3.real(), y3 = u3.imag();
    return x1 * (y2 - y3) - y1 * (x2 - x3) + (x2 * y3 - x3 * y2);
}

double wedge_sum(cplx u1, cplx u2, cplx u3) {
    return (std::conj(u1) * u2 + std::conj(u2) * u3 + std::conj(u3) * u1).imag();
}

double det4(const MoebiusMap& g1, const MoebiusMap& g2, const MoebiusMap& g3, cplx z) {
    return det3(derivative(g1, z), derivative(g2, z), derivative(g3, z));
}

namespace {

std::vector<const Word*> starting_with(const Partition& Z, int letter) {
    std::vector<const Word*> out;
    for (const Word& w : Z.words)
        if (w.front() == letter) out.push_back(&w);
    return out;
}

int home_letter(const SchottkyGroup& G, cplx z0) {
    const int l = G.disc_containing(z0);
    if (l < 0) fail(ErrorKind::InvalidArgument, "z0 lies in no base disc");
    return l;
}

double norm_of(const SchottkyGroup& G, const Word& a) { return G.matrix_of(a).norm_S(); }

// number of values <= each threshold; sorts in place
std::vector<double> counts_below(std::vector<double>& values, const std::vector<double>& thresholds) {
    std::sort(values.begin(), values.end());
    std::vector<double> out;
    for (double t : thresholds)
        out.push_back(static_cast<double>(std::upper_bound(values.begin(), values.end(), t) - values.begin()));
    return out;
}

}  // namespace

TripleSweep triple_count(const PSMeasure& mu, const Word& a, double tau, double tau1,
                         const std::vector<double>& sigma_grid, cplx z0, std::uint64_t seed) {
    const SchottkyGroup& G = mu.group();
    const double delta = mu.delta();
    if (a.empty()) fail(ErrorKind::InvalidArgument, "a must be nonempty");
    if (tau1 <= 0.0) tau1 = std::sqrt(tau);
    for (double s : sigma_grid)
        if (!(s > tau && s > tau1)) fail(ErrorKind::InvalidArgument, "sigma must exceed tau and tau1");
    const Partition Z = build_partition(mu, tau);
    const Partition Z1 = build_partition(mu, tau1);
    const double nz = static_cast<double>(Z.words.size());
    if (nz * nz * nz * static_cast<double>(Z1.words.size()) > 1e9)
        fail(ErrorKind::CostCap, "#Z(tau)^3 #Z(tau1) exceeds 1e9");

    const int zl = home_letter(G, z0);
    const Word head = drop_last(a);
    const auto bs = starting_with(Z, a.back());
    std::vector<const Word*> es;
    for (const Word& e : Z1.words)
        if (e.back() == zl) es.push_back(&e);
    const double scale = std::pow(norm_of(G, a), -4.0) * tau * tau;

    std::vector<MoebiusMap> gb;
    for (const Word* b : bs) gb.push_back(G.matrix_of(concat(head, drop_last(*b))));
    std::vector<std::vector<double>> per(es.size());
    parallel_for(es.size(), [&](std::size_t ie) {
        const Word& e = *es[ie];
        const cplx z = G.matrix_of(drop_last(e)).apply(z0);
        std::vector<cplx> u;
        for (std::size_t i = 0; i < bs.size(); ++i)
            if (bs[i]->back() == e.front()) u.push_back(derivative(gb[i], z));
        for (cplx x : u)
            for (cplx y : u)
                for (cplx w : u) per[ie].push_back(std::abs(det3(x, y, w)) / scale);
    });
    std::vector<double> values;
    for (auto& p : per) values.insert(values.end(), p.begin(), p.end());
    TripleSweep ts;
    ts.sigma = sigma_grid;
    ts.total = static_cast<double>(values.size());
    ts.count = counts_below(values, sigma_grid);
    const Fit f = log_log_fit(ts.sigma, ts.count, seed);
    ts.epsilon = f.slope;
    ts.ci_lo = f.lo;
    ts.ci_hi = f.hi;
    const double base = std::pow(tau, -3.0 * delta) * std::pow(tau1, -delta);
    for (std::size_t q = 0; q < ts.sigma.size(); ++q)
        ts.bound_ratio.push_back(ts.count[q] / (base * std::pow(ts.sigma[q], ts.epsilon)));
    return ts;
}

WedgeReport wedge_inequality_check(const std::vector<cplx>& samples, const Line& line, double c, std::uint64_t seed) {
    WedgeReport r;
    const std::size_t n = samples.size();
    if (n == 0) fail(ErrorKind::InvalidArgument, "no samples");
    for (cplx x : samples) r.bound = std::max(r.bound, std::abs(x));
    const cplx nrm = line.normal / std::abs(line.normal);
    std::size_t near = 0;
    for (cplx x : samples)
        if (std::abs((std::conj(nrm) * x).real() - line.offset) < c) ++near;
    r.lhs = static_cast<double>(near) / static_cast<double>(n);
    const double thr = 8.0 * r.bound * c;
    std::size_t hits = 0, trials = 0;
    if (n <= 100) {
        r.exact = true;
        for (cplx x : samples)
            for (cplx y : samples)
                for (cplx w : samples) hits += std::abs(wedge_sum(x, y, w)) < thr;
        trials = n * n * n;
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        trials = 1000000;
        for (std::size_t s = 0; s < trials; ++s)
            hits += std::abs(wedge_sum(samples[pick(rng)], samples[pick(rng)], samples[pick(rng)])) < thr;
    }
    r.rhs = static_cast<double>(hits) / static_cast<double>(trials);
    r.tolerance = r.exact ? 1e-12 : 3.0 * std::sqrt(std::max(r.rhs * (1.0 - r.rhs), 1.0 / trials) / trials);
    r.pass = r.lhs * r.lhs * r.lhs <= r.rhs + r.tolerance;
    return r;
}

RealPolynomial::RealPolynomial(int degree) : degree_(degree) {
    if (degree < 0) fail(ErrorKind::InvalidArgument, "negative degree");
    c_.assign(degree + 1, std::vector<cplx>(degree + 1, 0.0));
}

RealPolynomial::RealPolynomial(std::vector<std::vector<cplx>> coefficients) : degree_(0), c_(std::move(coefficients)) {
    const int n = static_cast<int>(c_.size()) - 1;
    if (n < 0) fail(ErrorKind::InvalidArgument, "empty coefficient table");
    for (const auto& row : c_)
        if (static_cast<int>(row.size()) != n + 1) fail(ErrorKind::InvalidArgument, "coefficient table not square");
    degree_ = n;
    for (int j = 0; j <= n; ++j)
        for (int l = 0; l <= n; ++l)
            if (j + l > n && c_[j][l] != 0.0) fail(ErrorKind::InvalidArgument, "term exceeds the degree");
    double h = height();
    if (!hermitian(1e-12 * std::max(1.0, h))) fail(ErrorKind::InvalidArgument, "polynomial is not real valued");
}

void RealPolynomial::set(int j, int l, cplx value) {
    if (j < 0 || l < 0 || j + l > degree_) fail(ErrorKind::InvalidArgument, "term exceeds the degree");
    c_[j][l] = value;
    c_[l][j] = std::conj(value);
    if (j == l) c_[j][j] = value.real();
}

double RealPolynomial::height() const {
    double h = 0.0;
    for (const auto& row : c_)
        for (cplx v : row) h = std::max(h, std::abs(v));
    return h;
}

cplx RealPolynomial::eval_complex(cplx z) const {
    const int n = degree_;
    std::vector<cplx> zp(n + 1, 1.0), wp(n + 1, 1.0);
    for (int i = 1; i <= n; ++i) {
        zp[i] = zp[i - 1] * z;
        wp[i] = wp[i - 1] * std::conj(z);
    }
    cplx s = 0.0;
    for (int j = 0; j <= n; ++j)
        for (int l = 0; j + l <= n; ++l) s += c_[j][l] * zp[j] * wp[l];
    return s;
}

bool RealPolynomial::hermitian(double tol) const {
    for (int j = 0; j <= degree_; ++j)
        for (int l = 0; l <= degree_; ++l)
            if (std::abs(c_[j][l] - std::conj(c_[l][j])) > tol) return false;
    return true;
}

namespace {

std::vector<cplx> poly_mul(const std::vector<cplx>& p, const std::vector<cplx>& q) {
    std::vector<cplx> r(p.size() + q.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
    return r;
}

std::vector<cplx> poly_pow(const std::vector<cplx>& p, int e) {
    std::vector<cplx> r{1.0};
    for (int i = 0; i < e; ++i) r = poly_mul(r, p);
    return r;
}

}  // namespace

RealPolynomial pullback(const RealPolynomial& P, const MoebiusMap& g) {
    const int n = P.degree();
    const std::vector<cplx> num{g.b(), g.a()}, den{g.d(), g.c()};
    // A_j(z) = (a z + b)^j (c z + d)^{n - j}, degree n
    std::vector<std::vector<cplx>> A(n + 1);
    for (int j = 0; j <= n; ++j) A[j] = poly_mul(poly_pow(num, j), poly_pow(den, n - j));
    std::vector<std::vector<cplx>> q(2 * n + 1, std::vector<cplx>(2 * n + 1, 0.0));
    for (int j = 0; j <= n; ++j)
        for (int l = 0; j + l <= n; ++l) {
            const cplx c = P.coef(j, l);
            if (c == 0.0) continue;
            for (int p = 0; p <= n; ++p)
                for (int s = 0; s <= n; ++s) q[p][s] += c * A[j][p] * std::conj(A[l][s]);
        }
    // restore exact symmetry lost to rounding
    for (int p = 0; p <= 2 * n; ++p)
        for (int s = p; s <= 2 * n; ++s) {
            const cplx m = 0.5 * (q[p][s] + std::conj(q[s][p]));
            q[p][s] = m;
            q[s][p] = std::conj(m);
        }
    return RealPolynomial(std::move(q));
}

RealPolynomial random_polynomial(int degree, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    RealPolynomial P(degree);
    for (int j = 0; j <= degree; ++j)
        for (int l = j; j + l <= degree; ++l) P.set(j, l, j == l ? cplx(u(rng), 0.0) : cplx(u(rng), u(rng)));
    const double h = P.height();
    RealPolynomial Q(degree);
    for (int j = 0; j <= degree; ++j)
        for (int l = j; j + l <= degree; ++l) Q.set(j, l, P.coef(j, l) / h);
    return Q;
}

double poly_sublevel(const DiscreteMeasure& mu, const RealPolynomial& P, double r) {
    const double h = P.height();
    if (!(h > 0.0)) fail(ErrorKind::ZeroPolynomial, "polynomial has zero height");
    double m = 0.0;
    for (const auto& a : mu.atoms)
        if (std::abs(P.eval(a.z)) <= r * h) m += a.mass;
    return m;
}

KappaFit fit_poly_kappa(const DiscreteMeasure& mu, const std::vector<RealPolynomial>& family,
                        const std::vector<double>& r_grid, std::uint64_t seed) {
    if (family.empty()) fail(ErrorKind::DegenerateFit, "empty polynomial family");
    KappaFit kf;
    kf.sigma = r_grid;
    kf.worst.assign(r_grid.size(), 0.0);
    std::vector<std::vector<double>> per(family.size());
    parallel_for(family.size(), [&](std::size_t i) {
        for (double r : r_grid) per[i].push_back(poly_sublevel(mu, family[i], r));
    });
    for (const auto& row : per)
        for (std::size_t q = 0; q < row.size(); ++q) kf.worst[q] = std::max(kf.worst[q], row[q]);
    const Fit f = log_log_fit(kf.sigma, kf.worst, seed);
    kf.kappa = f.slope;
    kf.ci_lo = f.lo;
    kf.ci_hi = f.hi;
    return kf;
}

CocycleCounts cocycle_count_helpers(const PSMeasure& mu, const Word& a, double tau, double tau1,
                                    const std::vector<double>& sigma_grid, cplx z0, std::uint64_t seed) {
    const SchottkyGroup& G = mu.group();
    const double delta = mu.delta();
    if (a.empty()) fail(ErrorKind::InvalidArgument, "a must be nonempty");
    if (tau1 <= 0.0) tau1 = std::sqrt(tau);
    const Partition Z = build_partition(mu, tau);
    const Partition Z1 = build_partition(mu, tau1);
    const double nz = static_cast<double>(Z.words.size());
    if (nz * nz * static_cast<double>(Z1.words.size()) > 1e9) fail(ErrorKind::CostCap, "#Z(tau)^2 #Z(tau1) exceeds 1e9");
    const Word head = drop_last(a);
    const auto bs = starting_with(Z, a.back());
    std::vector<MoebiusMap> gb;
    std::vector<cplx> poles;
    for (const Word* b : bs) {
        gb.push_back(G.matrix_of(concat(head, drop_last(*b))));
        poles.push_back(gb.back().pole());
    }
    CocycleCounts cc;
    cc.sigma = sigma_grid;

    // pole pairs, per b
    std::vector<std::vector<double>> per_b(bs.size());
    parallel_for(bs.size(), [&](std::size_t i) {
        std::vector<double> dist;
        for (cplx p : poles) dist.push_back(std::abs(p - poles[i]));
        per_b[i] = counts_below(dist, sigma_grid);
    });
    cc.pole_mean.assign(sigma_grid.size(), 0.0);
    cc.pole_max.assign(sigma_grid.size(), 0.0);
    for (const auto& row : per_b)
        for (std::size_t q = 0; q < row.size(); ++q) {
            cc.pole_mean[q] += row[q] / static_cast<double>(bs.size());
            cc.pole_max[q] = std::max(cc.pole_max[q], row[q]);
        }
    for (std::size_t q = 0; q < sigma_grid.size(); ++q) {
        cc.pole_ratio.push_back(cc.pole_max[q] / (std::pow(tau, -delta) * std::pow(sigma_grid[q], delta)));
        cc.pole_constant = std::max(cc.pole_constant, cc.pole_ratio.back());
    }
    cc.pole_exponent = log_log_fit(sigma_grid, cc.pole_mean, seed).slope;

    // real parts of derivative differences
    const int zl = home_letter(G, z0);
    std::vector<const Word*> ds;
    for (const Word& d : Z1.words)
        if (d.back() == zl) ds.push_back(&d);
    const double scale = std::pow(norm_of(G, a), -2.0) * tau;
    std::vector<std::vector<double>> per_d(ds.size());
    parallel_for(ds.size(), [&](std::size_t i) {
        const cplx w = G.matrix_of(drop_last(*ds[i])).apply(z0);
        std::vector<double> re;
        for (const auto& g : gb) re.push_back(derivative(g, w).real());
        for (double x : re)
            for (double y : re) per_d[i].push_back(std::abs(x - y) / scale);
    });
    std::vector<double> values;
    for (auto& p : per_d) values.insert(values.end(), p.begin(), p.end());
    cc.deriv_count = counts_below(values, sigma_grid);
    cc.deriv_exponent = log_log_fit(sigma_grid, cc.deriv_count, seed).slope;
    const double base = std::pow(tau, -2.0 * delta) * std::pow(tau1, -delta);
    for (std::size_t q = 0; q < sigma_grid.size(); ++q) {
        cc.deriv_ratio.push_back(cc.deriv_count[q] / (base * std::pow(sigma_grid[q], cc.deriv_exponent)));
        cc.deriv_constant = std::max(cc.deriv_constant, cc.deriv_ratio.back());
    }
    return cc;
}

}  // namespace sfl
