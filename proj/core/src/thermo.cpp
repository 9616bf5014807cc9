#include "sfl/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "sfl/error.hpp"
#include "sfl/parallel.hpp"

namespace sfl {

DiscreteMeasure DiscreteMeasure::make(std::vector<Atom> atoms, double resolution) {
    DiscreteMeasure m;
    m.atoms = std::move(atoms);
    m.resolution = resolution;
    for (const auto& a : m.atoms) {
        if (!(a.mass >= 0.0)) fail(ErrorKind::InvalidArgument, "negative atom mass");
        m.total_mass += a.mass;
    }
    return m;
}

TransferMatrix::TransferMatrix(const SchottkyGroup& G, int depth) : depth_(depth), width_(G.letters() - 1) {
    if (depth < 1) fail(ErrorKind::InvalidArgument, "transfer matrix needs depth >= 1");
    rows_ = G.word_count(depth);
    cols_.resize(rows_ * width_);
    logw_.resize(rows_ * width_);
    parallel_for(rows_, [&](std::size_t i) {
        const Word b = G.word_at(depth, i);
        const BoundaryPoint xb(G.anchor(b));
        int k = 0;
        for (int j = 0; j < G.letters(); ++j) {
            if (j == G.inverse_letter(b[0])) continue;
            Word a(depth);
            a[0] = j;
            std::copy(b.begin(), b.end() - 1, a.begin() + 1);
            cols_[i * width_ + k] = static_cast<std::uint32_t>(G.word_index(a));
            logw_[i * width_ + k] = std::log(spherical_derivative(G.generator(j), xb));
            ++k;
        }
    });
}

SpectralEstimate TransferMatrix::spectral_radius(double s, std::vector<double>* warm) const {
    std::vector<double> w(rows_ * width_);
    for (std::size_t e = 0; e < w.size(); ++e) w[e] = std::exp(s * logw_[e]);
    std::vector<double> v(rows_, 1.0), next(rows_);
    if (warm && warm->size() == rows_) v = *warm;
    SpectralEstimate est;
    for (int it = 0; it < 100000; ++it) {
        double lo = HUGE_VAL, hi = 0.0, top = 0.0;
        for (std::size_t b = 0; b < rows_; ++b) {
            double acc = 0.0;
            for (int k = 0; k < width_; ++k) acc += w[b * width_ + k] * v[cols_[b * width_ + k]];
            next[b] = acc;
            const double ratio = acc / v[b];
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
            top = std::max(top, acc);
        }
        for (std::size_t b = 0; b < rows_; ++b) v[b] = next[b] / top;
        est.lower = lo;
        est.upper = hi;
        if (hi - lo <= 1e-13 * hi) break;
    }
    if (warm) *warm = v;
    return est;
}

std::vector<double> TransferMatrix::left_eigenvector(double s) const {
    std::vector<double> w(rows_ * width_);
    for (std::size_t e = 0; e < w.size(); ++e) w[e] = std::exp(s * logw_[e]);
    std::vector<double> mu(rows_, 1.0 / rows_), next(rows_);
    for (int it = 0; it < 100000; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t b = 0; b < rows_; ++b)
            for (int k = 0; k < width_; ++k) next[cols_[b * width_ + k]] += mu[b] * w[b * width_ + k];
        const double total = std::accumulate(next.begin(), next.end(), 0.0);
        double change = 0.0;
        for (std::size_t a = 0; a < rows_; ++a) {
            const double x = next[a] / total;
            change += std::abs(x - mu[a]);
            mu[a] = x;
        }
        if (change <= 1e-15) break;
    }
    return mu;
}

bool TransferMatrix::strongly_connected() const {
    if (rows_ == 0) return false;
    auto reach = [&](bool forward) {
        std::vector<std::vector<std::uint32_t>> back;
        if (!forward) {
            back.resize(rows_);
            for (std::size_t b = 0; b < rows_; ++b)
                for (int k = 0; k < width_; ++k) back[cols_[b * width_ + k]].push_back(static_cast<std::uint32_t>(b));
        }
        std::vector<char> seen(rows_, 0);
        std::vector<std::uint32_t> stack{0};
        seen[0] = 1;
        std::size_t count = 1;
        while (!stack.empty()) {
            const std::uint32_t b = stack.back();
            stack.pop_back();
            auto visit = [&](std::uint32_t a) {
                if (!seen[a]) {
                    seen[a] = 1;
                    ++count;
                    stack.push_back(a);
                }
            };
            if (forward)
                for (int k = 0; k < width_; ++k) visit(cols_[b * width_ + k]);
            else
                for (auto a : back[b]) visit(a);
        }
        return count == rows_;
    };
    return reach(true) && reach(false);
}

double estimate_delta(const SchottkyGroup& G, int depth, double tol) {
    if (depth < 2 || depth > 12) fail(ErrorKind::InvalidArgument, "estimate_delta depth must be in [2, 12]");
    if (!(tol >= 1e-10)) fail(ErrorKind::InvalidArgument, "estimate_delta tol must be >= 1e-10");
    const TransferMatrix M(G, depth);
    if (!M.strongly_connected()) fail(ErrorKind::Reducible, "transition graph is not strongly connected");
    std::vector<double> warm;
    std::vector<std::pair<double, double>> seen;
    auto eval = [&](double s) {
        const SpectralEstimate e = M.spectral_radius(s, &warm);
        for (const auto& [t, rho] : seen) {
            if ((t < s && rho < e.value() - 1e-11) || (t > s && rho > e.value() + 1e-11)) {
                std::ostringstream os;
                os << "spectral radius not decreasing between s = " << t << " and s = " << s;
                fail(ErrorKind::NonConvergence, os.str());
            }
        }
        seen.emplace_back(s, e.value());
        return e;
    };
    double lo = 0.01, hi = 1.99;
    if (!(eval(lo).lower > 1.0) || !(eval(hi).upper < 1.0))
        fail(ErrorKind::NonConvergence, "spectral radius does not cross 1 on [0.01, 1.99]");
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 60; ++it) {
        mid = 0.5 * (lo + hi);
        const SpectralEstimate e = eval(mid);
        if (e.lower > 1.0)
            lo = mid;
        else if (e.upper < 1.0)
            hi = mid;
        else
            break;
        if (hi - lo < 4e-16) break;
    }
    const SpectralEstimate e = eval(mid);
    if (!(std::abs(e.value() - 1.0) <= tol)) fail(ErrorKind::NonConvergence, "bisection did not reach tolerance");
    return mid;
}

PSMeasure::PSMeasure(const SchottkyGroup& G, double delta, int depth) : G_(&G), delta_(delta), depth_(depth) {
    if (depth < 1) fail(ErrorKind::InvalidArgument, "ps_measure needs depth >= 1");
    if (!(delta > 0.0 && delta < 2.0)) fail(ErrorKind::InvalidArgument, "delta must lie in (0, 2)");
    const TransferMatrix M(G, depth);
    if (!M.strongly_connected()) fail(ErrorKind::Reducible, "transition graph is not strongly connected");
    masses_ = M.left_eigenvector(delta);
    prefix_.assign(masses_.size() + 1, 0.0);
    for (std::size_t i = 0; i < masses_.size(); ++i) prefix_[i + 1] = prefix_[i] + masses_[i];
    std::vector<Atom> atoms(masses_.size());
    std::vector<double> diam(masses_.size());
    parallel_for(masses_.size(), [&](std::size_t i) {
        const Word w = G.word_at(depth, i);
        atoms[i] = Atom{G.anchor(w), masses_[i]};
        diam[i] = 2.0 * G.cylinder_disc(w).radius;
    });
    discrete_ = DiscreteMeasure::make(std::move(atoms), *std::max_element(diam.begin(), diam.end()));
}

PSMeasure ps_measure(const SchottkyGroup& G, double delta, int depth) { return PSMeasure(G, delta, depth); }

double PSMeasure::mass(const Word& w) const {
    if (static_cast<int>(w.size()) > depth_)
        fail(ErrorKind::ResolutionExceeded, "word longer than the measure depth");
    if (w.empty()) return prefix_.back();
    std::size_t span = 1;
    for (int k = static_cast<int>(w.size()); k < depth_; ++k) span *= G_->letters() - 1;
    const std::size_t lo = G_->word_index(w) * span;
    return prefix_[lo + span] - prefix_[lo];
}

double PSMeasure::max_cell_mass() const { return *std::max_element(masses_.begin(), masses_.end()); }
double PSMeasure::min_cell_mass() const { return *std::min_element(masses_.begin(), masses_.end()); }

namespace {

struct Refiner {
    const SchottkyGroup& G;
    const PSMeasure& mu;
    double max_diam;
    double delta;
    int depth;

    // children of word u (|u| >= depth) with their masses, given gamma_u
    template <class Emit>
    void split(const Word& u, const MoebiusMap& gu, double mass, Emit&& emit) const {
        std::vector<Word> kids;
        std::vector<double> weight;
        for (int e = 0; e < G.letters(); ++e) {
            if (e == G.inverse_letter(u.back())) continue;
            Word c = u;
            c.push_back(e);
            const Word tail(c.end() - depth, c.end());
            const Word head(c.begin(), c.end() - depth);
            const double w = std::pow(spherical_derivative(G.matrix_of(head), BoundaryPoint(G.anchor(tail))), delta) *
                             mu.mass(tail);
            kids.push_back(std::move(c));
            weight.push_back(w);
        }
        const double total = std::accumulate(weight.begin(), weight.end(), 0.0);
        for (std::size_t k = 0; k < kids.size(); ++k) {
            const int e = kids[k].back();
            const Disc d = image_disc(gu, G.disc(e));
            const double m = mass * weight[k] / total;
            if (2.0 * d.radius <= max_diam) {
                emit(kids[k], gu, m);
            } else {
                split(kids[k], compose(gu, G.generator(e)), m, emit);
            }
        }
    }
};

}  // namespace

DiscreteMeasure PSMeasure::refined(double max_diam, std::size_t max_atoms) const {
    if (!(max_diam > 0.0)) fail(ErrorKind::InvalidArgument, "max_diam must be positive");
    const SchottkyGroup& G = *G_;
    const Refiner ref{G, *this, max_diam, delta_, depth_};
    std::vector<std::vector<Atom>> parts(masses_.size());
    std::vector<double> res(masses_.size(), 0.0);
    parallel_for(masses_.size(), [&](std::size_t i) {
        const Word w = G.word_at(depth_, i);
        const Disc d = G.cylinder_disc(w);
        if (2.0 * d.radius <= max_diam) {
            parts[i].push_back(Atom{G.anchor(w), masses_[i]});
            res[i] = 2.0 * d.radius;
            return;
        }
        ref.split(w, G.matrix_of(w), masses_[i], [&](const Word& c, const MoebiusMap& gprefix, double m) {
            const Disc dc = image_disc(gprefix, G.disc(c.back()));
            parts[i].push_back(Atom{gprefix.apply(G.disc(c.back()).center), m});
            res[i] = std::max(res[i], 2.0 * dc.radius);
            if (parts[i].size() > max_atoms) fail(ErrorKind::CostCap, "refined measure exceeds atom budget");
        });
    });
    std::vector<Atom> atoms;
    std::size_t total = 0;
    for (const auto& p : parts) total += p.size();
    if (total > max_atoms) fail(ErrorKind::CostCap, "refined measure exceeds atom budget");
    atoms.reserve(total);
    for (auto& p : parts) atoms.insert(atoms.end(), p.begin(), p.end());
    return DiscreteMeasure::make(std::move(atoms), *std::max_element(res.begin(), res.end()));
}

std::vector<cplx> PSMeasure::sample(std::size_t n, std::uint64_t seed, double max_diam) const {
    const SchottkyGroup& G = *G_;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<cplx> out;
    out.reserve(n);
    const double total = prefix_.back();
    for (std::size_t s = 0; s < n; ++s) {
        const double u = unif(rng) * total;
        std::size_t i = std::upper_bound(prefix_.begin() + 1, prefix_.end(), u) - (prefix_.begin() + 1);
        i = std::min(i, masses_.size() - 1);
        Word w = G.word_at(depth_, i);
        while (2.0 * G.cylinder_disc(w).radius > max_diam) {
            std::vector<int> letters;
            std::vector<double> weight;
            for (int e = 0; e < G.letters(); ++e) {
                if (e == G.inverse_letter(w.back())) continue;
                Word c = w;
                c.push_back(e);
                const Word tail(c.end() - depth_, c.end());
                const Word head(c.begin(), c.end() - depth_);
                letters.push_back(e);
                weight.push_back(std::pow(spherical_derivative(G.matrix_of(head), BoundaryPoint(G.anchor(tail))),
                                          delta_) *
                                 mass(tail));
            }
            double pick = unif(rng) * std::accumulate(weight.begin(), weight.end(), 0.0);
            std::size_t k = 0;
            while (k + 1 < weight.size() && pick >= weight[k]) pick -= weight[k++];
            w.push_back(letters[k]);
        }
        out.push_back(G.limit_point(w).z());
    }
    return out;
}

Partition build_partition(const PSMeasure& mu, double tau) {
    if (!(tau > 0.0)) fail(ErrorKind::InvalidArgument, "tau must be positive");
    const SchottkyGroup& G = mu.group();
    Partition P;
    P.tau = tau;
    P.delta = mu.delta();
    const double level = std::pow(tau, mu.delta());
    std::vector<Word> stack;
    for (int j = G.letters() - 1; j >= 0; --j) stack.push_back(Word{j});
    while (!stack.empty()) {
        Word a = std::move(stack.back());
        stack.pop_back();
        const double m = mu.mass(a);
        if (m <= level) {
            P.words.push_back(a);
            P.masses.push_back(m);
            continue;
        }
        if (static_cast<int>(a.size()) >= mu.depth())
            fail(ErrorKind::ResolutionExceeded, "tau below the resolved scale of the measure");
        for (int e = G.letters() - 1; e >= 0; --e) {
            if (e == G.inverse_letter(a.back())) continue;
            Word c = a;
            c.push_back(e);
            stack.push_back(std::move(c));
        }
    }
    return P;
}

Band band(const PSMeasure& mu, double C, double tau) {
    if (!(C > 1.0)) fail(ErrorKind::InvalidArgument, "band needs C > 1");
    if (!(tau > 0.0)) fail(ErrorKind::InvalidArgument, "tau must be positive");
    const SchottkyGroup& G = mu.group();
    const double level = std::pow(tau, mu.delta());
    const double lower = level / C, upper = level * C;
    Band B;
    B.C = C;
    B.tau = tau;
    std::vector<Word> stack;
    for (int j = G.letters() - 1; j >= 0; --j) stack.push_back(Word{j});
    while (!stack.empty()) {
        Word a = std::move(stack.back());
        stack.pop_back();
        const double m = mu.mass(a);
        if (m < lower) continue;
        if (m <= upper) B.words.push_back(a);
        if (static_cast<int>(a.size()) >= mu.depth())
            fail(ErrorKind::ResolutionExceeded, "band reaches below the resolved scale");
        for (int e = G.letters() - 1; e >= 0; --e) {
            if (e == G.inverse_letter(a.back())) continue;
            Word c = a;
            c.push_back(e);
            stack.push_back(std::move(c));
        }
    }
    // factor every element through the partition at mass level C tau^delta
    B.inclusion_ok = true;
    for (const Word& b : B.words) {
        std::size_t n = 1;
        while (n <= b.size() && mu.mass(prefix(b, n)) > upper) ++n;
        if (n > b.size()) {
            B.inclusion_ok = false;
            continue;
        }
        B.inclusion_length = std::max(B.inclusion_length, static_cast<int>(b.size() - n));
    }
    if (B.inclusion_length > 8) B.inclusion_ok = false;
    return B;
}

std::vector<cplx> apply_transfer(const PSMeasure& mu, const Partition& P, const std::function<cplx(cplx)>& f,
                                 int k, const std::vector<cplx>& points) {
    if (k < 1) fail(ErrorKind::InvalidArgument, "apply_transfer needs k >= 1");
    const SchottkyGroup& G = mu.group();
    const double delta = mu.delta();
    // branches grouped by the last letter of the partition element
    std::vector<std::vector<MoebiusMap>> branches(G.letters());
    for (const Word& a : P.words) branches[a.back()].push_back(G.matrix_of(drop_last(a)));
    auto home = [&](cplx x) {
        int j = G.disc_containing(x);
        if (j >= 0) return j;
        double best = HUGE_VAL;
        for (int l = 0; l < G.letters(); ++l) {
            const double gap = std::abs(x - G.disc(l).center) - G.disc(l).radius;
            if (gap < best) best = gap, j = l;
        }
        return j;
    };
    std::function<cplx(cplx, int)> eval = [&](cplx x, int level) -> cplx {
        if (level == 0) return f(x);
        cplx acc = 0.0;
        const BoundaryPoint bx(x);
        for (const MoebiusMap& g : branches[home(x)])
            acc += std::pow(spherical_derivative(g, bx), delta) * eval(g.apply(x), level - 1);
        return acc;
    };
    std::vector<cplx> out(points.size());
    parallel_for(points.size(), [&](std::size_t i) { out[i] = eval(points[i], k); });
    return out;
}

}  // namespace sfl
