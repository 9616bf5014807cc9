#include "sfl/schottky.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sfl/error.hpp"

namespace sfl {

std::string word_to_string(const Word& w) {
    if (w.empty()) return "e";
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(w[i] + 1);
    }
    return s;
}

Word parse_word(const std::string& s) {
    if (s == "e" || s.empty()) return {};
    Word w;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, '.')) {
        try {
            w.push_back(std::stoi(item) - 1);
        } catch (const std::exception&) {
            fail(ErrorKind::InvalidArgument, "bad word " + s);
        }
    }
    return w;
}

Word concat(const Word& a, const Word& b) {
    Word w = a;
    w.insert(w.end(), b.begin(), b.end());
    return w;
}

Word prefix(const Word& w, std::size_t n) { return Word(w.begin(), w.begin() + std::min(n, w.size())); }

Word drop_last(const Word& w) { return w.empty() ? w : Word(w.begin(), w.end() - 1); }

MoebiusMap pair_discs(const Disc& d_out, const Disc& d_in, double twist) {
    if (std::abs(d_out.center - d_in.center) <= d_out.radius + d_in.radius + 1e-9)
        fail(ErrorKind::DiscsOverlap, "paired discs overlap");
    const cplx k = d_in.radius * d_out.radius * std::polar(1.0, twist);
    const cplx ci = d_in.center, co = d_out.center;
    return MoebiusMap(ci, -k - ci * co, 1.0, -co);
}

SchottkyGroup::SchottkyGroup(const GroupConfig& config) : config_(config), r_(config.r) {
    if (r_ < 2) fail(ErrorKind::NotEnoughDiscs, "need r >= 2, got " + std::to_string(r_));
    if (static_cast<int>(config_.discs.size()) != 2 * r_)
        fail(ErrorKind::NotEnoughDiscs, "need 2r = " + std::to_string(2 * r_) + " discs, got " +
                                            std::to_string(config_.discs.size()));
    for (const auto& d : config_.discs)
        if (!(d.radius > 0.0) || !std::isfinite(d.radius) || !std::isfinite(d.center.real()) ||
            !std::isfinite(d.center.imag()))
            fail(ErrorKind::InvalidArgument, "disc radius must be finite and positive");
    for (int i = 0; i < 2 * r_; ++i)
        for (int j = i + 1; j < 2 * r_; ++j) {
            const auto& a = config_.discs[i];
            const auto& b = config_.discs[j];
            if (std::abs(a.center - b.center) <= a.radius + b.radius + 1e-9)
                fail(ErrorKind::DiscsOverlap,
                     "discs " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " overlap");
        }
    std::vector<MoebiusMap> base;
    if (config_.generators) {
        if (static_cast<int>(config_.generators->size()) != r_)
            fail(ErrorKind::InvalidArgument, "need r generator matrices");
        for (const auto& g : *config_.generators)
            base.emplace_back(cplx(g[0], g[1]), cplx(g[2], g[3]), cplx(g[4], g[5]), cplx(g[6], g[7]));
    } else {
        std::vector<double> tw(r_, 0.0);
        if (config_.twists) {
            if (static_cast<int>(config_.twists->size()) != r_)
                fail(ErrorKind::InvalidArgument, "need r twists");
            tw = *config_.twists;
        }
        for (int i = 0; i < r_; ++i) base.push_back(pair_discs(config_.discs[i + r_], config_.discs[i], tw[i]));
    }
    gens_.resize(2 * r_);
    for (int i = 0; i < r_; ++i) {
        gens_[i] = base[i];
        gens_[i + r_] = base[i].inverse();
    }
    // ping-pong: boundary of D_{i+r} onto boundary of D_i, exterior into D_i
    residuals_.assign(r_, 0.0);
    for (int i = 0; i < r_; ++i) {
        const Disc& out = config_.discs[i + r_];
        const Disc& in = config_.discs[i];
        double res = 0.0;
        for (int k = 0; k < 64; ++k) {
            const cplx z = out.center + out.radius * std::polar(1.0, 2.0 * std::numbers::pi * k / 64.0);
            const BoundaryPoint w = gens_[i].apply(BoundaryPoint(z));
            const double dev =
                w.is_infinity() ? HUGE_VAL : std::abs(std::abs(w.z() - in.center) - in.radius);
            res = std::max(res, dev);
        }
        const BoundaryPoint far = gens_[i].apply(BoundaryPoint::infinity());
        const bool inside = !far.is_infinity() && std::abs(far.z() - in.center) < in.radius;
        residuals_[i] = res;
        if (!(res < 1e-8) || !inside) {
            std::ostringstream os;
            os << "generator " << i + 1 << " residual " << res << (inside ? "" : ", exterior not mapped inside");
            fail(ErrorKind::PairingViolated, os.str());
        }
    }
}

SchottkyGroup build_group(const GroupConfig& config) { return SchottkyGroup(config); }

bool SchottkyGroup::is_reduced(const Word& w) const {
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] < 0 || w[i] >= 2 * r_) return false;
        if (i && w[i] == inverse_letter(w[i - 1])) return false;
    }
    return true;
}

MoebiusMap SchottkyGroup::matrix_of(const Word& w) const {
    if (!is_reduced(w)) fail(ErrorKind::NotReduced, "word " + word_to_string(w) + " is not reduced");
    // generators are unimodular, so the product is too
    cplx a = 1.0, b = 0.0, c = 0.0, d = 1.0;
    for (int l : w) {
        const MoebiusMap& g = gens_[l];
        const cplx na = a * g.a() + b * g.c(), nb = a * g.b() + b * g.d();
        const cplx nc = c * g.a() + d * g.c(), nd = c * g.b() + d * g.d();
        a = na, b = nb, c = nc, d = nd;
    }
    return MoebiusMap::unimodular(a, b, c, d);
}

Word SchottkyGroup::inverse_word(const Word& w) const {
    Word v(w.rbegin(), w.rend());
    for (int& l : v) l = inverse_letter(l);
    return v;
}

std::size_t SchottkyGroup::word_count(int n) const {
    if (n <= 0) return 1;
    std::size_t c = 2 * r_;
    for (int i = 1; i < n; ++i) c *= 2 * r_ - 1;
    return c;
}

std::size_t SchottkyGroup::word_index(const Word& w) const {
    if (w.empty()) return 0;
    std::size_t idx = w[0];
    for (std::size_t k = 1; k < w.size(); ++k) {
        const int forbidden = inverse_letter(w[k - 1]);
        const int rank = w[k] - (w[k] > forbidden ? 1 : 0);
        idx = idx * (2 * r_ - 1) + rank;
    }
    return idx;
}

Word SchottkyGroup::word_at(int n, std::size_t index) const {
    if (n <= 0) return {};
    Word w(n);
    std::vector<int> digits(n);
    for (int k = n - 1; k >= 1; --k) {
        digits[k] = static_cast<int>(index % (2 * r_ - 1));
        index /= (2 * r_ - 1);
    }
    w[0] = static_cast<int>(index);
    for (int k = 1; k < n; ++k) {
        const int forbidden = inverse_letter(w[k - 1]);
        w[k] = digits[k] + (digits[k] >= forbidden ? 1 : 0);
    }
    return w;
}

std::vector<Word> SchottkyGroup::words(int n) const {
    const std::size_t count = word_count(n);
    std::vector<Word> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(word_at(n, i));
    return out;
}

Disc SchottkyGroup::cylinder_disc(const Word& w) const {
    if (w.empty() || !is_reduced(w)) fail(ErrorKind::NotReduced, "cylinder needs a nonempty reduced word");
    if (w.size() == 1) return disc(w[0]);
    return image_disc(matrix_of(drop_last(w)), disc(w.back()));
}

cplx SchottkyGroup::anchor(const Word& w) const {
    if (w.empty() || !is_reduced(w)) fail(ErrorKind::NotReduced, "anchor needs a nonempty reduced word");
    return matrix_of(drop_last(w)).apply(disc(w.back()).center);
}

Cylinder SchottkyGroup::cylinder(const Word& w) const {
    return Cylinder{w, cylinder_disc(w), BoundaryPoint(anchor(w))};
}

BoundaryPoint SchottkyGroup::limit_point(const Word& w) const {
    if (w.empty() || !is_reduced(w)) fail(ErrorKind::NotReduced, "limit point needs a nonempty reduced word");
    Word v = w;
    if (w.back() == inverse_letter(w.front())) {
        int e = 0;
        while (e == inverse_letter(w.back()) || e == inverse_letter(w.front())) ++e;
        v.push_back(e);
    }
    const MoebiusMap g = matrix_of(v);
    BoundaryPoint p = attracting_fixed_point(g);
    for (int k = 0; k < 3; ++k) p = g.apply(p);
    return p;
}

std::vector<BoundaryPoint> SchottkyGroup::limit_points(int depth) const {
    if (depth < 1) fail(ErrorKind::InvalidArgument, "limit_points needs depth >= 1");
    const std::size_t n = word_count(depth);
    std::vector<BoundaryPoint> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(limit_point(word_at(depth, i)));
    return out;
}

bool SchottkyGroup::fuchsian_like() const {
    const MoebiusMap g1 = gens_[0], g2 = gens_[1], g12 = compose(g1, g2);
    std::vector<Vec3> pts;
    for (const auto& g : {g1, g2, g12}) {
        pts.push_back(attracting_fixed_point(g).unit());
        pts.push_back(repelling_fixed_point(g).unit());
    }
    // plane through the first three points; a circle on S^2 is a plane section
    auto sub = [](const Vec3& a, const Vec3& b) { return Vec3{a[0] - b[0], a[1] - b[1], a[2] - b[2]}; };
    const Vec3 u = sub(pts[1], pts[0]), v = sub(pts[2], pts[0]);
    Vec3 n{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
    const double nn = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    if (nn < 1e-12) return true;
    for (double& x : n) x /= nn;
    for (std::size_t k = 3; k < pts.size(); ++k) {
        const Vec3 w = sub(pts[k], pts[0]);
        if (std::abs(w[0] * n[0] + w[1] * n[1] + w[2] * n[2]) > 1e-8) return false;
    }
    return true;
}

double SchottkyGroup::separation() const {
    double best = HUGE_VAL;
    for (int i = 0; i < 2 * r_; ++i)
        for (int j = i + 1; j < 2 * r_; ++j)
            best = std::min(best, std::abs(disc(i).center - disc(j).center) - disc(i).radius - disc(j).radius);
    return best;
}

int SchottkyGroup::disc_containing(cplx z) const {
    for (int j = 0; j < 2 * r_; ++j)
        if (std::abs(z - disc(j).center) < disc(j).radius) return j;
    return -1;
}

double SchottkyGroup::disc_bound() const {
    double b = 0.0;
    for (const auto& d : config_.discs) b = std::max(b, std::abs(d.center) + d.radius);
    return b;
}

}  // namespace sfl
