#include "sfl/moebius.hpp"

#include <cmath>
#include <limits>

#include "sfl/error.hpp"

namespace sfl {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

bool keeps_sign(cplx x) { return x.real() > 0.0 || (x.real() == 0.0 && x.imag() > 0.0); }

}  // namespace

BoundaryPoint::BoundaryPoint() : h1_(0.0), h2_(1.0) { finish(); }

BoundaryPoint::BoundaryPoint(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        h1_ = 1.0;
        h2_ = 0.0;
    } else if (std::abs(z) > kChartSwitch) {
        const cplx w = 1.0 / z;
        const double s = 1.0 / std::sqrt(1.0 + std::norm(w));
        h1_ = s;
        h2_ = w * s;
    } else {
        const double s = 1.0 / std::sqrt(1.0 + std::norm(z));
        h1_ = z * s;
        h2_ = s;
    }
    finish();
}

BoundaryPoint BoundaryPoint::infinity() { return homogeneous(1.0, 0.0); }

BoundaryPoint BoundaryPoint::homogeneous(cplx h1, cplx h2) {
    const double n = std::sqrt(std::norm(h1) + std::norm(h2));
    if (!(n > 0.0) || !std::isfinite(n)) fail(ErrorKind::InvalidArgument, "zero homogeneous vector");
    BoundaryPoint p;
    p.h1_ = h1 / n;
    p.h2_ = h2 / n;
    p.finish();
    return p;
}

BoundaryPoint BoundaryPoint::from_sphere(const Vec3& v) {
    // (v0 + i v1 : 1 - v2) and (1 + v2 : v0 - i v1) name the same point.
    if (v[2] <= 0.0) return homogeneous(cplx(v[0], v[1]), 1.0 - v[2]);
    return homogeneous(1.0 + v[2], cplx(v[0], -v[1]));
}

void BoundaryPoint::finish() {
    // fix the phase so that equal points have equal coordinates
    if (std::abs(h2_) > 0.0) {
        const cplx ph = std::conj(h2_) / std::abs(h2_);
        h1_ *= ph;
        h2_ = std::abs(h2_);
    } else {
        h1_ = std::abs(h1_);
    }
    const cplx s = h1_ * std::conj(h2_);
    const double n = std::norm(h1_) + std::norm(h2_);
    unit_ = {2.0 * s.real() / n, 2.0 * s.imag() / n, (std::norm(h1_) - std::norm(h2_)) / n};
}

cplx BoundaryPoint::z() const {
    if (h2_ == 0.0) return cplx(kInf, kInf);
    return h1_ / h2_;
}

MoebiusMap::MoebiusMap() : a_(1.0), b_(0.0), c_(0.0), d_(1.0) {}

MoebiusMap::MoebiusMap(cplx a, cplx b, cplx c, cplx d) {
    const cplx det = a * d - b * c;
    if (!(std::abs(det) > 0.0) || !std::isfinite(std::abs(det)))
        fail(ErrorKind::InvalidArgument, "singular or non-finite matrix");
    const cplx s = std::sqrt(det);
    a_ = a / s;
    b_ = b / s;
    c_ = c / s;
    d_ = d / s;
    fix_sign();
}

MoebiusMap MoebiusMap::unimodular(cplx a, cplx b, cplx c, cplx d) {
    if (!std::isfinite(std::abs(a) + std::abs(b) + std::abs(c) + std::abs(d)))
        fail(ErrorKind::InvalidArgument, "singular or non-finite matrix");
    MoebiusMap m;
    m.a_ = a;
    m.b_ = b;
    m.c_ = c;
    m.d_ = d;
    m.fix_sign();
    return m;
}

void MoebiusMap::fix_sign() {
    const cplx first = a_ != 0.0 ? a_ : b_ != 0.0 ? b_ : c_ != 0.0 ? c_ : d_;
    if (!keeps_sign(first)) {
        a_ = -a_;
        b_ = -b_;
        c_ = -c_;
        d_ = -d_;
    }
}

MoebiusMap MoebiusMap::inverse() const { return unimodular(d_, -b_, -c_, a_); }

cplx MoebiusMap::apply(cplx z) const {
    const cplx den = c_ * z + d_;
    if (std::abs(den) < kPoleTolerance) fail(ErrorKind::PoleError, "evaluation at the pole");
    return (a_ * z + b_) / den;
}

BoundaryPoint MoebiusMap::apply(const BoundaryPoint& p) const {
    return BoundaryPoint::homogeneous(a_ * p.h1() + b_ * p.h2(), c_ * p.h1() + d_ * p.h2());
}

cplx MoebiusMap::pole() const {
    if (c_ == 0.0) return cplx(kInf, kInf);
    return -d_ / c_;
}

double MoebiusMap::frobenius2() const {
    return std::norm(a_) + std::norm(b_) + std::norm(c_) + std::norm(d_);
}

double MoebiusMap::norm_E() const { return std::sqrt(frobenius2()); }

MoebiusMap compose(const MoebiusMap& f, const MoebiusMap& g) {
    return MoebiusMap::unimodular(f.a() * g.a() + f.b() * g.c(), f.a() * g.b() + f.b() * g.d(),
                      f.c() * g.a() + f.d() * g.c(), f.c() * g.b() + f.d() * g.d());
}

bool equal_up_to_sign(const MoebiusMap& f, const MoebiusMap& g, double tol) {
    auto diff = [&](double s) {
        return std::max({std::abs(f.a() - s * g.a()), std::abs(f.b() - s * g.b()),
                         std::abs(f.c() - s * g.c()), std::abs(f.d() - s * g.d())});
    };
    return std::min(diff(1.0), diff(-1.0)) <= tol;
}

cplx derivative(const MoebiusMap& g, cplx z) {
    const cplx den = g.c() * z + g.d();
    if (std::abs(den) < kPoleTolerance) fail(ErrorKind::PoleError, "derivative at the pole");
    return 1.0 / (den * den);
}

double spherical_derivative(const MoebiusMap& g, const BoundaryPoint& p) {
    // total formula in homogeneous coordinates, |p| = 1 and det g = 1
    const cplx u = g.a() * p.h1() + g.b() * p.h2();
    const cplx v = g.c() * p.h1() + g.d() * p.h2();
    return 1.0 / (std::norm(u) + std::norm(v));
}

double displacement(const MoebiusMap& g) { return std::acosh(std::max(1.0, 0.5 * g.frobenius2())); }

double chordal_distance(const BoundaryPoint& p, const BoundaryPoint& q) {
    return std::min(1.0, std::abs(p.h1() * q.h2() - p.h2() * q.h1()));
}

Disc image_disc(const MoebiusMap& g, const Disc& D) {
    const cplx z0 = D.center;
    const double rho = D.radius;
    const cplx a = g.a(), b = g.b(), c = g.c(), d = g.d();
    if (c == 0.0) {
        // affine: z -> (a z + b) / d
        return Disc{(a * z0 + b) / d, rho / std::norm(d)};
    }
    if (std::abs(z0 + d / c) <= rho) fail(ErrorKind::PoleInsideDisc, "pole inside the disc");
    const cplx w = c * z0 + d;
    const double den = std::norm(w) - std::norm(c) * rho * rho;
    const cplx center = ((a * z0 + b) * std::conj(w) - a * std::conj(c) * rho * rho) / den;
    return Disc{center, rho / std::abs(den)};
}

double busemann_weight(const MoebiusMap& g, const BoundaryPoint& xi, double delta) {
    return std::pow(spherical_derivative(g, xi), delta);
}

BoundaryPoint ray_endpoint(const MoebiusMap& g) {
    // right singular vector of the smallest singular value, taken as the
    // orthogonal complement of the top eigenvector of g^* g
    const cplx a = g.a(), b = g.b(), c = g.c(), d = g.d();
    const double p = std::norm(a) + std::norm(c);
    const double s = std::norm(b) + std::norm(d);
    const cplx q = std::conj(a) * b + std::conj(c) * d;
    const double half = 0.5 * (p - s);
    const double root = std::sqrt(half * half + std::norm(q));
    if (root == 0.0) return BoundaryPoint();
    cplx v1, v2;
    if (p >= s) {
        v1 = half + root;
        v2 = std::conj(q);
    } else {
        v1 = q;
        v2 = root - half;
    }
    return BoundaryPoint::homogeneous(-std::conj(v2), std::conj(v1));
}

namespace {

BoundaryPoint fixed_point(const MoebiusMap& g, bool attracting) {
    const cplx tr = g.a() + g.d();
    const cplx disc = std::sqrt(tr * tr - 4.0);
    cplx l1 = 0.5 * (tr + disc);
    cplx l2 = 0.5 * (tr - disc);
    if (std::abs(l2) > std::abs(l1)) std::swap(l1, l2);
    const cplx lam = attracting ? l1 : l2;
    // eigenvector of lam: (b, lam - a) or (lam - d, c)
    const cplx u1 = g.b(), u2 = lam - g.a();
    const cplx w1 = lam - g.d(), w2 = g.c();
    if (std::norm(u1) + std::norm(u2) >= std::norm(w1) + std::norm(w2)) {
        if (std::norm(u1) + std::norm(u2) == 0.0) return BoundaryPoint();
        return BoundaryPoint::homogeneous(u1, u2);
    }
    return BoundaryPoint::homogeneous(w1, w2);
}

}  // namespace

BoundaryPoint attracting_fixed_point(const MoebiusMap& g) { return fixed_point(g, true); }
BoundaryPoint repelling_fixed_point(const MoebiusMap& g) { return fixed_point(g, false); }

}  // namespace sfl
