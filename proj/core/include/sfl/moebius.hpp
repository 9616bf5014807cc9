#pragma once

#include <array>
#include <complex>

namespace sfl {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;

// Above this modulus points are handled in the chart around infinity.
inline constexpr double kChartSwitch = 1e6;
// |cz+d| below this is treated as hitting the pole.
inline constexpr double kPoleTolerance = 1e-14;

struct Disc {
    cplx center;
    double radius = 1.0;
};

// Point of the Riemann sphere, stored as a unit vector (h1, h2) of C^2 up to phase.
// The cached S^2 vector uses zeta -> (2 Re zeta, 2 Im zeta, |zeta|^2 - 1) / (1 + |zeta|^2).
class BoundaryPoint {
public:
    BoundaryPoint();  // the point 0
    explicit BoundaryPoint(cplx z);
    static BoundaryPoint infinity();
    static BoundaryPoint homogeneous(cplx h1, cplx h2);
    static BoundaryPoint from_sphere(const Vec3& v);

    cplx h1() const { return h1_; }
    cplx h2() const { return h2_; }
    bool is_infinity() const { return h2_ == 0.0; }
    // Affine coordinate; complex infinity when the point is infinity.
    cplx z() const;
    const Vec3& unit() const { return unit_; }

private:
    void finish();
    cplx h1_;
    cplx h2_;
    Vec3 unit_{};
};

class MoebiusMap {
public:
    MoebiusMap();  // identity
    // Rescales to unit determinant and fixes the sign.
    MoebiusMap(cplx a, cplx b, cplx c, cplx d);
    static MoebiusMap identity() { return MoebiusMap(); }
    // Entries already of unit determinant (products of normalized maps);
    // only the sign is fixed. Avoids the cancellation in ad - bc for long words.
    static MoebiusMap unimodular(cplx a, cplx b, cplx c, cplx d);

    cplx a() const { return a_; }
    cplx b() const { return b_; }
    cplx c() const { return c_; }
    cplx d() const { return d_; }

    MoebiusMap inverse() const;
    // Finite evaluation; throws PoleError at the pole.
    cplx apply(cplx z) const;
    BoundaryPoint apply(const BoundaryPoint& p) const;
    // -d/c, or complex infinity for affine maps.
    cplx pole() const;

    double frobenius2() const;
    double norm_E() const;
    double norm_S() const { return std::abs(c_); }

private:
    void fix_sign();
    cplx a_, b_, c_, d_;
};

MoebiusMap compose(const MoebiusMap& f, const MoebiusMap& g);
bool equal_up_to_sign(const MoebiusMap& f, const MoebiusMap& g, double tol);

cplx derivative(const MoebiusMap& g, cplx z);
double spherical_derivative(const MoebiusMap& g, const BoundaryPoint& z);
double displacement(const MoebiusMap& g);
double chordal_distance(const BoundaryPoint& p, const BoundaryPoint& q);
Disc image_disc(const MoebiusMap& g, const Disc& D);
double busemann_weight(const MoebiusMap& g, const BoundaryPoint& xi, double delta);

// Boundary endpoint of the geodesic ray from o = (0,1) through g^{-1} o.
// The spherical derivative of g is maximal (= e^kappa) there.
BoundaryPoint ray_endpoint(const MoebiusMap& g);

// Attracting fixed point; for elliptic or parabolic maps an arbitrary fixed point.
BoundaryPoint attracting_fixed_point(const MoebiusMap& g);
BoundaryPoint repelling_fixed_point(const MoebiusMap& g);

}  // namespace sfl
