#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "sfl/error.hpp"
#include "sfl/moebius.hpp"

using namespace sfl;

TEST_CASE("normalization and sign") {
    const MoebiusMap m(2.0, 0.0, 0.0, 2.0);
    CHECK(m.a() == cplx(1.0));
    CHECK(m.d() == cplx(1.0));
    const MoebiusMap n(-1.0, 0.0, 0.0, -1.0);
    CHECK(n.a().real() > 0.0);
    CHECK_THROWS_AS(MoebiusMap(1.0, 2.0, 2.0, 4.0), Error);
}

TEST_CASE("compose and inverse") {
    std::mt19937_64 rng(3);
    const MoebiusMap id;
    for (int i = 0; i < 100; ++i) {
        const MoebiusMap f = fx::random_map(rng), g = fx::random_map(rng);
        CHECK(equal_up_to_sign(compose(id, g), g, 1e-14));
        CHECK(equal_up_to_sign(compose(g, g.inverse()), id, 1e-12));
        const cplx z = fx::random_point(rng);
        const cplx direct = f.apply(g.apply(z));
        CHECK(std::abs(compose(f, g).apply(z) - direct) <= 1e-10 * std::max(1.0, std::abs(direct)));
    }
    // translation then -1/z at z = 1 lands on -1/2
    const MoebiusMap t(1.0, 1.0, 0.0, 1.0), s(0.0, -1.0, 1.0, 0.0);
    CHECK(std::abs(compose(s, t).apply(1.0) - cplx(-0.5)) < 1e-15);
}

TEST_CASE("derivative") {
    const MoebiusMap s(0.0, -1.0, 1.0, 0.0);
    CHECK(std::abs(derivative(s, 2.0) - cplx(0.25)) < 1e-15);
    CHECK(derivative(MoebiusMap(), cplx(3.0, -1.0)) == cplx(1.0));
    CHECK_THROWS_AS(derivative(s, 0.0), Error);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        const MoebiusMap g = fx::random_map(rng);
        const cplx z = fx::random_point(rng);
        if (std::abs(z - g.pole()) < 0.3) continue;
        const double h = 1e-6 * std::max(1.0, std::abs(z));
        const cplx fd = (g.apply(z + h) - g.apply(z - h)) / (2.0 * h);
        CHECK(std::abs(fd - derivative(g, z)) <= 1e-6 * std::abs(derivative(g, z)));
    }
}

TEST_CASE("chain rule and spherical cocycle") {
    std::mt19937_64 rng(7);
    int checked = 0;
    for (int i = 0; i < 10000; ++i) {
        const MoebiusMap f = fx::random_map(rng), g = fx::random_map(rng), h = fx::random_map(rng);
        const cplx z = fx::random_point(rng);
        if (std::abs(g.apply(z) - f.pole()) < 1e-3 || std::abs(z - g.pole()) < 1e-3) continue;
        const cplx lhs = derivative(compose(f, g), z), rhs = derivative(f, g.apply(z)) * derivative(g, z);
        REQUIRE(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));
        const BoundaryPoint p(z);
        const double s3 = spherical_derivative(compose(compose(f, g), h), p);
        const double prod = spherical_derivative(f, compose(g, h).apply(p)) * spherical_derivative(g, h.apply(p)) *
                            spherical_derivative(h, p);
        REQUIRE(fx::rel(s3, prod) <= 1e-10);
        ++checked;
    }
    CHECK(checked > 9000);
}

TEST_CASE("spherical derivative") {
    CHECK(spherical_derivative(MoebiusMap(), BoundaryPoint(cplx(2.0, 1.0))) == doctest::Approx(1.0).epsilon(1e-14));
    for (double th : {0.3, 1.1, 2.5}) {
        const MoebiusMap rot(std::cos(th), -std::sin(th), std::sin(th), std::cos(th));
        for (cplx z : {cplx(0.0), cplx(1.0, 2.0), cplx(-3.0, 0.5), cplx(1e7, 0.0)})
            CHECK(std::abs(spherical_derivative(rot, BoundaryPoint(z)) - 1.0) < 1e-10);
        CHECK(std::abs(spherical_derivative(rot, BoundaryPoint::infinity()) - 1.0) < 1e-10);
    }
    // chart formula against the Euclidean one
    std::mt19937_64 rng(9);
    for (int i = 0; i < 100; ++i) {
        const MoebiusMap g = fx::random_map(rng);
        const cplx z = fx::random_point(rng);
        const cplx w = g.apply(z);
        const double euclid = (1 + std::norm(z)) / (1 + std::norm(w)) * std::abs(derivative(g, z));
        CHECK(fx::rel(spherical_derivative(g, BoundaryPoint(z)), euclid) < 1e-10);
    }
}

TEST_CASE("product formula for |gx - gy|") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 10000; ++i) {
        const MoebiusMap g = fx::random_map(rng);
        const cplx x = fx::random_point(rng), y = fx::random_point(rng);
        if (std::abs(x - g.pole()) < 1e-2 || std::abs(y - g.pole()) < 1e-2) continue;
        const double lhs = std::abs(g.apply(x) - g.apply(y));
        const double rhs =
            std::abs(x - y) * std::sqrt(std::abs(derivative(g, x))) * std::sqrt(std::abs(derivative(g, y)));
        REQUIRE(fx::rel(lhs, rhs) <= 1e-10);
    }
}

TEST_CASE("displacement") {
    CHECK(displacement(MoebiusMap()) == 0.0);
    const MoebiusMap d(std::exp(0.5), 0.0, 0.0, std::exp(-0.5));
    CHECK(displacement(d) == doctest::Approx(1.0).epsilon(1e-12));
    std::mt19937_64 rng(13);
    for (int i = 0; i < 1000; ++i) {
        const MoebiusMap f = fx::random_map(rng), g = fx::random_map(rng);
        CHECK(displacement(compose(f, g)) <= displacement(f) + displacement(g) + 1e-9);
        CHECK(std::abs(displacement(f) - displacement(f.inverse())) < 1e-9);
    }
}

TEST_CASE("boundary points and chordal distance") {
    CHECK(chordal_distance(BoundaryPoint(0.0), BoundaryPoint::infinity()) == doctest::Approx(1.0));
    CHECK(chordal_distance(BoundaryPoint(1.0), BoundaryPoint(-1.0)) == doctest::Approx(1.0));
    const BoundaryPoint p(cplx(0.3, -0.7));
    CHECK(chordal_distance(p, p) == 0.0);
    // the embedding sends 1 and -1 to antipodes
    const Vec3 u = BoundaryPoint(1.0).unit(), v = BoundaryPoint(-1.0).unit();
    CHECK(std::abs(u[0] + v[0]) + std::abs(u[1] + v[1]) + std::abs(u[2] + v[2]) < 1e-15);
    std::mt19937_64 rng(17);
    for (int i = 0; i < 200; ++i) {
        const cplx z = fx::random_point(rng, 5.0);
        const BoundaryPoint q = BoundaryPoint::from_sphere(BoundaryPoint(z).unit());
        CHECK(std::abs(q.z() - z) <= 1e-10 * std::max(1.0, std::abs(z)));
        const double h = 1e-7;
        CHECK(chordal_distance(BoundaryPoint(z), BoundaryPoint(z + h)) / h ==
              doctest::Approx(1.0 / (1.0 + std::norm(z))).epsilon(1e-5));
    }
    // far chart
    CHECK(BoundaryPoint(cplx(1e8, 0.0)).is_infinity() == false);
    CHECK(chordal_distance(BoundaryPoint(cplx(1e9, 0.0)), BoundaryPoint::infinity()) < 1e-8);
}

TEST_CASE("image_disc") {
    const Disc D{0.0, 1.0};
    const Disc same = image_disc(MoebiusMap(), D);
    CHECK(std::abs(same.center) < 1e-15);
    CHECK(same.radius == doctest::Approx(1.0));
    const Disc moved = image_disc(MoebiusMap(1.0, 1.0, 0.0, 1.0), D);
    CHECK(std::abs(moved.center - cplx(1.0)) < 1e-15);
    CHECK(moved.radius == doctest::Approx(1.0));
    CHECK_THROWS_AS(image_disc(MoebiusMap(0.0, -1.0, 1.0, 0.0), D), Error);
    std::mt19937_64 rng(19);
    int checked = 0;
    while (checked < 200) {
        const MoebiusMap g = fx::random_map(rng);
        const Disc E{fx::random_point(rng), 0.5};
        if (std::abs(E.center - g.pole()) <= 0.6) continue;
        const Disc img = image_disc(g, E);
        for (int k = 0; k < 64; ++k) {
            const cplx b = E.center + std::polar(E.radius, 2 * std::numbers::pi * k / 64);
            CHECK(std::abs(std::abs(g.apply(b) - img.center) - img.radius) < 1e-9 * std::max(1.0, img.radius));
        }
        CHECK(std::abs(g.apply(E.center) - img.center) < img.radius);
        ++checked;
    }
}

TEST_CASE("busemann weight and ray endpoint") {
    std::mt19937_64 rng(23);
    const double delta = 0.7;
    for (int i = 0; i < 200; ++i) {
        const MoebiusMap g = fx::random_map(rng);
        const double kappa = displacement(g);
        if (kappa < 1e-3) continue;
        const BoundaryPoint xm = ray_endpoint(g);
        CHECK(fx::rel(busemann_weight(g, xm, delta), std::exp(delta * kappa)) < 1e-6);
        // maximal there
        for (int k = 0; k < 20; ++k)
            CHECK(busemann_weight(g, BoundaryPoint(fx::random_point(rng)), delta) <=
                  busemann_weight(g, xm, delta) * (1 + 1e-9));
        const MoebiusMap f = fx::random_map(rng);
        const BoundaryPoint xi(fx::random_point(rng));
        CHECK(fx::rel(busemann_weight(compose(f, g), xi, delta),
                      busemann_weight(f, g.apply(xi), delta) * busemann_weight(g, xi, delta)) < 1e-10);
    }
    CHECK(busemann_weight(MoebiusMap(), BoundaryPoint(2.0), delta) == doctest::Approx(1.0));
}

TEST_CASE("fixed points") {
    const MoebiusMap g(2.0, 0.0, 0.0, 0.5);  // z -> 4z
    CHECK(attracting_fixed_point(g).is_infinity());
    CHECK(std::abs(repelling_fixed_point(g).z()) < 1e-15);
}
