#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "fixtures.hpp"
#include "sfl/error.hpp"
#include "sfl/thermo.hpp"

using namespace sfl;

namespace {

// Growth rate of sum_{|w| = n} radius(D_w)^s, compared between n and n + 1.
double pressure_step(const SchottkyGroup& G, double s, int n) {
    double zn = 0.0, zn1 = 0.0;
    for (const Word& w : G.words(n)) {
        const Disc d = G.cylinder_disc(w);
        zn += std::pow(d.radius, s);
        for (int e = 0; e < G.letters(); ++e) {
            if (e == G.inverse_letter(w.back())) continue;
            zn1 += std::pow(G.cylinder_disc(concat(w, Word{e})).radius, s);
        }
    }
    return std::log(zn1 / zn);
}

// Exponent where the cylinder-radius pressure vanishes.
double pressure_root(const SchottkyGroup& G, int n) {
    double lo = 0.01, hi = 1.99;
    for (int it = 0; it < 50; ++it) {
        const double mid = 0.5 * (lo + hi);
        (pressure_step(G, mid, n) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

GroupConfig scaled(GroupConfig c, double factor) {
    for (auto& d : c.discs) d.radius *= factor;
    return c;
}

}  // namespace

TEST_CASE("critical exponent") {
    const double dd = estimate_delta(fx::dense(), 8);
    const double df = estimate_delta(fx::fuchsian(), 8);
    CHECK(dd == doctest::Approx(fx::kDeltaDense).epsilon(1e-9));
    CHECK(df == doctest::Approx(fx::kDeltaFuchsian).epsilon(1e-9));
    for (double d : {dd, df}) {
        CHECK(d > 0.0);
        CHECK(d < 1.5);
    }
    CHECK(std::abs(estimate_delta(fx::dense(), 6) - dd) < 1e-4);
    CHECK(std::abs(estimate_delta(fx::fuchsian(), 6) - df) < 1e-4);
    // independent oracle: cylinder-radius pressure
    CHECK(std::abs(pressure_root(fx::dense(), 8) - dd) < 2e-3);
    CHECK(std::abs(pressure_root(fx::fuchsian(), 8) - df) < 2e-3);

    const SchottkyGroup small(scaled(dense4(), 0.5));
    CHECK(estimate_delta(small, 6) < estimate_delta(fx::dense(), 6));
    CHECK_THROWS_AS(estimate_delta(fx::dense(), 1), Error);
    CHECK_THROWS_AS(estimate_delta(fx::dense(), 6, 1e-13), Error);
}

TEST_CASE("exponent is invariant under relabeling and conjugation") {
    const double base = estimate_delta(fx::dense(), 6);
    GroupConfig swapped = dense4();
    std::swap(swapped.discs[0], swapped.discs[1]);
    std::swap(swapped.discs[2], swapped.discs[3]);
    std::swap((*swapped.twists)[0], (*swapped.twists)[1]);
    CHECK(std::abs(estimate_delta(SchottkyGroup(swapped), 6) - base) < 2e-10);

    // conjugate by a similarity: discs and generators move together
    const MoebiusMap h(cplx(0.8, 0.6), cplx(0.3, -0.2), 0.0, 1.0);
    const SchottkyGroup& D = fx::dense();
    GroupConfig conj = dense4();
    conj.twists.reset();
    std::vector<std::array<double, 8>> rows;
    for (int i = 0; i < 2; ++i) {
        const MoebiusMap g = compose(compose(h, D.generator(i)), h.inverse());
        rows.push_back({g.a().real(), g.a().imag(), g.b().real(), g.b().imag(), g.c().real(), g.c().imag(),
                        g.d().real(), g.d().imag()});
    }
    conj.generators = rows;
    for (int j = 0; j < 4; ++j) conj.discs[j] = image_disc(h, D.disc(j));
    // similarities rescale spherical derivatives only through the chart; the
    // exponent is a conformal invariant
    CHECK(std::abs(estimate_delta(SchottkyGroup(conj), 8) - estimate_delta(D, 8)) < 1e-5);
}

TEST_CASE("transfer matrix") {
    const TransferMatrix M(fx::dense(), 4);
    CHECK(M.size() == fx::dense().word_count(4));
    CHECK(M.row_width() == 3);
    CHECK(M.strongly_connected());
    double prev = HUGE_VAL;
    for (double s = 0.1; s < 1.9; s += 0.2) {
        const SpectralEstimate e = M.spectral_radius(s);
        CHECK(e.lower <= e.upper);
        CHECK(e.value() < prev);
        prev = e.value();
    }
    const auto v = M.left_eigenvector(fx::kDeltaDense);
    CHECK(std::accumulate(v.begin(), v.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    for (double x : v) CHECK(x >= 0.0);
}

TEST_CASE("Patterson-Sullivan measure") {
    for (const PSMeasure* mu : {&fx::dense_mu(), &fx::fuchsian_mu()}) {
        const SchottkyGroup& G = mu->group();
        CHECK(std::abs(mu->discrete().total_mass - 1.0) <= 1e-12);
        // additivity over children
        for (int n = 1; n < 8; ++n)
            for (const Word& a : G.words(n)) {
                double kids = 0.0;
                for (int e = 0; e < G.letters(); ++e)
                    if (e != G.inverse_letter(a.back())) kids += mu->mass(concat(a, Word{e}));
                REQUIRE(std::abs(kids - mu->mass(a)) <= 1e-9 * mu->mass(a));
            }
        // equivariance against coordinate functions
        const double delta = mu->delta();
        for (int j = 0; j < G.letters(); ++j) {
            const MoebiusMap& g = G.generator(j);
            for (int f = 0; f < 2; ++f) {
                double lhs = 0.0, rhs = 0.0;
                for (const Atom& a : mu->discrete().atoms) {
                    const cplx gz = g.apply(a.z);
                    lhs += a.mass * (f ? a.z.imag() : a.z.real());
                    rhs += a.mass * (f ? gz.imag() : gz.real()) *
                           std::pow(spherical_derivative(g, BoundaryPoint(a.z)), delta);
                }
                CHECK(std::abs(lhs - rhs) <= 5e-3);
            }
        }
        // parent/child and contraction
        double contraction = 0.0;
        for (int n = 1; n < 8; ++n)
            for (const Word& a : G.words(n))
                for (int e = 0; e < G.letters(); ++e)
                    if (e != G.inverse_letter(a.back())) {
                        const double ratio = mu->mass(concat(a, Word{e})) / mu->mass(a);
                        CHECK(ratio <= 1.0);
                        contraction = std::max(contraction, ratio);
                    }
        CHECK(contraction < 0.99);
        CHECK_THROWS_AS(mu->mass(Word(9, 0)), Error);
    }
}

TEST_CASE("refinement and sampling") {
    const PSMeasure& mu = fx::dense_mu();
    const DiscreteMeasure fine = mu.refined(mu.discrete().resolution / 4);
    CHECK(fine.atoms.size() > mu.discrete().atoms.size());
    CHECK(fine.resolution <= mu.discrete().resolution / 4);
    CHECK(std::abs(fine.total_mass - 1.0) < 1e-12);
    CHECK_THROWS_AS(mu.refined(1e-9, 1000), Error);
    const auto pts = mu.sample(500, 3, 1e-6);
    const auto again = mu.sample(500, 3, 1e-6);
    CHECK(pts == again);
    for (cplx z : pts) CHECK(fx::dense().disc_containing(z) >= 0);
    double mean_re = 0.0, direct = 0.0;
    for (cplx z : pts) mean_re += z.real() / 500.0;
    for (const Atom& a : mu.discrete().atoms) direct += a.mass * a.z.real();
    CHECK(std::abs(mean_re - direct) < 0.15);
}

TEST_CASE("partitions") {
    const PSMeasure& mu = fx::dense_mu();
    const double delta = mu.delta();
    std::vector<double> scaled_size;
    for (int k = 2; k <= 6; ++k) {
        const double tau = std::ldexp(1.0, -k);
        const Partition P = build_partition(mu, tau);
        double total = 0.0;
        for (std::size_t i = 0; i < P.words.size(); ++i) {
            const Word& a = P.words[i];
            CHECK(P.masses[i] == mu.mass(a));
            CHECK(mu.mass(a) <= std::pow(tau, delta));
            if (a.size() > 1) CHECK(mu.mass(drop_last(a)) > std::pow(tau, delta));
            total += P.masses[i];
        }
        CHECK(std::abs(total - 1.0) <= 1e-9);
        // pairwise non-nested
        for (std::size_t i = 0; i < P.words.size(); ++i)
            for (std::size_t j = 0; j < P.words.size(); ++j)
                if (i != j && P.words[j].size() >= P.words[i].size())
                    CHECK(prefix(P.words[j], P.words[i].size()) != P.words[i]);
        scaled_size.push_back(static_cast<double>(P.words.size()) * std::pow(tau, delta));
    }
    for (double s : scaled_size) {
        CHECK(s >= 1.0);
        CHECK(s <= 6.0);
    }
    CHECK_THROWS_AS(build_partition(mu, 1e-9), Error);
}

TEST_CASE("band") {
    const PSMeasure& mu = fx::dense_mu();
    const double tau = 1.0 / 64;
    const Partition P = build_partition(mu, tau);
    const Band narrow = band(mu, 1.5, tau), wide = band(mu, 4.0, tau), wider = band(mu, 8.0, tau);
    CHECK(narrow.words.size() <= wide.words.size());
    CHECK(wide.words.size() <= wider.words.size());
    CHECK(wide.inclusion_ok);
    CHECK(wide.inclusion_length <= 8);
    // every partition element is in the band once C covers the parent/child ratio
    std::size_t missing = 0;
    for (const Word& a : P.words)
        if (std::find(wider.words.begin(), wider.words.end(), a) == wider.words.end()) ++missing;
    CHECK(missing == 0);
    CHECK_THROWS_AS(band(mu, 1.0, tau), Error);
}

TEST_CASE("transfer operator") {
    const PSMeasure& mu = fx::dense_mu();
    const Partition P = build_partition(mu, 1.0 / 16);
    std::vector<cplx> pts;
    const auto& atoms = mu.discrete().atoms;
    for (std::size_t i = 0; i < atoms.size(); i += 97) pts.push_back(atoms[i].z);
    const auto one = apply_transfer(mu, P, [](cplx) { return cplx(1.0); }, 1, pts);
    for (cplx v : one) CHECK(std::abs(v - 1.0) < 5e-3);

    std::vector<cplx> all;
    for (const Atom& a : atoms) all.push_back(a.z);
    const auto lre = apply_transfer(mu, P, [](cplx z) { return cplx(z.real()); }, 1, all);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        lhs += atoms[i].mass * lre[i].real();
        rhs += atoms[i].mass * atoms[i].z.real();
    }
    CHECK(std::abs(lhs - rhs) < 5e-3);

    // k = 2 is two single steps
    const std::function<cplx(cplx)> f = [](cplx z) { return z * z; };
    const auto two = apply_transfer(mu, P, f, 2, pts);
    const std::function<cplx(cplx)> Lf = [&](cplx z) { return apply_transfer(mu, P, f, 1, {z})[0]; };
    const auto twice = apply_transfer(mu, P, Lf, 1, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(std::abs(two[i] - twice[i]) < 1e-12 * std::abs(two[i]) + 1e-15);
}

TEST_CASE("distortion lemma suite") {
    const auto rows = lemma_suite(fx::dense(), fx::kDeltaDense, 6);
    CHECK(rows.size() == 9);
    for (const auto& r : rows) {
        INFO(r.lemma_id, " C=", r.fitted_constant, " worst=", r.worst_ratio);
        CHECK(r.pass);
        CHECK(std::isfinite(r.fitted_constant));
        CHECK(r.worst_ratio <= 2.0 * r.fitted_constant);
        if (r.lemma_id == "2.7") CHECK(r.fitted_constant < 10.0);
    }
}
