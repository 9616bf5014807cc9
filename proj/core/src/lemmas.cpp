#include <algorithm>
#include <cmath>
#include <random>

#include "sfl/error.hpp"
#include "sfl/thermo.hpp"

namespace sfl {

namespace {

// two-sided constant: smallest C with ratio in [1/C, C]
struct Spread {
    double lo = HUGE_VAL, hi = 0.0;
    void add(double r) {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    double two_sided() const { return std::max(hi, 1.0 / lo); }
};

struct RandomDisc {
    cplx center;
    double sigma;
};

struct Stats {
    double lip = 0.0;          // 2.1
    Spread deriv_norm;         // 2.4
    Spread mass_deriv;         // 2.5
    double parent_child = 0.0; // 2.6
    bool child_le_parent = true;
    Spread concat;             // 2.7
    Spread reversal;           // 2.8
    bool norm_symmetry = true;
    double upper_density = 0.0;  // 2.11
    double tree = 0.0;           // 2.12
    double contraction = 0.0;    // max child/parent
};

Stats collect(const SchottkyGroup& G, const PSMeasure& mu, const std::vector<RandomDisc>& discs) {
    Stats st;
    const int L = mu.depth();
    const double delta = mu.delta();
    std::vector<std::vector<Word>> by_len(L + 1);
    for (int n = 1; n <= L; ++n) by_len[n] = G.words(n);

    for (int n = 1; n <= L; ++n) {
        for (const Word& a : by_len[n]) {
            const double ma = mu.mass(a);
            if (n >= 2) {
                const MoebiusMap g = G.matrix_of(drop_last(a));
                const Disc& base = G.disc(a.back());
                const double ns = g.norm_S();
                for (int k = 0; k < 4; ++k) {
                    const cplx z = base.center + 0.9 * base.radius * std::polar(1.0, 1.5707963267948966 * k);
                    const cplx w = base.center - 0.45 * base.radius * std::polar(1.0, 1.5707963267948966 * k + 0.3);
                    st.lip = std::max(st.lip, std::abs(derivative(g, z) - derivative(g, w)) / std::abs(z - w));
                    st.deriv_norm.add(std::abs(derivative(g, z)) * ns * ns);
                }
                st.mass_deriv.add(ma / std::pow(std::abs(derivative(g, base.center)), delta));
            }
            if (n < L) {
                for (int e = 0; e < G.letters(); ++e) {
                    if (e == G.inverse_letter(a.back())) continue;
                    Word c = a;
                    c.push_back(e);
                    const double mc = mu.mass(c);
                    if (mc > ma * (1.0 + 1e-12)) st.child_le_parent = false;
                    st.parent_child = std::max(st.parent_child, ma / mc);
                    st.contraction = std::max(st.contraction, mc / ma);
                }
            }
            const Word abar = G.inverse_word(a);
            st.reversal.add(mu.mass(abar) / ma);
            const double s1 = G.matrix_of(a).norm_S(), s2 = G.matrix_of(abar).norm_S();
            if (std::abs(s1 - s2) > 1e-12 * std::max(1.0, s1)) st.norm_symmetry = false;
        }
    }
    // concatenation over a ~> b with |a'b| <= L
    for (int p = 1; p <= L; ++p)
        for (int q = 1; p + q - 1 <= L; ++q)
            for (const Word& a : by_len[p])
                for (const Word& b : by_len[q]) {
                    if (a.back() != b.front()) continue;
                    const Word ab = concat(drop_last(a), b);
                    st.concat.add(mu.mass(ab) / (mu.mass(a) * mu.mass(b)));
                }
    // upper density on random discs
    const auto& atoms = mu.discrete().atoms;
    for (const auto& d : discs) {
        double m = 0.0;
        for (const auto& at : atoms)
            if (std::abs(at.z - d.center) <= d.sigma) m += at.mass;
        st.upper_density = std::max(st.upper_density, m / std::pow(d.sigma, delta));
    }
    // tree count below words of length <= 2 at levels above the finest cell mass
    const double floor_level = 2.0 * mu.max_cell_mass();
    for (int n = 1; n <= std::min(2, L - 1); ++n)
        for (const Word& b : by_len[n]) {
            const double mb = mu.mass(b);
            for (double level = floor_level; level < mb; level *= 2.0) {
                std::size_t count = 0;
                std::vector<Word> stack{b};
                while (!stack.empty()) {
                    Word a = std::move(stack.back());
                    stack.pop_back();
                    if (mu.mass(a) < level) continue;
                    ++count;
                    if (static_cast<int>(a.size()) >= L) continue;
                    for (int e = 0; e < G.letters(); ++e) {
                        if (e == G.inverse_letter(a.back())) continue;
                        Word c = a;
                        c.push_back(e);
                        stack.push_back(std::move(c));
                    }
                }
                st.tree = std::max(st.tree, count * level / mb);
            }
        }
    return st;
}

}  // namespace

std::vector<LemmaReport> lemma_suite(const SchottkyGroup& G, double delta, int depth, std::uint64_t seed) {
    if (depth < 2) fail(ErrorKind::InvalidArgument, "lemma_suite needs depth >= 2");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<RandomDisc> discs;
    for (int k = 0; k < 1000; ++k) {
        const int j = static_cast<int>(unif(rng) * G.letters()) % G.letters();
        const Disc& D = G.disc(j);
        const double sigma = D.radius * std::pow(10.0, -3.0 + 2.7 * unif(rng));
        const double rad = (D.radius - sigma) * std::sqrt(unif(rng));
        discs.push_back({D.center + std::polar(rad, 6.283185307179586 * unif(rng)), sigma});
    }
    const PSMeasure fit_mu(G, delta, depth);
    const PSMeasure test_mu(G, delta, depth + 2);
    const Stats f = collect(G, fit_mu, discs);
    const Stats t = collect(G, test_mu, discs);
    auto row = [](const char* id, double fitted, double worst, bool extra = true) {
        return LemmaReport{id, fitted, worst, extra && std::isfinite(worst) && worst <= 2.0 * fitted};
    };
    std::vector<LemmaReport> out;
    out.push_back(row("2.1", f.lip, t.lip));
    out.push_back(row("2.4", f.deriv_norm.two_sided(), t.deriv_norm.two_sided()));
    out.push_back(row("2.5", f.mass_deriv.two_sided(), t.mass_deriv.two_sided()));
    out.push_back(row("2.6", f.parent_child, t.parent_child, f.child_le_parent && t.child_le_parent));
    out.push_back(row("2.7", f.concat.two_sided(), t.concat.two_sided()));
    out.push_back(row("2.8", f.reversal.two_sided(), t.reversal.two_sided(), f.norm_symmetry && t.norm_symmetry));
    out.push_back(row("2.11", f.upper_density, t.upper_density));
    out.push_back(row("2.12", f.tree, t.tree));
    out.push_back(row("contraction", 1.0 / (1.0 - f.contraction), 1.0 / (1.0 - t.contraction)));
    return out;
}

}  // namespace sfl
