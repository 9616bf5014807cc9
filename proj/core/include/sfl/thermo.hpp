#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sfl/schottky.hpp"

namespace sfl {

struct Atom {
    cplx z;
    double mass = 0.0;
};

struct DiscreteMeasure {
    std::vector<Atom> atoms;
    double total_mass = 0.0;
    // largest diameter of the cells the atoms stand for
    double resolution = 0.0;

    static DiscreteMeasure make(std::vector<Atom> atoms, double resolution);
};

struct SpectralEstimate {
    double lower = 0.0;  // Collatz-Wielandt bounds
    double upper = 0.0;
    double value() const { return 0.5 * (lower + upper); }
};

// Sparse discretized transfer operator on the depth-n anchors. Row b has one
// entry per letter j with j b_1 reduced, column (j, b_1 ... b_{n-1}), weight
// |gamma_j'(x_b)|_{S^2}^s.
class TransferMatrix {
public:
    TransferMatrix(const SchottkyGroup& G, int depth);

    int depth() const { return depth_; }
    std::size_t size() const { return rows_; }
    int row_width() const { return width_; }
    std::uint32_t column(std::size_t row, int k) const { return cols_[row * width_ + k]; }
    double log_weight(std::size_t row, int k) const { return logw_[row * width_ + k]; }

    // Power iteration from `warm` (updated in place when given).
    SpectralEstimate spectral_radius(double s, std::vector<double>* warm = nullptr) const;
    // mu_a = sum_b mu_b M[b][a], normalized to sum 1
    std::vector<double> left_eigenvector(double s) const;
    bool strongly_connected() const;

private:
    int depth_ = 0;
    int width_ = 0;
    std::size_t rows_ = 0;
    std::vector<std::uint32_t> cols_;
    std::vector<double> logw_;
};

// Bisection on [0.01, 1.99] for spectral radius 1.
double estimate_delta(const SchottkyGroup& G, int depth, double tol = 1e-10);

class PSMeasure {
public:
    PSMeasure(const SchottkyGroup& G, double delta, int depth);

    const SchottkyGroup& group() const { return *G_; }
    double delta() const { return delta_; }
    int depth() const { return depth_; }

    // mu(D_w) for 1 <= |w| <= depth; ResolutionExceeded beyond.
    double mass(const Word& w) const;
    const std::vector<double>& cell_masses() const { return masses_; }
    const DiscreteMeasure& discrete() const { return discrete_; }
    double max_cell_mass() const;
    double min_cell_mass() const;

    // Splits cells until every cylinder diameter is <= max_diam. Masses of
    // deeper cylinders follow mu(D_{uv}) ~ |gamma_u'(x_v)|^delta mu(D_v),
    // renormalized within each parent so cell additivity stays exact.
    DiscreteMeasure refined(double max_diam, std::size_t max_atoms = 4000000) const;

    // Random limit points drawn from the measure (descend by mass, then refine
    // by the conformal rule down to max_diam).
    std::vector<cplx> sample(std::size_t n, std::uint64_t seed, double max_diam) const;

private:
    const SchottkyGroup* G_;
    double delta_;
    int depth_;
    std::vector<double> masses_;
    std::vector<double> prefix_;
    DiscreteMeasure discrete_;
};

PSMeasure ps_measure(const SchottkyGroup& G, double delta, int depth);

struct Partition {
    double tau = 0.0;
    double delta = 0.0;
    std::vector<Word> words;
    std::vector<double> masses;
};

// Z(tau): descend from single letters while mu(D_a) > tau^delta.
Partition build_partition(const PSMeasure& mu, double tau);

struct Band {
    double C = 1.0;
    double tau = 0.0;
    std::vector<Word> words;
    // smallest l with every element = (element of Z(C^{1/delta} tau)) * (word of length <= l)
    int inclusion_length = 0;
    bool inclusion_ok = false;
};

// Z(C, tau): all words with C^{-1} tau^delta <= mu(D_b) <= C tau^delta.
Band band(const PSMeasure& mu, double C, double tau);

// Values of L^k f at the given points (each must lie in some base disc).
std::vector<cplx> apply_transfer(const PSMeasure& mu, const Partition& P, const std::function<cplx(cplx)>& f,
                                 int k, const std::vector<cplx>& points);

struct LemmaReport {
    std::string lemma_id;
    double fitted_constant = 0.0;
    double worst_ratio = 0.0;
    bool pass = false;
};

// Constants fitted on words of length <= depth with the depth-`depth` measure,
// re-tested on length <= depth + 2 with the depth + 2 measure; pass when the
// re-test stays within twice the fitted constant.
std::vector<LemmaReport> lemma_suite(const SchottkyGroup& G, double delta, int depth, std::uint64_t seed = 1);

}  // namespace sfl
