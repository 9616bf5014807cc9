#pragma once

#include <cstdint>
#include <vector>

#include "sfl/fourier.hpp"

namespace sfl {

// Point masses at the rescaled derivatives zeta_{j,A}(b), each of mass tau^delta.
struct LambdaMeasure {
    std::vector<cplx> atoms;
    double atom_mass = 0.0;

    double total_mass() const { return atom_mass * static_cast<double>(atoms.size()); }
};

LambdaMeasure lambda_measure(const ZetaTable& zt, int j, double delta);
// lambda_j for j = 1..k over `n_tuples` random A drawn from Z(tau).
std::vector<LambdaMeasure> lambda_family(const SchottkyGroup& G, const Partition& Z, int k, int n_tuples,
                                         std::uint64_t seed);

inline constexpr int kLineAngles = 256;

// sup over lines {|Re(e^{i theta} z) - a| <= sigma} of the lambda mass
double line_concentration(const LambdaMeasure& lam, double sigma, int n_angles = kLineAngles);

struct KappaFit {
    double kappa = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::vector<double> sigma;
    std::vector<double> worst;  // max over the family at each sigma
};

// tau > 0 restricts the grid to (tau^{1/2}, 1).
KappaFit fit_kappa(const std::vector<LambdaMeasure>& family, const std::vector<double>& sigma_grid, double tau = 0.0,
                   std::uint64_t seed = 1);

// det of the rows (Re u_i, Im u_i, 1)
double det3(cplx u1, cplx u2, cplx u3);
// Im-parts of conj(u_1) u_2 + conj(u_2) u_3 + conj(u_3) u_1, i.e. the wedge sum
double wedge_sum(cplx u1, cplx u2, cplx u3);
double det4(const MoebiusMap& g1, const MoebiusMap& g2, const MoebiusMap& g3, cplx z);

struct TripleSweep {
    std::vector<double> sigma;
    std::vector<double> count;
    std::vector<double> bound_ratio;  // count / (tau^{-3 delta} tau1^{-delta} sigma^eps)
    double total = 0.0;               // admissible tuples
    double epsilon = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

// Counts (b, c, d, e) with a ~> b, c, d ~> e ~> z0 and
// |det(g_{a'b'}, g_{a'c'}, g_{a'd'}, g_{e'} z0)| <= |g_a|^{-4} tau^2 sigma.
// tau1 <= 0 means tau^{1/2}.
TripleSweep triple_count(const PSMeasure& mu, const Word& a, double tau, double tau1,
                         const std::vector<double>& sigma_grid, cplx z0, std::uint64_t seed = 1);

struct Line {
    cplx normal{1.0, 0.0};  // unit
    double offset = 0.0;    // l = {x : <normal, x> = offset}
};

struct WedgeReport {
    double bound = 0.0;  // C = max |X|
    double lhs = 0.0;    // P{d(X, l) < c}
    double rhs = 0.0;    // P{|wedge| < 8 C c}
    double tolerance = 0.0;
    bool exact = false;
    bool pass = false;
};

WedgeReport wedge_inequality_check(const std::vector<cplx>& samples, const Line& line, double c,
                                   std::uint64_t seed = 1);

// sum c_{j,l} z^j conj(z)^l over j + l <= degree
class RealPolynomial {
public:
    explicit RealPolynomial(int degree);
    // coefficient table [j][l]; conjugation symmetry is checked
    explicit RealPolynomial(std::vector<std::vector<cplx>> coefficients);

    int degree() const { return degree_; }
    cplx coef(int j, int l) const { return c_[j][l]; }
    void set(int j, int l, cplx value);  // also sets the conjugate entry
    double height() const;
    cplx eval_complex(cplx z) const;
    double eval(cplx z) const { return eval_complex(z).real(); }
    bool hermitian(double tol) const;

private:
    int degree_;
    std::vector<std::vector<cplx>> c_;
};

// Q(z) = P(g z) |c z + d|^{2n}, a real polynomial of degree 2n
RealPolynomial pullback(const RealPolynomial& P, const MoebiusMap& g);
// Random P of the given degree with h(P) = 1.
RealPolynomial random_polynomial(int degree, std::mt19937_64& rng);

// mu{z : |P(z)| <= r h(P)}
double poly_sublevel(const DiscreteMeasure& mu, const RealPolynomial& P, double r);

// Slope of log max_P mu{|P| <= r h(P)} against log r.
KappaFit fit_poly_kappa(const DiscreteMeasure& mu, const std::vector<RealPolynomial>& family,
                        const std::vector<double>& r_grid, std::uint64_t seed = 1);

struct CocycleCounts {
    std::vector<double> sigma;
    // pole pairs |g_{a'b'}^{-1}(inf) - g_{a'c'}^{-1}(inf)| <= sigma
    std::vector<double> pole_mean;  // per b
    std::vector<double> pole_max;
    std::vector<double> pole_ratio;  // pole_max / (tau^{-delta} sigma^delta)
    double pole_exponent = 0.0;
    double pole_constant = 0.0;
    // real parts |Re(g'_{a'b'}(w) - g'_{a'c'}(w))| <= |g_a|^{-2} tau sigma, w = g_{d'} z0
    std::vector<double> deriv_count;
    std::vector<double> deriv_ratio;  // / (tau^{-2 delta} tau1^{-delta} sigma^eps)
    double deriv_exponent = 0.0;
    double deriv_constant = 0.0;
};

CocycleCounts cocycle_count_helpers(const PSMeasure& mu, const Word& a, double tau, double tau1,
                                    const std::vector<double>& sigma_grid, cplx z0, std::uint64_t seed = 1);

}  // namespace sfl
