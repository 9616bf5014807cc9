#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "sfl/thermo.hpp"

namespace sfl {

// phase error per cell allowed by the resolution guard
inline constexpr double kResolutionGuard = 0.1;

// <xi, x> = Re xi Re x + Im xi Im x
cplx mu_hat(const DiscreteMeasure& mu, cplx xi);
// Same sum without the resolution guard.
cplx mu_hat_unguarded(const DiscreteMeasure& mu, cplx xi);

// Real phase with its gradient written as the complex number d/dx + i d/dy.
struct Phase {
    std::function<double(cplx)> value;
    std::function<cplx(cplx)> gradient;

    static Phase linear(cplx theta);
    // <theta, m(z)> for a Moebius map m holomorphic near the limit set
    static Phase moebius(cplx theta, const MoebiusMap& m);
};

struct OscillatorySpec {
    Phase phase;
    std::function<cplx(cplx)> amplitude;
    double t = 0.0;
};

struct OscillatoryResult {
    cplx value;
    double grad_inf = 0.0;  // M, sampled on the atoms
    double grad_sup = 0.0;
};

OscillatoryResult oscillatory_integral(const DiscreteMeasure& mu, const OscillatorySpec& spec);

// m unit directions with angles pi k / m, k < m
std::vector<cplx> unit_directions(int m);

struct DecayFit {
    double epsilon = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::vector<double> t;
    std::vector<double> sup_abs;
    // full sweep, row-major [t][direction]
    std::vector<cplx> values;
};

DecayFit fit_decay(const DiscreteMeasure& mu, const std::vector<cplx>& directions, const std::vector<double>& t_grid,
                   std::uint64_t seed = 1);

struct NonDecayReport {
    std::vector<double> scales;
    std::vector<double> abs_imaginary;  // |mu_hat(i s)|
    std::vector<double> abs_real;       // |mu_hat(s)|
    double total_mass = 0.0;
    bool pass = false;
};

NonDecayReport fuchsian_nondecay_check(const DiscreteMeasure& mu_on_line,
                                       const std::vector<double>& scales = {10.0, 100.0, 1000.0});

// (k+1)-tuple A from Z(tau) and the admissible b_j for each slot.
struct TupleSystem {
    int k = 0;
    std::vector<Word> A;
    std::vector<std::vector<Word>> slots;  // slots[j-1]: a_{j-1} ~> b ~> a_j

    std::size_t tuple_count() const;
};

TupleSystem make_tuple_system(const Partition& Z, const std::vector<Word>& A);
// A * B = a_0' b_1' a_1' ... b_k' a_k'
Word star_word(const TupleSystem& ts, const std::vector<std::size_t>& choice);
// Uniform A with every slot nonempty.
std::vector<Word> random_tuple(const Partition& Z, int k, std::mt19937_64& rng);

struct ZetaTable {
    double tau = 0.0;
    std::vector<std::vector<cplx>> zeta;  // zeta[j-1][index into slots[j-1]]
};

ZetaTable make_zeta_table(const SchottkyGroup& G, const TupleSystem& ts, double tau);

struct ExpSumOptions {
    double window_C = 10.0;
    bool override_window = false;
};

struct ExpSumResult {
    cplx value;
    std::size_t terms = 0;
    bool window_violation = false;
};

ExpSumResult exponential_sum(const TupleSystem& ts, const ZetaTable& zt, cplx eta, const ExpSumOptions& opt = {});
// #{B : A <-> B} from (first, last)-letter counts of Z
std::size_t path_count(const Partition& Z, const std::vector<Word>& A);

// Mean over random A of |S(eta)| / #B, averaged over `n_args` arguments of eta.
double mean_normalized_modulus(const SchottkyGroup& G, const Partition& Z, int k, double radius, int n_tuples,
                               int n_args, std::uint64_t seed);

struct BoundChain {
    double t = 0.0;
    double tau = 0.0;
    int k = 0;
    std::size_t partition_size = 0;
    double lhs = 0.0;          // |int e^{it phi} g dmu|^2
    double rhs_os1 = 0.0;      // tau^{(2k-1) delta} sum_{A,B} |...|^2
    double const_os1 = 0.0;    // lhs / (rhs_os1 + tau^2)
    double rhs_comsum = 0.0;   // tau^{(2k+1) delta} sum_A sup_eta |S_A(eta)|
    double const_comsum = 0.0; // lhs / (rhs_comsum + tau^{delta/4})
    double eps_sum_product = 0.0;
    double eps_tilde = 0.0;
};

double tau_from_t(double t, int k);
double predicted_exponent(double delta, int k, double eps_sum_product);
BoundChain bd_pipeline(const PSMeasure& mu, const OscillatorySpec& spec, int k, double window_C = 10.0,
                       std::uint64_t seed = 1);

}  // namespace sfl
