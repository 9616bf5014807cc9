#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sfl/group_config.hpp"
#include "sfl/moebius.hpp"

namespace sfl {

// Letters are 0-based: letter j < r is generator j, letter j + r its inverse.
using Word = std::vector<int>;

// 1-based, '.'-separated; the empty word prints as "e".
std::string word_to_string(const Word& w);
Word parse_word(const std::string& s);
Word concat(const Word& a, const Word& b);
Word prefix(const Word& w, std::size_t n);
// a' : the word without its last letter
Word drop_last(const Word& w);

struct Cylinder {
    Word word;
    Disc disc;
    BoundaryPoint anchor;
};

// gamma(z) = c_in - k / (z - c_out) with k = rho_in rho_out e^{i twist}:
// inversion in the boundary of d_out, rotated, then scaled onto d_in.
MoebiusMap pair_discs(const Disc& d_out, const Disc& d_in, double twist);

class SchottkyGroup {
public:
    // Validates disjointness and the ping-pong pairing (build_group).
    explicit SchottkyGroup(const GroupConfig& config);

    const GroupConfig& config() const { return config_; }
    int r() const { return r_; }
    int letters() const { return 2 * r_; }
    int inverse_letter(int a) const { return (a + r_) % (2 * r_); }
    const Disc& disc(int letter) const { return config_.discs[letter]; }
    const MoebiusMap& generator(int letter) const { return gens_[letter]; }
    double pairing_residual(int i) const { return residuals_[i]; }

    bool is_reduced(const Word& w) const;
    MoebiusMap matrix_of(const Word& w) const;
    Word inverse_word(const Word& w) const;

    // number of reduced words of length n
    std::size_t word_count(int n) const;
    // position of w in the lexicographic order of words of its length
    std::size_t word_index(const Word& w) const;
    Word word_at(int n, std::size_t index) const;
    std::vector<Word> words(int n) const;

    Cylinder cylinder(const Word& w) const;
    Disc cylinder_disc(const Word& w) const;
    cplx anchor(const Word& w) const;

    // Attracting fixed point of gamma_w (w cyclically reduced) or of gamma_{we}.
    BoundaryPoint limit_point(const Word& w) const;
    std::vector<BoundaryPoint> limit_points(int depth) const;

    // Fixed points of gamma_1, gamma_2, gamma_1 gamma_2 on one circle of S^2.
    bool fuchsian_like() const;
    // inf over j != l of the euclidean gap between closed discs
    double separation() const;
    // letter whose disc contains z, or -1
    int disc_containing(cplx z) const;
    // max_j sup_{z in D_j} |z|
    double disc_bound() const;

private:
    GroupConfig config_;
    int r_ = 0;
    std::vector<MoebiusMap> gens_;
    std::vector<double> residuals_;
};

SchottkyGroup build_group(const GroupConfig& config);

}  // namespace sfl
