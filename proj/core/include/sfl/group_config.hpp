#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sfl/moebius.hpp"

namespace sfl {

// Disc data for a classical Schottky group. Generator i (0-based) maps the
// exterior of discs[i + r] onto discs[i].
struct GroupConfig {
    int r = 0;
    std::vector<Disc> discs;
    // rows (a_re, a_im, b_re, b_im, c_re, c_im, d_re, d_im)
    std::optional<std::vector<std::array<double, 8>>> generators;
    std::optional<std::vector<double>> twists;
    std::optional<double> delta_hint;
};

GroupConfig parse_group_config(const std::string& json_text);
std::string dump_group_config(const GroupConfig& config);
GroupConfig load_group_config(const std::string& path);
void save_group_config(const GroupConfig& config, const std::string& path);

// FNV-1a over the canonical JSON text.
std::uint64_t group_hash(const GroupConfig& config);
std::string hash_hex(std::uint64_t h);

// Bundled reference groups: four discs with real centres, paired across 0.
GroupConfig fuchsian4();
GroupConfig dense4();

}  // namespace sfl
