#include "sfl/group_config.hpp"

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "sfl/error.hpp"

namespace sfl {

using nlohmann::json;

namespace {

double number(const json& j, const char* what) {
    if (!j.is_number()) fail(ErrorKind::InvalidArgument, std::string("expected a number for ") + what);
    return j.get<double>();
}

}  // namespace

GroupConfig parse_group_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::InvalidArgument, std::string("malformed group JSON: ") + e.what());
    }
    if (!j.is_object()) fail(ErrorKind::InvalidArgument, "group config must be an object");
    GroupConfig c;
    if (!j.contains("r") || !j["r"].is_number_integer()) fail(ErrorKind::InvalidArgument, "missing integer r");
    c.r = j["r"].get<int>();
    if (!j.contains("discs") || !j["discs"].is_array()) fail(ErrorKind::InvalidArgument, "missing discs");
    for (const auto& d : j["discs"]) {
        if (!d.contains("center") || !d["center"].is_array() || d["center"].size() != 2 || !d.contains("radius"))
            fail(ErrorKind::InvalidArgument, "disc needs center [re, im] and radius");
        c.discs.push_back(Disc{cplx(number(d["center"][0], "center"), number(d["center"][1], "center")),
                               number(d["radius"], "radius")});
    }
    if (j.contains("generators")) {
        std::vector<std::array<double, 8>> gens;
        for (const auto& g : j["generators"]) {
            if (!g.is_array() || g.size() != 8) fail(ErrorKind::InvalidArgument, "generator needs 8 reals");
            std::array<double, 8> row{};
            for (int k = 0; k < 8; ++k) row[k] = number(g[k], "generator");
            gens.push_back(row);
        }
        c.generators = gens;
    }
    if (j.contains("twists")) {
        std::vector<double> t;
        for (const auto& x : j["twists"]) t.push_back(number(x, "twist"));
        c.twists = t;
    }
    if (j.contains("delta_hint")) c.delta_hint = number(j["delta_hint"], "delta_hint");
    return c;
}

std::string dump_group_config(const GroupConfig& c) {
    json j;
    j["r"] = c.r;
    json discs = json::array();
    for (const auto& d : c.discs)
        discs.push_back({{"center", {d.center.real(), d.center.imag()}}, {"radius", d.radius}});
    j["discs"] = discs;
    if (c.generators) j["generators"] = *c.generators;
    if (c.twists) j["twists"] = *c.twists;
    if (c.delta_hint) j["delta_hint"] = *c.delta_hint;
    return j.dump(2) + "\n";
}

GroupConfig load_group_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_group_config(ss.str());
}

void save_group_config(const GroupConfig& config, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write " + path);
    out << dump_group_config(config);
    if (!out) fail(ErrorKind::Io, "write failed for " + path);
}

std::uint64_t group_hash(const GroupConfig& config) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : dump_group_config(config)) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

GroupConfig fuchsian4() {
    GroupConfig c;
    c.r = 2;
    c.discs = {Disc{{-1.5, 0.0}, 0.4}, Disc{{0.5, 0.0}, 0.4}, Disc{{-0.5, 0.0}, 0.4}, Disc{{1.5, 0.0}, 0.4}};
    c.twists = std::vector<double>{0.0, 0.0};
    return c;
}

GroupConfig dense4() {
    GroupConfig c = fuchsian4();
    c.twists = std::vector<double>{0.7, -0.4};
    return c;
}

}  // namespace sfl
