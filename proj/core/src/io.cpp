#include "sfl/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sfl/error.hpp"

namespace sfl {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string csv_text(const Metadata& meta, const std::vector<std::string>& columns,
                     const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    out += "# artifact_version=" + std::string(kArtifactVersion) + "\n";
    out += "# group_hash=" + meta.group_hash + "\n";
    for (const auto& [k, v] : meta.params) out += "# " + k + "=" + v + "\n";
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(columns);
    for (const auto& r : rows) {
        if (r.size() != columns.size()) fail(ErrorKind::InvalidArgument, "csv row width differs from the header");
        line(r);
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorKind::Io, "cannot open " + path + " for writing");
    f << content;
    if (!f) fail(ErrorKind::Io, "write to " + path + " failed");
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(ErrorKind::Io, "cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace sfl
