#pragma once

#include <string>
#include <utility>
#include <vector>

namespace sfl {

inline constexpr const char* kArtifactVersion = "sfl-1.0.0";

// Shortest text that reads back to the same double.
std::string format_double(double x);

struct Metadata {
    std::string group_hash;
    std::vector<std::pair<std::string, std::string>> params;
};

// '#'-prefixed metadata lines, then a header row and the data rows.
std::string csv_text(const Metadata& meta, const std::vector<std::string>& columns,
                     const std::vector<std::vector<std::string>>& rows);

// Throws Io on failure.
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace sfl
