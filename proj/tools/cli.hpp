#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "sfl/error.hpp"

namespace sfl::cli {

struct Options {
    std::string command;
    std::string group;
    std::string out = ".";
    int depth = 8;
    double tau = 0.03125;
    double tmin = 10.0;
    double tmax = 1000.0;
    int tsteps = 24;
    int k = 1;
    std::vector<double> sigma_grid;  // empty: a default grid per command
    double c0 = 0.0;                 // 0: adaptive
    double beta = 0.4;
    double eps1 = 0.01;
    int stages = 2;
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

int exit_code(ErrorKind kind);

// Runs one subcommand; reports go to `out`, diagnostics to `err`.
int run(const Options& opt, std::ostream& out, std::ostream& err);

std::vector<double> parse_grid(const std::string& text);

}  // namespace sfl::cli
