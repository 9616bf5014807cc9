#include "cli.hpp"

#include <filesystem>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "sfl/fourier.hpp"
#include "sfl/group_config.hpp"
#include "sfl/io.hpp"
#include "sfl/nonconc.hpp"
#include "sfl/parallel.hpp"
#include "sfl/stats.hpp"
#include "sfl/walk.hpp"

namespace sfl::cli {

using json = nlohmann::ordered_json;

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Io:
        case ErrorKind::InvalidArgument:
            return 1;
        case ErrorKind::DiscsOverlap:
        case ErrorKind::PairingViolated:
        case ErrorKind::NotEnoughDiscs:
        case ErrorKind::PoleInsideDisc:
            return 2;
        case ErrorKind::ResolutionExceeded:
            return 3;
        case ErrorKind::CostCap:
            return 4;
        default:
            return 5;
    }
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) fail(ErrorKind::InvalidArgument, "bad number in grid: " + item);
        out.push_back(v);
    }
    return out;
}

namespace {

// Loaded group with its hash; parse errors count as an invalid group.
struct Loaded {
    GroupConfig config;
    std::unique_ptr<SchottkyGroup> group;
    std::string hash;
};

struct InvalidGroup {
    std::string message;
};

Loaded load(const Options& opt) {
    Loaded l;
    try {
        l.config = load_group_config(opt.group);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Io) throw;
        throw InvalidGroup{e.what()};
    }
    l.hash = hash_hex(group_hash(l.config));
    try {
        l.group = std::make_unique<SchottkyGroup>(l.config);
    } catch (const Error& e) {
        if (exit_code(e.kind()) == 2 || e.kind() == ErrorKind::InvalidArgument) throw InvalidGroup{e.what()};
        throw;
    }
    return l;
}

using Params = std::vector<std::pair<std::string, std::string>>;

std::string fmt_grid(const std::vector<double>& g) {
    std::string s;
    for (std::size_t i = 0; i < g.size(); ++i) s += (i ? ";" : "") + format_double(g[i]);
    return s;
}

json meta_json(const std::string& hash, const Params& params) {
    json p = json::object();
    for (const auto& [k, v] : params) p[k] = v;
    return json{{"artifact_version", kArtifactVersion}, {"group_hash", hash}, {"params", p}};
}

std::string path_in(const Options& opt, const std::string& name) {
    return (std::filesystem::path(opt.out) / name).string();
}

void prepare_out(const Options& opt) {
    std::error_code ec;
    std::filesystem::create_directories(opt.out, ec);
    if (ec) fail(ErrorKind::Io, "cannot create output directory " + opt.out);
}

void write_json(const Options& opt, const std::string& name, const json& j) {
    write_file(path_in(opt, name), j.dump(2) + "\n");
    spdlog::info("wrote {}", path_in(opt, name));
}

void write_csv(const Options& opt, const std::string& name, const std::string& hash, const Params& params,
               const std::vector<std::string>& columns, const std::vector<std::vector<std::string>>& rows) {
    write_file(path_in(opt, name), csv_text(Metadata{hash, params}, columns, rows));
    spdlog::info("wrote {}", path_in(opt, name));
}

json doubles(const std::vector<double>& v) { return json(v); }

int cmd_validate(const Options& opt, std::ostream& out) {
    const Loaded l = load(opt);
    const SchottkyGroup& G = *l.group;
    json residuals = json::array();
    for (int i = 0; i < G.r(); ++i) residuals.push_back(G.pairing_residual(i));
    json rep{{"valid", true},
             {"group_hash", l.hash},
             {"r", G.r()},
             {"pairing_residuals", residuals},
             {"separation", G.separation()},
             {"fuchsian_like", G.fuchsian_like()}};
    out << rep.dump(2) << "\n";
    return 0;
}

double delta_of(const SchottkyGroup& G, int depth) { return estimate_delta(G, std::min(depth, 12)); }

int cmd_delta(const Options& opt) {
    const Loaded l = load(opt);
    const SchottkyGroup& G = *l.group;
    const double delta = delta_of(G, opt.depth);
    const SpectralEstimate e = TransferMatrix(G, opt.depth).spectral_radius(delta);
    spdlog::info("delta = {}", delta);
    const Params params{{"command", "delta"}, {"depth", std::to_string(opt.depth)}};
    write_json(opt, "delta.json",
               json{{"meta", meta_json(l.hash, params)},
                    {"delta", delta},
                    {"depth", opt.depth},
                    {"spectral_radius_lower", e.lower},
                    {"spectral_radius_upper", e.upper}});
    return 0;
}

int cmd_measure(const Options& opt) {
    const Loaded l = load(opt);
    const SchottkyGroup& G = *l.group;
    const double delta = delta_of(G, opt.depth);
    const PSMeasure mu(G, delta, opt.depth);
    std::vector<std::vector<std::string>> rows;
    const auto& atoms = mu.discrete().atoms;
    for (std::size_t i = 0; i < atoms.size(); ++i)
        rows.push_back({word_to_string(G.word_at(opt.depth, i)), format_double(atoms[i].z.real()),
                        format_double(atoms[i].z.imag()), format_double(atoms[i].mass)});
    const Params params{{"command", "measure"}, {"depth", std::to_string(opt.depth)}, {"delta", format_double(delta)}};
    write_csv(opt, "measure.csv", l.hash, params, {"word", "re", "im", "mass"}, rows);
    return 0;
}

int cmd_partition(const Options& opt) {
    const Loaded l = load(opt);
    const SchottkyGroup& G = *l.group;
    const double delta = delta_of(G, opt.depth);
    const PSMeasure mu(G, delta, opt.depth);
    const Partition Z = build_partition(mu, opt.tau);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < Z.words.size(); ++i)
        rows.push_back({word_to_string(Z.words[i]), format_double(Z.masses[i])});
    const Params params{{"command", "partition"},
                        {"depth", std::to_string(opt.depth)},
                        {"tau", format_double(opt.tau)},
                        {"delta", format_double(delta)}};
    write_csv(opt, "partition.csv", l.hash, params, {"word", "mass"}, rows);
    return 0;
}

int cmd_fourier(const Options& opt) {
    const Loaded l = load(opt);
    const SchottkyGroup& G = *l.group;
    const double delta = delta_of(G, opt.depth);
    const PSMeasure mu(G, delta, opt.depth);
    const double need = kResolutionGuard / opt.tmax;
    const DiscreteMeasure fine = mu.discrete().resolution <= need ? mu.discrete() : mu.refined(need);
    const auto dirs = unit_directions(64);
    const auto tgrid = log_space(opt.tmin, opt.tmax, opt.tsteps);
    const DecayFit fit = fit_decay(fine, dirs, tgrid, opt.seed);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t q = 0; q < tgrid.size(); ++q)
        for (std::size_t j = 0; j < dirs.size(); ++j) {
            const cplx v = fit.values[q * dirs.size() + j];
            rows.push_back({format_double(tgrid[q]), format_double(std::arg(dirs[j])), format_double(v.real()),
                            format_double(v.imag()), format_double(std::abs(v))});
        }
    const Params params{{"command", "fourier"},  {"depth", std::to_string(opt.depth)},
                        {"tmin", format_double(opt.tmin)}, {"tmax", format_double(opt.tmax)},
                        {"tsteps", std::to_string(opt.tsteps)}, {"seed", std::to_string(opt.seed)},
                        {"delta", format_double(delta)}};
    write_csv(opt, "fourier.csv", l.hash, params, {"t", "theta", "re", "im", "abs"}, rows);
    json j{{"meta", meta_json(l.hash, params)},
           {"epsilon", fit.epsilon},
           {"ci", {fit.ci_lo, fit.ci_hi}},
           {"t", doubles(fit.t)},
           {"sup_abs", doubles(fit.sup_abs)},
           {"atoms", fine.atoms.size()},
           {"resolution", fine.resolution}};
    if (G.fuchsian_like()) {
        try {
            const NonDecayReport nd = fuchsian_nondecay_check(mu.discrete());
            j["nondecay"] = json{{"scales", doubles(nd.scales)},
                                 {"abs_imaginary", doubles(nd.abs_imaginary)},
                                 {"abs_real", doubles(nd.abs_real)},
                                 {"total_mass", nd.total_mass},
                                 {"pass", nd.pass}};
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::SupportNotOnLine) throw;
            j["nondecay"] = json{{"skipped", e.what()}};
        }
    }
    write_json(opt, "fourier.json", j);
    return 0;
}

int cmd_nonconc(const Options& opt) {
    const Loaded l = load(opt);
    const SchottkyGroup& G = *l.group;
    const double delta = delta_of(G, opt.depth);
    const PSMeasure mu(G, delta, opt.depth);
    const Partition Z = build_partition(mu, opt.tau);
    const double tau1 = std::sqrt(opt.tau);
    const std::vector<double> grid = opt.sigma_grid.empty() ? log_space(1.05 * tau1, 0.9, 8) : opt.sigma_grid;
    const auto family = lambda_family(G, Z, opt.k, 20, opt.seed);
    const KappaFit kf = fit_kappa(family, grid, opt.tau, opt.seed);
    const cplx z0 = G.disc(0).center;
    const Word a{0};
    const TripleSweep ts = triple_count(mu, a, opt.tau, tau1, grid, z0, opt.seed);
    const CocycleCounts cc = cocycle_count_helpers(mu, a, opt.tau, tau1, grid, z0, opt.seed);
    const double base = std::pow(opt.tau, -3.0 * delta) * std::pow(tau1, -delta);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t q = 0; q < grid.size(); ++q)
        rows.push_back({format_double(grid[q]), format_double(ts.count[q]),
                        format_double(base * std::pow(grid[q], ts.epsilon)), format_double(ts.bound_ratio[q])});
    const Params params{{"command", "nonconc"},       {"depth", std::to_string(opt.depth)},
                        {"tau", format_double(opt.tau)}, {"k", std::to_string(opt.k)},
                        {"sigma_grid", fmt_grid(grid)}, {"seed", std::to_string(opt.seed)},
                        {"delta", format_double(delta)}};
    write_csv(opt, "nonconc.csv", l.hash, params, {"sigma", "count", "bound", "ratio"}, rows);
    json j{{"meta", meta_json(l.hash, params)},
           {"partition_size", Z.words.size()},
           {"kappa", json{{"value", kf.kappa}, {"ci", {kf.ci_lo, kf.ci_hi}}, {"worst", doubles(kf.worst)}}},
           {"triple",
            json{{"epsilon", ts.epsilon}, {"ci", {ts.ci_lo, ts.ci_hi}}, {"total", ts.total}, {"count", doubles(ts.count)}}},
           {"pole_pairs", json{{"exponent", cc.pole_exponent}, {"constant", cc.pole_constant}, {"max", doubles(cc.pole_max)}}},
           {"derivative_pairs",
            json{{"exponent", cc.deriv_exponent}, {"constant", cc.deriv_constant}, {"count", doubles(cc.deriv_count)}}}};
    write_json(opt, "nonconc.json", j);
    return 0;
}

int cmd_walk(const Options& opt) {
    const Loaded l = load(opt);
    const SchottkyGroup& G = *l.group;
    const double delta = delta_of(G, opt.depth);
    const PSMeasure mu(G, delta, opt.depth);
    WalkParams wp;
    wp.c0 = opt.c0;
    wp.beta = opt.beta;
    wp.delta = delta;
    wp.grid_depth = opt.depth;
    const WalkState st = run_iteration(G, wp, opt.stages);
    const StationarityReport sr = stationarity_residual(st, mu.discrete());
    const MomentReport mr = exponential_moment(st, opt.eps1);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t n = 0; n < st.shells.size(); ++n)
        for (std::size_t m = 0; m < st.shells[n].members.size(); ++m) {
            const AtlasEntry& e = st.shells[n].members[m];
            rows.push_back({word_to_string(e.word), format_double(e.kappa), format_double(e.r),
                            format_double(st.nu[n][m])});
        }
    const Params params{{"command", "walk"},
                        {"depth", std::to_string(opt.depth)},
                        {"stages", std::to_string(opt.stages)},
                        {"c0", format_double(st.params.c0)},
                        {"beta", format_double(opt.beta)},
                        {"eps1", format_double(opt.eps1)},
                        {"delta", format_double(delta)}};
    write_csv(opt, "walk.csv", l.hash, params, {"word", "kappa", "r_gamma", "nu_weight"}, rows);
    json sizes = json::array();
    for (const auto& s : st.shells) sizes.push_back(s.members.size());
    json j{{"meta", meta_json(l.hash, params)},
           {"stage", st.stage},
           {"params", json{{"c0", st.params.c0}, {"beta", st.params.beta}, {"delta", delta}, {"grid_depth", opt.depth}}},
           {"grid_points", st.grid.size()},
           {"shell_sizes", sizes},
           {"c7", doubles(st.c7)},
           {"r_max", doubles(st.r_max)},
           {"residuals",
            json{{"pointwise", sr.pointwise}, {"max_R", sr.max_R}, {"ledger", sr.ledger}, {"weak", doubles(sr.weak)}}},
           {"moment", json{{"eps1", mr.eps1},
                           {"decay_constant", mr.decay_constant},
                           {"shell_sums", doubles(mr.shell_sums)},
                           {"ratios", doubles(mr.ratios)},
                           {"envelope", doubles(mr.envelope)},
                           {"summable", mr.summable}}}};
    write_json(opt, "walk.json", j);
    return 0;
}

int cmd_lemmas(const Options& opt) {
    const Loaded l = load(opt);
    const SchottkyGroup& G = *l.group;
    const double delta = delta_of(G, opt.depth + 2);
    const auto reports = lemma_suite(G, delta, opt.depth, opt.seed);
    json arr = json::array();
    for (const auto& r : reports)
        arr.push_back(json{{"lemma", r.lemma_id},
                           {"fitted_constant", r.fitted_constant},
                           {"worst_ratio", r.worst_ratio},
                           {"pass", r.pass}});
    const Params params{{"command", "lemmas"},
                        {"depth", std::to_string(opt.depth)},
                        {"seed", std::to_string(opt.seed)},
                        {"delta", format_double(delta)}};
    write_json(opt, "lemmas.json", json{{"meta", meta_json(l.hash, params)}, {"reports", arr}});
    return 0;
}

}  // namespace

int run(const Options& opt, std::ostream& out, std::ostream& err) {
    try {
        set_thread_count(opt.threads);
        if (opt.command == "validate") return cmd_validate(opt, out);
        prepare_out(opt);
        if (opt.command == "delta") return cmd_delta(opt);
        if (opt.command == "measure") return cmd_measure(opt);
        if (opt.command == "partition") return cmd_partition(opt);
        if (opt.command == "fourier") return cmd_fourier(opt);
        if (opt.command == "nonconc") return cmd_nonconc(opt);
        if (opt.command == "walk") return cmd_walk(opt);
        if (opt.command == "lemmas") return cmd_lemmas(opt);
        err << "unknown command: " << opt.command << "\n";
        return 1;
    } catch (const InvalidGroup& g) {
        err << "invalid group: " << g.message << "\n";
        return 2;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace sfl::cli
