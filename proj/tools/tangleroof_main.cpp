#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tangleroof/error.hpp"
#include "tangleroof/invariants.hpp"
#include "tangleroof/report.hpp"
#include "tangleroof/roof_bounds.hpp"
#include "tangleroof/scenarios.hpp"
#include "tangleroof/state_io.hpp"

namespace tr = tangleroof;
using nlohmann::json;

namespace {

enum class Format { csv, json };

struct RunConfig {
    std::string command;
    std::vector<double> phi;
    int p_grid = 0;
    int phi_grid = 31;
    std::string out;
    std::optional<Format> format;
    double tol_rank = tr::kDefaultRankTol;
    double tol_root = tr::kDefaultRootTol;
    int parallelism = 1;
    std::string psi1_path;
    std::string psi2_path;
    double weight = 0.5;
    bool renormalize = false;
    bool threshold = false;
};

class Usage : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

tr::RankTwoMixture input_mixture(const RunConfig& cfg) {
    if (cfg.psi1_path.empty() && cfg.psi2_path.empty()) return tr::toy_mixture(cfg.weight);
    if (cfg.psi1_path.empty() || cfg.psi2_path.empty()) throw Usage("--psi1/--psi2: both state files are required");
    tr::StateParseOptions opts;
    opts.renormalize = cfg.renormalize;
    opts.warn = [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };
    const auto load = [&](const std::string& flag, const std::string& path) {
        try {
            return tr::load_state(path, opts);
        } catch (const tr::Error& e) {
            throw Usage(flag + ": " + e.what());
        }
    };
    tr::PureState a = load("--psi1", cfg.psi1_path);
    tr::PureState b = load("--psi2", cfg.psi2_path);
    if (a.n_qubits() != 3 || b.n_qubits() != 3) throw Usage("--psi1/--psi2: states must have n = 3");
    try {
        return tr::RankTwoMixture(std::move(a), std::move(b), cfg.weight);
    } catch (const tr::Error& e) {
        throw Usage(std::string("--psi1/--psi2: ") + e.what());
    }
}

std::vector<double> phis_or(const RunConfig& cfg, std::vector<double> fallback) {
    return cfg.phi.empty() ? fallback : cfg.phi;
}

int grid_or(const RunConfig& cfg, int fallback) { return cfg.p_grid > 0 ? cfg.p_grid : fallback; }

// N points strictly inside (0, 1).
std::vector<double> interior_grid(int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = (i + 1.0) / (n + 1.0);
    return g;
}

tr::ScanOptions scan_options(const RunConfig& cfg) { return {cfg.tol_rank, cfg.tol_root, cfg.parallelism}; }

void json_interval(json& out, const tr::ZeroAnalysis& a) {
    out["identically_zero"] = a.identically_zero;
    if (const auto iv = a.zero_interval()) {
        out["interval"] = {tr::round12(iv->first), tr::round12(iv->second)};
    } else {
        out["interval"] = nullptr;
    }
}

void run_zeros(const RunConfig& cfg, Format fmt, std::ostream& os) {
    const auto a = tr::analyze_zeros(input_mixture(cfg), cfg.tol_root);
    if (fmt == Format::json) {
        json out;
        json_interval(out, a);
        if (a.zeros) out["zeros"] = tr::to_json(*a.zeros);
        if (a.polytope) out["polytope"] = tr::to_json(*a.polytope);
        os << out.dump(2) << '\n';
        return;
    }
    tr::CsvWriter csv(os, {"index", "re", "im", "modulus", "phase", "p0", "multiplicity", "at_infinity"});
    if (!a.zeros) return;
    for (std::size_t i = 0; i < a.zeros->size(); ++i) {
        const auto& r = a.zeros->roots[i];
        csv.number(static_cast<double>(i));
        if (r.at_infinity) {
            csv.text("").text("").text("inf");
        } else {
            csv.number(r.z.real()).number(r.z.imag()).number(std::abs(r.z));
        }
        csv.number(a.zeros->phases[i]).number(a.zeros->p0[i]).number(r.multiplicity).text(r.at_infinity ? "1" : "0");
        csv.end_row();
    }
}

void run_interval(const RunConfig& cfg, Format fmt, std::ostream& os) {
    const auto a = tr::analyze_zeros(input_mixture(cfg), cfg.tol_root);
    if (fmt == Format::json) {
        json out;
        json_interval(out, a);
        if (a.interval) {
            out["axis_interval"] = tr::to_json(*a.interval);
            out["low_witness_decomposition"] = tr::to_json(a.witness_decomposition(a.interval->low_witness));
            out["high_witness_decomposition"] = tr::to_json(a.witness_decomposition(a.interval->high_witness));
        }
        os << out.dump(2) << '\n';
        return;
    }
    tr::CsvWriter csv(os, {"identically_zero", "p_low", "p_high"});
    csv.text(a.identically_zero ? "1" : "0");
    if (const auto iv = a.zero_interval()) {
        csv.number(iv->first).number(iv->second);
    } else {
        csv.text("").text("");
    }
    csv.end_row();
}

void emit_bounds(const tr::ImprovedBound& b, Format fmt, std::ostream& os, json base = json::object()) {
    if (fmt == Format::json) {
        base["linearized_knots"] = tr::to_json(b.linearized_curve);
        base["envelope_knots"] = tr::to_json(b.envelope_curve);
        base["p_left"] = b.p_left ? json(tr::round12(*b.p_left)) : json();
        base["p_right"] = b.p_right ? json(tr::round12(*b.p_right)) : json();
        json rows = json::array();
        for (std::size_t i = 0; i < b.grid.size(); ++i) {
            rows.push_back({{"p", tr::round12(b.grid[i])},
                            {"linearized", tr::round12(b.linearized[i])},
                            {"pivot", tr::round12(b.pivot[i])},
                            {"envelope", tr::round12(b.envelope[i])},
                            {"achieving_family", tr::to_string(b.achieving[i])}});
        }
        base["rows"] = std::move(rows);
        os << base.dump(2) << '\n';
        return;
    }
    tr::CsvWriter csv(os, {"p", "linearized", "pivot", "envelope", "achieving_family"});
    for (std::size_t i = 0; i < b.grid.size(); ++i) {
        csv.number(b.grid[i]).number(b.linearized[i]).number(b.pivot[i]).number(b.envelope[i]);
        csv.text(tr::to_string(b.achieving[i]));
        csv.end_row();
    }
}

tr::ImprovedBoundOptions bound_options(const RunConfig& cfg) {
    tr::ImprovedBoundOptions o;
    o.grid_points = grid_or(cfg, 401);
    o.parallelism = cfg.parallelism;
    return o;
}

void run_bounds(const RunConfig& cfg, Format fmt, std::ostream& os) {
    const auto a = tr::analyze_zeros(input_mixture(cfg), cfg.tol_root);
    json base;
    json_interval(base, a);
    emit_bounds(tr::improved_upper_bound(a, bound_options(cfg)), fmt, os, std::move(base));
}

void run_char(const RunConfig& cfg, Format fmt, std::ostream& os) {
    const auto mix = input_mixture(cfg);
    const auto grid = tr::uniform_grid(grid_or(cfg, 1001));
    const auto phis = phis_or(cfg, {std::numbers::pi, 0.0, 1.8649, -1.8649});
    if (fmt == Format::json) {
        json out = json::array();
        for (const double phi : phis) {
            json vals = json::array();
            for (const auto& [p, v] : tr::characteristic_curve(mix, phi, grid)) vals.push_back({tr::round12(p), tr::round12(v)});
            out.push_back({{"phi", tr::round12(phi)}, {"curve", std::move(vals)}});
        }
        os << out.dump(2) << '\n';
        return;
    }
    tr::CsvWriter csv(os, {"phi", "p", "c3"});
    for (const double phi : phis) {
        for (const auto& [p, v] : tr::characteristic_curve(mix, phi, grid)) {
            csv.number(phi).number(p).number(v);
            csv.end_row();
        }
    }
}

void run_scan4q(const RunConfig& cfg, Format fmt, std::ostream& os) {
    const auto opts = scan_options(cfg);
    const auto grid = interior_grid(grid_or(cfg, 199));
    if (cfg.threshold) {
        const auto phis = tr::uniform_grid(cfg.phi_grid, 0.0, std::numbers::pi / 4.0);
        const auto scan = tr::phi_threshold_scan(phis, grid, opts);
        if (fmt == Format::json) {
            json rows = json::array();
            for (const auto& s : scan) rows.push_back({{"phi", tr::round12(s.phi)}, {"has_interior_volume_zero", s.has_interior_volume_zero}});
            json out{{"threshold_scan", std::move(rows)}};
            for (std::size_t i = 1; i < scan.size(); ++i) {
                if (scan[i - 1].has_interior_volume_zero && !scan[i].has_interior_volume_zero) {
                    const auto [lo, hi] = tr::phi_threshold_bracket(scan[i - 1].phi, scan[i].phi, grid, 1e-4, opts);
                    out["bracket"] = {tr::round12(lo), tr::round12(hi)};
                    break;
                }
            }
            os << out.dump(2) << '\n';
            return;
        }
        tr::CsvWriter csv(os, {"phi", "has_interior_volume_zero"});
        for (const auto& s : scan) {
            csv.number(s.phi).text(s.has_interior_volume_zero ? "1" : "0");
            csv.end_row();
        }
        return;
    }

    const auto phis = phis_or(cfg, {0.0, std::numbers::pi / 4.0});
    if (fmt == Format::json) {
        json out = json::array();
        for (const double phi : phis) {
            json rows = json::array();
            for (const auto& s : tr::simplex_scan(phi, grid, opts)) {
                json row{{"p", tr::round12(s.p)}, {"volume", tr::round12(s.volume)}, {"dimension", s.dimension}};
                row["interval"] = s.interval ? json{tr::round12(s.interval->first), tr::round12(s.interval->second)} : json();
                rows.push_back(std::move(row));
            }
            out.push_back({{"phi", tr::round12(phi)}, {"rows", std::move(rows)}});
        }
        os << out.dump(2) << '\n';
        return;
    }
    tr::CsvWriter csv(os, {"phi", "p", "volume", "dimension", "p_low", "p_high"});
    for (const double phi : phis) {
        for (const auto& s : tr::simplex_scan(phi, grid, opts)) {
            csv.number(phi).number(s.p).number(s.volume).number(s.dimension);
            if (s.interval) {
                csv.number(s.interval->first).number(s.interval->second);
            } else {
                csv.text("").text("");
            }
            csv.end_row();
        }
    }
}

void run_monogamy(const RunConfig& cfg, Format fmt, std::ostream& os) {
    const auto grid = tr::uniform_grid(grid_or(cfg, 101));
    const auto phis = phis_or(cfg, {0.0});
    std::vector<tr::MonogamyReport> rows;
    for (const double phi : phis) {
        auto part = tr::monogamy_curve(grid, phi, scan_options(cfg));
        rows.insert(rows.end(), part.begin(), part.end());
    }
    const auto sum = [](const std::array<double, 3>& v) { return v[0] + v[1] + v[2]; };
    if (fmt == Format::json) {
        json out = json::array();
        for (const auto& r : rows) {
            out.push_back({{"phi", tr::round12(r.phi)},
                           {"p", tr::round12(r.p)},
                           {"one_tangle", tr::round12(r.one_tangle)},
                           {"pairwise", {tr::round12(r.pairwise[0]), tr::round12(r.pairwise[1]), tr::round12(r.pairwise[2])}},
                           {"three_tangle_bounds",
                            {tr::round12(r.three_tangle_bounds[0]), tr::round12(r.three_tangle_bounds[1]),
                             tr::round12(r.three_tangle_bounds[2])}},
                           {"residual", tr::round12(r.residual)}});
        }
        os << out.dump(2) << '\n';
        return;
    }
    tr::CsvWriter csv(os, {"phi", "p", "one_tangle", "pairwise_sum", "three_tangle_sum", "residual"});
    for (const auto& r : rows) {
        csv.number(r.phi).number(r.p).number(r.one_tangle).number(sum(r.pairwise)).number(sum(r.three_tangle_bounds));
        csv.number(r.residual);
        csv.end_row();
    }
}

void run_toy(const RunConfig& cfg, Format fmt, std::ostream& os) {
    const auto report = tr::toy_report(bound_options(cfg));
    if (fmt == Format::json) {
        os << tr::to_json(report).dump(2) << '\n';
        return;
    }
    emit_bounds(report.improved, fmt, os);
}

Format default_format(const std::string& command) {
    return command == "zeros" || command == "interval" || command == "toy" ? Format::json : Format::csv;
}

int dispatch(const RunConfig& cfg) {
    const Format fmt = cfg.format.value_or(default_format(cfg.command));
    std::ostringstream buffer;
    if (cfg.command == "zeros") run_zeros(cfg, fmt, buffer);
    else if (cfg.command == "interval") run_interval(cfg, fmt, buffer);
    else if (cfg.command == "bounds") run_bounds(cfg, fmt, buffer);
    else if (cfg.command == "char") run_char(cfg, fmt, buffer);
    else if (cfg.command == "scan4q") run_scan4q(cfg, fmt, buffer);
    else if (cfg.command == "monogamy") run_monogamy(cfg, fmt, buffer);
    else if (cfg.command == "toy") run_toy(cfg, fmt, buffer);

    if (cfg.out.empty()) {
        std::cout << buffer.str();
        return 0;
    }
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) throw Usage("--out: cannot open " + cfg.out);
    file << buffer.str();
    return 0;
}

bool is_validation(tr::ErrorCode code) {
    return code == tr::ErrorCode::parse_error || code == tr::ErrorCode::invalid_argument ||
           code == tr::ErrorCode::dimension_mismatch;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact zero intervals and convex-roof bounds of the three-tangle for rank-two mixtures"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    RunConfig cfg;
    const std::map<std::string, Format> formats{{"csv", Format::csv}, {"json", Format::json}};
    app.add_option("--phi", cfg.phi, "Phase angle(s) in radians; repeatable")->envname("TANGLEROOF_PHI")->delimiter(',');
    app.add_option("--p-grid", cfg.p_grid, "Number of p grid points")
        ->envname("TANGLEROOF_P_GRID")
        ->check(CLI::Range(2, 10000000));
    app.add_option("--phi-grid", cfg.phi_grid, "Number of phi grid points for threshold scans")
        ->envname("TANGLEROOF_PHI_GRID")
        ->check(CLI::Range(2, 100000));
    app.add_option("--out", cfg.out, "Output file (default stdout)")->envname("TANGLEROOF_OUT");
    app.add_option("--format", cfg.format, "Output format")
        ->envname("TANGLEROOF_FORMAT")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    app.add_option("--tol-rank", cfg.tol_rank, "Eigenvalue threshold for rank detection")
        ->envname("TANGLEROOF_TOL_RANK")
        ->check(CLI::PositiveNumber);
    app.add_option("--tol-root", cfg.tol_root, "Relative coefficient threshold for pencil roots")
        ->envname("TANGLEROOF_TOL_ROOT")
        ->check(CLI::PositiveNumber);
    app.add_option("--parallelism", cfg.parallelism, "Worker threads for grid scans")
        ->envname("TANGLEROOF_PARALLELISM")
        ->check(CLI::Range(1, 1024));
    app.add_option("--psi1", cfg.psi1_path, "State file for psi1 (default: toy pair)")->envname("TANGLEROOF_PSI1");
    app.add_option("--psi2", cfg.psi2_path, "State file for psi2")->envname("TANGLEROOF_PSI2");
    app.add_option("--p", cfg.weight, "Mixing weight on psi1")->envname("TANGLEROOF_P")->check(CLI::Range(0.0, 1.0));
    app.add_flag("--renormalize", cfg.renormalize, "Renormalize input states instead of only warning")
        ->envname("TANGLEROOF_RENORMALIZE");

    const std::vector<std::pair<std::string, std::string>> commands{
        {"zeros", "Pencil roots and zero-polytope of a rank-two mixture"},
        {"interval", "Exact zero interval with witness decompositions"},
        {"bounds", "Linearized, pivot and envelope upper bounds on a p grid"},
        {"char", "Characteristic curves C3(Z(p, phi))"},
        {"scan4q", "Zero-simplex volume and dimension scans of the four-qubit family"},
        {"monogamy", "Extended monogamy residual of the four-qubit family"},
        {"toy", "Full report for the (GHZ3 +- W3)/sqrt(2) example"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->callback([&cfg, name = name] { cfg.command = name; });
        if (name == "scan4q") sub->add_flag("--threshold", cfg.threshold, "Scan phi for the interior volume-zero crossing");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        return dispatch(cfg);
    } catch (const Usage& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const tr::Error& e) {
        std::cerr << "error (" << tr::to_string(e.code()) << "): " << e.what() << '\n';
        return is_validation(e.code()) ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
