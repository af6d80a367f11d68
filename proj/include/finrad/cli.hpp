#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "finrad/census.hpp"
#include "finrad/complex.hpp"
#include "finrad/geometry.hpp"
#include "finrad/hyperplane.hpp"
#include "finrad/io.hpp"
#include "finrad/radon.hpp"
#include "finrad/rational.hpp"

namespace finrad {

using ordered_json = nlohmann::ordered_json;

namespace cli_detail {

/// Renders any JSON value on one line, for the plain and csv formats.
inline std::string inline_value(const ordered_json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_array()) {
        std::string s = "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) s += ", ";
            s += inline_value(j[i]);
        }
        return s + "]";
    }
    return j.dump();
}

inline void flatten(const ordered_json& j, const std::string& prefix,
                    std::vector<std::pair<std::string, std::string>>& rows) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items())
            flatten(v, prefix.empty() ? k : prefix + "." + k, rows);
    } else {
        rows.emplace_back(prefix, inline_value(j));
    }
}

inline std::string csv_quote(const std::string& s) {
    if (s.find(',') == std::string::npos && s.find('"') == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

inline void emit(const ordered_json& payload, const std::string& format, std::ostream& out) {
    if (format == "json") {
        out << payload.dump(2) << '\n';
        return;
    }
    std::vector<std::pair<std::string, std::string>> rows;
    flatten(payload, "", rows);
    if (format == "csv") {
        out << "key,value\n";
        for (const auto& [k, v] : rows) out << k << ',' << csv_quote(v) << '\n';
    } else {
        for (const auto& [k, v] : rows) out << k << ": " << v << '\n';
    }
}

inline ordered_json rational_array(const std::vector<Rational>& vs) {
    ordered_json a = ordered_json::array();
    for (const auto& v : vs) a.push_back(rational_to_string(v));
    return a;
}

inline std::vector<int> parse_id_list(const std::string& text) {
    std::vector<int> ids;
    std::string token;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i < text.size() && text[i] != ',' && text[i] != ' ') {
            token += text[i];
            continue;
        }
        if (token.empty()) continue;
        std::size_t used = 0;
        int value = 0;
        try {
            value = std::stoi(token, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("expected a comma-separated id list, got \"" + text + "\"");
        }
        if (used != token.size())
            throw std::invalid_argument("expected a comma-separated id list, got \"" + text + "\"");
        ids.push_back(value);
        token.clear();
    }
    if (ids.empty()) throw std::invalid_argument("expected a non-empty id list");
    return ids;
}

inline IncidenceGeometry select_geometry(const std::string& kind, int q, int n, int m) {
    if (kind == "polygon") {
        if (m == 0) throw std::invalid_argument("polygon geometry needs --m");
        return polygon_geometry(m);
    }
    if (q == 0 || n == 0) throw std::invalid_argument(kind + " geometry needs --q and --n");
    const GeometrySpace s = make_space(q, n);
    return kind == "lines" ? lines_geometry(s) : hyperplanes_geometry(s);
}

inline std::uint64_t to_u64(const Integer& v) { return v.convert_to<std::uint64_t>(); }

inline ordered_json census_payload(const CensusResult& r, int n, bool verify_rank) {
    ordered_json j;
    j["n"] = n;
    j["total"] = r.total;
    j["admissible"] = r.admissible;
    j["inadmissible"] = r.inadmissible;
    j["obstructions"] = {{"omitted_point", r.with_omitted_point},
                         {"isolated_tree", r.with_isolated_tree},
                         {"even_cycle", r.with_even_cycle}};
    j["omitted"] = {{"multiplicity", r.omitted_point_multiplicity},
                    {"pair_multiplicity", r.omitted_pair_multiplicity},
                    {"triple_multiplicity", r.omitted_triple_multiplicity},
                    {"quad_multiplicity", r.omitted_quad_multiplicity},
                    {"distinct", r.omitted_distinct}};
    j["isolated_lines"] = {{"multiplicity", r.isolated_line_multiplicity},
                           {"exactly_two", r.isolated_line_exactly_two},
                           {"three_plus", r.isolated_line_three_plus},
                           {"distinct", r.isolated_line_distinct}};
    j["mixed"] = {{"point_line_pair_multiplicity", r.mixed_pair_multiplicity}};
    if (verify_rank)
        j["rank_verification"] = {{"checked", r.rank_checked}, {"disagreements", r.rank_disagreements}};
    return j;
}

}  // namespace cli_detail

/// The command-line surface, callable in-process for tests. args excludes
/// the program name. Exit code 0 reports success, 1 a negative verdict
/// (inadmissible, inconsistent, out of range), 2 a usage error or
/// malformed input.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact Radon transforms over finite geometries"};
    app.require_subcommand(1);
    int rc = 0;

    // matrix
    auto* matrix_cmd = app.add_subcommand("matrix", "Print the incidence matrix of a geometry");
    std::string mx_kind;
    int mx_q = 0, mx_n = 0, mx_m = 0;
    std::string mx_format = "plain";
    matrix_cmd->add_option("--geometry", mx_kind, "lines, hyperplanes, or polygon")
        ->required()
        ->check(CLI::IsMember({"lines", "hyperplanes", "polygon"}));
    matrix_cmd->add_option("--q", mx_q, "field order (prime)");
    matrix_cmd->add_option("--n", mx_n, "dimension");
    matrix_cmd->add_option("--m", mx_m, "polygon vertex count");
    matrix_cmd->add_option("--format", mx_format, "plain (row dump) or json")
        ->check(CLI::IsMember({"plain", "json"}));
    matrix_cmd->callback([&] {
        const IncidenceGeometry g = cli_detail::select_geometry(mx_kind, mx_q, mx_n, mx_m);
        const IncidenceMatrix m = radon_matrix(g);
        if (mx_format == "plain") {
            dump_matrix(m, out);
            return;
        }
        ordered_json j;
        j["rows"] = m.rows;
        j["cols"] = m.cols;
        ordered_json rows = ordered_json::array();
        for (int r = 0; r < m.rows; ++r) {
            std::string line;
            for (int c = 0; c < m.cols; ++c) {
                if (c) line += ' ';
                line += static_cast<char>('0' + m.at(r, c));
            }
            rows.push_back(line);
        }
        j["matrix"] = rows;
        out << j.dump(2) << '\n';
    });

    // bolker
    auto* bolker_cmd = app.add_subcommand("bolker", "Uniformity report and filtered-backprojection inversion");
    std::string bk_kind;
    int bk_q = 0, bk_n = 0, bk_m = 0;
    std::int64_t bk_trials = 100;
    std::uint64_t bk_seed = 12345;
    std::string bk_format = "json";
    bolker_cmd->add_option("--geometry", bk_kind, "lines, hyperplanes, or polygon")
        ->required()
        ->check(CLI::IsMember({"lines", "hyperplanes", "polygon"}));
    bolker_cmd->add_option("--q", bk_q, "field order (prime)");
    bolker_cmd->add_option("--n", bk_n, "dimension");
    bolker_cmd->add_option("--m", bk_m, "polygon vertex count");
    bolker_cmd->add_option("--trials", bk_trials, "round-trip trials")->check(CLI::NonNegativeNumber);
    bolker_cmd->add_option("--seed", bk_seed, "round-trip seed");
    bolker_cmd->add_option("--format", bk_format, "json or plain")->check(CLI::IsMember({"json", "plain"}));
    bolker_cmd->callback([&] {
        const IncidenceGeometry g = cli_detail::select_geometry(bk_kind, bk_q, bk_n, bk_m);
        const BolkerReport rep = bolker_check(g);
        ordered_json j;
        j["geometry"] = bk_kind;
        j["x_count"] = g.x_count;
        j["y_count"] = g.y_count;
        j["alpha"] = rep.alpha ? ordered_json(*rep.alpha) : ordered_json(nullptr);
        j["beta"] = rep.beta ? ordered_json(*rep.beta) : ordered_json(nullptr);
        j["holds"] = rep.holds;
        if (rep.holds) {
            const auto [c, d] = bolker_inverse_coefficients(*rep.alpha, *rep.beta, g.x_count);
            j["inverse"] = {{"c", rational_to_string(c)}, {"d", rational_to_string(d)}};
            std::mt19937_64 rng(bk_seed);
            std::int64_t passed = 0;
            for (std::int64_t t = 0; t < bk_trials; ++t) {
                DataVector f;
                f.role = DataRole::points;
                for (int x = 0; x < g.x_count; ++x)
                    f.values.push_back(Rational(static_cast<std::int64_t>(detail::uniform_below(rng, 19)) - 9));
                if (bolker_invert(g, radon_apply(g, f)).values == f.values) ++passed;
            }
            j["roundtrip"] = {{"trials", bk_trials}, {"passed", passed}};
            if (passed != bk_trials) {
                err << "error: round-trip inversion failed\n";
                rc = 1;
            }
        } else {
            j["inverse"] = nullptr;
            j["roundtrip"] = nullptr;
            rc = 1;
        }
        cli_detail::emit(j, bk_format, out);
    });

    // cavalieri
    auto* cav_cmd = app.add_subcommand("cavalieri", "Spread-sum range conditions for hyperplane data");
    int cv_q = 0, cv_n = 0;
    std::string cv_data;
    std::string cv_format = "json";
    cav_cmd->add_option("--q", cv_q, "field order (prime)")->required();
    cav_cmd->add_option("--n", cv_n, "dimension")->required();
    cav_cmd->add_option("--data", cv_data, "file of per-hyperplane rationals")->required();
    cav_cmd->add_option("--format", cv_format, "json or plain")->check(CLI::IsMember({"json", "plain"}));
    cav_cmd->callback([&] {
        const HyperplaneGeometry ctx = make_hyperplane_geometry(make_space(cv_q, cv_n));
        DataVector g;
        g.role = DataRole::blocks;
        g.values = read_values_file(cv_data);
        const CavalieriReport rep = cavalieri_check(ctx, g);
        const bool solvable = range_membership(ctx, g);
        ordered_json j;
        j["hyperplanes"] = static_cast<int>(ctx.flats.size());
        j["spreads"] = static_cast<int>(ctx.spreads.size());
        j["consistent"] = rep.consistent;
        j["solvable"] = solvable;
        j["spread_sums"] = cli_detail::rational_array(rep.spread_sums);
        cli_detail::emit(j, cv_format, out);
        if (!rep.consistent) rc = 1;
    });

    // hyperplane-admissible
    auto* ha_cmd = app.add_subcommand("hyperplane-admissible",
                                      "Test a hyperplane sub-collection for admissibility");
    int ha_q = 0, ha_n = 0;
    std::string ha_ids;
    std::string ha_format = "json";
    ha_cmd->add_option("--q", ha_q, "field order (prime)")->required();
    ha_cmd->add_option("--n", ha_n, "dimension")->required();
    ha_cmd->add_option("--ids", ha_ids, "comma-separated hyperplane ids")->required();
    ha_cmd->add_option("--format", ha_format, "json or plain")->check(CLI::IsMember({"json", "plain"}));
    ha_cmd->callback([&] {
        const HyperplaneGeometry ctx = make_hyperplane_geometry(make_space(ha_q, ha_n));
        const std::vector<int> ids = cli_detail::parse_id_list(ha_ids);
        const bool pattern = hyperplane_admissible_pattern(ctx, ids);
        const bool rank = hyperplane_admissible_rank(ctx, ids);
        const auto counts = spread_member_counts(ctx, ids);
        ordered_json j;
        j["pattern_admissible"] = pattern;
        j["rank_admissible"] = rank;
        ordered_json omissions = ordered_json::array();
        for (int c : counts) omissions.push_back(ctx.space.q - c);
        j["spread_omissions"] = omissions;
        cli_detail::emit(j, ha_format, out);
        if (!rank) rc = 1;
    });

    // check
    auto* check_cmd = app.add_subcommand("check", "Admissibility report for a line complex file");
    std::string ck_file;
    bool ck_witness = false;
    std::string ck_format = "json";
    check_cmd->add_option("--file", ck_file, "complex file (header 'q n', then endpoint pairs)")->required();
    check_cmd->add_flag("--witness", ck_witness, "attach a kernel witness when inadmissible");
    check_cmd->add_option("--format", ck_format, "json or plain")->check(CLI::IsMember({"json", "plain"}));
    check_cmd->callback([&] {
        const LineComplex c = read_complex_file(ck_file);
        const AdmissibilityReport rep = obstruction_scan(c, ck_witness);
        ordered_json j;
        j["q"] = c.space.q;
        j["n"] = c.space.n;
        j["admissible"] = rep.admissible;
        j["omitted_points"] = rep.omitted_points;
        j["isolated_tree_components"] = rep.isolated_tree_components;
        j["even_cycle"] = rep.even_cycle ? ordered_json(*rep.even_cycle) : ordered_json(nullptr);
        j["witness"] = rep.witness ? cli_detail::rational_array(rep.witness->values) : ordered_json(nullptr);
        cli_detail::emit(j, ck_format, out);
        if (!rep.admissible) rc = 1;
    });

    // reconstruct
    auto* rec_cmd = app.add_subcommand("reconstruct", "Invert restricted line sums over an admissible complex");
    std::string rc_file, rc_data;
    std::string rc_format = "json";
    rec_cmd->add_option("--file", rc_file, "complex file")->required();
    rec_cmd->add_option("--data", rc_data, "file of per-line rationals, complex order")->required();
    rec_cmd->add_option("--format", rc_format, "json or plain")->check(CLI::IsMember({"json", "plain"}));
    rec_cmd->callback([&] {
        const LineComplex c = read_complex_file(rc_file);
        DataVector g;
        g.role = DataRole::blocks;
        g.values = read_values_file(rc_data);
        try {
            const DataVector f = reconstruct(c, g);
            ordered_json j;
            j["values"] = cli_detail::rational_array(f.values);
            cli_detail::emit(j, rc_format, out);
        } catch (const InconsistentDataError& e) {
            err << "error: " << e.what() << '\n';
            rc = 1;
        }
    });

    // witness
    auto* wit_cmd = app.add_subcommand("witness", "Emit a kernel witness for an inadmissible complex");
    std::string wt_file;
    std::string wt_format = "json";
    wit_cmd->add_option("--file", wt_file, "complex file")->required();
    wit_cmd->add_option("--format", wt_format, "json or plain")->check(CLI::IsMember({"json", "plain"}));
    wit_cmd->callback([&] {
        const LineComplex c = read_complex_file(wt_file);
        if (obstruction_scan(c).admissible) {
            err << "error: the complex is admissible; no kernel witness exists\n";
            rc = 1;
            return;
        }
        const DataVector w = kernel_witness(c);
        ordered_json j;
        j["values"] = cli_detail::rational_array(w.values);
        cli_detail::emit(j, wt_format, out);
    });

    // census
    auto* census_cmd = app.add_subcommand("census", "Exhaustively classify every complex of F_2^3");
    int cs_n = 3;
    int cs_partitions = 1;
    bool cs_verify = false;
    std::string cs_format = "json";
    census_cmd->add_option("--n", cs_n, "dimension (only 3 is enumerable)");
    census_cmd->add_option("--partitions", cs_partitions, "concurrent enumeration ranges")
        ->check(CLI::PositiveNumber);
    census_cmd->add_flag("--verify-rank", cs_verify, "re-derive each verdict from the exact rank");
    census_cmd->add_option("--format", cs_format, "json, csv, or plain")
        ->check(CLI::IsMember({"json", "csv", "plain"}));
    census_cmd->callback([&] {
        const CensusResult r = enumerate_all_complexes(cs_n, cs_partitions, cs_verify);
        cli_detail::emit(cli_detail::census_payload(r, cs_n, cs_verify), cs_format, out);
        if (cs_verify && r.rank_disagreements != 0) rc = 1;
    });

    // counts
    auto* counts_cmd =
        app.add_subcommand("counts", "Closed-form obstruction counts for F_2^3, cross-checked by sweep");
    int ct_partitions = 1;
    std::string ct_format = "json";
    counts_cmd->add_option("--partitions", ct_partitions, "concurrent ranges for the cross-check sweep")
        ->check(CLI::PositiveNumber);
    counts_cmd->add_option("--format", ct_format, "json, csv, or plain")
        ->check(CLI::IsMember({"json", "csv", "plain"}));
    counts_cmd->callback([&] {
        const PointOmittingCounts po = count_point_omitting();
        const IsolatedLineCounts il = count_isolated_lines();
        const MixedCounts mx = count_mixed();
        const CensusResult cs = enumerate_all_complexes(3, ct_partitions, false);
        using cli_detail::to_u64;
        auto entry = [](const Integer& closed, std::uint64_t swept) {
            return ordered_json{{"closed_form", cli_detail::to_u64(closed)},
                                {"sweep", swept},
                                {"match", cli_detail::to_u64(closed) == swept}};
        };
        ordered_json j;
        j["point_omitting"] = {{"multiplicity", entry(po.with_multiplicity, cs.omitted_point_multiplicity)},
                               {"pair_multiplicity", entry(po.pair_multiplicity, cs.omitted_pair_multiplicity)},
                               {"triple_multiplicity", entry(po.triple_multiplicity, cs.omitted_triple_multiplicity)},
                               {"quad_multiplicity", entry(po.quad_multiplicity, cs.omitted_quad_multiplicity)},
                               {"distinct", entry(po.distinct, cs.omitted_distinct)}};
        j["isolated_lines"] = {{"multiplicity", entry(il.with_multiplicity, cs.isolated_line_multiplicity)},
                               {"exactly_two", entry(il.exactly_two, cs.isolated_line_exactly_two)},
                               {"three_plus", entry(Integer(0), cs.isolated_line_three_plus)},
                               {"distinct", entry(il.distinct, cs.isolated_line_distinct)}};
        j["mixed"] = {{"point_line_pair_multiplicity", entry(mx.pair_multiplicity, cs.mixed_pair_multiplicity)}};
        bool all = true;
        std::vector<std::pair<std::string, std::string>> rows;
        cli_detail::flatten(j, "", rows);
        for (const auto& [k, v] : rows)
            if (k.size() > 6 && k.compare(k.size() - 6, 6, ".match") == 0 && v != "true") all = false;
        j["all_match"] = all;
        cli_detail::emit(j, ct_format, out);
        if (!all) rc = 1;
    });

    // sample
    auto* sample_cmd = app.add_subcommand("sample", "Seeded admissibility-rate estimate for F_2^n");
    int sp_n = 0;
    std::int64_t sp_trials = 10000;
    std::uint64_t sp_seed = 12345;
    std::string sp_format = "json";
    sample_cmd->add_option("--n", sp_n, "dimension, at least 3")->required();
    sample_cmd->add_option("--trials", sp_trials, "number of sampled complexes")->check(CLI::PositiveNumber);
    sample_cmd->add_option("--seed", sp_seed, "sampling seed");
    sample_cmd->add_option("--format", sp_format, "json, csv, or plain")
        ->check(CLI::IsMember({"json", "csv", "plain"}));
    sample_cmd->callback([&] {
        const SampleEstimate est = sample_admissibility_rate(sp_n, sp_trials, sp_seed);
        ordered_json j;
        j["n"] = sp_n;
        j["trials"] = est.trials;
        j["seed"] = sp_seed;
        j["admissible"] = est.admissible;
        j["rate"] = rational_to_string(est.rate);
        cli_detail::emit(j, sp_format, out);
    });

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("finrad");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return rc;
}

}  // namespace finrad
