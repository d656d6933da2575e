#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eofbc/bench.hpp"
#include "eofbc/pipeline.hpp"
#include "eofbc/printer.hpp"
#include "eofbc/refinement.hpp"

namespace eofbc::cli {

// Exit code contract: 0 = clean, 1 = defects found, 2 = analysis error,
// 64 = usage error. Diagnostics go to stderr, artifacts to stdout/files.
constexpr int kExitClean = 0;
constexpr int kExitDefects = 1;
constexpr int kExitError = 2;
constexpr int kExitUsage = 64;

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(SourceSpan{path, 1, 1}, "cannot open file");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline std::optional<std::string> package_option(const std::string& flag_value, bool flag_given) {
    if (flag_given) return flag_value;
    if (const char* env = std::getenv("EO_FRAGILE_PACKAGE")) return std::string(env);
    return std::string("");  // default: no package prefix
}

inline nlohmann::ordered_json reports_to_json(const std::vector<DefectReport>& reports) {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["defects"] = nlohmann::ordered_json::array();
    for (const DefectReport& report : reports) {
        nlohmann::ordered_json chain = nlohmann::ordered_json::array();
        for (const ChainLink& link : report.chain) {
            nlohmann::ordered_json entry;
            entry["method"] = link.method_fqn;
            if (link.redefined_in) entry["redefined_in"] = *link.redefined_in;
            chain.push_back(std::move(entry));
        }
        j["defects"].push_back({{"object", report.object_fqn}, {"chain", std::move(chain)}});
    }
    return j;
}

}  // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Static analyzer for unanticipated mutual recursion in EO programs"};
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Detect decoration-induced call cycles in EO files");
    std::vector<std::string> analyze_inputs;
    std::string analyze_package;
    std::string analyze_format = "text";
    std::string analyze_dump;
    analyze->add_option("files", analyze_inputs, "EO source files (one merged context)")->required();
    auto* analyze_pkg_opt = analyze->add_option("--package", analyze_package, "Package prefix for object names");
    analyze->add_option("--format", analyze_format, "Output format: text|json")
        ->check(CLI::IsMember({"text", "json"}));
    analyze->add_option("--dump", analyze_dump, "Dump the object tree instead of analyzing: partial|resolved")
        ->check(CLI::IsMember({"partial", "resolved"}));

    // translate
    auto* translate = app.add_subcommand("translate", "Translate a mini-OO source file to EO");
    std::string translate_input;
    std::string translate_package;
    translate->add_option("file", translate_input, "mini-OO source file")->required();
    translate->add_option("--package", translate_package,
                          "Reserved: recorded for downstream tooling, emission is unchanged");

    // refine
    auto* refine = app.add_subcommand("refine", "Replace inlinable candidates with their static forms");
    std::string refine_input;
    std::string refine_object;
    bool refine_all = false;
    std::string refine_package;
    refine->add_option("file", refine_input, "EO source file")->required();
    refine->add_option("--object", refine_object, "Only refine candidates inside this object (fqn)");
    refine->add_flag("--all", refine_all, "Refine every inlinable candidate (default behavior)");
    auto* refine_pkg_opt = refine->add_option("--package", refine_package, "Package prefix for object names");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Run the YAML benchmark suite and write reports");
    std::string bench_tests;
    std::string bench_out = ".";
    std::string bench_format = "md";
    int bench_jobs = 1;
    std::vector<std::string> bench_compare;
    bench_cmd->add_option("--tests", bench_tests, "Directory of YAML test files")->required();
    bench_cmd->add_option("--out", bench_out, "Output directory for report.md and report.json");
    bench_cmd->add_option("--format", bench_format, "Report format echoed to stdout: md|json")
        ->check(CLI::IsMember({"md", "json"}));
    bench_cmd->add_option("--jobs", bench_jobs, "Analyze test cases in parallel")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--compare", bench_compare,
                          "Extra analyzer columns from JSON outcome files (may repeat)");

    try {
        std::vector<const char*> argv;
        argv.push_back("eofbc");
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitClean;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    try {
        if (analyze->parsed()) {
            std::vector<SourceUnit> units;
            for (const auto& path : analyze_inputs) units.push_back({path, detail::read_file(path)});
            std::optional<std::string> package =
                detail::package_option(analyze_package, analyze_pkg_opt->count() > 0);
            if (!analyze_dump.empty()) {
                AnalyzedContext full = analyze_units(units, package);
                if (analyze_dump == "partial") {
                    // Rebuild without resolution for the partial view.
                    std::vector<std::pair<std::string, const EoProgram*>> parsed;
                    for (std::size_t i = 0; i < full.programs.size(); ++i) {
                        parsed.emplace_back(full.packages[i], full.programs[i].get());
                    }
                    ObjectTree partial = build_partial_tree(parsed);
                    out << dump_tree(partial);
                } else {
                    out << dump_tree(full.tree);
                }
                return kExitClean;
            }
            AnalyzedContext ctx = analyze_units(units, package);
            if (analyze_format == "json") {
                out << detail::reports_to_json(ctx.reports).dump(2) << "\n";
            } else {
                out << format_reports(ctx.reports);
            }
            return ctx.reports.empty() ? kExitClean : kExitDefects;
        }

        if (translate->parsed()) {
            auto classes = minioo::parse_mini_oo(detail::read_file(translate_input), translate_input);
            out << minioo::translate_to_text(classes);
            return kExitClean;
        }

        if (refine->parsed()) {
            std::optional<std::string> package =
                detail::package_option(refine_package, refine_pkg_opt->count() > 0);
            std::string text = detail::read_file(refine_input);
            EoProgram program = parse_source(text, refine_input);
            ObjectTree tree = build_partial_tree(program, package.value_or(""));
            resolve(tree);
            std::vector<StaticForm> forms;
            tree.for_each_node([&](const ObjectNode& node) {
                if (!refine_object.empty() && node.fqn != refine_object) return;
                for (const InlineCandidate& candidate : find_inline_candidates(node)) {
                    if (auto form = is_inlinable(candidate, tree)) forms.push_back(std::move(*form));
                }
            });
            if (!refine_object.empty() && tree.find(refine_object) == nullptr) {
                err << "error: no object named '" << refine_object << "'\n";
                return kExitError;
            }
            EoProgram refined = program;
            for (const StaticForm& form : forms) refined = apply_static_form(refined, form);
            out << pretty_print(refined);
            return kExitClean;
        }

        // bench
        std::vector<bench::ExternalOutcomes> external;
        for (const auto& path : bench_compare) external.push_back(bench::load_external_outcomes(path));
        bench::SuiteReport report = bench::run_suite(bench_tests, bench::default_analyzers(), bench_jobs, external);
        std::string md = bench::render_report_md(report);
        nlohmann::ordered_json js = bench::render_report_json(report);
        namespace fs = std::filesystem;
        fs::create_directories(bench_out);
        {
            std::ofstream md_file(fs::path(bench_out) / "report.md", std::ios::binary);
            md_file << md;
            std::ofstream json_file(fs::path(bench_out) / "report.json", std::ios::binary);
            json_file << js.dump(2) << "\n";
        }
        if (bench_format == "json") {
            out << js.dump(2) << "\n";
        } else {
            out << md;
        }
        return kExitClean;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
}

}  // namespace eofbc::cli
