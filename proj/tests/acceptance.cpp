// Acceptance suite: runs every criterion end to end and prints one
// PASS/FAIL line per criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "eofbc/bench.hpp"
#include "eofbc/cli.hpp"
#include "eofbc/parser.hpp"
#include "eofbc/printer.hpp"
#include "eofbc/refinement.hpp"
#include "support/examples.hpp"
#include "support/oracle.hpp"

using namespace eofbc;
namespace fs = std::filesystem;

namespace {

const std::string kCorpus = EOFBC_CORPUS_DIR;

struct Harness {
    int failed = 0;
    std::vector<std::string> notes;

    void criterion(int number, const std::string& title, const std::function<void()>& body) {
        notes.clear();
        try {
            body();
        } catch (const std::exception& e) {
            notes.push_back(e.what());
        }
        if (notes.empty()) {
            std::cout << "PASS criterion " << number << ": " << title << "\n";
        } else {
            ++failed;
            std::cout << "FAIL criterion " << number << ": " << title << "\n";
            for (const auto& note : notes) std::cout << "       - " << note << "\n";
        }
    }

    void expect(bool ok, const std::string& what) {
        if (!ok) notes.push_back(what);
    }
};

std::string normalize_whitespace(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::string out;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) {
            line.pop_back();
        }
        out += line;
        out += "\n";
    }
    while (out.size() >= 2 && out[out.size() - 2] == '\n') out.pop_back();
    return out;
}

struct Analyzed {
    EoProgram program;
    ObjectTree tree;
    std::vector<DefectReport> reports;
};

Analyzed analyze_text(const std::string& text, const std::string& package = "",
                      const std::string& name = "<input>") {
    Analyzed a{parse_source(text, name), {}, {}};
    a.tree = build_partial_tree(a.program, package);
    resolve(a.tree);
    a.reports = detect_cycles(a.tree);
    return a;
}

std::vector<std::string> method_sequence(const DefectReport& report) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i + 1 < report.chain.size(); ++i) {
        const std::string& fqn = report.chain[i].method_fqn;
        out.push_back(fqn.substr(report.object_fqn.size() + 1));
    }
    return out;
}

// (definition site, method) view of a reported cycle, for rotation checks.
std::vector<std::pair<std::string, std::string>> definition_sites(const DefectReport& report) {
    std::vector<std::pair<std::string, std::string>> out;
    std::vector<std::string> methods = method_sequence(report);
    for (std::size_t i = 0; i + 1 < report.chain.size(); ++i) {
        std::string owner = report.chain[i].redefined_in ? *report.chain[i].redefined_in : report.object_fqn;
        out.emplace_back(owner, methods[i]);
    }
    return out;
}

bool has_rotation(const std::vector<std::pair<std::string, std::string>>& cycle,
                  const std::vector<std::pair<std::string, std::string>>& wanted) {
    if (cycle.size() != wanted.size()) return false;
    for (std::size_t shift = 0; shift < cycle.size(); ++shift) {
        bool match = true;
        for (std::size_t i = 0; i < cycle.size(); ++i) {
            if (cycle[(shift + i) % cycle.size()] != wanted[i]) match = false;
        }
        if (match) return true;
    }
    return false;
}

// Every analyzable program in the corpus: direct EO plus translated mini.
std::vector<std::pair<std::string, std::string>> corpus_programs() {
    std::vector<std::pair<std::string, std::string>> out;  // (id, eo text)
    std::vector<std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(kCorpus)) {
        if (entry.is_regular_file() && entry.path().extension() == ".yml") files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
        bench::TestCase test = bench::load_test_file(path);
        std::string id = fs::path(path).filename().string();
        for (const char* side : {"bad", "good"}) {
            const auto& programs = side == std::string("bad") ? test.bad : test.good;
            for (const auto& [name, text] : programs) {
                if (has_extension(name, ".eo")) {
                    out.emplace_back(id + "/" + side + "/" + name, text);
                } else if (has_extension(name, ".mini")) {
                    auto classes = minioo::parse_mini_oo(text, name);
                    out.emplace_back(id + "/" + side + "/" + name, minioo::translate_to_text(classes));
                }
            }
        }
    }
    return out;
}

}  // namespace

int main() {
    Harness h;

    // 1. Golden example: the exact boxed console message, under 100 ms.
    h.criterion(1, "golden example report text and runtime", [&] {
        auto start = std::chrono::steady_clock::now();
        Analyzed a = analyze_text(examples::kExampleProgram);
        std::string text = format_reports(a.reports);
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
        std::string expected =
            "a.new: \n"
            "  a.new.g (was last redefined in \"c.new\") -> \n"
            "  a.new.f -> \n"
            "  a.new.g (was last redefined in \"c.new\")\n";
        h.expect(normalize_whitespace(text) == normalize_whitespace(expected),
                 "report text differs from the boxed message:\n" + text);
        h.expect(a.reports.size() == 1, "expected exactly one report");
        h.expect(elapsed < 100, "analysis took " + std::to_string(elapsed) + " ms");
    });

    // 2. Motivating example: one report for derived, and the witness
    //    refinement clears it.
    h.criterion(2, "motivating example report and refinement", [&] {
        Analyzed a = analyze_text(examples::kMotivating);
        h.expect(a.reports.size() == 1, "expected exactly one report, got " + std::to_string(a.reports.size()));
        if (a.reports.size() != 1) return;
        const DefectReport& report = a.reports[0];
        h.expect(report.object_fqn == "derived", "report object is " + report.object_fqn);
        std::string rendered = format_reports({report});
        std::string expected =
            "derived:\n"
            "  derived.n ->\n"
            "  derived.m (was last redefined in \"base\") ->\n"
            "  derived.n\n";
        h.expect(rendered == expected, "cycle differs from n -> m(base) -> n:\n" + rendered);
        CycleClassification classification = classify_cycle(report, a.tree);
        h.expect(classification.unanticipated, "cycle not classified as unanticipated");
        if (!classification.witness) return;
        EoProgram refined = apply_static_form(a.program, *classification.witness);
        ObjectTree refined_tree = build_partial_tree(refined);
        resolve(refined_tree);
        h.expect(detect_cycles(refined_tree).empty(), "refined program still reports defects");
    });

    // 3. Three-object context: both published chains as rotations of one
    //    deduplicated report per affected object.
    h.criterion(3, "three-object context chains", [&] {
        Analyzed a = analyze_text(examples::kThreeObject);
        h.expect(a.reports.size() == 1, "expected one report, got " + std::to_string(a.reports.size()));
        if (a.reports.empty()) return;
        const DefectReport& report = a.reports[0];
        h.expect(report.object_fqn == "derived_again", "affected object is " + report.object_fqn);
        auto cycle = definition_sites(report);
        h.expect(has_rotation(cycle, {{"derived", "o"}, {"base", "m"}, {"derived_again", "n"}}),
                 "missing chain derived.o -> base.m -> derived_again.n");
        h.expect(has_rotation(cycle, {{"derived_again", "n"}, {"derived", "o"}, {"base", "m"}}),
                 "missing rotation starting at derived_again.n");
        ExerciseOutcome exercise = symbolic_exercise(a.tree, "derived_again", "n");
        h.expect(exercise.cycle, "symbolic exercise found no cycle for derived_again.n");
        if (exercise.cycle) {
            h.expect(exercise.path.front().method == "n" && exercise.path[1].owner_fqn == "derived" &&
                         exercise.path[1].method == "o" && exercise.path[2].owner_fqn == "base",
                     "exercise path differs from derived_again.n -> derived.o -> base.m");
        }
    });

    // 4. Metrics reproduction at one-decimal rounding.
    h.criterion(4, "metrics reproduction", [&] {
        bench::MetricsRow found = bench::compute_metrics(26, 22, 4, 0, 0);
        h.expect(found.accuracy() == "92.3%", "accuracy " + found.accuracy());
        h.expect(found.precision() == "86.7%", "precision " + found.precision());
        h.expect(found.recall() == "100.0%", "recall " + found.recall());
        h.expect(found.f1() == "92.9%", "f1 " + found.f1());
        bench::MetricsRow missed = bench::compute_metrics(0, 26, 0, 26, 0);
        h.expect(missed.accuracy() == "50.0%", "accuracy " + missed.accuracy());
        h.expect(missed.precision() == "0.0%", "precision " + missed.precision());
        h.expect(missed.recall() == "0.0%", "recall " + missed.recall());
        h.expect(missed.f1() == "0.0%", "f1 " + missed.f1());
    });

    // 5. Corpus-level reproduction: counts, FP locations, runtime.
    h.criterion(5, "corpus outcome pattern", [&] {
        auto start = std::chrono::steady_clock::now();
        bench::SuiteReport report = bench::run_suite(kCorpus, bench::default_analyzers());
        auto elapsed =
            std::chrono::duration_cast<std::chrono::seconds>(std::chrono::steady_clock::now() - start).count();
        h.expect(report.details.size() == 26, "expected 26 test cases, found " +
                                                  std::to_string(report.details.size()));
        const bench::MetricsRow* row = nullptr;
        for (const auto& r : report.statistics) {
            if (r.analyzer == "eofbc (eo)" && r.defect == "mutual-recursion") row = &r;
        }
        h.expect(row != nullptr, "no statistics row for eofbc (eo)/mutual-recursion");
        if (row != nullptr) {
            h.expect(row->tp == 26 && row->tn == 22 && row->fp == 4 && row->fn == 0 && row->err == 0,
                     "counts TP=" + std::to_string(row->tp) + " TN=" + std::to_string(row->tn) + " FP=" +
                         std::to_string(row->fp) + " FN=" + std::to_string(row->fn) + " ERR=" +
                         std::to_string(row->err));
            h.expect(row->accuracy() == "92.3%" && row->recall() == "100.0%",
                     "accuracy/recall " + row->accuracy() + "/" + row->recall());
        }
        std::set<std::string> fp_files;
        for (const auto& result : report.details) {
            auto it = result.outcomes.find("eofbc (eo)");
            if (it == result.outcomes.end()) continue;
            if (bench::detail_status(it->second.first, it->second.second) == "FP") fp_files.insert(result.file);
        }
        std::set<std::string> expected_fps = {
            "mutual-recursion-with-if-branching1.yml", "mutual-recursion-with-if-branching2.yml",
            "mutual-recursion-with-if-branching3.yml", "mutual-recursion-with-random-if-branching.yml"};
        std::set<std::string> fp_names;
        for (const auto& f : fp_files) fp_names.insert(fs::path(f).filename().string());
        h.expect(fp_names == expected_fps, "false positives are not exactly the four branching tests");
        h.expect(elapsed < 10, "suite took " + std::to_string(elapsed) + " s");
    });

    // 6. Oracle equivalence on corpus and 1000 random contexts.
    h.criterion(6, "oracle equivalence", [&] {
        for (const auto& [id, text] : corpus_programs()) {
            Analyzed a = analyze_text(text);
            auto disagreements = oracle::check_equivalence(a.tree);
            h.expect(disagreements.empty(), "disagreement in corpus program " + id);
            if (!disagreements.empty()) return;
        }
        for (unsigned seed = 0; seed < 1000; ++seed) {
            EoProgram program = parse_source(oracle::random_context(seed));
            ObjectTree tree = build_partial_tree(program);
            resolve(tree);
            auto disagreements = oracle::check_equivalence(tree);
            if (!disagreements.empty()) {
                h.expect(false, "disagreement at seed " + std::to_string(seed) + " on (" +
                                    disagreements[0].object + ", " + disagreements[0].method + ")");
                return;
            }
        }
    });

    // 7. Translation fidelity on the class A/B pair and its inlined fix.
    h.criterion(7, "translation fidelity", [&] {
        const char* bad_mini =
            "class A {\n"
            "  int x;\n"
            "  void f(int y) { this.x = y; }\n"
            "  void g(int y) { f(y); }\n"
            "}\n"
            "class B extends A {\n"
            "  void f(int z) { g(z); }\n"
            "}\n";
        const char* good_mini =
            "class A {\n"
            "  int x;\n"
            "  void f(int y) { this.x = y; }\n"
            "  void g(int y) { this.x = y; }\n"
            "}\n"
            "class B extends A {\n"
            "  void f(int z) { g(z); }\n"
            "}\n";
        Analyzed bad = analyze_text(minioo::translate_to_text(minioo::parse_mini_oo(bad_mini)));
        bool flagged_b = false;
        for (const auto& report : bad.reports) {
            if (report.object_fqn == "classB.new.self") {
                auto methods = method_sequence(report);
                std::set<std::string> names(methods.begin(), methods.end());
                if (names == std::set<std::string>{"f", "g"}) flagged_b = true;
            }
        }
        h.expect(flagged_b, "translated bad pair does not flag the f/g cycle on classB's instance");
        Analyzed good = analyze_text(minioo::translate_to_text(minioo::parse_mini_oo(good_mini)));
        h.expect(good.reports.empty(), "translated inlined variant is not clean");
    });

    // 8. Refinement soundness across the corpus.
    h.criterion(8, "refinement soundness", [&] {
        int witnessed = 0;
        for (const auto& [id, text] : corpus_programs()) {
            Analyzed a = analyze_text(text);
            for (const DefectReport& report : a.reports) {
                CycleClassification classification = classify_cycle(report, a.tree);
                h.expect(classification.unanticipated, id + ": cycle not unanticipated for " + report.object_fqn);
                if (!classification.unanticipated) return;
                EoProgram refined = apply_static_form(a.program, *classification.witness);
                ObjectTree refined_tree = build_partial_tree(refined);
                resolve(refined_tree);
                auto wanted = method_sequence(report);
                for (const DefectReport& still : detect_cycles(refined_tree)) {
                    if (still.object_fqn == report.object_fqn && method_sequence(still) == wanted) {
                        h.expect(false, id + ": cycle survived its witness refinement");
                        return;
                    }
                }
                ++witnessed;
            }
        }
        h.expect(witnessed > 0, "no cycles were classified at all");
        // Zero static forms applied is the identity on the AST.
        EoProgram program = parse_source(examples::kMotivating);
        EoProgram untouched = program;
        h.expect(structurally_equal(program, untouched) && pretty_print(program) == pretty_print(untouched),
                 "zero-refinement copy differs from the original");
    });

    // 9. Determinism and round-trip identity over the corpus.
    h.criterion(9, "determinism and round-trip", [&] {
        bench::SuiteReport first = bench::run_suite(kCorpus, bench::default_analyzers());
        bench::SuiteReport second = bench::run_suite(kCorpus, bench::default_analyzers(), 4);
        h.expect(bench::render_report_md(first) == bench::render_report_md(second),
                 "markdown reports differ across runs");
        h.expect(bench::render_report_json(first).dump() == bench::render_report_json(second).dump(),
                 "json reports differ across runs");
        for (const auto& [id, text] : corpus_programs()) {
            Analyzed once = analyze_text(text);
            Analyzed twice = analyze_text(text);
            h.expect(format_reports(once.reports) == format_reports(twice.reports),
                     id + ": formatted reports differ between runs");
        }
        // Pretty-print of every corpus EO source is the identity.
        std::vector<std::string> files;
        for (const auto& entry : fs::recursive_directory_iterator(kCorpus)) {
            if (entry.is_regular_file() && entry.path().extension() == ".yml") {
                files.push_back(entry.path().string());
            }
        }
        std::sort(files.begin(), files.end());
        for (const auto& path : files) {
            bench::TestCase test = bench::load_test_file(path);
            for (const char* side : {"bad", "good"}) {
                const auto& programs = side == std::string("bad") ? test.bad : test.good;
                for (const auto& [name, source] : programs) {
                    if (!has_extension(name, ".eo")) continue;
                    std::string printed = pretty_print(parse_source(source, name));
                    if (printed != source) {
                        h.expect(false, fs::path(path).filename().string() + "/" + side + "/" + name +
                                            ": pretty-print is not the identity");
                        return;
                    }
                }
            }
        }
    });

    std::cout << (h.failed == 0 ? "ACCEPTANCE: all criteria passed\n"
                                : "ACCEPTANCE: " + std::to_string(h.failed) + " criteria failed\n");
    return h.failed == 0 ? 0 : 1;
}
