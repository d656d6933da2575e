#pragma once

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "eofbc/pipeline.hpp"
#include "eofbc/yaml_subset.hpp"

namespace eofbc::bench {

struct TestCase {
    std::string title;
    std::string description;
    std::vector<std::string> features;
    std::vector<std::pair<std::string, std::string>> bad;   // filename -> source, in file order
    std::vector<std::pair<std::string, std::string>> good;  // filename -> source, in file order
    std::string path;
};

enum class Outcome { TP, FP, TN, FN, ERR };

inline const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::TP: return "TP";
        case Outcome::FP: return "FP";
        case Outcome::TN: return "TN";
        case Outcome::FN: return "FN";
        case Outcome::ERR: return "ERR";
    }
    return "?";
}

enum class Verdict { Found, Clean, Error };

enum class ProgramKind { Good, Bad };

// (bad, found) -> TP; (good, found) -> FP; (good, clean) -> TN;
// (bad, clean) -> FN; any error -> ERR.
inline Outcome classify(ProgramKind kind, Verdict verdict) {
    if (verdict == Verdict::Error) return Outcome::ERR;
    if (kind == ProgramKind::Bad) return verdict == Verdict::Found ? Outcome::TP : Outcome::FN;
    return verdict == Verdict::Found ? Outcome::FP : Outcome::TN;
}

struct MetricsRow {
    std::string analyzer;
    std::string defect;
    long long tp = 0;
    long long tn = 0;
    long long fp = 0;
    long long fn = 0;
    long long err = 0;
    int accuracy_tenths = 0;
    int precision_tenths = 0;
    int recall_tenths = 0;
    int f1_tenths = 0;

    std::string accuracy() const { return render(accuracy_tenths); }
    std::string precision() const { return render(precision_tenths); }
    std::string recall() const { return render(recall_tenths); }
    std::string f1() const { return render(f1_tenths); }

    static std::string render(int tenths) {
        return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10) + "%";
    }
};

namespace detail {

// Percentage in tenths, round-half-up on the exact rational; 0/0 -> 0.
inline int percent_tenths(long long num, long long den) {
    if (den == 0) return 0;
    return static_cast<int>((2000 * num + den) / (2 * den));
}

}  // namespace detail

inline MetricsRow compute_metrics(long long tp, long long tn, long long fp, long long fn, long long err) {
    MetricsRow row;
    row.tp = tp;
    row.tn = tn;
    row.fp = fp;
    row.fn = fn;
    row.err = err;
    row.accuracy_tenths = detail::percent_tenths(tp + tn, tp + tn + fp + fn + err);
    row.precision_tenths = detail::percent_tenths(tp, tp + fp);
    row.recall_tenths = detail::percent_tenths(tp, tp + fn);
    // F1 = 2PR/(P+R) reduces to the exact rational 2TP/(2TP+FP+FN).
    row.f1_tenths = detail::percent_tenths(2 * tp, 2 * tp + fp + fn);
    return row;
}

inline TestCase load_test_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedTestError(path, "cannot open file");
    std::stringstream buffer;
    buffer << in.rdbuf();
    yaml::Document doc = yaml::parse_document(buffer.str(), path);

    for (const char* key : {"title", "description", "features", "bad", "good"}) {
        if (doc.count(key) == 0) throw MalformedTestError(path, std::string("missing key '") + key + "'");
    }
    TestCase test;
    test.path = path;
    test.title = doc["title"].scalar;
    test.description = doc["description"].scalar;
    const auto& features = doc["features"];
    if (features.kind == yaml::Node::Kind::List) {
        test.features = features.list;
    } else if (!features.scalar.empty()) {
        test.features.push_back(features.scalar);
    }
    for (const char* side : {"bad", "good"}) {
        const auto& node = doc[side];
        if (node.kind != yaml::Node::Kind::Mapping || node.mapping.empty()) {
            throw MalformedTestError(path, std::string("'") + side + "' must map at least one file to a program");
        }
        auto& out = side == std::string("bad") ? test.bad : test.good;
        for (const auto& name : node.mapping_order) out.emplace_back(name, node.mapping.at(name));
    }
    return test;
}

struct AnalyzerConfig {
    std::string name;
    std::string extension;  // selects the pipeline: ".eo" direct, ".mini" translate-then-analyze
};

inline std::vector<AnalyzerConfig> default_analyzers() {
    return {{"eofbc (eo)", ".eo"}, {"eofbc (mini)", ".mini"}};
}

// Per-tool outcomes imported from a JSON file; this is how other tools'
// columns enter the report (they are never invoked from here).
struct ExternalOutcomes {
    std::string name;
    std::map<std::string, std::pair<Verdict, Verdict>> by_file;  // file id -> (bad, good)
};

struct DetectionMessage {
    std::string file;
    std::string analyzer;
    std::string side;  // "bad" | "good"
    std::string text;  // one line per defect report
};

struct CaseResult {
    std::string file;  // id relative to the suite directory
    std::string defect;
    bool malformed = false;
    // analyzer name -> outcomes; absent analyzer means not applicable
    std::map<std::string, std::pair<Outcome, Outcome>> outcomes;
};

struct SuiteReport {
    std::vector<MetricsRow> statistics;  // grouped by (analyzer, defect), plus per-analyzer All rows
    std::vector<CaseResult> details;     // sorted by file id
    std::vector<DetectionMessage> messages;
    std::vector<std::string> analyzer_names;
};

namespace detail {

inline Verdict run_side(const std::vector<std::pair<std::string, std::string>>& files,
                        const std::string& extension, std::vector<std::string>* messages) {
    std::vector<SourceUnit> units;
    for (const auto& [name, text] : files) {
        if (has_extension(name, extension)) units.push_back({name, text});
    }
    try {
        AnalyzedContext ctx = analyze_units(units, std::nullopt, /*stem_packages=*/true);
        if (messages != nullptr) {
            for (const DefectReport& report : ctx.reports) messages->push_back(format_report_line(report));
        }
        return ctx.reports.empty() ? Verdict::Clean : Verdict::Found;
    } catch (const Error&) {
        return Verdict::Error;
    }
}

inline bool side_has_extension(const std::vector<std::pair<std::string, std::string>>& files,
                               const std::string& extension) {
    return std::any_of(files.begin(), files.end(),
                       [&](const auto& f) { return has_extension(f.first, extension); });
}

}  // namespace detail

// Detail-table status per the legend: OK = TP and TN; FN = FN and TN;
// FP = TP and FP; FF = FN and FP; E = any error.
inline std::string detail_status(Outcome bad, Outcome good) {
    if (bad == Outcome::ERR || good == Outcome::ERR) return "E";
    if (bad == Outcome::TP && good == Outcome::TN) return "OK";
    if (bad == Outcome::FN && good == Outcome::TN) return "FN";
    if (bad == Outcome::TP && good == Outcome::FP) return "FP";
    return "FF";
}

inline SuiteReport run_suite(const std::string& dir, const std::vector<AnalyzerConfig>& analyzers,
                             int jobs = 1, const std::vector<ExternalOutcomes>& external = {}) {
    namespace fs = std::filesystem;
    std::vector<std::string> files;
    if (fs::exists(dir)) {
        for (const auto& entry : fs::recursive_directory_iterator(dir)) {
            if (!entry.is_regular_file()) continue;
            std::string ext = entry.path().extension().string();
            if (ext == ".yml" || ext == ".yaml") files.push_back(entry.path().string());
        }
    }
    std::sort(files.begin(), files.end());

    std::vector<CaseResult> results(files.size());
    std::vector<std::vector<DetectionMessage>> case_messages(files.size());

    auto run_case = [&](std::size_t index) {
        const std::string& path = files[index];
        CaseResult& result = results[index];
        std::string id = fs::relative(fs::path(path), fs::path(dir)).generic_string();
        result.file = id;
        TestCase test;
        try {
            test = load_test_file(path);
        } catch (const Error&) {
            result.malformed = true;
            result.defect = "mutual-recursion";
            for (const auto& analyzer : analyzers) {
                result.outcomes[analyzer.name] = {Outcome::ERR, Outcome::ERR};
            }
            return;
        }
        result.defect = test.features.empty() ? "unspecified" : test.features.front();
        for (const auto& analyzer : analyzers) {
            if (!detail::side_has_extension(test.bad, analyzer.extension) ||
                !detail::side_has_extension(test.good, analyzer.extension)) {
                continue;  // this analyzer's language is not present in the test
            }
            std::vector<std::string> bad_msgs;
            std::vector<std::string> good_msgs;
            Verdict bad_verdict = detail::run_side(test.bad, analyzer.extension, &bad_msgs);
            Verdict good_verdict = detail::run_side(test.good, analyzer.extension, &good_msgs);
            result.outcomes[analyzer.name] = {classify(ProgramKind::Bad, bad_verdict),
                                              classify(ProgramKind::Good, good_verdict)};
            for (const auto& m : bad_msgs) case_messages[index].push_back({id, analyzer.name, "bad", m});
            for (const auto& m : good_msgs) case_messages[index].push_back({id, analyzer.name, "good", m});
        }
    };

    if (jobs <= 1 || files.size() <= 1) {
        for (std::size_t i = 0; i < files.size(); ++i) run_case(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        int worker_count = std::min<int>(jobs, static_cast<int>(files.size()));
        workers.reserve(static_cast<std::size_t>(worker_count));
        for (int w = 0; w < worker_count; ++w) {
            workers.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < files.size(); i = next.fetch_add(1)) run_case(i);
            });
        }
        for (auto& t : workers) t.join();
    }

    SuiteReport report;
    for (const auto& analyzer : analyzers) report.analyzer_names.push_back(analyzer.name);

    // External tool columns come only from user-supplied outcome files.
    for (const auto& ext : external) {
        report.analyzer_names.push_back(ext.name);
        for (auto& result : results) {
            auto it = ext.by_file.find(result.file);
            if (it == ext.by_file.end()) continue;
            result.outcomes[ext.name] = {classify(ProgramKind::Bad, it->second.first),
                                         classify(ProgramKind::Good, it->second.second)};
        }
    }

    report.details = std::move(results);
    std::sort(report.details.begin(), report.details.end(),
              [](const CaseResult& a, const CaseResult& b) { return a.file < b.file; });
    for (auto& messages : case_messages) {
        for (auto& m : messages) report.messages.push_back(std::move(m));
    }
    std::sort(report.messages.begin(), report.messages.end(), [](const DetectionMessage& a, const DetectionMessage& b) {
        return std::tie(a.analyzer, a.file, a.side, a.text) < std::tie(b.analyzer, b.file, b.side, b.text);
    });

    // Aggregate counts per (analyzer, defect) plus a per-analyzer All row.
    struct Counts {
        long long tp = 0, tn = 0, fp = 0, fn = 0, err = 0;
        void add(Outcome o) {
            switch (o) {
                case Outcome::TP: ++tp; break;
                case Outcome::TN: ++tn; break;
                case Outcome::FP: ++fp; break;
                case Outcome::FN: ++fn; break;
                case Outcome::ERR: ++err; break;
            }
        }
    };
    std::map<std::pair<std::string, std::string>, Counts> grouped;
    for (const CaseResult& result : report.details) {
        for (const auto& [analyzer, outcomes] : result.outcomes) {
            Counts& c = grouped[{analyzer, result.defect}];
            c.add(outcomes.first);
            c.add(outcomes.second);
            Counts& all = grouped[{analyzer, "All"}];
            all.add(outcomes.first);
            all.add(outcomes.second);
        }
    }
    for (const auto& [key, counts] : grouped) {
        MetricsRow row = compute_metrics(counts.tp, counts.tn, counts.fp, counts.fn, counts.err);
        row.analyzer = key.first;
        row.defect = key.second;
        report.statistics.push_back(std::move(row));
    }
    std::sort(report.statistics.begin(), report.statistics.end(), [](const MetricsRow& a, const MetricsRow& b) {
        if (a.analyzer != b.analyzer) return a.analyzer < b.analyzer;
        if ((a.defect == "All") != (b.defect == "All")) return b.defect == "All";  // All row last
        return a.defect < b.defect;
    });
    return report;
}

// --- rendering -----------------------------------------------------------

inline std::string render_report_md(const SuiteReport& report) {
    std::string out = "# Analyzer benchmark report\n\n## Statistics\n\n";
    out += "| Analyzer | Defect | TP | TN | FP | FN | ERR | Accuracy | Precision | Recall | F1 score |\n";
    out += "|---|---|---|---|---|---|---|---|---|---|---|\n";
    for (const MetricsRow& row : report.statistics) {
        bool all = row.defect == "All";
        auto cell = [&](const std::string& s) { return all ? "**" + s + "**" : s; };
        out += "| " + cell(row.analyzer) + " | " + cell(row.defect) + " | " + cell(std::to_string(row.tp)) +
               " | " + cell(std::to_string(row.tn)) + " | " + cell(std::to_string(row.fp)) + " | " +
               cell(std::to_string(row.fn)) + " | " + cell(std::to_string(row.err)) + " | " +
               cell(row.accuracy()) + " | " + cell(row.precision()) + " | " + cell(row.recall()) + " | " +
               cell(row.f1()) + " |\n";
    }
    out += "\n## Details\n\n| File |";
    for (const auto& name : report.analyzer_names) out += " " + name + " |";
    out += "\n|---|";
    for (std::size_t i = 0; i < report.analyzer_names.size(); ++i) out += "---|";
    out += "\n";
    for (const CaseResult& result : report.details) {
        out += "| " + result.file + " |";
        for (const auto& name : report.analyzer_names) {
            auto it = result.outcomes.find(name);
            out += " ";
            out += it == result.outcomes.end() ? "-" : detail_status(it->second.first, it->second.second);
            out += " |";
        }
        out += "\n";
    }
    out += "\nLegend: OK = TP and TN; FN = FN and TN; FP = TP and FP; FF = FN and FP; E = error; - = not applicable.\n";
    out += "\n## Detection messages\n";
    std::string current_analyzer;
    for (const DetectionMessage& message : report.messages) {
        if (message.analyzer != current_analyzer) {
            current_analyzer = message.analyzer;
            out += "\n### " + current_analyzer + "\n\n";
        }
        out += "- " + message.file + " [" + message.side + "] " + message.text + "\n";
    }
    if (report.messages.empty()) out += "\n(no detections)\n";
    return out;
}

inline nlohmann::ordered_json render_report_json(const SuiteReport& report) {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["statistics"] = nlohmann::ordered_json::array();
    for (const MetricsRow& row : report.statistics) {
        j["statistics"].push_back({{"analyzer", row.analyzer},
                                   {"defect", row.defect},
                                   {"tp", row.tp},
                                   {"tn", row.tn},
                                   {"fp", row.fp},
                                   {"fn", row.fn},
                                   {"err", row.err},
                                   {"accuracy", row.accuracy()},
                                   {"precision", row.precision()},
                                   {"recall", row.recall()},
                                   {"f1", row.f1()}});
    }
    j["details"] = nlohmann::ordered_json::array();
    for (const CaseResult& result : report.details) {
        nlohmann::ordered_json outcomes = nlohmann::ordered_json::object();
        nlohmann::ordered_json statuses = nlohmann::ordered_json::object();
        for (const auto& name : report.analyzer_names) {
            auto it = result.outcomes.find(name);
            if (it == result.outcomes.end()) continue;
            outcomes[name] = {{"bad", outcome_name(it->second.first)}, {"good", outcome_name(it->second.second)}};
            statuses[name] = detail_status(it->second.first, it->second.second);
        }
        j["details"].push_back({{"file", result.file},
                                {"defect", result.defect},
                                {"outcomes", outcomes},
                                {"statuses", statuses}});
    }
    j["messages"] = nlohmann::ordered_json::array();
    for (const DetectionMessage& message : report.messages) {
        j["messages"].push_back(
            {{"analyzer", message.analyzer}, {"file", message.file}, {"side", message.side}, {"text", message.text}});
    }
    return j;
}

// Loads a user-supplied per-file outcome map:
//   {"name": "...", "outcomes": {"<file>": {"bad": "found|clean|error", "good": ...}}}
inline ExternalOutcomes load_external_outcomes(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedTestError(path, "cannot open outcomes file");
    nlohmann::json j = nlohmann::json::parse(in, nullptr, true, true);
    ExternalOutcomes out;
    out.name = j.at("name").get<std::string>();
    auto to_verdict = [&](const std::string& s) {
        if (s == "found") return Verdict::Found;
        if (s == "clean") return Verdict::Clean;
        if (s == "error") return Verdict::Error;
        throw MalformedTestError(path, "bad verdict '" + s + "'");
    };
    for (const auto& [file, verdicts] : j.at("outcomes").items()) {
        out.by_file[file] = {to_verdict(verdicts.at("bad").get<std::string>()),
                             to_verdict(verdicts.at("good").get<std::string>())};
    }
    return out;
}

}  // namespace eofbc::bench
