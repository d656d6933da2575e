#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eofbc/analysis.hpp"
#include "eofbc/minioo.hpp"
#include "eofbc/object_tree.hpp"
#include "eofbc/parser.hpp"
#include "eofbc/translate.hpp"

namespace eofbc {

struct SourceUnit {
    std::string name;  // file name; its stem is the default package in stem mode
    std::string text;
};

// Parsed programs plus the resolved tree built over them. The tree borrows
// AST nodes, so the programs are owned here.
struct AnalyzedContext {
    std::vector<std::unique_ptr<EoProgram>> programs;
    std::vector<std::string> packages;
    ObjectTree tree;
    std::vector<DefectReport> reports;
};

inline std::string file_stem(const std::string& name) {
    std::size_t slash = name.find_last_of("/\\");
    std::string base = slash == std::string::npos ? name : name.substr(slash + 1);
    std::size_t dot = base.find_last_of('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
}

inline bool has_extension(const std::string& name, const std::string& ext) {
    return name.size() >= ext.size() && name.compare(name.size() - ext.size(), ext.size(), ext) == 0;
}

// Parses, resolves and analyzes one context made of EO source units. When
// `package` is set it applies to every unit; otherwise each unit's package
// is its file stem (stem_packages) or empty.
inline AnalyzedContext analyze_eo_sources(const std::vector<SourceUnit>& units,
                                          const std::optional<std::string>& package,
                                          bool stem_packages = false) {
    AnalyzedContext ctx;
    std::vector<std::pair<std::string, const EoProgram*>> parsed;
    for (const SourceUnit& unit : units) {
        auto program = std::make_unique<EoProgram>(parse_source(unit.text, unit.name));
        std::string pkg = package ? *package : (stem_packages ? file_stem(unit.name) : "");
        ctx.packages.push_back(pkg);
        parsed.emplace_back(pkg, program.get());
        ctx.programs.push_back(std::move(program));
    }
    ctx.tree = build_partial_tree(parsed);
    resolve(ctx.tree);
    ctx.reports = detect_cycles(ctx.tree);
    return ctx;
}

// `.mini` units go through the translator and then the same EO pipeline.
inline AnalyzedContext analyze_units(const std::vector<SourceUnit>& units,
                                     const std::optional<std::string>& package,
                                     bool stem_packages = false) {
    std::vector<SourceUnit> eo_units;
    for (const SourceUnit& unit : units) {
        if (has_extension(unit.name, ".mini")) {
            auto classes = minioo::parse_mini_oo(unit.text, unit.name);
            eo_units.push_back({unit.name, minioo::translate_to_text(classes)});
        } else {
            eo_units.push_back(unit);
        }
    }
    return analyze_eo_sources(eo_units, package, stem_packages);
}

}  // namespace eofbc
