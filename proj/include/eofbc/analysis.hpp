#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "eofbc/object_tree.hpp"

namespace eofbc {

// One step of a reported call chain, rendered from the analyzed object's
// point of view: `a.new.g` even when g is defined in c.new. redefined_in
// is present only when the defining object differs from the analyzed one.
struct ChainLink {
    std::string method_fqn;
    std::optional<std::string> redefined_in;
};

struct DefectReport {
    std::string object_fqn;
    std::vector<ChainLink> chain;  // first and last link reference the same method
};

// A raw elementary cycle in one object's extended call graph, before the
// cross-object reporting filter: the method-name sequence plus the owner
// of each method.
struct RawCycle {
    std::string object_fqn;
    std::vector<std::string> methods;
    std::vector<std::string> owners;
};

struct AnalysisStats {
    long long edges_traversed = 0;
    long long starts = 0;
};

namespace detail {

// Rotate so the cycle starts at its canonical method. Cycles found from
// different starting points collapse onto the same rotation, which is how
// duplicates are suppressed.
inline void canonicalize_cycle(std::vector<std::string>& methods, std::vector<std::string>& owners) {
    std::size_t pivot = 0;
    for (std::size_t i = 1; i < methods.size(); ++i) {
        if (methods[i] > methods[pivot]) pivot = i;
    }
    std::rotate(methods.begin(), methods.begin() + static_cast<std::ptrdiff_t>(pivot), methods.end());
    std::rotate(owners.begin(), owners.begin() + static_cast<std::ptrdiff_t>(pivot), owners.end());
}

struct CycleCollector {
    const ObjectNode* object = nullptr;
    std::set<std::vector<std::string>> seen;
    std::vector<RawCycle>* out = nullptr;
    AnalysisStats* stats = nullptr;

    std::vector<std::string> path;
    std::set<std::string> on_path;
    std::set<std::string> visited;

    void dfs(const std::string& method) {
        path.push_back(method);
        on_path.insert(method);
        visited.insert(method);
        const MethodInfo* info = object->extended_methods.at(method).info;
        for (const CallSite& call : info->calls) {
            if (stats != nullptr) ++stats->edges_traversed;
            auto target = object->extended_methods.find(call.method_name);
            if (target == object->extended_methods.end()) continue;  // unresolvable target: branch ends silently
            const std::string& callee = target->first;
            if (on_path.count(callee) != 0) {
                record(callee);
                continue;  // cycle found: this branch of the traversal stops
            }
            if (visited.count(callee) != 0) continue;
            dfs(callee);
        }
        on_path.erase(method);
        path.pop_back();
    }

    void record(const std::string& repeat) {
        auto begin = std::find(path.begin(), path.end(), repeat);
        std::vector<std::string> methods(begin, path.end());
        std::vector<std::string> owners;
        owners.reserve(methods.size());
        for (const auto& m : methods) owners.push_back(object->extended_methods.at(m).owner_fqn);
        canonicalize_cycle(methods, owners);
        if (seen.insert(methods).second) {
            out->push_back(RawCycle{object->fqn, std::move(methods), std::move(owners)});
        }
    }
};

inline void collect_cycles(const ObjectNode& node, std::vector<RawCycle>& out, AnalysisStats* stats) {
    CycleCollector collector;
    collector.object = &node;
    collector.out = &out;
    collector.stats = stats;
    for (const auto& [name, ext] : node.extended_methods) {
        (void)ext;
        if (stats != nullptr) ++stats->starts;
        collector.path.clear();
        collector.on_path.clear();
        collector.visited.clear();
        collector.dfs(name);
    }
}

}  // namespace detail

// Every elementary dispatch cycle per object, including single-method and
// single-object ones. This is the raw layer the reporting filter and the
// oracle-equivalence tests sit on.
inline std::vector<RawCycle> find_all_cycles(const ObjectTree& tree, AnalysisStats* stats = nullptr) {
    std::vector<RawCycle> cycles;
    tree.for_each_node([&](const ObjectNode& node) { detail::collect_cycles(node, cycles, stats); });
    return cycles;
}

// Third pass: depth-first traversal of each object's extended call graph.
// Only cycles that span multiple objects (at least one link redefined in a
// decoratee) and involve at least two distinct methods are reported, one
// report per (object, cycle up to rotation), ordered by object fqn and
// starting method.
inline std::vector<DefectReport> detect_cycles(const ObjectTree& tree, AnalysisStats* stats = nullptr) {
    std::vector<DefectReport> reports;
    for (const RawCycle& cycle : find_all_cycles(tree, stats)) {
        if (cycle.methods.size() < 2) continue;
        bool cross_object = false;
        for (const auto& owner : cycle.owners) {
            if (owner != cycle.object_fqn) cross_object = true;
        }
        if (!cross_object) continue;
        DefectReport report;
        report.object_fqn = cycle.object_fqn;
        for (std::size_t i = 0; i <= cycle.methods.size(); ++i) {
            std::size_t k = i % cycle.methods.size();
            ChainLink link;
            link.method_fqn = cycle.object_fqn + "." + cycle.methods[k];
            if (cycle.owners[k] != cycle.object_fqn) link.redefined_in = cycle.owners[k];
            report.chain.push_back(std::move(link));
        }
        reports.push_back(std::move(report));
    }
    std::sort(reports.begin(), reports.end(), [](const DefectReport& a, const DefectReport& b) {
        if (a.object_fqn != b.object_fqn) return a.object_fqn < b.object_fqn;
        if (a.chain.front().method_fqn != b.chain.front().method_fqn) {
            return a.chain.front().method_fqn < b.chain.front().method_fqn;
        }
        return a.chain.size() < b.chain.size();
    });
    return reports;
}

// --- bounded symbolic exercise (the independent oracle) ----------------

struct ExerciseState {
    std::string owner_fqn;  // object where the current method is defined
    std::string method;
};

struct ExerciseOutcome {
    bool cycle = false;
    std::vector<ExerciseState> path;  // filled when cycle == true; starts and ends at the start state
    int deepest_step = 0;
};

// Simulates the call automaton for one (object, method) start: each step
// re-dispatches the called name against the original object's decoration
// chain. Reports a cycle when the starting method recurs within `bound`
// calls; the default bound is the total number of method bindings in the
// context. Breadth-first, so a reported cycle is a shortest one.
inline ExerciseOutcome symbolic_exercise(const ObjectTree& tree, const std::string& object_fqn,
                                         const std::string& method_name, int bound = 0) {
    const ObjectNode* object = tree.find(object_fqn);
    if (object == nullptr) throw MethodNotFoundError(object_fqn, method_name);
    auto start_hit = lookup_attribute(*object, method_name);
    if (!start_hit || start_hit->kind != AttrKind::Method) {
        throw MethodNotFoundError(object_fqn, method_name);
    }
    if (bound <= 0) bound = tree.total_method_count();

    struct QueueEntry {
        std::string method;
        int depth;
        int parent;  // index into trail, -1 for the start
    };
    std::vector<QueueEntry> trail;
    std::deque<int> queue;
    std::set<std::string> enqueued;

    trail.push_back({method_name, 0, -1});
    queue.push_back(0);
    enqueued.insert(method_name);

    ExerciseOutcome outcome;
    while (!queue.empty()) {
        int index = queue.front();
        queue.pop_front();
        QueueEntry entry = trail[static_cast<std::size_t>(index)];
        outcome.deepest_step = std::max(outcome.deepest_step, entry.depth);
        if (entry.depth >= bound) continue;  // not more than `bound` calls in a row
        auto hit = lookup_attribute(*object, entry.method);
        if (!hit || hit->kind != AttrKind::Method) continue;
        for (const CallSite& call : hit->method->calls) {
            auto callee_hit = lookup_attribute(*object, call.method_name);
            if (!callee_hit || callee_hit->kind != AttrKind::Method) continue;
            if (call.method_name == method_name) {
                // The starting (object, method) pair recurs: reconstruct the path.
                std::vector<ExerciseState> path;
                path.push_back({callee_hit->owner_fqn, call.method_name});
                for (int i = index; i != -1; i = trail[static_cast<std::size_t>(i)].parent) {
                    const auto& step = trail[static_cast<std::size_t>(i)];
                    auto step_hit = lookup_attribute(*object, step.method);
                    path.push_back({step_hit->owner_fqn, step.method});
                }
                std::reverse(path.begin(), path.end());
                outcome.cycle = true;
                outcome.path = std::move(path);
                outcome.deepest_step = std::max(outcome.deepest_step, entry.depth + 1);
                return outcome;
            }
            if (enqueued.insert(call.method_name).second) {
                trail.push_back({call.method_name, entry.depth + 1, index});
                queue.push_back(static_cast<int>(trail.size()) - 1);
            }
        }
    }
    return outcome;
}

// --- report rendering ---------------------------------------------------

// Exact console format:
//
//   a.new:
//     a.new.g (was last redefined in "c.new") ->
//     a.new.f ->
//     a.new.g (was last redefined in "c.new")
//
// Reports are separated by one blank line.
inline std::string format_reports(const std::vector<DefectReport>& reports) {
    std::string out;
    for (std::size_t r = 0; r < reports.size(); ++r) {
        if (r > 0) out += "\n";
        const DefectReport& report = reports[r];
        out += report.object_fqn + ":\n";
        for (std::size_t i = 0; i < report.chain.size(); ++i) {
            const ChainLink& link = report.chain[i];
            out += "  " + link.method_fqn;
            if (link.redefined_in) out += " (was last redefined in \"" + *link.redefined_in + "\")";
            if (i + 1 < report.chain.size()) out += " ->";
            out += "\n";
        }
    }
    return out;
}

// Single-line rendering used by the benchmark detection-messages section.
inline std::string format_report_line(const DefectReport& report) {
    std::string out = report.object_fqn + ":";
    for (std::size_t i = 0; i < report.chain.size(); ++i) {
        const ChainLink& link = report.chain[i];
        out += " " + link.method_fqn;
        if (link.redefined_in) out += " (was last redefined in \"" + *link.redefined_in + "\")";
        if (i + 1 < report.chain.size()) out += " ->";
    }
    return out;
}

}  // namespace eofbc
