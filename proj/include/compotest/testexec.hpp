#pragma once

#include <deque>
#include <map>

#include "compotest/testcase.hpp"

namespace compotest {

// Synchronized execution graph of a test case against an input-enabled
// implementation, as a variant of parallel composition:
//   - the implementation moves alone on τ and on labels outside L_t
//   - the test moves alone on its labels outside L_i (and outside θ/θ_s)
//   - shared labels synchronize
//   - θ and θ_s synchronize with quiescence of the implementation (the
//     implementation keeps its state).
// The graph is not a plain Lts because θ/θ_s appear as transition labels.
struct TestExecGraph {
    struct Config {
        NodeRef test;
        StateId impl;
        bool operator<(const Config& o) const {
            if (test.v != o.test.v) return test.v < o.test.v;
            return impl < o.impl;
        }
    };
    std::vector<Config> configs;
    std::vector<std::vector<std::pair<Label, int>>> edges; // per config
    int initial = 0;

    bool terminal(int c) const { return configs[c].test.is_terminal(); }
    bool failing(int c) const { return configs[c].test.is_fail(); }
};

inline TestExecGraph test_exec(const TestCase& t, const Lts& i) {
    InputEnabledResult ie = is_input_enabled(i);
    if (!ie.enabled)
        throw NotInputEnabledError("implementation '" + i.name() + "' refuses input '" +
                                   ie.witness_input.str() + "' in state " +
                                   i.state_name(ie.witness_state));
    // Alphabet discipline from the generators: test inputs other than θ/θ_s
    // are implementation outputs, test outputs are never implementation
    // outputs.
    for (const Label& l : t.inputs)
        if (l.is_action() && !i.outputs().count(l.name))
            throw Error("test input '" + l.name + "' is not a SUT output");
    for (const Label& l : t.outputs)
        if (i.outputs().count(l.name))
            throw Error("test output '" + l.name + "' collides with SUT outputs");

    TestExecGraph g;
    std::map<TestExecGraph::Config, int> index;
    std::deque<int> work;
    auto intern = [&](TestExecGraph::Config c) {
        auto it = index.find(c);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(g.configs.size());
        index.emplace(c, id);
        g.configs.push_back(c);
        g.edges.emplace_back();
        if (!c.test.is_terminal()) work.push_back(id);
        return id;
    };

    g.initial = intern({t.root, i.initial()});

    while (!work.empty()) {
        int id = work.front();
        work.pop_front();
        auto [qt, qi] = g.configs[id];

        auto push = [&](const Label& l, NodeRef nt, StateId ni) {
            // resolve the target before indexing: intern may grow g.edges
            int target = intern({nt, ni});
            g.edges[id].emplace_back(l, target);
        };

        // Implementation-side moves.
        for (const auto& [l, dst] : i.edges(qi)) {
            if (l.is_tau()) {
                push(Label::tau(), qt, dst);
            } else if (!t.in_alphabet(l)) {
                push(l, qt, dst); // invisible to the test
            } else {
                for (const TestEdge& e : t.nodes[qt.index()].edges)
                    if (e.label == l) push(l, e.target, dst);
            }
        }
        // Test-side moves.
        for (const TestEdge& e : t.nodes[qt.index()].edges) {
            if (e.label.kind == LabelKind::Theta || e.label.kind == LabelKind::ThetaS) {
                if (i.quiescent(qi)) push(e.label, e.target, qi);
            } else if (!i.in_alphabet(e.label)) {
                push(e.label, e.target, qi); // non-interacting test move
            } else if (i.is_input(e.label)) {
                for (StateId dst : i.successors(qi, e.label))
                    push(e.label, e.target, dst);
            }
            // Labels in U_i were handled as synchronized moves above.
        }
    }
    return g;
}

// One terminated run of the execution: the weak trace (τ omitted) and the
// implementation state at the terminal.
struct TestRun {
    SuspensionTrace trace;
    bool failed = false;
    StateId impl_state = 0;
};

struct ExecVerdict {
    bool pass = true;
    std::vector<TestRun> runs;
};

// A verdict quantifies over all runs: fail iff some run reaches FAIL. The
// runs list carries one shortest run per reachable terminal configuration
// (on failure, the shortest failing run comes first).
inline ExecVerdict run_test(const TestCase& t, const Lts& i) {
    TestExecGraph g = test_exec(t, i);

    std::vector<int> parent(g.configs.size(), -1);
    std::vector<Label> via(g.configs.size());
    std::vector<bool> seen(g.configs.size(), false);
    std::deque<int> queue{g.initial};
    seen[g.initial] = true;
    std::vector<int> terminals;
    while (!queue.empty()) {
        int id = queue.front();
        queue.pop_front();
        if (g.terminal(id)) {
            terminals.push_back(id);
            continue;
        }
        for (const auto& [l, nxt] : g.edges[id]) {
            if (seen[nxt]) continue;
            seen[nxt] = true;
            parent[nxt] = id;
            via[nxt] = l;
            queue.push_back(nxt);
        }
    }

    ExecVerdict v;
    auto run_for = [&](int id) {
        TestRun r;
        r.failed = g.failing(id);
        r.impl_state = g.configs[id].impl;
        for (int cur = id; parent[cur] >= 0; cur = parent[cur])
            if (!via[cur].is_tau()) r.trace.push_back(via[cur]);
        std::reverse(r.trace.begin(), r.trace.end());
        return r;
    };
    std::vector<TestRun> failing, passing;
    for (int id : terminals)
        (g.failing(id) ? failing : passing).push_back(run_for(id));
    v.pass = failing.empty();
    v.runs = std::move(failing);
    v.runs.insert(v.runs.end(), passing.begin(), passing.end());
    return v;
}

// Conjunction over the suite; the first failing test decides the verdict.
inline ExecVerdict run_suite(const std::vector<TestCase>& ts, const Lts& i) {
    for (const TestCase& t : ts) {
        ExecVerdict v = run_test(t, i);
        if (!v.pass) return v;
    }
    return {};
}

} // namespace compotest
