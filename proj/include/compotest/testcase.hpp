#pragma once

#include <string>
#include <vector>

#include "compotest/lts.hpp"

namespace compotest {

// Target of a test-case edge: an interior node, or one of the two terminals.
// Terminals conceptually carry input self-loops; they are represented
// implicitly and absorb every input during execution.
struct NodeRef {
    int v = kPass;
    static constexpr int kPass = -1;
    static constexpr int kFail = -2;

    static NodeRef pass() { return {kPass}; }
    static NodeRef fail() { return {kFail}; }
    static NodeRef node(int i) { return {i}; }

    bool is_pass() const { return v == kPass; }
    bool is_fail() const { return v == kFail; }
    bool is_terminal() const { return v < 0; }
    int index() const { return v; }

    bool operator==(const NodeRef& o) const { return v == o.v; }
};

struct TestEdge {
    Label label; // action, theta, or theta_s; never tau, never delta
    NodeRef target;
};

struct TestNode {
    std::vector<TestEdge> edges;
};

// Quasi-finite tree with PASS/FAIL terminals. `inputs` is I_t (contains θ,
// and θ_s for combined tests); `outputs` is U_t. Node 0 is the root unless
// the whole test is a bare terminal.
struct TestCase {
    std::string name;
    LabelSet inputs;
    LabelSet outputs;
    std::vector<TestNode> nodes;
    NodeRef root = NodeRef::pass();

    // Tracker set that generated each node (empty when parsed from a file).
    std::vector<StateSet> node_sets;

    bool in_alphabet(const Label& l) const { return inputs.count(l) || outputs.count(l); }
    LabelSet alphabet() const {
        LabelSet r = inputs;
        r.insert(outputs.begin(), outputs.end());
        return r;
    }
};

// Checks the defining test-case properties:
//   1. quasi-finite tree (each non-terminal except the root has exactly one
//      incoming edge; everything reachable from the root)
//   2. terminals are exactly PASS/FAIL (implicit in the representation)
//   3. θ ∈ I_t
//   4. at most one outgoing U_t edge per node
//   5. receptive: exactly one edge per input except θ/θ_s
//   6. fully observable: no τ (and no δ) edges
inline ValidationReport validate_test_case(const TestCase& t) {
    ValidationReport rep;

    if (!t.inputs.count(Label::theta()))
        rep.violation("theta missing from test inputs");
    for (const Label& l : t.outputs)
        if (!l.is_action()) rep.violation("test outputs must be plain actions");

    if (t.root.is_terminal()) {
        if (!t.nodes.empty())
            rep.violation("terminal root with unreachable interior nodes");
        return rep;
    }
    if (t.root.index() != 0 || t.nodes.empty()) {
        rep.violation("root must be node 0");
        return rep;
    }

    LabelSet receptive = t.inputs;
    receptive.erase(Label::theta());
    receptive.erase(Label::theta_s());

    std::vector<int> indegree(t.nodes.size(), 0);
    for (size_t n = 0; n < t.nodes.size(); ++n) {
        int out_edges = 0;
        std::map<Label, int> input_count;
        for (const TestEdge& e : t.nodes[n].edges) {
            if (e.label.is_tau() || e.label.is_delta()) {
                rep.violation("node " + std::to_string(n) + " has a " + e.label.str() +
                              " edge");
                continue;
            }
            if (!t.in_alphabet(e.label)) {
                rep.violation("node " + std::to_string(n) + " edge label '" +
                              e.label.str() + "' outside the test alphabet");
                continue;
            }
            if (t.outputs.count(e.label)) ++out_edges;
            if (t.inputs.count(e.label)) ++input_count[e.label];
            if (!e.target.is_terminal()) {
                if (e.target.index() < 0 || e.target.index() >= (int)t.nodes.size()) {
                    rep.violation("node " + std::to_string(n) + " edge to unknown node");
                    continue;
                }
                ++indegree[e.target.index()];
            }
        }
        if (out_edges > 1)
            rep.violation("node " + std::to_string(n) + " has " +
                          std::to_string(out_edges) + " output edges");
        for (const Label& l : receptive) {
            int c = input_count.count(l) ? input_count[l] : 0;
            if (c != 1)
                rep.violation("node " + std::to_string(n) + " has " + std::to_string(c) +
                              " edges for input '" + l.str() + "' (receptivity)");
        }
        for (const auto& [l, c] : input_count)
            if (c > 1 && !receptive.count(l))
                rep.violation("node " + std::to_string(n) + " has duplicate '" + l.str() +
                              "' edges");
    }

    if (indegree[0] != 0)
        rep.violation("root has an incoming edge");
    for (size_t n = 1; n < t.nodes.size(); ++n)
        if (indegree[n] != 1)
            rep.violation("node " + std::to_string(n) + " has " +
                          std::to_string(indegree[n]) + " incoming edges (tree shape)");

    // Reachability from the root; with per-node in-degree one this also
    // rules out cycles.
    std::vector<bool> reached(t.nodes.size(), false);
    std::vector<int> work{0};
    reached[0] = true;
    while (!work.empty()) {
        int n = work.back();
        work.pop_back();
        for (const TestEdge& e : t.nodes[n].edges)
            if (!e.target.is_terminal() && !reached[e.target.index()]) {
                reached[e.target.index()] = true;
                work.push_back(e.target.index());
            }
    }
    for (size_t n = 0; n < t.nodes.size(); ++n)
        if (!reached[n])
            rep.violation("node " + std::to_string(n) + " unreachable from root");

    return rep;
}

} // namespace compotest
