#pragma once

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "compotest/compose.hpp"
#include "compotest/lts.hpp"

namespace compotest {

struct Counterexample {
    SuspensionTrace trace; // shortest witness, BFS order
    Label offending;
    std::string site;
};

struct ConformanceVerdict {
    bool pass = true;
    std::optional<Counterexample> counterexample;
};

namespace detail {

inline void require_valid(const Lts& l, const char* role) {
    ValidationReport rep = validate(l);
    if (!rep.ok)
        throw Error(std::string(role) + " '" + l.name() +
                    "' is not a valid LTS: " + rep.violations.front());
}

// Shared BFS bookkeeping: nodes keyed by K, each remembering how it was
// first discovered so shortest witnesses fall out of the search order.
template <typename K> struct Bfs {
    struct Node {
        K key;
        int parent;
        Label via;
    };
    std::vector<Node> nodes;
    std::map<K, int> index;
    std::deque<int> queue;

    // Returns true when the key was fresh.
    bool push(const K& key, int parent, const Label& via) {
        auto it = index.find(key);
        if (it != index.end()) return false;
        int id = static_cast<int>(nodes.size());
        index.emplace(key, id);
        nodes.push_back({key, parent, via});
        queue.push_back(id);
        return true;
    }
    SuspensionTrace trace_to(int id) const {
        SuspensionTrace r;
        for (int cur = id; nodes[cur].parent >= 0; cur = nodes[cur].parent)
            r.push_back(nodes[cur].via);
        std::reverse(r.begin(), r.end());
        return r;
    }
};

} // namespace detail

// Exact uioco decision for finite systems: BFS over determinized pairs
// (X_i, X_s), extending along the utraces of s (inputs from in(X_s), outputs
// and δ from out(X_s)) and failing at the first pair with
// out(X_i) ⊄ out(X_s). Requires matching alphabets and an input-enabled i.
inline ConformanceVerdict check_uioco(const Lts& i, const Lts& s) {
    if (i.inputs() != s.inputs() || i.outputs() != s.outputs())
        throw AlphabetMismatchError("uioco needs identical alphabets for '" + i.name() +
                                    "' and '" + s.name() + "'");
    detail::require_valid(i, "implementation");
    detail::require_valid(s, "specification");
    InputEnabledResult ie = is_input_enabled(i);
    if (!ie.enabled)
        throw NotInputEnabledError("implementation '" + i.name() + "' refuses input '" +
                                   ie.witness_input.str() + "' in state " +
                                   i.state_name(ie.witness_state));

    using Key = std::pair<StateSet, StateSet>; // (X_i, X_s)
    detail::Bfs<Key> bfs;
    bfs.push({after_initial(i), after_initial(s)}, -1, Label::tau());

    while (!bfs.queue.empty()) {
        int id = bfs.queue.front();
        bfs.queue.pop_front();
        auto [xi, xs] = bfs.nodes[id].key;

        LabelSet out_i = out_set(i, xi);
        LabelSet out_s = out_set(s, xs);
        for (const Label& l : out_i) {
            if (!out_s.count(l))
                return {false, Counterexample{bfs.trace_to(id), l,
                                              "output not allowed by specification"}};
        }

        // Extend along the utraces of s; sorted order keeps equal-length
        // counterexample ties lexicographic.
        LabelSet steps = out_s;
        for (const Label& l : in_set(s, xs)) steps.insert(l);
        for (const Label& l : steps) {
            StateSet ni = after_label(i, xi, l);
            if (ni.empty()) continue; // i cannot be driven here; vacuous onwards
            bfs.push({ni, after_label(s, xs, l)}, id, l);
        }
    }
    return {};
}

using EcoPair = std::pair<StateSet, StateSet>; // (X_s, X_e)

// The relation constructed by the decision procedure; on success it is an
// eco-simulation (the minimal one).
struct EcoSim {
    std::vector<EcoPair> pairs; // discovery (BFS) order
    bool contains(const EcoPair& p) const {
        for (const auto& q : pairs)
            if (q == p) return true;
        return false;
    }
};

struct EcoResult {
    bool pass = true;
    EcoSim sim;
    std::optional<Counterexample> counterexample;
};

inline const char* kSiteEnv = "e does not accept";
inline const char* kSiteSys = "s does not accept";

// Decides eco (equivalently, mutual acceptance) between two composable
// finite LTSs by constructing the minimal eco-simulation. Worklist BFS over
// pairs of determinized after-sets; same fixpoint as the recursive
// formulation, but with shortest counterexamples and no stack-depth hazard.
inline EcoResult decide_eco(const Lts& s, const Lts& e) {
    if (!composable(s, e))
        throw NotComposableError("'" + s.name() + "' and '" + e.name() +
                                 "' share output labels");
    detail::require_valid(s, "left operand");
    detail::require_valid(e, "right operand");

    LabelSet is = s.input_labels(), ie = e.input_labels();
    LabelSet ls_delta = s.alphabet_labels(true), le_delta = e.alphabet_labels(true);

    detail::Bfs<EcoPair> bfs;
    bfs.push({after_initial(s), after_initial(e)}, -1, Label::tau());

    EcoResult result;
    while (!bfs.queue.empty()) {
        int id = bfs.queue.front();
        bfs.queue.pop_front();
        auto [xs, xe] = bfs.nodes[id].key;

        LabelSet out_s = out_set(s, xs);
        LabelSet out_e = out_set(e, xe);
        LabelSet in_s = in_set(s, xs);
        LabelSet in_e = in_set(e, xe);

        // Acceptance check: every communicated output must be accepted as an
        // input on the other side.
        for (const Label& l : out_s)
            if (ie.count(l) && !in_e.count(l))
                return {false, {}, Counterexample{bfs.trace_to(id), l, kSiteEnv}};
        for (const Label& l : out_e)
            if (is.count(l) && !in_s.count(l))
                return {false, {}, Counterexample{bfs.trace_to(id), l, kSiteSys}};

        result.sim.pairs.push_back({xs, xe});

        // Successors: synchronized steps (communicated outputs, shared
        // enabled inputs, δ when both sides can be quiescent) plus
        // non-interacting moves of either side. Collected into one sorted
        // map so ties between equal-length counterexamples stay
        // lexicographic; the label groups are pairwise disjoint.
        std::map<Label, EcoPair> next;
        auto sync_step = [&](const Label& l) {
            next.emplace(l, EcoPair{after_label(s, xs, l), after_label(e, xe, l)});
        };
        for (const Label& l : out_s)
            if (ie.count(l)) sync_step(l);
        for (const Label& l : out_e)
            if (is.count(l)) sync_step(l);
        for (const Label& l : in_s)
            if (in_e.count(l)) sync_step(l);
        if (out_s.count(Label::delta()) && out_e.count(Label::delta()))
            sync_step(Label::delta());
        for (const Label& l : out_s)
            if (l.is_action() && !le_delta.count(l))
                next.emplace(l, EcoPair{after_label(s, xs, l), xe});
        for (const Label& l : in_s)
            if (!le_delta.count(l)) next.emplace(l, EcoPair{after_label(s, xs, l), xe});
        for (const Label& l : out_e)
            if (l.is_action() && !ls_delta.count(l))
                next.emplace(l, EcoPair{xs, after_label(e, xe, l)});
        for (const Label& l : in_e)
            if (!ls_delta.count(l)) next.emplace(l, EcoPair{xs, after_label(e, xe, l)});
        for (const auto& [l, pair] : next) bfs.push(pair, id, l);
    }
    return result;
}

// Trace-level name for the same decision (eco ⇔ mutual acceptance).
inline EcoResult check_mutual_acceptance(const Lts& s, const Lts& e) {
    return decide_eco(s, e);
}

// Brute-force mutual-acceptance oracle: enumerate the utraces of s ∥ e up to
// the given length and check the per-state acceptance condition on every
// reachable pair of component states. Independent of decide_eco's code path.
inline ConformanceVerdict ma_oracle(const Lts& s, const Lts& e, int depth) {
    const ComposedLts comp = compose(s, e);
    const Lts& c = comp.lts;
    LabelSet is = s.input_labels(), ie = e.input_labels();

    struct Layer {
        StateSet x;
        SuspensionTrace trace;
    };
    std::vector<Layer> frontier{{after_initial(c), {}}};
    std::map<StateSet, int> seen{{frontier[0].x, 0}};

    for (int d = 0; d <= depth; ++d) {
        std::vector<Layer> next;
        for (const auto& layer : frontier) {
            for (StateId q : layer.x.ids) {
                auto [qs, qe] = comp.pair_of[q];
                // out(q) of a single component state, per-state acceptance.
                LabelSet oe = out_set(e, StateSet::single(qe));
                LabelSet os = out_set(s, StateSet::single(qs));
                LabelSet ws = weak_inputs(s, qs);
                LabelSet we = weak_inputs(e, qe);
                for (const Label& l : os)
                    if (ie.count(l) && !we.count(l))
                        return {false, Counterexample{layer.trace, l, kSiteEnv}};
                for (const Label& l : oe)
                    if (is.count(l) && !ws.count(l))
                        return {false, Counterexample{layer.trace, l, kSiteSys}};
            }
            if (d == depth) continue;
            LabelSet steps = out_set(c, layer.x);
            for (const Label& l : in_set(c, layer.x)) steps.insert(l);
            for (const Label& l : steps) {
                StateSet nx = after_label(c, layer.x, l);
                if (nx.empty()) continue;
                if (seen.emplace(nx, d + 1).second) {
                    SuspensionTrace t = layer.trace;
                    t.push_back(l);
                    next.push_back({nx, std::move(t)});
                }
            }
        }
        frontier = std::move(next);
        if (frontier.empty()) break;
    }
    return {};
}

// Depth at which the utrace exploration of s ∥ e saturates; a safe oracle
// bound for the equivalence with decide_eco.
inline int utrace_exploration_diameter(const Lts& s, const Lts& e) {
    const ComposedLts comp = compose(s, e);
    const Lts& c = comp.lts;
    std::map<StateSet, int> seen;
    std::deque<std::pair<StateSet, int>> queue;
    StateSet x0 = after_initial(c);
    seen.emplace(x0, 0);
    queue.emplace_back(x0, 0);
    int diameter = 0;
    while (!queue.empty()) {
        auto [x, d] = queue.front();
        queue.pop_front();
        diameter = std::max(diameter, d);
        LabelSet steps = out_set(c, x);
        for (const Label& l : in_set(c, x)) steps.insert(l);
        for (const Label& l : steps) {
            StateSet nx = after_label(c, x, l);
            if (nx.empty()) continue;
            if (seen.emplace(nx, d + 1).second) queue.emplace_back(nx, d + 1);
        }
    }
    return diameter + 1;
}

struct UtraceClosedResult {
    bool closed = true;
    std::optional<SuspensionTrace> witness; // shortest executable non-utrace
};

// Decides whether every executable suspension trace is a utrace. A shortest
// violation always ends at its offending input, so it suffices to explore
// along utrace-legal steps and look for an input that is executable from
// some member of the current after-set but not enabled in all of them.
inline UtraceClosedResult is_utrace_closed(const Lts& s) {
    detail::require_valid(s, "operand");
    detail::Bfs<StateSet> bfs;
    bfs.push(after_initial(s), -1, Label::tau());
    while (!bfs.queue.empty()) {
        int id = bfs.queue.front();
        bfs.queue.pop_front();
        const StateSet x = bfs.nodes[id].key;

        LabelSet enabled_everywhere = in_set(s, x);
        for (const auto& token : s.inputs()) {
            Label l = Label::action(token);
            if (enabled_everywhere.count(l)) continue;
            if (!after_label(s, x, l).empty()) {
                SuspensionTrace w = bfs.trace_to(id);
                w.push_back(l);
                return {false, w};
            }
        }

        LabelSet steps = out_set(s, x);
        for (const Label& l : enabled_everywhere) steps.insert(l);
        for (const Label& l : steps) {
            StateSet nx = after_label(s, x, l);
            if (!nx.empty()) bfs.push(nx, id, l);
        }
    }
    return {};
}

} // namespace compotest
