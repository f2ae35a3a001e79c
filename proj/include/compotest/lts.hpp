#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "compotest/errors.hpp"
#include "compotest/labels.hpp"

namespace compotest {

using StateId = int;

// Canonically ordered, duplicate-free set of states of one LTS. Structural
// equality makes these directly usable as visited-set keys in the
// determinized algorithms.
struct StateSet {
    std::vector<StateId> ids; // sorted ascending, unique

    StateSet() = default;
    explicit StateSet(std::vector<StateId> v) : ids(std::move(v)) { normalize(); }
    static StateSet single(StateId q) { return StateSet{{q}}; }

    void normalize() {
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    }
    void insert(StateId q) {
        auto it = std::lower_bound(ids.begin(), ids.end(), q);
        if (it == ids.end() || *it != q) ids.insert(it, q);
    }
    bool contains(StateId q) const {
        return std::binary_search(ids.begin(), ids.end(), q);
    }
    bool empty() const { return ids.empty(); }
    size_t size() const { return ids.size(); }

    bool operator==(const StateSet& o) const { return ids == o.ids; }
    bool operator!=(const StateSet& o) const { return ids != o.ids; }
    bool operator<(const StateSet& o) const { return ids < o.ids; }
};

struct Transition {
    StateId src;
    Label label;
    StateId dst;

    bool operator==(const Transition& o) const {
        return src == o.src && label == o.label && dst == o.dst;
    }
    bool operator<(const Transition& o) const {
        if (src != o.src) return src < o.src;
        if (!(label == o.label)) return label < o.label;
        return dst < o.dst;
    }
};

// Finite labelled transition system <Q, I, U, T, q0>. Transition labels are
// actions or tau; delta/theta are never stored (quiescence is computed).
// Values are immutable once built and safe to share across threads.
class Lts {
public:
    const std::string& name() const { return name_; }
    int num_states() const { return static_cast<int>(state_names_.size()); }
    StateId initial() const { return initial_; }
    const std::string& state_name(StateId q) const { return state_names_[q]; }
    std::optional<StateId> find_state(const std::string& n) const {
        auto it = state_index_.find(n);
        if (it == state_index_.end()) return std::nullopt;
        return it->second;
    }

    const std::set<std::string>& inputs() const { return inputs_; }
    const std::set<std::string>& outputs() const { return outputs_; }
    bool is_input(const Label& l) const { return l.is_action() && inputs_.count(l.name); }
    bool is_output(const Label& l) const { return l.is_action() && outputs_.count(l.name); }
    bool in_alphabet(const Label& l) const { return is_input(l) || is_output(l); }

    LabelSet input_labels() const {
        LabelSet r;
        for (const auto& t : inputs_) r.insert(Label::action(t));
        return r;
    }
    LabelSet output_labels() const {
        LabelSet r;
        for (const auto& t : outputs_) r.insert(Label::action(t));
        return r;
    }
    // L = I ∪ U; with_delta adds δ (the L^δ shorthand).
    LabelSet alphabet_labels(bool with_delta = false) const {
        LabelSet r = input_labels();
        for (const auto& t : outputs_) r.insert(Label::action(t));
        if (with_delta) r.insert(Label::delta());
        return r;
    }

    const std::vector<Transition>& transitions() const { return transitions_; }
    const std::vector<std::pair<Label, StateId>>& edges(StateId q) const {
        return edges_[q];
    }
    std::vector<StateId> successors(StateId q, const Label& l) const {
        std::vector<StateId> r;
        for (const auto& [lab, dst] : edges_[q])
            if (lab == l) r.push_back(dst);
        return r;
    }
    const std::vector<StateId>& tau_successors(StateId q) const { return tau_succ_[q]; }

    // No outgoing output or tau transition (Def. of quiescence).
    bool quiescent(StateId q) const { return quiescent_[q]; }

private:
    friend class LtsBuilder;
    std::string name_;
    std::vector<std::string> state_names_;
    std::map<std::string, StateId> state_index_;
    std::set<std::string> inputs_;
    std::set<std::string> outputs_;
    std::vector<Transition> transitions_;                      // sorted, unique
    std::vector<std::vector<std::pair<Label, StateId>>> edges_; // per state, sorted
    std::vector<std::vector<StateId>> tau_succ_;
    std::vector<bool> quiescent_;
    StateId initial_ = 0;
};

class LtsBuilder {
public:
    explicit LtsBuilder(std::string name = {}) { lts_.name_ = std::move(name); }

    LtsBuilder& input(const std::string& token) {
        check_token(token);
        lts_.inputs_.insert(token);
        return *this;
    }
    LtsBuilder& output(const std::string& token) {
        check_token(token);
        lts_.outputs_.insert(token);
        return *this;
    }
    LtsBuilder& inputs(const std::vector<std::string>& ts) {
        for (const auto& t : ts) input(t);
        return *this;
    }
    LtsBuilder& outputs(const std::vector<std::string>& ts) {
        for (const auto& t : ts) output(t);
        return *this;
    }

    StateId state(const std::string& n) {
        auto it = lts_.state_index_.find(n);
        if (it != lts_.state_index_.end()) return it->second;
        StateId id = static_cast<StateId>(lts_.state_names_.size());
        lts_.state_names_.push_back(n);
        lts_.state_index_.emplace(n, id);
        return id;
    }

    LtsBuilder& initial(const std::string& n) {
        lts_.initial_ = state(n);
        have_initial_ = true;
        return *this;
    }

    // `label` is an action token or "tau". delta/theta are rejected:
    // quiescence is computed, never stored.
    LtsBuilder& transition(const std::string& src, const std::string& label,
                           const std::string& dst) {
        Label l;
        if (label == "tau") {
            l = Label::tau();
        } else if (is_reserved_token(label)) {
            throw Error("reserved label '" + label + "' may not appear as a transition");
        } else {
            l = make_action(label);
        }
        lts_.transitions_.push_back({state(src), l, state(dst)});
        return *this;
    }

    Lts build() {
        if (lts_.state_names_.empty())
            throw Error("LTS needs at least one state");
        if (!have_initial_)
            throw Error("LTS needs an initial state");
        std::sort(lts_.transitions_.begin(), lts_.transitions_.end());
        lts_.transitions_.erase(
            std::unique(lts_.transitions_.begin(), lts_.transitions_.end()),
            lts_.transitions_.end());
        int n = lts_.num_states();
        lts_.edges_.assign(n, {});
        lts_.tau_succ_.assign(n, {});
        lts_.quiescent_.assign(n, true);
        for (const auto& t : lts_.transitions_) {
            lts_.edges_[t.src].emplace_back(t.label, t.dst);
            if (t.label.is_tau()) {
                lts_.tau_succ_[t.src].push_back(t.dst);
                lts_.quiescent_[t.src] = false;
            } else if (lts_.outputs_.count(t.label.name)) {
                lts_.quiescent_[t.src] = false;
            }
        }
        return lts_;
    }

private:
    static void check_token(const std::string& token) {
        if (!is_valid_action_token(token))
            throw Error("invalid alphabet token: '" + token + "'");
    }
    Lts lts_;
    bool have_initial_ = false;
};

// One-shot construction helper used heavily by the tests.
inline Lts make_lts(const std::string& name, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs, const std::string& initial,
                    const std::vector<std::array<std::string, 3>>& transitions) {
    LtsBuilder b(name);
    b.inputs(inputs).outputs(outputs);
    b.initial(initial);
    for (const auto& t : transitions) b.transition(t[0], t[1], t[2]);
    return b.build();
}

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;

    void violation(std::string msg) {
        ok = false;
        violations.push_back(std::move(msg));
    }
};

namespace detail {

inline std::string render_states(const Lts& l, const std::vector<StateId>& qs) {
    std::string r = "[";
    for (size_t i = 0; i < qs.size(); ++i) {
        if (i) r += ",";
        r += l.state_name(qs[i]);
    }
    return r + "]";
}

} // namespace detail

inline std::string render_state_set(const Lts& l, const StateSet& x) {
    std::string r = "{";
    for (size_t i = 0; i < x.ids.size(); ++i) {
        if (i) r += ",";
        r += l.state_name(x.ids[i]);
    }
    return r + "}";
}

// Checks the structural invariants: disjoint alphabets, declared transition
// labels, strong convergence (no tau cycle). Report-valued; never throws.
inline ValidationReport validate(const Lts& l) {
    ValidationReport rep;

    std::vector<std::string> overlap;
    std::set_intersection(l.inputs().begin(), l.inputs().end(), l.outputs().begin(),
                          l.outputs().end(), std::back_inserter(overlap));
    if (!overlap.empty()) {
        std::string msg = "alphabet overlap {";
        for (size_t i = 0; i < overlap.size(); ++i) {
            if (i) msg += ",";
            msg += overlap[i];
        }
        rep.violation(msg + "}");
    }

    for (const auto& t : l.transitions()) {
        if (t.label.is_action() && !l.in_alphabet(t.label))
            rep.violation("undeclared label '" + t.label.name + "' on transition " +
                          l.state_name(t.src) + " -" + t.label.name + "-> " +
                          l.state_name(t.dst));
    }

    // Tau-cycle detection by DFS over the tau subgraph.
    enum { White, Grey, Black };
    std::vector<int> color(l.num_states(), White);
    std::vector<StateId> stack;
    for (StateId root = 0; root < l.num_states(); ++root) {
        if (color[root] != White) continue;
        // Iterative DFS keeping the grey path for the cycle witness.
        std::vector<std::pair<StateId, size_t>> frames{{root, 0}};
        color[root] = Grey;
        stack = {root};
        while (!frames.empty()) {
            auto& [q, idx] = frames.back();
            const auto& succ = l.tau_successors(q);
            if (idx == succ.size()) {
                color[q] = Black;
                stack.pop_back();
                frames.pop_back();
                continue;
            }
            StateId nxt = succ[idx++];
            if (color[nxt] == Grey) {
                auto it = std::find(stack.begin(), stack.end(), nxt);
                std::vector<StateId> cycle(it, stack.end());
                rep.violation("tau-cycle at " + detail::render_states(l, cycle));
                // Report one cycle per component; stop this DFS.
                frames.clear();
                break;
            }
            if (color[nxt] == White) {
                color[nxt] = Grey;
                stack.push_back(nxt);
                frames.emplace_back(nxt, 0);
            }
        }
        for (StateId q = 0; q < l.num_states(); ++q)
            if (color[q] == Grey) color[q] = Black;
    }
    return rep;
}

// Least superset of x closed under tau steps. Terminates by strong
// convergence (and on any finite system regardless).
inline StateSet epsilon_closure(const Lts& l, const StateSet& x) {
    std::vector<bool> seen(l.num_states(), false);
    std::vector<StateId> work;
    for (StateId q : x.ids) {
        if (!seen[q]) {
            seen[q] = true;
            work.push_back(q);
        }
    }
    while (!work.empty()) {
        StateId q = work.back();
        work.pop_back();
        for (StateId nxt : l.tau_successors(q)) {
            if (!seen[nxt]) {
                seen[nxt] = true;
                work.push_back(nxt);
            }
        }
    }
    StateSet r;
    for (StateId q = 0; q < l.num_states(); ++q)
        if (seen[q]) r.ids.push_back(q);
    return r;
}

// Determinized single step. For an action: all strong successors of the
// ε-closure, then ε-close again. For δ: the quiescent members of the closure
// (δ is a self-loop on quiescent states). Empty result means "not executable".
inline StateSet after_label(const Lts& l, const StateSet& x, const Label& lab) {
    StateSet closed = epsilon_closure(l, x);
    StateSet r;
    if (lab.is_delta()) {
        for (StateId q : closed.ids)
            if (l.quiescent(q)) r.ids.push_back(q);
        return r; // quiescent states have no tau successors; already closed
    }
    if (!lab.is_action())
        throw Error("after: trace labels must be actions or delta");
    for (StateId q : closed.ids)
        for (const auto& [el, dst] : l.edges(q))
            if (el == lab) r.insert(dst);
    return epsilon_closure(l, r);
}

inline StateSet after(const Lts& l, const StateSet& x, const SuspensionTrace& sigma) {
    StateSet cur = epsilon_closure(l, x);
    for (const Label& lab : sigma) {
        cur = after_label(l, cur, lab);
        if (cur.empty()) return cur;
    }
    return cur;
}

inline StateSet after_initial(const Lts& l, const SuspensionTrace& sigma = {}) {
    return after(l, StateSet::single(l.initial()), sigma);
}

// out(X): union of strongly enabled outputs over the ε-closure, plus δ for
// each quiescent member.
inline LabelSet out_set(const Lts& l, const StateSet& x) {
    StateSet closed = epsilon_closure(l, x);
    LabelSet r;
    for (StateId q : closed.ids) {
        if (l.quiescent(q)) r.insert(Label::delta());
        for (const auto& [lab, dst] : l.edges(q)) {
            (void)dst;
            if (l.is_output(lab)) r.insert(lab);
        }
    }
    return r;
}

// Weakly enabled inputs of a single state.
inline LabelSet weak_inputs(const Lts& l, StateId q) {
    StateSet closed = epsilon_closure(l, StateSet::single(q));
    LabelSet r;
    for (StateId p : closed.ids)
        for (const auto& [lab, dst] : l.edges(p)) {
            (void)dst;
            if (l.is_input(lab)) r.insert(lab);
        }
    return r;
}

// in(X): intersection of weakly enabled inputs over the ε-closure. The
// intersection over an empty family is ill-defined; callers guard.
inline LabelSet in_set(const Lts& l, const StateSet& x) {
    StateSet closed = epsilon_closure(l, x);
    if (closed.empty())
        throw EmptyStateSetError("in_set on empty state set");
    LabelSet r = weak_inputs(l, closed.ids[0]);
    for (size_t i = 1; i < closed.ids.size() && !r.empty(); ++i) {
        LabelSet next = weak_inputs(l, closed.ids[i]);
        LabelSet keep;
        std::set_intersection(r.begin(), r.end(), next.begin(), next.end(),
                              std::inserter(keep, keep.begin()));
        r = std::move(keep);
    }
    return r;
}

struct InputEnabledResult {
    bool enabled = true;
    StateId witness_state = -1;
    Label witness_input;
};

// IOTS check: every input weakly enabled in every state.
inline InputEnabledResult is_input_enabled(const Lts& l) {
    for (StateId q = 0; q < l.num_states(); ++q) {
        LabelSet weak = weak_inputs(l, q);
        for (const auto& token : l.inputs()) {
            Label lab = Label::action(token);
            if (!weak.count(lab)) return {false, q, lab};
        }
    }
    return {};
}

} // namespace compotest
