#pragma once

// Test-only oracles and generators. Everything here works directly on the
// raw transition graph, state by state, independent of the determinized
// set-based code paths it is used to check.

#include <functional>
#include <set>

#include "compotest/compose.hpp"
#include "compotest/fixtures.hpp"
#include "compotest/lts.hpp"
#include "compotest/rng.hpp"

namespace oracle {

using namespace compotest;

// Def-level quiescence: no transition with an output or tau label.
inline bool quiescent(const Lts& l, StateId q) {
    for (const auto& t : l.transitions())
        if (t.src == q && (t.label.is_tau() || l.is_output(t.label))) return false;
    return true;
}

inline std::set<StateId> tau_closure(const Lts& l, StateId q) {
    std::set<StateId> seen{q};
    std::vector<StateId> work{q};
    while (!work.empty()) {
        StateId cur = work.back();
        work.pop_back();
        for (const auto& t : l.transitions())
            if (t.src == cur && t.label.is_tau() && seen.insert(t.dst).second)
                work.push_back(t.dst);
    }
    return seen;
}

// All q' with q ==sigma==> q', by direct path enumeration over the raw
// transition graph (weak arrows unfolded state by state).
inline std::set<StateId> weak_targets(const Lts& l, StateId q,
                                      const SuspensionTrace& sigma, size_t pos = 0) {
    if (pos == sigma.size()) return tau_closure(l, q);
    std::set<StateId> out;
    for (StateId r : tau_closure(l, q)) {
        if (sigma[pos].is_delta()) {
            if (quiescent(l, r))
                for (StateId t : weak_targets(l, r, sigma, pos + 1)) out.insert(t);
        } else {
            for (const auto& t : l.transitions())
                if (t.src == r && t.label == sigma[pos])
                    for (StateId u : weak_targets(l, t.dst, sigma, pos + 1))
                        out.insert(u);
        }
    }
    return out;
}

inline StateSet after(const Lts& l, const StateSet& x, const SuspensionTrace& sigma) {
    std::set<StateId> out;
    for (StateId q : x.ids)
        for (StateId t : weak_targets(l, q, sigma)) out.insert(t);
    return StateSet({out.begin(), out.end()});
}

inline bool weakly_enables(const Lts& l, StateId q, const Label& lab) {
    return !weak_targets(l, q, {lab}).empty();
}

// Suspension traces executable from the initial state, up to the bound.
inline std::vector<SuspensionTrace> executable_traces(const Lts& l, int depth) {
    std::vector<SuspensionTrace> out{{}};
    LabelSet labels = l.alphabet_labels(true);
    std::vector<SuspensionTrace> frontier{{}};
    for (int d = 0; d < depth; ++d) {
        std::vector<SuspensionTrace> next;
        for (const auto& sigma : frontier) {
            for (const Label& lab : labels) {
                SuspensionTrace ext = sigma;
                ext.push_back(lab);
                if (!weak_targets(l, l.initial(), ext).empty()) {
                    out.push_back(ext);
                    next.push_back(ext);
                }
            }
        }
        frontier = std::move(next);
    }
    return out;
}

// Direct utrace test: executable, and every input along the way enabled
// in all states reachable by the prefix.
inline bool is_utrace(const Lts& l, const SuspensionTrace& sigma) {
    if (weak_targets(l, l.initial(), sigma).empty()) return false;
    for (size_t k = 0; k < sigma.size(); ++k) {
        if (!l.is_input(sigma[k])) continue;
        SuspensionTrace prefix(sigma.begin(), sigma.begin() + k);
        for (StateId q : weak_targets(l, l.initial(), prefix))
            if (!weakly_enables(l, q, sigma[k])) return false;
    }
    return true;
}

inline std::vector<SuspensionTrace> utraces(const Lts& l, int depth) {
    std::vector<SuspensionTrace> out;
    for (const auto& sigma : executable_traces(l, depth))
        if (is_utrace(l, sigma)) out.push_back(sigma);
    return out;
}

// Full-product composition per the three inference rules, then reachable
// restriction; states named like the library's compose().
inline Lts full_composition(const Lts& s, const Lts& e) {
    LtsBuilder b(s.name() + "||" + e.name());
    for (const auto& t : s.inputs())
        if (!e.outputs().count(t)) b.input(t);
    for (const auto& t : e.inputs())
        if (!s.outputs().count(t)) b.input(t);
    for (const auto& t : s.outputs()) b.output(t);
    for (const auto& t : e.outputs()) b.output(t);
    auto name = [&](StateId qs, StateId qe) {
        return "(" + s.state_name(qs) + "," + e.state_name(qe) + ")";
    };
    b.initial(name(s.initial(), e.initial()));
    // all product transitions, unreachable ones included
    std::vector<std::tuple<std::string, std::string, std::string>> trans;
    for (StateId qs = 0; qs < s.num_states(); ++qs)
        for (StateId qe = 0; qe < e.num_states(); ++qe) {
            for (const auto& t : s.transitions()) {
                if (t.src != qs) continue;
                if (t.label.is_tau() || !e.in_alphabet(t.label))
                    trans.emplace_back(name(qs, qe), t.label.token(), name(t.dst, qe));
                else
                    for (const auto& u : e.transitions())
                        if (u.src == qe && u.label == t.label)
                            trans.emplace_back(name(qs, qe), t.label.token(),
                                               name(t.dst, u.dst));
            }
            for (const auto& u : e.transitions()) {
                if (u.src != qe) continue;
                if (u.label.is_tau() || !s.in_alphabet(u.label))
                    trans.emplace_back(name(qs, qe), u.label.token(), name(qs, u.dst));
            }
        }
    // keep only transitions between reachable product states
    std::set<std::string> reach{name(s.initial(), e.initial())};
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& [src, lab, dst] : trans)
            if (reach.count(src) && reach.insert(dst).second) grew = true;
    }
    for (const auto& [src, lab, dst] : trans)
        if (reach.count(src)) b.transition(src, lab, dst);
    return b.build();
}

// Seeded generator of small valid LTSs: tau edges only forward (strong
// convergence by construction).
struct RandomLtsSpec {
    int max_states = 5;
    std::vector<std::string> input_pool{"a", "b", "c"};
    std::vector<std::string> output_pool{"x", "y", "z"};
    int max_labels_per_side = 3;
    double tau_probability = 0.15;
    double edge_density = 0.5;
};

inline Lts random_lts(Rng& rng, const RandomLtsSpec& spec = {},
                      const std::string& name = "rand") {
    int n = 1 + static_cast<int>(rng.below(spec.max_states));
    int ni = static_cast<int>(rng.below(
        std::min<size_t>(spec.input_pool.size(), spec.max_labels_per_side) + 1));
    int nu = static_cast<int>(rng.below(
        std::min<size_t>(spec.output_pool.size(), spec.max_labels_per_side) + 1));
    LtsBuilder b(name);
    std::vector<std::string> ins(spec.input_pool.begin(), spec.input_pool.begin() + ni);
    std::vector<std::string> outs(spec.output_pool.begin(),
                                  spec.output_pool.begin() + nu);
    b.inputs(ins).outputs(outs);
    auto state_name = [](int i) { return "s" + std::to_string(i); };
    for (int i = 0; i < n; ++i) b.state(state_name(i));
    b.initial(state_name(0));
    std::vector<std::string> labels = ins;
    labels.insert(labels.end(), outs.begin(), outs.end());
    int edges = n + static_cast<int>(rng.below(
                        static_cast<uint64_t>(spec.edge_density * 2 * n * 2) + 1));
    for (int k = 0; k < edges; ++k) {
        int src = static_cast<int>(rng.below(n));
        if (!labels.empty() && rng.unit() >= spec.tau_probability) {
            int dst = static_cast<int>(rng.below(n));
            b.transition(state_name(src), labels[rng.below(labels.size())],
                         state_name(dst));
        } else if (src + 1 < n) {
            // forward tau keeps the tau graph acyclic
            int dst = src + 1 + static_cast<int>(rng.below(n - src - 1));
            b.transition(state_name(src), "tau", state_name(dst));
        }
    }
    return b.build();
}

// Same LTS made input-enabled by self-looping every input that is not
// weakly enabled; along utraces this changes nothing, so uioco to the
// original is preserved.
inline Lts input_enabled_completion(const Lts& l) {
    LtsBuilder b(l.name() + "-ioco");
    b.inputs({l.inputs().begin(), l.inputs().end()});
    b.outputs({l.outputs().begin(), l.outputs().end()});
    for (StateId q = 0; q < l.num_states(); ++q) b.state(l.state_name(q));
    b.initial(l.state_name(l.initial()));
    for (const auto& t : l.transitions())
        b.transition(l.state_name(t.src), t.label.token(), l.state_name(t.dst));
    for (StateId q = 0; q < l.num_states(); ++q)
        for (const auto& tok : l.inputs())
            if (!weakly_enables(l, q, Label::action(tok)))
                b.transition(l.state_name(q), tok, l.state_name(q));
    return b.build();
}

} // namespace oracle

namespace fx {

inline compotest::Lts get(const std::string& name) {
    return compotest::fixtures::lts(name);
}

} // namespace fx

// Trace literal helper: t("a", "delta", "b").
inline compotest::SuspensionTrace tr(std::initializer_list<const char*> toks) {
    compotest::SuspensionTrace out;
    for (const char* t : toks) {
        std::string s(t);
        if (s == "delta")
            out.push_back(compotest::Label::delta());
        else if (s == "theta")
            out.push_back(compotest::Label::theta());
        else if (s == "theta_s")
            out.push_back(compotest::Label::theta_s());
        else
            out.push_back(compotest::Label::action(s));
    }
    return out;
}

inline compotest::StateSet named_set(const compotest::Lts& l,
                                     std::initializer_list<const char*> names) {
    compotest::StateSet r;
    for (const char* n : names) r.insert(*l.find_state(n));
    return r;
}
