#pragma once

#include <map>
#include <utility>
#include <vector>

#include "compotest/lts.hpp"

namespace compotest {

// Composable: disjoint output sets. Inputs may overlap anything.
inline bool composable(const Lts& s, const Lts& e) {
    for (const auto& u : s.outputs())
        if (e.outputs().count(u)) return false;
    return true;
}

// Reachable parallel composition s ∥ e with the pair bookkeeping needed by
// the combined algorithms (π1/π2 and counterexample reporting in terms of
// component states).
struct ComposedLts {
    Lts lts;
    std::vector<std::pair<StateId, StateId>> pair_of; // composed id -> (left, right)
    std::map<std::pair<StateId, StateId>, StateId> id_of;

    StateSet project_left(const StateSet& x) const {
        StateSet r;
        for (StateId q : x.ids) r.insert(pair_of[q].first);
        return r;
    }
    StateSet project_right(const StateSet& x) const {
        StateSet r;
        for (StateId q : x.ids) r.insert(pair_of[q].second);
        return r;
    }
};

// Componentwise projections of a set of state pairs.
inline std::pair<StateSet, StateSet>
collect_tuple(const std::vector<std::pair<StateId, StateId>>& pairs) {
    StateSet left, right;
    for (const auto& [a, b] : pairs) {
        left.insert(a);
        right.insert(b);
    }
    return {left, right};
}

inline ComposedLts compose(const Lts& s, const Lts& e) {
    if (!composable(s, e))
        throw NotComposableError("output sets of '" + s.name() + "' and '" + e.name() +
                                 "' are not disjoint");

    auto in_left = [&](const Label& l) { return s.in_alphabet(l); };
    auto in_right = [&](const Label& l) { return e.in_alphabet(l); };

    LtsBuilder b(s.name().empty() && e.name().empty() ? std::string{}
                                                      : s.name() + "||" + e.name());
    // I = (I_s \ U_e) ∪ (I_e \ U_s); U = U_s ∪ U_e. A label shared between
    // U of one side and I of the other stays an output of the composition.
    for (const auto& t : s.inputs())
        if (!e.outputs().count(t)) b.input(t);
    for (const auto& t : e.inputs())
        if (!s.outputs().count(t)) b.input(t);
    for (const auto& t : s.outputs()) b.output(t);
    for (const auto& t : e.outputs()) b.output(t);

    ComposedLts result;
    auto pair_name = [&](StateId qs, StateId qe) {
        return "(" + s.state_name(qs) + "," + e.state_name(qe) + ")";
    };
    auto intern = [&](StateId qs, StateId qe) {
        auto key = std::make_pair(qs, qe);
        auto it = result.id_of.find(key);
        if (it != result.id_of.end()) return std::make_pair(it->second, false);
        StateId id = b.state(pair_name(qs, qe));
        result.id_of.emplace(key, id);
        result.pair_of.push_back(key);
        return std::make_pair(id, true);
    };

    b.initial(pair_name(s.initial(), e.initial()));
    std::vector<std::pair<StateId, StateId>> work;
    intern(s.initial(), e.initial());
    work.emplace_back(s.initial(), e.initial());

    while (!work.empty()) {
        auto [qs, qe] = work.back();
        work.pop_back();
        std::string src = pair_name(qs, qe);
        auto push = [&](const Label& l, StateId ns, StateId ne) {
            auto [id, fresh] = intern(ns, ne);
            (void)id;
            b.transition(src, l.token(), pair_name(ns, ne));
            if (fresh) work.emplace_back(ns, ne);
        };
        // Rule 1: s moves alone on (L_s ∪ {τ}) \ L_e.
        for (const auto& [l, dst] : s.edges(qs))
            if (l.is_tau() || !in_right(l)) push(l, dst, qe);
        // Rule 2: e moves alone on (L_e ∪ {τ}) \ L_s.
        for (const auto& [l, dst] : e.edges(qe))
            if (l.is_tau() || !in_left(l)) push(l, qs, dst);
        // Rule 3: synchronized step on L_s ∩ L_e.
        for (const auto& [l, ds] : s.edges(qs)) {
            if (l.is_tau() || !in_right(l)) continue;
            for (const auto& [le, de] : e.edges(qe))
                if (le == l) push(l, ds, de);
        }
    }

    result.lts = b.build();
    return result;
}

} // namespace compotest
