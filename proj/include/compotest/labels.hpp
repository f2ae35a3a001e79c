#pragma once

#include <cassert>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "compotest/errors.hpp"

namespace compotest {

// Kind order matters: counterexample tie-breaking sorts actions first
// (lexicographic by token), then delta. Tau never appears in traces.
enum class LabelKind { Action, Delta, Theta, ThetaS, Tau };

// Alphabet symbol. Direction (input vs output) is not part of the label; it
// is derived from the alphabet partition of whichever LTS is in scope.
struct Label {
    LabelKind kind = LabelKind::Tau;
    std::string name; // nonempty iff kind == Action

    static Label action(std::string token) { return {LabelKind::Action, std::move(token)}; }
    static Label tau() { return {LabelKind::Tau, {}}; }
    static Label delta() { return {LabelKind::Delta, {}}; }
    static Label theta() { return {LabelKind::Theta, {}}; }
    static Label theta_s() { return {LabelKind::ThetaS, {}}; }

    bool is_action() const { return kind == LabelKind::Action; }
    bool is_tau() const { return kind == LabelKind::Tau; }
    bool is_delta() const { return kind == LabelKind::Delta; }

    bool operator==(const Label& o) const { return kind == o.kind && name == o.name; }
    bool operator!=(const Label& o) const { return !(*this == o); }
    bool operator<(const Label& o) const {
        return std::tie(kind, name) < std::tie(o.kind, o.name);
    }

    // Keyword form used by the file formats ("tau", "delta", ...).
    std::string token() const {
        switch (kind) {
        case LabelKind::Action: return name;
        case LabelKind::Delta: return "delta";
        case LabelKind::Theta: return "theta";
        case LabelKind::ThetaS: return "theta_s";
        case LabelKind::Tau: return "tau";
        }
        return {};
    }

    // Display form used in counterexamples and logs.
    std::string str() const {
        switch (kind) {
        case LabelKind::Action: return name;
        case LabelKind::Delta: return "δ";           // δ
        case LabelKind::Theta: return "θ";           // θ
        case LabelKind::ThetaS: return "θ_s";        // θ_s
        case LabelKind::Tau: return "τ";             // τ
        }
        return {};
    }
};

using LabelSet = std::set<Label>;

// Sequence over actions plus delta (suspension trace); test traces may also
// carry theta/theta_s. Tau is never recorded in a trace.
using SuspensionTrace = std::vector<Label>;

inline bool is_reserved_token(const std::string& t) {
    return t == "tau" || t == "delta" || t == "theta" || t == "theta_s";
}

inline bool is_valid_action_token(const std::string& t) {
    if (t.empty() || is_reserved_token(t)) return false;
    for (char c : t) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                  (c >= '0' && c <= '9') || c == '_' || c == '.' || c == '-';
        if (!ok) return false;
    }
    return true;
}

inline Label make_action(const std::string& token) {
    if (!is_valid_action_token(token))
        throw Error("invalid action token: '" + token + "'");
    return Label::action(token);
}

// Keep exactly the labels in `keep`; ε maps to ε.
inline SuspensionTrace project(const SuspensionTrace& sigma, const LabelSet& keep) {
    SuspensionTrace out;
    for (const Label& l : sigma)
        if (keep.count(l)) out.push_back(l);
    return out;
}

// Replace every occurrence of `from` by `to`.
inline SuspensionTrace substitute(const SuspensionTrace& sigma, const Label& from,
                                  const Label& to) {
    assert(!(from == to));
    SuspensionTrace out;
    out.reserve(sigma.size());
    for (const Label& l : sigma) out.push_back(l == from ? to : l);
    return out;
}

inline std::string render_trace(const SuspensionTrace& sigma) {
    if (sigma.empty()) return "ε"; // ε
    std::string out;
    for (size_t i = 0; i < sigma.size(); ++i) {
        if (i) out += " · "; // ·
        out += sigma[i].str();
    }
    return out;
}

} // namespace compotest
