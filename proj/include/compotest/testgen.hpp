#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "compotest/compose.hpp"
#include "compotest/conformance.hpp"
#include "compotest/rng.hpp"
#include "compotest/testcase.hpp"

namespace compotest {

// Relative weights for the generator cases: stop testing (A), send an input
// (B), wait/observe (C), simulate non-interacting environment behaviour (D),
// send a non-interacting input (E; eco only).
struct GenWeights {
    double stop = 0.0;
    double send = 1.0;
    double observe = 1.0;
    double env = 1.0;
    double extra = 0.1;
};

// Resolves the nondeterministic case choice of the generation algorithms.
//  - random: weighted case draw per node, stopping by probability/depth cap.
//  - directed: follow a target trace; SUT outputs in the trace become
//    observation spines, SUT inputs and environment moves become emissions,
//    δ becomes a quiescence observation. All off-spine branches stop.
//  - exhaustive: used with the suite generators; as a single-test policy it
//    yields the pure-observation root test (the first suite element).
struct GenPolicy {
    enum class Mode { Random, Directed, Exhaustive };
    Mode mode = Mode::Random;
    uint64_t seed = 0;
    GenWeights weights;
    double stop_probability = 0.25;
    SuspensionTrace target;
    int depth_cap = 8;

    static GenPolicy random(uint64_t seed, int depth_cap = 8, GenWeights w = {},
                            double stop_probability = 0.25) {
        GenPolicy p;
        p.mode = Mode::Random;
        p.seed = seed;
        p.depth_cap = depth_cap;
        p.weights = w;
        p.stop_probability = stop_probability;
        return p;
    }
    static GenPolicy directed(SuspensionTrace target) {
        GenPolicy p;
        p.mode = Mode::Directed;
        p.target = std::move(target);
        p.depth_cap = static_cast<int>(p.target.size()) + 1;
        return p;
    }
    static GenPolicy exhaustive(int depth) {
        GenPolicy p;
        p.mode = Mode::Exhaustive;
        p.depth_cap = depth;
        return p;
    }
};

namespace detail {

struct ThetaBranch {
    enum class Kind { FailEdge, Advance, ComponentOnly };
    Kind kind;
    StateSet next; // Advance: tracker after δ; ComponentOnly: unchanged
};

// How a node reacts to each possible SUT output: FAIL edge or a
// continuation with the updated tracker.
struct Response {
    Label label;
    std::optional<StateSet> next; // nullopt -> FAIL
};

// One test-generation family (eco or combined): tracker transitions,
// choose-sets per case, the θ rule, and the input-response fan-out.
class GenFamily {
public:
    virtual ~GenFamily() = default;
    virtual StateSet initial() const = 0;
    virtual LabelSet inputs() const = 0;  // I_t
    virtual LabelSet outputs() const = 0; // U_t
    virtual LabelSet emit_send(const StateSet& x) const = 0;    // case B
    virtual LabelSet emit_env(const StateSet& x) const = 0;     // case D
    virtual LabelSet emit_extra(const StateSet& x) const = 0;   // case E
    virtual StateSet advance_send(const StateSet& x, const Label& l) const = 0;
    virtual StateSet advance_env(const StateSet& x, const Label& l) const = 0;
    virtual StateSet advance_extra(const StateSet& x, const Label& l) const = 0;
    virtual ThetaBranch theta(const StateSet& x) const = 0;
    virtual std::vector<Response> responses(const StateSet& x) const = 0;
};

// Algorithm family for eco test generation against an environment
// specification, knowing only the SUT's alphabet.
class EcoGenFamily final : public GenFamily {
public:
    EcoGenFamily(const Lts& e, std::set<std::string> sut_inputs,
                 std::set<std::string> sut_outputs)
        : e_(e), sut_inputs_(std::move(sut_inputs)), sut_outputs_(std::move(sut_outputs)) {
        for (const auto& t : sut_outputs_)
            if (e_.outputs().count(t))
                throw NotComposableError("SUT output '" + t +
                                         "' collides with environment outputs");
        for (const auto& t : sut_inputs_)
            if (sut_outputs_.count(t))
                throw Error("SUT alphabet overlaps: '" + t + "'");
    }

    StateSet initial() const override { return after_initial(e_); }

    LabelSet inputs() const override {
        LabelSet r;
        for (const auto& t : sut_outputs_)
            if (e_.inputs().count(t)) r.insert(Label::action(t));
        r.insert(Label::theta());
        return r;
    }
    LabelSet outputs() const override {
        LabelSet r = e_.output_labels();
        for (const auto& t : e_.inputs())
            if (!sut_outputs_.count(t)) r.insert(Label::action(t));
        for (const auto& t : sut_inputs_)
            if (!e_.inputs().count(t) && !e_.outputs().count(t))
                r.insert(Label::action(t));
        return r;
    }

    LabelSet emit_send(const StateSet& x) const override {
        LabelSet r;
        for (const Label& l : enabled(x))
            if (sut_inputs_.count(l.name)) r.insert(l);
        return r;
    }
    LabelSet emit_env(const StateSet& x) const override {
        LabelSet r;
        for (const Label& l : enabled(x))
            if (!sut_inputs_.count(l.name) && !sut_outputs_.count(l.name)) r.insert(l);
        return r;
    }
    LabelSet emit_extra(const StateSet&) const override {
        LabelSet r;
        for (const auto& t : sut_inputs_)
            if (!e_.inputs().count(t) && !e_.outputs().count(t))
                r.insert(Label::action(t));
        return r;
    }

    StateSet advance_send(const StateSet& x, const Label& l) const override {
        return after_label(e_, x, l);
    }
    StateSet advance_env(const StateSet& x, const Label& l) const override {
        return after_label(e_, x, l);
    }
    StateSet advance_extra(const StateSet& x, const Label&) const override { return x; }

    // Quiescence of the SUT never fails an eco test; the tracker moves only
    // when the environment could be quiescent as well.
    ThetaBranch theta(const StateSet& x) const override {
        if (out_set(e_, x).count(Label::delta()))
            return {ThetaBranch::Kind::Advance, after_label(e_, x, Label::delta())};
        return {ThetaBranch::Kind::ComponentOnly, x};
    }

    std::vector<Response> responses(const StateSet& x) const override {
        LabelSet accepted = in_set(e_, x);
        std::vector<Response> r;
        for (const auto& t : sut_outputs_) {
            if (!e_.inputs().count(t)) continue; // invisible to the test
            Label l = Label::action(t);
            if (accepted.count(l))
                r.push_back({l, after_label(e_, x, l)});
            else
                r.push_back({l, std::nullopt});
        }
        return r;
    }

private:
    // out(X_e) ∪ in(X_e) restricted to actions.
    LabelSet enabled(const StateSet& x) const {
        LabelSet r;
        for (const Label& l : out_set(e_, x))
            if (l.is_action()) r.insert(l);
        for (const Label& l : in_set(e_, x)) r.insert(l);
        return r;
    }
    const Lts& e_;
    std::set<std::string> sut_inputs_, sut_outputs_;
};

// Algorithm family for combined (cioco) test generation over the reachable
// composition of the SUT specification s and environment specification e.
class CombinedGenFamily final : public GenFamily {
public:
    CombinedGenFamily(const Lts& s, const Lts& e)
        : s_(s), e_(e), comp_(compose(s, e)) {}

    const ComposedLts& composed() const { return comp_; }

    StateSet initial() const override { return after_initial(comp_.lts); }

    LabelSet inputs() const override {
        LabelSet r = s_.output_labels();
        r.insert(Label::theta());
        r.insert(Label::theta_s());
        return r;
    }
    LabelSet outputs() const override {
        LabelSet r = e_.output_labels();
        for (const auto& t : e_.inputs())
            if (!s_.outputs().count(t)) r.insert(Label::action(t));
        for (const auto& t : s_.inputs())
            if (!e_.inputs().count(t) && !e_.outputs().count(t))
                r.insert(Label::action(t));
        return r;
    }

    // Inputs agreed on by both views: enabled in every reachable s-state and
    // present in the composed behaviour.
    LabelSet emit_send(const StateSet& x) const override {
        LabelSet joint = composed_enabled(x);
        LabelSet r;
        for (const Label& l : in_set(s_, comp_.project_left(x)))
            if (joint.count(l)) r.insert(l);
        return r;
    }
    LabelSet emit_env(const StateSet& x) const override {
        LabelSet r;
        for (const Label& l : composed_enabled(x))
            if (!s_.in_alphabet(l)) r.insert(l);
        return r;
    }
    LabelSet emit_extra(const StateSet&) const override { return {}; }

    StateSet advance_send(const StateSet& x, const Label& l) const override {
        return after_label(comp_.lts, x, l);
    }
    StateSet advance_env(const StateSet& x, const Label& l) const override {
        return after_label(comp_.lts, x, l);
    }
    StateSet advance_extra(const StateSet& x, const Label&) const override { return x; }

    // Three-way θ rule: quiescence the SUT's own specification forbids is a
    // failure; system-wide quiescence advances the tracker; quiescence that
    // only the component may show is observed as θ_s and changes nothing.
    ThetaBranch theta(const StateSet& x) const override {
        if (!out_set(s_, comp_.project_left(x)).count(Label::delta()))
            return {ThetaBranch::Kind::FailEdge, {}};
        if (out_set(comp_.lts, x).count(Label::delta()))
            return {ThetaBranch::Kind::Advance, after_label(comp_.lts, x, Label::delta())};
        return {ThetaBranch::Kind::ComponentOnly, x};
    }

    std::vector<Response> responses(const StateSet& x) const override {
        LabelSet out_joint = out_set(comp_.lts, x);
        LabelSet in_env = in_set(e_, comp_.project_right(x));
        std::vector<Response> r;
        for (const auto& t : s_.outputs()) {
            Label l = Label::action(t);
            bool in_e_alphabet = e_.in_alphabet(l);
            bool cont = out_joint.count(l) && (!in_e_alphabet || in_env.count(l));
            if (cont)
                r.push_back({l, after_label(comp_.lts, x, l)});
            else
                r.push_back({l, std::nullopt});
        }
        return r;
    }

private:
    LabelSet composed_enabled(const StateSet& x) const {
        LabelSet r;
        for (const Label& l : out_set(comp_.lts, x))
            if (l.is_action()) r.insert(l);
        for (const Label& l : in_set(comp_.lts, x)) r.insert(l);
        return r;
    }
    const Lts& s_;
    const Lts& e_;
    ComposedLts comp_;
};

// Builds test trees from a family under a policy. Every interior node keeps
// the tracker set that generated it. Node identity is the generation path,
// so equal tracker sets at different positions stay distinct nodes.
class TestBuilder {
public:
    TestBuilder(const GenFamily& fam, const GenPolicy& policy)
        : fam_(fam), policy_(policy), rng_(policy.seed) {}

    TestCase build(std::string name) {
        TestCase t;
        t.name = std::move(name);
        t.inputs = fam_.inputs();
        t.outputs = fam_.outputs();
        test_ = &t;
        switch (policy_.mode) {
        case GenPolicy::Mode::Random:
            t.root = gen_random(fam_.initial(), 0);
            break;
        case GenPolicy::Mode::Directed:
        case GenPolicy::Mode::Exhaustive:
            t.root = gen_directed(fam_.initial(), 0);
            break;
        }
        test_ = nullptr;
        return t;
    }

private:
    enum class Case { Stop, Send, Observe, Env, Extra };

    int new_node(const StateSet& x) {
        test_->nodes.emplace_back();
        test_->node_sets.push_back(x);
        return static_cast<int>(test_->nodes.size()) - 1;
    }
    void add_edge(int node, const Label& l, NodeRef target) {
        test_->nodes[node].edges.push_back({l, target});
    }

    // The fan-out shared by cases B-E: FAIL edges for outputs the
    // environment view rejects, continuation edges for accepted ones.
    // Receptivity of the generated tree rests on this covering all SUT
    // outputs, so that is asserted rather than assumed.
    void add_responses(int node, const StateSet& x,
                       const std::function<NodeRef(const StateSet&)>& recurse) {
        LabelSet covered;
        for (const detail::Response& resp : fam_.responses(x)) {
            covered.insert(resp.label);
            if (resp.next)
                add_edge(node, resp.label, recurse(*resp.next));
            else
                add_edge(node, resp.label, NodeRef::fail());
        }
        LabelSet expected = fam_.inputs();
        expected.erase(Label::theta());
        expected.erase(Label::theta_s());
        if (covered != expected)
            throw Error("input responses do not cover the SUT outputs");
    }

    // `main` continues the case's own branch (emitted label or θ); `respond`
    // continues the input-response edges. Random generation recurses on
    // both; directed generation keeps the script on the main branch only.
    NodeRef gen_case(const StateSet& x, Case c, const Label& emit,
                     const std::function<NodeRef(const StateSet&)>& main,
                     const std::function<NodeRef(const StateSet&)>& respond) {
        if (c == Case::Stop) return NodeRef::pass();
        int node = new_node(x);
        switch (c) {
        case Case::Send:
            add_edge(node, emit, main(fam_.advance_send(x, emit)));
            break;
        case Case::Env:
            add_edge(node, emit, main(fam_.advance_env(x, emit)));
            break;
        case Case::Extra:
            add_edge(node, emit, main(fam_.advance_extra(x, emit)));
            break;
        case Case::Observe: {
            detail::ThetaBranch br = fam_.theta(x);
            switch (br.kind) {
            case detail::ThetaBranch::Kind::FailEdge:
                add_edge(node, Label::theta(), NodeRef::fail());
                break;
            case detail::ThetaBranch::Kind::Advance:
                add_edge(node, Label::theta(), main(br.next));
                break;
            case detail::ThetaBranch::Kind::ComponentOnly:
                add_edge(node,
                         test_->inputs.count(Label::theta_s()) ? Label::theta_s()
                                                               : Label::theta(),
                         main(br.next));
                break;
            }
            break;
        }
        case Case::Stop:
            break;
        }
        add_responses(node, x, respond);
        return NodeRef::node(node);
    }

    NodeRef gen_random(const StateSet& x, int depth) {
        if (depth >= policy_.depth_cap) return NodeRef::pass();
        if (policy_.stop_probability > 0 && rng_.unit() < policy_.stop_probability)
            return NodeRef::pass();

        std::vector<Case> cases{Case::Stop, Case::Send, Case::Observe, Case::Env,
                                Case::Extra};
        std::vector<LabelSet> choices{{},
                                      fam_.emit_send(x),
                                      {},
                                      fam_.emit_env(x),
                                      fam_.emit_extra(x)};
        const GenWeights& w = policy_.weights;
        std::vector<double> weights{w.stop, choices[1].empty() ? 0 : w.send, w.observe,
                                    choices[3].empty() ? 0 : w.env,
                                    choices[4].empty() ? 0 : w.extra};
        double total = 0;
        for (double v : weights) total += v > 0 ? v : 0;
        if (total <= 0) return NodeRef::pass();

        Case c = cases[rng_.weighted(weights)];
        Label emit;
        if (c == Case::Send || c == Case::Env || c == Case::Extra) {
            const LabelSet& set = choices[c == Case::Send ? 1 : (c == Case::Env ? 3 : 4)];
            std::vector<Label> v(set.begin(), set.end());
            emit = v[rng_.below(v.size())];
        }
        auto recurse = [&](const StateSet& nx) { return gen_random(nx, depth + 1); };
        return gen_case(x, c, emit, recurse, recurse);
    }

    // Directed generation. `offset` indexes into policy_.target; off-spine
    // recursion sites stop with PASS. The node after the last step takes one
    // final observation so trailing misbehaviour is still judged.
    NodeRef gen_directed(const StateSet& x, size_t offset) {
        auto stop = [&](const StateSet&) { return NodeRef::pass(); };
        if (offset >= policy_.target.size())
            return gen_case(x, Case::Observe, {}, stop, stop);

        const Label& head = policy_.target[offset];
        if (head.is_delta() || head.kind == LabelKind::Theta ||
            head.kind == LabelKind::ThetaS) {
            detail::ThetaBranch br = fam_.theta(x);
            if (br.kind == detail::ThetaBranch::Kind::FailEdge)
                throw DirectedInfeasibleError(
                    "directed step " + std::to_string(offset) +
                    ": quiescence is a failure here, cannot continue through it");
            int node = new_node(x);
            Label edge = br.kind == detail::ThetaBranch::Kind::ComponentOnly &&
                                 test_->inputs.count(Label::theta_s())
                             ? Label::theta_s()
                             : Label::theta();
            add_edge(node, edge, gen_directed(br.next, offset + 1));
            add_responses(node, x, stop);
            return NodeRef::node(node);
        }
        if (!head.is_action())
            throw DirectedInfeasibleError("directed trace may not contain tau");

        LabelSet observable = fam_.inputs();
        if (observable.count(head)) {
            // Observation spine: a case-C node whose continuation for `head`
            // carries the rest of the script.
            for (const detail::Response& resp : fam_.responses(x)) {
                if (!(resp.label == head)) continue;
                if (!resp.next)
                    throw DirectedInfeasibleError("directed step " +
                                                  std::to_string(offset) + ": output '" +
                                                  head.str() + "' is rejected here");
                int node = new_node(x);
                detail::ThetaBranch br = fam_.theta(x);
                switch (br.kind) {
                case detail::ThetaBranch::Kind::FailEdge:
                    add_edge(node, Label::theta(), NodeRef::fail());
                    break;
                case detail::ThetaBranch::Kind::Advance:
                    add_edge(node, Label::theta(), NodeRef::pass());
                    break;
                case detail::ThetaBranch::Kind::ComponentOnly:
                    add_edge(node,
                             test_->inputs.count(Label::theta_s()) ? Label::theta_s()
                                                                   : Label::theta(),
                             NodeRef::pass());
                    break;
                }
                for (const detail::Response& r2 : fam_.responses(x)) {
                    if (r2.label == head)
                        add_edge(node, r2.label, gen_directed(*r2.next, offset + 1));
                    else if (r2.next)
                        add_edge(node, r2.label, NodeRef::pass());
                    else
                        add_edge(node, r2.label, NodeRef::fail());
                }
                return NodeRef::node(node);
            }
            throw DirectedInfeasibleError("directed step " + std::to_string(offset) +
                                          ": '" + head.str() +
                                          "' is not an observable SUT output");
        }

        auto spine = [&](const StateSet& nx) { return gen_directed(nx, offset + 1); };
        if (fam_.emit_send(x).count(head))
            return gen_case(x, Case::Send, head, spine, stop);
        if (fam_.emit_extra(x).count(head))
            return gen_case(x, Case::Extra, head, spine, stop);
        if (fam_.emit_env(x).count(head))
            return gen_case(x, Case::Env, head, spine, stop);
        throw DirectedInfeasibleError("directed step " + std::to_string(offset) + ": '" +
                                      head.str() + "' is not available here");
    }

    const GenFamily& fam_;
    GenPolicy policy_;
    Rng rng_;
    TestCase* test_ = nullptr;
};

// All spine scripts of length <= depth, breadth-first and lexicographic
// within a length. Each script resolves to one directed test; together they
// exercise every behaviour the nondeterministic algorithm can reach within
// the bound.
inline bool for_each_script(const GenFamily& fam, int depth,
                            const std::function<bool(const SuspensionTrace&)>& visit) {
    struct Item {
        StateSet x;
        SuspensionTrace script;
    };
    std::deque<Item> queue{{fam.initial(), {}}};
    while (!queue.empty()) {
        Item item = std::move(queue.front());
        queue.pop_front();
        if (!visit(item.script)) return false;
        if ((int)item.script.size() >= depth) continue;

        std::map<Label, StateSet> steps;
        detail::ThetaBranch br = fam.theta(item.x);
        if (br.kind != detail::ThetaBranch::Kind::FailEdge)
            steps.emplace(Label::delta(), br.next);
        for (const detail::Response& r : fam.responses(item.x))
            if (r.next) steps.emplace(r.label, *r.next);
        for (const Label& l : fam.emit_send(item.x))
            steps.emplace(l, fam.advance_send(item.x, l));
        for (const Label& l : fam.emit_env(item.x))
            steps.emplace(l, fam.advance_env(item.x, l));
        for (const Label& l : fam.emit_extra(item.x))
            steps.emplace(l, fam.advance_extra(item.x, l));

        for (const auto& [l, nx] : steps) {
            Item next{nx, item.script};
            next.script.push_back(l);
            queue.push_back(std::move(next));
        }
    }
    return true;
}

} // namespace detail

inline TestCase gen_eco_test(const Lts& e, const std::set<std::string>& sut_inputs,
                             const std::set<std::string>& sut_outputs,
                             const GenPolicy& policy, std::string name = "eco-test") {
    detail::EcoGenFamily fam(e, sut_inputs, sut_outputs);
    return detail::TestBuilder(fam, policy).build(std::move(name));
}

inline TestCase gen_combined_test(const Lts& s, const Lts& e, const GenPolicy& policy,
                                  std::string name = "cioco-test") {
    if (!composable(s, e))
        throw NotComposableError("'" + s.name() + "' and '" + e.name() +
                                 "' share output labels");
    detail::CombinedGenFamily fam(s, e);
    return detail::TestBuilder(fam, policy).build(std::move(name));
}

// Lazy bounded-exhaustive enumeration; `visit` returns false to stop early.
inline void for_each_eco_test(const Lts& e, const std::set<std::string>& sut_inputs,
                              const std::set<std::string>& sut_outputs, int depth,
                              const std::function<bool(TestCase&&)>& visit) {
    detail::EcoGenFamily fam(e, sut_inputs, sut_outputs);
    int n = 0;
    detail::for_each_script(fam, depth, [&](const SuspensionTrace& script) {
        detail::TestBuilder builder(fam, GenPolicy::directed(script));
        return visit(builder.build("eco-test-" + std::to_string(n++)));
    });
}

inline void for_each_combined_test(const Lts& s, const Lts& e, int depth,
                                   const std::function<bool(TestCase&&)>& visit) {
    if (!composable(s, e))
        throw NotComposableError("'" + s.name() + "' and '" + e.name() +
                                 "' share output labels");
    detail::CombinedGenFamily fam(s, e);
    int n = 0;
    detail::for_each_script(fam, depth, [&](const SuspensionTrace& script) {
        detail::TestBuilder builder(fam, GenPolicy::directed(script));
        return visit(builder.build("cioco-test-" + std::to_string(n++)));
    });
}

inline std::vector<TestCase> gen_eco_suite(const Lts& e,
                                           const std::set<std::string>& sut_inputs,
                                           const std::set<std::string>& sut_outputs,
                                           int depth) {
    std::vector<TestCase> suite;
    for_each_eco_test(e, sut_inputs, sut_outputs, depth, [&](TestCase&& t) {
        suite.push_back(std::move(t));
        return true;
    });
    return suite;
}

inline std::vector<TestCase> gen_combined_suite(const Lts& s, const Lts& e, int depth) {
    std::vector<TestCase> suite;
    for_each_combined_test(s, e, depth, [&](TestCase&& t) {
        suite.push_back(std::move(t));
        return true;
    });
    return suite;
}

} // namespace compotest
