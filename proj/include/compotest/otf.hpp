#pragma once

#include <optional>
#include <string>
#include <vector>

#include "compotest/adapter.hpp"
#include "compotest/compose.hpp"
#include "compotest/conformance.hpp"
#include "compotest/rng.hpp"

namespace compotest {

// Relative case weights. A stop weight of zero means the run only stops when
// the step budget is exhausted; non-interacting SUT inputs (case E) default
// low.
struct OtfWeights {
    double stop = 0.0;
    double send = 1.0;
    double observe = 1.0;
    double env = 1.0;
    double extra = 0.1;
};

struct OtfConfig {
    int max_steps = 100; // >= 1
    uint64_t seed = 0;
    OtfWeights weights;
    int observe_budget_ms = 0; // exact for simulated adapters
};

struct OtfEvent {
    enum class Kind {
        Sent,               // >l   input delivered to the SUT
        Observed,           // <l   output received from the SUT
        ObservedQuiescence, // <δ
        SimulatedEnv,       // ~l   non-interacting environment move (tracker only)
    };
    Kind kind;
    Label label;
    std::string tracker_before;
    std::string tracker_after;
    bool raced = false; // observation that crossed an offered input
};

struct OtfRunLog {
    std::vector<OtfEvent> events;
    bool failed = false;

    std::string render() const {
        std::string out;
        for (const OtfEvent& e : events) {
            switch (e.kind) {
            case OtfEvent::Kind::Sent: out += ">" + e.label.str(); break;
            case OtfEvent::Kind::Observed: out += "<" + e.label.str(); break;
            case OtfEvent::Kind::ObservedQuiescence: out += "<δ"; break;
            case OtfEvent::Kind::SimulatedEnv: out += "~" + e.label.str(); break;
            }
            out += "\n";
        }
        out += failed ? "FAIL\n" : "PASS\n";
        return out;
    }
};

enum class OtfOutcome { Pass, Fail, Aborted };

struct OtfResult {
    OtfOutcome outcome = OtfOutcome::Pass;
    OtfRunLog log;
    std::optional<Counterexample> counterexample;
    std::string abort_reason;

    bool passed() const { return outcome == OtfOutcome::Pass; }
    bool failed() const { return outcome == OtfOutcome::Fail; }
};

namespace detail {

inline std::vector<Label> sorted_labels(const LabelSet& s) { return {s.begin(), s.end()}; }

// The driver loop shared by the three algorithms. A strategy provides the
// choose-sets, tracker updates and fail checks; the loop owns case
// selection, the adapter conversation, race resolution, and logging.
// Adapter transport failures abort the run (neither pass nor fail).
template <typename Strategy>
OtfResult drive(SutAdapter& a, Strategy st, const OtfConfig& cfg) {
    OtfResult result;
    Rng rng(cfg.seed);
    SuspensionTrace trace; // interaction trace for counterexample reporting

    auto record = [&](OtfEvent::Kind kind, const Label& l, const std::string& before,
                      bool raced = false) {
        result.log.events.push_back({kind, l, before, st.render(), raced});
    };

    // Processes one observation (regular or raced); returns false on fail.
    auto handle_observation = [&](const Observation& obs, bool raced) {
        std::string before = st.render();
        std::optional<Counterexample> cex;
        if (obs.quiescence) {
            cex = st.on_quiescence(trace);
            trace.push_back(Label::delta());
            record(OtfEvent::Kind::ObservedQuiescence, Label::delta(), before, raced);
        } else {
            cex = st.on_output(obs.output, trace);
            trace.push_back(obs.output);
            record(OtfEvent::Kind::Observed, obs.output, before, raced);
        }
        if (cex) {
            result.counterexample = std::move(cex);
            return false;
        }
        return true;
    };

    enum { kStop = 0, kSend, kObserve, kEnv, kExtra };
    try {
        for (int step = 0; step < cfg.max_steps; ++step) {
            std::vector<Label> send_set = sorted_labels(st.send_labels());
            std::vector<Label> env_set = sorted_labels(st.env_labels());
            std::vector<Label> extra_set = sorted_labels(st.extra_labels());
            const OtfWeights& w = cfg.weights;
            std::vector<double> weights{w.stop, send_set.empty() ? 0 : w.send, w.observe,
                                        env_set.empty() ? 0 : w.env,
                                        extra_set.empty() ? 0 : w.extra};
            double total = 0;
            for (double v : weights) total += v > 0 ? v : 0;
            if (total <= 0) break; // nothing enabled but stopping
            size_t c = rng.weighted(weights);
            if (c == kStop) break;

            if (c == kSend || c == kExtra) {
                const std::vector<Label>& set = c == kSend ? send_set : extra_set;
                Label l = set[rng.below(set.size())];
                SendResult sr = a.send(l);
                if (!sr.applied) {
                    // An output crossed the offered input: emission order is
                    // preserved by judging the output against the pre-send
                    // tracker; the input was never delivered.
                    if (!handle_observation(Observation::of(*sr.raced_output), true)) {
                        result.outcome = OtfOutcome::Fail;
                        result.log.failed = true;
                        return result;
                    }
                    continue;
                }
                std::string before = st.render();
                st.on_sent(l);
                trace.push_back(l);
                record(OtfEvent::Kind::Sent, l, before);
            } else if (c == kObserve) {
                if (!handle_observation(a.observe(cfg.observe_budget_ms), false)) {
                    result.outcome = OtfOutcome::Fail;
                    result.log.failed = true;
                    return result;
                }
            } else { // kEnv
                Label l = env_set[rng.below(env_set.size())];
                std::string before = st.render();
                st.on_env(l);
                trace.push_back(l);
                record(OtfEvent::Kind::SimulatedEnv, l, before);
            }
        }
    } catch (const UnknownInputError&) {
        throw; // driver bug, not a transport problem
    } catch (const Error& err) {
        result.outcome = OtfOutcome::Aborted;
        result.abort_reason = err.what();
        return result;
    }
    result.outcome = OtfOutcome::Pass;
    return result;
}

} // namespace detail

// On-the-fly eco testing: track the environment specification, feed the SUT
// inputs the environment could produce (or share), and fail exactly when an
// observed output lands outside in(X_e).
inline OtfResult otf_eco(SutAdapter& a, const Lts& e, const OtfConfig& cfg) {
    Alphabet al = a.alphabet();
    for (const auto& t : al.outputs)
        if (e.outputs().count(t))
            throw NotComposableError("SUT output '" + t +
                                     "' collides with environment outputs");

    struct Strategy {
        const Lts& e;
        Alphabet al;
        StateSet x;

        // out(X_e) ∪ in(X_e), actions only.
        LabelSet enabled() const {
            LabelSet r;
            for (const Label& l : out_set(e, x))
                if (l.is_action()) r.insert(l);
            for (const Label& l : in_set(e, x)) r.insert(l);
            return r;
        }
        std::string render() const { return render_state_set(e, x); }
        LabelSet send_labels() const {
            LabelSet r;
            for (const Label& l : enabled())
                if (al.inputs.count(l.name)) r.insert(l);
            return r;
        }
        LabelSet env_labels() const {
            LabelSet r;
            for (const Label& l : enabled())
                if (!al.inputs.count(l.name) && !al.outputs.count(l.name)) r.insert(l);
            return r;
        }
        LabelSet extra_labels() const {
            LabelSet r;
            for (const auto& t : al.inputs)
                if (!e.inputs().count(t) && !e.outputs().count(t))
                    r.insert(Label::action(t));
            return r;
        }
        void on_sent(const Label& l) {
            if (e.in_alphabet(l)) x = after_label(e, x, l);
        }
        void on_env(const Label& l) { x = after_label(e, x, l); }
        std::optional<Counterexample> on_output(const Label& l,
                                                const SuspensionTrace& tr) {
            if (e.inputs().count(l.name)) {
                if (!in_set(e, x).count(l)) return Counterexample{tr, l, kSiteEnv};
                x = after_label(e, x, l);
            }
            // outputs outside I_e: do nothing
            return std::nullopt;
        }
        std::optional<Counterexample> on_quiescence(const SuspensionTrace&) {
            if (out_set(e, x).count(Label::delta()))
                x = after_label(e, x, Label::delta());
            // otherwise: do nothing
            return std::nullopt;
        }
    };
    return detail::drive(a, Strategy{e, al, after_initial(e)}, cfg);
}

// On-the-fly uioco testing: inputs only from in(X_s); fail exactly when the
// tracker empties.
inline OtfResult otf_uioco(SutAdapter& a, const Lts& s, const OtfConfig& cfg) {
    Alphabet al = a.alphabet();
    if (al.inputs != s.inputs() || al.outputs != s.outputs())
        throw AlphabetMismatchError("SUT alphabet differs from specification '" +
                                    s.name() + "'");

    struct Strategy {
        const Lts& s;
        StateSet x;

        std::string render() const { return render_state_set(s, x); }
        LabelSet send_labels() const { return in_set(s, x); }
        LabelSet env_labels() const { return {}; }
        LabelSet extra_labels() const { return {}; }
        void on_sent(const Label& l) { x = after_label(s, x, l); }
        void on_env(const Label&) {}
        std::optional<Counterexample> step(const Label& l, const SuspensionTrace& tr) {
            x = after_label(s, x, l);
            if (x.empty())
                return Counterexample{tr, l, "output not allowed by specification"};
            return std::nullopt;
        }
        std::optional<Counterexample> on_output(const Label& l,
                                                const SuspensionTrace& tr) {
            return step(l, tr);
        }
        std::optional<Counterexample> on_quiescence(const SuspensionTrace& tr) {
            return step(Label::delta(), tr);
        }
    };
    return detail::drive(a, Strategy{s, after_initial(s)}, cfg);
}

// Combined on-the-fly testing: the tracker ranges over states of s ∥ e,
// inputs need agreement of both views, and observations undergo both the
// eco-style and the uioco-style check. δ advances the tracker only for
// system-wide quiescence; component-only quiescence is a θ_s-style internal
// judgment and changes nothing.
inline OtfResult otf_cioco(SutAdapter& a, const Lts& s, const Lts& e,
                           const OtfConfig& cfg) {
    Alphabet al = a.alphabet();
    if (al.inputs != s.inputs() || al.outputs != s.outputs())
        throw AlphabetMismatchError("SUT alphabet differs from specification '" +
                                    s.name() + "'");
    if (!composable(s, e))
        throw NotComposableError("'" + s.name() + "' and '" + e.name() +
                                 "' share output labels");

    struct Strategy {
        const Lts& s;
        const Lts& e;
        ComposedLts comp;
        StateSet x;

        LabelSet joint_enabled() const {
            LabelSet r;
            for (const Label& l : out_set(comp.lts, x))
                if (l.is_action()) r.insert(l);
            for (const Label& l : in_set(comp.lts, x)) r.insert(l);
            return r;
        }
        std::string render() const { return render_state_set(comp.lts, x); }
        LabelSet send_labels() const {
            LabelSet joint = joint_enabled();
            LabelSet r;
            for (const Label& l : in_set(s, comp.project_left(x)))
                if (joint.count(l)) r.insert(l);
            return r;
        }
        LabelSet env_labels() const {
            LabelSet r;
            for (const Label& l : joint_enabled())
                if (!s.in_alphabet(l)) r.insert(l);
            return r;
        }
        LabelSet extra_labels() const { return {}; }
        void on_sent(const Label& l) { x = after_label(comp.lts, x, l); }
        void on_env(const Label& l) { x = after_label(comp.lts, x, l); }
        std::optional<Counterexample> on_output(const Label& l,
                                                const SuspensionTrace& tr) {
            if (e.inputs().count(l.name) && !in_set(e, comp.project_right(x)).count(l))
                return Counterexample{tr, l, kSiteEnv};
            if (!out_set(s, comp.project_left(x)).count(l))
                return Counterexample{tr, l, "output not allowed by specification"};
            x = after_label(comp.lts, x, l);
            return std::nullopt;
        }
        std::optional<Counterexample> on_quiescence(const SuspensionTrace& tr) {
            if (!out_set(s, comp.project_left(x)).count(Label::delta()))
                return Counterexample{tr, Label::delta(),
                                      "quiescence not allowed by specification"};
            if (out_set(comp.lts, x).count(Label::delta()))
                x = after_label(comp.lts, x, Label::delta());
            // component-only quiescence: θ_s, do nothing
            return std::nullopt;
        }
    };
    Strategy st{s, e, compose(s, e), {}};
    st.x = after_initial(st.comp.lts);
    return detail::drive(a, std::move(st), cfg);
}

} // namespace compotest
