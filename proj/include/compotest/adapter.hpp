#pragma once

#include <memory>
#include <optional>

#include "compotest/lts.hpp"
#include "compotest/rng.hpp"

namespace compotest {

struct Alphabet {
    std::set<std::string> inputs;
    std::set<std::string> outputs;
};

// Result of observing the SUT for one budget window: either an output or
// quiescence (in real adapters, budget expiry).
struct Observation {
    bool quiescence = false;
    Label output;

    static Observation quiescent() { return {true, {}}; }
    static Observation of(Label l) { return {false, std::move(l)}; }
};

// Outcome of offering an input. SUTs are input-enabled and never refuse an
// input as such, but an output may cross the offered input on the wire; in
// that case the input is NOT applied, the raced output is reported, and the
// driver must process it as an observation before retrying.
struct SendResult {
    bool applied = true;
    std::optional<Label> raced_output;
};

// Contract a driver needs from a system under test. Implementations must be
// input-enabled; observe() reports quiescence only when no output is
// forthcoming within the budget; reset() restores the initial condition.
// One driver owns one adapter for the duration of a run.
class SutAdapter {
public:
    virtual ~SutAdapter() = default;
    virtual SendResult send(const Label& input) = 0;
    virtual Observation observe(int budget_ms) = 0;
    virtual void reset() = 0;
    virtual Alphabet alphabet() const = 0;
};

// Desk-scale stand-in for a black box: wraps an input-enabled Lts and
// resolves its nondeterminism with a seeded generator. Identical seeds give
// identical event sequences. When the implementation holds a pending output,
// send() loses the race against it with probability `race_output_probability`
// (the offered input wins the other half by default).
class SimulatedAdapter final : public SutAdapter {
public:
    SimulatedAdapter(Lts impl, uint64_t seed, double race_output_probability = 0.5)
        : impl_(std::move(impl)),
          seed_(seed),
          race_probability_(race_output_probability),
          rng_(mix_seed(seed, 0)),
          state_(impl_.initial()) {
        InputEnabledResult ie = is_input_enabled(impl_);
        if (!ie.enabled)
            throw NotInputEnabledError("simulated SUT '" + impl_.name() +
                                       "' refuses input '" + ie.witness_input.str() +
                                       "' in state " + impl_.state_name(ie.witness_state));
    }

    SendResult send(const Label& input) override {
        if (!impl_.is_input(input))
            throw UnknownInputError("unknown input '" + input.str() + "'");
        if (race_probability_ > 0 && rng_.unit() < race_probability_) {
            std::optional<Label> out = emit_one();
            if (out) return {false, out};
        }
        // Uniform choice among ε-closure-then-input successors.
        std::vector<StateId> targets;
        for (StateId q : epsilon_closure(impl_, StateSet::single(state_)).ids)
            for (StateId dst : impl_.successors(q, input)) targets.push_back(dst);
        state_ = targets[rng_.below(targets.size())];
        return {true, std::nullopt};
    }

    Observation observe(int) override {
        // Resolve pending τ and outputs by a seeded walk; quiescence is
        // exact (the walk settled in a state with neither).
        while (true) {
            std::vector<std::pair<Label, StateId>> moves;
            for (const auto& [l, dst] : impl_.edges(state_))
                if (l.is_tau() || impl_.is_output(l)) moves.emplace_back(l, dst);
            if (moves.empty()) return Observation::quiescent();
            auto [l, dst] = moves[rng_.below(moves.size())];
            state_ = dst;
            if (!l.is_tau()) return Observation::of(l);
        }
    }

    void reset() override {
        state_ = impl_.initial();
        rng_ = Rng(mix_seed(seed_, ++reset_count_));
    }

    Alphabet alphabet() const override { return {impl_.inputs(), impl_.outputs()}; }

    const Lts& impl() const { return impl_; }
    StateId current_state() const { return state_; }

private:
    // One autonomous step (the output that won the race), if any exists.
    std::optional<Label> emit_one() {
        std::vector<std::pair<Label, StateId>> moves;
        StateId q = state_;
        while (true) {
            moves.clear();
            for (const auto& [l, dst] : impl_.edges(q))
                if (l.is_tau() || impl_.is_output(l)) moves.emplace_back(l, dst);
            if (moves.empty()) return std::nullopt; // quiescent: no race
            auto [l, dst] = moves[rng_.below(moves.size())];
            q = dst;
            if (!l.is_tau()) {
                state_ = q;
                return l;
            }
        }
    }

    Lts impl_;
    uint64_t seed_;
    double race_probability_;
    Rng rng_;
    StateId state_;
    int reset_count_ = 0;
};

inline std::unique_ptr<SutAdapter> simulate_adapter(const Lts& impl, uint64_t seed,
                                                    double race_output_probability = 0.5) {
    return std::make_unique<SimulatedAdapter>(impl, seed, race_output_probability);
}

} // namespace compotest
