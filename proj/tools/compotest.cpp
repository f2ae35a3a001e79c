// Command-line surface of the toolkit. Exit codes: 0 = pass/ok,
// 1 = fail/violation (counterexample on stdout), 2 = usage or parse error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "compotest/adapter.hpp"
#include "compotest/conformance.hpp"
#include "compotest/fixtures.hpp"
#include "compotest/io.hpp"
#include "compotest/otf.hpp"
#include "compotest/testexec.hpp"
#include "compotest/testgen.hpp"

using namespace compotest;

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string stem_of(const std::string& path) {
    size_t slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    size_t dot = base.find_last_of('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
}

Lts load_lts(const std::string& path) { return parse_lts(read_file(path), stem_of(path)); }

uint64_t default_seed() {
    if (const char* env = std::getenv("COMPOTEST_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            throw Error("COMPOTEST_SEED is not a number");
        }
    }
    return 0;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

SuspensionTrace parse_trace_arg(const std::string& s) {
    SuspensionTrace out;
    for (const auto& tok : split_commas(s)) {
        if (tok == "delta" || tok == "theta")
            out.push_back(Label::delta());
        else if (tok == "theta_s")
            out.push_back(Label::theta_s());
        else
            out.push_back(make_action(tok));
    }
    return out;
}

std::string render_eco_pair(const Lts& s, const Lts& e, const EcoPair& p) {
    return "(" + render_state_set(s, p.first) + "," + render_state_set(e, p.second) + ")";
}

struct GenOptions {
    std::string mode = "random";
    uint64_t seed = 0;
    int depth = 6;
    std::string trace;
    double stop_probability = 0.25;

    GenPolicy policy() const {
        if (mode == "random") {
            GenPolicy p = GenPolicy::random(seed, depth);
            p.stop_probability = stop_probability;
            return p;
        }
        if (mode == "directed") return GenPolicy::directed(parse_trace_arg(trace));
        if (mode == "exhaustive") return GenPolicy::exhaustive(depth);
        throw Error("unknown mode '" + mode + "'");
    }
};

void add_gen_options(CLI::App* cmd, GenOptions& o) {
    cmd->add_option("--mode", o.mode, "random|exhaustive|directed")
        ->check(CLI::IsMember({"random", "exhaustive", "directed"}));
    cmd->add_option("--seed", o.seed, "generator seed (random mode)");
    cmd->add_option("--depth", o.depth, "tree depth bound");
    cmd->add_option("--trace", o.trace, "comma separated target trace (directed mode)");
    cmd->add_option("--stop-prob", o.stop_probability, "stop probability per node");
}

struct OtfOptions {
    std::string sut, spec, env;
    int steps = 100;
    uint64_t seed = 0;
    std::string weights;
    double race = 0.5;

    OtfConfig config() const {
        OtfConfig cfg;
        cfg.max_steps = steps;
        cfg.seed = seed;
        for (const auto& item : split_commas(weights)) {
            size_t eq = item.find('=');
            if (eq == std::string::npos) throw Error("bad --weights item '" + item + "'");
            std::string key = item.substr(0, eq);
            double value = std::stod(item.substr(eq + 1));
            if (key == "stop") cfg.weights.stop = value;
            else if (key == "send") cfg.weights.send = value;
            else if (key == "observe") cfg.weights.observe = value;
            else if (key == "env") cfg.weights.env = value;
            else if (key == "extra") cfg.weights.extra = value;
            else throw Error("unknown weight '" + key + "'");
        }
        return cfg;
    }
};

void add_otf_options(CLI::App* cmd, OtfOptions& o, bool needs_spec, bool needs_env) {
    cmd->add_option("--sut", o.sut, "implementation model to simulate")->required();
    if (needs_spec) cmd->add_option("--spec", o.spec, "SUT specification")->required();
    if (needs_env) cmd->add_option("--env", o.env, "environment specification")->required();
    cmd->add_option("--steps", o.steps, "step budget");
    cmd->add_option("--seed", o.seed, "driver seed");
    cmd->add_option("--weights", o.weights, "case weights, e.g. stop=0,send=1,extra=0.2");
    cmd->add_option("--race", o.race, "probability that an output beats a sent input");
}

int report_otf(const OtfResult& r) {
    std::cout << r.log.render();
    if (r.outcome == OtfOutcome::Aborted) {
        std::cerr << "aborted: " << r.abort_reason << "\n";
        return kUsage;
    }
    return r.failed() ? kFail : kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"compositional model-based testing for labelled transition systems"};
    app.require_subcommand(1);

    // validate
    std::vector<std::string> validate_files;
    CLI::App* cmd_validate = app.add_subcommand("validate", "check LTS files");
    cmd_validate->add_option("files", validate_files)->required()->expected(-1);

    // compose
    std::string comp_left, comp_right;
    CLI::App* cmd_compose =
        app.add_subcommand("compose", "print the reachable parallel composition");
    cmd_compose->add_option("left", comp_left)->required();
    cmd_compose->add_option("right", comp_right)->required();

    // check-uioco
    std::string uioco_impl, uioco_spec;
    CLI::App* cmd_uioco = app.add_subcommand("check-uioco", "decide uioco conformance");
    cmd_uioco->add_option("impl", uioco_impl)->required();
    cmd_uioco->add_option("spec", uioco_spec)->required();

    // check-eco / check-ma
    std::string eco_left, eco_right;
    CLI::App* cmd_eco =
        app.add_subcommand("check-eco", "decide environmental conformance");
    cmd_eco->alias("check-ma");
    cmd_eco->add_option("left", eco_left)->required();
    cmd_eco->add_option("right", eco_right)->required();

    // check-utrace-closed
    std::string utc_file;
    CLI::App* cmd_utc =
        app.add_subcommand("check-utrace-closed", "decide utrace-closedness");
    cmd_utc->add_option("file", utc_file)->required();

    // gen-test
    CLI::App* cmd_gen = app.add_subcommand("gen-test", "generate test cases");
    cmd_gen->require_subcommand(1);
    GenOptions gen_eco_opts, gen_cioco_opts;
    std::string gen_env, gen_sut, gen_sut_inputs, gen_sut_outputs, gen_spec;
    CLI::App* cmd_gen_eco = cmd_gen->add_subcommand("eco", "eco test against an environment");
    cmd_gen_eco->add_option("--env", gen_env, "environment specification")->required();
    cmd_gen_eco->add_option("--sut", gen_sut, "SUT model (alphabet only)");
    cmd_gen_eco->add_option("--sut-inputs", gen_sut_inputs, "comma separated SUT inputs");
    cmd_gen_eco->add_option("--sut-outputs", gen_sut_outputs,
                            "comma separated SUT outputs");
    add_gen_options(cmd_gen_eco, gen_eco_opts);
    CLI::App* cmd_gen_cioco = cmd_gen->add_subcommand("cioco", "combined test");
    cmd_gen_cioco->add_option("--spec", gen_spec, "SUT specification")->required();
    cmd_gen_cioco->add_option("--env", gen_env, "environment specification")->required();
    add_gen_options(cmd_gen_cioco, gen_cioco_opts);

    // run-test
    std::string run_tests_file, run_impl_file;
    CLI::App* cmd_run = app.add_subcommand("run-test", "run a test case or suite");
    cmd_run->add_option("tests", run_tests_file, "test case document (or suite)")
        ->required();
    cmd_run->add_option("impl", run_impl_file, "implementation model")->required();

    // otf
    CLI::App* cmd_otf = app.add_subcommand("otf", "on-the-fly testing");
    cmd_otf->require_subcommand(1);
    OtfOptions otf_eco_opts, otf_uioco_opts, otf_cioco_opts;
    CLI::App* cmd_otf_eco = cmd_otf->add_subcommand("eco", "environmental conformance");
    add_otf_options(cmd_otf_eco, otf_eco_opts, false, true);
    CLI::App* cmd_otf_uioco = cmd_otf->add_subcommand("uioco", "uioco conformance");
    add_otf_options(cmd_otf_uioco, otf_uioco_opts, true, false);
    CLI::App* cmd_otf_cioco = cmd_otf->add_subcommand("cioco", "combined conformance");
    add_otf_options(cmd_otf_cioco, otf_cioco_opts, true, true);

    // fixtures
    CLI::App* cmd_fixtures = app.add_subcommand("fixtures", "bundled figure systems");
    cmd_fixtures->require_subcommand(1);
    CLI::App* cmd_fx_list = cmd_fixtures->add_subcommand("list", "list fixture names");
    std::string fx_name;
    CLI::App* cmd_fx_show = cmd_fixtures->add_subcommand("show", "print a fixture");
    cmd_fx_show->add_option("name", fx_name)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        uint64_t seed_env = default_seed();
        if (cmd_validate->parsed()) {
            bool all_ok = true;
            for (const auto& path : validate_files) {
                try {
                    load_lts(path);
                    std::cout << path << ": ok\n";
                } catch (const Error& err) {
                    all_ok = false;
                    std::cout << path << ": " << err.what() << "\n";
                }
            }
            return all_ok ? kOk : kFail;
        }
        if (cmd_compose->parsed()) {
            ComposedLts c = compose(load_lts(comp_left), load_lts(comp_right));
            std::cout << serialize_lts(c.lts);
            return kOk;
        }
        if (cmd_uioco->parsed()) {
            ConformanceVerdict v = check_uioco(load_lts(uioco_impl), load_lts(uioco_spec));
            if (v.pass) {
                std::cout << "uioco: pass\n";
                return kOk;
            }
            SuspensionTrace full = v.counterexample->trace;
            full.push_back(v.counterexample->offending);
            std::cout << "uioco: fail\n" << render_trace(full) << "\n";
            return kFail;
        }
        if (cmd_eco->parsed()) {
            Lts s = load_lts(eco_left);
            Lts e = load_lts(eco_right);
            EcoResult r = decide_eco(s, e);
            if (r.pass) {
                std::cout << "eco: pass\n";
                for (const EcoPair& p : r.sim.pairs)
                    std::cout << render_eco_pair(s, e, p) << "\n";
                return kOk;
            }
            SuspensionTrace full = r.counterexample->trace;
            full.push_back(r.counterexample->offending);
            std::cout << "eco: fail\n"
                      << render_trace(full) << "\n"
                      << "side: " << r.counterexample->site << "\n";
            return kFail;
        }
        if (cmd_utc->parsed()) {
            UtraceClosedResult r = is_utrace_closed(load_lts(utc_file));
            if (r.closed) {
                std::cout << "utrace-closed: yes\n";
                return kOk;
            }
            std::cout << "utrace-closed: no\n" << render_trace(*r.witness) << "\n";
            return kFail;
        }
        if (cmd_gen_eco->parsed()) {
            Lts e = load_lts(gen_env);
            std::set<std::string> si, so;
            if (!gen_sut.empty()) {
                Lts sut = load_lts(gen_sut);
                si = sut.inputs();
                so = sut.outputs();
            } else {
                for (const auto& t : split_commas(gen_sut_inputs)) si.insert(t);
                for (const auto& t : split_commas(gen_sut_outputs)) so.insert(t);
            }
            if (si.empty() && so.empty())
                throw Error("give --sut or --sut-inputs/--sut-outputs");
            if (gen_eco_opts.seed == 0) gen_eco_opts.seed = seed_env;
            if (gen_eco_opts.mode == "exhaustive") {
                std::vector<TestCase> suite =
                    gen_eco_suite(e, si, so, gen_eco_opts.depth);
                std::cout << serialize_suite(suite);
            } else {
                std::cout << serialize_test_case(
                    gen_eco_test(e, si, so, gen_eco_opts.policy()));
            }
            return kOk;
        }
        if (cmd_gen_cioco->parsed()) {
            Lts s = load_lts(gen_spec);
            Lts e = load_lts(gen_env);
            for (const Lts* l : {&s, &e}) {
                UtraceClosedResult u = is_utrace_closed(*l);
                if (!u.closed)
                    std::cerr << "warning: '" << l->name()
                              << "' is not utrace-closed; combined suites are not "
                                 "guaranteed exhaustive\n";
            }
            if (gen_cioco_opts.seed == 0) gen_cioco_opts.seed = seed_env;
            if (gen_cioco_opts.mode == "exhaustive") {
                std::cout << serialize_suite(
                    gen_combined_suite(s, e, gen_cioco_opts.depth));
            } else {
                std::cout << serialize_test_case(
                    gen_combined_test(s, e, gen_cioco_opts.policy()));
            }
            return kOk;
        }
        if (cmd_run->parsed()) {
            std::vector<TestCase> suite = parse_suite(read_file(run_tests_file));
            if (suite.empty()) throw Error("no test cases in '" + run_tests_file + "'");
            for (const TestCase& t : suite) {
                ValidationReport rep = validate_test_case(t);
                if (!rep.ok)
                    throw Error("test '" + t.name + "': " + rep.violations.front());
            }
            Lts impl = load_lts(run_impl_file);
            ExecVerdict v = run_suite(suite, impl);
            if (v.pass) {
                std::cout << "verdict: pass\n";
                return kOk;
            }
            std::cout << "verdict: fail\n" << render_trace(v.runs.front().trace) << "\n";
            return kFail;
        }
        if (cmd_otf_eco->parsed()) {
            if (otf_eco_opts.seed == 0) otf_eco_opts.seed = seed_env;
            SimulatedAdapter a(load_lts(otf_eco_opts.sut), otf_eco_opts.seed,
                               otf_eco_opts.race);
            return report_otf(otf_eco(a, load_lts(otf_eco_opts.env),
                                      otf_eco_opts.config()));
        }
        if (cmd_otf_uioco->parsed()) {
            if (otf_uioco_opts.seed == 0) otf_uioco_opts.seed = seed_env;
            SimulatedAdapter a(load_lts(otf_uioco_opts.sut), otf_uioco_opts.seed,
                               otf_uioco_opts.race);
            return report_otf(otf_uioco(a, load_lts(otf_uioco_opts.spec),
                                        otf_uioco_opts.config()));
        }
        if (cmd_otf_cioco->parsed()) {
            if (otf_cioco_opts.seed == 0) otf_cioco_opts.seed = seed_env;
            SimulatedAdapter a(load_lts(otf_cioco_opts.sut), otf_cioco_opts.seed,
                               otf_cioco_opts.race);
            return report_otf(otf_cioco(a, load_lts(otf_cioco_opts.spec),
                                        load_lts(otf_cioco_opts.env),
                                        otf_cioco_opts.config()));
        }
        if (cmd_fx_list->parsed()) {
            for (const auto& name : fixtures::names()) std::cout << name << "\n";
            return kOk;
        }
        if (cmd_fx_show->parsed()) {
            std::cout << fixtures::text(fx_name);
            return kOk;
        }
    } catch (const ParseError& err) {
        std::cerr << "parse error: " << err.what() << "\n";
        return kUsage;
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
