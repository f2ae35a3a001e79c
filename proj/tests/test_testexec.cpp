#include <catch2/catch_amalgamated.hpp>

#include "compotest/testexec.hpp"
#include "compotest/testgen.hpp"
#include "helpers.hpp"

using namespace compotest;

namespace {

TestCase fig5d_test() {
    return gen_eco_test(fx::get("fig5e"), {"b", "r"}, {"a"},
                        GenPolicy::directed(tr({"a", "r"})));
}

// FIG5E's mirror as an implementation that stops after one a.
Lts one_shot_impl() {
    return make_lts("oneshot", {"b", "r"}, {"a"}, "1",
                    {{"1", "a", "2"},
                     {"1", "b", "1"},
                     {"1", "r", "1"},
                     {"2", "b", "2"},
                     {"2", "r", "2"}});
}

} // namespace

TEST_CASE("the fig5 test fails fig5i with the run a·r·a") {
    ExecVerdict v = run_test(fig5d_test(), fx::get("fig5i"));
    REQUIRE_FALSE(v.pass);
    REQUIRE(v.runs.front().failed);
    CHECK(v.runs.front().trace == tr({"a", "r", "a"}));
}

TEST_CASE("the fig5 test passes an implementation that stops after one a") {
    ExecVerdict v = run_test(fig5d_test(), one_shot_impl());
    CHECK(v.pass);
    for (const TestRun& r : v.runs) CHECK_FALSE(r.failed);
}

TEST_CASE("the pass-leaf test passes everything") {
    TestCase t;
    t.inputs = {Label::action("a"), Label::theta()};
    t.outputs = {Label::action("b"), Label::action("r")};
    t.root = NodeRef::pass();
    REQUIRE(validate_test_case(t).ok);
    ExecVerdict v = run_test(t, fx::get("fig5i"));
    CHECK(v.pass);
    // single terminal configuration
    TestExecGraph g = test_exec(t, fx::get("fig5i"));
    CHECK(g.configs.size() == 1);
    CHECK(g.terminal(g.initial));
}

TEST_CASE("test execution requires an input-enabled implementation") {
    CHECK_THROWS_AS(run_test(fig5d_test(), fx::get("fig3s")), NotInputEnabledError);
}

TEST_CASE("non-interacting implementation outputs move alone") {
    // implementation cycles on output z, unknown to the test
    Lts impl = make_lts("zloop", {"a"}, {"z"}, "1", {{"1", "z", "1"}, {"1", "a", "1"}});
    TestCase t;
    t.inputs = {Label::theta()};
    t.outputs = {Label::action("a")};
    t.nodes.resize(1);
    t.root = NodeRef::node(0);
    t.nodes[0].edges = {{Label::theta(), NodeRef::pass()},
                        {Label::action("a"), NodeRef::pass()}};
    REQUIRE(validate_test_case(t).ok);
    // the z loop never blocks execution and never reaches FAIL
    ExecVerdict v = run_test(t, impl);
    CHECK(v.pass);
    TestExecGraph g = test_exec(t, impl);
    bool saw_solo_z = false;
    for (int c = 0; c < (int)g.configs.size(); ++c)
        for (const auto& [l, dst] : g.edges[c])
            if (l == Label::action("z") && g.configs[c].test.v == g.configs[dst].test.v)
                saw_solo_z = true;
    CHECK(saw_solo_z);
}

TEST_CASE("theta synchronizes with implementation quiescence only") {
    TestCase t = fig5d_test();
    TestExecGraph g = test_exec(t, fx::get("fig5i"));
    for (int c = 0; c < (int)g.configs.size(); ++c)
        for (const auto& [l, dst] : g.edges[c]) {
            (void)dst;
            if (l.kind == LabelKind::Theta)
                CHECK(fx::get("fig5i").quiescent(g.configs[c].impl));
        }
}

TEST_CASE("theta_s edges fire on component quiescence during execution") {
    // combined test for fig7 with a θ_s step: after a, fig7s may be in {2,3}
    // where quiescence is forbidden, so pick the root where it is allowed.
    Lts s = fx::get("fig7s");
    Lts e = fx::get("fig7e");
    TestCase t = gen_combined_test(s, e, GenPolicy::directed(tr({"delta", "a"})));
    REQUIRE(validate_test_case(t).ok);
    // root carries a theta_s edge: s can be quiescent at 1 but (1,A) is not
    bool has_theta_s = false;
    for (const TestEdge& edge : t.nodes[t.root.index()].edges)
        if (edge.label == Label::theta_s()) has_theta_s = true;
    REQUIRE(has_theta_s);

    ExecVerdict v = run_test(t, fx::get("fig7is"));
    CHECK(v.pass);
    // some run goes through the theta_s edge (fig7is starts quiescent)
    bool theta_s_run = false;
    for (const TestRun& r : v.runs)
        for (const Label& l : r.trace)
            if (l == Label::theta_s()) theta_s_run = true;
    CHECK(theta_s_run);
}

TEST_CASE("run_suite is a conjunction with the empty suite passing") {
    CHECK(run_suite({}, fx::get("fig5i")).pass);
    std::vector<TestCase> suite{fig5d_test()};
    CHECK_FALSE(run_suite(suite, fx::get("fig5i")).pass);

    TestCase pass_leaf;
    pass_leaf.inputs = {Label::action("a"), Label::theta()};
    pass_leaf.outputs = {Label::action("b"), Label::action("r")};
    pass_leaf.root = NodeRef::pass();
    std::vector<TestCase> mixed{pass_leaf, fig5d_test()};
    CHECK_FALSE(run_suite(mixed, fx::get("fig5i")).pass);
}

TEST_CASE("failing runs are shortest in the execution graph") {
    ExecVerdict v = run_test(fig5d_test(), fx::get("fig5i"));
    REQUIRE_FALSE(v.pass);
    // breadth-first order: no failing run shorter than the reported one
    size_t reported = v.runs.front().trace.size();
    for (const TestRun& r : v.runs)
        if (r.failed) CHECK(r.trace.size() >= reported);
}
