#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "vq/errors.hpp"
#include "vq/report_json.hpp"
#include "vq/verifier.hpp"

using namespace vq;

namespace {

Grid small_grid() {
    return Grid::from_lists({-0.25, 0.0, 0.5, 2.0}, log_space(0.1, 10.0, 12));
}

std::size_t violations_for(const VerificationReport& r, std::string_view check) {
    return static_cast<std::size_t>(std::count_if(
        r.violations.begin(), r.violations.end(),
        [&](const ClaimRecord& c) { return c.check == check; }));
}

const ClaimRecord* find_point(const VerificationReport& r, std::string_view check, double q, double x) {
    for (const auto& p : r.points) {
        if (p.check == check && p.q && *p.q == q && p.x == x) return &p;
    }
    return nullptr;
}

}  // namespace

TEST_CASE("default grid") {
    const auto g = Grid::default_grid();
    CHECK(g.q_values.size() == 9);
    CHECK(g.x_values.size() == 60);
    CHECK(g.pair_x_values.size() == 12);
    CHECK(g.x_values.front() == 0.05);
    CHECK(g.x_values.back() == 20.0);
    CHECK_NOTHROW(g.validate());
}

TEST_CASE("log_space") {
    const auto v = log_space(0.01, 30.0, 200);
    REQUIRE(v.size() == 200);
    CHECK(v.front() == 0.01);
    CHECK(v.back() == 30.0);
    CHECK(std::is_sorted(v.begin(), v.end()));
    CHECK(std::abs(v[1] / v[0] - v[199] / v[198]) < 1e-12);
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(Grid::from_lists({}, {1.0}).validate(), UsageError);
    CHECK_THROWS_AS(Grid::from_lists({0.0}, {}).validate(), UsageError);
    CHECK_THROWS_AS(Grid::from_lists({-1.0}, {1.0}).validate(), UsageError);
    CHECK_THROWS_AS(Grid::from_lists({0.0}, {0.0, 1.0}).validate(), UsageError);
    CHECK_THROWS_AS(Grid::from_lists({0.0}, {2.0, 1.0}).validate(), UsageError);
    CHECK_NOTHROW(Grid::from_lists({0.0}, {1.0}).validate());
}

TEST_CASE("tolerance policy") {
    TolerancePolicy tol;
    CHECK(tol.slack(1.0) == 1e-9);
    CHECK(tol.slack(1e-6) == 1e-12);
    CHECK(tol.strict_holds(1.0, 1.1));
    CHECK_FALSE(tol.strict_holds(1.0, 1.0 + 1e-10));
    CHECK(tol.non_strict_holds(1.0 + 1e-10, 1.0));
    CHECK_FALSE(tol.non_strict_holds(1.0 + 1e-8, 1.0));
}

TEST_CASE("ClaimSink records an inverted claim as a violation") {
    ClaimSink sink("selftest", TolerancePolicy{}, true);
    sink.claim("inverted", true, Relation::strict, 0.0, 1.0, std::nullopt, 2.0, 1.0);
    sink.claim("fine", true, Relation::strict, 0.0, 1.0, std::nullopt, 1.0, 2.0);
    sink.claim("watch", false, Relation::strict, 0.0, 1.0, std::nullopt, 3.0, 1.0);
    VerificationReport r;
    sink.drain_into(r);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].check == "inverted");
    CHECK(r.violations[0].margin == -1.0);
    CHECK_FALSE(r.violations[0].holds);
    REQUIRE(r.observations.size() == 1);
    CHECK(r.observations[0].check == "watch");
    CHECK(r.points.size() == 3);
    CHECK_FALSE(r.pass());
}

TEST_CASE("run_suite rejects bad configuration") {
    SuiteConfig cfg;
    cfg.suites = {"nosuch"};
    CHECK_THROWS_AS(run_suite(cfg), UsageError);
    cfg.suites = {"turan"};
    cfg.grid = Grid::from_lists({}, {1.0});
    CHECK_THROWS_AS(run_suite(cfg), UsageError);
}

TEST_CASE("suite names") {
    const auto& names = suite_names();
    CHECK(names == std::vector<std::string>{"monotonicity", "convexity", "turan",
                                            "logconvexity", "simon", "bounds"});
}

TEST_CASE("proven suites pass on a small grid") {
    const auto g = small_grid();
    for (const auto& r : {check_monotonicity_suite(g), check_convexity_suite(g), check_turan(g),
                          check_logconvexity_suite(g), check_bounds_suite(g)}) {
        CHECK(r.pass());
        CHECK_FALSE(r.has_failures());
        CHECK_FALSE(r.checks.empty());
        for (const auto& c : r.checks) {
            CHECK(c.evaluated > 0);
            if (c.asserting) CHECK(c.min_rel_margin >= 0.0);
        }
    }
}

TEST_CASE("Simon: second printed form holds, first fails for large x") {
    const auto r = check_simon(Grid::from_lists({0.0, 0.5, 2.0}, log_space(0.1, 10.0, 15)));
    CHECK_FALSE(r.has_failures());
    CHECK(violations_for(r, "second printed 1/x") == 0);
    CHECK(violations_for(r, "combined lower") == 0);
    CHECK(violations_for(r, "combined upper") == 0);
    CHECK(violations_for(r, "first printed x^{-2(q+3)}") > 0);
    for (const auto& v : r.violations) {
        CHECK(v.check == "first printed x^{-2(q+3)}");
        CHECK(v.x >= 1.5);
    }
    // The 1/x^2 variant stays an observation and holds.
    for (const auto& o : r.observations) CHECK(o.check != "second rederived 1/x^2");
}

TEST_CASE("Simon first printed form at single points") {
    RunOptions opts;
    opts.keep_points = true;
    const auto r = check_simon(Grid::from_lists({0.0, 0.5}, {1.0, 2.0}), opts);
    const auto* holds = find_point(r, "first printed x^{-2(q+3)}", 0.0, 1.0);
    REQUIRE(holds != nullptr);
    CHECK(holds->holds);
    const auto* fails = find_point(r, "first printed x^{-2(q+3)}", 0.5, 2.0);
    REQUIRE(fails != nullptr);
    CHECK_FALSE(fails->holds);
    CHECK(fails->margin < 0.0);
}

TEST_CASE("aggregation is identical across thread counts") {
    SuiteConfig one;
    one.grid = small_grid();
    one.options.threads = 1;
    SuiteConfig four = one;
    four.options.threads = 4;
    CHECK(report_to_json(run_suite(one)) == report_to_json(run_suite(four)));
}

TEST_CASE("ConvexitySpec") {
    const auto specs = default_convexity_specs();
    CHECK(specs.size() >= 5);
    for (const auto& s : specs) CHECK_NOTHROW(s.validate());

    ConvexitySpec bad;
    bad.a = 1.0;
    bad.b = 1.0;
    bad.direction = Direction::convex;
    bad.q_region = QRegion::ge_zero;
    CHECK_THROWS_AS(bad.validate(), UsageError);
    CHECK_THROWS_AS(check_power_mean(bad, small_grid()), UsageError);

    ConvexitySpec c;
    c.a = 2.5;
    c.b = 1.5;
    c.direction = Direction::convex;
    c.q_region = QRegion::ge_zero;
    CHECK(c.admits(0.0));
    CHECK_FALSE(c.admits(-0.25));
    c.q_region = QRegion::gt_minus_one;
    CHECK(c.admits(-0.25));
}

TEST_CASE("power_mean") {
    CHECK(power_mean(1.0, 1.0, 3.0, 0.5) == doctest::Approx(2.0));
    CHECK(power_mean(0.0, 1.0, 4.0, 0.5) == doctest::Approx(2.0));
    CHECK(power_mean(-1.0, 1.0, 3.0, 0.5) == doctest::Approx(1.5));
    CHECK(power_mean(2.0, 3.0, 4.0, 0.5) == doctest::Approx(std::sqrt(12.5)));
    CHECK(power_mean(0.0, 2.0, 8.0, 0.3) == doctest::Approx(std::pow(2.0, 0.3) * std::pow(8.0, 0.7)));
    CHECK(power_mean(3.0, 5.0, 5.0, 0.3) == doctest::Approx(5.0));
}

TEST_CASE("log-convexity in q at x = 1") {
    RunOptions opts;
    opts.keep_points = true;
    const auto r = check_logconvexity_in_q(1.0, {0.0, 0.5, 1.0, 2.0}, opts);
    CHECK(r.pass());
    CHECK_FALSE(r.points.empty());
    for (const auto& p : r.points) {
        CHECK(p.x == 1.0);
        CHECK(p.q.has_value());
        CHECK(p.q2.has_value());
    }
}

TEST_CASE("JSON report layout") {
    SuiteConfig cfg;
    cfg.suites = {"simon"};
    cfg.grid = Grid::from_lists({0.5}, {2.0});
    const auto j = nlohmann::json::parse(report_to_json(run_suite(cfg)));
    for (const char* key : {"suite", "grid", "tolerance", "pass", "violations", "observations", "checks"}) {
        CHECK(j.contains(key));
    }
    CHECK(j["suite"] == "simon");
    CHECK(j["grid"]["q"].size() == 1);
    CHECK(j["grid"]["x"][0] == 2.0);
    CHECK(j["pass"] == false);
    REQUIRE(j["violations"].size() == 1);
    const auto& v = j["violations"][0];
    for (const char* key : {"suite", "q", "x", "lhs", "rhs", "margin"}) CHECK(v.contains(key));
    CHECK(v["margin"].get<double>() < 0.0);
}
