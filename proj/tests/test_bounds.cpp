#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "vq/bounds.hpp"
#include "vq/errors.hpp"

using namespace vq;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

bool strictly_below(double lhs, double rhs) {
    return lhs < rhs - std::max(1e-12, 1e-9 * std::abs(rhs));
}

}  // namespace

TEST_CASE("Mills bound functions at x = 1") {
    CHECK(mills_f1(1.0) == 0.5);
    CHECK(mills_f2(1.0) == 1.0);
    REQUIRE(mills_f3(1.0).has_value());
    CHECK(*mills_f3(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rel(mills_f4(1.0), 2.0 / std::sqrt(8.0)) < 1e-15);
    CHECK(rel(mills_f5(1.0), 6.0 / (2.0 + std::sqrt(28.0))) < 1e-15);
    CHECK(rel(mills_f5(1.0), 0.82287565553229529525) < 1e-15);
}

TEST_CASE("f5 at the removable singularity") {
    const double r2 = std::numbers::sqrt2;
    CHECK(rel(mills_f5(r2), 3.0 * r2 / 7.0) < 1e-15);
    CHECK(rel(mills_f5(r2), 0.60609152673132644949) < 1e-15);
    // The printed form approaches the same limit from both sides.
    CHECK(rel(mills_f5_printed(r2 * (1 + 1e-6)), 3.0 * r2 / 7.0) < 1e-5);
    CHECK(rel(mills_f5_printed(r2 * (1 - 1e-6)), 3.0 * r2 / 7.0) < 1e-5);
}

TEST_CASE("stabilized and printed forms agree") {
    for (double x = 0.05; x <= 30.0; x *= 1.1) {
        CHECK(rel(mills_f4(x), mills_f4_printed(x)) <= 1e-12);
        if (std::abs(x - std::numbers::sqrt2) > 0.05) {
            CHECK(rel(mills_f5(x), mills_f5_printed(x)) <= 1e-12);
        }
    }
    // The printed f4 numerator cancels at large x; the stabilized one does not.
    const double x = 1e8;
    CHECK(rel(mills_f4(x), 1.0 / x) < 1e-12);
}

TEST_CASE("f3 validity range") {
    CHECK(rel(mills_f3_threshold(), std::sqrt(std::sqrt(2.0) - 1.0)) < 1e-15);
    CHECK_FALSE(mills_f3(0.5).has_value());
    CHECK_FALSE(mills_f3(0.6435).has_value());
    CHECK(mills_f3(0.6436).has_value());
    CHECK(mills_f3_raw(0.5) < 0.0);
    CHECK(*mills_f3(3.0) < mills_f2(3.0));
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(mills_f1(0.0), DomainError);
    CHECK_THROWS_AS(mills_f2(-1.0), DomainError);
    CHECK_THROWS_AS(mills_f3(0.0), DomainError);
    CHECK_THROWS_AS(mills_f4(-2.0), DomainError);
    CHECK_THROWS_AS(mills_f5(0.0), DomainError);
    CHECK_THROWS_AS(mills_bounds(0.0), DomainError);
    CHECK_THROWS_AS(vq_lower_exp(Order(0), 0.0), DomainError);
    CHECK_THROWS_AS(vq_upper_agm(Order(-0.75), 1.0), DomainError);
    CHECK_THROWS_AS(vq_upper_agm(Order(-0.9), 1.0), DomainError);
    CHECK_THROWS_AS(vq_lower_kratzel(Order::sentinel(), 1.0), DomainError);
}

TEST_CASE("mills_bounds rows") {
    const auto r = mills_bounds(1.0);
    CHECK(r.x == 1.0);
    CHECK(r.f1 == 0.5);
    CHECK(r.f2 == 1.0);
    CHECK(r.f3.has_value());
    CHECK(rel(r.m, 0.65567954241879847154) < 1e-13);
    CHECK(strictly_below(r.f1, r.m));
    CHECK(strictly_below(r.m, r.f4));
    CHECK_FALSE(mills_bounds(0.5).f3.has_value());

    const auto two = mills_bounds(2.0);
    CHECK(two.f1 == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(rel(*two.f3, 10.0 / 23.0) < 1e-15);
    CHECK(strictly_below(two.f1, two.m));
    CHECK(strictly_below(two.m, *two.f3));
}

TEST_CASE("Mills sandwich on a log grid over [0.05, 30]") {
    for (double x = 0.05; x <= 30.0; x *= 1.08) {
        const auto r = mills_bounds(x);
        CHECK(rel(r.m, oracle::mills(x)) < 1e-13);
        CHECK(strictly_below(r.f1, r.m));
        CHECK(strictly_below(r.m, r.f2));
        CHECK(strictly_below(r.m, r.f4));
        CHECK(strictly_below(r.m, r.f5));
        if (x > mills_f3_threshold()) CHECK(strictly_below(r.m, *r.f3));
        if (x > 1.0) CHECK(strictly_below(*r.f3, r.f2));
    }
}

TEST_CASE("envelope reference values") {
    CHECK(rel(vq_lower_exp(Order(0), 1.0), 2.0 / 3.0) < 1e-15);
    CHECK(rel(vq_lower_exp(Order(1), 1.0), 4.0 / 9.0) < 1e-15);
    const double x = 1e3;
    CHECK(rel(vq_lower_exp(Order(0), x), (1.0 - 0.5 / (x * x)) / x) < 1e-11);
    CHECK(rel(vq_upper_agm(Order(0), 1.0), 0.86650046009238498144) < 1e-14);
    CHECK(rel(vq_upper_agm(Order(1), 1.0), 0.64987534506928873608) < 1e-14);
    CHECK(rel(vq_upper_agm(Order(0), 4.0), 0.5 * vq_upper_agm(Order(0), 1.0)) < 1e-15);
    CHECK(rel(vq_lower_kratzel(Order(0), 1.0), oracle::kratzel1(0.5, 0.5)) < 1e-8);
    CHECK(vq_lower_kratzel(Order(0), 1.0) <= 0.75787215614131210604);
    CHECK(rel(vq_lower_kratzel(Order(0), 1e-6), std::sqrt(std::numbers::pi)) < 1e-5);
    double prev = INFINITY;
    for (double xx = 0.1; xx <= 10.0; xx *= 1.2) {
        const double v = vq_lower_kratzel(Order(0), xx);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("envelope brackets V_q") {
    for (double q : {-0.5, 0.0, 0.5, 1.0, 2.0, 5.0}) {
        for (double x = 0.1; x <= 20.0; x *= 1.3) {
            const double v = oracle::vq(q, x);
            const auto e = vq_envelope(Order(q), x);
            CHECK(strictly_below(e.lower_exp, v));
            CHECK(strictly_below(e.lower_kratzel, v));
            REQUIRE(e.upper_agm.has_value());
            CHECK(strictly_below(v, *e.upper_agm));
        }
    }
    CHECK_FALSE(vq_envelope(Order(-0.8), 1.0).upper_agm.has_value());
}
