#include "vq/report_json.hpp"

#include <cmath>

#include <json.hpp>

namespace vq {
namespace {

using nlohmann::ordered_json;

ordered_json number(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

ordered_json optional_number(const std::optional<double>& v) {
    return v ? number(*v) : ordered_json(nullptr);
}

ordered_json claim_json(const ClaimRecord& c) {
    ordered_json j;
    j["suite"] = c.suite;
    j["check"] = c.check;
    j["q"] = optional_number(c.q);
    if (c.q2) j["q2"] = number(*c.q2);
    j["x"] = number(c.x);
    if (c.y) j["y"] = number(*c.y);
    if (c.alpha) j["alpha"] = number(*c.alpha);
    j["lhs"] = number(c.lhs);
    j["rhs"] = number(c.rhs);
    j["margin"] = number(c.margin);
    j["relation"] = c.relation == Relation::strict ? "<" : "<=";
    j["holds"] = c.holds;
    return j;
}

ordered_json array_of(const std::vector<double>& v) {
    ordered_json a = ordered_json::array();
    for (double d : v) a.push_back(number(d));
    return a;
}

}  // namespace

std::string report_to_json(const VerificationReport& r, int indent) {
    ordered_json j;
    std::string joined;
    for (const auto& s : r.suites) joined += (joined.empty() ? "" : ",") + s;
    j["suite"] = joined;
    j["suites"] = r.suites;
    j["grid"] = {{"q", array_of(r.grid.q_values)},
                 {"x", array_of(r.grid.x_values)},
                 {"pairs", array_of(r.grid.pair_x_values)},
                 {"description", r.grid.description}};
    j["tolerance"] = {{"rel", r.tolerance.rel}, {"abs", r.tolerance.abs}};
    j["pass"] = r.pass();

    auto& violations = j["violations"] = ordered_json::array();
    for (const auto& v : r.violations) violations.push_back(claim_json(v));
    auto& observations = j["observations"] = ordered_json::array();
    for (const auto& o : r.observations) observations.push_back(claim_json(o));

    auto& checks = j["checks"] = ordered_json::array();
    for (const auto& c : r.checks) {
        checks.push_back({{"suite", c.suite},
                          {"check", c.check},
                          {"asserting", c.asserting},
                          {"evaluated", c.evaluated},
                          {"failed", c.failed},
                          {"min_rel_margin", number(c.min_rel_margin)}});
    }
    auto& failures = j["failures"] = ordered_json::array();
    for (const auto& f : r.failures) {
        failures.push_back({{"suite", f.suite},
                            {"check", f.check},
                            {"q", optional_number(f.q)},
                            {"x", number(f.x)},
                            {"method", f.method},
                            {"message", f.message}});
    }
    if (!r.points.empty()) {
        auto& points = j["points"] = ordered_json::array();
        for (const auto& p : r.points) points.push_back(claim_json(p));
    }
    return j.dump(indent);
}

}  // namespace vq
