#include "vq/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>
#include <utility>

#include "vq/bounds.hpp"
#include "vq/errors.hpp"
#include "vq/special.hpp"
#include "vq/vq.hpp"

namespace vq {
namespace {

constexpr double kTiny = std::numeric_limits<double>::min();

// ---------------------------------------------------------------------------
// Evaluation with a per-task memo. V_{-1} is the 1/x convention.

class Evaluator {
public:
    double v(double q, double x) {
        if (q == -1.0) return 1.0 / x;
        auto [it, fresh] = v_.try_emplace({q, x}, 0.0);
        if (fresh) {
            try {
                it->second = vq(Order(q), x).value;
            } catch (...) {
                v_.erase(it);
                throw;
            }
        }
        return it->second;
    }

    double dv(double q, double x) {
        if (q == -1.0) return -1.0 / (x * x);
        auto [it, fresh] = dv_.try_emplace({q, x}, 0.0);
        if (fresh) {
            try {
                it->second = vq_prime(Order(q), x);
            } catch (...) {
                dv_.erase(it);
                throw;
            }
        }
        return it->second;
    }

private:
    std::map<std::pair<double, double>, double> v_;
    std::map<std::pair<double, double>, double> dv_;
};

template <class F>
void guarded(ClaimSink& sink, std::string_view check, std::optional<double> q, double x, F&& f) {
    try {
        f();
    } catch (const NumericalFailure& e) {
        sink.failure(check, q, x, e.method(), e.what());
    } catch (const std::domain_error& e) {
        sink.failure(check, q, x, "domain", e.what());
    } catch (const std::logic_error& e) {
        sink.failure(check, q, x, "unsupported", e.what());
    }
}

// ---------------------------------------------------------------------------
// Task fan-out. Results are merged by task index, then sorted, so the report
// does not depend on the thread count.

template <class Task>
void run_tasks(std::size_t n, unsigned threads, VerificationReport& report, Task&& task) {
    std::vector<std::optional<ClaimSink>> sinks(n);
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) sinks[i].emplace(task(i));
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) sinks[i].emplace(task(i));
            });
        }
        for (auto& t : pool) t.join();
    }
    for (auto& s : sinks) s->drain_into(report);
}

int suite_rank(const std::string& suite) {
    const auto& names = suite_names();
    const auto it = std::find(names.begin(), names.end(), suite);
    return static_cast<int>(it - names.begin());
}

// nullopt sorts first; NaN never reaches here.
auto opt_key(const std::optional<double>& v) {
    return std::make_pair(v.has_value(), v.value_or(0.0));
}

auto claim_key(const ClaimRecord& c) {
    return std::make_tuple(suite_rank(c.suite), std::cref(c.check), opt_key(c.q), opt_key(c.q2),
                           c.x, opt_key(c.y), opt_key(c.alpha));
}

void canonicalize(VerificationReport& r) {
    const auto by_claim = [](const ClaimRecord& a, const ClaimRecord& b) {
        return claim_key(a) < claim_key(b);
    };
    std::stable_sort(r.violations.begin(), r.violations.end(), by_claim);
    std::stable_sort(r.observations.begin(), r.observations.end(), by_claim);
    std::stable_sort(r.points.begin(), r.points.end(), by_claim);
    std::stable_sort(r.failures.begin(), r.failures.end(),
                     [](const EvaluationFailure& a, const EvaluationFailure& b) {
                         return std::make_tuple(suite_rank(a.suite), std::cref(a.check),
                                                opt_key(a.q), a.x) <
                                std::make_tuple(suite_rank(b.suite), std::cref(b.check),
                                                opt_key(b.q), b.x);
                     });
    std::stable_sort(r.checks.begin(), r.checks.end(),
                     [](const CheckSummary& a, const CheckSummary& b) {
                         return std::make_tuple(suite_rank(a.suite), std::cref(a.check)) <
                                std::make_tuple(suite_rank(b.suite), std::cref(b.check));
                     });
}

VerificationReport make_report(std::vector<std::string> suites, const Grid& grid,
                               const RunOptions& opts) {
    grid.validate();
    VerificationReport r;
    r.suites = std::move(suites);
    r.grid = grid;
    r.tolerance = opts.tolerance;
    return r;
}

void merge_into(VerificationReport& into, VerificationReport&& from) {
    for (auto& c : from.checks) into.checks.push_back(std::move(c));
    auto move_all = [](auto& dst, auto& src) {
        dst.insert(dst.end(), std::make_move_iterator(src.begin()),
                   std::make_move_iterator(src.end()));
    };
    move_all(into.violations, from.violations);
    move_all(into.observations, from.observations);
    move_all(into.points, from.points);
    move_all(into.failures, from.failures);
}

std::string fmt_num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// ---------------------------------------------------------------------------
// Monotonicity in x

// Orders are consecutive pairs of the x grid; "decreasing" means g(x_{i+1}) < g(x_i).
void monotone_pairs(ClaimSink& sink, std::string_view check, bool increasing, double q,
                    const std::vector<double>& xs, Evaluator& ev,
                    double (*g)(Evaluator&, double, double)) {
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        guarded(sink, check, q, xs[i], [&] {
            const double g0 = g(ev, q, xs[i]);
            const double g1 = g(ev, q, xs[i + 1]);
            if (increasing) {
                sink.claim(check, true, Relation::strict, q, xs[i], xs[i + 1], g0, g1);
            } else {
                sink.claim(check, true, Relation::strict, q, xs[i], xs[i + 1], g1, g0);
            }
        });
    }
}

ClaimSink monotonicity_for_q(double q, const Grid& grid, const RunOptions& opts) {
    ClaimSink sink("monotonicity", opts.tolerance, opts.keep_points);
    Evaluator ev;
    const auto& xs = grid.x_values;

    monotone_pairs(sink, "x V'/V decreasing", false, q, xs, ev,
                   [](Evaluator& e, double q, double x) { return x * e.dv(q, x) / e.v(q, x); });
    monotone_pairs(sink, "x^2 V' decreasing", false, q, xs, ev,
                   [](Evaluator& e, double q, double x) { return x * x * e.dv(q, x); });
    monotone_pairs(sink, "V_{q+1}/V_q increasing", true, q, xs, ev,
                   [](Evaluator& e, double q, double x) { return e.v(q + 1.0, x) / e.v(q, x); });
    monotone_pairs(sink, "V_{q+1}-V_q increasing", true, q, xs, ev,
                   [](Evaluator& e, double q, double x) { return e.v(q + 1.0, x) - e.v(q, x); });
    if (q >= 0.0) {
        monotone_pairs(sink, "V'/x increasing", true, q, xs, ev,
                       [](Evaluator& e, double q, double x) { return e.dv(q, x) / x; });
        monotone_pairs(sink, "V'/(x V) increasing", true, q, xs, ev,
                       [](Evaluator& e, double q, double x) { return e.dv(q, x) / (x * e.v(q, x)); });
        // V'/x = 2 (V_q - V_{q-1}); at q = 0 this exercises the 1/x convention.
        const std::string_view check = "V'/x = 2(V_q - V_{q-1})";
        for (double x : xs) {
            guarded(sink, check, q, x, [&] {
                const double lhs = ev.dv(q, x) / x;
                const double rhs = 2.0 * (ev.v(q, x) - ev.v(q - 1.0, x));
                const double gap = std::abs(lhs - rhs);
                sink.claim(check, true, Relation::non_strict, q, x, std::nullopt, gap,
                           1e-8 * std::abs(rhs));
            });
        }
    }
    return sink;
}

// ---------------------------------------------------------------------------
// Power-mean convexity

std::string spec_name(const ConvexitySpec& s) {
    return "(" + fmt_num(s.a) + "," + fmt_num(s.b) + ")-" +
           (s.direction == Direction::convex ? "convex" : "concave");
}

void power_mean_for_q(ClaimSink& sink, const ConvexitySpec& spec, double q, const Grid& grid,
                      Evaluator& ev) {
    const std::string name = spec_name(spec);
    const bool convex = spec.direction == Direction::convex;

    // (i) x^{1-a} V' V^{b-1} increasing for convex, decreasing for concave.
    const std::string monitor = name + " monitor";
    const auto& xs = grid.x_values;
    const auto m = [&](double x) {
        return std::pow(x, 1.0 - spec.a) * ev.dv(q, x) * std::pow(ev.v(q, x), spec.b - 1.0);
    };
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        guarded(sink, monitor, q, xs[i], [&] {
            const double m0 = m(xs[i]);
            const double m1 = m(xs[i + 1]);
            if (convex) {
                sink.claim(monitor, true, Relation::strict, q, xs[i], xs[i + 1], m0, m1);
            } else {
                sink.claim(monitor, true, Relation::strict, q, xs[i], xs[i + 1], m1, m0);
            }
        });
    }

    // (ii) V(H_a(x, y)) against H_b(V(x), V(y)).
    const std::string midpoint = name + " midpoint";
    const auto& ps = grid.pair_x_values;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
            for (double alpha : spec.alphas) {
                guarded(sink, midpoint, q, ps[i], [&] {
                    const double x = ps[i], y = ps[j];
                    const double v_mean = ev.v(q, power_mean(spec.a, x, y, alpha));
                    const double mean_v = power_mean(spec.b, ev.v(q, x), ev.v(q, y), alpha);
                    if (convex) {
                        sink.claim(midpoint, true, Relation::strict, q, x, y, v_mean, mean_v, std::nullopt, alpha);
                    } else {
                        sink.claim(midpoint, true, Relation::strict, q, x, y, mean_v, v_mean, std::nullopt, alpha);
                    }
                });
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Turan-type inequalities in q

ClaimSink turan_for_q(double q, const Grid& grid, const RunOptions& opts) {
    ClaimSink sink("turan", opts.tolerance, opts.keep_points);
    Evaluator ev;
    for (double x : grid.x_values) {
        guarded(sink, "turan", q, x, [&] {
            const double v0 = ev.v(q, x), v1 = ev.v(q + 1.0, x), v2 = ev.v(q + 2.0, x);
            const double sq = v1 * v1, prod = v0 * v2;
            if (q > -0.5) {
                const double c = (q + 2.0) * (2.0 * q + 1.0) / ((q + 1.0) * (2.0 * q + 3.0));
                sink.claim("turan-left", true, Relation::strict, q, x, std::nullopt, c * prod, sq);
            }
            sink.claim("turan-right", true, Relation::strict, q, x, std::nullopt, sq,
                       (q + 2.0) / (q + 1.0) * prod);
            sink.claim("turan-improved", true, Relation::strict, q, x, std::nullopt, sq, prod);
            sink.claim("order-bound", true, Relation::strict, q, x, std::nullopt,
                       (2.0 * q + 1.0) * v0, 2.0 * (q + 1.0) * v1);
            sink.claim("ratio-derivative", true, Relation::strict, q, x, std::nullopt, -v0 * v1,
                       (q + 1.0) * sq - (q + 2.0) * prod);
        });
    }
    return sink;
}

double turan_left_constant(double q) {
    return (q + 2.0) * (2.0 * q + 1.0) / ((q + 1.0) * (2.0 * q + 3.0));
}

double turan_ratio(Evaluator& ev, double q, double x) {
    const double v1 = ev.v(q + 1.0, x);
    return v1 * v1 / (ev.v(q, x) * ev.v(q + 2.0, x));
}

// Near x = 0 the left Turan constant is attained, so only non-strict
// closeness and a monotone approach are asserted.
ClaimSink turan_sharpness(const RunOptions& opts) {
    ClaimSink sink("turan", opts.tolerance, opts.keep_points);
    Evaluator ev;
    constexpr double probe = 1e-4;
    for (double q : {0.0, 1.0, 2.5}) {
        guarded(sink, "sharpness", q, probe, [&] {
            const double gap = std::abs(turan_ratio(ev, q, probe) - turan_left_constant(q));
            sink.claim("sharpness", true, Relation::non_strict, q, probe, std::nullopt, gap, 1e-3);
        });
    }
    const double q = 0.0;
    const double xs[] = {1e-2, 1e-3, 1e-4};
    for (int k = 0; k + 1 < 3; ++k) {
        guarded(sink, "sharp-approach", q, xs[k + 1], [&] {
            const double c = turan_left_constant(q);
            const double far = std::abs(turan_ratio(ev, q, xs[k]) - c);
            const double near = std::abs(turan_ratio(ev, q, xs[k + 1]) - c);
            sink.claim("sharp-approach", true, Relation::strict, q, xs[k + 1], xs[k], near, far);
        });
    }
    return sink;
}

// ---------------------------------------------------------------------------
// Log-convexity in q

ClaimSink logconvexity_at(double x, const std::vector<double>& qs, const RunOptions& opts) {
    ClaimSink sink("logconvexity", opts.tolerance, opts.keep_points);
    Evaluator ev;
    const auto f = [&](double q) { return std::exp(ln_gamma(q + 1.0)) * ev.v(q, x); };
    for (std::size_t i = 0; i < qs.size(); ++i) {
        for (std::size_t j = i + 1; j < qs.size(); ++j) {
            const double q1 = qs[i], q2 = qs[j], mid = 0.5 * (q1 + q2);
            guarded(sink, "gamma-weighted", q1, x, [&] {
                const double fm = f(mid);
                sink.claim("gamma-weighted", true, Relation::strict, q1, x, std::nullopt, fm * fm,
                           f(q1) * f(q2), q2);
            });
            guarded(sink, "open-problem V_q", q1, x, [&] {
                const double vm = ev.v(mid, x);
                sink.claim("open-problem V_q", false, Relation::strict, q1, x, std::nullopt,
                           vm * vm, ev.v(q1, x) * ev.v(q2, x), q2);
            });
        }
    }
    return sink;
}

// ---------------------------------------------------------------------------
// Simon's inequalities reduced to V_q

ClaimSink simon_for_q(double q, const Grid& grid, const RunOptions& opts) {
    ClaimSink sink("simon", opts.tolerance, opts.keep_points);
    Evaluator ev;
    for (double x : grid.x_values) {
        guarded(sink, "simon", q, x, [&] {
            const double v0 = ev.v(q, x), v1 = ev.v(q + 1.0, x), v2 = ev.v(q + 2.0, x);
            const double prod = v0 * v2, sq = v1 * v1;
            const auto none = std::nullopt;
            sink.claim("first printed x^{-2(q+3)}", true, Relation::non_strict, q, x, none, prod,
                       sq * (1.0 + std::pow(x, -2.0 * (q + 3.0)) * v2));
            sink.claim("second printed 1/x", true, Relation::non_strict, q, x, none, prod - sq,
                       v1 * v2 / x);
            sink.claim("combined lower", true, Relation::non_strict, q, x, none, -v1 * v2 / x,
                       sq - prod);
            sink.claim("combined upper", true, Relation::strict, q, x, none, sq - prod, 0.0);
            sink.claim("first rederived x^{-2q-7}", false, Relation::non_strict, q, x, none, prod,
                       sq * (1.0 + std::pow(x, -2.0 * q - 7.0) * v2));
            sink.claim("second rederived 1/x^2", false, Relation::non_strict, q, x, none,
                       prod - sq, v1 * v2 / (x * x));
        });
    }
    return sink;
}

// ---------------------------------------------------------------------------
// Bounds

ClaimSink bounds_for_q(double q, const Grid& grid, const RunOptions& opts) {
    ClaimSink sink("bounds", opts.tolerance, opts.keep_points);
    Evaluator ev;
    const auto none = std::nullopt;
    for (double x : grid.x_values) {
        if (q >= 0.0) {
            guarded(sink, "ratio lower", q, x, [&] {
                const double v = ev.v(q, x), vm = ev.v(q - 1.0, x);
                sink.claim("ratio lower", true, Relation::strict, q, x, none,
                           2.0 * x * x / (2.0 * x * x + 1.0), v / vm);
                sink.claim("ratio upper", true, Relation::strict, q, x, none, v, vm);
            });
        }
        guarded(sink, "envelope", q, x, [&] {
            const double v = ev.v(q, x);
            const Order order(q);
            sink.claim("envelope exp lower", true, Relation::strict, q, x, none,
                       vq_lower_exp(order, x), v);
            sink.claim("envelope kratzel lower", true, Relation::strict, q, x, none,
                       vq_lower_kratzel(order, x), v);
            if (q > -0.75) {
                sink.claim("envelope agm upper", true, Relation::strict, q, x, none, v,
                           vq_upper_agm(order, x));
            }
        });
    }
    return sink;
}

ClaimSink mills_bounds_task(const Grid& grid, const RunOptions& opts) {
    ClaimSink sink("bounds", opts.tolerance, opts.keep_points);
    Evaluator ev;
    const auto none = std::nullopt;
    for (double x : grid.x_values) {
        guarded(sink, "gordon", 0.0, x, [&] {
            sink.claim("gordon V_0 < 1/x", true, Relation::strict, 0.0, x, none, ev.v(0.0, x),
                       1.0 / x);
        });
        guarded(sink, "mills", none, x, [&] {
            const auto row = mills_bounds(x);
            sink.claim("mills f1 < m", true, Relation::strict, none, x, none, row.f1, row.m);
            sink.claim("mills m < f2", true, Relation::strict, none, x, none, row.m, row.f2);
            sink.claim("mills m < f4", true, Relation::strict, none, x, none, row.m, row.f4);
            sink.claim("mills m < f5", true, Relation::strict, none, x, none, row.m, row.f5);
            if (row.f3) {
                sink.claim("mills m < f3", true, Relation::strict, none, x, none, row.m, *row.f3);
                if (x > 1.0) {
                    sink.claim("mills f3 < f2", true, Relation::strict, none, x, none, *row.f3,
                               row.f2);
                }
            }
        });
    }
    return sink;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<double> log_space(double lo, double hi, int n) {
    if (n < 1 || !(lo > 0.0) || !(hi >= lo)) throw UsageError("log_space: bad range");
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) out[i] = std::exp(a + (b - a) * i / (n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

namespace {

std::vector<double> sample_pairs(const std::vector<double>& xs, std::size_t count) {
    if (xs.size() <= count) return xs;
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(xs[(i * (xs.size() - 1) + (count - 1) / 2) / (count - 1)]);
    }
    return out;
}

void require_increasing(const std::vector<double>& v, const char* what) {
    if (v.empty()) throw UsageError(std::string("grid: ") + what + " list is empty");
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) throw UsageError(std::string("grid: non-finite ") + what);
        if (i > 0 && !(v[i] > v[i - 1])) {
            throw UsageError(std::string("grid: ") + what + " values must be strictly increasing");
        }
    }
}

}  // namespace

Grid Grid::default_grid() {
    Grid g;
    g.q_values = {-0.45, -0.25, 0.0, 0.3, 0.5, 1.0, 2.0, 3.5, 5.0};
    g.x_values = log_space(0.05, 20.0, 60);
    g.pair_x_values = sample_pairs(g.x_values, 12);
    g.description = "default: 9 orders, 60 log-spaced x on [0.05, 20], 12-point pair subgrid";
    return g;
}

Grid Grid::from_lists(std::vector<double> q, std::vector<double> x) {
    Grid g;
    g.q_values = std::move(q);
    g.x_values = std::move(x);
    g.pair_x_values = sample_pairs(g.x_values, 12);
    g.description = "custom: " + std::to_string(g.q_values.size()) + " orders, " +
                    std::to_string(g.x_values.size()) + " x values";
    return g;
}

void Grid::validate() const {
    require_increasing(q_values, "q");
    require_increasing(x_values, "x");
    for (double q : q_values) {
        if (!(q > -1.0)) throw UsageError("grid: orders must satisfy q > -1");
    }
    if (!(x_values.front() > 0.0)) throw UsageError("grid: x values must be positive");
    if (!pair_x_values.empty()) {
        require_increasing(pair_x_values, "pair x");
        if (!(pair_x_values.front() > 0.0)) throw UsageError("grid: x values must be positive");
    }
}

double TolerancePolicy::slack(double rhs) const { return std::max(abs, rel * std::abs(rhs)); }

bool TolerancePolicy::strict_holds(double lhs, double rhs) const {
    return lhs < rhs - slack(rhs);
}

bool TolerancePolicy::non_strict_holds(double lhs, double rhs) const {
    return lhs <= rhs + slack(rhs);
}

ClaimSink::ClaimSink(std::string suite, TolerancePolicy tolerance, bool keep_points)
    : suite_(std::move(suite)), tolerance_(tolerance), keep_points_(keep_points) {}

void ClaimSink::claim(std::string_view check, bool asserting, Relation relation,
                      std::optional<double> q, double x, std::optional<double> y, double lhs,
                      double rhs, std::optional<double> q2, std::optional<double> alpha) {
    ClaimRecord rec;
    rec.suite = suite_;
    rec.check = std::string(check);
    rec.q = q;
    rec.q2 = q2;
    rec.alpha = alpha;
    rec.x = x;
    rec.y = y;
    rec.lhs = lhs;
    rec.rhs = rhs;
    rec.margin = rhs - lhs;
    rec.relation = relation;
    const bool finite = std::isfinite(lhs) && std::isfinite(rhs);
    rec.holds = finite && (relation == Relation::strict ? tolerance_.strict_holds(lhs, rhs)
                                                        : tolerance_.non_strict_holds(lhs, rhs));

    auto it = std::find_if(checks_.begin(), checks_.end(),
                           [&](const CheckSummary& c) { return c.check == check; });
    if (it == checks_.end()) {
        checks_.push_back({suite_, std::string(check), asserting, 0, 0,
                           std::numeric_limits<double>::infinity()});
        it = checks_.end() - 1;
    }
    ++it->evaluated;
    if (!rec.holds) ++it->failed;
    const double scale = std::max({std::abs(lhs), std::abs(rhs), kTiny});
    it->min_rel_margin = std::min(it->min_rel_margin, finite ? rec.margin / scale : -std::numeric_limits<double>::infinity());

    if (!rec.holds) (asserting ? violations_ : observations_).push_back(rec);
    if (keep_points_) points_.push_back(std::move(rec));
}

void ClaimSink::failure(std::string_view check, std::optional<double> q, double x,
                        std::string method, std::string message) {
    failures_.push_back({suite_, std::string(check), q, x, std::move(method), std::move(message)});
}

void ClaimSink::drain_into(VerificationReport& report) {
    for (auto& c : checks_) {
        auto it = std::find_if(report.checks.begin(), report.checks.end(),
                               [&](const CheckSummary& r) {
                                   return r.suite == c.suite && r.check == c.check;
                               });
        if (it == report.checks.end()) {
            report.checks.push_back(std::move(c));
        } else {
            it->evaluated += c.evaluated;
            it->failed += c.failed;
            it->min_rel_margin = std::min(it->min_rel_margin, c.min_rel_margin);
        }
    }
    auto move_all = [](auto& dst, auto& src) {
        dst.insert(dst.end(), std::make_move_iterator(src.begin()),
                   std::make_move_iterator(src.end()));
        src.clear();
    };
    move_all(report.violations, violations_);
    move_all(report.observations, observations_);
    move_all(report.points, points_);
    move_all(report.failures, failures_);
    checks_.clear();
    canonicalize(report);
}

// ---------------------------------------------------------------------------

bool ConvexitySpec::admits(double q) const {
    return q_region == QRegion::ge_zero ? q >= 0.0 : q > -1.0;
}

void ConvexitySpec::validate() const {
    const bool any_q = q_region == QRegion::gt_minus_one;
    bool ok = false;
    if (direction == Direction::concave) {
        ok = (a <= 0.0 && b <= 0.0) || (a <= -1.0 && b <= 1.0) ||
             (!any_q && a <= 1.0 && b <= -1.0);
    } else {
        ok = !any_q && a >= 2.0 && b >= 0.0;
    }
    if (!ok || alphas.empty()) {
        throw UsageError("convexity spec " + spec_name(*this) +
                         " lies outside every proven region");
    }
    for (double al : alphas) {
        if (!(al > 0.0 && al < 1.0)) throw UsageError("convexity spec: alpha must lie in (0,1)");
    }
}

std::vector<ConvexitySpec> default_convexity_specs() {
    std::vector<ConvexitySpec> out;
    const auto add = [&](double a, double b, Direction d, QRegion r) {
        for (const auto& s : out) {
            if (s.a == a && s.b == b && s.direction == d && s.q_region == r) return;
        }
        ConvexitySpec s;
        s.a = a;
        s.b = b;
        s.direction = d;
        s.q_region = r;
        s.label = spec_name(s);
        out.push_back(std::move(s));
    };
    const auto concave = Direction::concave, convex = Direction::convex;
    const auto all_q = QRegion::gt_minus_one, nonneg_q = QRegion::ge_zero;

    // a, b <= 0, q > -1
    for (double a : {-3.0, -1.0, 0.0})
        for (double b : {-3.0, 0.0}) add(a, b, concave, all_q);
    add(-2.0, -1.5, concave, all_q);
    // a <= -1, b <= 1, q > -1
    for (double a : {-1.0, -2.0})
        for (double b : {-1.0, 0.0, 1.0}) add(a, b, concave, all_q);
    add(-1.5, 0.5, concave, all_q);
    // a >= 2, b >= 1, q >= 0
    for (double a : {2.0, 3.0})
        for (double b : {1.0, 2.0}) add(a, b, convex, nonneg_q);
    add(2.5, 1.5, convex, nonneg_q);
    // a >= 2, b >= 0, q >= 0
    for (double a : {2.0, 3.0})
        for (double b : {0.0, 0.5}) add(a, b, convex, nonneg_q);
    add(2.5, 0.25, convex, nonneg_q);
    // a <= 1, b <= -1, q >= 0
    for (double a : {0.0, 1.0})
        for (double b : {-1.0, -2.0}) add(a, b, concave, nonneg_q);
    add(0.5, -1.5, concave, nonneg_q);
    return out;
}

double power_mean(double a, double x, double y, double alpha) {
    if (a == 0.0) return std::exp(alpha * std::log(x) + (1.0 - alpha) * std::log(y));
    // Factor out the larger argument so large |a| does not overflow.
    const double m = std::max(x, y);
    const double s = alpha * std::pow(x / m, a) + (1.0 - alpha) * std::pow(y / m, a);
    return m * std::pow(s, 1.0 / a);
}

// ---------------------------------------------------------------------------

VerificationReport check_monotonicity_suite(const Grid& grid, const RunOptions& opts) {
    auto r = make_report({"monotonicity"}, grid, opts);
    run_tasks(grid.q_values.size(), opts.threads, r,
              [&](std::size_t i) { return monotonicity_for_q(grid.q_values[i], grid, opts); });
    return r;
}

VerificationReport check_power_mean(const ConvexitySpec& spec, const Grid& grid,
                                    const RunOptions& opts) {
    spec.validate();
    auto r = make_report({"convexity"}, grid, opts);
    run_tasks(grid.q_values.size(), opts.threads, r, [&](std::size_t i) {
        ClaimSink sink("convexity", opts.tolerance, opts.keep_points);
        Evaluator ev;
        if (spec.admits(grid.q_values[i])) power_mean_for_q(sink, spec, grid.q_values[i], grid, ev);
        return sink;
    });
    return r;
}

VerificationReport check_convexity_suite(const Grid& grid, const RunOptions& opts) {
    const auto specs = default_convexity_specs();
    auto r = make_report({"convexity"}, grid, opts);
    // One task per order; the evaluator cache is shared across specs.
    run_tasks(grid.q_values.size(), opts.threads, r, [&](std::size_t i) {
        ClaimSink sink("convexity", opts.tolerance, opts.keep_points);
        Evaluator ev;
        const double q = grid.q_values[i];
        for (const auto& spec : specs) {
            if (spec.admits(q)) power_mean_for_q(sink, spec, q, grid, ev);
        }
        return sink;
    });
    return r;
}

VerificationReport check_turan(const Grid& grid, const RunOptions& opts) {
    auto r = make_report({"turan"}, grid, opts);
    const std::size_t n = grid.q_values.size();
    run_tasks(n + 1, opts.threads, r, [&](std::size_t i) {
        return i < n ? turan_for_q(grid.q_values[i], grid, opts) : turan_sharpness(opts);
    });
    return r;
}

VerificationReport check_logconvexity_in_q(double x, const std::vector<double>& q_grid,
                                           const RunOptions& opts) {
    auto grid = Grid::from_lists(q_grid, {x});
    auto r = make_report({"logconvexity"}, grid, opts);
    logconvexity_at(x, q_grid, opts).drain_into(r);
    return r;
}

VerificationReport check_logconvexity_suite(const Grid& grid, const RunOptions& opts) {
    auto r = make_report({"logconvexity"}, grid, opts);
    run_tasks(grid.x_values.size(), opts.threads, r, [&](std::size_t i) {
        return logconvexity_at(grid.x_values[i], grid.q_values, opts);
    });
    return r;
}

VerificationReport check_simon(const Grid& grid, const RunOptions& opts) {
    auto r = make_report({"simon"}, grid, opts);
    run_tasks(grid.q_values.size(), opts.threads, r,
              [&](std::size_t i) { return simon_for_q(grid.q_values[i], grid, opts); });
    return r;
}

VerificationReport check_bounds_suite(const Grid& grid, const RunOptions& opts) {
    auto r = make_report({"bounds"}, grid, opts);
    const std::size_t n = grid.q_values.size();
    run_tasks(n + 1, opts.threads, r, [&](std::size_t i) {
        return i < n ? bounds_for_q(grid.q_values[i], grid, opts) : mills_bounds_task(grid, opts);
    });
    return r;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"monotonicity", "convexity", "turan",
                                                "logconvexity", "simon",     "bounds"};
    return names;
}

VerificationReport run_suite(const SuiteConfig& config) {
    if (config.suites.empty()) throw UsageError("no suite selected");
    std::vector<bool> selected(suite_names().size(), false);
    for (const auto& s : config.suites) {
        if (s == "all") {
            selected.assign(selected.size(), true);
            continue;
        }
        const auto rank = static_cast<std::size_t>(suite_rank(s));
        if (rank >= selected.size()) throw UsageError("unknown suite '" + s + "'");
        selected[rank] = true;
    }
    config.grid.validate();

    std::vector<std::string> names;
    for (std::size_t i = 0; i < selected.size(); ++i) {
        if (selected[i]) names.push_back(suite_names()[i]);
    }
    auto report = make_report(names, config.grid, config.options);
    const auto& g = config.grid;
    const auto& o = config.options;
    for (const auto& name : names) {
        VerificationReport part;
        if (name == "monotonicity") part = check_monotonicity_suite(g, o);
        else if (name == "convexity") part = check_convexity_suite(g, o);
        else if (name == "turan") part = check_turan(g, o);
        else if (name == "logconvexity") part = check_logconvexity_suite(g, o);
        else if (name == "simon") part = check_simon(g, o);
        else part = check_bounds_suite(g, o);
        merge_into(report, std::move(part));
    }
    canonicalize(report);
    return report;
}

}  // namespace vq
