#pragma once

// Grid-sweep checks of the monotonicity, convexity, Turan-type and bound
// claims about V_q. Every claim is normalized to "lhs < rhs" (strict) or
// "lhs <= rhs" (non-strict); margin = rhs - lhs.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vq {

struct Grid {
    std::vector<double> q_values;
    std::vector<double> x_values;
    /// Points used for pairwise (x, y) checks; a subset of x_values by default.
    std::vector<double> pair_x_values;
    std::string description;

    /// q in {-0.45, -0.25, 0, 0.3, 0.5, 1, 2, 3.5, 5}, 60 log-spaced x on
    /// [0.05, 20], 12 of them for pairs.
    static Grid default_grid();

    /// Builds a grid from explicit lists; pair points are sampled from x.
    static Grid from_lists(std::vector<double> q, std::vector<double> x);

    /// Throws UsageError on empty or non-increasing lists, x <= 0 or q <= -1.
    void validate() const;
};

/// n log-spaced points on [lo, hi], endpoints exact.
std::vector<double> log_space(double lo, double hi, int n);

struct TolerancePolicy {
    double rel = 1e-9;
    double abs = 1e-12;

    double slack(double rhs) const;
    /// lhs < rhs - slack(rhs)
    bool strict_holds(double lhs, double rhs) const;
    /// lhs <= rhs + slack(rhs)
    bool non_strict_holds(double lhs, double rhs) const;
};

enum class Relation { strict, non_strict };

struct ClaimRecord {
    std::string suite;
    std::string check;
    std::optional<double> q;
    std::optional<double> q2;  ///< second order for checks over pairs in q
    double x = 0.0;
    std::optional<double> y;   ///< second argument for checks over pairs in x
    std::optional<double> alpha;  ///< mean weight for midpoint checks
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    Relation relation = Relation::strict;
    bool holds = true;
};

/// A claim that failed the tolerance policy on an asserting track.
using ViolationRecord = ClaimRecord;
/// A claim evaluated on an observation-only track; never affects pass/fail.
using Observation = ClaimRecord;

struct EvaluationFailure {
    std::string suite;
    std::string check;
    std::optional<double> q;
    double x = 0.0;
    std::string method;
    std::string message;
};

struct CheckSummary {
    std::string suite;
    std::string check;
    bool asserting = true;
    std::size_t evaluated = 0;
    std::size_t failed = 0;
    /// Smallest margin / max(|rhs|, tiny) over evaluated points.
    double min_rel_margin = 0.0;
};

struct VerificationReport {
    std::vector<std::string> suites;
    Grid grid;
    TolerancePolicy tolerance;
    std::vector<CheckSummary> checks;
    std::vector<ViolationRecord> violations;
    std::vector<Observation> observations;  ///< counterexamples on observation tracks
    std::vector<EvaluationFailure> failures;
    std::vector<ClaimRecord> points;        ///< every evaluated claim, if requested

    bool pass() const { return violations.empty(); }
    bool has_failures() const { return !failures.empty(); }
};

struct RunOptions {
    TolerancePolicy tolerance;
    unsigned threads = 1;
    bool keep_points = false;
};

/// Collects claims for one suite. Exposed so harness self-tests can feed
/// hand-made claims through the same tolerance policy.
class ClaimSink {
public:
    ClaimSink(std::string suite, TolerancePolicy tolerance, bool keep_points);

    void claim(std::string_view check, bool asserting, Relation relation,
               std::optional<double> q, double x, std::optional<double> y, double lhs,
               double rhs, std::optional<double> q2 = std::nullopt,
               std::optional<double> alpha = std::nullopt);
    void failure(std::string_view check, std::optional<double> q, double x,
                 std::string method, std::string message);

    /// Moves the collected claims into `report` and restores canonical order.
    void drain_into(VerificationReport& report);

private:
    std::string suite_;
    TolerancePolicy tolerance_;
    bool keep_points_;
    std::vector<CheckSummary> checks_;
    std::vector<ClaimRecord> violations_;
    std::vector<ClaimRecord> observations_;
    std::vector<ClaimRecord> points_;
    std::vector<EvaluationFailure> failures_;
};

enum class Direction { convex, concave };
enum class QRegion { gt_minus_one, ge_zero };

/// One (a, b) power-mean convexity claim. convex means
/// V(H_a(x, y)) <= H_b(V(x), V(y)), concave the reverse.
struct ConvexitySpec {
    std::string label;
    double a = 0.0;
    double b = 0.0;
    Direction direction = Direction::concave;
    QRegion q_region = QRegion::gt_minus_one;
    std::vector<double> alphas{0.5, 0.3};

    bool admits(double q) const;
    /// Throws UsageError unless (a, b, direction, q_region) lies inside a proven region.
    void validate() const;
};

/// Corner and interior samples of every proven (a, b) region.
std::vector<ConvexitySpec> default_convexity_specs();

/// Power mean of order a with weight alpha on x; a = 0 is the geometric mean.
double power_mean(double a, double x, double y, double alpha);

VerificationReport check_monotonicity_suite(const Grid& grid, const RunOptions& opts = {});
VerificationReport check_power_mean(const ConvexitySpec& spec, const Grid& grid,
                                    const RunOptions& opts = {});
VerificationReport check_convexity_suite(const Grid& grid, const RunOptions& opts = {});
VerificationReport check_turan(const Grid& grid, const RunOptions& opts = {});
VerificationReport check_logconvexity_in_q(double x, const std::vector<double>& q_grid,
                                           const RunOptions& opts = {});
VerificationReport check_logconvexity_suite(const Grid& grid, const RunOptions& opts = {});
VerificationReport check_simon(const Grid& grid, const RunOptions& opts = {});
VerificationReport check_bounds_suite(const Grid& grid, const RunOptions& opts = {});

/// monotonicity, convexity, turan, logconvexity, simon, bounds
const std::vector<std::string>& suite_names();

struct SuiteConfig {
    std::vector<std::string> suites{"all"};
    Grid grid = Grid::default_grid();
    RunOptions options;
};

/// Runs the selected suites ("all" expands) and merges them in canonical
/// order. Unknown suite names and empty grids raise UsageError.
VerificationReport run_suite(const SuiteConfig& config);

}  // namespace vq
