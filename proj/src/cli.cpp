#include "vq/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include <CLI11.hpp>

#include "vq/bounds.hpp"
#include "vq/errors.hpp"
#include "vq/report_json.hpp"
#include "vq/verifier.hpp"
#include "vq/vq.hpp"

namespace vq {
namespace {

constexpr double kMinTol = 1e-13;
constexpr double kMaxTol = 1e-6;
constexpr std::size_t kListedPerCheck = 20;

struct Format {
    std::string kind = "csv";
    int precision = 12;
};

std::string num(double v, int precision) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision);
    return std::string(buf, res.ptr);
}

std::string json_num(double v, int precision) {
    return std::isfinite(v) ? num(v, precision) : "null";
}

void add_format_options(CLI::App* cmd, Format& f, std::vector<std::string> kinds) {
    cmd->add_option("--format", f.kind, "Output format")
        ->check(CLI::IsMember(std::move(kinds)))
        ->capture_default_str();
    cmd->add_option("--precision", f.precision, "Significant digits")
        ->check(CLI::Range(6, 17))
        ->capture_default_str();
}

// Parses the environment tolerance; throws UsageError when present but invalid.
std::optional<double> env_tolerance() {
    const char* raw = std::getenv(kToleranceEnv);
    if (!raw || !*raw) return std::nullopt;
    const std::string s(raw);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw UsageError(std::string(kToleranceEnv) + " is not a number: '" + s + "'");
    }
    return v;
}

void check_tolerance(double tol, const std::string& source) {
    if (!(tol >= kMinTol && tol <= kMaxTol)) {
        throw UsageError(source + " tolerance " + num(tol, 6) + " outside [1e-13, 1e-6]");
    }
}

std::vector<double> linear_grid(double lo, double hi, int steps) {
    if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) {
        throw UsageError("range must satisfy 0 < x-min < x-max");
    }
    if (steps < 2) throw UsageError("steps must be at least 2");
    std::vector<double> xs(steps);
    const double n = steps - 1;
    for (int i = 0; i < steps; ++i) xs[i] = (lo * (n - i) + hi * i) / n;
    return xs;
}

std::vector<double> sorted_unique(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
    double q = 0.0;
    double x = 0.0;
    std::string method;
    Format format;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
    std::optional<Method> method;
    if (!a.method.empty() && a.method != "auto") {
        method = parse_method(a.method);
        if (!method) throw UsageError("unknown method '" + a.method + "'");
    }
    const Order q(a.q);
    const auto r = vq(q, a.x, method);
    const int p = a.format.precision;
    if (a.format.kind == "json") {
        out << "{\"q\":" << json_num(a.q, p) << ",\"x\":" << json_num(a.x, p)
            << ",\"value\":" << json_num(r.value, p) << ",\"method\":\"" << to_string(r.method)
            << "\",\"abs_err_est\":" << json_num(r.abs_err_est, p) << "}\n";
    } else {
        out << "q,x,value,method,abs_err_est\n"
            << num(a.q, p) << ',' << num(a.x, p) << ',' << num(r.value, p) << ','
            << to_string(r.method) << ',' << num(r.abs_err_est, p) << '\n';
    }
    return exit_ok;
}

struct FigureArgs {
    double x_min = 0.7;
    double x_max = 3.0;
    int steps = 231;
    Format format;
};

int cmd_figure(const FigureArgs& a, std::ostream& out) {
    const auto xs = linear_grid(a.x_min, a.x_max, a.steps);
    const int p = a.format.precision;
    if (a.format.kind == "json") {
        out << "[\n";
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const auto r = mills_bounds(xs[i]);
            out << "  {\"x\":" << json_num(r.x, p) << ",\"f1\":" << json_num(r.f1, p)
                << ",\"f2\":" << json_num(r.f2, p)
                << ",\"f3\":" << (r.f3 ? json_num(*r.f3, p) : "null")
                << ",\"f4\":" << json_num(r.f4, p) << ",\"f5\":" << json_num(r.f5, p)
                << ",\"m\":" << json_num(r.m, p) << '}' << (i + 1 < xs.size() ? "," : "") << '\n';
        }
        out << "]\n";
        return exit_ok;
    }
    out << "x,f1,f2,f3,f4,f5,m\n";
    for (double x : xs) {
        const auto r = mills_bounds(x);
        out << num(r.x, p) << ',' << num(r.f1, p) << ',' << num(r.f2, p) << ','
            << (r.f3 ? num(*r.f3, p) : "") << ',' << num(r.f4, p) << ',' << num(r.f5, p) << ','
            << num(r.m, p) << '\n';
    }
    return exit_ok;
}

struct EnvelopeArgs {
    double q = 0.0;
    double x_min = 0.1;
    double x_max = 10.0;
    int steps = 50;
    Format format;
};

int cmd_envelope(const EnvelopeArgs& a, std::ostream& out, std::ostream& err) {
    const Order q(a.q);
    if (q.is_sentinel()) throw DomainError("envelope requires q > -1");
    const auto xs = linear_grid(a.x_min, a.x_max, a.steps);
    const bool agm = a.q > -0.75;
    if (!agm) err << "note: upper_agm needs q > -3/4; column dropped\n";
    const int p = a.format.precision;

    struct Row {
        double x, lower_exp, lower_kratzel, v;
        std::optional<double> upper_agm;
    };
    std::vector<Row> rows;
    rows.reserve(xs.size());
    for (double x : xs) {
        const auto e = vq_envelope(q, x);
        rows.push_back({x, e.lower_exp, e.lower_kratzel, vq(q, x).value, e.upper_agm});
    }

    if (a.format.kind == "json") {
        out << "[\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            out << "  {\"x\":" << json_num(r.x, p) << ",\"lower_exp\":" << json_num(r.lower_exp, p)
                << ",\"lower_kratzel\":" << json_num(r.lower_kratzel, p)
                << ",\"vq\":" << json_num(r.v, p);
            if (agm) out << ",\"upper_agm\":" << json_num(*r.upper_agm, p);
            out << '}' << (i + 1 < rows.size() ? "," : "") << '\n';
        }
        out << "]\n";
        return exit_ok;
    }
    out << "x,lower_exp,lower_kratzel,vq" << (agm ? ",upper_agm" : "") << '\n';
    for (const auto& r : rows) {
        out << num(r.x, p) << ',' << num(r.lower_exp, p) << ',' << num(r.lower_kratzel, p) << ','
            << num(r.v, p);
        if (agm) out << ',' << num(*r.upper_agm, p);
        out << '\n';
    }
    return exit_ok;
}

struct VerifyArgs {
    std::vector<std::string> suites{"all"};
    std::vector<double> q;
    std::vector<double> x;
    std::optional<double> tol;
    unsigned threads = 1;
    std::string format = "text";
    int precision = 12;
};

std::string where(const ClaimRecord& c, int p) {
    std::string s;
    if (c.q) s += "q=" + num(*c.q, p);
    if (c.q2) s += " q2=" + num(*c.q2, p);
    s += (s.empty() ? "" : " ") + std::string("x=") + num(c.x, p);
    if (c.y) s += " y=" + num(*c.y, p);
    if (c.alpha) s += " alpha=" + num(*c.alpha, p);
    return s;
}

void print_claim(std::ostream& out, const ClaimRecord& c, int p) {
    out << "    " << where(c, p) << "  lhs=" << num(c.lhs, p)
        << (c.relation == Relation::strict ? " < " : " <= ") << "rhs=" << num(c.rhs, p)
        << "  margin=" << num(c.margin, p) << (c.holds ? "" : "  VIOLATED") << '\n';
}

void print_listing(std::ostream& out, const std::vector<ClaimRecord>& claims, int p) {
    std::map<std::pair<std::string, std::string>, std::size_t> shown;
    std::map<std::pair<std::string, std::string>, std::size_t> hidden;
    for (const auto& c : claims) {
        const auto key = std::make_pair(c.suite, c.check);
        if (shown[key] == 0) out << "  " << c.suite << " / " << c.check << '\n';
        if (shown[key] < kListedPerCheck) {
            print_claim(out, c, p);
            ++shown[key];
        } else {
            ++hidden[key];
        }
    }
    for (const auto& [key, n] : hidden) {
        out << "  " << key.first << " / " << key.second << ": " << n << " more not listed\n";
    }
}

void print_text_report(std::ostream& out, const VerificationReport& r, int p) {
    out << "suites: ";
    for (std::size_t i = 0; i < r.suites.size(); ++i) out << (i ? "," : "") << r.suites[i];
    out << "\ngrid: " << r.grid.description << "\ntolerance: rel=" << num(r.tolerance.rel, 6)
        << " abs=" << num(r.tolerance.abs, 6) << "\n\nchecks:\n";
    for (const auto& c : r.checks) {
        out << "  " << (c.asserting ? "" : "[observation] ") << c.suite << " / " << c.check
            << ": " << c.evaluated << " evaluated, " << c.failed << " failed, min rel margin "
            << num(c.min_rel_margin, 4) << '\n';
    }
    if (!r.points.empty()) {
        out << "\npoints:\n";
        for (const auto& c : r.points) {
            out << "  " << c.suite << " / " << c.check << '\n';
            print_claim(out, c, p);
        }
    }
    if (!r.violations.empty()) {
        out << "\nviolations:\n";
        print_listing(out, r.violations, p);
    }
    if (!r.observations.empty()) {
        out << "\nobservations (do not affect the exit status):\n";
        print_listing(out, r.observations, p);
    }
    if (!r.failures.empty()) {
        out << "\nevaluation failures:\n";
        for (const auto& f : r.failures) {
            out << "  " << f.suite << " / " << f.check << " ";
            if (f.q) out << "q=" << num(*f.q, p) << ' ';
            out << "x=" << num(f.x, p) << " [" << f.method << "] " << f.message << '\n';
        }
    }
    out << '\n'
        << (r.pass() ? "PASS" : "FAIL") << ": " << r.violations.size() << " violations, "
        << r.observations.size() << " observation counterexamples, " << r.failures.size()
        << " evaluation failures\n";
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
    SuiteConfig cfg;
    cfg.suites = a.suites;
    if (!a.q.empty() || !a.x.empty()) {
        const auto def = Grid::default_grid();
        cfg.grid = Grid::from_lists(a.q.empty() ? def.q_values : sorted_unique(a.q),
                                    a.x.empty() ? def.x_values : sorted_unique(a.x));
    }
    if (const auto env = env_tolerance()) {
        check_tolerance(*env, kToleranceEnv);
        cfg.options.tolerance.rel = *env;
    }
    if (a.tol) {
        check_tolerance(*a.tol, "--tol");
        cfg.options.tolerance.rel = *a.tol;
    }
    cfg.options.threads = std::max(1u, a.threads);
    cfg.options.keep_points = cfg.grid.q_values.size() == 1 && cfg.grid.x_values.size() == 1;

    const auto report = run_suite(cfg);
    if (a.format == "json") {
        out << report_to_json(report) << '\n';
    } else {
        print_text_report(out, report, a.precision);
    }
    if (report.has_failures()) return exit_numerical;
    return report.pass() ? exit_ok : exit_violation;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Evaluate V_q(x), tabulate its bounds and verify its inequalities", "vqtool"};
    app.require_subcommand(1);

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "Evaluate V_q(x)");
    eval->add_option("--q", eval_args.q, "Order q > -1, or -1 for V_{-1}(x) = 1/x")->required();
    eval->add_option("--x", eval_args.x, "Argument x >= 0")->required();
    eval->add_option("--method", eval_args.method,
                     "auto, quadrature, psi-series, psi-asymptotic, recurrence, closed-form-q0, "
                     "limit-x0, convention");
    add_format_options(eval, eval_args.format, {"csv", "json"});

    FigureArgs figure_args;
    auto* figure = app.add_subcommand("figure", "Mills ratio and its bounds f1..f5 on a grid");
    figure->add_option("--x-min", figure_args.x_min)->capture_default_str();
    figure->add_option("--x-max", figure_args.x_max)->capture_default_str();
    figure->add_option("--steps", figure_args.steps, "Number of grid points")
        ->capture_default_str();
    add_format_options(figure, figure_args.format, {"csv", "json"});

    VerifyArgs verify_args;
    std::vector<std::string> suite_choices = suite_names();
    suite_choices.push_back("all");
    auto* verify = app.add_subcommand("verify", "Run verification suites over a grid");
    verify->add_option("--suite", verify_args.suites, "Suite name, repeatable")
        ->check(CLI::IsMember(suite_choices))
        ->delimiter(',')
        ->capture_default_str();
    verify->add_option("--q", verify_args.q, "Orders (comma separated or repeated)")
        ->delimiter(',');
    verify->add_option("--x", verify_args.x, "Arguments (comma separated or repeated)")
        ->delimiter(',');
    verify->add_option("--tol", verify_args.tol,
                       std::string("Relative tolerance in [1e-13, 1e-6]; overrides ") +
                           kToleranceEnv);
    verify->add_option("--threads", verify_args.threads)->capture_default_str();
    verify->add_option("--format", verify_args.format)
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    verify->add_option("--precision", verify_args.precision)
        ->check(CLI::Range(6, 17))
        ->capture_default_str();

    EnvelopeArgs envelope_args;
    auto* envelope = app.add_subcommand("envelope", "Closed-form lower and upper bounds of V_q");
    envelope->add_option("--q", envelope_args.q)->required();
    envelope->add_option("--x-min", envelope_args.x_min)->capture_default_str();
    envelope->add_option("--x-max", envelope_args.x_max)->capture_default_str();
    envelope->add_option("--steps", envelope_args.steps)->capture_default_str();
    add_format_options(envelope, envelope_args.format, {"csv", "json"});

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*eval) return cmd_eval(eval_args, out);
        if (*figure) return cmd_figure(figure_args, out);
        if (*verify) return cmd_verify(verify_args, out);
        if (*envelope) return cmd_envelope(envelope_args, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const UnsupportedFeature& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const NumericalFailure& e) {
        err << "numerical failure [" << e.method() << "]: " << e.what() << '\n';
        return exit_numerical;
    }
    return exit_usage;
}

}  // namespace vq
