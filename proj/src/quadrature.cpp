#include "vq/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "vq/errors.hpp"
#include "vq/special.hpp"

namespace vq {
namespace {

// Orthonormal-polynomial recurrence x p_k = b_{k+1} p_{k+1} + a_k p_k + b_k p_{k-1}
// evaluated at one point. Carries a running rescale so the sum of squares
// cannot overflow for nodes far out on the Laguerre tail.
struct RecurrenceEval {
    double pn;
    double dpn;
    double sumsq;
    double log_scale;
};

RecurrenceEval eval_recurrence(const std::vector<double>& a, const std::vector<double>& b,
                               double x) {
    const int n = static_cast<int>(a.size());
    double p_prev = 0.0, p = 1.0, dp_prev = 0.0, dp = 0.0;
    double sumsq = 1.0;
    double log_scale = 0.0;
    for (int k = 0; k < n; ++k) {
        const double bk = k > 0 ? b[k - 1] : 0.0;
        const double bnext = k + 1 < n ? b[k] : 1.0;
        const double p_next = ((x - a[k]) * p - bk * p_prev) / bnext;
        const double dp_next = (p + (x - a[k]) * dp - bk * dp_prev) / bnext;
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
        if (k + 1 < n) sumsq += p * p;
        if (std::abs(p) > 1e100) {
            constexpr double s = 1e-100;
            p *= s;
            p_prev *= s;
            dp *= s;
            dp_prev *= s;
            sumsq *= s * s;
            log_scale += 100.0 * std::log(10.0);
        }
    }
    return {p, dp, sumsq, log_scale};
}

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix, polished by a
// few Newton steps on p_n; weights are mu0 / sum_k p_k(x_i)^2.
GaussRule golub_welsch(const std::vector<double>& diag, const std::vector<double>& offdiag,
                       double mu0) {
    const int n = static_cast<int>(diag.size());
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    if (n == 1) {
        rule.nodes[0] = diag[0];
        rule.weights[0] = mu0;
        return rule;
    }

    Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(diag.data(), n);
    Eigen::VectorXd e = Eigen::Map<const Eigen::VectorXd>(offdiag.data(), n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("gauss-rule", "tridiagonal eigenvalue solve failed");
    }

    for (int i = 0; i < n; ++i) {
        double x = solver.eigenvalues()[i];
        for (int it = 0; it < 3; ++it) {
            const auto r = eval_recurrence(diag, offdiag, x);
            if (r.dpn == 0.0) break;
            const double step = r.pn / r.dpn;
            if (!std::isfinite(step) || std::abs(step) > 1e-8 * std::max(1.0, std::abs(x))) break;
            x -= step;
            if (std::abs(step) <= 1e-17 * std::max(1.0, std::abs(x))) break;
        }
        const auto r = eval_recurrence(diag, offdiag, x);
        rule.nodes[i] = x;
        rule.weights[i] = mu0 * std::exp(-2.0 * r.log_scale) / r.sumsq;
    }
    return rule;
}

bool is_rule_size(int n) { return n >= 1 && n <= 4096; }

}  // namespace

GaussRule gauss_laguerre(int n, double alpha) {
    if (!is_rule_size(n)) throw DomainError("gauss_laguerre: node count out of range");
    if (!(alpha > -1.0)) throw DomainError("gauss_laguerre: alpha must exceed -1");
    std::vector<double> diag(n), off(n > 1 ? n - 1 : 0);
    for (int k = 0; k < n; ++k) diag[k] = 2.0 * k + alpha + 1.0;
    for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(k * (k + alpha));
    return golub_welsch(diag, off, 1.0);
}

GaussRule gauss_jacobi(int n, double alpha, double beta) {
    if (!is_rule_size(n)) throw DomainError("gauss_jacobi: node count out of range");
    if (!(alpha > -1.0) || !(beta > -1.0)) {
        throw DomainError("gauss_jacobi: exponents must exceed -1");
    }
    const double ab = alpha + beta;
    std::vector<double> diag(n), off(n > 1 ? n - 1 : 0);
    diag[0] = (beta - alpha) / (ab + 2.0);
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + ab;
        diag[k] = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
    if (n > 1) {
        off[0] = std::sqrt(4.0 * (1.0 + alpha) * (1.0 + beta) /
                           ((2.0 + ab) * (2.0 + ab) * (3.0 + ab)));
    }
    for (int k = 2; k < n; ++k) {
        const double s = 2.0 * k + ab;
        off[k - 1] = std::sqrt(4.0 * k * (k + alpha) * (k + beta) * (k + ab) /
                               (s * s * (s + 1.0) * (s - 1.0)));
    }
    const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + ln_gamma(alpha + 1.0) +
                                ln_gamma(beta + 1.0) - ln_gamma(ab + 2.0));
    return golub_welsch(diag, off, mu0);
}

namespace {

enum class RuleKind { laguerre, jacobi_left_endpoint, legendre };

// Rules are pure functions of (kind, n, exponent); the cache never changes a
// result, it only skips the eigenvalue solve. Bounded by clearing when full.
std::shared_ptr<const GaussRule> cached_rule(RuleKind kind, int n, double exponent) {
    static std::mutex mutex;
    static std::map<std::tuple<RuleKind, int, double>, std::shared_ptr<const GaussRule>> cache;
    constexpr std::size_t kMaxEntries = 2048;

    const auto key = std::make_tuple(kind, n, exponent);
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    std::shared_ptr<const GaussRule> rule;
    switch (kind) {
        case RuleKind::laguerre: rule = std::make_shared<GaussRule>(gauss_laguerre(n, exponent)); break;
        case RuleKind::jacobi_left_endpoint:
            rule = std::make_shared<GaussRule>(gauss_jacobi(n, 0.0, exponent));
            break;
        case RuleKind::legendre: rule = std::make_shared<GaussRule>(gauss_jacobi(n, 0.0, 0.0)); break;
    }
    std::lock_guard lock(mutex);
    if (cache.size() >= kMaxEntries) cache.clear();
    return cache.emplace(key, std::move(rule)).first->second;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    if (!is_rule_size(n)) throw DomainError("gauss_legendre: node count out of range");
    // Legendre rules are kept for the life of the process.
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const GaussRule>> keep;
    auto rule = cached_rule(RuleKind::legendre, n, 0.0);
    std::lock_guard lock(mutex);
    return *keep.emplace(n, rule).first->second;
}

void QuadratureSpec::validate() const {
    if (node_counts.empty()) throw DomainError("QuadratureSpec: node_counts is empty");
    for (std::size_t i = 0; i < node_counts.size(); ++i) {
        if (node_counts[i] < 2) throw DomainError("QuadratureSpec: node counts must be >= 2");
        if (i > 0 && node_counts[i] <= node_counts[i - 1]) {
            throw DomainError("QuadratureSpec: node counts must be strictly increasing");
        }
    }
    if (!(rel_tol > 0.0 && rel_tol <= 1e-2)) {
        throw DomainError("QuadratureSpec: rel_tol must lie in (0, 1e-2]");
    }
}

namespace {

struct MomentProblem {
    double alpha;
    double d;
    double p;
    double log_norm;  // ln Gamma(alpha + 1)

    // t^alpha e^{-t} (1 + t/d)^p / Gamma(alpha + 1)
    double integrand(double t) const {
        return std::exp(alpha * std::log(t) - t + p * std::log1p(t / d) - log_norm);
    }
};

bool use_direct_laguerre(double d, double p) { return d >= 4.0 * std::max(1.0, std::abs(p)); }

double moment_direct(const MomentProblem& m, int n) {
    const auto rule_ptr = cached_rule(RuleKind::laguerre, n, m.alpha);
    const GaussRule& rule = *rule_ptr;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        if (rule.weights[i] == 0.0) continue;
        sum += rule.weights[i] * std::exp(m.p * std::log1p(rule.nodes[i] / m.d));
    }
    return sum;
}

double moment_composite(const MomentProblem& m, int n) {
    const int panel_n = std::max(8, n / 2);
    const double first = std::min(m.d, 1.0);
    const double cut = std::max(first, 2.0 * (std::abs(m.alpha) + std::abs(m.p)) + 1.0);
    constexpr double max_width = 8.0;

    // [0, first]: t^alpha carried by the Jacobi weight (1 + s)^alpha on [-1, 1].
    double sum = 0.0;
    {
        const auto rule_ptr = cached_rule(RuleKind::jacobi_left_endpoint, panel_n, m.alpha);
        const GaussRule& rule = *rule_ptr;
        const double half = 0.5 * first;
        const double log_pre = (m.alpha + 1.0) * std::log(half) - m.log_norm;
        for (int i = 0; i < panel_n; ++i) {
            const double t = half * (1.0 + rule.nodes[i]);
            sum += rule.weights[i] * std::exp(log_pre - t + m.p * std::log1p(t / m.d));
        }
    }

    const auto leg_ptr = cached_rule(RuleKind::legendre, panel_n, 0.0);
    const GaussRule& leg = *leg_ptr;
    double left = first;
    while (left < cut) {
        const double right = std::min({2.0 * left, left + max_width, cut});
        const double half = 0.5 * (right - left);
        const double mid = 0.5 * (right + left);
        double panel = 0.0;
        for (int i = 0; i < panel_n; ++i) {
            panel += leg.weights[i] * m.integrand(mid + half * leg.nodes[i]);
        }
        sum += half * panel;
        left = right;
    }

    // [cut, inf): substitute t = cut + s against the plain Laguerre weight e^{-s}.
    {
        const auto rule_ptr = cached_rule(RuleKind::laguerre, n, 0.0);
        const GaussRule& rule = *rule_ptr;
        double tail = 0.0;
        for (int i = 0; i < n; ++i) {
            if (rule.weights[i] == 0.0) continue;
            const double t = cut + rule.nodes[i];
            tail += rule.weights[i] * std::exp(m.alpha * std::log(t) - cut +
                                               m.p * std::log1p(t / m.d) - m.log_norm);
        }
        sum += tail;
    }
    return sum;
}

}  // namespace

IntegralEstimate gamma_weighted_moment(double alpha, double d, double p,
                                       const QuadratureSpec& spec) {
    if (!(alpha > -1.0)) throw DomainError("gamma_weighted_moment: alpha must exceed -1");
    if (!(d > 0.0) || !std::isfinite(d)) {
        throw DomainError("gamma_weighted_moment: d must be positive and finite");
    }
    spec.validate();

    const MomentProblem m{alpha, d, p, ln_gamma(alpha + 1.0)};
    const bool direct = use_direct_laguerre(d, p);
    auto at = [&](int n) { return direct ? moment_direct(m, n) : moment_composite(m, n); };

    double prev = at(spec.node_counts.front());
    for (std::size_t i = 1; i < spec.node_counts.size(); ++i) {
        const int n = spec.node_counts[i];
        const double cur = at(n);
        const double diff = std::abs(cur - prev);
        if (std::isfinite(cur) && diff <= spec.rel_tol * std::abs(cur)) {
            return {cur, diff, n};
        }
        prev = cur;
    }
    throw NumericalFailure("quadrature", "node-count escalation exhausted without convergence");
}

}  // namespace vq
