#include "vq/vq.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "vq/errors.hpp"
#include "vq/special.hpp"

namespace vq {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kSeriesRegimeMax = 0.05;
constexpr double kAsymptoticRegimeMin = 30.0;
constexpr int kMaxRecurrenceSpan = 8;
constexpr double kFormAgreement = 1e-9;

Method tag_of(PsiMethod m) {
    switch (m) {
        case PsiMethod::series: return Method::psi_series;
        case PsiMethod::asymptotic: return Method::psi_asymptotic;
        case PsiMethod::integral: return Method::quadrature;
    }
    return Method::quadrature;
}

void require_x(double x, bool allow_zero) {
    if (std::isnan(x) || x < 0.0 || (!allow_zero && x == 0.0) || std::isinf(x)) {
        throw DomainError(allow_zero ? "x must be finite and non-negative"
                                     : "x must be finite and positive");
    }
}

EvalResult vq_recurrence(Order q, double x) {
    const double qv = q.value();
    if (q.is_sentinel() || qv < 0.0) throw DomainError("recurrence method requires q >= 0");
    const int steps = static_cast<int>(std::floor(qv));
    if (steps > kMaxRecurrenceSpan) {
        throw DomainError("recurrence method is limited to an order span of 8");
    }
    const double frac = qv - steps;

    // Seeds V_{frac-1}, V_frac; frac = 0 uses the sentinel and the closed form.
    double prev, cur, err_prev, err_cur;
    if (frac == 0.0) {
        prev = vq_neg1(x);
        cur = vq_closed_form_q0(x);
        err_prev = kEps;
        err_cur = 4.0 * kEps;
    } else {
        const auto a = vq_quadrature(Order(frac - 1.0), x);
        const auto b = vq_quadrature(Order(frac), x);
        prev = a.value;
        cur = b.value;
        err_prev = a.abs_err_est / a.value + kEps;
        err_cur = b.abs_err_est / b.value + kEps;
    }
    for (int k = 0; k < steps; ++k) {
        const double order = frac + k;
        const double t1 = (2.0 * order + 1.0 - 2.0 * x * x) * cur;
        const double t2 = 2.0 * x * x * prev;
        const double next = (t1 + t2) / (2.0 * (order + 1.0));
        const double cond = (std::abs(t1) + std::abs(t2)) / std::abs(t1 + t2);
        const double err_next = cond * std::max(err_cur, err_prev) + 2.0 * kEps;
        prev = cur;
        err_prev = err_cur;
        cur = next;
        err_cur = err_next;
    }
    return {cur, err_cur * cur, Method::recurrence};
}

}  // namespace

Order::Order(double q) : q_(q) {
    if (std::isnan(q) || std::isinf(q) || (q <= -1.0 && q != -1.0)) {
        throw DomainError("order q must satisfy q > -1 (or be the sentinel q = -1), got " +
                          std::to_string(q));
    }
}

std::string_view to_string(Method m) {
    switch (m) {
        case Method::quadrature: return "quadrature";
        case Method::psi_series: return "psi-series";
        case Method::psi_asymptotic: return "psi-asymptotic";
        case Method::recurrence: return "recurrence";
        case Method::closed_form_q0: return "closed-form-q0";
        case Method::limit_x0: return "limit-x0";
        case Method::convention: return "convention";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
    for (Method m : {Method::quadrature, Method::psi_series, Method::psi_asymptotic,
                     Method::recurrence, Method::closed_form_q0, Method::limit_x0,
                     Method::convention}) {
        if (to_string(m) == name) return m;
    }
    return std::nullopt;
}

std::string_view to_string(DerivativeMethod m) {
    switch (m) {
        case DerivativeMethod::integral: return "integral";
        case DerivativeMethod::differ: return "differ";
        case DerivativeMethod::difvq: return "difvq";
    }
    return "unknown";
}

double vq_closed_form_q0(double x) {
    require_x(x, true);
    return std::sqrt(std::numbers::pi) * erfcx(x);
}

double vq_zero(Order q) {
    if (q.is_sentinel() || q.value() <= -0.5) {
        throw DivergenceError("V_q(0) diverges for q <= -1/2");
    }
    const double qv = q.value();
    return std::exp(ln_gamma(qv + 0.5) - ln_gamma(qv + 1.0));
}

double vq_neg1(double x) {
    require_x(x, false);
    return 1.0 / x;
}

EvalResult vq_quadrature(Order q, double x, const QuadratureSpec& spec) {
    if (q.is_sentinel()) throw DomainError("quadrature path requires q > -1");
    require_x(x, false);
    const auto m = gamma_weighted_moment(q.value(), x * x, -0.5, spec);
    return {m.value / x, m.abs_err / x, Method::quadrature};
}

EvalResult vq_via_psi(Order q, double x, std::optional<Method> forced) {
    if (q.is_sentinel()) throw DomainError("psi path requires q > -1");
    require_x(x, false);
    std::optional<PsiMethod> psi_method;
    if (forced) {
        switch (*forced) {
            case Method::psi_series: psi_method = PsiMethod::series; break;
            case Method::psi_asymptotic: psi_method = PsiMethod::asymptotic; break;
            case Method::quadrature: psi_method = PsiMethod::integral; break;
            default: throw DomainError("vq_via_psi: method is not a psi method");
        }
    }

    const double qv = q.value();
    const double z = x * x;
    std::optional<EvalResult> first, second;
    std::string failures;
    try {
        const auto r = tricomi_psi_eval({qv + 1.0, qv + 1.5}, z, psi_method);
        const double scale = std::pow(x, 2.0 * qv + 1.0);
        first = EvalResult{scale * r.value, scale * r.abs_err, tag_of(r.method)};
    } catch (const std::exception& e) {
        failures += std::string(" [x^{2q+1} psi(q+1,q+3/2,x^2): ") + e.what() + "]";
    }
    try {
        const auto r = tricomi_psi_eval({0.5, 0.5 - qv}, z, psi_method);
        second = EvalResult{r.value, r.abs_err, tag_of(r.method)};
    } catch (const std::exception& e) {
        failures += std::string(" [psi(1/2,1/2-q,x^2): ") + e.what() + "]";
    }
    if (!first && !second) throw NumericalFailure("psi", "both psi forms failed:" + failures);
    if (!first) return *second;
    if (!second) return *first;

    const double rel1 = first->abs_err_est / std::abs(first->value);
    const double rel2 = second->abs_err_est / std::abs(second->value);
    if (rel1 <= 1e-10 && rel2 <= 1e-10 &&
        std::abs(first->value - second->value) > kFormAgreement * std::abs(first->value)) {
        throw NumericalFailure("psi", "the two psi forms disagree beyond 1e-9");
    }
    return rel1 <= rel2 ? *first : *second;
}

EvalResult vq(Order q, double x, std::optional<Method> method) {
    require_x(x, true);
    if (q.is_sentinel()) {
        if (method && *method != Method::convention) {
            throw DomainError("q = -1 is only defined through the convention V_{-1}(x) = 1/x");
        }
        if (x == 0.0) throw DivergenceError("V_{-1}(0) = 1/0 diverges");
        return {1.0 / x, 0.0, Method::convention};
    }

    if (method) {
        switch (*method) {
            case Method::quadrature: return vq_quadrature(q, x);
            case Method::psi_series:
            case Method::psi_asymptotic: return vq_via_psi(q, x, method);
            case Method::recurrence: return vq_recurrence(q, x);
            case Method::closed_form_q0: {
                if (q.value() != 0.0) throw DomainError("closed-form method requires q = 0");
                const double v = vq_closed_form_q0(x);
                return {v, 4.0 * kEps * v, Method::closed_form_q0};
            }
            case Method::limit_x0: {
                if (x != 0.0) throw DomainError("limit-x0 method requires x = 0");
                const double v = vq_zero(q);
                return {v, 4.0 * kEps * v, Method::limit_x0};
            }
            case Method::convention:
                throw DomainError("convention method requires the sentinel q = -1");
        }
    }

    if (x == 0.0) {
        const double v = vq_zero(q);
        return {v, 4.0 * kEps * v, Method::limit_x0};
    }
    if (x <= kSeriesRegimeMax) {
        const auto r = vq_via_psi(q, x);
        // V_q decreases from its finite limit at 0 when q > -1/2.
        if (q.value() > -0.5 && r.value > vq_zero(q) * (1.0 + 1e-12)) {
            throw NumericalFailure(std::string(to_string(r.method)),
                                   "value exceeds the x -> 0 limit");
        }
        return r;
    }
    if (x < kAsymptoticRegimeMin) return vq_quadrature(q, x);
    return vq_via_psi(q, x);
}

double vq_prime(Order q, double x, std::optional<DerivativeMethod> method) {
    require_x(x, false);
    if (q.is_sentinel()) return -1.0 / (x * x);
    const double qv = q.value();
    switch (method.value_or(DerivativeMethod::integral)) {
        case DerivativeMethod::integral: {
            const auto m = gamma_weighted_moment(qv, x * x, -1.5);
            return -m.value / (x * x);
        }
        case DerivativeMethod::differ: {
            const double v0 = vq(q, x).value;
            const double v1 = vq(Order(qv + 1.0), x).value;
            return ((2.0 * qv + 1.0) * v0 - 2.0 * (qv + 1.0) * v1) / x;
        }
        case DerivativeMethod::difvq: {
            if (qv < 0.0) throw DomainError("difvq derivative requires q >= 0");
            const double v0 = vq(q, x).value;
            const double vm1 = vq(Order(qv - 1.0), x).value;
            return 2.0 * x * (v0 - vm1);
        }
    }
    throw DomainError("unknown derivative method");
}

double vq_next(Order q, double vq_val, double vq_minus1_val, double x) {
    if (q.is_sentinel() || q.value() < 0.0) throw DomainError("vq_next requires q >= 0");
    if (!(vq_val > 0.0) || !(vq_minus1_val > 0.0)) {
        throw DomainError("vq_next: V_q and V_{q-1} must be positive");
    }
    require_x(x, false);
    const double qv = q.value();
    const double x2 = x * x;
    return ((2.0 * qv + 1.0 - 2.0 * x2) * vq_val + 2.0 * x2 * vq_minus1_val) /
           (2.0 * (qv + 1.0));
}

double mills(double x) {
    require_x(x, false);
    return std::sqrt(0.5 * std::numbers::pi) * erfcx(x / std::numbers::sqrt2);
}

}  // namespace vq
