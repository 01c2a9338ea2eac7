#include "vq/bounds.hpp"

#include <cmath>
#include <string>

#include "vq/errors.hpp"
#include "vq/special.hpp"

namespace vq {
namespace {

void require_positive(double x, const char* name) {
    if (!(x > 0.0) || std::isinf(x)) {
        throw DomainError(std::string(name) + ": x must be finite and positive");
    }
}

}  // namespace

double mills_f3_threshold() { return std::sqrt(std::sqrt(2.0) - 1.0); }

double mills_f1(double x) {
    require_positive(x, "mills_f1");
    return x / (x * x + 1.0);
}

double mills_f2(double x) {
    require_positive(x, "mills_f2");
    return 1.0 / x;
}

double mills_f3_raw(double x) {
    require_positive(x, "mills_f3_raw");
    const double x2 = x * x;
    return x * (x2 + 1.0) / (x2 * x2 + 2.0 * x2 - 1.0);
}

std::optional<double> mills_f3(double x) {
    require_positive(x, "mills_f3");
    if (!(x > mills_f3_threshold())) return std::nullopt;
    return mills_f3_raw(x);
}

double mills_f4(double x) {
    require_positive(x, "mills_f4");
    const double x2 = x * x;
    return 2.0 * x / (x2 - 1.0 + std::sqrt(x2 * x2 + 6.0 * x2 + 1.0));
}

double mills_f5(double x) {
    require_positive(x, "mills_f5");
    const double x2 = x * x;
    return 6.0 * x / (5.0 * x2 - 3.0 + std::sqrt(x2 * x2 + 18.0 * x2 + 9.0));
}

double mills_f4_printed(double x) {
    require_positive(x, "mills_f4_printed");
    const double x2 = x * x;
    return (1.0 - x2 + std::sqrt(x2 * x2 + 6.0 * x2 + 1.0)) / (4.0 * x);
}

double mills_f5_printed(double x) {
    require_positive(x, "mills_f5_printed");
    const double x2 = x * x;
    return (5.0 * x2 - 3.0 - std::sqrt(x2 * x2 + 18.0 * x2 + 9.0)) / (4.0 * x * (x2 - 2.0));
}

MillsBoundRow mills_bounds(double x) {
    require_positive(x, "mills_bounds");
    return {x, mills_f1(x), mills_f2(x), mills_f3(x), mills_f4(x), mills_f5(x), mills(x)};
}

double vq_lower_exp(Order q, double x) {
    if (q.is_sentinel()) throw DomainError("vq_lower_exp requires q > -1");
    require_positive(x, "vq_lower_exp");
    const double qv = q.value();
    // log of 2^{q+1} x^{2q+1} (1+2x^2)^{-(q+1)}; log1p keeps small x exact.
    const double lg = (qv + 1.0) * std::log(2.0) + (2.0 * qv + 1.0) * std::log(x) -
                      (qv + 1.0) * std::log1p(2.0 * x * x);
    return std::exp(lg);
}

double vq_upper_agm(Order q, double x) {
    if (q.is_sentinel() || !(q.value() > -0.75)) {
        throw DomainError("vq_upper_agm requires q > -3/4");
    }
    require_positive(x, "vq_upper_agm");
    const double qv = q.value();
    return std::exp(ln_gamma(qv + 0.75) - ln_gamma(qv + 1.0)) / std::sqrt(2.0 * x);
}

double vq_lower_kratzel(Order q, double x) {
    if (q.is_sentinel()) throw DomainError("vq_lower_kratzel requires q > -1");
    require_positive(x, "vq_lower_kratzel");
    const double qv = q.value();
    const double z = kratzel_z({1.0, qv + 0.5, 0.5 * x * x});
    return z * std::exp(-ln_gamma(qv + 1.0));
}

VqEnvelope vq_envelope(Order q, double x) {
    VqEnvelope e{vq_lower_exp(q, x), std::nullopt, vq_lower_kratzel(q, x)};
    if (q.value() > -0.75) e.upper_agm = vq_upper_agm(q, x);
    return e;
}

}  // namespace vq
