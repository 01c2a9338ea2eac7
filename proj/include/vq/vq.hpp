#pragma once

// The one-dimensional regularized Coulomb potential
//
//   V_q(x) = 2 e^{x^2} / Gamma(q+1) * int_x^inf e^{-t^2} (t^2 - x^2)^q dt,
//
// evaluated by several independent routes, together with its derivative,
// the order recurrence and the Mills ratio m(x) = V_0(x / sqrt 2) / sqrt 2.

#include <optional>
#include <string_view>

#include "vq/quadrature.hpp"

namespace vq {

/// Order q of V_q. Valid orders are q > -1, plus the sentinel q = -1 that
/// stands for the convention V_{-1}(x) = 1/x.
class Order {
public:
    explicit Order(double q);

    static Order sentinel() { return Order(-1.0); }

    double value() const noexcept { return q_; }
    bool is_sentinel() const noexcept { return q_ == -1.0; }

private:
    double q_;
};

enum class Method {
    quadrature,
    psi_series,
    psi_asymptotic,
    recurrence,
    closed_form_q0,
    limit_x0,
    convention,  ///< q = -1, V_{-1}(x) = 1/x
};

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view name);

struct EvalResult {
    double value;
    double abs_err_est;
    Method method;
};

/// V_q(x) for x >= 0. Without `method` the router picks by x:
/// x = 0 limit, (0, 0.05] psi series, (0.05, 30) quadrature, [30, inf) psi asymptotic.
EvalResult vq(Order q, double x, std::optional<Method> method = {});

/// Gauss quadrature of (1/Gamma(q+1)) int_0^inf e^{-t} t^q (x^2+t)^{-1/2} dt.
EvalResult vq_quadrature(Order q, double x, const QuadratureSpec& spec = {});

/// V_q through Tricomi's psi, using both x^{2q+1} psi(q+1, q+3/2, x^2) and
/// psi(1/2, 1/2-q, x^2). Returns the form with the smaller error estimate.
/// `forced` pins the psi method of both forms.
EvalResult vq_via_psi(Order q, double x, std::optional<Method> forced = {});

/// sqrt(pi) e^{x^2} erfc(x), the closed form of V_0.
double vq_closed_form_q0(double x);

/// V_q(0) = Gamma(q+1/2) / Gamma(q+1); throws DivergenceError for q <= -1/2.
double vq_zero(Order q);

/// V_{-1}(x) = 1/x.
double vq_neg1(double x);

enum class DerivativeMethod {
    integral,  ///< -x/Gamma(q+1) int e^{-t} t^q (x^2+t)^{-3/2} dt
    differ,    ///< x V_q' = (2q+1) V_q - 2(q+1) V_{q+1}
    difvq,     ///< V_q' = 2x (V_q - V_{q-1}), q >= 0
};

std::string_view to_string(DerivativeMethod m);

/// dV_q/dx. Defaults to the integral form.
double vq_prime(Order q, double x, std::optional<DerivativeMethod> method = {});

/// One forward step 2(q+1) V_{q+1} = (2q+1-2x^2) V_q + 2x^2 V_{q-1}.
double vq_next(Order q, double vq_val, double vq_minus1_val, double x);

/// Mills ratio of the standard normal distribution, x > 0.
double mills(double x);

}  // namespace vq
