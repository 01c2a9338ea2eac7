#pragma once

// Closed-form bounds for the Mills ratio and for V_q itself.

#include <optional>

#include "vq/vq.hpp"

namespace vq {

/// Lower end of the validity range of f3: sqrt(sqrt(2) - 1).
double mills_f3_threshold();

/// x / (x^2 + 1), a lower bound for m(x).
double mills_f1(double x);
/// 1/x, Gordon's upper bound.
double mills_f2(double x);
/// x (x^2+1) / (x^4 + 2x^2 - 1) on its validity range, std::nullopt below it.
std::optional<double> mills_f3(double x);
/// The rational function behind f3 with no range check (debug use).
double mills_f3_raw(double x);
/// (1 - x^2 + sqrt(x^4+6x^2+1)) / (4x), evaluated as 2x / (x^2 - 1 + sqrt(x^4+6x^2+1)).
double mills_f4(double x);
/// (5x^2 - 3 - sqrt(x^4+18x^2+9)) / (4x(x^2-2)), evaluated as
/// 6x / (5x^2 - 3 + sqrt(x^4+18x^2+9)), which has no 0/0 at x = sqrt 2.
double mills_f5(double x);

/// f4 and f5 exactly as printed, with the subtractive numerators.
double mills_f4_printed(double x);
double mills_f5_printed(double x);

struct MillsBoundRow {
    double x;
    double f1;
    double f2;
    std::optional<double> f3;  ///< empty below mills_f3_threshold()
    double f4;
    double f5;
    double m;
};

MillsBoundRow mills_bounds(double x);

/// 2^{q+1} x^{2q+1} / (1 + 2x^2)^{q+1} <= V_q(x).
double vq_lower_exp(Order q, double x);
/// V_q(x) <= Gamma(q + 3/4) / (sqrt(2x) Gamma(q + 1)), q > -3/4.
double vq_upper_agm(Order q, double x);
/// Z_1^{q+1/2}(x^2/2) / Gamma(q+1) <= V_q(x).
double vq_lower_kratzel(Order q, double x);

struct VqEnvelope {
    double lower_exp;
    std::optional<double> upper_agm;  ///< empty for q <= -3/4
    double lower_kratzel;
};

VqEnvelope vq_envelope(Order q, double x);

}  // namespace vq
