#pragma once

// Special functions underlying V_q: log-gamma, erfc, Kummer's Phi,
// Tricomi's psi and the Kratzel integral. Everything here is pure.

#include <optional>
#include <string_view>

namespace vq {

/// Natural log of Gamma(a) for a > 0.
double ln_gamma(double a);

double erfc(double x);

struct ErfcValue {
    double value;
    bool underflow;  ///< true when the unscaled result is below the double range
};

/// erfc(x) with an explicit underflow flag instead of a silent zero.
ErfcValue erfc_checked(double x);

/// Scaled complementary error function e^{x^2} erfc(x).
double erfcx(double x);

struct PsiParams {
    double a;
    double c;
};

enum class PsiMethod { series, asymptotic, integral };

std::string_view to_string(PsiMethod m);

struct PsiResult {
    double value;
    double abs_err;
    PsiMethod method;
};

/// Kummer's confluent hypergeometric function Phi(a, c, x), x >= 0.
double kummer_phi(PsiParams p, double x);

/// Regime the automatic psi router picks for (p, x).
PsiMethod select_psi_method(PsiParams p, double x);

/// True when c lies within the pole guard of an integer, where the
/// two-Phi series is forbidden.
bool psi_series_near_pole(double c);

/// Tricomi psi(a, c, x) with error estimate and the method that produced it.
/// `forced` bypasses the router; the method's own preconditions still apply.
PsiResult tricomi_psi_eval(PsiParams p, double x, std::optional<PsiMethod> forced = {});

inline double tricomi_psi(PsiParams p, double x) { return tricomi_psi_eval(p, x).value; }

struct KratzelParams {
    double rho;
    double nu;
    double t;
};

/// Z_rho^nu(t) = int_0^inf u^{nu-1} exp(-u^rho - t/u) du.
double kratzel_z(KratzelParams p);

}  // namespace vq
