#pragma once

// Gauss rules and the gamma-weighted moment integral shared by the
// V_q quadrature path and the integral path of Tricomi's psi.

#include <vector>

namespace vq {

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Generalized Gauss-Laguerre rule for the weight t^alpha e^{-t} on (0, inf),
/// weights normalized to sum to one. alpha > -1.
GaussRule gauss_laguerre(int n, double alpha);

/// Gauss-Jacobi rule on [-1, 1] for the weight (1-x)^alpha (1+x)^beta.
GaussRule gauss_jacobi(int n, double alpha, double beta);

/// Gauss-Legendre rule on [-1, 1]. Cached per n.
const GaussRule& gauss_legendre(int n);

/// Node-count escalation schedule. A result is accepted when the estimates
/// at two consecutive counts agree to rel_tol.
struct QuadratureSpec {
    std::vector<int> node_counts{40, 80, 160, 320};
    double rel_tol = 1e-11;

    /// Throws DomainError unless counts are positive and strictly increasing
    /// and rel_tol lies in (0, 1e-2].
    void validate() const;
};

struct IntegralEstimate {
    double value;
    double abs_err;
    int nodes;  ///< node count of the accepted estimate
};

/// (1/Gamma(alpha+1)) * int_0^inf t^alpha e^{-t} (1 + t/d)^p dt
/// for alpha > -1, d > 0.
///
/// When d >= 4 max(1, |p|) the factor (1 + t/d)^p is smooth on the scale of
/// the weight and a single generalized Gauss-Laguerre rule is used.
/// Otherwise the half line is split: a Gauss-Jacobi panel on [0, min(d, 1)]
/// carrying the t^alpha endpoint, geometrically growing Gauss-Legendre
/// panels up to a cut T, and a Gauss-Laguerre tail beyond T.
IntegralEstimate gamma_weighted_moment(double alpha, double d, double p,
                                       const QuadratureSpec& spec = {});

}  // namespace vq
