#pragma once

// Test-only reference values computed without any code from src/.

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace oracle {

// erfc in long double: Taylor series of erf below 2.5, a continued fraction
// evaluated bottom-up with fixed depth above.
inline double erfc(double xd) {
    const long double x = xd;
    if (x < 0) return static_cast<double>(2.0L - oracle::erfc(-xd));
    if (x < 2.5L) {
        long double sum = 0, term = x;
        for (int n = 0; n < 200; ++n) {
            sum += term / (2 * n + 1);
            term *= -x * x / (n + 1);
        }
        return static_cast<double>(1.0L - 2.0L / std::sqrt(std::numbers::pi_v<long double>) * sum);
    }
    long double f = x;
    for (int k = 400; k >= 1; --k) f = x + (k / 2.0L) / f;
    return static_cast<double>(std::exp(-x * x) / (std::sqrt(std::numbers::pi_v<long double>) * f));
}

// e^{x^2} erfc(x), same split, computed without forming erfc for large x.
inline double erfcx(double xd) {
    const long double x = xd;
    if (x < 2.5L) return static_cast<double>(std::exp(x * x) * static_cast<long double>(oracle::erfc(xd)));
    long double f = x;
    for (int k = 400; k >= 1; --k) f = x + (k / 2.0L) / f;
    return static_cast<double>(1.0L / (std::sqrt(std::numbers::pi_v<long double>) * f));
}

inline double v0(double x) { return std::sqrt(std::numbers::pi) * erfcx(x); }

inline double mills(double x) { return v0(x / std::numbers::sqrt2) / std::numbers::sqrt2; }

// (1/Gamma(q+1)) int_0^inf e^{-t} t^q (x^2+t)^{-s} dt by exp-sinh quadrature.
// For q < 1 the substitution t = u^{1/(q+1)} absorbs the endpoint singularity;
// for larger q the weight is formed in log space so it never overflows.
inline double gamma_weighted(double q, double x, double s) {
    boost::math::quadrature::exp_sinh<double> integrator;
    if (q < 1.0) {
        const double e = 1.0 / (q + 1.0);
        const auto f = [&](double u) {
            const double t = std::pow(u, e);
            return std::exp(-t) * std::pow(x * x + t, -s);
        };
        return integrator.integrate(f, 1e-14) / boost::math::tgamma(q + 2.0);
    }
    const double lg = boost::math::lgamma(q + 1.0);
    const auto f = [&](double t) {
        return std::exp(-t + q * std::log(t) - lg) * std::pow(x * x + t, -s);
    };
    return integrator.integrate(f, 1e-14);
}

inline double vq(double q, double x) { return gamma_weighted(q, x, 0.5); }

inline double vq_prime(double q, double x) { return -x * gamma_weighted(q, x, 1.5); }

// Z_1^nu(t) = 2 t^{nu/2} K_nu(2 sqrt t), t > 0.
inline double kratzel1(double nu, double t) {
    return 2.0 * std::pow(t, 0.5 * nu) * std::cyl_bessel_k(std::abs(nu), 2.0 * std::sqrt(t));
}

inline double e1(double x) { return boost::math::expint(1, x); }

inline double tgamma(double a) { return boost::math::tgamma(a); }

}  // namespace oracle
