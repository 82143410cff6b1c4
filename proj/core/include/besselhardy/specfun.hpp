#ifndef BESSELHARDY_SPECFUN_HPP
#define BESSELHARDY_SPECFUN_HPP

namespace bh::specfun {

// Regime switches. I uses the power series up to kICrossover and the large-x
// expansion beyond it; J switches at kJCrossover (see j_series for why this is
// not larger).
inline constexpr double kICrossover = 30.0;
inline constexpr double kJCrossover = 14.0;

// Modified Bessel function of the first kind, nu >= -1/2, x > 0.
// Throws std::overflow_error when e^x is not representable; use bessel_i_scaled.
double bessel_i(double nu, double x);

// e^{-x} I_nu(x), finite for every x > 0.
double bessel_i_scaled(double nu, double x);

// Bessel function of the first kind, nu >= -1/2, x >= 0.
double bessel_j(double nu, double x);

// Raw building blocks, exposed so tests can compare regimes against each other
// and against closed forms without going through the dispatch above.
namespace detail {
double i_series(double nu, double x);
double i_scaled_series(double nu, double x);
double i_scaled_asymptotic(double nu, double x);
double j_series(double nu, double x);
double j_asymptotic(double nu, double x);
// Returns true and writes e^{-x} I_nu(x) when nu is 1/2, 3/2 or 5/2 and the
// closed form is numerically safe at x.
bool i_scaled_half_integer(double nu, double x, double& out);
bool j_half_integer(double nu, double x, double& out);
}  // namespace detail

// Empirical constant in |I_nu(x) - e^x/sqrt(2 pi x)| <= C e^x x^{-3/2}, measured
// as the sup over a log sweep of x in [x_lo, x_hi].
double empirical_remainder_constant(double nu, double x_lo = 1.0, double x_hi = 1e6,
                                    int samples = 4000);

}  // namespace bh::specfun

#endif
