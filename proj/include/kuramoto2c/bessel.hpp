#pragma once

// Modified Bessel functions I0, I1, I2 and the ratios built from them:
//
//   V(x) = I1(x) / I0(x)      mean-field response of one community
//   W(x) = 2 V(x) / x         normalized response, W(0) = 1
//   S(x) = I2(x) / I0(x)
//
// together with V', the bound family used to certify the bifurcation-line
// bounds, and a quadrature route to V'' (the concavity certificate).

namespace kuramoto2c {

// Order of a modified Bessel function of the first kind; only 0, 1, 2.
class BesselOrder {
 public:
  explicit BesselOrder(int m);
  int value() const noexcept { return m_; }

 private:
  int m_;
};

// Depth of the continued-fraction upper bound on V; only 1 and 2.
class BoundLevel {
 public:
  explicit BoundLevel(int k);
  int value() const noexcept { return k_; }

 private:
  int k_;
};

// Below this magnitude I_m is summed from its power series, above it the
// exponentially scaled asymptotic expansion is used.
inline constexpr double kBesselSeriesCutoff = 15.0;
// |x| beyond which I_m(x) itself would overflow a double.
inline constexpr double kBesselOverflowGuard = 700.0;

/// I_m(x) = (1/2pi) * int_0^{2pi} cos(t)^m exp(x cos t) dt.
/// Throws DomainError for non-finite x or |x| > 700.
double bessel_i(BesselOrder m, double x);

/// exp(-|x|) * I_m(x); finite for every finite x.
double bessel_i_scaled(BesselOrder m, double x);

// The two evaluation routes, exposed so the crossover can be tested.
double bessel_i_scaled_series(int m, double x);
double bessel_i_scaled_asymptotic(int m, double x);

/// V(x) = I1(x)/I0(x), odd in x, |V| < 1.
double v_fn(double x);

/// V'(x) = 1 - V(x)/x - V(x)^2, with V'(0) = 1/2.
double v_prime(double x);

/// W(x) = 2V(x)/x for x >= 0, W(0) = 1.
double w_fn(double x);

/// S(x) = I2(x)/I0(x), even in x, S(0) = 0.
double s_fn(double x);

/// Upper bound x*u_1^(k)(x) >= V(x) for x >= 0.
///   k = 1: x/2
///   k = 2: x / (2 + x^2 / (3/2 + sqrt(25/4 + x^2)))
double v_upper_bound(double x, BoundLevel k);

/// Amos-type lower bound x / (1/2 + sqrt(9/4 + x^2)) <= V(x) for x >= 0.
double v_lower_bound(double x);

/// V''(x) evaluated as int_{-1}^{1} (u - m)^3 e^{xu} dnu(u), with
/// dnu(u) = du / (c sqrt(1-u^2)), 2c = int exp(x cos t) dt and m(x) the
/// nu-mean of u e^{xu}. Strictly negative for x > 0.
/// Throws NumericalError if the adaptive quadrature misses 1e-10.
double concavity_certificate(double x);

}  // namespace kuramoto2c
