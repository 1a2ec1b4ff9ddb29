#pragma once

#include <functional>
#include <stdexcept>

namespace gpsm {

/// Controls for the adaptive quadrature routines.
struct QuadratureSpec {
  int node_count = 32;            // Gauss-Legendre nodes per panel
  double upper_truncation = 1e9;  // hard cap on the semi-infinite range
  double rel_tolerance = 1e-10;

  void validate() const;
};

/// Raised when adaptive refinement cannot reconcile successive estimates
/// within the requested tolerance.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Gaussian tail probability Q(x) = P(N(0,1) > x).
double gaussian_q(double x);

/// CDF of a central chi-square with 2 degrees of freedom, 1 - exp(-g/2).
double chi2_2_cdf(double g);

/// Exponentially scaled modified Bessel function, exp(-x) * I0(x), x >= 0.
/// Scaling keeps products like exp(-(g+lambda)/2) * I0(sqrt(lambda g))
/// representable for arguments far beyond the naive overflow point.
double bessel_i0_scaled(double x);

/// PDF of a noncentral chi-square with 2 degrees of freedom and
/// noncentrality lambda, evaluated at g.
double noncentral_chi2_2_pdf(double g, double lambda);

/// PDF of the post-inversion instantaneous SNR concentration parameter for a
/// fat random Gaussian channel: a Gamma law with shape n_t - n_r + 1 and
/// rate n_a * sigma2_a / 2.
double lambda_pdf(double lambda, int n_t, int n_r, int n_a, double sigma2_a);

/// Adaptive Gauss-Legendre integration of f over the finite interval [a, b].
double integrate_interval(const std::function<double(double)>& f, double a,
                          double b, const QuadratureSpec& spec = {});

/// Adaptive integration of f over [0, inf), implemented as geometrically
/// growing windows that terminate once the running tail is negligible
/// relative to the accumulated integral.  Throws NonConvergence when the
/// truncation cap is reached while the tail is still significant.
double integrate_semi_infinite(const std::function<double(double)>& f,
                               const QuadratureSpec& spec = {});

}  // namespace gpsm
