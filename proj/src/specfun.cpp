#include "gpsm/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <vector>

namespace gpsm {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Rule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

// Gauss-Legendre nodes/weights by Newton iteration on the Legendre
// recurrence.  Cached per node count; rules are tiny.
Rule make_rule(int n) {
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p0 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return r;
}

const Rule& rule_for(int n) {
  static std::mutex mu;
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_rule(n)).first;
  return it->second;
}

double panel(const std::function<double(double)>& f, double a, double b,
             const Rule& r) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i)
    s += r.w[i] * f(mid + half * r.x[i]);
  return s * half;
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double whole, double tol, const Rule& r, int depth) {
  const double mid = 0.5 * (a + b);
  const double left = panel(f, a, mid, r);
  const double right = panel(f, mid, b, r);
  const double delta = left + right - whole;
  if (std::abs(delta) <= std::max(tol, 4e-16 * std::abs(left + right)))
    return left + right;
  if (depth >= 48)
    throw NonConvergence("adaptive quadrature stalled on [" +
                         std::to_string(a) + ", " + std::to_string(b) + "]");
  return adapt(f, a, mid, left, 0.5 * tol, r, depth + 1) +
         adapt(f, mid, b, right, 0.5 * tol, r, depth + 1);
}

}  // namespace

void QuadratureSpec::validate() const {
  if (node_count < 16)
    throw std::invalid_argument("quadrature node_count must be >= 16");
  if (!(upper_truncation > 0.0))
    throw std::invalid_argument("quadrature upper_truncation must be positive");
  if (!(rel_tolerance > 0.0) || rel_tolerance > 1e-3)
    throw std::invalid_argument(
        "quadrature rel_tolerance must lie in (0, 1e-3]");
}

double gaussian_q(double x) {
  if (std::isnan(x)) throw std::domain_error("gaussian_q: nan argument");
  return 0.5 * std::erfc(x * 0.7071067811865475244);
}

double chi2_2_cdf(double g) {
  if (!(g >= 0.0)) throw std::domain_error("chi2_2_cdf: negative argument");
  return -std::expm1(-0.5 * g);
}

double bessel_i0_scaled(double x) {
  if (!(x >= 0.0))
    throw std::domain_error("bessel_i0_scaled: negative argument");
  if (x < 21.0) {
    // All-positive power series for I0, scaled afterwards.
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 80; ++k) {
      term *= q / (static_cast<double>(k) * k);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return sum * std::exp(-x);
  }
  // Asymptotic expansion of exp(-x) I0(x); terms fall below 1e-14 before
  // the series turns for x >= 21.
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 20; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= odd * odd / (8.0 * k * x);
    if (term < 1e-17 * sum) break;
    sum += term;
  }
  return sum / std::sqrt(2.0 * kPi * x);
}

double noncentral_chi2_2_pdf(double g, double lambda) {
  if (!(g >= 0.0) || !(lambda >= 0.0))
    throw std::domain_error("noncentral_chi2_2_pdf: negative argument");
  const double s = std::sqrt(lambda * g);
  // exp(-(g+lambda)/2) I0(s) = exp(s - (g+lambda)/2) * [exp(-s) I0(s)],
  // and s - (g+lambda)/2 = -(sqrt(g) - sqrt(lambda))^2 / 2 <= 0.
  return 0.5 * std::exp(s - 0.5 * (g + lambda)) * bessel_i0_scaled(s);
}

double lambda_pdf(double lambda, int n_t, int n_r, int n_a, double sigma2_a) {
  if (n_t < n_r) throw std::domain_error("lambda_pdf: requires n_t >= n_r");
  if (n_r < 1 || n_a < 1 || n_a > n_r)
    throw std::domain_error("lambda_pdf: requires 1 <= n_a <= n_r");
  if (!(sigma2_a > 0.0))
    throw std::domain_error("lambda_pdf: sigma2_a must be positive");
  if (!(lambda >= 0.0))
    throw std::domain_error("lambda_pdf: negative argument");
  const int shape = n_t - n_r + 1;
  const double rate = 0.5 * n_a * sigma2_a;
  if (lambda == 0.0) return shape == 1 ? rate : 0.0;
  // Gamma(shape, rate) density through logs to keep large shapes finite.
  const double lg = shape * std::log(rate) + (shape - 1) * std::log(lambda) -
                    rate * lambda - std::lgamma(static_cast<double>(shape));
  return std::exp(lg);
}

double integrate_interval(const std::function<double(double)>& f, double a,
                          double b, const QuadratureSpec& spec) {
  spec.validate();
  if (!(b >= a)) throw std::invalid_argument("integrate_interval: b < a");
  if (a == b) return 0.0;
  const Rule& r = rule_for(spec.node_count);
  // Forced initial split so narrow features inside a wide panel are seen by
  // at least one refinement level before the error estimate is trusted.
  const int kInitial = 2;
  double total = 0.0;
  std::vector<double> pieces(kInitial);
  for (int i = 0; i < kInitial; ++i) {
    const double pa = a + (b - a) * i / kInitial;
    const double pb = a + (b - a) * (i + 1) / kInitial;
    pieces[i] = panel(f, pa, pb, r);
    total += std::abs(pieces[i]);
  }
  const double tol = spec.rel_tolerance * std::max(total, 1e-300);
  double sum = 0.0;
  for (int i = 0; i < kInitial; ++i) {
    const double pa = a + (b - a) * i / kInitial;
    const double pb = a + (b - a) * (i + 1) / kInitial;
    sum += adapt(f, pa, pb, pieces[i], tol / kInitial, r, 0);
  }
  return sum;
}

double integrate_semi_infinite(const std::function<double(double)>& f,
                               const QuadratureSpec& spec) {
  spec.validate();
  double total = 0.0;
  double peak = 0.0;
  int quiet = 0;
  double a = 0.0;
  double b = std::min(1.0, spec.upper_truncation);
  while (true) {
    const double piece = integrate_interval(f, a, b, spec);
    total += piece;
    peak = std::max(peak, std::abs(piece));
    const bool negligible =
        peak > 0.0 &&
        std::abs(piece) <= spec.rel_tolerance * std::max(std::abs(total), peak);
    quiet = negligible ? quiet + 1 : 0;
    if (quiet >= 2) return total;
    a = b;
    b *= 2.0;
    if (a >= spec.upper_truncation) {
      if (peak == 0.0) return total;  // identically negligible integrand
      throw NonConvergence(
          "integrate_semi_infinite: tail still significant at truncation "
          "cap " +
          std::to_string(spec.upper_truncation));
    }
    b = std::min(b, spec.upper_truncation);
  }
}

}  // namespace gpsm
