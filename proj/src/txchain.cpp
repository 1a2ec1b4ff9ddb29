#include "gpsm/txchain.hpp"

#include <bit>
#include <cmath>
#include <limits>

namespace gpsm {

unsigned long long pattern_count(int n, int k) {
  if (k < 0 || n < 0 || k > n)
    throw std::invalid_argument("pattern_count: requires 0 <= k <= n");
  // 128-bit intermediates: after step i the running value equals
  // binomial(n-k+i, i), which never exceeds the final result, so a 64-bit
  // range check per step suffices.
  unsigned __int128 c = 1;
  if (k > n - k) k = n - k;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (c > std::numeric_limits<unsigned long long>::max())
      throw std::overflow_error("pattern_count: binomial overflows 64 bits");
  }
  return static_cast<unsigned long long>(c);
}

int k_ant_bits(long long n_r, long long n_a) {
  if (n_a < 1 || n_a > n_r)
    throw std::invalid_argument("k_ant_bits: requires 1 <= n_a <= n_r");
  if (n_a == n_r) return 0;
  try {
    const unsigned long long c =
        pattern_count(static_cast<int>(n_r), static_cast<int>(n_a));
    return std::bit_width(c) - 1;
  } catch (const std::overflow_error&) {
    // log2 binomial via log-gamma; nudge guards against the floor landing
    // one below an exact power of two
    const double lg = (std::lgamma(n_r + 1.0) - std::lgamma(n_a + 1.0) -
                       std::lgamma(n_r - n_a + 1.0)) /
                      std::log(2.0);
    return static_cast<int>(std::floor(lg + 1e-9));
  }
}

PatternBook build_pattern_book(int n_r, int n_a) {
  if (n_a < 1 || n_a > n_r)
    throw std::invalid_argument("build_pattern_book: requires 1 <= n_a <= n_r");
  const unsigned long long count = pattern_count(n_r, n_a);
  if (count > (1ull << 20))
    throw std::invalid_argument(
        "build_pattern_book: pattern enumeration too large to materialize");
  PatternBook book;
  book.n_r = n_r;
  book.n_a = n_a;
  book.k_ant = std::bit_width(count) - 1;
  book.all_patterns.reserve(count);
  std::vector<int> cur(n_a);
  for (int i = 0; i < n_a; ++i) cur[i] = i;
  while (true) {
    book.all_patterns.push_back(cur);
    // next combination in lexicographic order
    int i = n_a - 1;
    while (i >= 0 && cur[i] == n_r - n_a + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < n_a; ++j) cur[j] = cur[j - 1] + 1;
  }
  book.selected.assign(book.all_patterns.begin(),
                       book.all_patterns.begin() + (1ull << book.k_ant));
  return book;
}

Constellation make_constellation(int m) {
  Constellation c;
  c.m = m;
  c.e_s_o = (m - 1.0) / m;
  switch (m) {
    case 2:
      c.k_mod = 1;
      c.points = {{1.0, 0.0}, {-1.0, 0.0}};
      c.d_min = 2.0;
      c.n_min = 1.0;
      break;
    case 4: {
      // one sign bit per axis; single-bit neighbours are geometrically
      // adjacent, i.e. Gray by construction
      c.k_mod = 2;
      const double a = 1.0 / std::sqrt(2.0);
      c.points.resize(4);
      for (int i = 0; i < 4; ++i) {
        const double re = (i & 1) ? -a : a;
        const double im = (i & 2) ? -a : a;
        c.points[i] = {re, im};
      }
      c.d_min = std::sqrt(2.0);
      c.n_min = 2.0;
      c.e_s_o = 0.75;
      break;
    }
    case 16: {
      // per-axis Gray PAM4: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3
      c.k_mod = 4;
      const double scale = 1.0 / std::sqrt(10.0);
      auto pam = [](int g) {
        static const double level[4] = {-3.0, -1.0, 3.0, 1.0};
        return level[g];
      };
      c.points.resize(16);
      for (int i = 0; i < 16; ++i) {
        const double re = pam((i >> 2) & 3) * scale;
        const double im = pam(i & 3) * scale;
        c.points[i] = {re, im};
      }
      c.d_min = 2.0 * scale;
      c.n_min = 3.0;  // (4*2 + 8*3 + 4*4) / 16
      break;
    }
    default:
      throw std::invalid_argument(
          "make_constellation: supported orders are 2, 4, 16");
  }
  return c;
}

int k_eff(const PatternBook& book, const Constellation& c) {
  return book.k_ant + book.n_a * c.k_mod;
}

SuperSymbol map_bits(const std::vector<std::uint8_t>& bits,
                     const PatternBook& book, const Constellation& c) {
  const int k = k_eff(book, c);
  if (static_cast<int>(bits.size()) != k)
    throw std::invalid_argument("map_bits: expected exactly k_eff bits");
  SuperSymbol s;
  int pos = 0;
  int idx = 0;
  for (int i = 0; i < book.k_ant; ++i) idx = (idx << 1) | (bits[pos++] & 1);
  s.pattern_index = idx;
  s.modulated.resize(book.n_a);
  s.dense = Eigen::VectorXcd::Zero(book.n_r);
  const auto& pat = book.selected[idx];
  for (int i = 0; i < book.n_a; ++i) {
    int m = 0;
    for (int b = 0; b < c.k_mod; ++b) m = (m << 1) | (bits[pos++] & 1);
    s.modulated[i] = c.points[m];
    s.dense[pat[i]] = c.points[m];
  }
  return s;
}

namespace {

// Largest eigenvalue of (r^H r)^{-1} by power iteration (two triangular
// solves per step); returns an upper estimate of sigma_min(r) that tightens
// from above as iterations proceed.
double sigma_min_estimate(const Eigen::MatrixXcd& r) {
  const auto n = r.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    if (r(i, i) == std::complex<double>(0.0, 0.0)) return 0.0;
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = 1.0 + 0.01 * double(i);
  v.normalize();
  double growth = 0.0;
  for (int it = 0; it < 12; ++it) {
    Eigen::VectorXcd z =
        r.adjoint().triangularView<Eigen::Lower>().solve(v);
    Eigen::VectorXcd w = r.triangularView<Eigen::Upper>().solve(z);
    growth = w.norm();
    if (!(growth > 0.0) || !std::isfinite(growth)) return 0.0;
    v = w / growth;
  }
  return 1.0 / std::sqrt(growth);
}

}  // namespace

CiFactor ci_factor(const Eigen::MatrixXcd& h_known) {
  const auto n_r = h_known.rows();
  const auto n_t = h_known.cols();
  if (n_r < 1 || n_t < n_r)
    throw std::invalid_argument("ci_factor: requires n_t >= n_r >= 1");
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(h_known.adjoint());
  CiFactor f;
  f.q = qr.householderQ() * Eigen::MatrixXcd::Identity(n_t, n_r);
  f.r = qr.matrixQR()
            .topRows(n_r)
            .triangularView<Eigen::Upper>();
  const double est = sigma_min_estimate(f.r);
  if (est < 1e-8) {
    // fast estimate is in the suspicious band: let an exact decomposition
    // decide before declaring the channel unusable
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h_known);
    if (svd.singularValues().minCoeff() < 1e-10)
      throw SingularChannel("channel smallest singular value below 1e-10");
  }
  return f;
}

Eigen::MatrixXcd ci_precoder(const Eigen::MatrixXcd& h_known) {
  CiFactor f = ci_factor(h_known);
  const auto n_r = f.r.rows();
  // P = q r^{-H}
  Eigen::MatrixXcd rinvh = f.r.adjoint()
                               .triangularView<Eigen::Lower>()
                               .solve(Eigen::MatrixXcd::Identity(n_r, n_r));
  return f.q * rinvh;
}

double beta_strict(const CiFactor& f, const SuperSymbol& s) {
  Eigen::VectorXcd z =
      f.r.adjoint().triangularView<Eigen::Lower>().solve(s.dense);
  const double denom = z.squaredNorm();
  if (!(denom > 0.0))
    throw std::invalid_argument("beta_strict: zero super-symbol");
  return static_cast<double>(s.modulated.size()) / denom;
}

double beta_relaxed(const CiFactor& f) {
  const auto n_r = f.r.rows();
  Eigen::MatrixXcd rinv = f.r.triangularView<Eigen::Upper>().solve(
      Eigen::MatrixXcd::Identity(n_r, n_r));
  return static_cast<double>(n_r) / rinv.squaredNorm();
}

double beta_strict(const Eigen::MatrixXcd& h_known, const SuperSymbol& s) {
  return beta_strict(ci_factor(h_known), s);
}

double beta_relaxed(const Eigen::MatrixXcd& h_known) {
  return beta_relaxed(ci_factor(h_known));
}

Eigen::VectorXcd transmit(const SuperSymbol& s, const Precoder& pre) {
  if (pre.p.cols() != s.dense.size())
    throw std::invalid_argument("transmit: dimension mismatch");
  return std::sqrt(pre.beta / double(s.modulated.size())) * (pre.p * s.dense);
}

Eigen::VectorXcd transmit_with_factor(const CiFactor& f, const SuperSymbol& s,
                                      double beta) {
  Eigen::VectorXcd z =
      f.r.adjoint().triangularView<Eigen::Lower>().solve(s.dense);
  return std::sqrt(beta / double(s.modulated.size())) * (f.q * z);
}

}  // namespace gpsm
