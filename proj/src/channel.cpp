#include "gpsm/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace gpsm {

void ChannelModel::validate() const {
  if (n_r < 1 || n_t < n_r)
    throw std::invalid_argument("channel model requires n_t >= n_r >= 1");
  if (rho_t < 0.0 || rho_t >= 1.0 || rho_r < 0.0 || rho_r >= 1.0)
    throw std::invalid_argument("correlation coefficients must lie in [0,1)");
  if (sigma2_e < 0.0 || sigma2_e >= 1.0)
    throw std::invalid_argument("CSIT error variance must lie in [0,1)");
  if (correlated() && sigma2_e > 0.0)
    throw std::invalid_argument(
        "CSIT error and antenna correlation are mutually exclusive");
}

Eigen::MatrixXcd draw_iid_rayleigh(int n_r, int n_t, Rng& rng) {
  if (n_r < 1 || n_t < n_r)
    throw std::invalid_argument("draw_iid_rayleigh requires n_t >= n_r >= 1");
  Eigen::MatrixXcd g(n_r, n_t);
  for (int i = 0; i < n_r; ++i)
    for (int j = 0; j < n_t; ++j) g(i, j) = rng.cnormal();
  return g;
}

Eigen::MatrixXd correlation_matrix(int n, double rho) {
  if (n < 1) throw std::invalid_argument("correlation_matrix: n must be >= 1");
  if (rho < 0.0 || rho >= 1.0)
    throw std::invalid_argument("correlation_matrix: rho must lie in [0,1)");
  Eigen::MatrixXd r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = std::pow(rho, std::abs(i - j));
  return r;
}

Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("spd_sqrt: matrix must be square");
  // Zero correlation must stay an exact identity map, not identity up to
  // eigensolver roundoff.
  if (m.isIdentity(0.0)) return m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("spd_sqrt: eigendecomposition failed");
  const auto& ev = es.eigenvalues();
  if (ev.minCoeff() <= 1e-12 * std::max(ev.maxCoeff(), 1.0))
    throw std::invalid_argument("spd_sqrt: matrix is not positive definite");
  return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

Eigen::MatrixXcd apply_kronecker(const Eigen::MatrixXcd& g,
                                 const Eigen::MatrixXd& r_t,
                                 const Eigen::MatrixXd& r_r) {
  if (r_r.rows() != g.rows() || r_t.rows() != g.cols())
    throw std::invalid_argument("apply_kronecker: shape mismatch");
  return spd_sqrt(r_r) * g * spd_sqrt(r_t);
}

ChannelRealization split_csit(const Eigen::MatrixXcd& h, double sigma2_e,
                              Rng& rng) {
  if (sigma2_e < 0.0 || sigma2_e >= 1.0)
    throw std::invalid_argument("split_csit: sigma2_e must lie in [0,1)");
  ChannelRealization out;
  if (sigma2_e == 0.0) {
    out.h_known = h;
    out.h_true = h;
    return out;
  }
  out.h_known = std::sqrt(1.0 - sigma2_e) * h;
  Eigen::MatrixXcd err = draw_iid_rayleigh(static_cast<int>(h.rows()),
                                           static_cast<int>(h.cols()), rng);
  out.h_true = out.h_known + std::sqrt(sigma2_e) * err;
  return out;
}

KroneckerCache make_kronecker_cache(const ChannelModel& model) {
  model.validate();
  return {spd_sqrt(correlation_matrix(model.n_t, model.rho_t)),
          spd_sqrt(correlation_matrix(model.n_r, model.rho_r))};
}

ChannelRealization draw_realization(const ChannelModel& model, Rng& rng,
                                    const KroneckerCache* cache) {
  Eigen::MatrixXcd g = draw_iid_rayleigh(model.n_r, model.n_t, rng);
  if (model.correlated()) {
    Eigen::MatrixXcd h =
        cache ? (cache->sqrt_r_r * g * cache->sqrt_r_t).eval()
              : apply_kronecker(g, correlation_matrix(model.n_t, model.rho_t),
                                correlation_matrix(model.n_r, model.rho_r));
    return {h, h};
  }
  if (model.sigma2_e > 0.0) return split_csit(g, model.sigma2_e, rng);
  return {g, g};
}

}  // namespace gpsm
