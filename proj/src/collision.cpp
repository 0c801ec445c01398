#include "apkin/collision.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

namespace apkin {

double default_support_fraction() { return std::sqrt(2.0) / (3.0 + std::sqrt(2.0)); }

Vec bgk_apply(const Vec& f, const MomentState& m, double mu, const VelocityGrid& grid) {
  if (f.size() != grid.size()) throw std::invalid_argument("bgk_apply: shape mismatch");
  Vec out = maxwellian_corrected(m, grid);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mu * (out[i] - f[i]);
  return out;
}

namespace {

/// I(a, b) = integral_0^R r J0(ar) J0(br) dr in closed (Lommel) form.
double bessel_product_integral(double a, double b, double r) {
  if (a == b) {
    if (a == 0.0) return 0.5 * r * r;
    const double j0 = std::cyl_bessel_j(0.0, a * r);
    const double j1 = std::cyl_bessel_j(1.0, a * r);
    return 0.5 * r * r * (j0 * j0 + j1 * j1);
  }
  const double j0a = std::cyl_bessel_j(0.0, a * r), j1a = std::cyl_bessel_j(1.0, a * r);
  const double j0b = std::cyl_bessel_j(0.0, b * r), j1b = std::cyl_bessel_j(1.0, b * r);
  return r * (a * j1a * j0b - b * j0a * j1b) / (a * a - b * b);
}

}  // namespace

SpectralBoltzmann::SpectralBoltzmann(std::size_t nv, double vmax, double sigma,
                                     const std::string& cache_dir)
    : nv_(nv), vmax_(vmax), sigma_(sigma) {
  if (nv_ < 8) throw std::invalid_argument("SpectralBoltzmann: nv must be >= 8");
  if (!(vmax_ > 0.0)) throw std::invalid_argument("SpectralBoltzmann: vmax must be positive");
  radius_ = 2.0 * default_support_fraction() * vmax_;

  std::string cache_path;
  if (!cache_dir.empty()) {
    char name[128];
    std::snprintf(name, sizeof(name), "/boltzmann_kernel_nv%zu_vmax%.9g_sigma%.9g.bin", nv_,
                  vmax_, sigma_);
    cache_path = cache_dir + name;
  }
  if (cache_path.empty() || !load_cache(cache_path)) {
    build_weights();
    if (!cache_path.empty()) save_cache(cache_path);
  }

  phase_.resize(nv_);
  for (std::size_t j = 0; j < nv_; ++j) {
    const double k = static_cast<double>(j) - static_cast<double>(nv_) / 2.0;
    const double arg = M_PI * k * (1.0 - 1.0 / static_cast<double>(nv_));
    phase_[j] = std::complex<double>(std::cos(arg), std::sin(arg));
  }

  std::vector<std::complex<double>> probe(nv_ * nv_);
  const int n = static_cast<int>(nv_);
  plan_fwd_ = fftw_plan_dft_2d(n, n, reinterpret_cast<fftw_complex*>(probe.data()),
                               reinterpret_cast<fftw_complex*>(probe.data()), FFTW_FORWARD,
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_bwd_ = fftw_plan_dft_2d(n, n, reinterpret_cast<fftw_complex*>(probe.data()),
                               reinterpret_cast<fftw_complex*>(probe.data()), FFTW_BACKWARD,
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
}

SpectralBoltzmann::~SpectralBoltzmann() {
  if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void SpectralBoltzmann::build_weights() {
  const int half = static_cast<int>(nv_) / 2;
  const int nmodes = static_cast<int>(nv_);
  const double c = M_PI / (2.0 * vmax_);
  const double pref = 4.0 * M_PI * M_PI * sigma_;

  // beta depends on (|l+m|^2, |l-m|^2) only; memoize the radial integrals.
  std::map<std::pair<std::int64_t, std::int64_t>, double> memo;
  const auto beta = [&](int s1, int s2, int d1, int d2) {
    const std::int64_t ns = static_cast<std::int64_t>(s1) * s1 + static_cast<std::int64_t>(s2) * s2;
    const std::int64_t nd = static_cast<std::int64_t>(d1) * d1 + static_cast<std::int64_t>(d2) * d2;
    const auto key = std::make_pair(ns, nd);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    const double val =
        pref * bessel_product_integral(c * std::sqrt(static_cast<double>(ns)),
                                       c * std::sqrt(static_cast<double>(nd)), radius_);
    memo.emplace(key, val);
    return val;
  };

  weights_.assign(nv_ * nv_ * nv_ * nv_, 0.0);
  for (int l1 = -half; l1 < half; ++l1)
    for (int l2 = -half; l2 < half; ++l2) {
      const std::size_t l_idx = static_cast<std::size_t>(l1 + half) * nv_ +
                                static_cast<std::size_t>(l2 + half);
      for (int m1 = -half; m1 < half; ++m1)
        for (int m2 = -half; m2 < half; ++m2) {
          const std::size_t m_idx = static_cast<std::size_t>(m1 + half) * nv_ +
                                    static_cast<std::size_t>(m2 + half);
          const double gain = beta(l1 + m1, l2 + m2, l1 - m1, l2 - m2);
          const double loss = beta(2 * m1, 2 * m2, 0, 0);
          weights_[l_idx * nv_ * nv_ + m_idx] = gain - loss;
        }
    }
  (void)nmodes;
}

namespace {

struct CacheHeader {
  std::int64_t nv;
  double vmax;
  double sigma;
  double radius;
};

}  // namespace

bool SpectralBoltzmann::load_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  CacheHeader h{};
  in.read(reinterpret_cast<char*>(&h), sizeof(h));
  if (!in || h.nv != static_cast<std::int64_t>(nv_) || h.vmax != vmax_ || h.sigma != sigma_ ||
      h.radius != radius_)
    return false;
  weights_.resize(nv_ * nv_ * nv_ * nv_);
  in.read(reinterpret_cast<char*>(weights_.data()),
          static_cast<std::streamsize>(weights_.size() * sizeof(double)));
  return static_cast<bool>(in);
}

void SpectralBoltzmann::save_cache(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) return;  // cache is best-effort
  const CacheHeader h{static_cast<std::int64_t>(nv_), vmax_, sigma_, radius_};
  out.write(reinterpret_cast<const char*>(&h), sizeof(h));
  out.write(reinterpret_cast<const char*>(weights_.data()),
            static_cast<std::streamsize>(weights_.size() * sizeof(double)));
}

Vec SpectralBoltzmann::apply(const Vec& f) const {
  const std::size_t n = nv_, nn = n * n;
  if (f.size() != nn) throw std::invalid_argument("SpectralBoltzmann::apply: shape mismatch");
  const int half = static_cast<int>(n) / 2;

  // Forward transform of the midpoint-sampled data; re-center and attach the
  // half-cell phase so fh holds the continuous Fourier coefficients.
  std::vector<std::complex<double>> buf(nn), fh(nn);
  for (std::size_t i = 0; i < nn; ++i) buf[i] = f[i];
  fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_),
                   reinterpret_cast<fftw_complex*>(buf.data()),
                   reinterpret_cast<fftw_complex*>(buf.data()));
  for (int k1 = -half; k1 < half; ++k1)
    for (int k2 = -half; k2 < half; ++k2) {
      const std::size_t src = static_cast<std::size_t>((k1 + static_cast<int>(n)) % n) * n +
                              static_cast<std::size_t>((k2 + static_cast<int>(n)) % n);
      const std::size_t dst = static_cast<std::size_t>(k1 + half) * n +
                              static_cast<std::size_t>(k2 + half);
      fh[dst] = phase_[static_cast<std::size_t>(k1 + half)] *
                phase_[static_cast<std::size_t>(k2 + half)] * buf[src] /
                static_cast<double>(nn);
    }

  // Q_hat_k = sum over l + m = k of [beta(l,m) - beta(m,m)] fh_l fh_m.
  std::vector<std::complex<double>> qh(nn, 0.0);
  for (int k1 = -half; k1 < half; ++k1)
    for (int k2 = -half; k2 < half; ++k2) {
      std::complex<double> acc(0.0, 0.0);
      const int l1_lo = std::max(-half, k1 - (half - 1)), l1_hi = std::min(half - 1, k1 + half);
      const int l2_lo = std::max(-half, k2 - (half - 1)), l2_hi = std::min(half - 1, k2 + half);
      for (int l1 = l1_lo; l1 <= l1_hi; ++l1) {
        const int m1 = k1 - l1;
        for (int l2 = l2_lo; l2 <= l2_hi; ++l2) {
          const int m2 = k2 - l2;
          const std::size_t l_idx = static_cast<std::size_t>(l1 + half) * n +
                                    static_cast<std::size_t>(l2 + half);
          const std::size_t m_idx = static_cast<std::size_t>(m1 + half) * n +
                                    static_cast<std::size_t>(m2 + half);
          acc += weights_[l_idx * nn + m_idx] * fh[l_idx] * fh[m_idx];
        }
      }
      qh[static_cast<std::size_t>(k1 + half) * n + static_cast<std::size_t>(k2 + half)] = acc;
    }

  // Back to node values: strip the phases, de-center, inverse transform.
  std::vector<std::complex<double>> out(nn, 0.0);
  for (int k1 = -half; k1 < half; ++k1)
    for (int k2 = -half; k2 < half; ++k2) {
      const std::size_t src = static_cast<std::size_t>(k1 + half) * n +
                              static_cast<std::size_t>(k2 + half);
      const std::size_t dst = static_cast<std::size_t>((k1 + static_cast<int>(n)) % n) * n +
                              static_cast<std::size_t>((k2 + static_cast<int>(n)) % n);
      out[dst] = qh[src] / (phase_[static_cast<std::size_t>(k1 + half)] *
                            phase_[static_cast<std::size_t>(k2 + half)]);
    }
  fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_),
                   reinterpret_cast<fftw_complex*>(out.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  Vec q(nn);
  for (std::size_t i = 0; i < nn; ++i) q[i] = out[i].real();
  return q;
}

double estimate_mu(const Vec& f, const VelocityGrid& grid, double sigma) {
  for (double v : f)
    if (v < 0.0) throw std::domain_error("estimate_mu: negative distribution entry");
  return sigma * 2.0 * M_PI * moments(f, grid).rho;
}

PenalizationSplit penalize(const Vec& qb, const Vec& f, const MomentState& m, double mu,
                           const VelocityGrid& grid) {
  if (!(mu > 0.0)) throw std::invalid_argument("penalize: mu must be positive");
  PenalizationSplit split;
  split.mu = mu;
  split.q_part = bgk_apply(f, m, mu, grid);
  split.g_part.resize(qb.size());
  for (std::size_t i = 0; i < qb.size(); ++i) split.g_part[i] = qb[i] - split.q_part[i];
  return split;
}

}  // namespace apkin
