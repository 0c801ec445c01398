#include "apkin/phase_space.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace apkin {

VelocityGrid::VelocityGrid(std::size_t nv_, double vmax_) : nv(nv_), vmax(vmax_) {
  if (nv < 2) throw std::invalid_argument("VelocityGrid: nv must be >= 2");
  if (vmax <= 0.0) throw std::invalid_argument("VelocityGrid: vmax must be positive");
  dv = 2.0 * vmax / static_cast<double>(nv);
  coords.resize(nv);
  for (std::size_t j = 0; j < nv; ++j)
    coords[j] = -vmax + (static_cast<double>(j) + 0.5) * dv;
}

MomentState moments(const double* f, const VelocityGrid& grid) {
  MomentState m;
  for (std::size_t j = 0; j < grid.nv; ++j) {
    const double vx = grid.coords[j];
    for (std::size_t k = 0; k < grid.nv; ++k) {
      const double vy = grid.coords[k];
      const double fv = f[j * grid.nv + k];
      m.rho += fv;
      m.mx += vx * fv;
      m.my += vy * fv;
      m.energy += 0.5 * (vx * vx + vy * vy) * fv;
    }
  }
  const double w = grid.weight();
  m.rho *= w;
  m.mx *= w;
  m.my *= w;
  m.energy *= w;
  return m;
}

MomentState moments(const Vec& f, const VelocityGrid& grid) {
  if (f.size() != grid.size()) throw std::invalid_argument("moments: slice/grid shape mismatch");
  return moments(f.data(), grid);
}

Vec maxwellian(const MomentState& m, const VelocityGrid& grid) {
  if (!(m.rho > 0.0)) throw std::domain_error("maxwellian: rho must be positive");
  const double t = m.temperature();
  if (!(t > 0.0)) throw std::domain_error("maxwellian: temperature must be positive");
  const double ux = m.ux(), uy = m.uy();
  const double pref = m.rho / (2.0 * M_PI * t);
  Vec out(grid.size());
  for (std::size_t j = 0; j < grid.nv; ++j) {
    const double dx = grid.coords[j] - ux;
    for (std::size_t k = 0; k < grid.nv; ++k) {
      const double dy = grid.coords[k] - uy;
      out[j * grid.nv + k] = pref * std::exp(-(dx * dx + dy * dy) / (2.0 * t));
    }
  }
  return out;
}

Vec maxwellian_corrected(const MomentState& m, const VelocityGrid& grid, double tol,
                         int max_iter) {
  if (!m.admissible()) throw std::domain_error("maxwellian_corrected: inadmissible moments");
  // Fixed point on the sampling parameters (rho_p, u_p, T_p) so that the
  // discrete moments of the sampled Gaussian hit the target exactly.
  MomentState p = m;
  Vec f;
  for (int iter = 0; iter < max_iter; ++iter) {
    f = maxwellian(p, grid);
    const MomentState got = moments(f, grid);
    const double scale = std::abs(m.rho) + std::abs(m.energy);
    const double res = std::abs(got.rho - m.rho) + std::abs(got.mx - m.mx) +
                       std::abs(got.my - m.my) + std::abs(got.energy - m.energy);
    if (res <= tol * scale) return f;
    // Adjust parameters by the observed defect in (rho, u, T).
    MomentState q;
    q.rho = p.rho * (m.rho / got.rho);
    const double ux = p.ux() + (m.ux() - got.ux());
    const double uy = p.uy() + (m.uy() - got.uy());
    const double t = p.temperature() * (m.temperature() / got.temperature());
    if (!(q.rho > 0.0) || !(t > 0.0))
      throw std::runtime_error("maxwellian_corrected: correction left the admissible set");
    q.mx = q.rho * ux;
    q.my = q.rho * uy;
    q.energy = q.rho * t + 0.5 * q.rho * (ux * ux + uy * uy);
    p = q;
  }
  throw std::runtime_error("maxwellian_corrected: fixed point did not converge");
}

double entropy(const double* f, const VelocityGrid& grid) {
  double h = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = f[i];
    if (v < 0.0) throw std::domain_error("entropy: negative distribution entry");
    if (v < 1e-300) continue;
    h += v * std::log(v);
  }
  return h * grid.weight();
}

double entropy(const Vec& f, const VelocityGrid& grid) {
  if (f.size() != grid.size()) throw std::invalid_argument("entropy: slice/grid shape mismatch");
  return entropy(f.data(), grid);
}

double equilibrium_distance(const double* f, const VelocityGrid& grid) {
  const MomentState m = moments(f, grid);
  const Vec eq = maxwellian_corrected(m, grid);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    num += std::abs(f[i] - eq[i]);
    den += std::abs(f[i]);
  }
  return den > 0.0 ? num / den : 0.0;
}

void write_snapshot(const std::string& path, const DistributionField& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_snapshot: cannot open " + path);
  const std::int64_t nx = static_cast<std::int64_t>(field.nx);
  const std::int64_t nv = static_cast<std::int64_t>(field.grid.nv);
  out.write(reinterpret_cast<const char*>(&nx), sizeof(nx));
  out.write(reinterpret_cast<const char*>(&nv), sizeof(nv));
  out.write(reinterpret_cast<const char*>(&field.grid.vmax), sizeof(double));
  out.write(reinterpret_cast<const char*>(field.values.data()),
            static_cast<std::streamsize>(field.values.size() * sizeof(double)));
  if (!out) throw std::runtime_error("write_snapshot: write failed for " + path);
}

DistributionField read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_snapshot: cannot open " + path);
  std::int64_t nx = 0, nv = 0;
  double vmax = 0.0;
  in.read(reinterpret_cast<char*>(&nx), sizeof(nx));
  in.read(reinterpret_cast<char*>(&nv), sizeof(nv));
  in.read(reinterpret_cast<char*>(&vmax), sizeof(vmax));
  if (!in || nx <= 0 || nv <= 0 || !(vmax > 0.0))
    throw std::runtime_error("read_snapshot: bad header in " + path);
  DistributionField field(static_cast<std::size_t>(nx),
                          VelocityGrid(static_cast<std::size_t>(nv), vmax));
  in.read(reinterpret_cast<char*>(field.values.data()),
          static_cast<std::streamsize>(field.values.size() * sizeof(double)));
  if (!in) throw std::runtime_error("read_snapshot: truncated data in " + path);
  return field;
}

std::string moments_csv(const DistributionField& field) {
  std::ostringstream out;
  out << "x,rho,ux,uy,T\n";
  char buf[160];
  for (std::size_t i = 0; i < field.nx; ++i) {
    const MomentState m = moments(field.cell(i), field.grid);
    const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(field.nx);
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", x, m.rho, m.ux(), m.uy(),
                  m.temperature());
    out << buf;
  }
  return out.str();
}

}  // namespace apkin
