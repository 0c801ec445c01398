#include "apkin/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "apkin/stability.hpp"

namespace apkin {

namespace {

/// FFTW planning is not thread-safe; serialize operator construction.
std::unique_ptr<SpectralBoltzmann> make_operator(std::size_t nv, double vmax) {
  static std::mutex mu;
  const std::lock_guard<std::mutex> lock(mu);
  return std::make_unique<SpectralBoltzmann>(nv, vmax);
}

double total_density(const DistributionField& f) {
  double s = 0.0;
  for (std::size_t c = 0; c < f.nx; ++c) s += moments(f.cell(c), f.grid).rho;
  return s / static_cast<double>(f.nx);
}

void append_series_block(std::ostream& out, double t, const DistributionField& f) {
  char buf[160];
  for (std::size_t c = 0; c < f.nx; ++c) {
    const MomentState m = moments(f.cell(c), f.grid);
    const double x = (static_cast<double>(c) + 0.5) / static_cast<double>(f.nx);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", t, x, m.rho,
                  m.ux(), m.uy(), m.temperature());
    out << buf;
  }
}

/// Classical RK4 on the full right-hand side -v d/dx f + Q(f)/eps; used as
/// the optional small-step reference for the convergence study.
DistributionField rk4_run(const RunConfig& cfg, std::size_t nx, const SpectralBoltzmann* op) {
  const VelocityGrid g(cfg.nv, cfg.vmax);
  DistributionField f = cfg.init == InitialData::Equilibrium ? initial_equilibrium(nx, g)
                                                             : initial_nonequilibrium(nx, g);
  double mu = 1.0;
  if (op) {
    double rho_max = 0.0;
    for (std::size_t c = 0; c < nx; ++c) rho_max = std::max(rho_max, moments(f.cell(c), g).rho);
    mu = 2.0 * M_PI * op->sigma() * rho_max;
  }
  const auto rhs = [&](const DistributionField& u) {
    DistributionField r = advection_rhs(u);
    Vec q;
    for (std::size_t c = 0; c < u.nx; ++c) {
      const Vec slice(u.cell(c), u.cell(c) + g.size());
      const MomentState m = moments(slice, g);
      if (op) {
        q = op->apply(slice);
      } else {
        q = bgk_apply(slice, m, mu, g);
      }
      for (std::size_t k = 0; k < g.size(); ++k) r.cell(c)[k] += q[k] / cfg.eps;
    }
    return r;
  };

  const double dt_cfl = cfl_dt(SpaceGrid(nx), cfg.vmax, cfg.cfl);
  // resolve the relaxation scale; requires a non-stiff eps to be practical
  const double h0 = std::min(dt_cfl / 20.0, cfg.eps / 4.0);
  double t = 0.0;
  while (t < cfg.t_final * (1.0 - 1e-12)) {
    const double h = std::min(h0, cfg.t_final - t);
    const DistributionField k1 = rhs(f);
    DistributionField s = f;
    for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] += 0.5 * h * k1.values[i];
    const DistributionField k2 = rhs(s);
    for (std::size_t i = 0; i < s.values.size(); ++i)
      s.values[i] = f.values[i] + 0.5 * h * k2.values[i];
    const DistributionField k3 = rhs(s);
    for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] = f.values[i] + h * k3.values[i];
    const DistributionField k4 = rhs(s);
    for (std::size_t i = 0; i < f.values.size(); ++i)
      f.values[i] += h / 6.0 *
                     (k1.values[i] + 2.0 * k2.values[i] + 2.0 * k3.values[i] + k4.values[i]);
    t += h;
  }
  return f;
}

}  // namespace

SimulationResult run_simulation(const RunConfig& cfg, std::size_t nx, std::ostream* series) {
  const VelocityGrid g(cfg.nv, cfg.vmax);
  DistributionField f = cfg.init == InitialData::Equilibrium ? initial_equilibrium(nx, g)
                                                             : initial_nonequilibrium(nx, g);
  StepConfig sc;
  sc.tableau = registry().at(cfg.scheme);
  sc.eps = cfg.eps;

  std::unique_ptr<SpectralBoltzmann> op;
  std::function<Vec(const Vec&)> collision;
  if (cfg.op == OperatorKind::Boltzmann) {
    op = make_operator(cfg.nv, cfg.vmax);
    sc.mode = StepMode::PenalizedBoltzmann;
    double rho_max = 0.0;
    for (std::size_t c = 0; c < nx; ++c) rho_max = std::max(rho_max, moments(f.cell(c), g).rho);
    sc.mu = 2.0 * M_PI * op->sigma() * rho_max;  // loss-rate bound mu >= sigma |S^1| rho
    collision = [&op](const Vec& v) { return op->apply(v); };
  } else {
    sc.mode = StepMode::StandardBGK;
    sc.mu = 1.0;
  }

  const double dt0 = cfl_dt(SpaceGrid(nx), cfg.vmax, cfg.cfl);
  const double mass0 = total_density(f);
  if (series) {
    *series << "t,x,rho,ux,uy,T\n";
    append_series_block(*series, 0.0, f);
  }

  double t = 0.0;
  std::size_t steps = 0;
  while (t < cfg.t_final * (1.0 - 1e-12)) {
    sc.dt = std::min(dt0, cfg.t_final - t);
    f = (sc.mode == StepMode::StandardBGK) ? imex_step_standard(f, sc)
                                           : imex_step_penalized(f, sc, collision);
    t += sc.dt;
    ++steps;
    if (series) append_series_block(*series, t, f);
  }

  const double drift = std::abs(total_density(f) - mass0);
  return SimulationResult{std::move(f), drift, steps};
}

double density_l1_error(const DistributionField& coarse, const DistributionField& fine) {
  if (fine.nx % coarse.nx != 0)
    throw std::invalid_argument("density_l1_error: fine nx must be a multiple of coarse nx");
  const std::size_t ratio = fine.nx / coarse.nx;
  Vec rho_f(fine.nx);
  for (std::size_t j = 0; j < fine.nx; ++j) rho_f[j] = moments(fine.cell(j), fine.grid).rho;

  // The schemes evolve point values at midpoint cell centers, so the fine
  // solution is restricted by interpolation (not averaging, whose O(dx^2)
  // representation mismatch would mask the schemes' convergence order).
  const auto wrap = [&](std::ptrdiff_t j) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(fine.nx);
    return static_cast<std::size_t>(((j % n) + n) % n);
  };
  double err = 0.0;
  for (std::size_t c = 0; c < coarse.nx; ++c) {
    double ref;
    if (ratio % 2 == 1) {
      // odd ratio: the coarse center coincides with a fine center
      ref = rho_f[c * ratio + (ratio - 1) / 2];
    } else {
      // even ratio: the coarse center is midway between two fine centers;
      // 4-point cubic interpolation, weights (-1, 9, 9, -1)/16
      const std::ptrdiff_t j0 =
          static_cast<std::ptrdiff_t>(c * ratio + ratio / 2) - 1;  // left neighbor
      ref = (-rho_f[wrap(j0 - 1)] + 9.0 * rho_f[wrap(j0)] + 9.0 * rho_f[wrap(j0 + 1)] -
             rho_f[wrap(j0 + 2)]) /
            16.0;
    }
    err += std::abs(moments(coarse.cell(c), coarse.grid).rho - ref);
  }
  return err / static_cast<double>(coarse.nx);
}

std::vector<ConvergenceRow> convergence_table(const RunConfig& cfg) {
  const std::size_t n = cfg.nx.size();
  std::vector<std::unique_ptr<DistributionField>> fields(n), refs(n);
  std::vector<std::exception_ptr> errors(n);

  const auto worker = [&](std::size_t i) {
    try {
      fields[i] = std::make_unique<DistributionField>(run_simulation(cfg, cfg.nx[i]).field);
      if (cfg.reference == ReferenceKind::Rk4) {
        std::unique_ptr<SpectralBoltzmann> op;
        if (cfg.op == OperatorKind::Boltzmann) op = make_operator(cfg.nv, cfg.vmax);
        refs[i] = std::make_unique<DistributionField>(rk4_run(cfg, cfg.nx[i], op.get()));
      }
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(n);
  for (std::size_t i = 0; i < n; ++i) threads.emplace_back(worker, i);
  for (std::thread& t : threads) t.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<ConvergenceRow> rows;
  const std::size_t n_rows = (cfg.reference == ReferenceKind::SelfFinest) ? n - 1 : n;
  for (std::size_t i = 0; i < n_rows; ++i) {
    ConvergenceRow row;
    row.nx = cfg.nx[i];
    row.error = (cfg.reference == ReferenceKind::SelfFinest)
                    ? density_l1_error(*fields[i], *fields[n - 1])
                    : density_l1_error(*fields[i], *refs[i]);
    if (!rows.empty() && rows.back().error > 0.0 && row.error > 0.0) {
      row.order = std::log(rows.back().error / row.error) /
                  std::log(static_cast<double>(row.nx) / static_cast<double>(rows.back().nx));
      row.has_order = true;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream out;
  out << "nx,l1_density_error,observed_order\n";
  char buf[96];
  for (const ConvergenceRow& r : rows) {
    if (r.has_order)
      std::snprintf(buf, sizeof buf, "%zu,%.12g,%.12g\n", r.nx, r.error, r.order);
    else
      std::snprintf(buf, sizeof buf, "%zu,%.12g,\n", r.nx, r.error);
    out << buf;
  }
  return out.str();
}

int cmd_analyze(const RunConfig& cfg, std::ostream& out) {
  std::map<std::string, ImexTableau> schemes;
  if (cfg.scheme == "all") {
    schemes = registry();
  } else {
    schemes.emplace(cfg.scheme, registry().at(cfg.scheme));
  }
  const std::vector<StabilityReport> reports = table1_report(schemes);
  const std::string csv = stability_report_csv(reports);

  std::filesystem::create_directories(cfg.out);
  std::ofstream file(std::filesystem::path(cfg.out) / "analyze.csv", std::ios::binary);
  file << csv;

  bool failed = false;
  for (const StabilityReport& r : reports) {
    if (!r.error.empty()) {
      out << r.name << ": analysis failed: " << r.error << "\n";
      failed = true;
      continue;
    }
    out << r.name << "  [type " << r.type << (r.gsa ? ", GSA" : ", ISA") << "]\n"
        << "  AA: " << (r.aa ? "yes" : "no") << "   AA-c: " << (r.aa_c ? "yes" : "no") << "\n"
        << "  absolute monotonicity (penalized): " << format_intervals(r.am_intervals, false)
        << "\n"
        << "  weak AP range: " << format_intervals(r.weak_ap_intervals, true) << "\n"
        << "  R(alpha, inf) samples:";
    char buf[64];
    for (std::size_t i = 0; i < r.r_inf_alphas.size(); ++i) {
      std::snprintf(buf, sizeof buf, " %g:%.6g", r.r_inf_alphas[i], r.r_inf_values[i]);
      out << buf;
    }
    out << "\n";
  }
  out << reports.size() << " scheme(s) analyzed; CSV written to "
      << (std::filesystem::path(cfg.out) / "analyze.csv").string() << "\n";
  return failed ? 1 : 0;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  std::filesystem::create_directories(cfg.out);
  std::ofstream series(std::filesystem::path(cfg.out) / "moments.csv", std::ios::binary);
  const SimulationResult res = run_simulation(cfg, cfg.nx.front(), &series);
  write_snapshot((std::filesystem::path(cfg.out) / "final_snapshot.bin").string(), res.field);

  double worst_eq = 0.0;
  for (std::size_t c = 0; c < res.field.nx; ++c)
    worst_eq = std::max(worst_eq, equilibrium_distance(res.field.cell(c), res.field.grid));
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "scheme %s, %s%s, eps = %g: %zu steps to t = %g\n"
                "mass drift = %.3e, max equilibrium distance = %.3e\n",
                cfg.scheme.c_str(), to_string(cfg.op).c_str(),
                cfg.penalized ? " (penalized)" : "", cfg.eps, res.steps, cfg.t_final,
                res.mass_drift, worst_eq);
  out << buf << "outputs written to " << cfg.out << "\n";
  return 0;
}

int cmd_converge(const RunConfig& cfg, std::ostream& out) {
  const std::vector<ConvergenceRow> rows = convergence_table(cfg);
  const std::string csv = convergence_csv(rows);
  std::filesystem::create_directories(cfg.out);
  std::ofstream file(std::filesystem::path(cfg.out) / "convergence.csv", std::ios::binary);
  file << csv;
  out << "scheme " << cfg.scheme << ", eps = " << cfg.eps << ", "
      << to_string(cfg.init) << " data\n"
      << csv;
  return 0;
}

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    validate_run_config(cfg);
    switch (cfg.command) {
      case Command::Analyze: return cmd_analyze(cfg, out);
      case Command::Simulate: return cmd_simulate(cfg, out);
      default: return cmd_converge(cfg, out);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace apkin
