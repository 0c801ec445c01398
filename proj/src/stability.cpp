#include "apkin/stability.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

namespace apkin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNonnegFloor = -1e-12;  ///< ">= 0" up to rounding

Mat penal_matrix(const ImexTableau& t, double alpha) {
  Mat b = t.a_im;
  for (std::size_t i = 0; i < t.nu; ++i)
    for (std::size_t j = 0; j < i; ++j) b[i][j] -= (alpha - 1.0) * t.a_ex[i][j];
  return b;
}

Vec penal_weights(const ImexTableau& t, double alpha) {
  Vec w = t.w_im;
  for (std::size_t i = 0; i < t.nu; ++i) w[i] -= (alpha - 1.0) * t.w_ex[i];
  return w;
}

/// Solve (I + zA) x = rhs for lower-triangular A.
Vec solve_shifted(const Mat& a, double z, const Vec& rhs) {
  const std::size_t n = rhs.size();
  Vec x(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = rhs[i];
    for (std::size_t j = 0; j < i; ++j) s -= z * a[i][j] * x[j];
    const double d = 1.0 + z * a[i][i];
    if (d == 0.0) throw std::domain_error("stability: singular I + zA at z = " + std::to_string(z));
    x[i] = s / d;
  }
  return x;
}

double stability_value(const Mat& b, const Vec& w, double z) {
  Vec x = solve_shifted(b, z, Vec(w.size(), 1.0));
  return 1.0 - z * dot(w, x);
}

/// Bisect a sign change of pred (true inside) on [a_out, a_in] to tolerance.
double bisect_boundary(const std::function<bool(double)>& inside, double x_out, double x_in,
                       double tol) {
  for (int iter = 0; iter < 200 && std::abs(x_in - x_out) > tol; ++iter) {
    const double mid = 0.5 * (x_in + x_out);
    (inside(mid) ? x_in : x_out) = mid;
  }
  return 0.5 * (x_in + x_out);
}

}  // namespace

double dirk_stability(const ImexTableau& t, double z) {
  return stability_value(t.a_im, t.w_im, z);
}

double penalized_stability(const ImexTableau& t, double alpha, double z) {
  return stability_value(penal_matrix(t, alpha), penal_weights(t, alpha), z);
}

double stability_at_infinity(const ImexTableau& t, double alpha) {
  const Mat b = penal_matrix(t, alpha);
  const Vec w = penal_weights(t, alpha);
  const std::size_t n = t.nu;

  if (std::abs(b[0][0]) > 1e-14) {
    // Type A: B invertible, R(alpha,inf) = 1 - w'^T B^{-1} e.
    const Vec x = lower_solve(b, Vec(n, 1.0));
    return 1.0 - dot(w, x);
  }

  // CK/ARS: first implicit stage is explicit; eliminate it blockwise.
  // With B = [[0,0],[b1,Bh]]: R = 1 - z w1' - z wh'^T (I+zBh)^{-1} (eh - z b1),
  // whose z->inf limit is finite iff w1' = wh'^T Bh^{-1} b1, and then equals
  // 1 - wh'^T Bh^{-1} eh - wh'^T Bh^{-2} b1.
  Mat bh = zeros(n - 1, n - 1);
  Vec b1(n - 1), wh(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    b1[i - 1] = b[i][0];
    wh[i - 1] = w[i];
    for (std::size_t j = 1; j < n; ++j) bh[i - 1][j - 1] = b[i][j];
  }
  const Vec y = lower_solve_transposed(bh, wh);  // wh'^T Bh^{-1}
  const double coeff = w[0] - dot(y, b1);
  if (std::abs(coeff) > 1e-10) return coeff > 0.0 ? -kInf : kInf;
  double sum_y = 0.0;
  for (double v : y) sum_y += v;
  return 1.0 - sum_y - dot(y, lower_solve(bh, b1));
}

std::vector<Interval> weak_ap_range(const ImexTableau& t, double alpha_max, double resolution) {
  const auto excess = [&t](double a) { return std::abs(stability_at_infinity(t, a)) - 1.0; };
  const auto inside = [&excess](double a) { return excess(a) < 0.0; };

  const std::size_t n_pts = static_cast<std::size_t>(std::llround(alpha_max / resolution));
  std::vector<bool> in(n_pts + 1, false);
  std::vector<double> ex(n_pts + 1, 0.0);
  for (std::size_t k = 1; k <= n_pts; ++k) {
    ex[k] = excess(static_cast<double>(k) * resolution);
    in[k] = ex[k] < 0.0;
  }

  // Runs of inside points; a gap of tangency points (|R| = 1 to rounding,
  // e.g. an interior |R|=1 touch) does not split an interval.
  struct Run {
    std::size_t first, last;
  };
  std::vector<Run> runs;
  for (std::size_t k = 1; k <= n_pts; ++k) {
    if (!in[k]) continue;
    std::size_t end = k;
    while (end < n_pts && in[end + 1]) ++end;
    if (!runs.empty()) {
      bool tangent_gap = true;
      for (std::size_t g = runs.back().last + 1; g < k; ++g) tangent_gap &= (ex[g] <= 1e-9);
      if (tangent_gap) {
        runs.back().last = end;
        k = end;
        continue;
      }
    }
    runs.push_back({k, end});
    k = end;
  }

  std::vector<Interval> out;
  for (const Run& r : runs) {
    Interval iv;
    if (r.first == 1) {
      iv.lo = 0.0;  // open at 0; the range is a subset of (0, alpha_max)
    } else {
      iv.lo = bisect_boundary(inside, (r.first - 1) * resolution, r.first * resolution, 1e-8);
    }
    if (r.last == n_pts) {
      iv.hi = kInf;  // still inside at the search bound
    } else {
      iv.hi = bisect_boundary(inside, (r.last + 1) * resolution, r.last * resolution, 1e-8);
    }
    out.push_back(iv);
  }
  return out;
}

namespace {

/// Componentwise minimum of the standard monotonicity vectors at z.
double standard_margin(const ImexTableau& t, double z) {
  const Vec e(t.nu, 1.0);
  double m = kInf;
  for (double v : solve_shifted(t.a_im, z, e)) m = std::min(m, v);
  for (double v : solve_shifted(t.a_im, z, mat_vec(t.a_im, e))) m = std::min(m, v);
  return m;
}

/// Componentwise minimum of the penalized monotonicity quantities at z.
double penalized_margin(const ImexTableau& t, double z) {
  const Vec e(t.nu, 1.0);
  double m = kInf;
  for (double v : solve_shifted(t.a_im, z, e)) m = std::min(m, v);
  Vec d = mat_vec(t.a_im, e);
  const Vec ce = mat_vec(t.a_ex, e);
  for (std::size_t i = 0; i < t.nu; ++i) d[i] -= ce[i];
  for (double v : solve_shifted(t.a_im, z, d)) m = std::min(m, v);
  for (std::size_t j = 0; j < t.nu; ++j) {  // columns of (I+zA)^{-1} A~
    Vec col(t.nu);
    for (std::size_t i = 0; i < t.nu; ++i) col[i] = t.a_ex[i][j];
    for (double v : solve_shifted(t.a_im, z, col)) m = std::min(m, v);
  }
  return m;
}

/// Log grid over [1e-3, z_max], 400 points per decade.
std::vector<double> z_grid(double z_max) {
  std::vector<double> g;
  const double decades = std::log10(z_max) + 3.0;
  const std::size_t n = static_cast<std::size_t>(std::ceil(decades * 400.0));
  g.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) g.push_back(1e-3 * std::pow(10.0, decades * k / n));
  return g;
}

}  // namespace

double monotonicity_radius_standard(const ImexTableau& t, double z_max) {
  bool a_invertible = true;
  for (std::size_t i = 0; i < t.nu; ++i) a_invertible &= std::abs(t.a_im[i][i]) > 1e-14;
  if (a_invertible) {
    const Vec wAinv = lower_solve_transposed(t.a_im, t.w_im);
    double s = 0.0;
    for (double v : wAinv) {
      if (v < kNonnegFloor) return 0.0;
      s += v;
    }
    if (1.0 - s < kNonnegFloor) return 0.0;
  }

  const auto ok = [&t](double z) { return standard_margin(t, z) >= kNonnegFloor; };
  double prev = 0.0;
  if (!ok(1e-9)) return 0.0;  // fails arbitrarily close to z = 0
  for (double z : z_grid(z_max)) {
    if (!ok(z)) return bisect_boundary(ok, z, prev, 1e-10 * std::max(1.0, z));
    prev = z;
  }
  return kInf;
}

std::vector<Interval> monotonicity_region_penalized(const ImexTableau& t, double z_max) {
  const auto ok = [&t](double z) { return penalized_margin(t, z) >= kNonnegFloor; };
  const std::vector<double> grid = z_grid(z_max);

  std::vector<Interval> out;
  std::size_t k = 0;
  while (k < grid.size()) {
    if (!ok(grid[k])) {
      ++k;
      continue;
    }
    std::size_t end = k;
    while (end + 1 < grid.size() && ok(grid[end + 1])) ++end;
    Interval iv;
    if (k == 0) {
      // Conditions hold at the smallest scanned z; extend to 0 if they hold
      // arbitrarily close to it (z = 0 itself is the identity step).
      iv.lo = ok(1e-9) ? 0.0 : bisect_boundary(ok, 0.0, grid[0], 1e-10);
    } else {
      iv.lo = bisect_boundary(ok, grid[k - 1], grid[k], 1e-10 * std::max(1.0, grid[k]));
    }
    iv.hi = (end + 1 == grid.size())
                ? kInf
                : bisect_boundary(ok, grid[end + 1], grid[end], 1e-10 * std::max(1.0, grid[end]));
    out.push_back(iv);
    k = end + 1;
  }
  if (out.empty()) out.push_back({0.0, 0.0});  // only the trivial point z = 0
  return out;
}

std::vector<StabilityReport> table1_report(const std::map<std::string, ImexTableau>& schemes) {
  std::vector<StabilityReport> rows;
  for (const auto& [name, t] : schemes) {
    StabilityReport r;
    r.name = name;
    try {
      const SchemeClass cls = classify(t);
      r.type = to_string(cls.kind);
      r.gsa = cls.gsa;
      const ApVerdict v = ap_verdict(t);
      r.aa = v.aa;
      r.aa_c = v.aa_c;
      r.am_intervals = monotonicity_region_penalized(t);
      r.weak_ap_intervals = weak_ap_range(t);
      r.r_inf_alphas = {0.25, 0.5, 1.0, 1.5, 2.0};
      for (double a : r.r_inf_alphas) r.r_inf_values.push_back(stability_at_infinity(t, a));
    } catch (const std::exception& ex) {
      r.error = ex.what();
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

namespace {

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find(',') == std::string::npos && s.find('"') == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

std::string format_intervals(const std::vector<Interval>& intervals, bool open_alpha) {
  std::string s;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const Interval& iv = intervals[i];
    if (i > 0) s += " U ";
    if (!open_alpha && iv.lo == iv.hi) {
      s += "z=" + format_number(iv.lo);
      continue;
    }
    s += open_alpha ? "(" : "[";
    s += format_number(iv.lo) + "," + format_number(iv.hi);
    s += (open_alpha || std::isinf(iv.hi)) ? ")" : "]";
  }
  return s.empty() ? "empty" : s;
}

std::string stability_report_csv(const std::vector<StabilityReport>& reports) {
  std::ostringstream out;
  out << "name,type,gsa,aa,aa_c,am_intervals,weak_ap_intervals,R_inf_alpha_samples\n";
  for (const auto& r : reports) {
    if (!r.error.empty()) {
      out << csv_field(r.name) << ",error,,,,,," << csv_field(r.error) << "\n";
      continue;
    }
    std::string samples;
    for (std::size_t i = 0; i < r.r_inf_alphas.size(); ++i) {
      if (i > 0) samples += "; ";
      samples += format_number(r.r_inf_alphas[i]) + ":" + format_number(r.r_inf_values[i]);
    }
    out << csv_field(r.name) << "," << r.type << "," << (r.gsa ? "yes" : "no") << ","
        << (r.aa ? "yes" : "no") << "," << (r.aa_c ? "yes" : "no") << ","
        << csv_field(format_intervals(r.am_intervals, false)) << ","
        << csv_field(format_intervals(r.weak_ap_intervals, true)) << "," << csv_field(samples)
        << "\n";
  }
  return out.str();
}

}  // namespace apkin
