#include "apkin/tableau.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace apkin {

namespace {

Vec row_sums(const Mat& a) {
  Vec c(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (double v : a[i]) c[i] += v;
  return c;
}

/// Lower-right (nu-1)x(nu-1) block of a stage matrix.
Mat hat_block(const Mat& a) {
  const std::size_t n = a.size();
  Mat h = zeros(n - 1, n - 1);
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 1; j < n; ++j) h[i - 1][j - 1] = a[i][j];
  return h;
}

/// First column of a stage matrix, rows 2..nu.
Vec first_column_tail(const Mat& a) {
  Vec v(a.size() - 1, 0.0);
  for (std::size_t i = 1; i < a.size(); ++i) v[i - 1] = a[i][0];
  return v;
}

Vec tail(const Vec& v) { return Vec(v.begin() + 1, v.end()); }

void push(ConditionReport& rep, std::string id, double residual, bool applicable = true) {
  rep.entries.push_back({std::move(id), residual,
                         applicable && std::abs(residual) <= rep.tolerance, applicable});
}

}  // namespace

const char* to_string(TableauKind kind) {
  switch (kind) {
    case TableauKind::TypeA: return "A";
    case TableauKind::TypeCK: return "CK";
    case TableauKind::TypeARS: return "ARS";
  }
  return "?";
}

const ConditionEntry* ConditionReport::find(const std::string& id) const {
  for (const auto& e : entries)
    if (e.id == id) return &e;
  return nullptr;
}

bool ConditionReport::satisfied(const std::string& id) const {
  const ConditionEntry* e = find(id);
  return e != nullptr && e->satisfied;
}

bool ConditionReport::all_satisfied() const {
  for (const auto& e : entries)
    if (!e.satisfied) return false;
  return true;
}

ImexTableau build_tableau(std::string name, int order, Mat a_ex, Vec w_ex, Mat a_im, Vec w_im) {
  const std::size_t nu = a_ex.size();
  if (nu == 0) throw std::invalid_argument("build_tableau: empty tableau");
  if (a_im.size() != nu || w_ex.size() != nu || w_im.size() != nu)
    throw std::invalid_argument("build_tableau: inconsistent stage counts");
  for (std::size_t i = 0; i < nu; ++i) {
    if (a_ex[i].size() != nu || a_im[i].size() != nu)
      throw std::invalid_argument("build_tableau: matrices must be square");
    for (std::size_t j = i; j < nu; ++j)
      if (a_ex[i][j] != 0.0)
        throw std::invalid_argument("build_tableau: explicit matrix not strictly lower triangular");
    for (std::size_t j = i + 1; j < nu; ++j)
      if (a_im[i][j] != 0.0)
        throw std::invalid_argument("build_tableau: implicit matrix not lower triangular");
  }
  ImexTableau t;
  t.name = std::move(name);
  t.nu = nu;
  t.order = order;
  t.a_ex = std::move(a_ex);
  t.a_im = std::move(a_im);
  t.w_ex = std::move(w_ex);
  t.w_im = std::move(w_im);
  t.c_ex = row_sums(t.a_ex);
  t.c_im = row_sums(t.a_im);
  return t;
}

namespace {

std::map<std::string, ImexTableau> make_registry() {
  const double s2 = std::sqrt(2.0);
  std::map<std::string, ImexTableau> reg;
  auto add = [&reg](ImexTableau t) { reg.emplace(t.name, std::move(t)); };

  // Forward-backward Euler.
  add(build_tableau("ARS(1,1,1)", 1,
                    {{0, 0}, {1, 0}}, {1, 0},
                    {{0, 0}, {0, 1}}, {0, 1}));

  {  // First-order ARS-type scheme with an asymptotically accurate explicit part.
    const double g = (2.0 - s2) / 2.0;
    const double d = g / (1.0 - g);
    add(build_tableau("DP-ARS(1,2,1)", 1,
                      {{0, 0, 0}, {d, 0, 0}, {1, 0, 0}}, {1, 0, 0},
                      {{0, 0, 0}, {0, g, 0}, {0, 1 - g, g}}, {0, 1 - g, g}));
  }
  {  // First-order type-A scheme, absolutely monotone.
    const double g = (2.0 + s2) / 2.0;
    add(build_tableau("DP-A(1,2,1)", 1,
                      {{0, 0}, {1, 0}}, {1, 0},
                      {{g, 0}, {1 - g, g}}, {1 - g, g}));
  }

  auto ars222_like = [&](const std::string& name, double g) {
    const double d = 1.0 - 1.0 / (2.0 * g);
    return build_tableau(name, 2,
                         {{0, 0, 0}, {g, 0, 0}, {d, 1 - d, 0}}, {d, 1 - d, 0},
                         {{0, 0, 0}, {0, g, 0}, {0, 1 - g, g}}, {0, 1 - g, g});
  };
  add(ars222_like("ARS(2,2,2)", 1.0 - s2 / 2.0));
  add(ars222_like("DP-ARS(2,2,2)", (2.0 + s2) / 2.0));

  // Midpoint/trapezoid CK pair.
  add(build_tableau("JF-CK(2,3,2)", 2,
                    {{0, 0, 0}, {0.5, 0, 0}, {0, 1, 0}}, {0, 1, 0},
                    {{0, 0, 0}, {0, 0.5, 0}, {0.5, 0, 0.5}}, {0.5, 0, 0.5}));

  // Second-order type-A scheme whose DIRK part is third order.
  add(build_tableau("DP1-A(2,4,2)", 2,
                    {{0, 0, 0, 0},
                     {1.0 / 3.0, 0, 0, 0},
                     {1, 0, 0, 0},
                     {0.5, 0, 0.5, 0}},
                    {0.5, 0, 0.5, 0},
                    {{0.5, 0, 0, 0},
                     {1.0 / 6.0, 0.5, 0, 0},
                     {-0.5, 0.5, 0.5, 0},
                     {1.5, -1.5, 0.5, 0.5}},
                    {1.5, -1.5, 0.5, 0.5}));

  auto dp2a = [&](const std::string& name, double g) {
    return build_tableau(name, 2,
                         {{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 1, 0, 0}, {0, 0.5, 0.5, 0}},
                         {0, 0.5, 0.5, 0},
                         {{g, 0, 0, 0}, {-g, g, 0, 0}, {0, 1 - g, g, 0}, {0, 0.5, 0.5 - g, g}},
                         {0, 0.5, 0.5 - g, g});
  };
  add(dp2a("DP2-A1(2,4,2)", 1.0 / 3.0));
  add(dp2a("DP2-A2(2,4,2)", 2.0));

  add(build_tableau("ARS(4,4,3)", 3,
                    {{0, 0, 0, 0, 0},
                     {0.5, 0, 0, 0, 0},
                     {11.0 / 18.0, 1.0 / 18.0, 0, 0, 0},
                     {5.0 / 6.0, -5.0 / 6.0, 0.5, 0, 0},
                     {0.25, 1.75, 0.75, -1.75, 0}},
                    {0.25, 1.75, 0.75, -1.75, 0},
                    {{0, 0, 0, 0, 0},
                     {0, 0.5, 0, 0, 0},
                     {0, 1.0 / 6.0, 0.5, 0, 0},
                     {0, -0.5, 0.5, 0.5, 0},
                     {0, 1.5, -1.5, 0.5, 0.5}},
                    {0, 1.5, -1.5, 0.5, 0.5}));

  add(build_tableau("BPR-CK(3,5,3)", 3,
                    {{0, 0, 0, 0, 0},
                     {1, 0, 0, 0, 0},
                     {4.0 / 9.0, 2.0 / 9.0, 0, 0, 0},
                     {0.25, 0, 0.75, 0, 0},
                     {0.25, 0, 0.75, 0, 0}},
                    {0.25, 0, 0.75, 0, 0},
                    {{0, 0, 0, 0, 0},
                     {0.5, 0.5, 0, 0, 0},
                     {5.0 / 18.0, -1.0 / 9.0, 0.5, 0, 0},
                     {0.5, 0, 0, 0.5, 0},
                     {0.25, 0, 0.75, -0.5, 0.5}},
                    {0.25, 0, 0.75, -0.5, 0.5}));

  return reg;
}

}  // namespace

const std::map<std::string, ImexTableau>& registry() {
  static const std::map<std::string, ImexTableau> reg = make_registry();
  return reg;
}

std::optional<ImexTableau> find_scheme(const std::string& name) {
  const auto& reg = registry();
  auto it = reg.find(name);
  if (it == reg.end()) return std::nullopt;
  return it->second;
}

SchemeClass classify(const ImexTableau& t, double zero_tol) {
  SchemeClass cls;
  auto is_zero = [zero_tol](double x) { return std::abs(x) <= zero_tol; };

  bool diag_all_nonzero = true;
  for (std::size_t i = 0; i < t.nu; ++i) diag_all_nonzero &= !is_zero(t.a_im[i][i]);

  if (diag_all_nonzero) {
    cls.kind = TableauKind::TypeA;
  } else {
    bool first_row_zero = true;
    for (std::size_t j = 0; j < t.nu; ++j) first_row_zero &= is_zero(t.a_im[0][j]);
    bool tail_diag_nonzero = true;
    for (std::size_t i = 1; i < t.nu; ++i) tail_diag_nonzero &= !is_zero(t.a_im[i][i]);
    if (!first_row_zero || !tail_diag_nonzero)
      throw std::domain_error("classify: tableau is neither type A nor type CK");
    bool first_col_zero = true;
    for (std::size_t i = 1; i < t.nu; ++i) first_col_zero &= is_zero(t.a_im[i][0]);
    cls.kind = (first_col_zero && is_zero(t.w_im[0])) ? TableauKind::TypeARS : TableauKind::TypeCK;
  }

  cls.isa = true;
  for (std::size_t j = 0; j < t.nu; ++j) cls.isa &= is_zero(t.a_im[t.nu - 1][j] - t.w_im[j]);
  bool last_ex_row = true;
  for (std::size_t j = 0; j < t.nu; ++j) last_ex_row &= is_zero(t.a_ex[t.nu - 1][j] - t.w_ex[j]);
  cls.gsa = cls.isa && last_ex_row;
  return cls;
}

ConditionReport check_order_conditions(const ImexTableau& t, int p, double tol) {
  if (p < 1 || p > 3) throw std::invalid_argument("check_order_conditions: p must be 1..3");
  ConditionReport rep;
  rep.tolerance = tol;

  const Vec* w[2] = {&t.w_ex, &t.w_im};
  const Vec* c[2] = {&t.c_ex, &t.c_im};
  const Mat* a[2] = {&t.a_ex, &t.a_im};
  const char* tag[2] = {"ex", "im"};

  double sw_ex = 0, sw_im = 0;
  for (std::size_t i = 0; i < t.nu; ++i) {
    sw_ex += t.w_ex[i];
    sw_im += t.w_im[i];
  }
  push(rep, "order1:sum_w_ex", sw_ex - 1.0);
  push(rep, "order1:sum_w_im", sw_im - 1.0);

  if (p >= 2) {
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l)
        push(rep, std::string("order2:w_") + tag[k] + ".c_" + tag[l],
             dot(*w[k], *c[l]) - 0.5);
  }
  if (p >= 3) {
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l)
        for (int m = l; m < 2; ++m) {
          double s = 0.0;
          for (std::size_t i = 0; i < t.nu; ++i) s += (*w[k])[i] * (*c[l])[i] * (*c[m])[i];
          push(rep, std::string("order3:w_") + tag[k] + ".c_" + tag[l] + "c_" + tag[m],
               s - 1.0 / 3.0);
        }
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l)
        for (int m = 0; m < 2; ++m)
          push(rep, std::string("order3:w_") + tag[k] + ".A_" + tag[l] + ".c_" + tag[m],
               dot(*w[k], mat_vec(*a[l], *c[m])) - 1.0 / 6.0);
  }
  return rep;
}

ConditionReport check_ap_conditions(const ImexTableau& t, double tol) {
  ConditionReport rep;
  rep.tolerance = tol;
  const SchemeClass cls = classify(t);
  const Vec e(t.nu, 1.0);

  auto push_vec = [&rep](const std::string& id, const Vec& v, bool applicable = true) {
    double r = 0.0;
    for (double x : v) r = std::max(r, std::abs(x));
    push(rep, id, r, applicable);
  };

  if (cls.kind == TableauKind::TypeA) {
    // w^T A^{-1} via the transposed triangular solve.
    const Vec wAinv = lower_solve_transposed(t.a_im, t.w_im);
    push(rep, "Lstab:w.Ainv.e", dot(wAinv, e) - 1.0);
    Vec r(t.nu, 0.0);
    for (std::size_t j = 0; j < t.nu; ++j) {
      r[j] = -t.w_ex[j];
      for (std::size_t i = 0; i < t.nu; ++i) r[j] += wAinv[i] * t.a_ex[i][j];
    }
    push_vec("AA:w_ex=w.Ainv.A_ex", r);
    // Index-1 conditions (b read as the implicit weight vector).
    Vec c2(t.nu);
    for (std::size_t i = 0; i < t.nu; ++i) c2[i] = t.c_ex[i] * t.c_ex[i];
    push(rep, "index1:w.Ainv.c_ex", dot(wAinv, t.c_ex) - 1.0);
    push(rep, "index1:w.Ainv.c_ex2", dot(wAinv, c2) - 1.0);
    push(rep, "index1:w.Ainv.A_ex.c_ex", dot(wAinv, mat_vec(t.a_ex, t.c_ex)) - 0.5);
  } else {
    const Mat ahat = hat_block(t.a_im);
    const Mat athat = hat_block(t.a_ex);
    const Vec what = tail(t.w_im);
    const Vec wthat = tail(t.w_ex);
    const Vec a_col = first_column_tail(t.a_im);
    const Vec at_col = first_column_tail(t.a_ex);
    const Vec ehat(t.nu - 1, 1.0);

    const Vec whAinv = lower_solve_transposed(ahat, what);
    push(rep, "Lstab:w.Ainv.e", dot(whAinv, ehat) - 1.0);
    Vec r(t.nu - 1, 0.0);
    for (std::size_t j = 0; j + 1 < t.nu; ++j) {
      r[j] = -wthat[j];
      for (std::size_t i = 0; i + 1 < t.nu; ++i) r[j] += whAinv[i] * athat[i][j];
    }
    push_vec("AA:w_ex=w.Ainv.A_ex", r);

    // e_nu^T Ahat^{-1} x = last component of Ahat^{-1} x.
    auto last_of_solve = [&ahat](const Vec& x) { return lower_solve(ahat, x).back(); };
    push(rep, "app:e_nu.Ainv.a", last_of_solve(a_col));
    Vec row(t.nu - 1, 0.0);  // e_nu^T Ahat^{-1} Athat
    {
      Vec en(t.nu - 1, 0.0);
      en.back() = 1.0;
      const Vec enAinv = lower_solve_transposed(ahat, en);
      for (std::size_t j = 0; j + 1 < t.nu; ++j)
        for (std::size_t i = 0; i + 1 < t.nu; ++i) row[j] += enAinv[i] * athat[i][j];
    }
    push_vec("apars:e_nu.Ainv.A_ex_hat", row);
    push(rep, "apars:e_nu.Ainv.a_ex", last_of_solve(at_col));
    push(rep, "apars:e_nu.Ainv.a_im", last_of_solve(a_col));
    push_vec("apars2:Ainv.a_ex", lower_solve(ahat, at_col));
    push_vec("apars2:Ainv.a_im", lower_solve(ahat, a_col));

    const Vec ct_hat = tail(t.c_ex);
    Vec ct2(ct_hat.size());
    for (std::size_t i = 0; i < ct_hat.size(); ++i) ct2[i] = ct_hat[i] * ct_hat[i];
    push(rep, "index1:w.Ainv.c_ex", dot(whAinv, ct_hat) - 1.0);
    push(rep, "index1:w.Ainv.c_ex2", dot(whAinv, ct2) - 1.0);
    Vec atc = mat_vec(athat, ct_hat);
    for (std::size_t i = 0; i + 1 < t.nu; ++i) atc[i] += at_col[i] * t.c_ex[0];
    push(rep, "index1:w.Ainv.A_ex.c_ex", dot(whAinv, atc) - 0.5);
  }
  return rep;
}

ApVerdict ap_verdict(const ImexTableau& t, double tol) {
  const SchemeClass cls = classify(t);
  const ConditionReport rep = check_ap_conditions(t, tol);
  ApVerdict v;
  if (cls.kind == TableauKind::TypeA) {
    v.aa = rep.satisfied("Lstab:w.Ainv.e") && rep.satisfied("AA:w_ex=w.Ainv.A_ex");
    v.aa_c = cls.gsa && v.aa;
  } else {
    const bool apars = rep.satisfied("apars:e_nu.Ainv.A_ex_hat") &&
                       rep.satisfied("apars:e_nu.Ainv.a_ex") &&
                       rep.satisfied("apars:e_nu.Ainv.a_im");
    const bool apars2 =
        rep.satisfied("apars2:Ainv.a_ex") && rep.satisfied("apars2:Ainv.a_im");
    v.aa = apars || apars2;
    v.aa_c = cls.gsa;  // GSA CK/ARS schemes are asymptotically accurate for consistent data
  }
  return v;
}

double parse_coefficient(const std::string& text) {
  // Tiny recursive-descent parser: numbers, + - * /, sqrt(), parentheses.
  struct Parser {
    const std::string& s;
    std::size_t pos = 0;

    void skip() {
      while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
      skip();
      if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }
    [[noreturn]] void fail(const std::string& why) {
      throw std::invalid_argument("parse_coefficient: " + why + " in '" + s + "'");
    }
    double expression() {
      double v = term();
      for (;;) {
        if (eat('+')) v += term();
        else if (eat('-')) v -= term();
        else return v;
      }
    }
    double term() {
      double v = factor();
      for (;;) {
        if (eat('*')) v *= factor();
        else if (eat('/')) {
          double d = factor();
          if (d == 0.0) fail("division by zero");
          v /= d;
        } else return v;
      }
    }
    double factor() {
      skip();
      if (eat('-')) return -factor();
      if (eat('(')) {
        double v = expression();
        if (!eat(')')) fail("missing ')'");
        return v;
      }
      if (s.compare(pos, 5, "sqrt(") == 0) {
        pos += 5;
        double v = expression();
        if (!eat(')')) fail("missing ')' after sqrt");
        if (v < 0.0) fail("sqrt of negative value");
        return std::sqrt(v);
      }
      std::size_t end = pos;
      while (end < s.size() &&
             (std::isdigit(static_cast<unsigned char>(s[end])) || s[end] == '.' ||
              s[end] == 'e' || s[end] == 'E' ||
              ((s[end] == '+' || s[end] == '-') && end > pos &&
               (s[end - 1] == 'e' || s[end - 1] == 'E'))))
        ++end;
      if (end == pos) fail("expected a number");
      double v = std::stod(s.substr(pos, end - pos));
      pos = end;
      return v;
    }
  } p{text};
  double v = p.expression();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing characters");
  return v;
}

namespace {

std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream iss(line);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

std::string next_content_line(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (!split_tokens(line).empty()) return line;
  }
  throw std::invalid_argument("load_tableau: unexpected end of input");
}

Vec parse_row(const std::string& line, std::size_t expected) {
  const auto toks = split_tokens(line);
  if (toks.size() != expected)
    throw std::invalid_argument("load_tableau: expected " + std::to_string(expected) +
                                " entries, got " + std::to_string(toks.size()));
  Vec row(expected);
  for (std::size_t j = 0; j < expected; ++j) row[j] = parse_coefficient(toks[j]);
  return row;
}

}  // namespace

ImexTableau load_tableau(std::istream& in) {
  const auto header = split_tokens(next_content_line(in));
  if (header.size() != 3)
    throw std::invalid_argument("load_tableau: header must be 'name nu order'");
  const std::string name = header[0];
  const std::size_t nu = static_cast<std::size_t>(std::stoul(header[1]));
  const int order = std::stoi(header[2]);
  if (nu == 0) throw std::invalid_argument("load_tableau: nu must be positive");

  Mat a_ex, a_im;
  for (std::size_t i = 0; i < nu; ++i) a_ex.push_back(parse_row(next_content_line(in), nu));
  Vec w_ex = parse_row(next_content_line(in), nu);
  for (std::size_t i = 0; i < nu; ++i) a_im.push_back(parse_row(next_content_line(in), nu));
  Vec w_im = parse_row(next_content_line(in), nu);
  return build_tableau(name, order, std::move(a_ex), std::move(w_ex), std::move(a_im),
                       std::move(w_im));
}

ImexTableau load_tableau_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_tableau_file: cannot open " + path);
  return load_tableau(in);
}

}  // namespace apkin
