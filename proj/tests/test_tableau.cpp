#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "apkin/tableau.hpp"

using namespace apkin;

TEST_CASE("build_tableau validates structure") {
  CHECK_NOTHROW(build_tableau("t", 1, {{0, 0}, {1, 0}}, {1, 0}, {{0, 0}, {0, 1}}, {0, 1}));
  // nonzero diagonal in the explicit matrix
  CHECK_THROWS_AS(build_tableau("t", 1, {{1, 0}, {1, 0}}, {1, 0}, {{0, 0}, {0, 1}}, {0, 1}),
                  std::invalid_argument);
  // upper-triangular entry in the implicit matrix
  CHECK_THROWS_AS(build_tableau("t", 1, {{0, 0}, {1, 0}}, {1, 0}, {{0, 1}, {0, 1}}, {0, 1}),
                  std::invalid_argument);
  // shape mismatch
  CHECK_THROWS_AS(build_tableau("t", 1, {{0, 0}, {1, 0}}, {1, 0, 0}, {{0, 0}, {0, 1}}, {0, 1}),
                  std::invalid_argument);

  const auto t = build_tableau("ARS111", 1, {{0, 0}, {1, 0}}, {1, 0}, {{0, 0}, {0, 1}}, {0, 1});
  CHECK(t.c_ex == Vec{0, 1});
  CHECK(t.c_im == Vec{0, 1});
}

TEST_CASE("registry contains exactly the named schemes") {
  const auto& reg = registry();
  CHECK(reg.size() == 11);
  for (const char* name :
       {"ARS(1,1,1)", "DP-ARS(1,2,1)", "DP-A(1,2,1)", "ARS(2,2,2)", "DP-ARS(2,2,2)",
        "JF-CK(2,3,2)", "DP1-A(2,4,2)", "DP2-A1(2,4,2)", "DP2-A2(2,4,2)", "ARS(4,4,3)",
        "BPR-CK(3,5,3)"})
    CHECK_MESSAGE(reg.count(name) == 1, name);
  CHECK(!find_scheme("nosuch").has_value());

  const auto dp1 = *find_scheme("DP1-A(2,4,2)");
  CHECK(dp1.w_im == Vec{1.5, -1.5, 0.5, 0.5});
  const auto dp2 = *find_scheme("DP2-A2(2,4,2)");
  for (std::size_t i = 0; i < 4; ++i) CHECK(dp2.a_im[i][i] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("classify reproduces the type letter in each scheme name and GSA") {
  for (const auto& [name, t] : registry()) {
    const SchemeClass cls = classify(t);
    CHECK_MESSAGE(cls.gsa, name);
    CHECK_MESSAGE(cls.isa, name);
    const std::string kind = to_string(cls.kind);
    // Type letter embedded in the name: ...-A(..., ARS(..., ...-ARS(..., ...-CK(...
    const bool is_ars = name.find("ARS") != std::string::npos;
    const bool is_ck = name.find("CK") != std::string::npos;
    if (is_ars) CHECK_MESSAGE(kind == "ARS", name);
    else if (is_ck) CHECK_MESSAGE(kind == "CK", name);
    else CHECK_MESSAGE(kind == "A", name);
  }
  // Neither type A nor CK: zero diagonal past the first stage.
  const auto bad =
      build_tableau("bad", 1, {{0, 0}, {1, 0}}, {1, 0}, {{1, 0}, {0, 0}}, {1, 0});
  CHECK_THROWS_AS(classify(bad), std::domain_error);
}

TEST_CASE("type-A GSA schemes satisfy w^T A^{-1} = e_nu") {
  for (const auto& [name, t] : registry()) {
    if (classify(t).kind != TableauKind::TypeA) continue;
    const Vec wAinv = lower_solve_transposed(t.a_im, t.w_im);
    for (std::size_t i = 0; i + 1 < t.nu; ++i) CHECK(std::abs(wAinv[i]) < 1e-12);
    CHECK(std::abs(wAinv.back() - 1.0) < 1e-12);
  }
}

TEST_CASE("order conditions hold at each scheme's declared order") {
  for (const auto& [name, t] : registry()) {
    const auto rep = check_order_conditions(t, t.order);
    for (const auto& e : rep.entries)
      CHECK_MESSAGE(e.satisfied, name, " ", e.id, " residual ", e.residual);
  }
  // Euler pair is first order only.
  CHECK(!check_order_conditions(*find_scheme("ARS(1,1,1)"), 2).all_satisfied());
}

TEST_CASE("DP1-A implicit part is third order as a DIRK") {
  const auto t = *find_scheme("DP1-A(2,4,2)");
  CHECK(std::abs(dot(t.w_im, t.c_im) - 0.5) < 1e-12);
  double s = 0.0;
  for (std::size_t i = 0; i < t.nu; ++i) s += t.w_im[i] * t.c_im[i] * t.c_im[i];
  CHECK(std::abs(s - 1.0 / 3.0) < 1e-12);
  CHECK(std::abs(dot(t.w_im, mat_vec(t.a_im, t.c_im)) - 1.0 / 6.0) < 1e-12);
}

TEST_CASE("AA and AA-c verdicts match the reference table") {
  struct Row {
    const char* name;
    bool aa, aa_c;
  };
  const Row rows[] = {
      {"ARS(1,1,1)", false, true},   {"DP-ARS(1,2,1)", true, true},
      {"DP-A(1,2,1)", true, true},   {"ARS(2,2,2)", false, true},
      {"DP-ARS(2,2,2)", false, true}, {"JF-CK(2,3,2)", false, true},
      {"DP1-A(2,4,2)", true, true},  {"DP2-A1(2,4,2)", true, true},
      {"DP2-A2(2,4,2)", true, true}, {"ARS(4,4,3)", false, true},
      {"BPR-CK(3,5,3)", false, true},
  };
  for (const auto& row : rows) {
    const auto v = ap_verdict(*find_scheme(row.name));
    CHECK_MESSAGE(v.aa == row.aa, row.name);
    CHECK_MESSAGE(v.aa_c == row.aa_c, row.name);
  }
}

TEST_CASE("check_ap_conditions reports L-stability and index-1 residuals") {
  const auto rep = check_ap_conditions(*find_scheme("DP-A(1,2,1)"));
  CHECK(rep.satisfied("Lstab:w.Ainv.e"));
  CHECK(rep.satisfied("AA:w_ex=w.Ainv.A_ex"));
  CHECK(rep.find("index1:w.Ainv.c_ex") != nullptr);

  const auto rep2 = check_ap_conditions(*find_scheme("ARS(1,1,1)"));
  CHECK(rep2.satisfied("Lstab:w.Ainv.e"));
  CHECK(!(rep2.satisfied("apars:e_nu.Ainv.a_ex") && rep2.satisfied("apars:e_nu.Ainv.a_im") &&
          rep2.satisfied("apars:e_nu.Ainv.A_ex_hat")));
}

TEST_CASE("parse_coefficient handles numbers, fractions and sqrt") {
  CHECK(parse_coefficient("0.5") == 0.5);
  CHECK(parse_coefficient("-5/6") == doctest::Approx(-5.0 / 6.0).epsilon(1e-16));
  CHECK(parse_coefficient("1-sqrt(2)/2") == doctest::Approx(1.0 - std::sqrt(2.0) / 2.0));
  CHECK(parse_coefficient("(2+sqrt(2))/2") == doctest::Approx((2.0 + std::sqrt(2.0)) / 2.0));
  CHECK(parse_coefficient(" 2 * 3 - 1e-1 ") == doctest::Approx(5.9));
  CHECK_THROWS_AS(parse_coefficient("sqrt(-1)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_coefficient("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_coefficient("1 2"), std::invalid_argument);
}

TEST_CASE("load_tableau round-trips the text format") {
  std::istringstream in(
      "# forward-backward Euler\n"
      "ARS(1,1,1) 2 1\n"
      "0 0\n"
      "1 0\n"
      "1 0\n"
      "0 0\n"
      "0 1\n"
      "0 1\n");
  const auto t = load_tableau(in);
  const auto ref = *find_scheme("ARS(1,1,1)");
  CHECK(t.nu == ref.nu);
  CHECK(t.order == ref.order);
  CHECK(t.a_ex == ref.a_ex);
  CHECK(t.a_im == ref.a_im);
  CHECK(t.w_ex == ref.w_ex);
  CHECK(t.w_im == ref.w_im);

  std::istringstream gamma(
      "G 2 1\n"
      "0 0\n1 0\n1 0\n"
      "(2+sqrt(2))/2 0\n1-(2+sqrt(2))/2 (2+sqrt(2))/2\n"
      "1-(2+sqrt(2))/2 (2+sqrt(2))/2\n");
  const auto g = load_tableau(gamma);
  CHECK(g.a_im[0][0] == doctest::Approx((2.0 + std::sqrt(2.0)) / 2.0).epsilon(1e-16));

  std::istringstream truncated("X 2 1\n0 0\n1 0\n");
  CHECK_THROWS_AS(load_tableau(truncated), std::invalid_argument);
}
