#pragma once

/// IMEX Runge-Kutta double Butcher tableaux: representation, the registry of
/// named schemes, classification (type A / CK / ARS, ISA/GSA), and the order
/// and asymptotic-preservation condition checkers.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "apkin/linalg.hpp"

namespace apkin {

/// Double Butcher tableau (A_ex, w_ex, c_ex | A_im, w_im, c_im).
/// The explicit matrix is strictly lower triangular, the implicit matrix is
/// lower triangular (DIRK). Abscissae are recomputed from row sums on
/// construction and stored.
struct ImexTableau {
  std::string name;
  std::size_t nu = 0;   ///< stage count
  int order = 0;        ///< declared combined order p
  Mat a_ex, a_im;
  Vec w_ex, w_im;
  Vec c_ex, c_im;
};

enum class TableauKind { TypeA, TypeCK, TypeARS };

struct SchemeClass {
  TableauKind kind = TableauKind::TypeA;
  bool isa = false;  ///< implicitly stiffly accurate: last implicit row == w_im
  bool gsa = false;  ///< globally stiffly accurate: ISA and last explicit row == w_ex
};

const char* to_string(TableauKind kind);

struct ConditionEntry {
  std::string id;
  double residual = 0.0;
  bool satisfied = false;
  bool applicable = true;  ///< false when a required inverse does not exist
};

struct ConditionReport {
  std::vector<ConditionEntry> entries;
  double tolerance = 0.0;

  const ConditionEntry* find(const std::string& id) const;
  bool satisfied(const std::string& id) const;
  bool all_satisfied() const;
};

/// Asymptotic-accuracy verdict derived from the condition report alone.
struct ApVerdict {
  bool aa = false;    ///< asymptotically accurate for arbitrary data
  bool aa_c = false;  ///< asymptotically accurate for consistent (well-prepared) data
};

/// Validate shapes and triangularity, recompute abscissae, and return the
/// tableau. Throws std::invalid_argument on structural violations.
ImexTableau build_tableau(std::string name, int order, Mat a_ex, Vec w_ex, Mat a_im, Vec w_im);

/// The named schemes analyzed in the reference study, with irrational
/// coefficients materialized from closed forms.
const std::map<std::string, ImexTableau>& registry();

/// Convenience lookup; empty optional when the name is unknown.
std::optional<ImexTableau> find_scheme(const std::string& name);

/// Classify the tableau; throws std::domain_error when the implicit part is
/// neither type A nor type CK (a zero diagonal entry past the first stage).
SchemeClass classify(const ImexTableau& t, double zero_tol = 1e-14);

/// Classical plus additive coupling order conditions up to order p (<= 3).
ConditionReport check_order_conditions(const ImexTableau& t, int p, double tol = 1e-12);

/// Asymptotic-preservation / asymptotic-accuracy condition checks.
ConditionReport check_ap_conditions(const ImexTableau& t, double tol = 1e-12);

/// AA / AA-c verdicts computed from classify() + check_ap_conditions() only.
ApVerdict ap_verdict(const ImexTableau& t, double tol = 1e-12);

/// Plain-text tableau format: one header line `name nu order`, then nu rows of
/// A_ex, one row w_ex, nu rows of A_im, one row w_im. Entries are decimals or
/// simple expressions (fractions, sqrt(x), + - * /).
ImexTableau load_tableau(std::istream& in);
ImexTableau load_tableau_file(const std::string& path);

/// Parser for the coefficient expressions accepted by load_tableau.
double parse_coefficient(const std::string& text);

}  // namespace apkin
