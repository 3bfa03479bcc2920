#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

#include "latwalk/real.hpp"

namespace latwalk {

// Per-entry bit-size budgets (numerator or denominator).
inline constexpr size_t kDefaultEntryBitBudget = size_t{1} << 24;
inline constexpr size_t kWalkEntryBitBudget = size_t{1} << 22;

// Exact d x d matrix over Q, row-major, entries kept canonical by gmpxx.
class RationalMatrix {
 public:
  RationalMatrix() : dim_(0) {}
  explicit RationalMatrix(int dim) : dim_(dim), e_(static_cast<size_t>(dim) * dim, 0) {}

  static RationalMatrix identity(int dim);
  // N_t = I + t*E_{1,2}, the standard shear one-parameter group.
  static RationalMatrix shear(int dim, const mpq_class& t);
  // diag(2^m, 2^-m, 1, ..., 1); m >= 0, materializes 2^m (budget-checked).
  static RationalMatrix diag_pow2(int dim, const mpz_class& m,
                                  size_t bit_budget = kDefaultEntryBitBudget);
  static RationalMatrix diag(const std::vector<mpq_class>& d);
  // Elementary matrix I + r*E_{i,j}, i != j (0-based).
  static RationalMatrix elementary(int dim, int i, int j, const mpq_class& r);

  int dim() const { return dim_; }
  const mpq_class& at(int i, int j) const { return e_[static_cast<size_t>(i) * dim_ + j]; }
  mpq_class& at(int i, int j) { return e_[static_cast<size_t>(i) * dim_ + j]; }

  bool operator==(const RationalMatrix& o) const { return dim_ == o.dim_ && e_ == o.e_; }

  size_t max_entry_bits() const;
  void check_budget(size_t bit_budget) const;  // throws BudgetError

  RationalMatrix transpose() const;
  mpq_class determinant() const;  // Bareiss-style fraction-free for d <= 6
  bool is_unimodular() const { return dim_ > 0 && determinant() == 1; }

  std::string to_json() const;  // array-of-arrays of "num/den" strings
  static RationalMatrix from_json(const std::string& text);

 private:
  int dim_;
  std::vector<mpq_class> e_;
};

RationalMatrix mul(const RationalMatrix& a, const RationalMatrix& b,
                   size_t bit_budget = kDefaultEntryBitBudget);
RationalMatrix inverse(const RationalMatrix& a);  // adjugate / determinant
std::vector<mpq_class> apply(const RationalMatrix& a, const std::vector<mpq_class>& v);

// q(a): least common denominator of the entries.
mpz_class denominator_lcm(const RationalMatrix& a);

// Exact squared Frobenius norm.
mpq_class frobenius_sq(const RationalMatrix& a);

// Enclosure of the operator (spectral) norm. `sq_lower`/`sq_upper` are exact
// rational bounds on ||a||^2 = lambda_max(a^T a), suitable for exact
// downstream comparisons; `value` is their square root rounded outward.
struct NormEnclosure {
  Interval value;
  mpq_class sq_lower;
  mpq_class sq_upper;
  int precision_bits = 0;
  bool met_target = true;
};

NormEnclosure spectral_norm_enclosure(const RationalMatrix& a, int precision_bits = 64);

// The four constituents of the height together with the log-max enclosure
// (natural log). q and q_inv are exact.
struct HeightProfile {
  NormEnclosure norm;
  NormEnclosure norm_inv;
  mpz_class q;
  mpz_class q_inv;
  Interval height;
};

HeightProfile height_profile(const RationalMatrix& a, int precision_bits = 64);

// Characteristic polynomial det(x*I - a), exact, monic; c[k] multiplies x^k.
std::vector<mpq_class> characteristic_polynomial(const RationalMatrix& a);

// Largest real root of a monic polynomial with all-real roots, bracketed by
// exact rationals with hi/lo - 1 <= 2^-precision_bits (Sturm bisection).
// Returns false in met_target position of the pair when the iteration cap was
// hit (bracket still valid).
struct RootBracket {
  mpq_class lo;
  mpq_class hi;
  bool met_target = true;
};
RootBracket largest_root_bracket(const std::vector<mpq_class>& monic, const mpq_class& lo0,
                                 const mpq_class& hi0, int precision_bits);

}  // namespace latwalk
