#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>
#include <utility>

namespace latwalk {

// Two-sided enclosure [lo, hi] of a real number, endpoints MPFR floats of a
// common precision. Every operation rounds lo down and hi up, so intervals
// computed from intervals always contain the exact result. This is the carrier
// for operator norms, heights, and all certificate arithmetic.
class Interval {
 public:
  Interval();
  explicit Interval(mpfr_prec_t prec);
  Interval(const Interval& o);
  Interval(Interval&& o) noexcept;
  Interval& operator=(const Interval& o);
  Interval& operator=(Interval&& o) noexcept;
  ~Interval();

  static Interval exact_int(long v, mpfr_prec_t prec = 64);
  static Interval from_mpz(const mpz_class& z, mpfr_prec_t prec);
  static Interval from_mpq(const mpq_class& q, mpfr_prec_t prec);
  static Interval from_double(double d, mpfr_prec_t prec = 64);
  // [lo, hi] from two exact doubles.
  static Interval from_bounds(double lo, double hi, mpfr_prec_t prec = 64);

  mpfr_prec_t prec() const { return prec_; }
  mpfr_srcptr lo() const { return lo_; }
  mpfr_srcptr hi() const { return hi_; }

  bool contains_zero() const;
  bool is_positive() const;  // lo > 0
  bool is_negative() const;  // hi < 0

  // Decidable comparisons; "certainly" means for every pair of points.
  bool certainly_le(const Interval& o) const;   // hi <= o.lo
  bool certainly_lt(const Interval& o) const;   // hi <  o.lo
  bool certainly_ge(const Interval& o) const;   // lo >= o.hi
  bool certainly_le(const mpq_class& q) const;  // hi <= q
  bool certainly_ge(const mpq_class& q) const;  // lo >= q

  double lo_double() const;  // rounded down
  double hi_double() const;  // rounded up
  double mid_double() const;

  // Relative width <= 2^-bits (lo must be > 0).
  bool rel_width_le(int bits) const;

  // Same endpoints re-represented at a (typically higher) working precision.
  Interval widened(mpfr_prec_t prec) const;

  std::string to_string(int digits = 20) const;

  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  friend Interval operator/(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a);

  friend Interval max(const Interval& a, const Interval& b);
  friend Interval sqrt(const Interval& a);
  friend Interval log(const Interval& a);   // requires lo > 0
  friend Interval exp(const Interval& a);
  friend Interval log1p(const Interval& a);
  friend Interval expm1(const Interval& a);
  // a^x for a with lo > 0.
  friend Interval pow(const Interval& a, const Interval& x);

  friend Interval log2_const(mpfr_prec_t prec);  // enclosure of log(2)
  friend Interval pi_const(mpfr_prec_t prec);

 private:
  mpfr_t lo_, hi_;
  mpfr_prec_t prec_;
};

Interval log2_const(mpfr_prec_t prec);
Interval pi_const(mpfr_prec_t prec);

// log(z) for a positive big integer, directed; cheap even for huge z.
Interval log_of_mpz(const mpz_class& z, mpfr_prec_t prec);
// log(q) for a positive rational.
Interval log_of_mpq(const mpq_class& q, mpfr_prec_t prec);

// Compare an exact rational against exp(x): sign of q - exp(x), computed by
// widening the enclosure until decidable. Returns -1, 0 (undecided at cap), 1.
int compare_mpq_exp(const mpq_class& q, const Interval& x, mpfr_prec_t max_prec = 1 << 14);

std::string mpfr_to_decimal(mpfr_srcptr x, int digits, mpfr_rnd_t rnd);

}  // namespace latwalk
