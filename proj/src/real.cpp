#include "latwalk/real.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <vector>

#include "latwalk/errors.hpp"

namespace latwalk {

Interval::Interval() : Interval(64) {}

Interval::Interval(mpfr_prec_t prec) : prec_(prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Interval& o) : prec_(o.prec_) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set(lo_, o.lo_, MPFR_RNDD);
  mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& o) noexcept : prec_(o.prec_) {
  mpfr_init2(lo_, 2);
  mpfr_init2(hi_, 2);
  mpfr_swap(lo_, o.lo_);
  mpfr_swap(hi_, o.hi_);
}

Interval& Interval::operator=(const Interval& o) {
  if (this == &o) return *this;
  mpfr_set_prec(lo_, o.prec_);
  mpfr_set_prec(hi_, o.prec_);
  prec_ = o.prec_;
  mpfr_set(lo_, o.lo_, MPFR_RNDD);
  mpfr_set(hi_, o.hi_, MPFR_RNDU);
  return *this;
}

Interval& Interval::operator=(Interval&& o) noexcept {
  mpfr_swap(lo_, o.lo_);
  mpfr_swap(hi_, o.hi_);
  std::swap(prec_, o.prec_);
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

Interval Interval::exact_int(long v, mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_set_si(r.lo_, v, MPFR_RNDD);
  mpfr_set_si(r.hi_, v, MPFR_RNDU);
  return r;
}

Interval Interval::from_mpz(const mpz_class& z, mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_set_z(r.lo_, z.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(r.hi_, z.get_mpz_t(), MPFR_RNDU);
  return r;
}

Interval Interval::from_mpq(const mpq_class& q, mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
  return r;
}

Interval Interval::from_double(double d, mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_set_d(r.lo_, d, MPFR_RNDD);
  mpfr_set_d(r.hi_, d, MPFR_RNDU);
  return r;
}

Interval Interval::from_bounds(double lo, double hi, mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_set_d(r.lo_, lo, MPFR_RNDD);
  mpfr_set_d(r.hi_, hi, MPFR_RNDU);
  return r;
}

bool Interval::contains_zero() const {
  return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0;
}

bool Interval::is_positive() const { return mpfr_sgn(lo_) > 0; }
bool Interval::is_negative() const { return mpfr_sgn(hi_) < 0; }

bool Interval::certainly_le(const Interval& o) const { return mpfr_cmp(hi_, o.lo_) <= 0; }
bool Interval::certainly_lt(const Interval& o) const { return mpfr_cmp(hi_, o.lo_) < 0; }
bool Interval::certainly_ge(const Interval& o) const { return mpfr_cmp(lo_, o.hi_) >= 0; }

bool Interval::certainly_le(const mpq_class& q) const {
  return mpfr_cmp_q(hi_, q.get_mpq_t()) <= 0;
}

bool Interval::certainly_ge(const mpq_class& q) const {
  return mpfr_cmp_q(lo_, q.get_mpq_t()) >= 0;
}

double Interval::lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

double Interval::mid_double() const {
  return 0.5 * (lo_double() + hi_double());
}

bool Interval::rel_width_le(int bits) const {
  if (mpfr_sgn(lo_) <= 0) return false;
  mpfr_t w, t;
  mpfr_init2(w, prec_);
  mpfr_init2(t, prec_);
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  mpfr_mul_2si(t, lo_, -bits, MPFR_RNDD);
  bool ok = mpfr_cmp(w, t) <= 0;
  mpfr_clear(w);
  mpfr_clear(t);
  return ok;
}

std::string mpfr_to_decimal(mpfr_srcptr x, int digits, mpfr_rnd_t rnd) {
  if (mpfr_nan_p(x)) return "nan";
  if (mpfr_inf_p(x)) return mpfr_sgn(x) > 0 ? "inf" : "-inf";
  if (mpfr_zero_p(x)) return "0";
  mpfr_exp_t e;
  char* s = mpfr_get_str(nullptr, &e, 10, digits, x, rnd);
  std::string mant(s);
  mpfr_free_str(s);
  bool neg = !mant.empty() && mant[0] == '-';
  std::string d = neg ? mant.substr(1) : mant;
  // Normalized form: 0.d1d2... * 10^e  ->  d1.d2... e(e-1)
  std::string out = (neg ? "-" : "");
  out += d.substr(0, 1);
  if (d.size() > 1) out += "." + d.substr(1);
  out += "e" + std::to_string(static_cast<long>(e - 1));
  return out;
}

std::string Interval::to_string(int digits) const {
  return "[" + mpfr_to_decimal(lo_, digits, MPFR_RNDD) + ", " +
         mpfr_to_decimal(hi_, digits, MPFR_RNDU) + "]";
}

static mpfr_prec_t join_prec(const Interval& a, const Interval& b) {
  return std::max(a.prec(), b.prec());
}

Interval operator+(const Interval& a, const Interval& b) {
  Interval r(join_prec(a, b));
  mpfr_add(const_cast<mpfr_ptr>(r.lo()), a.lo(), b.lo(), MPFR_RNDD);
  mpfr_add(const_cast<mpfr_ptr>(r.hi()), a.hi(), b.hi(), MPFR_RNDU);
  return r;
}

Interval operator-(const Interval& a, const Interval& b) {
  Interval r(join_prec(a, b));
  mpfr_sub(const_cast<mpfr_ptr>(r.lo()), a.lo(), b.hi(), MPFR_RNDD);
  mpfr_sub(const_cast<mpfr_ptr>(r.hi()), a.hi(), b.lo(), MPFR_RNDU);
  return r;
}

Interval operator-(const Interval& a) {
  Interval r(a.prec());
  mpfr_neg(const_cast<mpfr_ptr>(r.lo()), a.hi(), MPFR_RNDD);
  mpfr_neg(const_cast<mpfr_ptr>(r.hi()), a.lo(), MPFR_RNDU);
  return r;
}

Interval operator*(const Interval& a, const Interval& b) {
  mpfr_prec_t p = join_prec(a, b);
  Interval r(p);
  mpfr_t c[4];
  for (auto& x : c) mpfr_init2(x, p);
  // Candidates rounded down for lo.
  mpfr_mul(c[0], a.lo(), b.lo(), MPFR_RNDD);
  mpfr_mul(c[1], a.lo(), b.hi(), MPFR_RNDD);
  mpfr_mul(c[2], a.hi(), b.lo(), MPFR_RNDD);
  mpfr_mul(c[3], a.hi(), b.hi(), MPFR_RNDD);
  mpfr_min(c[0], c[0], c[1], MPFR_RNDD);
  mpfr_min(c[0], c[0], c[2], MPFR_RNDD);
  mpfr_min(c[0], c[0], c[3], MPFR_RNDD);
  mpfr_set(const_cast<mpfr_ptr>(r.lo()), c[0], MPFR_RNDD);
  // Candidates rounded up for hi.
  mpfr_mul(c[0], a.lo(), b.lo(), MPFR_RNDU);
  mpfr_mul(c[1], a.lo(), b.hi(), MPFR_RNDU);
  mpfr_mul(c[2], a.hi(), b.lo(), MPFR_RNDU);
  mpfr_mul(c[3], a.hi(), b.hi(), MPFR_RNDU);
  mpfr_max(c[0], c[0], c[1], MPFR_RNDU);
  mpfr_max(c[0], c[0], c[2], MPFR_RNDU);
  mpfr_max(c[0], c[0], c[3], MPFR_RNDU);
  mpfr_set(const_cast<mpfr_ptr>(r.hi()), c[0], MPFR_RNDU);
  for (auto& x : c) mpfr_clear(x);
  return r;
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) throw PrecisionError("interval division by interval containing zero");
  mpfr_prec_t p = join_prec(a, b);
  Interval r(p);
  mpfr_t c[4];
  for (auto& x : c) mpfr_init2(x, p);
  mpfr_div(c[0], a.lo(), b.lo(), MPFR_RNDD);
  mpfr_div(c[1], a.lo(), b.hi(), MPFR_RNDD);
  mpfr_div(c[2], a.hi(), b.lo(), MPFR_RNDD);
  mpfr_div(c[3], a.hi(), b.hi(), MPFR_RNDD);
  mpfr_min(c[0], c[0], c[1], MPFR_RNDD);
  mpfr_min(c[0], c[0], c[2], MPFR_RNDD);
  mpfr_min(c[0], c[0], c[3], MPFR_RNDD);
  mpfr_set(const_cast<mpfr_ptr>(r.lo()), c[0], MPFR_RNDD);
  mpfr_div(c[0], a.lo(), b.lo(), MPFR_RNDU);
  mpfr_div(c[1], a.lo(), b.hi(), MPFR_RNDU);
  mpfr_div(c[2], a.hi(), b.lo(), MPFR_RNDU);
  mpfr_div(c[3], a.hi(), b.hi(), MPFR_RNDU);
  mpfr_max(c[0], c[0], c[1], MPFR_RNDU);
  mpfr_max(c[0], c[0], c[2], MPFR_RNDU);
  mpfr_max(c[0], c[0], c[3], MPFR_RNDU);
  mpfr_set(const_cast<mpfr_ptr>(r.hi()), c[0], MPFR_RNDU);
  for (auto& x : c) mpfr_clear(x);
  return r;
}

Interval max(const Interval& a, const Interval& b) {
  Interval r(join_prec(a, b));
  mpfr_max(const_cast<mpfr_ptr>(r.lo()), a.lo(), b.lo(), MPFR_RNDD);
  mpfr_max(const_cast<mpfr_ptr>(r.hi()), a.hi(), b.hi(), MPFR_RNDU);
  return r;
}

Interval sqrt(const Interval& a) {
  if (mpfr_sgn(a.lo()) < 0) throw PrecisionError("sqrt of interval with negative lower bound");
  Interval r(a.prec());
  mpfr_sqrt(const_cast<mpfr_ptr>(r.lo()), a.lo(), MPFR_RNDD);
  mpfr_sqrt(const_cast<mpfr_ptr>(r.hi()), a.hi(), MPFR_RNDU);
  return r;
}

Interval log(const Interval& a) {
  if (mpfr_sgn(a.lo()) <= 0) throw PrecisionError("log of interval with non-positive lower bound");
  Interval r(a.prec());
  mpfr_log(const_cast<mpfr_ptr>(r.lo()), a.lo(), MPFR_RNDD);
  mpfr_log(const_cast<mpfr_ptr>(r.hi()), a.hi(), MPFR_RNDU);
  return r;
}

Interval exp(const Interval& a) {
  Interval r(a.prec());
  mpfr_exp(const_cast<mpfr_ptr>(r.lo()), a.lo(), MPFR_RNDD);
  mpfr_exp(const_cast<mpfr_ptr>(r.hi()), a.hi(), MPFR_RNDU);
  return r;
}

Interval log1p(const Interval& a) {
  Interval r(a.prec());
  mpfr_log1p(const_cast<mpfr_ptr>(r.lo()), a.lo(), MPFR_RNDD);
  mpfr_log1p(const_cast<mpfr_ptr>(r.hi()), a.hi(), MPFR_RNDU);
  return r;
}

Interval expm1(const Interval& a) {
  Interval r(a.prec());
  mpfr_expm1(const_cast<mpfr_ptr>(r.lo()), a.lo(), MPFR_RNDD);
  mpfr_expm1(const_cast<mpfr_ptr>(r.hi()), a.hi(), MPFR_RNDU);
  return r;
}

Interval pow(const Interval& a, const Interval& x) {
  if (mpfr_sgn(a.lo()) <= 0) throw PrecisionError("pow with non-positive base");
  // a^x = exp(x log a); monotonicity of pow in both args is sign-dependent,
  // going through exp/log keeps the rounding direction analysis trivial.
  return exp(x * log(a));
}

Interval log2_const(mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_const_log2(const_cast<mpfr_ptr>(r.lo()), MPFR_RNDD);
  mpfr_const_log2(const_cast<mpfr_ptr>(r.hi()), MPFR_RNDU);
  return r;
}

Interval pi_const(mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_const_pi(const_cast<mpfr_ptr>(r.lo()), MPFR_RNDD);
  mpfr_const_pi(const_cast<mpfr_ptr>(r.hi()), MPFR_RNDU);
  return r;
}

Interval log_of_mpz(const mpz_class& z, mpfr_prec_t prec) {
  if (z <= 0) throw PrecisionError("log of non-positive integer");
  return log(Interval::from_mpz(z, prec));
}

Interval log_of_mpq(const mpq_class& q, mpfr_prec_t prec) {
  if (q <= 0) throw PrecisionError("log of non-positive rational");
  return log(Interval::from_mpq(q, prec));
}

Interval Interval::widened(mpfr_prec_t prec) const {
  Interval r(prec);
  mpfr_set(r.lo_, lo_, MPFR_RNDD);
  mpfr_set(r.hi_, hi_, MPFR_RNDU);
  return r;
}

int compare_mpq_exp(const mpq_class& q, const Interval& x, mpfr_prec_t max_prec) {
  // exp(0) = 1 is the one rational value; decide exactly.
  if (mpfr_zero_p(x.lo()) && mpfr_zero_p(x.hi())) {
    return q < 1 ? -1 : (q == 1 ? 0 : 1);
  }
  for (mpfr_prec_t p = std::max<mpfr_prec_t>(x.prec(), 128); p <= max_prec; p *= 2) {
    Interval e = exp(x.widened(p));
    if (mpfr_cmp_q(e.hi(), q.get_mpq_t()) < 0) return 1;   // q > exp(x)
    if (mpfr_cmp_q(e.lo(), q.get_mpq_t()) > 0) return -1;  // q < exp(x)
  }
  return 0;
}

}  // namespace latwalk
