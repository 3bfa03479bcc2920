#include "latwalk/ratmat.hpp"

#include <algorithm>
#include <cstdlib>

#include <nlohmann/json.hpp>

#include "latwalk/errors.hpp"

namespace latwalk {

using json = nlohmann::json;

RationalMatrix RationalMatrix::identity(int dim) {
  RationalMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.at(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::shear(int dim, const mpq_class& t) {
  if (dim < 2) throw DimensionError("shear needs d >= 2");
  RationalMatrix m = identity(dim);
  m.at(0, 1) = t;
  return m;
}

RationalMatrix RationalMatrix::diag_pow2(int dim, const mpz_class& m, size_t bit_budget) {
  if (dim < 2) throw DimensionError("diag_pow2 needs d >= 2");
  if (m < 0) throw ConfigError("diag_pow2 exponent must be >= 0");
  if (!m.fits_ulong_p() || mpz_get_ui(m.get_mpz_t()) > bit_budget)
    throw BudgetError("2^m exceeds entry bit budget (m = " + m.get_str() + ")");
  unsigned long e = mpz_get_ui(m.get_mpz_t());
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, e);
  RationalMatrix r = identity(dim);
  r.at(0, 0) = p;
  r.at(1, 1) = mpq_class(1, p);
  r.at(1, 1).canonicalize();
  return r;
}

RationalMatrix RationalMatrix::diag(const std::vector<mpq_class>& d) {
  RationalMatrix m(static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i) m.at(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return m;
}

RationalMatrix RationalMatrix::elementary(int dim, int i, int j, const mpq_class& r) {
  if (i == j || i < 0 || j < 0 || i >= dim || j >= dim)
    throw DimensionError("elementary matrix needs distinct valid indices");
  RationalMatrix m = identity(dim);
  m.at(i, j) = r;
  return m;
}

size_t RationalMatrix::max_entry_bits() const {
  size_t best = 0;
  for (const auto& x : e_) {
    best = std::max(best, mpz_sizeinbase(x.get_num().get_mpz_t(), 2));
    best = std::max(best, mpz_sizeinbase(x.get_den().get_mpz_t(), 2));
  }
  return best;
}

void RationalMatrix::check_budget(size_t bit_budget) const {
  if (max_entry_bits() > bit_budget)
    throw BudgetError("matrix entry exceeds bit budget (" + std::to_string(max_entry_bits()) +
                      " > " + std::to_string(bit_budget) + " bits)");
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix r(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) r.at(j, i) = at(i, j);
  return r;
}

mpq_class RationalMatrix::determinant() const {
  if (dim_ == 0) throw DimensionError("determinant of empty matrix");
  // Fraction-free Gaussian elimination on a working copy.
  std::vector<mpq_class> w(e_);
  int d = dim_;
  auto el = [&](int i, int j) -> mpq_class& { return w[static_cast<size_t>(i) * d + j]; };
  mpq_class det = 1;
  for (int c = 0; c < d; ++c) {
    int piv = -1;
    for (int r = c; r < d; ++r)
      if (el(r, c) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return 0;
    if (piv != c) {
      for (int j = 0; j < d; ++j) std::swap(el(piv, j), el(c, j));
      det = -det;
    }
    det *= el(c, c);
    mpq_class inv_p = 1 / mpq_class(el(c, c));
    for (int r = c + 1; r < d; ++r) {
      if (el(r, c) == 0) continue;
      mpq_class f = el(r, c) * inv_p;
      for (int j = c; j < d; ++j) el(r, j) -= f * el(c, j);
    }
  }
  return det;
}

RationalMatrix mul(const RationalMatrix& a, const RationalMatrix& b, size_t bit_budget) {
  if (a.dim() != b.dim()) throw DimensionError("mul: dimension mismatch");
  int d = a.dim();
  RationalMatrix r(d);
  mpq_class acc, t;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      acc = 0;
      for (int k = 0; k < d; ++k) {
        t = a.at(i, k) * b.at(k, j);
        acc += t;
      }
      r.at(i, j) = acc;
    }
  r.check_budget(bit_budget);
  return r;
}

RationalMatrix inverse(const RationalMatrix& a) {
  int d = a.dim();
  if (d == 0) throw DimensionError("inverse of empty matrix");
  mpq_class det = a.determinant();
  if (det == 0) throw SingularMatrixError("inverse: singular matrix");
  if (d == 1) {
    RationalMatrix r(1);
    r.at(0, 0) = 1 / det;
    return r;
  }
  // Adjugate via cofactors; d <= 6 so the minor expansion is cheap.
  RationalMatrix r(d);
  RationalMatrix mm(d - 1);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      int mr = 0;
      for (int rr = 0; rr < d; ++rr) {
        if (rr == i) continue;
        int mc = 0;
        for (int cc = 0; cc < d; ++cc) {
          if (cc == j) continue;
          mm.at(mr, mc) = a.at(rr, cc);
          ++mc;
        }
        ++mr;
      }
      mpq_class cof = mm.determinant();
      if ((i + j) & 1) cof = -cof;
      r.at(j, i) = cof / det;  // adjugate transpose
    }
  return r;
}

std::vector<mpq_class> apply(const RationalMatrix& a, const std::vector<mpq_class>& v) {
  if (static_cast<int>(v.size()) != a.dim()) throw DimensionError("apply: dimension mismatch");
  std::vector<mpq_class> r(v.size(), 0);
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) r[i] += a.at(i, j) * v[j];
  return r;
}

mpz_class denominator_lcm(const RationalMatrix& a) {
  mpz_class l = 1;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a.at(i, j).get_den().get_mpz_t());
  return l;
}

mpq_class frobenius_sq(const RationalMatrix& a) {
  mpq_class s = 0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) s += a.at(i, j) * a.at(i, j);
  return s;
}

std::vector<mpq_class> characteristic_polynomial(const RationalMatrix& a) {
  // Faddeev-LeVerrier: exact coefficients of det(x I - a).
  int d = a.dim();
  std::vector<mpq_class> c(static_cast<size_t>(d) + 1);
  c[d] = 1;
  RationalMatrix m = RationalMatrix::identity(d);  // M_0
  RationalMatrix am(d);
  for (int k = 1; k <= d; ++k) {
    // M_k = a * (M_{k-1} + c_{d-k+1} I) for k > 1; M_1 = a.
    if (k > 1) {
      RationalMatrix t = m;
      for (int i = 0; i < d; ++i) t.at(i, i) += c[d - k + 1];
      am = mul(a, t, size_t{1} << 30);
    } else {
      am = a;
    }
    mpq_class tr = 0;
    for (int i = 0; i < d; ++i) tr += am.at(i, i);
    c[d - k] = -tr / k;
    m = am;
  }
  return c;
}

namespace {

// Sign of a polynomial at a rational point (Horner).
int poly_sign_at(const std::vector<mpq_class>& p, const mpq_class& x) {
  mpq_class acc = 0;
  for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return sgn(acc);
}

int poly_degree(const std::vector<mpq_class>& q) {
  for (size_t i = q.size(); i-- > 0;)
    if (q[i] != 0) return static_cast<int>(i);
  return -1;
}

std::vector<mpq_class> poly_derivative(const std::vector<mpq_class>& q) {
  std::vector<mpq_class> r(q.size() > 1 ? q.size() - 1 : 1, 0);
  for (size_t i = 1; i < q.size(); ++i) r[i - 1] = q[i] * static_cast<long>(i);
  return r;
}

// Exact quotient num / den; remainder must vanish.
std::vector<mpq_class> poly_div_exact(std::vector<mpq_class> num,
                                      const std::vector<mpq_class>& den) {
  int dn = poly_degree(num), dd = poly_degree(den);
  std::vector<mpq_class> q(static_cast<size_t>(std::max(dn - dd + 1, 1)), 0);
  while (dn >= dd && dn >= 0) {
    mpq_class f = num[dn] / den[dd];
    q[dn - dd] = f;
    for (int i = 0; i <= dd; ++i) num[dn - dd + i] -= f * den[i];
    num[dn] = 0;
    dn = poly_degree(num);
  }
  if (dn >= 0) throw PrecisionError("poly_div_exact: nonzero remainder");
  return q;
}

// Sturm chain of a square-free reduction of p (same root set).
std::vector<std::vector<mpq_class>> sturm_chain(const std::vector<mpq_class>& p) {
  // -rem(p0, p1), classic Sturm sequence.
  auto neg_rem = [&](std::vector<mpq_class> num, const std::vector<mpq_class>& den) {
    int dn = poly_degree(num), dd = poly_degree(den);
    while (dn >= dd && dn >= 0) {
      mpq_class f = num[dn] / den[dd];
      for (int i = 0; i <= dd; ++i) num[dn - dd + i] -= f * den[i];
      num[dn] = 0;
      dn = poly_degree(num);
    }
    for (auto& x : num) x = -x;
    num.resize(static_cast<size_t>(std::max(dn + 1, 1)));
    return num;
  };
  std::vector<std::vector<mpq_class>> chain;
  chain.push_back(p);
  if (poly_degree(p) < 1) return chain;
  chain.push_back(poly_derivative(p));
  while (poly_degree(chain.back()) > 0) {
    auto r = neg_rem(chain[chain.size() - 2], chain.back());
    if (poly_degree(r) < 0) {
      // Multiple roots: chain.back() is gcd(p, p'); recurse on p / gcd,
      // which is square-free with the same distinct roots.
      return sturm_chain(poly_div_exact(p, chain.back()));
    }
    chain.push_back(std::move(r));
  }
  return chain;
}

int sign_variations(const std::vector<std::vector<mpq_class>>& chain, const mpq_class& x) {
  int var = 0, prev = 0;
  for (const auto& q : chain) {
    int s = poly_sign_at(q, x);
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++var;
    prev = s;
  }
  return var;
}

}  // namespace

RootBracket largest_root_bracket(const std::vector<mpq_class>& monic, const mpq_class& lo0,
                                 const mpq_class& hi0, int precision_bits) {
  auto chain = sturm_chain(monic);
  mpq_class lo = lo0, hi = hi0;
  int v_lo = sign_variations(chain, lo);
  int v_hi = sign_variations(chain, hi);
  if (v_lo - v_hi < 1)
    throw PrecisionError("largest_root_bracket: initial bracket contains no root");
  // Shrink [lo, hi] keeping at least one root in (lo, hi]; the surviving root
  // is the largest one because we always prefer the right half.
  const int cap = 4 * precision_bits + 64;
  bool met = false;
  for (int it = 0; it < cap; ++it) {
    // Terminate on relative width.
    if (lo > 0) {
      mpq_class w = hi - lo;
      mpq_class tol = lo;
      tol >>= precision_bits;
      if (w <= tol) {
        met = true;
        break;
      }
    }
    mpq_class mid = (lo + hi) / 2;
    int v_mid = sign_variations(chain, mid);
    if (v_mid - v_hi >= 1) {
      lo = mid;
      v_lo = v_mid;
    } else {
      hi = mid;
      v_hi = v_mid;
    }
  }
  return RootBracket{lo, hi, met};
}

NormEnclosure spectral_norm_enclosure(const RationalMatrix& a, int precision_bits) {
  if (a.dim() < 1 || a.dim() > 6) throw DimensionError("spectral norm supports 1 <= d <= 6");
  if (precision_bits < 1) throw ConfigError("precision_bits must be >= 1");
  RationalMatrix s = mul(a.transpose(), a, size_t{1} << 30);
  // lambda_max(s) in [max(diag), trace] for symmetric PSD s.
  mpq_class lo0 = 0, tr = 0;
  for (int i = 0; i < a.dim(); ++i) {
    lo0 = std::max(lo0, mpq_class(s.at(i, i)));
    tr += s.at(i, i);
  }
  if (tr == 0) throw SingularMatrixError("spectral norm of zero matrix");
  auto chi = characteristic_polynomial(s);
  // Nudge the lower end: lambda_max >= max diag; start strictly below it so a
  // root equal to lo0 stays inside the half-open bracket.
  mpq_class start_lo = lo0 / 2;
  RootBracket rb = largest_root_bracket(chi, start_lo, tr, precision_bits + 2);
  // Exact side conditions from the spec of the operation.
  mpq_class fro = frobenius_sq(a);
  if (rb.hi > fro) rb.hi = fro;  // lambda_max <= Frobenius^2, exact
  if (rb.lo < lo0) rb.lo = lo0;  // max diag of a^T a = max column norm^2 <= lambda_max
  mpfr_prec_t wp = static_cast<mpfr_prec_t>(precision_bits) + 64;
  NormEnclosure out;
  out.sq_lower = rb.lo;
  out.sq_upper = rb.hi;
  out.precision_bits = precision_bits;
  out.met_target = rb.met_target;
  out.value = sqrt(Interval::from_mpq(rb.lo, wp));
  Interval up = sqrt(Interval::from_mpq(rb.hi, wp));
  // Combine: [sqrt(lo).lo, sqrt(hi).hi]
  Interval v(wp);
  mpfr_set(const_cast<mpfr_ptr>(v.lo()), out.value.lo(), MPFR_RNDD);
  mpfr_set(const_cast<mpfr_ptr>(v.hi()), up.hi(), MPFR_RNDU);
  out.value = v;
  return out;
}

HeightProfile height_profile(const RationalMatrix& a, int precision_bits) {
  HeightProfile hp;
  hp.norm = spectral_norm_enclosure(a, precision_bits);
  RationalMatrix ai = inverse(a);
  hp.norm_inv = spectral_norm_enclosure(ai, precision_bits);
  hp.q = denominator_lcm(a);
  hp.q_inv = denominator_lcm(ai);
  mpfr_prec_t wp = static_cast<mpfr_prec_t>(precision_bits) + 64;
  Interval c = max(hp.norm.value.widened(wp), hp.norm_inv.value.widened(wp));
  c = max(c, Interval::from_mpz(hp.q, wp));
  c = max(c, Interval::from_mpz(hp.q_inv, wp));
  hp.height = log(c);
  return hp;
}

std::string RationalMatrix::to_json() const {
  json rows = json::array();
  for (int i = 0; i < dim_; ++i) {
    json row = json::array();
    for (int j = 0; j < dim_; ++j) row.push_back(at(i, j).get_str());
    rows.push_back(row);
  }
  return rows.dump();
}

RationalMatrix RationalMatrix::from_json(const std::string& text) {
  json rows = json::parse(text);
  if (!rows.is_array() || rows.empty()) throw ConfigError("matrix json must be a non-empty array");
  int d = static_cast<int>(rows.size());
  RationalMatrix m(d);
  for (int i = 0; i < d; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != d)
      throw ConfigError("matrix json must be square");
    for (int j = 0; j < d; ++j) {
      std::string s = rows[i][j].get<std::string>();
      mpq_class v;
      if (v.set_str(s, 10) != 0) throw ConfigError("bad rational literal: " + s);
      v.canonicalize();
      m.at(i, j) = v;
    }
  }
  return m;
}

}  // namespace latwalk
