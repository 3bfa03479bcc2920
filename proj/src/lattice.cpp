#include "latwalk/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <nlohmann/json.hpp>

#include "latwalk/errors.hpp"

namespace latwalk {

using json = nlohmann::json;

RationalMatrix gram(const RationalMatrix& basis) {
  return mul(basis.transpose(), basis, size_t{1} << 30);
}

namespace {

mpz_class round_to_nearest(const mpq_class& q) {
  // Round to nearest, ties toward zero. The tie rule matters: reduction steps
  // with |mu| = 1/2 must produce r = 0 or Lagrange-Gauss oscillates.
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  mpq_class frac2 = 2 * (q - mpq_class(fl));  // in [0, 2)
  if (frac2 < 1) return fl;
  if (frac2 > 1) return fl + 1;
  return (q > 0) ? fl : fl + 1;  // tie: smaller absolute value
}

struct ReducedState {
  RationalMatrix g;              // Gram form in the current (reduced) coordinates
  std::vector<mpz_class> u;      // d x d transform, column-major: reduced_j = sum_i u[i,j] e_i
  int d;

  mpz_class& tu(int i, int j) { return u[static_cast<size_t>(i) * d + j]; }
  const mpz_class& tu(int i, int j) const { return u[static_cast<size_t>(i) * d + j]; }

  explicit ReducedState(const RationalMatrix& gram0)
      : g(gram0), u(static_cast<size_t>(gram0.dim()) * gram0.dim(), 0), d(gram0.dim()) {
    for (int i = 0; i < d; ++i) tu(i, i) = 1;
  }

  // col_k -= r * col_j, applied to the quadratic form and the transform.
  void shear_col(int k, int j, const mpz_class& r) {
    if (r == 0) return;
    mpq_class rq(r);
    // G' = E^T G E with E = I - r e_j e_k^T acting on column k.
    mpq_class gkk = g.at(k, k) - 2 * rq * g.at(k, j) + rq * rq * g.at(j, j);
    for (int i = 0; i < d; ++i) {
      if (i == k) continue;
      g.at(k, i) -= rq * g.at(j, i);
      g.at(i, k) = g.at(k, i);
    }
    g.at(k, k) = gkk;
    for (int i = 0; i < d; ++i) tu(i, k) -= r * tu(i, j);
  }

  void swap_cols(int a, int b) {
    if (a == b) return;
    for (int i = 0; i < d; ++i) {
      std::swap(g.at(i, a), g.at(i, b));
    }
    for (int j = 0; j < d; ++j) {
      std::swap(g.at(a, j), g.at(b, j));
    }
    for (int i = 0; i < d; ++i) std::swap(tu(i, a), tu(i, b));
  }
};

// Gram-Schmidt data from a quadratic form: mu (strict lower triangle) and the
// squared lengths of the orthogonalized vectors.
struct GsData {
  std::vector<std::vector<mpq_class>> mu;
  std::vector<mpq_class> bs;
};

GsData gram_schmidt(const RationalMatrix& g) {
  int d = g.dim();
  GsData out;
  out.mu.assign(d, std::vector<mpq_class>(d, 0));
  out.bs.assign(d, 0);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < i; ++j) {
      mpq_class v = g.at(i, j);
      for (int k = 0; k < j; ++k) v -= out.mu[i][k] * out.mu[j][k] * out.bs[k];
      if (out.bs[j] == 0) throw SingularMatrixError("gram_schmidt: dependent basis");
      out.mu[i][j] = v / out.bs[j];
    }
    mpq_class n = g.at(i, i);
    for (int k = 0; k < i; ++k) n -= out.mu[i][k] * out.mu[i][k] * out.bs[k];
    out.bs[i] = n;
    if (n <= 0) throw SingularMatrixError("gram_schmidt: form not positive definite");
  }
  return out;
}

// Exact Lagrange-Gauss reduction for d = 2 (on the form).
void gauss_reduce(ReducedState& st) {
  while (true) {
    if (st.g.at(0, 0) > st.g.at(1, 1)) st.swap_cols(0, 1);
    mpq_class mu = mpq_class(st.g.at(1, 0)) / st.g.at(0, 0);
    mpz_class r = round_to_nearest(mu);
    if (r == 0) return;
    st.shear_col(1, 0, r);
  }
}

// Exact LLL with reduction parameter 3/4 (on the form).
void lll_reduce(ReducedState& st) {
  const mpq_class delta(3, 4);
  int d = st.d;
  int k = 1;
  GsData gs = gram_schmidt(st.g);
  while (k < d) {
    // Size-reduce column k.
    for (int j = k - 1; j >= 0; --j) {
      mpz_class r = round_to_nearest(gs.mu[k][j]);
      if (r != 0) {
        st.shear_col(k, j, r);
        gs = gram_schmidt(st.g);
      }
    }
    // Lovasz condition.
    mpq_class lhs = gs.bs[k];
    mpq_class rhs = (delta - gs.mu[k][k - 1] * gs.mu[k][k - 1]) * gs.bs[k - 1];
    if (lhs >= rhs) {
      ++k;
    } else {
      st.swap_cols(k, k - 1);
      gs = gram_schmidt(st.g);
      k = std::max(k - 1, 1);
    }
  }
}

// Complete enumeration of all nonzero y with y^T G y <= radius (shrinking the
// radius as shorter vectors appear); returns the minimum and all attaining y.
struct EnumResult {
  mpq_class best;
  std::vector<std::vector<mpz_class>> argmins;
};

EnumResult enumerate_min(const RationalMatrix& g, mpq_class radius) {
  int d = g.dim();
  GsData gs = gram_schmidt(g);
  EnumResult out;
  out.best = radius;
  std::vector<mpz_class> y(static_cast<size_t>(d), 0);
  std::vector<mpq_class> center(static_cast<size_t>(d), 0);

  // Depth-first over levels d-1 .. 0; at each level scan integers outward
  // from the center until the partial quadratic form exceeds the radius.
  // The explicit return type matters: gmpxx expression templates must not
  // escape the lambda referencing the local t.
  auto level_value = [&](int i, const mpz_class& yi, const mpq_class& c,
                         const mpq_class& rest) -> mpq_class {
    mpq_class t = mpq_class(yi) - c;
    return rest + gs.bs[i] * t * t;
  };

  std::function<void(int, mpq_class)> descend = [&](int i, mpq_class rest) {
    // Center c_i = -sum_{j>i} mu[j][i] y_j.
    mpq_class c = 0;
    for (int j = i + 1; j < d; ++j) c -= gs.mu[j][i] * mpq_class(y[j]);
    mpz_class base = round_to_nearest(c);
    // Scan outward: base, base+1, base-1, base+2, ...
    for (int dir = 0; dir < 2; ++dir) {
      for (long step = (dir == 0 ? 0 : 1);; ++step) {
        mpz_class yi = (dir == 0) ? mpz_class(base + step) : mpz_class(base - step);
        mpq_class v = level_value(i, yi, c, rest);
        if (v > out.best) {
          if (step == 0 && dir == 0) break;  // even the center fails
          break;
        }
        y[i] = yi;
        if (i == 0) {
          bool zero = true;
          for (const auto& q : y)
            if (q != 0) {
              zero = false;
              break;
            }
          if (!zero) {
            if (v < out.best) {
              out.best = v;
              out.argmins.clear();
            }
            if (v == out.best) out.argmins.push_back(y);
          }
        } else {
          descend(i - 1, v);
        }
      }
    }
    y[i] = 0;
  };

  descend(d - 1, mpq_class(0));
  return out;
}

std::vector<mpz_class> apply_transform(const ReducedState& st, const std::vector<mpz_class>& y) {
  std::vector<mpz_class> x(static_cast<size_t>(st.d), 0);
  for (int i = 0; i < st.d; ++i)
    for (int j = 0; j < st.d; ++j) x[i] += st.tu(i, j) * y[j];
  return x;
}

void sign_normalize(std::vector<mpz_class>& x) {
  for (const auto& v : x) {
    if (v > 0) return;
    if (v < 0) {
      for (auto& w : x) w = -w;
      return;
    }
  }
}

Interval half_neg_log(const mpq_class& q, mpfr_prec_t prec) {
  Interval l = log_of_mpq(q, prec);
  Interval r = -l;
  Interval out(prec);
  mpfr_div_2si(const_cast<mpfr_ptr>(out.lo()), r.lo(), 1, MPFR_RNDD);
  mpfr_div_2si(const_cast<mpfr_ptr>(out.hi()), r.hi(), 1, MPFR_RNDU);
  return out;
}

}  // namespace

SystoleResult systole_sq(const LatticeBasis& b, size_t bit_budget, int precision_bits) {
  int d = b.basis.dim();
  if (d < 2 || d > 6) throw DimensionError("systole_sq supports 2 <= d <= 6");
  b.basis.check_budget(bit_budget);

  ReducedState st(gram(b.basis));
  if (d == 2)
    gauss_reduce(st);
  else
    lll_reduce(st);

  // Initial radius: shortest reduced basis vector.
  mpq_class radius = st.g.at(0, 0);
  for (int i = 1; i < d; ++i) radius = std::min(radius, mpq_class(st.g.at(i, i)));

  EnumResult er = enumerate_min(st.g, radius);

  // Map argmins back to original coefficients and tie-break: sign-normalize
  // (first nonzero coordinate positive), then take the least witness comparing
  // coordinates from the last down, so that e_1 precedes e_2 ... precedes e_d.
  auto colex_less = [](const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) {
    for (size_t i = a.size(); i-- > 0;) {
      if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
  };
  std::vector<mpz_class> best_x;
  for (const auto& yv : er.argmins) {
    auto x = apply_transform(st, yv);
    sign_normalize(x);
    if (best_x.empty() || colex_less(x, best_x)) best_x = x;
  }

  SystoleResult out;
  out.delta_sq = er.best;
  out.witness = best_x;
  out.neg_log_delta = half_neg_log(er.best, static_cast<mpfr_prec_t>(precision_bits) + 64);
  return out;
}

mpq_class brute_force_systole_sq(const LatticeBasis& b, long coeff_radius) {
  if (coeff_radius < 1) throw ConfigError("brute force radius must be >= 1");
  int d = b.basis.dim();
  RationalMatrix g = gram(b.basis);
  std::vector<mpz_class> x(static_cast<size_t>(d), 0);
  mpq_class best = 0;
  bool have = false;
  // Plain box scan on the quadratic form; first nonzero coordinate positive.
  std::function<void(int, bool)> rec = [&](int i, bool leading_zero) {
    if (i == d) {
      if (leading_zero) return;
      mpq_class v = 0;
      for (int r = 0; r < d; ++r) {
        if (x[r] == 0) continue;
        for (int c = 0; c < d; ++c) {
          if (x[c] == 0) continue;
          v += g.at(r, c) * mpq_class(x[r] * x[c]);
        }
      }
      if (!have || v < best) {
        best = v;
        have = true;
      }
      return;
    }
    long lo = leading_zero ? 0 : -coeff_radius;
    for (long t = lo; t <= coeff_radius; ++t) {
      x[i] = t;
      rec(i + 1, leading_zero && t == 0);
    }
    x[i] = 0;
  };
  rec(0, true);
  return best;
}

long certified_enum_radius(const LatticeBasis& b) {
  NormEnclosure inv_norm = spectral_norm_enclosure(inverse(b.basis), 32);
  RationalMatrix g = gram(b.basis);
  mpq_class min_col = g.at(0, 0);
  for (int i = 1; i < b.basis.dim(); ++i) min_col = std::min(min_col, mpq_class(g.at(i, i)));
  // ||x||_inf <= ||B^-1|| * delta <= ||B^-1|| * min ||b_i||.
  Interval bound = sqrt(Interval::from_mpq(inv_norm.sq_upper, 96) * Interval::from_mpq(min_col, 96));
  double r = bound.hi_double();
  if (!(r < 1e12)) throw BudgetError("certified enumeration radius too large");
  return static_cast<long>(std::ceil(r)) + 1;
}

bool in_mahler_compact(const LatticeBasis& b, double B) {
  if (B < 0) throw ConfigError("Mahler bound must be >= 0");
  SystoleResult s = systole_sq(b);
  // -log delta <= B  <=>  delta_sq >= exp(-2B).
  Interval x = Interval::from_double(-2.0 * B, 64);
  int cmp = compare_mpq_exp(s.delta_sq, x);
  return cmp >= 0;  // undecided-at-cap counts as inside (closed-set convention)
}

std::string systole_to_json(const SystoleResult& r) {
  json j;
  j["delta_sq"] = r.delta_sq.get_str();
  json w = json::array();
  for (const auto& v : r.witness) w.push_back(v.get_str());
  j["witness"] = w;
  j["neg_log_delta"] = mpfr_to_decimal(r.neg_log_delta.lo(), 20, MPFR_RNDD);
  return j.dump();
}

}  // namespace latwalk
