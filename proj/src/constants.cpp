#include "latwalk/constants.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <nlohmann/json.hpp>

#include "latwalk/errors.hpp"

namespace latwalk {

using json = nlohmann::json;

Interval alpha_enclosure(int precision_bits) {
  mpfr_prec_t wp = static_cast<mpfr_prec_t>(precision_bits) + 64;
  // Tail control: sum_{k>K0} e^{-k/30} <= e^{-(K0+1)/30} / (1 - e^{-1/30}) and
  // log(1-x) >= -2x for x <= 1/2, so the omitted factors multiply the product
  // by at least exp(-2 * tail_sum). K0 chosen so the tail is below 2^-(prec+4).
  long k0 = static_cast<long>(30.0 * (0.6931471805599453 * (precision_bits + 6) + 4.0)) + 8;
  Interval prod = Interval::exact_int(1, wp);
  Interval inv30 = Interval::exact_int(1, wp) / Interval::exact_int(30, wp);
  for (long k = 2; k <= k0; ++k) {
    Interval f = Interval::exact_int(1, wp) - exp(-(Interval::exact_int(k, wp) * inv30));
    prod = prod * f;
  }
  Interval tail = exp(-(Interval::exact_int(k0 + 1, wp) * inv30)) /
                  (Interval::exact_int(1, wp) - exp(-inv30));
  Interval lo_factor = exp(Interval::exact_int(-2, wp) * tail);
  Interval out(wp);
  mpfr_mul(const_cast<mpfr_ptr>(out.lo()), prod.lo(), lo_factor.lo(), MPFR_RNDD);
  mpfr_set(const_cast<mpfr_ptr>(out.hi()), prod.hi(), MPFR_RNDU);
  return out;
}

Interval a_p_value(double p, int precision_bits) {
  if (!(p > 1)) throw ConfigError("a_p requires p > 1");
  mpfr_prec_t wp = static_cast<mpfr_prec_t>(precision_bits) + 64;
  Interval pI = Interval::from_double(p, wp);
  // Terms up to N-1 summed directly; the tail sum_{k>=N} k^-p is bracketed by
  // Euler-Maclaurin: N^(1-p)/(p-1) + N^-p/2 + p N^(-p-1)/12 + theta * r with
  // |r| = p(p+1)(p+2) N^(-p-3)/720 (f completely monotone).
  long n = static_cast<long>(std::pow(2.0, (precision_bits + 4.0) / (p + 3.0))) + 16;
  Interval sum = Interval::exact_int(0, wp);
  for (long k = 1; k < n; ++k) {
    sum = sum + pow(Interval::exact_int(k, wp), -pI);
  }
  Interval nn = Interval::exact_int(n, wp);
  Interval one = Interval::exact_int(1, wp);
  Interval tail = pow(nn, one - pI) / (pI - one) + pow(nn, -pI) / Interval::exact_int(2, wp) +
                  pI * pow(nn, -pI - one) / Interval::exact_int(12, wp);
  Interval rem = pI * (pI + one) * (pI + Interval::exact_int(2, wp)) *
                 pow(nn, -pI - Interval::exact_int(3, wp)) / Interval::exact_int(720, wp);
  Interval zeta_lo = sum + tail - rem;  // remainder theta in [-1, 1]
  Interval zeta_hi = sum + tail + rem;
  Interval z(wp);
  mpfr_set(const_cast<mpfr_ptr>(z.lo()), zeta_lo.lo(), MPFR_RNDD);
  mpfr_set(const_cast<mpfr_ptr>(z.hi()), zeta_hi.hi(), MPFR_RNDU);
  return pow(z, -(one / pI));
}

long smallest_K(const Interval& alpha) {
  if (!alpha.is_positive()) throw ConfigError("smallest_K needs alpha > 0");
  // Compare (1+2K) e^-K against alpha.lower / 2; both comparisons are made
  // certain by widening precision (the left side is irrational).
  for (mpfr_prec_t wp = 128;; wp *= 2) {
    Interval target(wp);
    mpfr_div_2si(const_cast<mpfr_ptr>(target.lo()), alpha.lo(), 1, MPFR_RNDD);
    mpfr_div_2si(const_cast<mpfr_ptr>(target.hi()), alpha.lo(), 1, MPFR_RNDU);
    auto lhs = [&](long k) {
      return Interval::exact_int(1 + 2 * k, wp) * exp(Interval::exact_int(-k, wp));
    };
    long found = -1;
    bool ambiguous = false;
    for (long k = 1; k <= 4096; ++k) {
      Interval v = lhs(k);
      if (v.certainly_le(target)) {
        found = k;
        break;
      }
      if (!v.certainly_ge(target)) {
        ambiguous = true;
        break;
      }
    }
    if (found > 0 && !ambiguous) {
      if (found == 1) return found;
      Interval prev = lhs(found - 1);
      if (prev.certainly_ge(target) && !prev.certainly_le(target)) return found;
      // fall through to widen when the K-1 check is not strict
    }
    if (wp > (mpfr_prec_t{1} << 16)) throw PrecisionError("smallest_K undecidable");
  }
}

EpsilonPipeline epsilon_pipeline(double p, int precision_bits) {
  EpsilonPipeline out;
  out.p = p;
  out.precision_bits = precision_bits;
  out.alpha = alpha_enclosure(precision_bits);
  out.a_p = a_p_value(p, precision_bits);
  out.K = smallest_K(out.alpha);
  out.epsilon_p =
      out.alpha * out.a_p / Interval::exact_int(8 * out.K, out.alpha.prec());
  if (!out.epsilon_p.is_positive()) throw PrecisionError("epsilon_p lower bound not positive");
  return out;
}

std::string EpsilonPipeline::to_json() const {
  json j;
  j["p"] = p;
  j["precision_bits"] = precision_bits;
  j["alpha"] = {mpfr_to_decimal(alpha.lo(), 24, MPFR_RNDD), mpfr_to_decimal(alpha.hi(), 24, MPFR_RNDU)};
  j["a_p"] = {mpfr_to_decimal(a_p.lo(), 24, MPFR_RNDD), mpfr_to_decimal(a_p.hi(), 24, MPFR_RNDU)};
  j["K"] = K;
  j["epsilon_p"] = {mpfr_to_decimal(epsilon_p.lo(), 24, MPFR_RNDD),
                    mpfr_to_decimal(epsilon_p.hi(), 24, MPFR_RNDU)};
  return j.dump(2);
}

MomentConstants moment_constants(const MatrixLawSpec& law, bool mode_max,
                                 std::optional<double> p_prime, int trials, uint64_t seed) {
  MomentConstants out;
  if (mode_max) {
    if (law.kappa_kind != KappaKind::FiniteTable || law.kappa.empty())
      throw ConfigError("moment mode=max requires a finite nonempty kappa table");
    double m = 0;
    for (const auto& g : law.kappa)
      m = std::max(m, height_profile(g, 64).height.hi_double());
    out.M = m;
    out.M_exact = true;
  } else if (law.kappa_kind == KappaKind::FiniteTable) {
    if (law.kappa.empty()) throw ConfigError("empty kappa table");
    double m = 0;
    for (size_t i = 0; i < law.kappa.size(); ++i)
      m += law.kappa_weights[i] * height_profile(law.kappa[i], 64).height.hi_double();
    out.M = m;
    out.M_exact = true;
  } else {
    FullSupportSampler fs(law.d);
    Rng rng(derive_seed(seed, 0));
    double s = 0, s2 = 0;
    for (int i = 0; i < trials; ++i) {
      double h = fs.sample(rng).height_upper;
      s += h;
      s2 += h * h;
    }
    out.M = s / trials;
    out.M_std_error = std::sqrt(std::max(0.0, s2 / trials - out.M * out.M) / trials);
    out.M_exact = false;
  }

  if (p_prime) {
    double pp = *p_prime;
    double p = law.scalar.p;
    if (!(pp > 0 && pp < 1 && p * pp < 1))
      throw ConfigError("M' requires 0 < p' < 1 and p*p' < 1");
    // Diagonal part: gamma = diag(2^m, 2^-m), log(||g|| ||g^-1||) = 2 m log 2
    // with m = floor(t^-p), t uniform on (0, domain_end]; the integrand is
    // piecewise constant in t, summed exactly with an integral tail bracket.
    mpfr_prec_t wp = 128;
    Interval ln2 = log2_const(wp);
    double end = law.scalar.domain_end;
    Interval endI = Interval::from_double(end, wp);
    long m_cap = 20000;
    long m0 = std::max(1L, static_cast<long>(std::floor(std::pow(end, -p))));
    Interval acc = Interval::exact_int(0, wp);
    Interval pI = Interval::from_double(p, wp);
    Interval ppI = Interval::from_double(pp, wp);
    Interval one = Interval::exact_int(1, wp);
    auto s_of = [&](long m) {  // m^{-1/p}, the left breakpoint of floor = m
      return pow(Interval::exact_int(m, wp), -(one / pI));
    };
    for (long m = m0; m <= m_cap; ++m) {
      Interval left = s_of(m + 1);
      Interval right = (m == m0) ? endI : s_of(m);
      Interval len = right - left;
      if (len.is_negative()) continue;
      Interval integrand =
          pow(Interval::exact_int(2 * m, wp) * ln2, ppI);
      acc = acc + len * integrand;
    }
    // Tail over m > m_cap: t < (m_cap+1)^{-1/p}; integrand <= (2 t^-p log2)^p'.
    Interval scut = s_of(m_cap + 1);
    Interval tail_hi = pow(Interval::exact_int(2, wp) * ln2, ppI) *
                       pow(scut, one - pI * ppI) / (one - pI * ppI);
    Interval nu(wp);
    mpfr_set(const_cast<mpfr_ptr>(nu.lo()), acc.lo(), MPFR_RNDD);
    Interval hi_sum = acc + tail_hi;
    mpfr_set(const_cast<mpfr_ptr>(nu.hi()), hi_sum.hi(), MPFR_RNDU);
    // Normalize: the seed is uniform on (0, end], density 1/end.
    nu = nu / endI;
    out.nu_part = nu;

    // Generator part: Monte Carlo of log(||g|| ||g^-1||)^p'.
    double gen_mean = 0, gen_se = 0;
    if (law.kappa_kind == KappaKind::FiniteTable) {
      for (size_t i = 0; i < law.kappa.size(); ++i) {
        auto hp = height_profile(law.kappa[i], 64);
        double lg = std::log(hp.norm.value.hi_double() * hp.norm_inv.value.hi_double());
        gen_mean += law.kappa_weights[i] * std::pow(std::max(lg, 0.0), pp);
      }
    } else {
      FullSupportSampler fs(law.d);
      Rng rng(derive_seed(seed, 1));
      double s = 0, s2 = 0;
      for (int i = 0; i < trials; ++i) {
        auto draw = fs.sample(rng);
        auto hp = height_profile(draw.matrix, 48);
        double lg = std::log(hp.norm.value.hi_double() * hp.norm_inv.value.hi_double());
        double v = std::pow(std::max(lg, 0.0), pp);
        s += v;
        s2 += v * v;
      }
      gen_mean = s / trials;
      gen_se = std::sqrt(std::max(0.0, s2 / trials - gen_mean * gen_mean) / trials);
    }
    // Mixture weights: diagonal part mix_weight, generator part 1 - mix_weight.
    out.M_prime = law.mix_weight * nu.mid_double() + (1 - law.mix_weight) * gen_mean;
    out.M_prime_std_error = (1 - law.mix_weight) * gen_se;
  }
  return out;
}

namespace {

// Smallest integer i >= low with G(i) <= 0 certainly, where G is monotone
// decreasing in i; G evaluates at a given working precision. Returns the
// integer plus verification flags.
struct IntSearch {
  mpz_class value;
  bool verified = false;
  bool minimal = false;
  bool bound_constrained = false;
};

IntSearch smallest_int_with(const std::function<Interval(const mpz_class&, mpfr_prec_t)>& G,
                            const mpz_class& low, const Interval& root_hint) {
  // Candidate window around the real relaxation, clamped to >= low.
  mpz_class lo_cand, hi_cand;
  {
    mpfr_t f;
    mpfr_init2(f, mpfr_get_prec(root_hint.lo()));
    mpfr_floor(f, root_hint.lo());
    mpfr_get_z(lo_cand.get_mpz_t(), f, MPFR_RNDN);
    mpfr_set_prec(f, mpfr_get_prec(root_hint.hi()));
    mpfr_ceil(f, root_hint.hi());
    mpfr_get_z(hi_cand.get_mpz_t(), f, MPFR_RNDN);
    mpfr_clear(f);
  }
  lo_cand -= 2;
  hi_cand += 2;
  if (lo_cand < low) lo_cand = low;
  if (hi_cand < low) hi_cand = low;

  for (mpfr_prec_t wp = 192; wp <= (mpfr_prec_t{1} << 16); wp *= 2) {
    mpz_class found = -1;
    bool ambiguous = false;
    for (mpz_class i = lo_cand; i <= hi_cand; ++i) {
      Interval g = G(i, wp);
      if (mpfr_sgn(g.hi()) <= 0) {
        found = i;
        break;
      }
      if (mpfr_sgn(g.lo()) <= 0) {
        ambiguous = true;
        break;
      }
    }
    if (ambiguous) continue;
    if (found < 0) {
      // Window missed (hint too coarse); widen the window geometrically.
      hi_cand = hi_cand * 2 + 16;
      continue;
    }
    IntSearch out;
    out.value = found;
    out.verified = true;
    if (found == low) {
      out.bound_constrained = true;
      out.minimal = true;
      return out;
    }
    Interval gprev = G(mpz_class(found - 1), wp);
    if (mpfr_sgn(gprev.lo()) > 0) {
      out.minimal = true;
      return out;
    }
    if (mpfr_sgn(gprev.hi()) <= 0) {
      // G(found-1) <= 0 certainly: the scan start was above the true minimum.
      lo_cand = low;
      continue;
    }
    // Undecided at this precision; widen.
  }
  throw PrecisionError("integer search undecidable at precision cap");
}

Interval interval_from_mpz_wp(const mpz_class& z, mpfr_prec_t wp) {
  return Interval::from_mpz(z, wp);
}

}  // namespace

SequenceTable thm13_sequences(double p, double p_prime, double M, double M_prime, double eps,
                              int j_max, bool empirical_eps, size_t digit_budget_bits) {
  if (!(p > 1)) throw ConfigError("thm13 requires p > 1");
  if (!(p_prime > 0 && p_prime < 1)) throw ConfigError("thm13 requires p' in (0,1)");
  if (!(p * p_prime < 1 + 1e-12))
    throw ConfigError("thm13 requires p * p' <= 1 (law must have finite L^p' moment)");
  if (!(eps > 0)) throw ConfigError("thm13 requires eps > 0");
  SequenceTable table;
  table.variant = SequenceVariant::Thm13;
  table.p = p;
  table.p_prime = p_prime;
  table.M = M;
  table.M_prime = M_prime;
  table.eps = eps;
  table.empirical_eps = empirical_eps;

  mpz_class i_j = 1;
  bool i_verified = true, i_minimal = true, i_bound = true;  // i_1 = 1 is the seed
  for (long j = 1; j <= j_max; ++j) {
    size_t bits_i = mpz_sizeinbase(i_j.get_mpz_t(), 2);
    if (bits_i > digit_budget_bits) {
      table.truncated = true;
      break;
    }
    mpfr_prec_t base_wp = static_cast<mpfr_prec_t>(std::max<size_t>(bits_i + 96, 192));

    // a_j: smallest integer with a^p >= (4M/eps + 2 i_j log 2) a, i.e.
    // a^(p-1) >= C_j.
    auto C_of = [&](mpfr_prec_t wp) {
      Interval c = Interval::from_double(4.0 * M, wp) / Interval::from_double(eps, wp);
      return c + Interval::exact_int(2, wp) * interval_from_mpz_wp(i_j, wp) * log2_const(wp);
    };
    auto G_a = [&](const mpz_class& a, mpfr_prec_t wp) {
      // C_j - a^(p-1) <= 0  <=>  a^(p-1) >= C_j.
      Interval av = interval_from_mpz_wp(a, wp);
      Interval apow = pow(av, Interval::from_double(p - 1.0, wp));
      return C_of(wp) - apow;
    };
    Interval croot = pow(C_of(base_wp), Interval::from_double(1.0 / (p - 1.0), base_wp));
    IntSearch a_search = smallest_int_with(G_a, mpz_class(1), croot);
    mpz_class a_j = a_search.value;

    SequenceRow row;
    row.j = j;
    row.i_j = i_j;
    row.value = a_j;
    row.value_verified = a_search.verified;
    row.value_minimal = a_search.minimal;
    row.i_verified = i_verified;
    row.i_minimal = i_minimal;
    row.i_bound_constrained = i_bound;
    table.rows.push_back(row);

    if (j == j_max) break;

    // i_{j+1}: smallest i >= i_j + 1 with
    // (1-i) log2 + log(2 a_j) + 2 a_j log1p(2^(1-i)) + (4 a_j (M'+1)/eps)^(1/p') <= 0.
    size_t bits_a = mpz_sizeinbase(a_j.get_mpz_t(), 2);
    mpfr_prec_t wp_e = static_cast<mpfr_prec_t>(
        std::max<size_t>(static_cast<size_t>(static_cast<double>(bits_a) / p_prime) + 160, 256));
    auto E_of = [&](mpfr_prec_t wp) {
      Interval x = Interval::exact_int(4, wp) * interval_from_mpz_wp(a_j, wp) *
                   Interval::from_double(M_prime + 1.0, wp) / Interval::from_double(eps, wp);
      return pow(x, Interval::from_double(1.0 / p_prime, wp));
    };
    auto G_i = [&](const mpz_class& i, mpfr_prec_t wp0) {
      mpfr_prec_t wp = std::max(wp0, wp_e);
      Interval ln2 = log2_const(wp);
      Interval g = (Interval::exact_int(1, wp) - interval_from_mpz_wp(i, wp)) * ln2 +
                   log(Interval::exact_int(2, wp) * interval_from_mpz_wp(a_j, wp)) + E_of(wp);
      // 2 a_j * log1p(2^(1-i)) term: interval [0, bound], with the direct value
      // when 2^(1-i) is representable.
      Interval small(wp);
      double log2_2a = static_cast<double>(bits_a) + 1;
      double est = log2_2a + 1.0 - mpz_get_d(i.get_mpz_t());
      if (est < -48) {
        mpfr_set_zero(const_cast<mpfr_ptr>(small.lo()), 1);
        mpfr_set_d(const_cast<mpfr_ptr>(small.hi()), 0x1p-40, MPFR_RNDU);
      } else {
        long ii = mpz_get_si(i.get_mpz_t());
        Interval x(wp);
        mpfr_set_ui_2exp(const_cast<mpfr_ptr>(x.lo()), 1, 1 - ii, MPFR_RNDD);
        mpfr_set_ui_2exp(const_cast<mpfr_ptr>(x.hi()), 1, 1 - ii, MPFR_RNDU);
        small = Interval::exact_int(2, wp) * interval_from_mpz_wp(a_j, wp) * log1p(x);
      }
      return g + small;
    };
    Interval root_hint =
        (log(Interval::exact_int(2, wp_e) * interval_from_mpz_wp(a_j, wp_e)) + E_of(wp_e)) /
            log2_const(wp_e) +
        Interval::exact_int(1, wp_e);
    IntSearch i_search = smallest_int_with(G_i, mpz_class(i_j + 1), root_hint);
    i_j = i_search.value;
    i_verified = i_search.verified;
    i_minimal = i_search.minimal;
    i_bound = i_search.bound_constrained;
  }
  return table;
}

SequenceTable thm14_sequences(double M, int j_max, size_t digit_budget_bits) {
  if (!(M >= 0)) throw ConfigError("thm14 requires M >= 0");
  SequenceTable table;
  table.variant = SequenceVariant::Thm14;
  table.M = M;

  mpz_class l_j = 1, i_j = 1;
  {
    SequenceRow row;  // l_1 = i_1 = 1 is given, not searched
    row.j = 1;
    row.i_j = 1;
    row.value = 1;
    row.value_verified = row.value_minimal = true;
    row.i_verified = row.i_minimal = row.i_bound_constrained = true;
    table.rows.push_back(row);
  }
  for (long j = 1; j < j_max; ++j) {
    size_t bits = std::max(mpz_sizeinbase(i_j.get_mpz_t(), 2), mpz_sizeinbase(l_j.get_mpz_t(), 2));
    if (bits > digit_budget_bits) {
      table.truncated = true;
      break;
    }
    mpfr_prec_t wp = static_cast<mpfr_prec_t>(std::max<size_t>(bits + 96, 192));

    // l_{j+1} = ceil(j (i_j log2 + l_j log2 + 2M)).
    mpz_class l_next;
    for (mpfr_prec_t w = wp;; w *= 2) {
      Interval arg = Interval::exact_int(j, w) *
                     ((interval_from_mpz_wp(i_j, w) + interval_from_mpz_wp(l_j, w)) * log2_const(w) +
                      Interval::from_double(2.0 * M, w));
      mpz_class clo, chi;
      mpfr_t f;
      mpfr_init2(f, w);
      mpfr_ceil(f, arg.lo());
      mpfr_get_z(clo.get_mpz_t(), f, MPFR_RNDN);
      mpfr_ceil(f, arg.hi());
      mpfr_get_z(chi.get_mpz_t(), f, MPFR_RNDN);
      mpfr_clear(f);
      if (clo == chi) {
        l_next = clo;
        break;
      }
      if (w > (mpfr_prec_t{1} << 16)) throw PrecisionError("thm14 ceiling undecidable");
    }

    // i_{j+1} >= max(l_j, i_j + 1), smallest with
    // (1-i) log2 + log j + j log1p(2^(1-i)) + log 2 + (2M + l_{j+1} log2 + 1) j <= 0.
    size_t bits_l = mpz_sizeinbase(l_next.get_mpz_t(), 2);
    mpfr_prec_t wp_e = static_cast<mpfr_prec_t>(std::max<size_t>(bits_l + 160, 256));
    auto E_of = [&](mpfr_prec_t w) {
      return (Interval::from_double(2.0 * M, w) + interval_from_mpz_wp(l_next, w) * log2_const(w) +
              Interval::exact_int(1, w)) *
             Interval::exact_int(j, w);
    };
    auto G_i = [&](const mpz_class& i, mpfr_prec_t w0) {
      mpfr_prec_t w = std::max(w0, wp_e);
      Interval ln2 = log2_const(w);
      Interval g = (Interval::exact_int(1, w) - interval_from_mpz_wp(i, w)) * ln2 +
                   log(Interval::exact_int(j, w)) + ln2 + E_of(w);
      Interval small(w);
      double est = std::log2(static_cast<double>(j)) + 1.0 - mpz_get_d(i.get_mpz_t());
      if (est < -48) {
        mpfr_set_zero(const_cast<mpfr_ptr>(small.lo()), 1);
        mpfr_set_d(const_cast<mpfr_ptr>(small.hi()), 0x1p-40, MPFR_RNDU);
      } else {
        long ii = mpz_get_si(i.get_mpz_t());
        Interval x(w);
        mpfr_set_ui_2exp(const_cast<mpfr_ptr>(x.lo()), 1, 1 - ii, MPFR_RNDD);
        mpfr_set_ui_2exp(const_cast<mpfr_ptr>(x.hi()), 1, 1 - ii, MPFR_RNDU);
        small = Interval::exact_int(j, w) * log1p(x);
      }
      return g + small;
    };
    mpz_class low = std::max(l_j, mpz_class(i_j + 1));
    Interval root_hint = (log(Interval::exact_int(j, wp_e)) + log2_const(wp_e) + E_of(wp_e)) /
                             log2_const(wp_e) +
                         Interval::exact_int(1, wp_e);
    IntSearch i_search = smallest_int_with(G_i, low, root_hint);

    l_j = l_next;
    i_j = i_search.value;
    if (l_j > i_j) throw PrecisionError("thm14 invariant l_j <= i_j violated");

    SequenceRow row;
    row.j = j + 1;
    row.i_j = i_j;
    row.value = l_j;
    row.value_verified = row.value_minimal = true;  // l is a verified ceiling
    row.i_verified = i_search.verified;
    row.i_minimal = i_search.minimal;
    row.i_bound_constrained = i_search.bound_constrained;
    table.rows.push_back(row);
  }
  return table;
}

std::string SequenceTable::to_json() const {
  json j;
  j["variant"] = variant == SequenceVariant::Thm13 ? "thm13" : "thm14";
  if (variant == SequenceVariant::Thm13) {
    j["p"] = p;
    j["p_prime"] = p_prime;
    j["M"] = M;
    j["M_prime"] = M_prime;
    j["eps"] = eps;
    j["mode"] = empirical_eps ? "empirical-eps" : "paper-faithful";
  } else {
    j["M"] = M;
  }
  j["truncated"] = truncated;
  json rws = json::array();
  for (const auto& r : rows) {
    json rj;
    rj["j"] = r.j;
    rj["i"] = r.i_j.get_str();
    rj[variant == SequenceVariant::Thm13 ? "a" : "l"] = r.value.get_str();
    rj["value_verified"] = r.value_verified;
    rj["value_minimal"] = r.value_minimal;
    rj["i_verified"] = r.i_verified;
    rj["i_minimal"] = r.i_minimal;
    rj["i_bound_constrained"] = r.i_bound_constrained;
    rws.push_back(rj);
  }
  j["rows"] = rws;
  return j.dump(2);
}

}  // namespace latwalk
