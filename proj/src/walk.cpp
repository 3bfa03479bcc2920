#include "latwalk/walk.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "latwalk/errors.hpp"

namespace latwalk {

namespace {

// Exponent i of the lowest-terms denominator 2^i of a dyadic rational.
long dyadic_denominator_exp(const mpq_class& t) {
  if (t == 0) return 0;
  return static_cast<long>(mpz_sizeinbase(t.get_den().get_mpz_t(), 2)) - 1;
}

// Interval height of one realized-or-not step factor at working precision.
struct ExactFactorAppender {
  const MatrixLawSpec& law;
  mpfr_prec_t wp;
  std::map<long, Interval> generator_heights;

  Interval generator_height(long idx) {
    auto it = generator_heights.find(idx);
    if (it != generator_heights.end()) return it->second;
    RationalMatrix g = (law.kappa_kind == KappaKind::FiniteTable)
                           ? law.kappa.at(static_cast<size_t>(idx))
                           : elementary_word(law.d, idx);
    Interval h = height_profile(g, static_cast<int>(wp) - 32).height;
    generator_heights.emplace(idx, h);
    return h;
  }

  void append(const StepDescriptor& s, std::vector<Interval>& hs, std::vector<uint8_t>& diag) {
    long i = dyadic_denominator_exp(s.shear_t);
    if (i > 0) {
      // H(N_t) = i log 2 exactly for dyadic t with denominator 2^i, i >= 1.
      hs.push_back(Interval::exact_int(i, wp) * log2_const(wp));
      diag.push_back(0);
    }
    if (s.core.kind == StepCore::Kind::DiagExponent) {
      if (!s.core.exponent.exact)
        throw BudgetError("exact walk needs materialized diagonal exponents");
      hs.push_back(Interval::from_mpz(*s.core.exponent.exact, wp) * log2_const(wp));
      diag.push_back(1);
    } else {
      hs.push_back(generator_height(s.core.generator_index));
      diag.push_back(0);
    }
  }
};

std::optional<Certificate> certificate_from_factors(const std::vector<Interval>& hs,
                                                    const std::vector<uint8_t>& diag,
                                                    size_t factor_end, long step) {
  // Pick the diagonal factor with the largest height lower bound.
  size_t best = hs.size();
  for (size_t i = 0; i < factor_end && i < hs.size(); ++i) {
    if (!diag[i]) continue;
    if (best == hs.size() || mpfr_cmp(hs[i].lo(), hs[best].lo()) > 0) best = i;
  }
  if (best == hs.size()) return std::nullopt;
  mpfr_prec_t wp = hs[best].prec();
  mpfr_t rest, v;
  mpfr_init2(rest, wp);
  mpfr_init2(v, wp);
  mpfr_set_zero(rest, 1);
  for (size_t i = 0; i < factor_end && i < hs.size(); ++i) {
    if (i == best) continue;
    mpfr_add(rest, rest, hs[i].hi(), MPFR_RNDU);
  }
  mpfr_sub(v, hs[best].lo(), rest, MPFR_RNDD);
  Certificate c;
  c.kind = Certificate::Kind::SystoleLower;
  c.value = mpfr_get_d(v, MPFR_RNDD);
  c.valid_at = step;
  mpfr_clear(rest);
  mpfr_clear(v);
  return c;
}

}  // namespace

std::vector<StepDescriptor> sample_steps(const MatrixLawSpec& law, long n, Rng& rng,
                                         size_t materialize_bit_cap,
                                         FullSupportSampler* full_support) {
  law.validate();
  std::vector<StepDescriptor> steps;
  steps.reserve(static_cast<size_t>(n));
  for (long k = 0; k < n; ++k)
    steps.push_back(sample_step(law, rng, materialize_bit_cap, full_support));
  return steps;
}

StepDescriptor truncate_step_depth(const StepDescriptor& s, const MatrixLawSpec& law,
                                   size_t depth) {
  StepDescriptor out = s;
  depth = std::min(depth, s.seed_bits.size());
  DyadicAddress addr;
  addr.indices.assign(law.shear_indices.begin(),
                      law.shear_indices.begin() + static_cast<long>(depth));
  addr.bits.assign(s.seed_bits.begin(), s.seed_bits.begin() + static_cast<long>(depth));
  out.shear_t = addr.value();
  return out;
}

WalkTrace run_exact_walk_steps(const MatrixLawSpec& law, const std::vector<StepDescriptor>& steps,
                               const LatticeBasis& base, const ExactWalkOptions& opt) {
  WalkTrace t;
  t.base = base;
  ExactFactorAppender heights{law, static_cast<mpfr_prec_t>(opt.precision_bits) + 64, {}};

  // A non-trivial base contributes its own height as the last product factor.
  bool base_is_identity = (base.basis == RationalMatrix::identity(law.d));
  if (!base_is_identity) {
    t.factor_heights.push_back(height_profile(base.basis, opt.precision_bits).height);
    t.factor_diag.push_back(0);
  }

  RationalMatrix chain = RationalMatrix::identity(law.d);
  RationalMatrix right = base.basis;
  for (size_t k = 0; k < steps.size(); ++k) {
    const StepDescriptor& s = steps[k];
    try {
      // Everything throwable happens on temporaries; commit only afterwards.
      RationalMatrix g = realize_step_matrix(s, law, opt.bit_budget);
      RationalMatrix new_chain = mul(chain, g, opt.bit_budget);
      RationalMatrix lattice = mul(new_chain, base.basis, opt.bit_budget);
      SystoleResult sys = systole_sq(LatticeBasis{lattice}, opt.bit_budget, opt.precision_bits);
      RationalMatrix new_right;
      SystoleResult sys_right;
      if (opt.right_products) {
        new_right = mul(g, right, opt.bit_budget);
        sys_right = systole_sq(LatticeBasis{new_right}, opt.bit_budget, opt.precision_bits);
      }
      chain = std::move(new_chain);
      t.steps.push_back(s);
      heights.append(s, t.factor_heights, t.factor_diag);
      t.step_factor_end.push_back(t.factor_heights.size());
      t.left_products.push_back(std::move(lattice));
      t.systoles.push_back(std::move(sys));
      if (opt.right_products) {
        right = new_right;
        t.right_products.push_back(std::move(new_right));
        t.systoles_right.push_back(std::move(sys_right));
      }
    } catch (const BudgetError&) {
      t.truncated = true;
      break;
    }
  }
  return t;
}

WalkTrace run_exact_walk(const MatrixLawSpec& law, long n, const LatticeBasis& base, Rng& rng,
                         const ExactWalkOptions& opt) {
  auto steps = sample_steps(law, n, rng, opt.materialize_bit_cap, opt.full_support);
  return run_exact_walk_steps(law, steps, base, opt);
}

LedgerTrace run_ledger_walk(const MatrixLawSpec& law, long n, Rng& rng,
                            FullSupportSampler* full_support) {
  law.validate();
  LedgerTrace t;
  t.step_log_h_hi.reserve(static_cast<size_t>(n));
  const double log_ln2 = std::log(std::log(2.0));

  // Generator heights (upper, as doubles) for the finite table.
  std::vector<double> table_h;
  if (law.kappa_kind == KappaKind::FiniteTable) {
    table_h.reserve(law.kappa.size());
    for (const auto& g : law.kappa)
      table_h.push_back(height_profile(g, 48).height.hi_double());
  }

  LogReal sum_hi = LogReal::zero();
  LogReal best_cand = LogReal::zero();
  bool has_diag = false;

  for (long k = 1; k <= n; ++k) {
    StepDescriptor s = sample_step(law, rng, 64, full_support);
    if (s.core.kind == StepCore::Kind::DiagExponent && s.core.exponent.exact &&
        mpz_sizeinbase(s.core.exponent.exact->get_mpz_t(), 2) > 64)
      ++t.materialized_bigints;

    LogReal step_h = LogReal::zero();
    bool diag = false;

    long i = dyadic_denominator_exp(s.shear_t);
    if (i > 0) {
      double lg = std::log(static_cast<double>(i)) + log_ln2;  // log(i * log 2)
      LogReal h = LogReal::from_log(ulp_up(lg));
      sum_hi = LogReal::from_log(ulp_up(logadd(sum_hi, h).lg));
      step_h = logadd(step_h, h);
    }
    if (s.core.kind == StepCore::Kind::DiagExponent) {
      diag = true;
      double lo = ulp_down(ulp_down(s.core.exponent.log_lower() + log_ln2));
      double hi = ulp_up(ulp_up(s.core.exponent.log_upper() + log_ln2));
      LogReal h_lo = LogReal::from_log(lo), h_hi = LogReal::from_log(hi);
      sum_hi = LogReal::from_log(ulp_up(logadd(sum_hi, h_hi).lg));
      step_h = logadd(step_h, h_hi);
      LogReal cand = LogReal::from_log(ulp_down(logadd(h_lo, h_hi).lg));
      if (!has_diag || cand.lg > best_cand.lg) best_cand = cand;
      has_diag = true;
    } else {
      double h = (law.kappa_kind == KappaKind::FiniteTable)
                     ? table_h[static_cast<size_t>(s.core.generator_index)]
                     : full_support->height_upper(s.core.generator_index);
      if (h > 0) {
        LogReal hh = LogReal::from_log(ulp_up(std::log(h)));
        sum_hi = LogReal::from_log(ulp_up(logadd(sum_hi, hh).lg));
        step_h = logadd(step_h, hh);
      }
    }

    t.step_log_h_hi.push_back(step_h.lg);
    t.diag_flags.push_back(diag ? 1 : 0);
    t.certificate_defined.push_back(has_diag ? 1 : 0);
    t.certificate_series.push_back(has_diag ? SignedLog::diff(best_cand, sum_hi) : SignedLog{});
  }
  t.running_max = best_cand;
  t.running_sum = sum_hi;
  return t;
}

std::optional<Certificate> systole_certificate(const WalkTrace& t, long upto_step) {
  if (t.steps.empty()) return std::nullopt;
  size_t step = (upto_step < 0) ? t.steps.size() : static_cast<size_t>(upto_step);
  step = std::min(step, t.step_factor_end.size());
  if (step == 0) return std::nullopt;
  // All factors of steps <= step, plus the base factor(s) stored up front.
  return certificate_from_factors(t.factor_heights, t.factor_diag, t.step_factor_end[step - 1],
                                  static_cast<long>(step));
}

std::optional<Certificate> systole_certificate(const LedgerTrace& t, long upto_step) {
  if (t.certificate_series.empty()) return std::nullopt;
  size_t step = (upto_step < 0) ? t.certificate_series.size() : static_cast<size_t>(upto_step);
  step = std::min(step, t.certificate_series.size());
  if (step == 0 || !t.certificate_defined[step - 1]) return std::nullopt;
  Certificate c;
  c.kind = Certificate::Kind::SystoleLower;
  c.value = t.certificate_series[step - 1].to_double();  // may be +-inf in extreme tails
  c.valid_at = static_cast<long>(step);
  return c;
}

namespace {

Interval norms_product(const std::vector<RationalMatrix>& steps, bool with_inverse,
                       int precision_bits) {
  mpfr_prec_t wp = static_cast<mpfr_prec_t>(precision_bits) + 64;
  Interval prod = Interval::exact_int(1, wp);
  for (const auto& g : steps) {
    prod = prod * spectral_norm_enclosure(g, precision_bits).value.widened(wp);
    if (with_inverse)
      prod = prod * spectral_norm_enclosure(inverse(g), precision_bits).value.widened(wp);
  }
  return prod;
}

Interval tau_n_factor(size_t n, double tau, mpfr_prec_t wp) {
  Interval tauI = Interval::from_double(tau, wp);
  Interval nf = Interval::exact_int(static_cast<long>(n), wp);
  return tauI * nf * pow(Interval::exact_int(1, wp) + tauI, nf);
}

}  // namespace

double perturbation_prod_bound(const std::vector<RationalMatrix>& steps, double tau,
                               int precision_bits) {
  if (tau < 0) throw ConfigError("tau must be >= 0");
  if (tau == 0 || steps.empty()) return 0.0;
  mpfr_prec_t wp = static_cast<mpfr_prec_t>(precision_bits) + 64;
  Interval b = tau_n_factor(steps.size(), tau, wp) * norms_product(steps, false, precision_bits);
  return b.hi_double();
}

double perturbation_bound(const std::vector<RationalMatrix>& steps, double tau,
                          int precision_bits) {
  if (tau < 0) throw ConfigError("tau must be >= 0");
  if (tau == 0 || steps.empty()) return 1.0;
  mpfr_prec_t wp = static_cast<mpfr_prec_t>(precision_bits) + 64;
  Interval b = Interval::exact_int(1, wp) +
               tau_n_factor(steps.size(), tau, wp) * norms_product(steps, true, precision_bits);
  return b.hi_double();
}

double measured_tau(const std::vector<RationalMatrix>& perturbed,
                    const std::vector<RationalMatrix>& original, int precision_bits) {
  if (perturbed.size() != original.size()) throw DimensionError("measured_tau: size mismatch");
  double tau = 0;
  for (size_t k = 0; k < original.size(); ++k) {
    RationalMatrix diff(original[k].dim());
    bool zero = true;
    for (int i = 0; i < diff.dim(); ++i)
      for (int j = 0; j < diff.dim(); ++j) {
        diff.at(i, j) = perturbed[k].at(i, j) - original[k].at(i, j);
        if (diff.at(i, j) != 0) zero = false;
      }
    if (zero) continue;
    Interval num = spectral_norm_enclosure(diff, precision_bits).value;
    Interval den = spectral_norm_enclosure(original[k], precision_bits).value;
    mpfr_t q;
    mpfr_init2(q, num.prec());
    mpfr_div(q, num.hi(), den.lo(), MPFR_RNDU);
    tau = std::max(tau, mpfr_get_d(q, MPFR_RNDU));
    mpfr_clear(q);
  }
  return tau;
}

ShearWalkOutcome run_walk_from_shear(const DyadicAddress& base_address, size_t depth,
                                     const MatrixLawSpec& law,
                                     const std::vector<StepDescriptor>& steps,
                                     const std::vector<mpz_class>& l_table, double M,
                                     const ExactWalkOptions& opt) {
  mpq_class t0 = base_address.value(depth);
  LatticeBasis base{RationalMatrix::shear(law.d, t0)};
  ShearWalkOutcome out;
  out.trace = run_exact_walk_steps(law, steps, base, opt);

  // Side conditions per step: record at least n^2, reached exactly once, and
  // generator heights summing to at most 2 M n.
  long max_j = 0;
  int max_count = 0;
  double gen_height_sum_hi = 0;

  for (size_t k = 0; k < out.trace.steps.size(); ++k) {
    const StepDescriptor& s = out.trace.steps[k];
    long j = (s.core.kind == StepCore::Kind::DiagExponent) ? std::max(s.core.driver_j, 0L) : 0;
    if (j > max_j) {
      max_j = j;
      max_count = 1;
    } else if (j == max_j && j > 0) {
      ++max_count;
    }
    if (s.core.kind == StepCore::Kind::Generator) {
      // The core is the last factor recorded for this step.
      size_t core_idx = out.trace.step_factor_end[k] - 1;
      gen_height_sum_hi +=
          std::max(0.0, mpfr_get_d(out.trace.factor_heights[core_idx].hi(), MPFR_RNDU));
    }
    long n = static_cast<long>(k) + 1;
    if (n < 2 || max_j < n * n || max_count != 1) continue;
    if (!(gen_height_sum_hi <= 2.0 * M * static_cast<double>(n))) continue;
    if (max_j > static_cast<long>(l_table.size())) continue;  // outside the toy table

    ShearRecordCheck rc;
    rc.step = n;
    rc.record_j = max_j;
    const mpz_class& l = l_table[static_cast<size_t>(max_j - 1)];
    Interval thr = Interval::from_mpz(l, 96) / Interval::exact_int(3, 96);
    rc.threshold = thr.hi_double();
    auto cert = systole_certificate(out.trace, n);
    if (!cert) continue;
    rc.cert = *cert;
    rc.cert.kind = Certificate::Kind::RecordEscape;
    rc.cert_meets = (rc.cert.value >= rc.threshold);
    // exact -log delta >= l/3  <=>  delta_sq <= exp(-2l/3).
    mpq_class expo(-2 * l, 3);
    expo.canonicalize();
    Interval x = Interval::from_mpq(expo, 160);
    int cmp = compare_mpq_exp(out.trace.systoles[k].delta_sq, x);
    rc.exact_meets = (cmp < 0);
    out.records.push_back(rc);
  }
  return out;
}

std::string walk_trace_csv(const WalkTrace& t) {
  std::ostringstream os;
  os << "step,core,exponent_or_generator,H_upper,log_H_upper,cert,neg_log_delta\n";
  for (size_t k = 0; k < t.steps.size(); ++k) {
    const StepDescriptor& s = t.steps[k];
    os << (k + 1) << ",";
    double sum_h = 0;  // exact-engine heights always fit a double
    size_t begin = (k == 0) ? 0 : t.step_factor_end[k - 1];
    for (size_t f = begin; f < t.step_factor_end[k]; ++f)
      sum_h += mpfr_get_d(t.factor_heights[f].hi(), MPFR_RNDU);
    if (s.core.kind == StepCore::Kind::DiagExponent) {
      os << "diag," << (s.core.exponent.exact ? s.core.exponent.exact->get_str() : "deferred");
    } else {
      os << "gen," << s.core.generator_index;
    }
    os << "," << sum_h << "," << (sum_h > 0 ? std::log(sum_h) : 0.0);
    auto cert = systole_certificate(t, static_cast<long>(k) + 1);
    if (cert)
      os << "," << cert->value;
    else
      os << ",";
    os << "," << mpfr_to_decimal(t.systoles[k].neg_log_delta.lo(), 17, MPFR_RNDD) << "\n";
  }
  return os.str();
}

std::string ledger_trace_csv(const LedgerTrace& t, long stride) {
  std::ostringstream os;
  os << "step,diag,log_H_upper,cert_sign,log_abs_cert\n";
  for (size_t k = 0; k < t.step_log_h_hi.size(); k += static_cast<size_t>(stride)) {
    os << (k + 1) << "," << int(t.diag_flags[k]) << "," << t.step_log_h_hi[k] << ","
       << t.certificate_series[k].sign << "," << t.certificate_series[k].lg << "\n";
  }
  return os.str();
}

}  // namespace latwalk
