#include "latwalk/laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "latwalk/errors.hpp"

namespace latwalk {

namespace {

// Floor of an enclosure, when unambiguous.
bool floor_of_interval(const Interval& e, mpz_class& out) {
  mpfr_t f;
  mpfr_init2(f, mpfr_get_prec(e.lo()));
  mpz_class a, b;
  mpfr_floor(f, e.lo());
  mpfr_get_z(a.get_mpz_t(), f, MPFR_RNDN);
  mpfr_set_prec(f, mpfr_get_prec(e.hi()));
  mpfr_floor(f, e.hi());
  mpfr_get_z(b.get_mpz_t(), f, MPFR_RNDN);
  mpfr_clear(f);
  if (a != b) return false;
  out = a;
  return true;
}

// Correctly rounded double log of a positive integer.
double log_mpz_rounded(const mpz_class& m) {
  mpfr_t x;
  mpfr_init2(x, 64);
  mpfr_set_z(x, m.get_mpz_t(), MPFR_RNDN);
  mpfr_log(x, x, MPFR_RNDN);
  double r = mpfr_get_d(x, MPFR_RNDN);
  mpfr_clear(x);
  return r;
}

// Exact floor of t^-p for integer p >= 1 and rational t in (0, 1].
mpz_class exact_power_floor(const mpq_class& t, unsigned long p) {
  mpz_class num_p, den_p;
  mpz_pow_ui(num_p.get_mpz_t(), t.get_den().get_mpz_t(), p);  // t^-p = (den/num)^p
  mpz_pow_ui(den_p.get_mpz_t(), t.get_num().get_mpz_t(), p);
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), num_p.get_mpz_t(), den_p.get_mpz_t());
  return q;
}

// Floor of t^-p for non-integer p via widening directed rounding.
mpz_class mpfr_power_floor(const mpq_class& t, double p, mpfr_prec_t start_prec) {
  Interval mp = Interval::from_double(-p, 64);
  for (mpfr_prec_t prec = start_prec; prec <= (mpfr_prec_t{1} << 14); prec *= 2) {
    Interval v = pow(Interval::from_mpq(t, prec), mp.widened(prec));
    mpz_class m;
    if (floor_of_interval(v, m)) return m;
  }
  throw PrecisionError("power floor undecidable (t^-p too close to an integer)");
}

double remap_seed(const ScalarLawSpec& law, double u) {
  if (law.t_min > 0) return law.t_min + u * (law.domain_end - law.t_min);
  return u * law.domain_end;
}

LogDomainValue sample_scalar_from_seed(const ScalarLawSpec& law, double t,
                                       size_t materialize_bit_cap) {
  LogDomainValue out;
  out.seed_t = t;
  switch (law.kind) {
    case ScalarKind::HeavyRecordExp: {
      double x = 1.0 / (t * t);  // log of the pre-floor value exp(t^-2)
      double bits_needed = x * 1.4426950408889634 + 2;
      if (bits_needed <= static_cast<double>(materialize_bit_cap)) {
        mpq_class tq(t);
        mpq_class xq = mpq_class(1) / (tq * tq);
        size_t xq_bits = mpz_sizeinbase(xq.get_num().get_mpz_t(), 2) +
                         mpz_sizeinbase(xq.get_den().get_mpz_t(), 2);
        mpfr_prec_t prec =
            static_cast<mpfr_prec_t>(bits_needed + static_cast<double>(xq_bits)) + 64;
        for (;; prec *= 2) {
          Interval e = exp(Interval::from_mpq(xq, prec));
          mpz_class m;
          if (floor_of_interval(e, m)) {
            out.exact = m;
            out.log_value = log_mpz_rounded(m);
            return out;
          }
          if (prec > (mpfr_prec_t{1} << 22))
            throw PrecisionError("exp floor undecidable");
        }
      }
      out.log_value = x;
      out.floor_deferred = true;
      return out;
    }
    case ScalarKind::PowerFloor:
    case ScalarKind::SimpleRecordCube: {
      double p = (law.kind == ScalarKind::SimpleRecordCube) ? 3.0 : law.p;
      double log2v = -p * std::log2(t);
      if (log2v + 2 <= static_cast<double>(materialize_bit_cap)) {
        mpq_class tq(t);
        mpz_class m;
        if (p == std::floor(p) && p >= 1 && p < 64) {
          m = exact_power_floor(tq, static_cast<unsigned long>(p));
        } else {
          m = mpfr_power_floor(tq, p, static_cast<mpfr_prec_t>(log2v) + 128);
        }
        out.exact = m;
        out.log_value = log_mpz_rounded(m);
        return out;
      }
      out.log_value = -p * std::log(t);
      out.floor_deferred = true;
      return out;
    }
    case ScalarKind::PowerReal: {
      out.log_value = -law.p * std::log(t);
      return out;
    }
    case ScalarKind::BoundedMixtureComponent: {
      size_t n = law.table.size();
      size_t idx = std::min(static_cast<size_t>(t * static_cast<double>(n)), n - 1);
      double v = law.table[idx];
      out.log_value = v > 0 ? std::log(v) : -std::numeric_limits<double>::infinity();
      out.seed_t = static_cast<double>(idx);
      return out;
    }
  }
  throw ConfigError("unknown scalar law kind");
}

}  // namespace

void ScalarLawSpec::validate() const {
  switch (kind) {
    case ScalarKind::PowerFloor:
    case ScalarKind::PowerReal:
      if (!(p > 1)) throw ConfigError("power law requires p > 1");
      break;
    case ScalarKind::BoundedMixtureComponent:
      if (table.empty()) throw ConfigError("bounded mixture component needs a value table");
      for (double v : table)
        if (!(v >= 0)) throw ConfigError("bounded mixture values must be >= 0");
      break;
    default:
      break;
  }
  if (!(domain_end == 1.0 || domain_end == 0.5))
    throw ConfigError("domain_end must be 1 or 1/2");
  if (t_min < 0 || t_min >= domain_end) {
    if (t_min != 0) throw ConfigError("truncation t_min must lie in (0, domain_end)");
  }
}

std::string ScalarLawSpec::kind_name() const {
  switch (kind) {
    case ScalarKind::HeavyRecordExp: return "heavy_record_exp";
    case ScalarKind::PowerFloor: return "power_floor";
    case ScalarKind::PowerReal: return "power_real";
    case ScalarKind::SimpleRecordCube: return "simple_record_cube";
    case ScalarKind::BoundedMixtureComponent: return "bounded_mixture_component";
  }
  return "?";
}

double LogDomainValue::log_lower() const {
  if (!floor_deferred) return log_value;
  // floor(v) >= v - 1, so log floor(v) >= log v + log1p(-1/v).
  return log_value + std::log1p(-std::exp(-log_value));
}

LogDomainValue sample_scalar(const ScalarLawSpec& law, Rng& rng, size_t materialize_bit_cap) {
  law.validate();
  double u = rng.uniform();
  return sample_scalar_from_seed(law, remap_seed(law, u), materialize_bit_cap);
}

Interval simple_record_pmf(const mpz_class& l, mpfr_prec_t prec) {
  if (l < 1) throw ConfigError("simple-record pmf defined on l >= 1");
  auto inv_cbrt = [prec](const mpz_class& v) {
    Interval x = Interval::from_mpz(v, prec);
    Interval r(prec);
    mpfr_t t;
    mpfr_init2(t, prec);
    mpfr_rootn_ui(t, x.hi(), 3, MPFR_RNDU);
    mpfr_ui_div(const_cast<mpfr_ptr>(r.lo()), 1, t, MPFR_RNDD);
    mpfr_rootn_ui(t, x.lo(), 3, MPFR_RNDD);
    mpfr_ui_div(const_cast<mpfr_ptr>(r.hi()), 1, t, MPFR_RNDU);
    mpfr_clear(t);
    return r;
  };
  return inv_cbrt(l) - inv_cbrt(mpz_class(l + 1));
}

void DyadicAddress::validate() const {
  if (indices.size() != bits.size())
    throw ConfigError("dyadic address: indices and bits must have equal length");
  long prev = 0;
  for (long i : indices) {
    if (i <= prev) throw ConfigError("dyadic address indices must be strictly increasing >= 1");
    prev = i;
  }
  for (uint8_t b : bits)
    if (b > 1) throw ConfigError("dyadic address bits must be 0/1");
}

mpq_class DyadicAddress::value(size_t depth) const {
  validate();
  depth = std::min(depth, bits.size());
  mpq_class sum = 0;
  for (size_t k = 0; k < depth; ++k) {
    if (!bits[k]) continue;
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(indices[k]));
    sum += mpq_class(1, den);
  }
  return sum;
}

void MatrixLawSpec::validate() const {
  if (d < 2 || d > 6) throw ConfigError("matrix law dimension must be in [2, 6]");
  scalar.validate();
  if (!(mix_weight >= 0 && mix_weight <= 1)) throw ConfigError("mix_weight must be in [0, 1]");
  if (kappa_kind == KappaKind::FiniteTable) {
    if (mix_weight < 1 && kappa.empty())
      throw ConfigError("finite kappa table empty but generators have positive mass");
    if (kappa.size() != kappa_weights.size())
      throw ConfigError("kappa table and weights size mismatch");
    double s = 0;
    for (double w : kappa_weights) {
      if (!(w >= 0)) throw ConfigError("kappa weights must be >= 0");
      s += w;
    }
    if (!kappa.empty() && std::abs(s - 1.0) > 1e-9)
      throw ConfigError("kappa weights must sum to 1");
    for (const auto& g : kappa)
      if (g.dim() != d) throw ConfigError("kappa generator dimension mismatch");
  }
  long prev = 0;
  for (long i : shear_indices) {
    if (i <= prev) throw ConfigError("shear indices must be strictly increasing >= 1");
    prev = i;
  }
}

MatrixLawSpec default_kappa_law(int d) {
  MatrixLawSpec law;
  law.d = d;
  RationalMatrix a = RationalMatrix::shear(d, mpq_class(1));
  RationalMatrix b(d);
  for (int i = 0; i + 1 < d; ++i) b.at(i + 1, i) = 1;
  b.at(0, d - 1) = (d % 2 == 0) ? -1 : 1;  // sign fixes det to exactly 1
  law.kappa = {a, inverse(a), b, inverse(b)};
  law.kappa_weights = {0.25, 0.25, 0.25, 0.25};
  law.mix_weight = 0.5;
  return law;
}

StepDescriptor sample_step(const MatrixLawSpec& law, Rng& rng, size_t materialize_bit_cap,
                           FullSupportSampler* full_support) {
  StepDescriptor s;
  s.seed_u = rng.uniform();
  if (law.symmetrize) s.sign = rng.bit() ? 1 : -1;
  if (s.seed_u <= law.mix_weight && law.mix_weight > 0) {
    s.core.kind = StepCore::Kind::DiagExponent;
    double t = remap_seed(law.scalar, s.seed_u / law.mix_weight);
    s.core.exponent = sample_scalar_from_seed(law.scalar, t, materialize_bit_cap);
    if (!law.diag_exponent_table.empty()) {
      if (!s.core.exponent.exact)
        throw ConfigError("exponent table lookup needs an exact scalar draw");
      if (*s.core.exponent.exact < 1 ||
          *s.core.exponent.exact > static_cast<long>(law.diag_exponent_table.size()))
        throw BudgetError("scalar draw outside the exponent table; tighten the truncation");
      long j = mpz_get_si(s.core.exponent.exact->get_mpz_t());
      s.core.driver_j = j;
      const mpz_class& m = law.diag_exponent_table[static_cast<size_t>(j - 1)];
      LogDomainValue mapped;
      mapped.exact = m;
      mapped.log_value = log_mpz_rounded(m);
      mapped.seed_t = s.core.exponent.seed_t;
      s.core.exponent = mapped;
    }
  } else {
    s.core.kind = StepCore::Kind::Generator;
    if (law.kappa_kind == KappaKind::FiniteTable) {
      double w = rng.uniform();
      double acc = 0;
      size_t pick = law.kappa.size() - 1;
      for (size_t i = 0; i < law.kappa_weights.size(); ++i) {
        acc += law.kappa_weights[i];
        if (w <= acc) {
          pick = i;
          break;
        }
      }
      s.core.generator_index = static_cast<long>(pick);
    } else {
      if (!full_support)
        throw ConfigError("full-support kappa requires a FullSupportSampler");
      s.core.generator_index = full_support->sample(rng).index;
    }
  }
  if (!law.shear_indices.empty()) {
    s.seed_bits.reserve(law.shear_indices.size());
    for (size_t k = 0; k < law.shear_indices.size(); ++k)
      s.seed_bits.push_back(rng.bit() ? 1 : 0);
    DyadicAddress addr{law.shear_indices, s.seed_bits};
    s.shear_t = addr.value();
  }
  return s;
}

RationalMatrix realize_step_matrix(const StepDescriptor& s, const MatrixLawSpec& law,
                                   size_t bit_budget) {
  RationalMatrix core;
  if (s.core.kind == StepCore::Kind::DiagExponent) {
    if (!s.core.exponent.exact)
      throw BudgetError("cannot realize step: diagonal exponent not materialized");
    core = RationalMatrix::diag_pow2(law.d, *s.core.exponent.exact, bit_budget);
  } else if (law.kappa_kind == KappaKind::FiniteTable) {
    core = law.kappa.at(static_cast<size_t>(s.core.generator_index));
  } else {
    core = elementary_word(law.d, s.core.generator_index);
  }
  RationalMatrix m = (s.shear_t == 0)
                         ? core
                         : mul(RationalMatrix::shear(law.d, s.shear_t), core, bit_budget);
  if (s.sign < 0) m = inverse(m);
  m.check_budget(bit_budget);
  return m;
}

mpq_class calkin_wilf(unsigned long n) {
  if (n == 0) throw ConfigError("calkin_wilf is 1-indexed");
  // Walk the tree by the bits of n below the leading one.
  int top = 63;
  while (top > 0 && !((n >> top) & 1)) --top;
  mpz_class a = 1, b = 1;
  for (int i = top - 1; i >= 0; --i) {
    if ((n >> i) & 1)
      a += b;  // right child (a+b)/b
    else
      b += a;  // left child a/(a+b)
  }
  return mpq_class(a, b);
}

RationalMatrix elementary_word(int d, long k) {
  if (k < 0) throw ConfigError("word index must be >= 0");
  if (k == 0) return RationalMatrix::identity(d);
  // Decode k-1 as a nonempty letter sequence via iterated Cantor unpairing.
  auto unpair = [](unsigned long z, unsigned long& x, unsigned long& y) {
    unsigned long w = static_cast<unsigned long>((std::sqrt(8.0 * static_cast<double>(z) + 1.0) - 1.0) / 2.0);
    while ((w + 1) * (w + 2) / 2 <= z) ++w;
    while (w * (w + 1) / 2 > z) --w;
    unsigned long t = w * (w + 1) / 2;
    y = z - t;
    x = w - y;
  };
  const int npairs = d * (d - 1);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j) pairs.emplace_back(i, j);

  RationalMatrix m = RationalMatrix::identity(d);
  unsigned long n = static_cast<unsigned long>(k - 1);
  while (true) {
    unsigned long letter, rest;
    unpair(n, letter, rest);
    auto [i, j] = pairs[letter % npairs];
    unsigned long ridx = letter / static_cast<unsigned long>(npairs);
    mpq_class r = calkin_wilf(ridx / 2 + 1);
    if (ridx % 2 == 1) r = -r;
    m = mul(m, RationalMatrix::elementary(d, i, j, r));
    if (rest == 0) break;
    n = rest - 1;
  }
  return m;
}

FullSupportSampler::FullSupportSampler(int d, int precision_bits)
    : d_(d), precision_bits_(precision_bits) {}

RationalMatrix FullSupportSampler::word(long k) const { return elementary_word(d_, k); }

double FullSupportSampler::height_upper(long k) {
  size_t idx = static_cast<size_t>(k);
  if (idx >= h_memo_.size()) {
    h_memo_.resize(idx + 1, -1.0);
    w_memo_.resize(idx + 1);
  }
  if (h_memo_[idx] < 0) {
    w_memo_[idx] = word(k);
    h_memo_[idx] = height_profile(w_memo_[idx], precision_bits_).height.hi_double();
  }
  return h_memo_[idx];
}

FullSupportSampler::Draw FullSupportSampler::sample(Rng& rng) {
  while (true) {
    long k = 0;
    while (!rng.bit()) ++k;  // P(k) = 2^-(k+1)
    double h = height_upper(k);
    double v = rng.uniform();
    if (v <= 1.0 / (1.0 + h)) return Draw{k, w_memo_[static_cast<size_t>(k)], h};
  }
}

FullSupportSampler::Draw FullSupportSampler::sample_with_budget(Rng& rng, double height_budget,
                                                                int trial_cap) {
  for (int trial = 0; trial < trial_cap; ++trial) {
    long k = 0;
    while (!rng.bit()) ++k;
    double h = height_upper(k);
    if (h > height_budget) continue;  // budget rejection happens before the accept draw
    double v = rng.uniform();
    if (v <= 1.0 / (1.0 + h)) return Draw{k, w_memo_[static_cast<size_t>(k)], h};
  }
  throw BudgetError("full-support sampler: acceptance impossible within trial cap");
}

}  // namespace latwalk
