#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "latwalk/ratmat.hpp"
#include "latwalk/rng.hpp"

namespace latwalk {

enum class ScalarKind {
  HeavyRecordExp,           // t -> exp(t^-2), diag exponent floor(exp(t^-2))
  PowerFloor,               // t -> floor(t^-p)
  PowerReal,                // t -> t^-p
  SimpleRecordCube,         // u -> floor(u^-3), supported on l >= 1
  BoundedMixtureComponent,  // finite table of nonnegative values
};

struct ScalarLawSpec {
  ScalarKind kind = ScalarKind::PowerReal;
  double p = 2.0;           // exponent for the Power* kinds
  double domain_end = 1.0;  // uniform seed drawn from (0, domain_end]; 1 or 1/2
  double t_min = 0.0;       // optional truncation: seed conditioned to [t_min, domain_end]
  std::vector<double> table;  // BoundedMixtureComponent values

  void validate() const;
  std::string kind_name() const;
};

struct LogDomainValue {
  double log_value = 0.0;            // natural log of the sampled value
  std::optional<mpz_class> exact;    // exact integer when materialized
  bool floor_deferred = false;       // integer law whose floor was not materialized
  double seed_t = 0.0;               // the uniform seed that produced the value

  // Enclosure of log(value) sound also in the deferred-floor case.
  double log_lower() const;
  double log_upper() const { return log_value; }
};

// Draw one value; integer-valued laws materialize the exact integer only when
// its bit size is at most materialize_bit_cap.
LogDomainValue sample_scalar(const ScalarLawSpec& law, Rng& rng,
                             size_t materialize_bit_cap = 4096);

// eta{l} = l^(-1/3) - (l+1)^(-1/3), l >= 1 (the law is undefined at l = 0 and
// the cube pushforward never produces it).
Interval simple_record_pmf(const mpz_class& l, mpfr_prec_t prec = 96);

// t = sum_{k<=depth} eps_k 2^{-i_k} with strictly increasing indices.
struct DyadicAddress {
  std::vector<long> indices;
  std::vector<uint8_t> bits;

  void validate() const;
  mpq_class value(size_t depth) const;
  mpq_class value() const { return value(bits.size()); }
};

struct StepCore {
  enum class Kind { Generator, DiagExponent };
  Kind kind = Kind::Generator;
  long generator_index = 0;  // table index, or enumeration index for full support
  LogDomainValue exponent;   // DiagExponent only
  long driver_j = -1;        // scalar draw j when the exponent came from a lookup table
};

struct StepDescriptor {
  int sign = +1;
  mpq_class shear_t;               // dyadic rational, 0 when the law has no shears
  StepCore core;
  double seed_u = 0.0;             // mixture seed
  std::vector<uint8_t> seed_bits;  // address bits drawn for this step
};

enum class KappaKind {
  FiniteTable,   // finite generator table with weights
  FullSupportQ,  // elementary-word enumeration of SL_d(Q)
};

struct MatrixLawSpec {
  int d = 2;
  KappaKind kappa_kind = KappaKind::FiniteTable;
  std::vector<RationalMatrix> kappa;
  std::vector<double> kappa_weights;  // same length as kappa, sums to 1
  ScalarLawSpec scalar;
  double mix_weight = 0.5;          // probability of a DiagExponent core
  std::vector<long> shear_indices;  // i_1 < i_2 < ... (empty: no shear part)
  bool symmetrize = false;
  // When set, the scalar draw j (an exact integer >= 1) selects the diagonal
  // exponent diag_exponent_table[j-1]; the scalar truncation must keep j
  // within the table.
  std::vector<mpz_class> diag_exponent_table;

  void validate() const;
};

// Zariski-dense default: uniform on {A, A^-1, B, B^-1} with A = I + E_{1,2}
// and B the cyclic permutation signed to determinant 1; generates SL_d(Z).
MatrixLawSpec default_kappa_law(int d);

class FullSupportSampler;

// Fixed draw order per step: mixture seed u; sign bit if symmetrize; core
// (scalar seed reuses u rescaled to the law domain, or a generator draw);
// then one address bit per shear index. Full-support kappa needs the sampler.
StepDescriptor sample_step(const MatrixLawSpec& law, Rng& rng,
                           size_t materialize_bit_cap = 4096,
                           FullSupportSampler* full_support = nullptr);

// Exact matrix (N_{shear_t} * core)^sign. Requires a materialized exponent.
RationalMatrix realize_step_matrix(const StepDescriptor& s, const MatrixLawSpec& law,
                                   size_t bit_budget = kWalkEntryBitBudget);

// Full-support law kappa_0 on SL_d(Q): propose index k with P(k) = 2^-(k+1),
// accept with probability 1/(1 + H_upper(f(k))), where f is a fixed
// enumeration of words in elementary matrices (f(0) = I). The height
// pushforward has mean <= 3 by the acceptance weights.
class FullSupportSampler {
 public:
  explicit FullSupportSampler(int d, int precision_bits = 48);

  // Fixed word enumeration; not canonical, but documented and stable.
  RationalMatrix word(long k) const;
  double height_upper(long k);  // memoized, rounded up

  struct Draw {
    long index;
    RationalMatrix matrix;
    double height_upper;
  };
  Draw sample(Rng& rng);
  Draw sample_with_budget(Rng& rng, double height_budget, int trial_cap = 100000);

 private:
  int d_;
  int precision_bits_;
  std::vector<double> h_memo_;
  std::vector<RationalMatrix> w_memo_;
};

// Calkin-Wilf enumeration of the positive rationals (1-indexed), used by the
// word decoder; exposed for tests.
mpq_class calkin_wilf(unsigned long n);

// The fixed enumeration f(k) of words in elementary matrices; f(0) = I.
RationalMatrix elementary_word(int d, long k);

}  // namespace latwalk
