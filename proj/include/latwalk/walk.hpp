#pragma once

#include <optional>
#include <vector>

#include "latwalk/lattice.hpp"
#include "latwalk/laws.hpp"
#include "latwalk/logdomain.hpp"

namespace latwalk {

struct Certificate {
  enum class Kind { SystoleLower, PerturbRatio, RecordEscape };
  Kind kind = Kind::SystoleLower;
  double value = 0;   // directed-rounded (down) sound bound on -log delta
  long valid_at = 0;  // step index (1-based)
};

// Exact engine: materialized products and systoles at every step. Factor
// heights are kept at interval precision for certificate evaluation; each
// step expands into its shear factor (if any) and its core factor.
struct WalkTrace {
  std::vector<StepDescriptor> steps;
  std::vector<RationalMatrix> left_products;   // gamma_1 ... gamma_k times base
  std::vector<RationalMatrix> right_products;  // gamma_k ... gamma_1 times base (optional)
  std::vector<SystoleResult> systoles;         // of the left products
  std::vector<SystoleResult> systoles_right;
  LatticeBasis base;
  bool truncated = false;  // bit budget hit; trace holds the completed prefix

  std::vector<Interval> factor_heights;
  std::vector<uint8_t> factor_diag;
  std::vector<size_t> step_factor_end;  // factors [0, step_factor_end[k]) belong to steps <= k
};

// Ledger engine: heights only, log domain, no matrices. Per step the log of
// the summed factor-height upper bound; running accumulators for 2max - sum.
struct LedgerTrace {
  std::vector<double> step_log_h_hi;
  std::vector<uint8_t> diag_flags;
  std::vector<SignedLog> certificate_series;  // after each step; sign 0 until a diag core appears
  std::vector<uint8_t> certificate_defined;
  LogReal running_max;   // best diagonal candidate (H.lo + H.hi in value space)
  LogReal running_sum;   // sum of factor-height uppers
  size_t materialized_bigints = 0;  // stays 0 in pure ledger runs
};

struct ExactWalkOptions {
  bool right_products = false;
  size_t bit_budget = kWalkEntryBitBudget;
  int precision_bits = 64;
  size_t materialize_bit_cap = 4096;
  FullSupportSampler* full_support = nullptr;
};

std::vector<StepDescriptor> sample_steps(const MatrixLawSpec& law, long n, Rng& rng,
                                         size_t materialize_bit_cap = 4096,
                                         FullSupportSampler* full_support = nullptr);

// Re-truncate a sampled step to a shallower shear depth (coupled-pair runs).
StepDescriptor truncate_step_depth(const StepDescriptor& s, const MatrixLawSpec& law,
                                   size_t depth);

WalkTrace run_exact_walk_steps(const MatrixLawSpec& law, const std::vector<StepDescriptor>& steps,
                               const LatticeBasis& base, const ExactWalkOptions& opt = {});

WalkTrace run_exact_walk(const MatrixLawSpec& law, long n, const LatticeBasis& base, Rng& rng,
                         const ExactWalkOptions& opt = {});

LedgerTrace run_ledger_walk(const MatrixLawSpec& law, long n, Rng& rng,
                            FullSupportSampler* full_support = nullptr);

// Lemma-systole certificate: max over diagonal factors k of
// H(gamma_k) - sum_{i != k} H(gamma_i), rounded down. nullopt without a
// diagonal factor ("no-certificate").
std::optional<Certificate> systole_certificate(const WalkTrace& t, long upto_step = -1);
std::optional<Certificate> systole_certificate(const LedgerTrace& t, long upto_step = -1);

// tau n (1+tau)^n prod ||gamma_k||, rounded up (product-difference bound).
double perturbation_prod_bound(const std::vector<RationalMatrix>& steps, double tau,
                               int precision_bits = 64);
// 1 + tau n (1+tau)^n prod ||gamma_k|| ||gamma_k^-1||, rounded up
// (systole-ratio factor).
double perturbation_bound(const std::vector<RationalMatrix>& steps, double tau,
                          int precision_bits = 64);
// max_k ||a_k - b_k|| / ||b_k||, rounded up.
double measured_tau(const std::vector<RationalMatrix>& perturbed,
                    const std::vector<RationalMatrix>& original, int precision_bits = 64);

// Walk from the sheared base N_{t_j} Z^d with record-time certificates: at
// each step n >= 2 where the driving record is simple, at least n^2, and the
// generator heights stay under 2 M n, the certified -log delta must be at
// least l_{record}/3; both the certificate and the exact systole are checked.
struct ShearRecordCheck {
  long step = 0;
  long record_j = 0;      // the record value of the driving integers
  double threshold = 0;   // l_record / 3, rounded up
  Certificate cert;
  bool cert_meets = false;
  bool exact_meets = false;
};

struct ShearWalkOutcome {
  WalkTrace trace;
  std::vector<ShearRecordCheck> records;
};

ShearWalkOutcome run_walk_from_shear(const DyadicAddress& base_address, size_t depth,
                                     const MatrixLawSpec& law,
                                     const std::vector<StepDescriptor>& steps,
                                     const std::vector<mpz_class>& l_table, double M,
                                     const ExactWalkOptions& opt = {});

// CSV per the module interface: step, core kind, exponent-or-generator,
// H_upper (with log twin), certificate (with log twin), neg_log_delta.
std::string walk_trace_csv(const WalkTrace& t);
std::string ledger_trace_csv(const LedgerTrace& t, long stride = 1);

}  // namespace latwalk
