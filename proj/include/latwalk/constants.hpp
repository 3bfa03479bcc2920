#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "latwalk/laws.hpp"
#include "latwalk/real.hpp"

namespace latwalk {

// alpha = prod_{k>=2} (1 - exp(-k/30)), enclosed by a truncated product with
// an explicit tail bound; relative width <= 2^-precision_bits.
Interval alpha_enclosure(int precision_bits = 64);

// a_p = zeta(p)^(-1/p); partial sum plus an Euler-Maclaurin-bracketed tail.
Interval a_p_value(double p, int precision_bits = 64);

// Minimal integer K with (1+2K) exp(-K) <= alpha.lower / 2 (conservative
// direction, so epsilon_p stays a valid lower bound); minimality re-verified
// at K-1.
long smallest_K(const Interval& alpha);

struct EpsilonPipeline {
  double p = 2.0;
  int precision_bits = 64;
  Interval alpha;
  Interval a_p;
  long K = 0;
  Interval epsilon_p;  // alpha * a_p / (8K), outward rounded

  std::string to_json() const;
};

EpsilonPipeline epsilon_pipeline(double p, int precision_bits = 64);

// Height-moment constants of a matrix law: M is the max (finite table) or the
// Monte Carlo mean (full support) of the generator heights; M_prime, when a
// p' is supplied, is the mixed-law integral of log(||g|| ||g^-1||)^p' split
// into an exactly bracketed diagonal part and a Monte Carlo generator part.
struct MomentConstants {
  double M = 0;
  double M_std_error = 0;
  bool M_exact = true;
  std::optional<double> M_prime;
  double M_prime_std_error = 0;
  Interval nu_part;  // enclosure of the diagonal-part contribution to M_prime
};

MomentConstants moment_constants(const MatrixLawSpec& law, bool mode_max,
                                 std::optional<double> p_prime = std::nullopt,
                                 int trials = 100000, uint64_t seed = 1);

enum class SequenceVariant { Thm13, Thm14 };

struct SequenceRow {
  long j = 0;
  mpz_class i_j;
  mpz_class value;  // a_j (Thm13) or l_j (Thm14)
  // Defining inequality of the value re-verified under directed rounding, and
  // its minimality (the decremented integer fails).
  bool value_verified = false;
  bool value_minimal = false;
  // Same for i_j; bound_constrained marks rows where the index floor
  // (i_{j-1}+1 or max with l) was the binding constraint instead.
  bool i_verified = false;
  bool i_minimal = false;
  bool i_bound_constrained = false;
};

struct SequenceTable {
  SequenceVariant variant = SequenceVariant::Thm13;
  double p = 0, p_prime = 0, M = 0, M_prime = 0, eps = 0;
  bool empirical_eps = false;  // toy / empirical-epsilon mode marker
  std::vector<SequenceRow> rows;
  bool truncated = false;  // digit budget hit before j_max

  std::string to_json() const;
};

// a_j = smallest integer with a^p >= (4M/eps + 2 i_j log 2) a; i_{j+1} >=
// i_j + 1 smallest with 2^(-i+1) 2a_j (1+2^(-i+1))^(2a_j)
// exp((4a_j(M'+1)/eps)^(1/p')) <= 1. Every row re-verified, and the
// decremented integer re-checked to fail.
SequenceTable thm13_sequences(double p, double p_prime, double M, double M_prime, double eps,
                              int j_max, bool empirical_eps = true,
                              size_t digit_budget_bits = size_t{1} << 20);

// l_1 = i_1 = 1; l_{j+1} = ceil(j (i_j log2 + l_j log2 + 2M)); i_{j+1} >=
// max(l_j, i_j + 1) smallest with 2^(-i+1) j (1+2^(-i+1))^j
// 2 exp((2M + l_{j+1} log2 + 1) j) <= 1.
SequenceTable thm14_sequences(double M, int j_max,
                              size_t digit_budget_bits = size_t{1} << 20);

}  // namespace latwalk
