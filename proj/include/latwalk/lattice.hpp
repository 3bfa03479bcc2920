#pragma once

#include <gmpxx.h>

#include <vector>

#include "latwalk/ratmat.hpp"

namespace latwalk {

// Unimodular basis of a lattice in R^d; columns are the generators.
struct LatticeBasis {
  RationalMatrix basis;
};

struct SystoleResult {
  mpq_class delta_sq;               // exact squared systole
  std::vector<mpz_class> witness;   // basis * witness attains it
  Interval neg_log_delta;           // -log delta, outward-rounded
};

// Exact shortest-vector length squared. d = 2 uses Lagrange-Gauss reduction,
// 3 <= d <= 6 exact-rational LLL (delta = 3/4); both are followed by a
// complete Fincke-Pohst enumeration within the certified radius, which also
// yields the tie-broken witness: sign-normalized (first nonzero coordinate
// positive), least under coordinate comparison from the last index down, so
// the standard basis vectors order e_1 < e_2 < ... < e_d.
SystoleResult systole_sq(const LatticeBasis& b, size_t bit_budget = kDefaultEntryBitBudget,
                         int precision_bits = 64);

// Independent oracle: minimum over all nonzero integer coefficient vectors in
// [-coeff_radius, coeff_radius]^d. Equals delta^2 whenever the box provably
// contains a shortest vector.
mpq_class brute_force_systole_sq(const LatticeBasis& b, long coeff_radius);

// Radius r such that the box [-r, r]^d is certified to contain a coefficient
// vector of some shortest lattice vector (from ||B^-1|| and the column norms).
long certified_enum_radius(const LatticeBasis& b);

// Membership in the Mahler compact K_B = { lattices : -log delta <= B }.
bool in_mahler_compact(const LatticeBasis& b, double B);

// Exact Gram matrix basis^T basis.
RationalMatrix gram(const RationalMatrix& basis);

// JSON per the module interface: {delta_sq, witness, neg_log_delta}.
std::string systole_to_json(const SystoleResult& r);

}  // namespace latwalk
