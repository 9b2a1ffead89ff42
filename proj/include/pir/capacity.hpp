#pragma once

#include <utility>
#include <vector>

#include "pir/pattern.hpp"
#include "pir/ratlp.hpp"
#include "pir/rational.hpp"

namespace pir::capacity {

struct CapacityResult {
  Rational s_star;
  int k_messages = 0;
  Rational value;  // the capacity C_P, an exact rational in (0, 1]
  std::vector<Rational> y_star;
  std::vector<Rational> x_star;
};

/// C = (1 + 1/s + ... + (1/s)^(k-1))^(-1), exactly.
/// Errc::non_positive_s if s <= 0.
Rational capacity_from_s(const Rational& s, int k);

/// Solves LP1 and LP2 for the pattern, asserts their optima agree
/// (Errc::duality_violation would indicate a solver bug), and returns the
/// capacity together with both optimal vectors.
CapacityResult capacity_of_pattern(const pattern::CollusionPattern& p, int k);

enum class SpecialKind { non_colluding, t_colluding, cyclic, disjoint };

/// Closed-form capacity for the special families, bypassing the LP:
/// S* = N, N/T, N/T, and sum(N_j/T_j) respectively.
Rational closed_form(SpecialKind kind, int n, int t,
                     const std::vector<std::pair<int, int>>& blocks, int k);

}  // namespace pir::capacity
