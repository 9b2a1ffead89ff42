#include "pir/capacity.hpp"

namespace pir::capacity {

Rational capacity_from_s(const Rational& s, int k) {
  if (s <= 0) throw Error(Errc::non_positive_s, "capacity needs s > 0, got " + to_fraction(s));
  if (k < 1) throw Error(Errc::bad_params, "need at least one message");
  Rational inv_s = 1 / s;
  Rational sum = 0;
  Rational term = 1;
  for (int i = 0; i < k; ++i) {
    sum += term;
    term *= inv_s;
  }
  return 1 / sum;
}

CapacityResult capacity_of_pattern(const pattern::CollusionPattern& p, int k) {
  if (k < 1) throw Error(Errc::bad_params, "need at least one message");
  auto b = pattern::incidence(p);
  ratlp::LpSolution lp1 = ratlp::solve(ratlp::build_lp1(b));
  ratlp::LpSolution lp2 = ratlp::solve(ratlp::build_lp2(b));
  if (lp1.status != ratlp::LpStatus::optimal || lp2.status != ratlp::LpStatus::optimal)
    throw Error(Errc::internal_invariant_broken, "LP1/LP2 must be solvable for a valid pattern");
  if (!ratlp::check_duality(lp1, lp2))
    throw Error(Errc::duality_violation, "LP1 and LP2 optima differ: " + to_fraction(lp1.value) +
                                             " vs " + to_fraction(lp2.value));
  CapacityResult r;
  r.s_star = lp1.value;
  r.k_messages = k;
  r.value = capacity_from_s(r.s_star, k);
  r.y_star = std::move(lp1.vector);
  r.x_star = std::move(lp2.vector);
  return r;
}

Rational closed_form(SpecialKind kind, int n, int t,
                     const std::vector<std::pair<int, int>>& blocks, int k) {
  Rational s;
  switch (kind) {
    case SpecialKind::non_colluding:
      if (n < 1) throw Error(Errc::bad_params, "N must be positive");
      s = n;
      break;
    case SpecialKind::t_colluding:
    case SpecialKind::cyclic:
      if (n < 1 || t < 1 || t > n) throw Error(Errc::bad_params, "need 1 <= T <= N");
      s = Rational(n, t);
      break;
    case SpecialKind::disjoint:
      if (blocks.empty()) throw Error(Errc::bad_params, "need at least one block");
      s = 0;
      for (auto [nj, tj] : blocks) {
        if (nj < 1 || tj < 1 || tj > nj) throw Error(Errc::bad_params, "need 1 <= T_j <= N_j");
        s += Rational(nj, tj);
      }
      break;
  }
  return capacity_from_s(s, k);
}

}  // namespace pir::capacity
