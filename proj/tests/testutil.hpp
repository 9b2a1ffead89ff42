#pragma once

#include <algorithm>
#include <vector>

#include "pir/pattern.hpp"
#include "pir/rational.hpp"
#include "pir/rng.hpp"
#include "pir/scheme.hpp"

namespace pirtest {

using pir::Rational;

// The worked examples used throughout the golden tests.
inline pir::pattern::CollusionPattern p1() {
  return pir::pattern::normalize({{1, 2, 3}, {1, 4}, {2, 4}, {3, 4}, {5}}, 5);
}
inline pir::pattern::CollusionPattern p2() {
  return pir::pattern::normalize(
      {{1, 3, 4}, {2, 3, 4}, {1, 3, 5}, {2, 3, 5}, {1, 4, 5}, {2, 4, 5}, {3, 4, 5}}, 5);
}
inline pir::pattern::CollusionPattern p3() {
  return pir::pattern::normalize({{1, 4}, {2, 5}, {1, 2, 3, 6}, {3, 7}, {4, 5, 6, 7}}, 7);
}
inline pir::pattern::CollusionPattern p4() {
  return pir::pattern::normalize(
      {{1, 2, 3}, {1, 3, 4}, {2, 3, 4}, {1, 2, 5}, {1, 3, 5}, {2, 3, 5}, {4, 5}}, 5);
}
inline pir::pattern::CollusionPattern p5() {
  return pir::pattern::normalize({{1, 3}, {2, 3}, {3, 4}, {1, 5}, {2, 5}, {4, 5}}, 5);
}
inline pir::pattern::CollusionPattern p6() {
  return pir::pattern::normalize({{1, 2}, {2, 3, 4}, {2, 5}, {1, 3, 5}, {1, 4, 5}, {3, 4, 5}}, 5);
}

// Position of a colluding set in the pattern's canonical order, so golden
// values can be asserted per set instead of per position.
inline int set_index(const pir::pattern::CollusionPattern& p, const std::vector<int>& set) {
  for (int m = 0; m < p.n_sets(); ++m)
    if (p.sets[static_cast<size_t>(m)] == set) return m;
  throw std::logic_error("set not in pattern");
}

inline Rational at_set(const pir::pattern::CollusionPattern& p, const std::vector<Rational>& x,
                       const std::vector<int>& set) {
  return x[static_cast<size_t>(set_index(p, set))];
}

// Random valid pattern with N <= max_n databases and at most max_m maximal
// sets. Coverage is achieved by rejection, falling back to the full set.
inline pir::pattern::CollusionPattern random_pattern(pir::Rng& rng, int max_n = 8,
                                                     int max_m = 10) {
  int n = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(max_n)));
  for (int attempt = 0; attempt < 64; ++attempt) {
    int m = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(max_m)));
    std::vector<std::vector<int>> sets;
    std::vector<bool> covered(static_cast<size_t>(n) + 1, false);
    for (int i = 0; i < m; ++i) {
      std::vector<int> s;
      for (int db = 1; db <= n; ++db)
        if (rng.below(2) == 0) s.push_back(db);
      if (s.empty()) s.push_back(1 + static_cast<int>(rng.below(static_cast<uint64_t>(n))));
      for (int db : s) covered[static_cast<size_t>(db)] = true;
      sets.push_back(std::move(s));
    }
    if (std::all_of(covered.begin() + 1, covered.end(), [](bool b) { return b; }))
      return pir::pattern::normalize(sets, n);
  }
  std::vector<int> full;
  for (int db = 1; db <= n; ++db) full.push_back(db);
  return pir::pattern::normalize({full}, n);
}

// Negative control for the privacy criteria: doubles DB `db`'s allocation in
// every subset (clamped to the budget), which violates B'y <= 1 for every
// colluding set containing db.
inline pir::scheme::SchemePlan double_db_allocation(pir::scheme::SchemePlan plan, int db) {
  for (auto& sub : plan.subsets) {
    auto& [start, len] = sub.ranges[static_cast<size_t>(db - 1)];
    len = std::min(2 * len, sub.budget - start);
  }
  return plan;
}

}  // namespace pirtest
