#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pir/errors.hpp"

namespace pir::pattern {

/// A collusion pattern: N databases and the maximal colluding sets T_1..T_M.
/// Sets are stored 1-based, each sorted ascending, and the list of sets is in
/// canonical order (size first, then lexicographic) so that every derived
/// artifact (incidence matrix, LP vectors, certificates) is reproducible
/// byte-for-byte.
///
/// Invariants: every set is non-empty and within [1:N]; no set contains
/// another; every database appears in at least one set.
struct CollusionPattern {
  int n_databases = 0;
  std::vector<std::vector<int>> sets;

  int n_sets() const { return static_cast<int>(sets.size()); }
  bool operator==(const CollusionPattern&) const = default;
};

/// N x M 0/1 matrix; entry (n,m) = 1 iff database n is in set T_m.
struct IncidenceMatrix {
  int rows = 0;  // N databases
  int cols = 0;  // M colluding sets
  std::vector<uint8_t> entries;  // row-major

  uint8_t at(int r, int c) const { return entries[static_cast<size_t>(r) * cols + c]; }
  bool operator==(const IncidenceMatrix&) const = default;
};

/// Drops non-maximal and duplicate sets, orders canonically, and checks that
/// every database in [1:n] is covered. Uncovered databases are rejected, not
/// repaired: inserting singletons would silently change the instance.
CollusionPattern normalize(const std::vector<std::vector<int>>& raw_sets, int n);

IncidenceMatrix incidence(const CollusionPattern& p);

CollusionPattern non_colluding(int n);
/// All size-T subsets of [1:N].
CollusionPattern t_colluding(int n, int t);
/// N cyclically contiguous windows of length T.
CollusionPattern cyclic(int n, int t);
/// Block-diagonal union of t_colluding blocks; block j has N_j databases of
/// which any T_j may collude.
CollusionPattern disjoint(const std::vector<std::pair<int, int>>& blocks);

/// Canonical set ordering used everywhere: by size, then lexicographic.
bool canonical_set_less(const std::vector<int>& a, const std::vector<int>& b);

std::string to_string(const CollusionPattern& p);

}  // namespace pir::pattern
