#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pir/capacity.hpp"
#include "pir/pattern.hpp"
#include "pir/rational.hpp"

namespace pir::converse {

/// Ordered multiset of subsets of [1:N] — the subscripts of an entropy
/// summation. Position matters only for reproducibility of recorded steps.
struct SubscriptCollection {
  int n_databases = 0;
  std::vector<std::vector<int>> sets;  // each sorted ascending, 1-based

  int size() const { return static_cast<int>(sets.size()); }
  bool operator==(const SubscriptCollection&) const = default;
};

struct Deletion {
  int set_pos = 0;  // 0-based position in the collection
  int index = 0;    // database index removed, 1-based
};

/// One sub-modular lower-bounding step: sets at a1_pos/a2_pos are replaced by
/// their union and intersection. Valid only when neither contains the other.
struct MergeStep {
  int a1_pos = 0;
  int a2_pos = 0;
  std::vector<int> unioned;
  std::vector<int> intersected;
};

/// Replayable record of one converse derivation: x = gm/g, the collection of
/// g_m copies of each colluding set, the deletions that restore the even
/// property, and the merge chain that ends at g full sets. Verifiable without
/// the LP solver.
struct Certificate {
  pattern::CollusionPattern pat;
  int k_messages = 0;
  std::vector<Rational> x;
  Int g;
  std::vector<Int> gm;
  std::vector<Deletion> deletions;
  std::vector<MergeStep> steps;
  SubscriptCollection final;
  Rational bound;
};

/// Minimal G (lcm of denominators) and Gm with x_m = Gm_m / G.
/// Errc::negative_entry if any x_m < 0.
std::pair<Int, std::vector<Int>> integerize(const std::vector<Rational>& x);

/// Gm_m copies of T_m, in the pattern's canonical set order.
SubscriptCollection build_collection(const pattern::CollusionPattern& p,
                                     const std::vector<Int>& gm);

/// G if every database index appears exactly G times, otherwise nullopt.
std::optional<Int> even_property(const SubscriptCollection& c);

/// Removes surplus occurrences of each over-counted index, scanning indices
/// ascending and deleting from the earliest sets first. The result satisfies
/// the even property with G. Errc::undercounted if some index appears fewer
/// than G times.
std::pair<SubscriptCollection, std::vector<Deletion>> delete_to_even(
    const SubscriptCollection& c, const Int& g);

/// The sub-modular merge chain: repeatedly pick a maximal set a1 (kept across
/// iterations until it reaches [1:N]) and the earliest a2 not contained in it,
/// and replace them by union and intersection. Terminates in at most (N-1)*V
/// steps with exactly G full sets and V-G empty ones.
struct AlgorithmRun {
  std::vector<MergeStep> steps;
  SubscriptCollection final;
};

AlgorithmRun run_algorithm1(const SubscriptCollection& c);

struct VerifyResult {
  bool ok = false;
  std::string first_failure;  // empty when ok
};

/// Replays the certificate independently: x feasibility, integerization,
/// deletion validity, per-index count conservation and non-containment at
/// every step, the final form, the step bound, and bound = C(sum x, K).
VerifyResult verify_certificate(const Certificate& cert, const pattern::CollusionPattern& p);

/// Certificate for any rational feasible x of LP2 (the converse theorem needs
/// only feasibility, not optimality).
Certificate certificate_from_x(const pattern::CollusionPattern& p,
                               const std::vector<Rational>& x, int k);

/// Solves LP2, builds and verifies the certificate end-to-end, and returns
/// the capacity upper bound C(S2*, k) with it.
std::pair<Rational, Certificate> converse_bound(const pattern::CollusionPattern& p, int k);

}  // namespace pir::converse
