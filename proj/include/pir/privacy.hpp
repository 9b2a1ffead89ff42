#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pir/scheme.hpp"

namespace pir::privacy {

/// Algebraic privacy audit of one colluding set: the per-message view
/// dimensions and ranks, plus the MDS-submatrix full-row-rank checks that the
/// achievability argument rests on.
struct SetReport {
  std::vector<int> colluding_set;     // database indices, 1-based
  long long tau = 0;                  // per-message view dimension
  std::vector<long long> row_counts;  // nonzero coefficient rows per message
  std::vector<long long> ranks;       // view rank per message
  bool counts_equal = false;
  bool ranks_equal_tau = false;
  bool tau_within_bound = false;      // tau <= L/S
  bool mds_blocks_full_rank = false;  // every selected MDS submatrix, |I| <= alpha_i
  bool pass = false;
  std::string detail;                 // first failing check, empty on pass
};

struct PrivacyReport {
  std::vector<SetReport> sets;
  bool pass = false;
  std::vector<std::vector<int>> failing_witnesses;
};

/// Checks, for every colluding set: (i) the per-message nonzero row counts are
/// equal (call the common value tau_m), (ii) each per-message coefficient
/// block has rank exactly tau_m with tau_m <= L/S, and (iii) for each
/// undesired message and subset class the selected MDS rows number at most
/// alpha_i and are linearly independent. Failures are report entries, never
/// exceptions.
PrivacyReport verify_rank_privacy(const scheme::SchemePlan& plan);

struct EmpiricalOptions {
  std::optional<std::vector<Rational>> y;  // forwarded to synthesize
  /// Negative control: replace this message's mixing matrix by the identity in
  /// every trial, leaking its encoded symbols unmixed.
  std::optional<int> leak_message;
  double guard_log2 = 20.0;  // reject when q^(tau_m * K) exceeds 2^guard_log2
};

struct EmpiricalResult {
  std::vector<std::vector<int>> colluding_sets;
  std::vector<double> tv_distance;  // per colluding set
  double max_tv = 0.0;
  long long trials = 0;
};

/// Samples `trials` retrievals for theta_a and theta_b with fresh mixing
/// matrices and fixed messages, then reports the per-colluding-set total
/// variation distance between the empirical view distributions. Only usable
/// at enumerable scale: Errc::too_large when q^(tau_m*K) exceeds the guard or
/// trials == 0.
EmpiricalResult empirical_indistinguishability(const pattern::CollusionPattern& p,
                                               int k_messages, int theta_a, int theta_b,
                                               uint32_t q, long long trials, uint64_t seed,
                                               const EmpiricalOptions& opts = {});

}  // namespace pir::privacy
