#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "pir/gf.hpp"
#include "pir/pattern.hpp"
#include "pir/rational.hpp"

namespace pir::scheme {

/// One non-empty subset K of [1:K_msgs] together with its symbol budget
/// (1/S)^(K-1) * (S-1)^(|K|-1) * L and the per-database allocation of that
/// budget. Ranges are consecutive slices of [0:budget) in database order;
/// database n holds budget * y_n / S symbols.
struct SubsetInfo {
  uint32_t mask = 0;                 // bit k-1 set iff message k in the subset
  std::vector<int> members;          // ascending, 1-based
  long long budget = 0;
  std::vector<std::pair<long long, long long>> ranges;  // per db: (start, len)
};

enum class MdsMode {
  vandermonde,  // deterministic Vandermonde generators, needs q >= code length
  sampled,      // seeded rejection sampling for small forced fields
};

/// Full description of one retrieval scheme instance. The mixing matrices and
/// MDS generators are not stored; they are regenerated from (seed, field),
/// which keeps plans small and reproducible byte-for-byte.
struct SchemePlan {
  pattern::CollusionPattern pat;
  int k_messages = 0;
  int theta = 0;  // desired message, 1-based
  std::vector<Rational> y;
  Rational s;
  long long block_length = 0;  // L
  uint32_t field = 2;          // q
  uint64_t seed = 0;
  MdsMode mds_mode = MdsMode::vandermonde;
  std::vector<SubsetInfo> subsets;  // all 2^K - 1 non-empty subsets, canonical order

  const SubsetInfo& subset(uint32_t mask) const;
  long long rows_for_db(int db) const;  // db 1-based
  long long total_rows() const;
  Rational plan_rate() const;  // L / total downloaded symbols
};

/// Minimal positive L making every per-database symbol count
/// (1/s)^k * (s-1)^(j-1) * L * y_n an integer (j in [1:k], n in [1:N]);
/// computed as the lcm of the denominators at L = 1. When s = 1 the j >= 2
/// counts vanish identically ((s-1)^(j-1) = 0) and the scheme degenerates to
/// downloading every message in full, so only the j = 1 terms constrain L.
long long choose_block_length(const std::vector<Rational>& y, const Rational& s, int k);

/// Smallest prime >= the longest MDS code length S*alpha_i, so Vandermonde
/// generators exist. 2 when there is no MDS block (K = 1).
uint32_t choose_field(const std::vector<Rational>& y, const Rational& s, int k);

/// Splits [0:budget) of each subset into consecutive per-database ranges of
/// exact size budget * y_n / s. Errc::integrality_violation when L was not
/// produced by choose_block_length.
std::vector<SubsetInfo> allocate_queries(const std::vector<Rational>& y, const Rational& s,
                                         int k, long long block_length);

struct SynthesizeOptions {
  std::optional<std::vector<Rational>> y;  // any feasible rational y; default y*
  std::optional<uint32_t> field;           // forced field; sampled generators if too small
};

/// Builds the full plan: y (supplied or the LP1 optimum), L, q, budgets and
/// proportional allocation. theta is 1-based in [1:k].
SchemePlan synthesize(const pattern::CollusionPattern& p, int k, int theta, uint64_t seed,
                      const SynthesizeOptions& opts = {});

/// The matrices a plan stands for: K mixing matrices U_k (uniform full-rank,
/// from the seed), one MDS generator per undesired-subset class size (shared
/// across messages, which is what makes summed side information decodable),
/// and per undesired message the stacked coded matrix
/// blockdiag(MDS_i) * U_k[(1:L/S),:], an L x L coefficient map.
struct Materialized {
  std::vector<gf::FieldMatrix> mixing;          // [k-1] -> U_k, L x L
  std::map<int, gf::FieldMatrix> mds_by_size;   // class size j -> (S*alpha_j) x alpha_j
  std::vector<gf::FieldMatrix> coded;           // [k-1] -> L x L; empty for k = theta
  /// class_row_offset[k-1][mask] = row offset of class subset `mask` within
  /// coded[k-1]; the x_K block starts there and the x_{K u theta} block
  /// follows budget(mask) rows later. Offsets differ per message because each
  /// message stacks its own class list.
  std::vector<std::map<uint32_t, long long>> class_row_offset;
  /// Row offset of subset `mask` (containing theta) within U_theta * W_theta.
  std::map<uint32_t, long long> desired_row_offset;
};

/// Regenerates matrices from the plan. `mixing_seed` lets callers redraw the
/// mixing matrices (fresh randomness per retrieval); the MDS generators always
/// derive from the plan itself since they are public code structure.
Materialized materialize(const SchemePlan& plan,
                         std::optional<uint64_t> mixing_seed = std::nullopt);

/// Redraws the mixing matrices (and the coded matrices built from them) in
/// place, keeping the MDS generators. materialize(plan, s) and
/// redraw_mixing(plan, materialize(plan), s) agree exactly; this is the cheap
/// path for many-trial sampling.
void redraw_mixing(const SchemePlan& plan, Materialized& mat, uint64_t mixing_seed);

/// The encoded symbol vectors x_K^[k] for every subset K containing k.
/// Desired message: chunks of U_theta * W_theta. Undesired: slices of the
/// coded matrix applied to W_k.
struct EncodedSymbols {
  // encoded[k-1][mask] = vector of field elements, length = budget(mask)
  std::vector<std::map<uint32_t, std::vector<uint32_t>>> per_message;
};

EncodedSymbols encode(const SchemePlan& plan, const Materialized& mat,
                      const std::vector<std::vector<uint32_t>>& messages);

}  // namespace pir::scheme
