#pragma once

#include <vector>

#include "pir/rational.hpp"
#include "pir/scheme.hpp"

namespace pir::sim {

/// The query to one database: explicit coefficient rows over the concatenated
/// message space (each row has K*L field elements). Row r of the answer is
/// rows[r] . (W_1, ..., W_K).
struct Query {
  int database = 0;  // 1-based
  gf::FieldMatrix rows;
};

struct Answer {
  int database = 0;
  std::vector<uint32_t> symbols;
};

struct Transcript {
  scheme::SchemePlan plan;
  std::vector<Query> queries;
  std::vector<Answer> answers;
  std::vector<uint32_t> decoded;  // length L, equals W_theta on success
  long long downloaded = 0;
};

/// Emits, for each subset K and database n, the allocated rows of the k-sum
/// sum_{k in K} x_K^[k] expressed as coefficients over (W_1..W_K). Desired
/// message coefficients are rows of U_theta; undesired come from the coded
/// matrices MDS * U_k[(1:L/S),:].
std::vector<Query> build_queries(const scheme::SchemePlan& plan,
                                 const scheme::Materialized& mat);

/// Exact matrix-vector products over F_q. Errc::dimension_mismatch if message
/// lengths disagree with the query row width.
Answer answer(const std::vector<std::vector<uint32_t>>& messages, const Query& q);

/// Reconstructs W_theta: singles first, then ascending subset size — extends
/// each downloaded interference sum through its MDS code, subtracts it from
/// the mixed sums, and finally inverts the U_theta system.
/// Errc::decode_failure if any linear system is inconsistent.
std::vector<uint32_t> decode(const scheme::SchemePlan& plan, const scheme::Materialized& mat,
                             const std::vector<Answer>& answers);

/// messages[k-1] is W_k, a length-L vector over F_q.
Transcript run(const scheme::SchemePlan& plan,
               const std::vector<std::vector<uint32_t>>& messages);

std::vector<std::vector<uint32_t>> random_messages(const scheme::SchemePlan& plan,
                                                   uint64_t seed);

/// L / downloaded, exactly.
Rational measured_rate(const Transcript& t);

}  // namespace pir::sim
