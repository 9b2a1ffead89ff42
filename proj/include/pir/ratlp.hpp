#pragma once

#include <vector>

#include "pir/pattern.hpp"
#include "pir/rational.hpp"

namespace pir::ratlp {

enum class Sense { maximize, minimize };
enum class RowSense { le, ge };

/// A linear program over exact rationals with variable bounds x >= 0.
struct LpProblem {
  Sense sense = Sense::maximize;
  std::vector<Rational> objective;
  std::vector<std::vector<Rational>> constraint_matrix;
  std::vector<Rational> rhs;
  std::vector<RowSense> row_sense;

  int n_vars() const { return static_cast<int>(objective.size()); }
  int n_rows() const { return static_cast<int>(constraint_matrix.size()); }
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<Rational> vector;
  Rational value;
};

/// (LP1)  max 1'y  s.t.  B'y <= 1, y >= 0.  Its optimum S* is the effective
/// number of databases in the capacity formula.
LpProblem build_lp1(const pattern::IncidenceMatrix& b);

/// (LP2)  min 1'x  s.t.  Bx >= 1, x >= 0.  Dual of LP1.
LpProblem build_lp2(const pattern::IncidenceMatrix& b);

/// Simplex with Bland's anti-cycling rule over exact rationals. When the
/// optimum is attained on a face, the reported vector is the lexicographically
/// smallest optimal point (a vertex of the optimal face), so repeated runs and
/// platforms agree byte-for-byte.
LpSolution solve(const LpProblem& p);

/// True iff `candidate` satisfies every constraint and bound exactly.
bool is_feasible(const LpProblem& p, const std::vector<Rational>& candidate);

Rational objective_value(const LpProblem& p, const std::vector<Rational>& x);

/// Brute-force oracle: every basic solution from square subsystems of tight
/// constraints, filtered for feasibility. Guarded to <= 12 variables and
/// <= 16 constraint rows (Errc::too_large beyond). Independent of solve().
std::vector<std::vector<Rational>> enumerate_vertices(const LpProblem& p);

/// Exact equality of two optimal values (S* = S2*). Errc::status_mismatch if
/// either solution is not optimal.
bool check_duality(const LpSolution& s1, const LpSolution& s2);

}  // namespace pir::ratlp
