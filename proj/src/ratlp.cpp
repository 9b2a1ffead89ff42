#include "pir/ratlp.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace pir::ratlp {

namespace {

// Tableau simplex over exact rationals, maximizing c.x subject to Ax <= b,
// x >= 0. Dantzig pricing for speed with a permanent switch to Bland's rule
// after a fixed number of pivots, which rules out cycling.
class Simplex {
 public:
  Simplex(const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& b,
          const std::vector<Rational>& c)
      : m_(static_cast<int>(a.size())), n_(static_cast<int>(c.size())) {
    cols_ = n_ + m_ + 2;  // structural, slacks, aux, rhs
    aux_ = n_ + m_;
    rhs_ = cols_ - 1;
    rows_.assign(static_cast<size_t>(m_), std::vector<Rational>(static_cast<size_t>(cols_)));
    basis_.resize(static_cast<size_t>(m_));
    for (int i = 0; i < m_; ++i) {
      auto& row = rows_[static_cast<size_t>(i)];
      for (int j = 0; j < n_; ++j) row[static_cast<size_t>(j)] = a[static_cast<size_t>(i)][static_cast<size_t>(j)];
      row[static_cast<size_t>(n_ + i)] = 1;
      row[static_cast<size_t>(rhs_)] = b[static_cast<size_t>(i)];
      basis_[static_cast<size_t>(i)] = n_ + i;
    }
    obj_.assign(static_cast<size_t>(cols_), Rational(0));
    for (int j = 0; j < n_; ++j) obj_[static_cast<size_t>(j)] = c[static_cast<size_t>(j)];
  }

  LpStatus run() {
    if (!phase1()) return LpStatus::infeasible;
    return phase2();
  }

  Rational value() const {
    Rational v = 0;
    for (int i = 0; i < m_; ++i)
      if (basis_[static_cast<size_t>(i)] < n_)
        v += obj_[static_cast<size_t>(basis_[static_cast<size_t>(i)])] * rows_[static_cast<size_t>(i)][static_cast<size_t>(rhs_)];
    return v;
  }

  std::vector<Rational> solution() const {
    std::vector<Rational> x(static_cast<size_t>(n_), Rational(0));
    for (int i = 0; i < m_; ++i)
      if (basis_[static_cast<size_t>(i)] < n_)
        x[static_cast<size_t>(basis_[static_cast<size_t>(i)])] = rows_[static_cast<size_t>(i)][static_cast<size_t>(rhs_)];
    return x;
  }

 private:
  void pivot(int pr, int pc) {
    auto& prow = rows_[static_cast<size_t>(pr)];
    Rational inv = 1 / prow[static_cast<size_t>(pc)];
    for (auto& v : prow) v *= inv;
    for (int i = 0; i < m_; ++i) {
      if (i == pr) continue;
      auto& row = rows_[static_cast<size_t>(i)];
      Rational f = row[static_cast<size_t>(pc)];
      if (f == 0) continue;
      for (int j = 0; j < cols_; ++j)
        row[static_cast<size_t>(j)] -= f * prow[static_cast<size_t>(j)];
    }
    Rational f = z_[static_cast<size_t>(pc)];
    if (f != 0)
      for (int j = 0; j < cols_; ++j) z_[static_cast<size_t>(j)] -= f * prow[static_cast<size_t>(j)];
    basis_[static_cast<size_t>(pr)] = pc;
  }

  // Reduced-cost row for the objective `coef` (indexed over all columns).
  void rebuild_z(const std::vector<Rational>& coef) {
    z_.assign(static_cast<size_t>(cols_), Rational(0));
    for (int j = 0; j < cols_ - 1; ++j) z_[static_cast<size_t>(j)] = -coef[static_cast<size_t>(j)];
    for (int i = 0; i < m_; ++i) {
      Rational cb = coef[static_cast<size_t>(basis_[static_cast<size_t>(i)])];
      if (cb == 0) continue;
      for (int j = 0; j < cols_; ++j)
        z_[static_cast<size_t>(j)] += cb * rows_[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
  }

  // One priced simplex loop: pivots until no column improves. `allowed` caps
  // the usable column range so phase 2 can exclude the auxiliary column.
  bool iterate(int allowed) {
    long long pivots = 0;
    const long long bland_after = 64 + 16LL * (m_ + n_);
    for (;;) {
      int pc = -1;
      if (pivots < bland_after) {
        Rational best = 0;
        for (int j = 0; j < allowed; ++j)
          if (z_[static_cast<size_t>(j)] < best) {
            best = z_[static_cast<size_t>(j)];
            pc = j;
          }
      } else {
        for (int j = 0; j < allowed && pc < 0; ++j)
          if (z_[static_cast<size_t>(j)] < 0) pc = j;
      }
      if (pc < 0) return true;  // optimal
      int pr = -1;
      Rational best_ratio;
      for (int i = 0; i < m_; ++i) {
        const Rational& piv = rows_[static_cast<size_t>(i)][static_cast<size_t>(pc)];
        if (piv <= 0) continue;
        Rational ratio = rows_[static_cast<size_t>(i)][static_cast<size_t>(rhs_)] / piv;
        if (pr < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[static_cast<size_t>(i)] < basis_[static_cast<size_t>(pr)]))
          {
            pr = i;
            best_ratio = ratio;
          }
      }
      if (pr < 0) return false;  // unbounded
      pivot(pr, pc);
      ++pivots;
    }
  }

  bool phase1() {
    int worst = -1;
    for (int i = 0; i < m_; ++i) {
      if (rows_[static_cast<size_t>(i)][static_cast<size_t>(rhs_)] >= 0) continue;
      if (worst < 0 || rows_[static_cast<size_t>(i)][static_cast<size_t>(rhs_)] <
                           rows_[static_cast<size_t>(worst)][static_cast<size_t>(rhs_)])
        worst = i;
    }
    if (worst < 0) return true;  // slack basis already feasible
    for (int i = 0; i < m_; ++i) rows_[static_cast<size_t>(i)][static_cast<size_t>(aux_)] = -1;
    std::vector<Rational> coef(static_cast<size_t>(cols_), Rational(0));
    coef[static_cast<size_t>(aux_)] = -1;  // maximize -x_aux
    rebuild_z(coef);
    pivot(worst, aux_);  // makes all rhs non-negative
    if (!iterate(cols_ - 1)) return false;
    if (value_of(coef) != 0) return false;  // x_aux cannot reach zero
    // Pivot the auxiliary variable out if it lingers in the basis at level 0.
    for (int i = 0; i < m_; ++i) {
      if (basis_[static_cast<size_t>(i)] != aux_) continue;
      int pc = -1;
      for (int j = 0; j < n_ + m_ && pc < 0; ++j)
        if (rows_[static_cast<size_t>(i)][static_cast<size_t>(j)] != 0) pc = j;
      if (pc >= 0) pivot(i, pc);
    }
    for (int i = 0; i < m_; ++i) rows_[static_cast<size_t>(i)][static_cast<size_t>(aux_)] = 0;
    return true;
  }

  LpStatus phase2() {
    std::vector<Rational> coef(static_cast<size_t>(cols_), Rational(0));
    for (int j = 0; j < n_; ++j) coef[static_cast<size_t>(j)] = obj_[static_cast<size_t>(j)];
    rebuild_z(coef);
    if (!iterate(n_ + m_)) return LpStatus::unbounded;
    return LpStatus::optimal;
  }

  Rational value_of(const std::vector<Rational>& coef) const {
    Rational v = 0;
    for (int i = 0; i < m_; ++i)
      v += coef[static_cast<size_t>(basis_[static_cast<size_t>(i)])] *
           rows_[static_cast<size_t>(i)][static_cast<size_t>(rhs_)];
    return v;
  }

  int m_, n_, cols_, aux_, rhs_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> z_;
  std::vector<Rational> obj_;
  std::vector<int> basis_;
};

struct Standardized {
  std::vector<std::vector<Rational>> a;  // all rows as <=
  std::vector<Rational> b;
  std::vector<Rational> c;  // maximize
  bool negated = false;     // true when the original sense was minimize
};

Standardized standardize(const LpProblem& p) {
  if (p.n_vars() == 0) throw Error(Errc::bad_params, "LP with no variables");
  if (p.rhs.size() != p.constraint_matrix.size() || p.row_sense.size() != p.constraint_matrix.size())
    throw Error(Errc::dimension_mismatch, "inconsistent LP dimensions");
  Standardized s;
  s.negated = p.sense == Sense::minimize;
  s.c = p.objective;
  if (s.negated)
    for (auto& v : s.c) v = -v;
  for (int i = 0; i < p.n_rows(); ++i) {
    const auto& row = p.constraint_matrix[static_cast<size_t>(i)];
    if (static_cast<int>(row.size()) != p.n_vars())
      throw Error(Errc::dimension_mismatch, "constraint row width mismatch");
    if (p.row_sense[static_cast<size_t>(i)] == RowSense::le) {
      s.a.push_back(row);
      s.b.push_back(p.rhs[static_cast<size_t>(i)]);
    } else {
      std::vector<Rational> neg = row;
      for (auto& v : neg) v = -v;
      s.a.push_back(std::move(neg));
      s.b.push_back(-p.rhs[static_cast<size_t>(i)]);
    }
  }
  return s;
}

struct RawResult {
  LpStatus status;
  std::vector<Rational> x;
  Rational value;
};

RawResult solve_standard(const std::vector<std::vector<Rational>>& a,
                         const std::vector<Rational>& b, const std::vector<Rational>& c) {
  Simplex s(a, b, c);
  LpStatus st = s.run();
  if (st != LpStatus::optimal) return {st, {}, Rational(0)};
  return {st, s.solution(), s.value()};
}

}  // namespace

LpProblem build_lp1(const pattern::IncidenceMatrix& b) {
  LpProblem p;
  p.sense = Sense::maximize;
  p.objective.assign(static_cast<size_t>(b.rows), Rational(1));
  for (int m = 0; m < b.cols; ++m) {
    std::vector<Rational> row(static_cast<size_t>(b.rows));
    for (int n = 0; n < b.rows; ++n) row[static_cast<size_t>(n)] = b.at(n, m);
    p.constraint_matrix.push_back(std::move(row));
    p.rhs.push_back(Rational(1));
    p.row_sense.push_back(RowSense::le);
  }
  return p;
}

LpProblem build_lp2(const pattern::IncidenceMatrix& b) {
  LpProblem p;
  p.sense = Sense::minimize;
  p.objective.assign(static_cast<size_t>(b.cols), Rational(1));
  for (int n = 0; n < b.rows; ++n) {
    std::vector<Rational> row(static_cast<size_t>(b.cols));
    for (int m = 0; m < b.cols; ++m) row[static_cast<size_t>(m)] = b.at(n, m);
    p.constraint_matrix.push_back(std::move(row));
    p.rhs.push_back(Rational(1));
    p.row_sense.push_back(RowSense::ge);
  }
  return p;
}

LpSolution solve(const LpProblem& p) {
  Standardized s = standardize(p);
  const int n = static_cast<int>(s.c.size());

  RawResult first = solve_standard(s.a, s.b, s.c);
  if (first.status != LpStatus::optimal) {
    LpSolution out;
    out.status = first.status;
    return out;
  }
  const Rational vstar = first.value;

  // Lexicographic refinement: pin the optimal value, then minimize the
  // variables one by one, substituting each fixed value into the system.
  // The result is the lexicographically smallest optimal point, independent
  // of pivoting order.
  std::vector<std::vector<Rational>> a = s.a;
  std::vector<Rational> b = s.b;
  {
    std::vector<Rational> pin(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) pin[static_cast<size_t>(j)] = -s.c[static_cast<size_t>(j)];
    a.push_back(std::move(pin));
    b.push_back(-vstar);
  }
  std::vector<Rational> fixed(static_cast<size_t>(n));
  std::vector<int> live(static_cast<size_t>(n));
  std::iota(live.begin(), live.end(), 0);

  for (int target = 0; target < n; ++target) {
    // minimize x_target == maximize -x_target over the remaining variables
    std::vector<Rational> c(live.size(), Rational(0));
    int pos = -1;
    for (size_t j = 0; j < live.size(); ++j)
      if (live[j] == target) pos = static_cast<int>(j);
    c[static_cast<size_t>(pos)] = -1;
    RawResult r = solve_standard(a, b, c);
    if (r.status != LpStatus::optimal)
      throw Error(Errc::internal_invariant_broken, "lexicographic refinement lost feasibility");
    Rational v = -r.value;
    fixed[static_cast<size_t>(target)] = v;
    // substitute x_target = v
    for (size_t i = 0; i < a.size(); ++i) {
      b[i] -= a[i][static_cast<size_t>(pos)] * v;
      a[i].erase(a[i].begin() + pos);
    }
    live.erase(live.begin() + pos);
  }

  LpSolution out;
  out.status = LpStatus::optimal;
  out.vector = std::move(fixed);
  out.value = s.negated ? -vstar : vstar;
  return out;
}

bool is_feasible(const LpProblem& p, const std::vector<Rational>& candidate) {
  if (static_cast<int>(candidate.size()) != p.n_vars()) return false;
  for (const auto& v : candidate)
    if (v < 0) return false;
  for (int i = 0; i < p.n_rows(); ++i) {
    Rational lhs = 0;
    for (int j = 0; j < p.n_vars(); ++j)
      lhs += p.constraint_matrix[static_cast<size_t>(i)][static_cast<size_t>(j)] *
             candidate[static_cast<size_t>(j)];
    if (p.row_sense[static_cast<size_t>(i)] == RowSense::le ? lhs > p.rhs[static_cast<size_t>(i)]
                                                            : lhs < p.rhs[static_cast<size_t>(i)])
      return false;
  }
  return true;
}

Rational objective_value(const LpProblem& p, const std::vector<Rational>& x) {
  Rational v = 0;
  for (int j = 0; j < p.n_vars(); ++j)
    v += p.objective[static_cast<size_t>(j)] * x[static_cast<size_t>(j)];
  return v;
}

namespace {

// Small exact fraction on __int128 for the brute-force oracle. Magnitudes in
// these systems are bounded by minors of tiny integer matrices, far below the
// checked limit.
struct Frac {
  __int128 n = 0, d = 1;
};

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Frac norm(__int128 n, __int128 d) {
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  constexpr __int128 lim = static_cast<__int128>(1) << 100;
  if (n > lim || n < -lim || d > lim)
    throw Error(Errc::too_large, "oracle arithmetic outgrew its bounds");
  return {n, d};
}

Frac f_sub(const Frac& a, const Frac& b) { return norm(a.n * b.d - b.n * a.d, a.d * b.d); }
Frac f_mul(const Frac& a, const Frac& b) { return norm(a.n * b.n, a.d * b.d); }
Frac f_div(const Frac& a, const Frac& b) { return norm(a.n * b.d, a.d * b.n); }
bool f_zero(const Frac& a) { return a.n == 0; }
int f_cmp(const Frac& a, const Frac& b) {
  __int128 lhs = a.n * b.d, rhs = b.n * a.d;
  return lhs < rhs ? -1 : lhs > rhs ? 1 : 0;
}

struct OracleRow {
  std::vector<Frac> a;
  Frac b;
};

// Depth-first enumeration over n-subsets of tight constraints, keeping a
// partial echelon form so dependent choices are pruned early.
class VertexEnumerator {
 public:
  VertexEnumerator(std::vector<OracleRow> cons, int n) : cons_(std::move(cons)), n_(n) {}

  std::vector<std::vector<Frac>> run() {
    echelon_.clear();
    pivot_col_.clear();
    dfs(0);
    return std::move(found_);
  }

 private:
  void dfs(size_t next) {
    if (static_cast<int>(echelon_.size()) == n_) {
      emit();
      return;
    }
    int needed = n_ - static_cast<int>(echelon_.size());
    for (size_t i = next; i + static_cast<size_t>(needed) <= cons_.size(); ++i) {
      OracleRow r = cons_[i];
      for (size_t k = 0; k < echelon_.size(); ++k) {
        int pc = pivot_col_[k];
        if (f_zero(r.a[static_cast<size_t>(pc)])) continue;
        Frac f = f_div(r.a[static_cast<size_t>(pc)], echelon_[k].a[static_cast<size_t>(pc)]);
        for (int j = 0; j < n_; ++j)
          r.a[static_cast<size_t>(j)] = f_sub(r.a[static_cast<size_t>(j)],
                                              f_mul(f, echelon_[k].a[static_cast<size_t>(j)]));
        r.b = f_sub(r.b, f_mul(f, echelon_[k].b));
      }
      int pc = -1;
      for (int j = 0; j < n_ && pc < 0; ++j)
        if (!f_zero(r.a[static_cast<size_t>(j)])) pc = j;
      if (pc < 0) continue;  // dependent on current selection
      echelon_.push_back(std::move(r));
      pivot_col_.push_back(pc);
      dfs(i + 1);
      echelon_.pop_back();
      pivot_col_.pop_back();
    }
  }

  void emit() {
    std::vector<Frac> x(static_cast<size_t>(n_), Frac{0, 1});
    for (size_t k = echelon_.size(); k-- > 0;) {
      int pc = pivot_col_[k];
      Frac acc = echelon_[k].b;
      for (int j = 0; j < n_; ++j) {
        if (j == pc || f_zero(echelon_[k].a[static_cast<size_t>(j)])) continue;
        acc = f_sub(acc, f_mul(echelon_[k].a[static_cast<size_t>(j)], x[static_cast<size_t>(j)]));
      }
      x[static_cast<size_t>(pc)] = f_div(acc, echelon_[k].a[static_cast<size_t>(pc)]);
    }
    found_.push_back(std::move(x));
  }

  std::vector<OracleRow> cons_;
  int n_;
  std::vector<OracleRow> echelon_;
  std::vector<int> pivot_col_;
  std::vector<std::vector<Frac>> found_;
};

}  // namespace

std::vector<std::vector<Rational>> enumerate_vertices(const LpProblem& p) {
  const int n = p.n_vars();
  const int m = p.n_rows();
  if (n > 12 || m > 16)
    throw Error(Errc::too_large, "vertex enumeration guarded to <= 12 vars, <= 16 rows");

  Standardized s = standardize(p);

  // Integer-scale every row so the oracle works on integers from the start.
  std::vector<OracleRow> cons;
  for (int i = 0; i < m; ++i) {
    std::vector<Rational> full = s.a[static_cast<size_t>(i)];
    full.push_back(s.b[static_cast<size_t>(i)]);
    Int scale = lcm_of_denominators(full);
    OracleRow r;
    for (int j = 0; j < n; ++j) {
      Int v = num(full[static_cast<size_t>(j)]) * (scale / den(full[static_cast<size_t>(j)]));
      r.a.push_back(Frac{static_cast<__int128>(to_int64(v)), 1});
    }
    Int v = num(s.b[static_cast<size_t>(i)]) * (scale / den(s.b[static_cast<size_t>(i)]));
    r.b = Frac{static_cast<__int128>(to_int64(v)), 1};
    cons.push_back(std::move(r));
  }
  for (int j = 0; j < n; ++j) {  // bounds x_j = 0 as candidate tight rows
    OracleRow r;
    r.a.assign(static_cast<size_t>(n), Frac{0, 1});
    r.a[static_cast<size_t>(j)] = Frac{1, 1};
    r.b = Frac{0, 1};
    cons.push_back(std::move(r));
  }

  VertexEnumerator en(cons, n);
  auto candidates = en.run();

  std::vector<std::vector<Rational>> out;
  std::map<std::vector<std::pair<long long, long long>>, bool> seen;
  for (const auto& x : candidates) {
    // feasibility against every constraint and bound
    bool ok = true;
    for (int j = 0; j < n && ok; ++j) ok = x[static_cast<size_t>(j)].n >= 0;
    for (int i = 0; i < m && ok; ++i) {
      Frac lhs{0, 1};
      for (int j = 0; j < n; ++j)
        lhs = f_sub(lhs, f_mul(Frac{-cons[static_cast<size_t>(i)].a[static_cast<size_t>(j)].n,
                                    cons[static_cast<size_t>(i)].a[static_cast<size_t>(j)].d},
                               x[static_cast<size_t>(j)]));
      ok = f_cmp(lhs, cons[static_cast<size_t>(i)].b) <= 0;
    }
    if (!ok) continue;
    std::vector<std::pair<long long, long long>> key;
    for (const auto& f : x) key.emplace_back(static_cast<long long>(f.n), static_cast<long long>(f.d));
    if (seen.emplace(key, true).second) {
      std::vector<Rational> v;
      for (const auto& f : x)
        v.emplace_back(Int(static_cast<long long>(f.n)), Int(static_cast<long long>(f.d)));
      out.push_back(std::move(v));
    }
  }
  return out;
}

bool check_duality(const LpSolution& s1, const LpSolution& s2) {
  if (s1.status != LpStatus::optimal || s2.status != LpStatus::optimal)
    throw Error(Errc::status_mismatch, "duality check needs two optimal solutions");
  return s1.value == s2.value;
}

}  // namespace pir::ratlp
