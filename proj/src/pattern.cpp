#include "pir/pattern.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace pir::pattern {

bool canonical_set_less(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

namespace {

std::vector<int> clean_set(const std::vector<int>& raw, int n) {
  std::set<int> s(raw.begin(), raw.end());
  if (s.empty()) throw Error(Errc::bad_params, "empty colluding set");
  if (*s.begin() < 1 || *s.rbegin() > n)
    throw Error(Errc::bad_params, "database index outside [1:" + std::to_string(n) + "]");
  return {s.begin(), s.end()};
}

bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

CollusionPattern normalize(const std::vector<std::vector<int>>& raw_sets, int n) {
  if (n < 1) throw Error(Errc::bad_params, "need at least one database");
  if (raw_sets.empty()) throw Error(Errc::bad_params, "empty pattern");

  std::vector<std::vector<int>> sets;
  for (const auto& raw : raw_sets) sets.push_back(clean_set(raw, n));

  std::sort(sets.begin(), sets.end(), canonical_set_less);
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());

  // Keep maximal sets only: a set contained in a larger one is already implied.
  std::vector<std::vector<int>> maximal;
  for (size_t i = 0; i < sets.size(); ++i) {
    bool contained = false;
    for (size_t j = 0; j < sets.size() && !contained; ++j)
      contained = i != j && sets[i] != sets[j] && subset_of(sets[i], sets[j]);
    if (!contained) maximal.push_back(sets[i]);
  }

  std::vector<bool> covered(static_cast<size_t>(n) + 1, false);
  for (const auto& s : maximal)
    for (int db : s) covered[static_cast<size_t>(db)] = true;
  for (int db = 1; db <= n; ++db)
    if (!covered[static_cast<size_t>(db)])
      throw Error(Errc::uncovered_database,
                  "database " + std::to_string(db) + " appears in no colluding set");

  return CollusionPattern{n, std::move(maximal)};
}

IncidenceMatrix incidence(const CollusionPattern& p) {
  IncidenceMatrix b;
  b.rows = p.n_databases;
  b.cols = p.n_sets();
  b.entries.assign(static_cast<size_t>(b.rows) * b.cols, 0);
  for (int m = 0; m < b.cols; ++m)
    for (int db : p.sets[static_cast<size_t>(m)])
      b.entries[static_cast<size_t>(db - 1) * b.cols + m] = 1;
  return b;
}

CollusionPattern non_colluding(int n) {
  if (n < 1) throw Error(Errc::bad_params, "N must be positive");
  std::vector<std::vector<int>> sets;
  for (int i = 1; i <= n; ++i) sets.push_back({i});
  return normalize(sets, n);
}

CollusionPattern t_colluding(int n, int t) {
  if (n < 1 || t < 1 || t > n) throw Error(Errc::bad_params, "need 1 <= T <= N");
  std::vector<std::vector<int>> sets;
  std::vector<int> pick(static_cast<size_t>(t));
  // enumerate all size-t subsets of [1:n]
  auto rec = [&](auto&& self, int start, int depth) -> void {
    if (depth == t) {
      sets.push_back(pick);
      return;
    }
    for (int v = start; v <= n - (t - depth - 1); ++v) {
      pick[static_cast<size_t>(depth)] = v;
      self(self, v + 1, depth + 1);
    }
  };
  rec(rec, 1, 0);
  return normalize(sets, n);
}

CollusionPattern cyclic(int n, int t) {
  if (n < 1 || t < 1 || t > n) throw Error(Errc::bad_params, "need 1 <= T <= N");
  std::vector<std::vector<int>> sets;
  for (int i = 0; i < n; ++i) {
    std::vector<int> w;
    for (int j = 0; j < t; ++j) w.push_back((i + j) % n + 1);
    sets.push_back(std::move(w));
  }
  return normalize(sets, n);
}

CollusionPattern disjoint(const std::vector<std::pair<int, int>>& blocks) {
  if (blocks.empty()) throw Error(Errc::bad_params, "need at least one block");
  int total = 0;
  std::vector<std::vector<int>> sets;
  for (auto [nj, tj] : blocks) {
    if (nj < 1 || tj < 1 || tj > nj) throw Error(Errc::bad_params, "need 1 <= T_j <= N_j");
    CollusionPattern block = t_colluding(nj, tj);
    for (auto s : block.sets) {
      for (int& v : s) v += total;
      sets.push_back(std::move(s));
    }
    total += nj;
  }
  return normalize(sets, total);
}

std::string to_string(const CollusionPattern& p) {
  std::ostringstream os;
  os << "{";
  for (int m = 0; m < p.n_sets(); ++m) {
    os << (m ? ", {" : "{");
    const auto& s = p.sets[static_cast<size_t>(m)];
    for (size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
    os << "}";
  }
  os << "}";
  return os.str();
}

}  // namespace pir::pattern
