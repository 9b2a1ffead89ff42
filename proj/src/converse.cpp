#include "pir/converse.hpp"

#include <algorithm>

#include "pir/ratlp.hpp"

namespace pir::converse {

namespace {

bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<int> set_union(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<int> set_intersection(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<long long> index_counts(const SubscriptCollection& c) {
  std::vector<long long> counts(static_cast<size_t>(c.n_databases) + 1, 0);
  for (const auto& s : c.sets)
    for (int v : s) ++counts[static_cast<size_t>(v)];
  return counts;
}

}  // namespace

std::pair<Int, std::vector<Int>> integerize(const std::vector<Rational>& x) {
  for (const auto& v : x)
    if (v < 0) throw Error(Errc::negative_entry, "x must be non-negative");
  Int g = lcm_of_denominators(x);
  std::vector<Int> gm;
  for (const auto& v : x) gm.push_back(num(v) * (g / den(v)));
  return {g, gm};
}

SubscriptCollection build_collection(const pattern::CollusionPattern& p,
                                     const std::vector<Int>& gm) {
  if (static_cast<int>(gm.size()) != p.n_sets())
    throw Error(Errc::dimension_mismatch, "one multiplicity per colluding set required");
  SubscriptCollection c;
  c.n_databases = p.n_databases;
  for (int m = 0; m < p.n_sets(); ++m) {
    if (gm[static_cast<size_t>(m)] < 0)
      throw Error(Errc::negative_entry, "multiplicities must be non-negative");
    long long copies = to_int64(gm[static_cast<size_t>(m)]);
    for (long long i = 0; i < copies; ++i) c.sets.push_back(p.sets[static_cast<size_t>(m)]);
  }
  return c;
}

std::optional<Int> even_property(const SubscriptCollection& c) {
  auto counts = index_counts(c);
  long long g = c.n_databases >= 1 ? counts[1] : 0;
  for (int n = 1; n <= c.n_databases; ++n)
    if (counts[static_cast<size_t>(n)] != g) return std::nullopt;
  return Int(g);
}

std::pair<SubscriptCollection, std::vector<Deletion>> delete_to_even(
    const SubscriptCollection& c, const Int& g) {
  long long target = to_int64(g);
  SubscriptCollection out = c;
  std::vector<Deletion> deletions;
  auto counts = index_counts(out);
  for (int n = 1; n <= out.n_databases; ++n) {
    long long have = counts[static_cast<size_t>(n)];
    if (have < target)
      throw Error(Errc::undercounted, "index " + std::to_string(n) + " appears " +
                                          std::to_string(have) + " < G = " + std::to_string(target));
    long long surplus = have - target;
    for (int pos = 0; pos < out.size() && surplus > 0; ++pos) {
      auto& s = out.sets[static_cast<size_t>(pos)];
      auto it = std::find(s.begin(), s.end(), n);
      if (it == s.end()) continue;
      s.erase(it);
      deletions.push_back({pos, n});
      --surplus;
    }
  }
  return {std::move(out), std::move(deletions)};
}

AlgorithmRun run_algorithm1(const SubscriptCollection& c) {
  if (!even_property(c))
    throw Error(Errc::bad_params, "the merge chain requires the even property");
  const int n = c.n_databases;
  std::vector<int> full(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) full[static_cast<size_t>(i)] = i + 1;

  AlgorithmRun run;
  run.final = c;
  auto& sets = run.final.sets;
  auto active = [&](int pos) {
    return !sets[static_cast<size_t>(pos)].empty() && sets[static_cast<size_t>(pos)] != full;
  };

  const long long step_cap = static_cast<long long>(n - 1 < 0 ? 0 : n - 1) * c.size();
  int a1 = -1;
  for (;;) {
    bool any_active = false;
    for (int pos = 0; pos < run.final.size() && !any_active; ++pos) any_active = active(pos);
    if (!any_active) break;

    if (a1 < 0 || !active(a1)) {
      // smallest-position maximal active set: nothing else strictly contains it
      a1 = -1;
      for (int pos = 0; pos < run.final.size() && a1 < 0; ++pos) {
        if (!active(pos)) continue;
        bool maximal = true;
        for (int other = 0; other < run.final.size() && maximal; ++other) {
          if (other == pos || !active(other)) continue;
          maximal = !(sets[static_cast<size_t>(pos)] != sets[static_cast<size_t>(other)] &&
                      subset_of(sets[static_cast<size_t>(pos)], sets[static_cast<size_t>(other)]));
        }
        if (maximal) a1 = pos;
      }
    }

    int a2 = -1;
    for (int pos = 0; pos < run.final.size() && a2 < 0; ++pos) {
      if (pos == a1 || !active(pos)) continue;
      if (!subset_of(sets[static_cast<size_t>(pos)], sets[static_cast<size_t>(a1)])) a2 = pos;
    }
    if (a2 < 0)
      throw Error(Errc::internal_invariant_broken,
                  "no merge partner exists; the even property should rule this out");

    MergeStep step;
    step.a1_pos = a1;
    step.a2_pos = a2;
    step.unioned = set_union(sets[static_cast<size_t>(a1)], sets[static_cast<size_t>(a2)]);
    step.intersected = set_intersection(sets[static_cast<size_t>(a1)], sets[static_cast<size_t>(a2)]);
    sets[static_cast<size_t>(a1)] = step.unioned;
    sets[static_cast<size_t>(a2)] = step.intersected;
    run.steps.push_back(std::move(step));
    if (static_cast<long long>(run.steps.size()) > step_cap)
      throw Error(Errc::internal_invariant_broken, "merge chain exceeded the (N-1)V bound");
  }
  return run;
}

Certificate certificate_from_x(const pattern::CollusionPattern& p,
                               const std::vector<Rational>& x, int k) {
  if (k < 1) throw Error(Errc::bad_params, "need at least one message");
  auto b = pattern::incidence(p);
  auto lp2 = ratlp::build_lp2(b);
  if (!ratlp::is_feasible(lp2, x))
    throw Error(Errc::bad_params, "x must satisfy Bx >= 1, x >= 0");

  Certificate cert;
  cert.pat = p;
  cert.k_messages = k;
  cert.x = x;
  auto [g, gm] = integerize(x);
  cert.g = g;
  cert.gm = gm;

  SubscriptCollection coll = build_collection(p, gm);
  auto even = even_property(coll);
  if (!even || *even != g) {
    auto [deleted, dels] = delete_to_even(coll, g);
    coll = std::move(deleted);
    cert.deletions = std::move(dels);
  }
  AlgorithmRun run = run_algorithm1(coll);
  cert.steps = std::move(run.steps);
  cert.final = std::move(run.final);

  Rational s2 = 0;
  for (const auto& v : x) s2 += v;
  cert.bound = capacity::capacity_from_s(s2, k);
  return cert;
}

std::pair<Rational, Certificate> converse_bound(const pattern::CollusionPattern& p, int k) {
  auto b = pattern::incidence(p);
  auto sol = ratlp::solve(ratlp::build_lp2(b));
  if (sol.status != ratlp::LpStatus::optimal)
    throw Error(Errc::internal_invariant_broken, "LP2 must be solvable for a valid pattern");
  Certificate cert = certificate_from_x(p, sol.vector, k);
  VerifyResult check = verify_certificate(cert, p);
  if (!check.ok)
    throw Error(Errc::internal_invariant_broken,
                "generated certificate failed verification: " + check.first_failure);
  return {cert.bound, cert};
}

VerifyResult verify_certificate(const Certificate& cert, const pattern::CollusionPattern& p) {
  auto fail = [](const std::string& why) { return VerifyResult{false, why}; };

  if (cert.pat != p) return fail("certificate pattern differs from the given pattern");
  if (cert.k_messages < 1) return fail("certificate has no messages");
  if (static_cast<int>(cert.x.size()) != p.n_sets()) return fail("x has the wrong length");

  // feasibility of x
  for (const auto& v : cert.x)
    if (v < 0) return fail("x has a negative entry");
  for (int n = 1; n <= p.n_databases; ++n) {
    Rational cover = 0;
    for (int m = 0; m < p.n_sets(); ++m)
      if (std::binary_search(p.sets[static_cast<size_t>(m)].begin(),
                             p.sets[static_cast<size_t>(m)].end(), n))
        cover += cert.x[static_cast<size_t>(m)];
    if (cover < 1) return fail("Bx >= 1 fails at database " + std::to_string(n));
  }

  // integerization
  if (cert.g < 1) return fail("G must be positive");
  if (cert.gm.size() != cert.x.size()) return fail("Gm has the wrong length");
  for (size_t m = 0; m < cert.x.size(); ++m) {
    if (cert.gm[m] < 0) return fail("Gm has a negative entry");
    if (Rational(cert.gm[m], cert.g) != cert.x[m])
      return fail("x_m != Gm_m / G at set " + std::to_string(m + 1));
  }

  SubscriptCollection coll = build_collection(p, cert.gm);
  if (coll.size() < 1) return fail("empty subscript collection");
  const long long g = to_int64(cert.g);

  // deletions: each removes a present, currently over-counted index
  auto counts = index_counts(coll);
  for (size_t i = 0; i < cert.deletions.size(); ++i) {
    const Deletion& d = cert.deletions[i];
    if (d.set_pos < 0 || d.set_pos >= coll.size())
      return fail("deletion " + std::to_string(i + 1) + " points outside the collection");
    auto& s = coll.sets[static_cast<size_t>(d.set_pos)];
    auto it = std::find(s.begin(), s.end(), d.index);
    if (it == s.end())
      return fail("deletion " + std::to_string(i + 1) + " removes an absent index");
    if (counts[static_cast<size_t>(d.index)] <= g)
      return fail("deletion " + std::to_string(i + 1) + " removes an index that is not over-counted");
    s.erase(it);
    --counts[static_cast<size_t>(d.index)];
  }
  {
    auto even = even_property(coll);
    if (!even || *even != cert.g)
      return fail("collection is not even with G after the deletions");
  }

  // merge steps: count conservation and proper incomparability at every step
  std::vector<int> full(static_cast<size_t>(p.n_databases));
  for (int i = 0; i < p.n_databases; ++i) full[static_cast<size_t>(i)] = i + 1;
  const long long step_cap = static_cast<long long>(p.n_databases - 1) * coll.size();
  if (static_cast<long long>(cert.steps.size()) > step_cap)
    return fail("step count exceeds (N-1)V");

  counts = index_counts(coll);
  for (size_t i = 0; i < cert.steps.size(); ++i) {
    const MergeStep& st = cert.steps[i];
    if (st.a1_pos < 0 || st.a1_pos >= coll.size() || st.a2_pos < 0 || st.a2_pos >= coll.size() ||
        st.a1_pos == st.a2_pos)
      return fail("step " + std::to_string(i + 1) + " has bad positions");
    const auto& a = coll.sets[static_cast<size_t>(st.a1_pos)];
    const auto& b2 = coll.sets[static_cast<size_t>(st.a2_pos)];
    if (subset_of(a, b2) || subset_of(b2, a))
      return fail("step " + std::to_string(i + 1) + " merges nested sets (trivial bound)");
    std::vector<int> u = set_union(a, b2);
    std::vector<int> v = set_intersection(a, b2);
    // Steps loaded from JSON carry positions only; a recorded union is never
    // empty (merged sets are non-empty), so emptiness marks "not recorded".
    if (!st.unioned.empty()) {
      if (st.unioned != u) return fail("step " + std::to_string(i + 1) + " records a wrong union");
      if (st.intersected != v)
        return fail("step " + std::to_string(i + 1) + " records a wrong intersection");
    }
    coll.sets[static_cast<size_t>(st.a1_pos)] = std::move(u);
    coll.sets[static_cast<size_t>(st.a2_pos)] = std::move(v);
    if (index_counts(coll) != counts)
      return fail("step " + std::to_string(i + 1) + " changed an index count");
  }

  // final form: exactly G full sets, the rest empty
  long long fulls = 0, empties = 0;
  for (const auto& s : coll.sets) {
    if (s == full) ++fulls;
    else if (s.empty()) ++empties;
    else return fail("final collection keeps a non-trivial set");
  }
  if (fulls != g) return fail("final collection has " + std::to_string(fulls) +
                              " full sets, expected " + std::to_string(g));
  if (empties != coll.size() - g) return fail("final collection has a wrong number of empties");
  if (!cert.final.sets.empty() && cert.final.sets != coll.sets)
    return fail("recorded final collection does not match the replay");

  Rational s2 = 0;
  for (const auto& v : cert.x) s2 += v;
  if (cert.bound != capacity::capacity_from_s(s2, cert.k_messages))
    return fail("recorded bound is not C(sum x, K)");

  return {true, ""};
}

}  // namespace pir::converse
