#include "pir/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <string>
#include <unordered_map>

#include "pir/sim.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pir::privacy {

namespace {

// View coefficient rows of message `msg` as seen by the databases in `dbs`:
// for every subset containing msg, the rows its allocation places on those
// databases, restricted to the L columns acting on W_msg.
gf::FieldMatrix view_block(const scheme::SchemePlan& plan, const scheme::Materialized& mat,
                           const std::vector<int>& dbs, int msg) {
  const int l = static_cast<int>(plan.block_length);
  long long count = 0;
  for (const auto& sub : plan.subsets) {
    if (!(sub.mask & (1u << (msg - 1)))) continue;
    for (int db : dbs) count += sub.ranges[static_cast<size_t>(db - 1)].second;
  }
  gf::FieldMatrix rows(static_cast<int>(count), l, plan.field);
  int r = 0;
  for (const auto& sub : plan.subsets) {
    if (!(sub.mask & (1u << (msg - 1)))) continue;
    for (int db : dbs) {
      auto [start, len] = sub.ranges[static_cast<size_t>(db - 1)];
      for (long long t = start; t < start + len; ++t, ++r) {
        const gf::FieldMatrix& src = msg == plan.theta
                                         ? mat.mixing[static_cast<size_t>(msg - 1)]
                                         : mat.coded[static_cast<size_t>(msg - 1)];
        long long sr;
        if (msg == plan.theta) {
          sr = mat.desired_row_offset.at(sub.mask) + t;
        } else {
          bool with_theta = sub.mask & (1u << (plan.theta - 1));
          uint32_t cmask = with_theta ? (sub.mask & ~(1u << (plan.theta - 1))) : sub.mask;
          sr = mat.class_row_offset[static_cast<size_t>(msg - 1)].at(cmask);
          if (with_theta) sr += plan.subset(cmask).budget;
          sr += t;
        }
        std::copy(src.row(static_cast<int>(sr)), src.row(static_cast<int>(sr)) + l, rows.row(r));
      }
    }
  }
  return rows;
}

long long nonzero_rows(const gf::FieldMatrix& m) {
  long long count = 0;
  for (int r = 0; r < m.rows; ++r) {
    const uint32_t* row = m.row(r);
    bool nz = false;
    for (int c = 0; c < m.cols && !nz; ++c) nz = row[c] != 0;
    if (nz) ++count;
  }
  return count;
}

}  // namespace

PrivacyReport verify_rank_privacy(const scheme::SchemePlan& plan) {
  scheme::Materialized mat = scheme::materialize(plan);
  const int k = plan.k_messages;
  PrivacyReport report;
  report.pass = true;

  for (const auto& t_set : plan.pat.sets) {
    SetReport sr;
    sr.colluding_set = t_set;

    for (int msg = 1; msg <= k; ++msg) {
      gf::FieldMatrix block = view_block(plan, mat, t_set, msg);
      sr.row_counts.push_back(nonzero_rows(block));
      sr.ranks.push_back(gf::rank(std::move(block)));
    }
    sr.tau = sr.row_counts[0];
    sr.counts_equal = std::all_of(sr.row_counts.begin(), sr.row_counts.end(),
                                  [&](long long c) { return c == sr.tau; });
    sr.ranks_equal_tau = std::all_of(sr.ranks.begin(), sr.ranks.end(),
                                     [&](long long r) { return r == sr.tau; });
    // tau <= L/S, exactly
    sr.tau_within_bound = Rational(sr.tau) * plan.s <= Rational(plan.block_length);

    sr.mds_blocks_full_rank = true;
    for (int msg = 1; msg <= k && sr.mds_blocks_full_rank; ++msg) {
      if (msg == plan.theta) continue;
      for (const auto& sub : plan.subsets) {
        bool is_class = (sub.mask & (1u << (msg - 1))) && !(sub.mask & (1u << (plan.theta - 1)));
        if (!is_class) continue;
        long long alpha = sub.budget;
        if (alpha == 0) continue;
        const scheme::SubsetInfo& ext = plan.subset(sub.mask | (1u << (plan.theta - 1)));
        std::vector<int> idx;
        for (int db : t_set) {
          auto [s1, l1] = sub.ranges[static_cast<size_t>(db - 1)];
          for (long long t = s1; t < s1 + l1; ++t) idx.push_back(static_cast<int>(t));
          auto [s2, l2] = ext.ranges[static_cast<size_t>(db - 1)];
          for (long long t = s2; t < s2 + l2; ++t) idx.push_back(static_cast<int>(alpha + t));
        }
        std::sort(idx.begin(), idx.end());
        idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
        const gf::FieldMatrix& g = mat.mds_by_size.at(static_cast<int>(sub.members.size()));
        if (static_cast<long long>(idx.size()) > alpha ||
            gf::rank(gf::take_rows(g, idx)) != static_cast<int>(idx.size())) {
          sr.mds_blocks_full_rank = false;
          sr.detail = "MDS rows observed by the set exceed or fail rank alpha";
          break;
        }
      }
    }

    sr.pass = sr.counts_equal && sr.ranks_equal_tau && sr.tau_within_bound &&
              sr.mds_blocks_full_rank;
    if (sr.detail.empty() && !sr.pass) {
      if (!sr.counts_equal) sr.detail = "per-message view sizes differ";
      else if (!sr.ranks_equal_tau) sr.detail = "view rank below the view dimension";
      else sr.detail = "view dimension exceeds L/S";
    }
    if (!sr.pass) {
      report.pass = false;
      report.failing_witnesses.push_back(t_set);
    }
    report.sets.push_back(std::move(sr));
  }
  return report;
}

EmpiricalResult empirical_indistinguishability(const pattern::CollusionPattern& p,
                                               int k_messages, int theta_a, int theta_b,
                                               uint32_t q, long long trials, uint64_t seed,
                                               const EmpiricalOptions& opts) {
  if (trials <= 0) throw Error(Errc::too_large, "trials must be positive");
  if (theta_a < 1 || theta_a > k_messages || theta_b < 1 || theta_b > k_messages)
    throw Error(Errc::bad_params, "theta out of range");
  if (!gf::is_prime(q)) throw Error(Errc::bad_params, "field size must be prime");

  scheme::SynthesizeOptions sopts;
  sopts.y = opts.y;
  sopts.field = q;
  scheme::SchemePlan plan_a = scheme::synthesize(p, k_messages, theta_a, seed, sopts);
  scheme::SchemePlan plan_b = scheme::synthesize(p, k_messages, theta_b, seed, sopts);

  // Guard: views must be small enough to histogram.
  for (const auto& t_set : p.sets) {
    long long tau = 0;
    for (const auto& sub : plan_a.subsets) {
      if (!(sub.mask & 1u)) continue;  // count message 1's rows; all agree
      for (int db : t_set) tau += sub.ranges[static_cast<size_t>(db - 1)].second;
    }
    double bits = static_cast<double>(tau) * k_messages * std::log2(static_cast<double>(q));
    if (bits > opts.guard_log2)
      throw Error(Errc::too_large, "view space needs " + std::to_string(bits) + " bits");
  }

  std::vector<std::vector<uint32_t>> messages = sim::random_messages(plan_a, seed);
  for (auto& w : messages) {
    size_t salt = 0;
    while (std::all_of(w.begin(), w.end(), [](uint32_t v) { return v == 0; }))
      w[salt++ % w.size()] = 1;  // zero messages make every view degenerate
  }

  const int n_sets = p.n_sets();
  using Hist = std::unordered_map<std::string, long long>;
  std::vector<Hist> hist_a(static_cast<size_t>(n_sets)), hist_b(static_cast<size_t>(n_sets));

  auto run_side = [&](const scheme::SchemePlan& plan, std::vector<Hist>& hist, uint64_t tag) {
    const scheme::Materialized base = scheme::materialize(plan);
#ifdef _OPENMP
#pragma omp parallel
#endif
    {
      std::vector<Hist> local(static_cast<size_t>(n_sets));
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
      for (long long trial = 0; trial < trials; ++trial) {
        scheme::Materialized mat = base;
        scheme::redraw_mixing(plan, mat,
                              mix_seed(mix_seed(seed, tag), static_cast<uint64_t>(trial)));
        if (opts.leak_message)
          mat.mixing[static_cast<size_t>(*opts.leak_message - 1)] =
              gf::identity(static_cast<int>(plan.block_length), plan.field);
        std::vector<sim::Query> queries = sim::build_queries(plan, mat);
        std::vector<sim::Answer> answers;
        for (const auto& qq : queries) answers.push_back(sim::answer(messages, qq));
        for (int m = 0; m < n_sets; ++m) {
          std::string key;
          for (int db : p.sets[static_cast<size_t>(m)])
            for (uint32_t v : answers[static_cast<size_t>(db - 1)].symbols)
              key.append(reinterpret_cast<const char*>(&v), sizeof(v));
          ++local[static_cast<size_t>(m)][key];
        }
      }
#ifdef _OPENMP
#pragma omp critical
#endif
      for (int m = 0; m < n_sets; ++m)
        for (const auto& [key, count] : local[static_cast<size_t>(m)])
          hist[static_cast<size_t>(m)][key] += count;
    }
  };

  run_side(plan_a, hist_a, 0xA);
  run_side(plan_b, hist_b, 0xB);

  EmpiricalResult res;
  res.trials = trials;
  res.colluding_sets = p.sets;
  for (int m = 0; m < n_sets; ++m) {
    double tv = 0.0;
    const Hist& ha = hist_a[static_cast<size_t>(m)];
    const Hist& hb = hist_b[static_cast<size_t>(m)];
    for (const auto& [key, ca] : ha) {
      auto it = hb.find(key);
      long long cb = it == hb.end() ? 0 : it->second;
      tv += std::abs(static_cast<double>(ca) - static_cast<double>(cb));
    }
    for (const auto& [key, cb] : hb)
      if (!ha.count(key)) tv += static_cast<double>(cb);
    tv /= 2.0 * static_cast<double>(trials);
    res.tv_distance.push_back(tv);
    res.max_tv = std::max(res.max_tv, tv);
  }
  return res;
}

}  // namespace pir::privacy
