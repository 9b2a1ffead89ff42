#include "pir/sim.hpp"

#include <algorithm>

namespace pir::sim {

namespace {

// Source row (within U_theta or coded[k]) for coordinate t of x_K^[k].
long long source_row(const scheme::SchemePlan& plan, const scheme::Materialized& mat, int msg,
                     uint32_t mask, long long t) {
  if (msg == plan.theta) return mat.desired_row_offset.at(mask) + t;
  bool with_theta = mask & (1u << (plan.theta - 1));
  uint32_t cmask = with_theta ? (mask & ~(1u << (plan.theta - 1))) : mask;
  long long off = mat.class_row_offset[static_cast<size_t>(msg - 1)].at(cmask);
  if (with_theta) off += plan.subset(cmask).budget;
  return off + t;
}

}  // namespace

std::vector<Query> build_queries(const scheme::SchemePlan& plan,
                                 const scheme::Materialized& mat) {
  const int n = plan.pat.n_databases;
  const int k = plan.k_messages;
  const int l = static_cast<int>(plan.block_length);
  std::vector<Query> out;
  for (int db = 1; db <= n; ++db) {
    Query q;
    q.database = db;
    q.rows = gf::FieldMatrix(static_cast<int>(plan.rows_for_db(db)), k * l, plan.field);
    int r = 0;
    for (const auto& sub : plan.subsets) {
      auto [start, len] = sub.ranges[static_cast<size_t>(db - 1)];
      for (long long t = start; t < start + len; ++t, ++r) {
        uint32_t* dst = q.rows.row(r);
        for (int msg : sub.members) {
          const gf::FieldMatrix& src = msg == plan.theta
                                           ? mat.mixing[static_cast<size_t>(msg - 1)]
                                           : mat.coded[static_cast<size_t>(msg - 1)];
          const uint32_t* coeff = src.row(static_cast<int>(source_row(plan, mat, msg, sub.mask, t)));
          std::copy(coeff, coeff + l, dst + static_cast<long long>(msg - 1) * l);
        }
      }
    }
    out.push_back(std::move(q));
  }
  return out;
}

Answer answer(const std::vector<std::vector<uint32_t>>& messages, const Query& q) {
  long long total = 0;
  for (const auto& w : messages) total += static_cast<long long>(w.size());
  if (total != q.rows.cols)
    throw Error(Errc::dimension_mismatch, "query width does not match message lengths");
  Answer a;
  a.database = q.database;
  a.symbols.resize(static_cast<size_t>(q.rows.rows));
  const uint32_t mod = q.rows.q;
  for (int r = 0; r < q.rows.rows; ++r) {
    const uint32_t* row = q.rows.row(r);
    uint64_t acc = 0;
    long long c = 0;
    for (const auto& w : messages)
      for (uint32_t v : w) {
        acc += static_cast<uint64_t>(row[c++]) * v;
        if (acc >> 62) acc %= mod;
      }
    a.symbols[static_cast<size_t>(r)] = static_cast<uint32_t>(acc % mod);
  }
  return a;
}

std::vector<uint32_t> decode(const scheme::SchemePlan& plan, const scheme::Materialized& mat,
                             const std::vector<Answer>& answers) {
  const int n = plan.pat.n_databases;
  const int l = static_cast<int>(plan.block_length);
  const uint32_t q = plan.field;
  if (static_cast<int>(answers.size()) != n)
    throw Error(Errc::decode_failure, "answers from every database are required");

  // Reassemble the downloaded sum vector of each subset from per-database
  // slices; database rows follow the canonical subset order.
  std::vector<long long> cursor(static_cast<size_t>(n), 0);
  std::map<uint32_t, std::vector<uint32_t>> sums;
  for (const auto& sub : plan.subsets) {
    std::vector<uint32_t> d(static_cast<size_t>(sub.budget));
    for (int db = 1; db <= n; ++db) {
      auto [start, len] = sub.ranges[static_cast<size_t>(db - 1)];
      const auto& sy = answers[static_cast<size_t>(db - 1)].symbols;
      for (long long t = 0; t < len; ++t) {
        if (cursor[static_cast<size_t>(db - 1)] >= static_cast<long long>(sy.size()))
          throw Error(Errc::decode_failure, "answer from database " + std::to_string(db) +
                                                " is shorter than the plan requires");
        d[static_cast<size_t>(start + t)] = sy[static_cast<size_t>(cursor[static_cast<size_t>(db - 1)]++)];
      }
    }
    sums[sub.mask] = std::move(d);
  }

  // Singles first, then ascending subset size (the canonical order): extend
  // every interference-only sum through its MDS code.
  std::map<uint32_t, std::vector<uint32_t>> extension;  // mask without theta -> sum of x_{K u theta}
  for (const auto& sub : plan.subsets) {
    if (sub.mask & (1u << (plan.theta - 1))) continue;
    int dim = static_cast<int>(sub.budget);
    const gf::FieldMatrix& g = mat.mds_by_size.at(static_cast<int>(sub.members.size()));
    if (dim == 0) {
      extension[sub.mask] = {};
      continue;
    }
    gf::FieldMatrix rhs(dim, 1, q);
    const auto& d = sums.at(sub.mask);
    for (int i = 0; i < dim; ++i) rhs.at(i, 0) = d[static_cast<size_t>(i)];
    std::vector<int> top(static_cast<size_t>(dim));
    for (int i = 0; i < dim; ++i) top[static_cast<size_t>(i)] = i;
    gf::FieldMatrix info;
    try {
      info = gf::solve_linear(gf::take_rows(g, top), rhs);
    } catch (const Error& e) {
      throw Error(Errc::decode_failure, "MDS extension failed: " + std::string(e.what()));
    }
    std::vector<uint32_t> ext(static_cast<size_t>(g.rows - dim));
    for (int r = dim; r < g.rows; ++r) {
      uint64_t acc = 0;
      for (int c = 0; c < dim; ++c)
        acc += static_cast<uint64_t>(g.at(r, c)) * info.at(c, 0);
      ext[static_cast<size_t>(r - dim)] = static_cast<uint32_t>(acc % q);
    }
    extension[sub.mask] = std::move(ext);
  }

  // Subtract interference, stack the clean x_L^[theta] chunks, invert U_theta.
  gf::FieldMatrix stacked(l, 1, q);
  for (const auto& sub : plan.subsets) {
    if (!(sub.mask & (1u << (plan.theta - 1)))) continue;
    uint32_t rest = sub.mask & ~(1u << (plan.theta - 1));
    const auto& d = sums.at(sub.mask);
    long long off = mat.desired_row_offset.at(sub.mask);
    for (long long t = 0; t < sub.budget; ++t) {
      uint32_t v = d[static_cast<size_t>(t)];
      if (rest) {
        const auto& ext = extension.at(rest);
        if (static_cast<long long>(ext.size()) != sub.budget)
          throw Error(Errc::decode_failure, "interference extension has the wrong length");
        v = gf::sub_mod(v, ext[static_cast<size_t>(t)], q);
      }
      stacked.at(static_cast<int>(off + t), 0) = v;
    }
  }
  gf::FieldMatrix w;
  try {
    w = gf::solve_linear(mat.mixing[static_cast<size_t>(plan.theta - 1)], stacked);
  } catch (const Error& e) {
    throw Error(Errc::decode_failure, "mixing inversion failed: " + std::string(e.what()));
  }
  std::vector<uint32_t> out(static_cast<size_t>(l));
  for (int i = 0; i < l; ++i) out[static_cast<size_t>(i)] = w.at(i, 0);
  return out;
}

Transcript run(const scheme::SchemePlan& plan,
               const std::vector<std::vector<uint32_t>>& messages) {
  scheme::Materialized mat = scheme::materialize(plan);
  Transcript t;
  t.plan = plan;
  t.queries = build_queries(plan, mat);
  for (const auto& q : t.queries) {
    t.answers.push_back(answer(messages, q));
    t.downloaded += static_cast<long long>(t.answers.back().symbols.size());
  }
  t.decoded = decode(plan, mat, t.answers);
  return t;
}

std::vector<std::vector<uint32_t>> random_messages(const scheme::SchemePlan& plan,
                                                   uint64_t seed) {
  Rng rng(mix_seed(seed, 0x4d534753));
  std::vector<std::vector<uint32_t>> out;
  for (int k = 0; k < plan.k_messages; ++k) {
    std::vector<uint32_t> w(static_cast<size_t>(plan.block_length));
    for (auto& v : w) v = static_cast<uint32_t>(rng.below(plan.field));
    out.push_back(std::move(w));
  }
  return out;
}

Rational measured_rate(const Transcript& t) {
  if (t.downloaded <= 0) throw Error(Errc::bad_params, "empty transcript");
  return Rational(t.plan.block_length) / t.downloaded;
}

}  // namespace pir::sim
