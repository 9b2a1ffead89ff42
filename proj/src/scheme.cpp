#include "pir/scheme.hpp"

#include <algorithm>
#include <bit>

#include "pir/ratlp.hpp"

namespace pir::scheme {

namespace {

// (1/s)^(K-1) * (s-1)^(|subset|-1) * L, the symbol budget of one subset.
// pow_rational treats 0^0 as 1, so size-1 subsets keep their budget at s = 1
// while larger ones vanish and the scheme degenerates to downloading every
// message in full.
Rational budget_rational(const Rational& s, int k, int subset_size, long long block_length) {
  return pow_rational(1 / s, static_cast<unsigned>(k - 1)) *
         pow_rational(s - 1, static_cast<unsigned>(subset_size - 1)) * block_length;
}

std::vector<int> mask_members(uint32_t mask) {
  std::vector<int> out;
  for (int k = 1; mask; ++k, mask >>= 1)
    if (mask & 1) out.push_back(k);
  return out;
}

std::vector<uint32_t> canonical_masks(int k) {
  std::vector<uint32_t> masks;
  for (uint32_t m = 1; m < (1u << k); ++m) masks.push_back(m);
  std::sort(masks.begin(), masks.end(), [](uint32_t a, uint32_t b) {
    int pa = std::popcount(a), pb = std::popcount(b);
    if (pa != pb) return pa < pb;
    return mask_members(a) < mask_members(b);
  });
  return masks;
}

// Per-size budgets for sizes 1..k (index 0 unused). Sizes beyond k get 0.
std::vector<long long> budgets_by_size(const std::vector<Rational>& y, const Rational& s, int k,
                                       long long block_length) {
  std::vector<long long> budget(static_cast<size_t>(k) + 2, 0);
  for (int j = 1; j <= k; ++j) {
    Rational b = budget_rational(s, k, j, block_length);
    if (!is_integer(b))
      throw Error(Errc::integrality_violation,
                  "budget of size-" + std::to_string(j) + " subsets is not an integer at L = " +
                      std::to_string(block_length));
    budget[static_cast<size_t>(j)] = to_int64(num(b));
  }
  return budget;
}

uint32_t field_for(const std::vector<long long>& budget, int k) {
  long long max_code = 0;
  for (int j = 1; j < k; ++j)
    max_code = std::max(max_code, budget[static_cast<size_t>(j)] + budget[static_cast<size_t>(j) + 1]);
  if (max_code > static_cast<long long>(1u << 30))
    throw Error(Errc::too_large, "MDS code length " + std::to_string(max_code));
  return gf::next_prime(static_cast<uint32_t>(std::max(2LL, max_code)));
}

}  // namespace

const SubsetInfo& SchemePlan::subset(uint32_t mask) const {
  for (const auto& s : subsets)
    if (s.mask == mask) return s;
  throw Error(Errc::internal_invariant_broken, "unknown subset mask");
}

long long SchemePlan::rows_for_db(int db) const {
  long long total = 0;
  for (const auto& s : subsets) total += s.ranges[static_cast<size_t>(db - 1)].second;
  return total;
}

long long SchemePlan::total_rows() const {
  long long total = 0;
  for (const auto& s : subsets) total += s.budget;
  return total;
}

Rational SchemePlan::plan_rate() const { return Rational(block_length) / total_rows(); }

long long choose_block_length(const std::vector<Rational>& y, const Rational& s, int k) {
  if (k < 1) throw Error(Errc::bad_params, "need at least one message");
  if (y.empty()) throw Error(Errc::bad_params, "empty allocation vector");
  if (s <= 0) throw Error(Errc::non_positive_s, "scheme needs sum(y) > 0");
  Int l = 1;
  for (int j = 1; j <= k; ++j) {
    Rational base = pow_rational(1 / s, static_cast<unsigned>(k)) *
                    pow_rational(s - 1, static_cast<unsigned>(j - 1));
    for (const auto& yn : y)
      l = boost::multiprecision::lcm(l, den(base * yn));
  }
  return to_int64(l);
}

uint32_t choose_field(const std::vector<Rational>& y, const Rational& s, int k) {
  long long block_length = choose_block_length(y, s, k);
  return field_for(budgets_by_size(y, s, k, block_length), k);
}

std::vector<SubsetInfo> allocate_queries(const std::vector<Rational>& y, const Rational& s,
                                         int k, long long block_length) {
  if (s <= 0) throw Error(Errc::non_positive_s, "scheme needs sum(y) > 0");
  std::vector<long long> budget = budgets_by_size(y, s, k, block_length);
  std::vector<SubsetInfo> out;
  for (uint32_t mask : canonical_masks(k)) {
    SubsetInfo info;
    info.mask = mask;
    info.members = mask_members(mask);
    info.budget = budget[static_cast<size_t>(info.members.size())];
    long long acc = 0;
    for (const auto& yn : y) {
      Rational share = Rational(info.budget) * yn / s;
      if (!is_integer(share))
        throw Error(Errc::integrality_violation,
                    "database share " + to_fraction(share) + " is not an integer; L = " +
                        std::to_string(block_length) + " was not chosen by choose_block_length");
      long long len = to_int64(num(share));
      info.ranges.emplace_back(acc, len);
      acc += len;
    }
    if (acc != info.budget)
      throw Error(Errc::internal_invariant_broken, "allocation does not partition the budget");
    out.push_back(std::move(info));
  }
  return out;
}

SchemePlan synthesize(const pattern::CollusionPattern& p, int k, int theta, uint64_t seed,
                      const SynthesizeOptions& opts) {
  if (k < 1) throw Error(Errc::bad_params, "need at least one message");
  if (theta < 1 || theta > k) throw Error(Errc::bad_params, "theta must be in [1:K]");
  if (k > 20) throw Error(Errc::too_large, "2^K subsets; K capped at 20");

  auto b = pattern::incidence(p);
  std::vector<Rational> y;
  if (opts.y) {
    y = *opts.y;
    auto lp1 = ratlp::build_lp1(b);
    if (!ratlp::is_feasible(lp1, y))
      throw Error(Errc::bad_params, "supplied y is not a feasible LP1 point");
  } else {
    auto sol = ratlp::solve(ratlp::build_lp1(b));
    if (sol.status != ratlp::LpStatus::optimal)
      throw Error(Errc::internal_invariant_broken, "LP1 must be solvable for a valid pattern");
    y = std::move(sol.vector);
  }

  SchemePlan plan;
  plan.pat = p;
  plan.k_messages = k;
  plan.theta = theta;
  plan.y = y;
  plan.s = 0;
  for (const auto& yn : y) plan.s += yn;
  if (plan.s <= 0) throw Error(Errc::non_positive_s, "supplied y sums to zero");
  plan.block_length = choose_block_length(y, plan.s, k);
  plan.seed = seed;
  plan.subsets = allocate_queries(y, plan.s, k, plan.block_length);

  uint32_t needed = field_for(budgets_by_size(y, plan.s, k, plan.block_length), k);
  if (opts.field) {
    if (!gf::is_prime(*opts.field)) throw Error(Errc::bad_params, "forced field must be prime");
    plan.field = *opts.field;
    plan.mds_mode = plan.field >= needed ? MdsMode::vandermonde : MdsMode::sampled;
  } else {
    plan.field = needed;
    plan.mds_mode = MdsMode::vandermonde;
  }
  return plan;
}

namespace {

// Classes of message k: non-empty subsets containing k but not theta, in
// canonical order. Returned as masks.
std::vector<uint32_t> classes_of(const SchemePlan& plan, int k) {
  std::vector<uint32_t> out;
  for (const auto& s : plan.subsets) {
    bool has_k = s.mask & (1u << (k - 1));
    bool has_theta = s.mask & (1u << (plan.theta - 1));
    if (has_k && !has_theta) out.push_back(s.mask);
  }
  return out;
}

// Indices of MDS code coordinates a colluding set observes for one class:
// positions t for the x_K slice plus alpha + t for the x_{K u theta} slice.
std::vector<int> observed_code_rows(const SchemePlan& plan, uint32_t class_mask,
                                    const std::vector<int>& dbs) {
  const SubsetInfo& base = plan.subset(class_mask);
  const SubsetInfo& ext = plan.subset(class_mask | (1u << (plan.theta - 1)));
  long long alpha = base.budget;
  std::vector<int> rows;
  for (int db : dbs) {
    auto [s1, l1] = base.ranges[static_cast<size_t>(db - 1)];
    for (long long t = s1; t < s1 + l1; ++t) rows.push_back(static_cast<int>(t));
    auto [s2, l2] = ext.ranges[static_cast<size_t>(db - 1)];
    for (long long t = s2; t < s2 + l2; ++t) rows.push_back(static_cast<int>(alpha + t));
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return rows;
}

gf::FieldMatrix sampled_generator(const SchemePlan& plan, int class_size, int code_len, int dim,
                                  Rng& rng) {
  // Forced small fields cannot seat a Vandermonde code. Sample a generator
  // whose decode block (rows 0..dim-1) is invertible and whose observed row
  // sets are independent for every colluding set of this plan's pattern.
  // All subsets of one size share their allocation, so one representative
  // class suffices for the check.
  uint32_t class_mask = 0;
  for (const auto& s : plan.subsets)
    if (static_cast<int>(s.members.size()) == class_size &&
        !(s.mask & (1u << (plan.theta - 1)))) {
      class_mask = s.mask;
      break;
    }
  if (class_mask == 0)
    throw Error(Errc::internal_invariant_broken, "no class of the requested size");
  for (int attempt = 0; attempt < 200000; ++attempt) {
    gf::FieldMatrix g = gf::random_matrix(code_len, dim, plan.field, rng);
    std::vector<int> top(static_cast<size_t>(dim));
    for (int i = 0; i < dim; ++i) top[static_cast<size_t>(i)] = i;
    if (gf::rank(gf::take_rows(g, top)) != dim) continue;
    bool ok = true;
    for (const auto& t : plan.pat.sets) {
      std::vector<int> rows = observed_code_rows(plan, class_mask, t);
      if (static_cast<int>(rows.size()) > dim ||
          gf::rank(gf::take_rows(g, rows)) != static_cast<int>(rows.size())) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw Error(Errc::field_too_small,
              "no generator over F_" + std::to_string(plan.field) + " satisfies the plan");
}

}  // namespace

namespace {

void draw_mixing(const SchemePlan& plan, Materialized& mat, uint64_t mixing_seed) {
  const long long big_l = plan.block_length;
  if (big_l > (1 << 14))
    throw Error(Errc::too_large,
                "materializing L = " + std::to_string(big_l) + " mixing matrices");
  const int l = static_cast<int>(big_l);
  Rng rng(mix_seed(mixing_seed, 0x4d495831));
  mat.mixing.clear();
  for (int i = 0; i < plan.k_messages; ++i)
    mat.mixing.push_back(gf::random_full_rank(l, plan.field, rng));
}

void build_coded(const SchemePlan& plan, Materialized& mat) {
  const int k = plan.k_messages;
  const int l = static_cast<int>(plan.block_length);
  mat.coded.assign(static_cast<size_t>(k), gf::FieldMatrix());
  mat.class_row_offset.assign(static_cast<size_t>(k), {});
  for (int msg = 1; msg <= k; ++msg) {
    if (msg == plan.theta) continue;
    gf::FieldMatrix coded(l, l, plan.field);
    long long out_row = 0;
    long long in_row = 0;
    for (uint32_t cmask : classes_of(plan, msg)) {
      const SubsetInfo& cls = plan.subset(cmask);
      int dim = static_cast<int>(cls.budget);
      if (dim == 0) {
        mat.class_row_offset[static_cast<size_t>(msg - 1)][cmask] = out_row;
        continue;
      }
      const gf::FieldMatrix& g = mat.mds_by_size.at(static_cast<int>(cls.members.size()));
      // coded rows [out_row, out_row + code_len) = g * U_msg[in_row : in_row + dim)
      std::vector<int> chunk(static_cast<size_t>(dim));
      for (int t = 0; t < dim; ++t) chunk[static_cast<size_t>(t)] = static_cast<int>(in_row) + t;
      gf::FieldMatrix block =
          gf::mul(g, gf::take_rows(mat.mixing[static_cast<size_t>(msg - 1)], chunk));
      std::copy(block.a.begin(), block.a.end(),
                coded.a.begin() + static_cast<long long>(out_row) * l);
      mat.class_row_offset[static_cast<size_t>(msg - 1)][cmask] = out_row;
      out_row += g.rows;
      in_row += dim;
    }
    if (out_row != l || Rational(in_row) != Rational(l) / plan.s)
      throw Error(Errc::internal_invariant_broken, "coded stack must fill L rows from L/S inputs");
    mat.coded[static_cast<size_t>(msg - 1)] = std::move(coded);
  }
}

}  // namespace

Materialized materialize(const SchemePlan& plan, std::optional<uint64_t> mixing_seed) {
  const int k = plan.k_messages;
  Materialized mat;
  draw_mixing(plan, mat, mixing_seed.value_or(plan.seed));

  std::vector<long long> budget = budgets_by_size(plan.y, plan.s, k, plan.block_length);
  for (int j = 1; j < k; ++j) {
    int dim = static_cast<int>(budget[static_cast<size_t>(j)]);
    int code_len = dim + static_cast<int>(budget[static_cast<size_t>(j) + 1]);
    if (plan.mds_mode == MdsMode::vandermonde) {
      mat.mds_by_size[j] = gf::vandermonde_mds(code_len, dim, plan.field);
    } else {
      Rng mds_rng(mix_seed(plan.seed, 0x4d445300u + static_cast<uint32_t>(j)));
      mat.mds_by_size[j] = code_len == 0 ? gf::FieldMatrix(0, 0, plan.field)
                                         : sampled_generator(plan, j, code_len, dim, mds_rng);
    }
  }

  build_coded(plan, mat);

  long long off = 0;
  for (const auto& s : plan.subsets) {
    if (!(s.mask & (1u << (plan.theta - 1)))) continue;
    mat.desired_row_offset[s.mask] = off;
    off += s.budget;
  }
  if (off != plan.block_length)
    throw Error(Errc::internal_invariant_broken, "desired budgets must sum to L");
  return mat;
}

void redraw_mixing(const SchemePlan& plan, Materialized& mat, uint64_t mixing_seed) {
  draw_mixing(plan, mat, mixing_seed);
  build_coded(plan, mat);
}

EncodedSymbols encode(const SchemePlan& plan, const Materialized& mat,
                      const std::vector<std::vector<uint32_t>>& messages) {
  const int k = plan.k_messages;
  const int l = static_cast<int>(plan.block_length);
  if (static_cast<int>(messages.size()) != k)
    throw Error(Errc::dimension_mismatch, "need K messages");
  for (const auto& w : messages)
    if (static_cast<int>(w.size()) != l)
      throw Error(Errc::dimension_mismatch, "message length must be L");

  auto apply = [&](const gf::FieldMatrix& m, const std::vector<uint32_t>& w) {
    std::vector<uint32_t> out(static_cast<size_t>(m.rows), 0);
    for (int r = 0; r < m.rows; ++r) {
      uint64_t acc = 0;
      const uint32_t* row = m.row(r);
      for (int c = 0; c < m.cols; ++c) acc += static_cast<uint64_t>(row[c]) * w[static_cast<size_t>(c)];
      out[static_cast<size_t>(r)] = static_cast<uint32_t>(acc % m.q);
    }
    return out;
  };

  EncodedSymbols enc;
  enc.per_message.resize(static_cast<size_t>(k));
  for (int msg = 1; msg <= k; ++msg) {
    const std::vector<uint32_t> image =
        apply(msg == plan.theta ? mat.mixing[static_cast<size_t>(msg - 1)]
                                : mat.coded[static_cast<size_t>(msg - 1)],
              messages[static_cast<size_t>(msg - 1)]);
    for (const auto& sub : plan.subsets) {
      if (!(sub.mask & (1u << (msg - 1)))) continue;
      long long start;
      if (msg == plan.theta) {
        start = mat.desired_row_offset.at(sub.mask);
      } else {
        bool with_theta = sub.mask & (1u << (plan.theta - 1));
        uint32_t cmask = with_theta ? (sub.mask & ~(1u << (plan.theta - 1))) : sub.mask;
        start = mat.class_row_offset[static_cast<size_t>(msg - 1)].at(cmask);
        if (with_theta) start += plan.subset(cmask).budget;
      }
      enc.per_message[static_cast<size_t>(msg - 1)][sub.mask] = std::vector<uint32_t>(
          image.begin() + start, image.begin() + start + sub.budget);
    }
  }
  return enc;
}

}  // namespace pir::scheme
