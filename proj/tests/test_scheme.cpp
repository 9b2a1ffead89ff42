#include <doctest.h>

#include "pir/capacity.hpp"
#include "pir/json_io.hpp"
#include "pir/scheme.hpp"
#include "testutil.hpp"

using namespace pir;
using namespace pir::scheme;

namespace {

const std::vector<Rational> y_p4 = {Rational(1, 4), Rational(1, 4), Rational(1, 4),
                                    Rational(1, 2), Rational(1, 2)};
const std::vector<Rational> y_p1 = {Rational(1, 3), Rational(1, 3), Rational(1, 3),
                                    Rational(2, 3), Rational(1)};

bool all_counts_integral(const std::vector<Rational>& y, const Rational& s, int k,
                         long long block) {
  for (int j = 1; j <= k; ++j) {
    Rational base = pow_rational(1 / s, static_cast<unsigned>(k)) *
                    pow_rational(s - 1, static_cast<unsigned>(j - 1)) * block;
    for (const auto& yn : y)
      if (!is_integer(base * yn)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("choose_block_length reproduces the worked message lengths, minimally") {
  SUBCASE("P4: L = 343, and no proper divisor works") {
    Rational s(7, 4);
    CHECK(choose_block_length(y_p4, s, 3) == 343);
    for (long long d : {1, 7, 49}) CHECK_FALSE(all_counts_integral(y_p4, s, 3, d));
    CHECK(all_counts_integral(y_p4, s, 3, 343));
  }
  SUBCASE("P1: L = 64, and no proper divisor works") {
    Rational s(8, 3);
    CHECK(choose_block_length(y_p1, s, 2) == 64);
    for (long long d : {1, 2, 4, 8, 16, 32}) CHECK_FALSE(all_counts_integral(y_p1, s, 2, d));
  }
  SUBCASE("two replicated databases") {
    CHECK(choose_block_length({Rational(1), Rational(1)}, Rational(2), 2) == 4);
  }
  SUBCASE("minimality on random feasible y") {
    Rng rng(101);
    for (int i = 0; i < 40; ++i) {
      auto pat = pirtest::random_pattern(rng, 5, 6);
      auto sol = ratlp::solve(ratlp::build_lp1(pattern::incidence(pat)));
      int k = 2 + static_cast<int>(rng.below(2));
      Rational s = sol.value;
      if (s == 0) continue;
      long long l = choose_block_length(sol.vector, s, k);
      CHECK(all_counts_integral(sol.vector, s, k, l));
      // minimal: no proper divisor admits integral counts
      for (long long d = 1; d <= l / 2; ++d)
        if (l % d == 0) CHECK_FALSE(all_counts_integral(sol.vector, s, k, d));
    }
  }
}

TEST_CASE("choose_field picks the smallest workable prime") {
  CHECK(choose_field(y_p4, Rational(7, 4), 3) == 197);  // largest code is (196,112)
  CHECK(choose_field({Rational(1), Rational(1)}, Rational(2), 2) == 5);  // (4,2) code
  CHECK(choose_field({Rational(1)}, Rational(1), 1) == 2);  // no MDS block at all
}

TEST_CASE("allocate_queries splits budgets proportionally and contiguously") {
  SUBCASE("P4 singles match the worked query table") {
    auto subsets = allocate_queries(y_p4, Rational(7, 4), 3, 343);
    const SubsetInfo* singles = nullptr;
    for (const auto& s : subsets)
      if (s.members == std::vector<int>{1}) singles = &s;
    REQUIRE(singles);
    CHECK(singles->budget == 112);
    const std::vector<std::pair<long long, long long>> want = {
        {0, 16}, {16, 16}, {32, 16}, {48, 32}, {80, 32}};
    CHECK(singles->ranges == want);
  }
  SUBCASE("P1 pairwise sums match the worked query table") {
    auto subsets = allocate_queries(y_p1, Rational(8, 3), 2, 64);
    const SubsetInfo* pair = nullptr;
    for (const auto& s : subsets)
      if (s.members == std::vector<int>{1, 2}) pair = &s;
    REQUIRE(pair);
    CHECK(pair->budget == 40);
    const std::vector<std::pair<long long, long long>> want = {
        {0, 5}, {5, 5}, {10, 5}, {15, 10}, {25, 15}};
    CHECK(pair->ranges == want);
  }
  SUBCASE("a database with y_n = 0 receives nothing") {
    auto subsets = allocate_queries({Rational(1), Rational(0)}, Rational(1), 2, 2);
    for (const auto& s : subsets) CHECK(s.ranges[1].second == 0);
  }
  SUBCASE("an L not from choose_block_length is rejected") {
    CHECK_THROWS_WITH_AS(allocate_queries(y_p1, Rational(8, 3), 2, 32),
                         doctest::Contains("IntegralityViolation"), Error);
  }
}

TEST_CASE("synthesize builds the worked plans") {
  SUBCASE("P4") {
    auto plan = synthesize(pirtest::p4(), 3, 1, 7);
    CHECK(plan.block_length == 343);
    CHECK(plan.field == 197);
    CHECK(plan.s == Rational(7, 4));
    CHECK(plan.y == y_p4);
    auto mat = materialize(plan);
    REQUIRE(mat.mds_by_size.count(1));
    REQUIRE(mat.mds_by_size.count(2));
    CHECK(mat.mds_by_size.at(1).rows == 196);  // (196,112) code
    CHECK(mat.mds_by_size.at(1).cols == 112);
    CHECK(mat.mds_by_size.at(2).rows == 147);  // (147,84) code
    CHECK(mat.mds_by_size.at(2).cols == 84);
    // two undesired-subset classes per undesired message
    CHECK(mat.class_row_offset[1].size() == 2);
    CHECK(mat.class_row_offset[2].size() == 2);
  }
  SUBCASE("two non-colluding databases") {
    auto plan = synthesize(pattern::non_colluding(2), 2, 1, 3);
    CHECK(plan.block_length == 4);
    auto mat = materialize(plan);
    CHECK(mat.mds_by_size.at(1).rows == 4);
    CHECK(mat.mds_by_size.at(1).cols == 2);
  }
  SUBCASE("P2 queries only the first two databases") {
    auto plan = synthesize(pirtest::p2(), 2, 1, 5);
    CHECK(plan.block_length == 4);
    CHECK(plan.rows_for_db(1) == 3);
    CHECK(plan.rows_for_db(2) == 3);
    for (int db = 3; db <= 5; ++db) CHECK(plan.rows_for_db(db) == 0);
  }
  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(synthesize(pirtest::p1(), 2, 3, 0), Error);
    CHECK_THROWS_AS(synthesize(pirtest::p1(), 0, 1, 0), Error);
    SynthesizeOptions opts;
    opts.y = std::vector<Rational>{Rational(2), Rational(0), Rational(0), Rational(0), Rational(0)};
    CHECK_THROWS_AS(synthesize(pirtest::p1(), 2, 1, 0, opts), Error);  // infeasible y
  }
}

TEST_CASE("budget and download identities") {
  Rng rng(113);
  for (int i = 0; i < 30; ++i) {
    auto pat = pirtest::random_pattern(rng, 5, 6);
    int k = 1 + static_cast<int>(rng.below(3));
    int theta = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(k)));
    auto plan = synthesize(pat, k, theta, rng.next());
    if (plan.block_length > 512) continue;

    // desired budgets partition [1:L]
    long long desired = 0;
    for (const auto& sub : plan.subsets)
      if (sub.mask & (1u << (theta - 1))) desired += sub.budget;
    CHECK(desired == plan.block_length);

    // total download realizes the capacity formula for this y
    CHECK(plan.plan_rate() == capacity::capacity_from_s(plan.s, k));

    // privacy budget chain: every colluding set observes at most alpha_i
    // coordinates of each MDS block
    for (const auto& t_set : pat.sets) {
      for (const auto& sub : plan.subsets) {
        bool has_theta = sub.mask & (1u << (theta - 1));
        if (has_theta || sub.budget == 0) continue;
        const auto& ext = plan.subset(sub.mask | (1u << (theta - 1)));
        long long seen = 0;
        for (int db : t_set)
          seen += sub.ranges[static_cast<size_t>(db - 1)].second +
                  ext.ranges[static_cast<size_t>(db - 1)].second;
        CHECK(seen <= sub.budget);
      }
    }
  }
}

TEST_CASE("the degenerate S = 1 scheme downloads everything") {
  SynthesizeOptions opts;
  opts.y = std::vector<Rational>{Rational(1, 2), Rational(1, 2)};
  auto plan = synthesize(pattern::normalize({{1, 2}}, 2), 2, 1, 9, opts);
  CHECK(plan.s == 1);
  CHECK(plan.block_length == 2);
  CHECK(plan.subset(0b01u).budget == 2);
  CHECK(plan.subset(0b10u).budget == 2);
  CHECK(plan.subset(0b11u).budget == 0);  // mixed sums vanish at S = 1
  CHECK(plan.plan_rate() == Rational(1, 2));
}

TEST_CASE("re-synthesis with the same seed is byte-identical") {
  auto a = synthesize(pirtest::p1(), 2, 1, 42);
  auto b = synthesize(pirtest::p1(), 2, 1, 42);
  CHECK(io::plan_to_json(a).dump() == io::plan_to_json(b).dump());
  auto ma = materialize(a);
  auto mb = materialize(b);
  CHECK(ma.mixing == mb.mixing);
  CHECK(ma.mds_by_size == mb.mds_by_size);
  CHECK(ma.coded == mb.coded);
}

TEST_CASE("per-database row counts do not depend on theta") {
  for (int k = 2; k <= 3; ++k) {
    auto base = synthesize(pirtest::p1(), k, 1, 1);
    for (int theta = 2; theta <= k; ++theta) {
      auto other = synthesize(pirtest::p1(), k, theta, 1);
      for (int db = 1; db <= 5; ++db) CHECK(base.rows_for_db(db) == other.rows_for_db(db));
    }
  }
}

TEST_CASE("encode satisfies the structural invariants") {
  auto plan = synthesize(pirtest::p1(), 2, 1, 77);
  auto mat = materialize(plan);
  auto messages = std::vector<std::vector<uint32_t>>{
      std::vector<uint32_t>(64, 0), std::vector<uint32_t>(64, 0)};
  Rng rng(5);
  for (auto& w : messages)
    for (auto& v : w) v = static_cast<uint32_t>(rng.below(plan.field));
  auto enc = encode(plan, mat, messages);

  // desired message: chunks concatenate to U_theta * W_theta
  gf::FieldMatrix w1(64, 1, plan.field);
  for (int i = 0; i < 64; ++i) w1.at(i, 0) = messages[0][static_cast<size_t>(i)];
  gf::FieldMatrix mixed = mul(mat.mixing[0], w1);
  const auto& direct = enc.per_message[0].at(0b01u);
  const auto& paired = enc.per_message[0].at(0b11u);
  REQUIRE(direct.size() == 24);
  REQUIRE(paired.size() == 40);
  for (int i = 0; i < 24; ++i) CHECK(direct[static_cast<size_t>(i)] == mixed.at(i, 0));
  for (int i = 0; i < 40; ++i) CHECK(paired[static_cast<size_t>(i)] == mixed.at(24 + i, 0));

  // undesired message: the extension computed through the MDS code matches
  const auto& x2 = enc.per_message[1].at(0b10u);
  const auto& x12 = enc.per_message[1].at(0b11u);
  const gf::FieldMatrix& g = mat.mds_by_size.at(1);
  gf::FieldMatrix rhs(24, 1, plan.field);
  for (int i = 0; i < 24; ++i) rhs.at(i, 0) = x2[static_cast<size_t>(i)];
  std::vector<int> top(24);
  for (int i = 0; i < 24; ++i) top[static_cast<size_t>(i)] = i;
  gf::FieldMatrix info = solve_linear(take_rows(g, top), rhs);
  for (int r = 24; r < 64; ++r) {
    uint64_t acc = 0;
    for (int c = 0; c < 24; ++c) acc += static_cast<uint64_t>(g.at(r, c)) * info.at(c, 0);
    CHECK(x12[static_cast<size_t>(r - 24)] == acc % plan.field);
  }
}
