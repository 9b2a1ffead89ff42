#include <doctest.h>

#include "pir/capacity.hpp"
#include "pir/sim.hpp"
#include "testutil.hpp"

using namespace pir;
using namespace pir::sim;

TEST_CASE("query row counts match the worked tables") {
  SUBCASE("P4: 93 rows on DB1-3, 186 on DB4-5") {
    auto plan = scheme::synthesize(pirtest::p4(), 3, 1, 1);
    auto queries = build_queries(plan, scheme::materialize(plan));
    const std::vector<int> want = {93, 93, 93, 186, 186};
    for (int db = 0; db < 5; ++db)
      CHECK(queries[static_cast<size_t>(db)].rows.rows == want[static_cast<size_t>(db)]);
  }
  SUBCASE("P1: 11/11/11/22/33 rows") {
    auto plan = scheme::synthesize(pirtest::p1(), 2, 1, 1);
    auto queries = build_queries(plan, scheme::materialize(plan));
    const std::vector<int> want = {11, 11, 11, 22, 33};
    for (int db = 0; db < 5; ++db)
      CHECK(queries[static_cast<size_t>(db)].rows.rows == want[static_cast<size_t>(db)]);
  }
  SUBCASE("a database with y_n = 0 gets no rows") {
    auto plan = scheme::synthesize(pirtest::p2(), 2, 1, 1);  // y* = (1,1,0,0,0)
    auto queries = build_queries(plan, scheme::materialize(plan));
    CHECK(queries[2].rows.rows == 0);
    CHECK(queries[3].rows.rows == 0);
    CHECK(queries[4].rows.rows == 0);
  }
}

TEST_CASE("P1 table structure: DB5's first pairwise sum is a50 + b50") {
  auto plan = scheme::synthesize(pirtest::p1(), 2, 1, 1);
  auto mat = scheme::materialize(plan);
  auto queries = build_queries(plan, mat);
  // DB5 rows: 9 singles of a, 9 of b, then the 15 sums starting at x_{12}(26)
  const auto& rows = queries[4].rows;
  REQUIRE(rows.rows == 33);
  const int l = 64;
  // first sum row = 9 + 9 = row 18; x_{{1,2}} coordinate 25 (0-based) is the
  // 50th a and the 50th b: U_1 row 24+25 = 49 and coded_2 row 24+25 = 49.
  for (int c = 0; c < l; ++c) {
    CHECK(rows.at(18, c) == mat.mixing[0].at(49, c));
    CHECK(rows.at(18, l + c) == mat.coded[1].at(49, c));
  }
  // the a-part of the first direct row is U_1 row 9+6+1-1 = DB5's a16: offset 15
  for (int c = 0; c < l; ++c) {
    CHECK(rows.at(0, c) == mat.mixing[0].at(15, c));
    CHECK(rows.at(0, l + c) == 0);
  }
}

TEST_CASE("answers are exact linear maps") {
  auto plan = scheme::synthesize(pirtest::p1(), 2, 1, 3);
  auto mat = scheme::materialize(plan);
  auto queries = build_queries(plan, mat);
  const uint32_t q = plan.field;
  const int l = static_cast<int>(plan.block_length);

  SUBCASE("zero messages give zero answers") {
    std::vector<std::vector<uint32_t>> zero(2, std::vector<uint32_t>(static_cast<size_t>(l), 0));
    for (const auto& query : queries) {
      Answer a = answer(zero, query);
      for (uint32_t v : a.symbols) CHECK(v == 0);
    }
  }
  SUBCASE("a unit coefficient row reads one symbol") {
    Query probe;
    probe.database = 1;
    probe.rows = gf::FieldMatrix(1, 2 * l, q);
    probe.rows.at(0, 5) = 1;  // e_6 on W_1
    std::vector<std::vector<uint32_t>> msgs(2, std::vector<uint32_t>(static_cast<size_t>(l), 0));
    msgs[0][5] = 37 % q;
    CHECK(answer(msgs, probe).symbols[0] == 37 % q);
  }
  SUBCASE("linearity") {
    Rng rng(9);
    auto m1 = random_messages(plan, rng.next());
    auto m2 = random_messages(plan, rng.next());
    std::vector<std::vector<uint32_t>> sum(2, std::vector<uint32_t>(static_cast<size_t>(l)));
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < l; ++i)
        sum[static_cast<size_t>(k)][static_cast<size_t>(i)] =
            gf::add_mod(m1[static_cast<size_t>(k)][static_cast<size_t>(i)],
                        m2[static_cast<size_t>(k)][static_cast<size_t>(i)], q);
    for (const auto& query : queries) {
      Answer a1 = answer(m1, query);
      Answer a2 = answer(m2, query);
      Answer as = answer(sum, query);
      for (size_t i = 0; i < as.symbols.size(); ++i)
        CHECK(as.symbols[i] == gf::add_mod(a1.symbols[i], a2.symbols[i], q));
    }
  }
  SUBCASE("dimension mismatch is rejected") {
    std::vector<std::vector<uint32_t>> bad(2, std::vector<uint32_t>(3, 0));
    CHECK_THROWS_WITH_AS(answer(bad, queries[0]), doctest::Contains("DimensionMismatch"), Error);
  }
}

TEST_CASE("end-to-end decode on the worked examples") {
  SUBCASE("P4 decodes with the paper's download count") {
    auto plan = scheme::synthesize(pirtest::p4(), 3, 1, 11);
    auto messages = random_messages(plan, 23);
    Transcript t = run(plan, messages);
    CHECK(t.decoded == messages[0]);
    CHECK(t.downloaded == 651);  // 112*3 + 84*3 + 63
    CHECK(measured_rate(t) == Rational(49, 93));
  }
  SUBCASE("K = 1 downloads exactly L") {
    auto plan = scheme::synthesize(pirtest::p1(), 1, 1, 2);
    auto messages = random_messages(plan, 3);
    Transcript t = run(plan, messages);
    CHECK(t.decoded == messages[0]);
    CHECK(t.downloaded == plan.block_length);
    CHECK(measured_rate(t) == 1);
  }
  SUBCASE("two non-colluding databases reach rate 2/3") {
    auto plan = scheme::synthesize(pattern::non_colluding(2), 2, 1, 4);
    auto messages = random_messages(plan, 5);
    Transcript t = run(plan, messages);
    CHECK(t.decoded == messages[0]);
    CHECK(t.downloaded == 6);
    CHECK(measured_rate(t) == Rational(2, 3));
  }
}

TEST_CASE("measured rate equals the capacity formula for any feasible y") {
  // a deliberately suboptimal uniform y on P1: y = (1/3)1_N, S = 5/3
  scheme::SynthesizeOptions opts;
  opts.y = std::vector<Rational>(5, Rational(1, 3));
  auto plan = scheme::synthesize(pirtest::p1(), 2, 1, 6, opts);
  auto messages = random_messages(plan, 7);
  Transcript t = run(plan, messages);
  CHECK(t.decoded == messages[0]);
  CHECK(measured_rate(t) == capacity::capacity_from_s(Rational(5, 3), 2));
}

TEST_CASE("decode succeeds across seeds and theta on the golden patterns") {
  struct Case {
    pattern::CollusionPattern pat;
    int k;
    int seeds;
  };
  const std::vector<Case> cases = {
      {pirtest::p1(), 2, 100}, {pirtest::p2(), 2, 100}, {pirtest::p3(), 2, 100},
      {pirtest::p5(), 2, 100}, {pirtest::p6(), 2, 100}, {pirtest::p4(), 3, 12},
  };
  for (const auto& c : cases) {
    for (int seed = 0; seed < c.seeds; ++seed) {
      int theta = 1 + seed % c.k;
      auto plan = scheme::synthesize(c.pat, c.k, theta, static_cast<uint64_t>(seed));
      auto messages = random_messages(plan, static_cast<uint64_t>(seed) + 1000);
      Transcript t = run(plan, messages);
      REQUIRE(t.decoded == messages[static_cast<size_t>(theta - 1)]);
      REQUIRE(measured_rate(t) == capacity::capacity_from_s(plan.s, c.k));
    }
  }
}
