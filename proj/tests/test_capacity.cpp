#include <doctest.h>

#include "pir/capacity.hpp"
#include "testutil.hpp"

using namespace pir;
using namespace pir::capacity;

TEST_CASE("capacity_from_s golden values") {
  CHECK(capacity_from_s(Rational(8, 3), 2) == Rational(8, 11));
  CHECK(capacity_from_s(Rational(7, 4), 3) == Rational(49, 93));
  for (int k = 1; k <= 6; ++k) CHECK(capacity_from_s(Rational(1), k) == Rational(1, k));
  CHECK_THROWS_WITH_AS(capacity_from_s(Rational(0), 2), doctest::Contains("NonPositiveS"), Error);
  CHECK_THROWS_WITH_AS(capacity_from_s(Rational(-1), 2), doctest::Contains("NonPositiveS"), Error);
}

TEST_CASE("capacity_from_s is monotone") {
  // strictly increasing in s for fixed K >= 2
  Rational prev;
  bool first = true;
  for (long long num = 1; num <= 12; ++num) {
    Rational c = capacity_from_s(Rational(num, 3), 3);
    if (!first) CHECK(c > prev);
    prev = c;
    first = false;
  }
  // strictly decreasing in K for fixed s > 1
  for (int k = 1; k <= 5; ++k)
    CHECK(capacity_from_s(Rational(5, 2), k + 1) < capacity_from_s(Rational(5, 2), k));
}

TEST_CASE("capacity_of_pattern matches the known closed forms") {
  for (int n = 1; n <= 6; ++n)
    for (int k = 1; k <= 4; ++k)
      CHECK(capacity_of_pattern(pattern::non_colluding(n), k).value ==
            closed_form(SpecialKind::non_colluding, n, 0, {}, k));
  for (int n = 2; n <= 6; ++n)
    for (int t = 1; t <= n; ++t) {
      CHECK(capacity_of_pattern(pattern::t_colluding(n, t), 2).value ==
            closed_form(SpecialKind::t_colluding, n, t, {}, 2));
      CHECK(capacity_of_pattern(pattern::cyclic(n, t), 2).value ==
            closed_form(SpecialKind::cyclic, n, t, {}, 2));
    }
}

TEST_CASE("closed_form golden values") {
  CHECK(closed_form(SpecialKind::t_colluding, 4, 2, {}, 2) == Rational(2, 3));
  CHECK(closed_form(SpecialKind::cyclic, 4, 2, {}, 2) == Rational(2, 3));
  CHECK(closed_form(SpecialKind::disjoint, 0, 0, {{2, 2}, {2, 2}}, 2) == Rational(2, 3));
  CHECK_THROWS_AS(closed_form(SpecialKind::t_colluding, 3, 5, {}, 2), Error);
}

TEST_CASE("disjoint closed form matches the LP on random configurations") {
  Rng rng(71);
  for (int i = 0; i < 25; ++i) {
    int blocks = 1 + static_cast<int>(rng.below(3));
    std::vector<std::pair<int, int>> cfg;
    int total = 0;
    for (int b = 0; b < blocks && total < 7; ++b) {
      int nj = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(std::min(3, 7 - total))));
      int tj = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(nj)));
      cfg.emplace_back(nj, tj);
      total += nj;
    }
    int k = 1 + static_cast<int>(rng.below(4));
    CHECK(capacity_of_pattern(pattern::disjoint(cfg), k).value ==
          closed_form(SpecialKind::disjoint, 0, 0, cfg, k));
  }
}

TEST_CASE("capacity result carries consistent optima") {
  auto r = capacity_of_pattern(pirtest::p1(), 2);
  CHECK(r.s_star == Rational(8, 3));
  CHECK(r.value == Rational(8, 11));
  CHECK(r.y_star == std::vector<Rational>{Rational(1, 3), Rational(1, 3), Rational(1, 3),
                                          Rational(2, 3), Rational(1)});
  Rational sum = 0;
  for (const auto& v : r.x_star) sum += v;
  CHECK(sum == r.s_star);
}

TEST_CASE("adding a colluding set never increases S* or the capacity") {
  Rng rng(83);
  for (int i = 0; i < 40; ++i) {
    auto pat = pirtest::random_pattern(rng, 6, 6);
    auto before = capacity_of_pattern(pat, 2);
    // add one random set and renormalize
    std::vector<int> extra;
    for (int db = 1; db <= pat.n_databases; ++db)
      if (rng.below(2) == 0) extra.push_back(db);
    if (extra.empty()) extra.push_back(1);
    auto sets = pat.sets;
    sets.push_back(extra);
    auto after = capacity_of_pattern(pattern::normalize(sets, pat.n_databases), 2);
    CHECK(after.s_star <= before.s_star);
    CHECK(after.value <= before.value);
  }
}
