#include <doctest.h>

#include <map>

#include "pir/gf.hpp"

using namespace pir;
using namespace pir::gf;

TEST_CASE("primality helpers") {
  CHECK(is_prime(2));
  CHECK(is_prime(197));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(196));
  CHECK(next_prime(196) == 197);
  CHECK(next_prime(2) == 2);
  CHECK(next_prime(0) == 2);
  CHECK(next_prime(68) == 71);
}

TEST_CASE("field axioms hold exhaustively for small primes") {
  for (uint32_t q : {2u, 3u, 5u, 7u, 11u, 13u, 31u, 61u, 101u}) {
    for (uint32_t a = 1; a < q; ++a) {
      CHECK(mul_mod(a, inv_mod(a, q), q) == 1);
      for (uint32_t b = 0; b < q; ++b) {
        CHECK(add_mod(a, b, q) == (a + b) % q);
        CHECK(sub_mod(add_mod(a, b, q), b, q) == a);
      }
    }
  }
}

TEST_CASE("rank basics") {
  CHECK(rank(identity(4, 7)) == 4);
  CHECK(rank(FieldMatrix(3, 3, 5)) == 0);
  CHECK(rank(vandermonde_mds(6, 3, 11)) == 3);
}

TEST_CASE("serial and parallel kernels agree") {
  Rng rng(7);
  for (int i = 0; i < 30; ++i) {
    int r = 1 + static_cast<int>(rng.below(24));
    int c = 1 + static_cast<int>(rng.below(24));
    uint32_t q = i % 2 ? 67u : 2u;
    FieldMatrix m = random_matrix(r, c, q, rng);
    CHECK(rank(m, Exec::serial) == rank(m, Exec::parallel));
    FieldMatrix b = random_matrix(c, 3, q, rng);
    CHECK(mul(m, b, Exec::serial) == mul(m, b, Exec::parallel));
  }
}

TEST_CASE("random_full_rank always produces invertible matrices") {
  SUBCASE("n=1 over F_2 is always the unit") {
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
      FieldMatrix m = random_full_rank(1, 2, rng);
      CHECK(m.at(0, 0) == 1);
    }
  }
  SUBCASE("n=4 over F_2") {
    Rng rng(11);
    for (int i = 0; i < 50; ++i) CHECK(rank(random_full_rank(4, 2, rng)) == 4);
  }
  SUBCASE("deterministic given the seed") {
    Rng a(99), b(99);
    CHECK(random_full_rank(8, 13, a) == random_full_rank(8, 13, b));
  }
}

TEST_CASE("random_full_rank is uniform over GL(2,2)") {
  // oracle: enumerate the 6 invertible 2x2 binary matrices
  std::map<std::vector<uint32_t>, int> counts;
  int invertible = 0;
  for (uint32_t bits = 0; bits < 16; ++bits) {
    uint32_t a = bits & 1, b = (bits >> 1) & 1, c = (bits >> 2) & 1, d = (bits >> 3) & 1;
    if ((a & d) != (b & c)) {
      ++invertible;
      counts[{a, b, c, d}] = 0;
    }
  }
  REQUIRE(invertible == 6);
  Rng rng(2024);
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) {
    FieldMatrix m = random_full_rank(2, 2, rng);
    ++counts[{m.at(0, 0), m.at(0, 1), m.at(1, 0), m.at(1, 1)}];
  }
  for (const auto& [key, count] : counts) {
    double freq = static_cast<double>(count) / draws;
    CHECK(freq > (1.0 / 6) * 0.95);
    CHECK(freq < (1.0 / 6) * 1.05);
  }
}

TEST_CASE("vandermonde generators are MDS") {
  SUBCASE("(4,2) over F_5, every pair of rows invertible") {
    FieldMatrix g = vandermonde_mds(4, 2, 5);
    const std::vector<std::vector<uint32_t>> want = {{1, 0}, {1, 1}, {1, 2}, {1, 3}};
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 2; ++c) CHECK(g.at(r, c) == want[static_cast<size_t>(r)][static_cast<size_t>(c)]);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        // 2x2 determinant oracle
        uint32_t det = sub_mod(mul_mod(g.at(i, 0), g.at(j, 1), 5),
                               mul_mod(g.at(i, 1), g.at(j, 0), 5), 5);
        CHECK(det != 0);
      }
  }
  SUBCASE("(196,112) over F_197: random 112-row subsets have full rank") {
    FieldMatrix g = vandermonde_mds(196, 112, 197);
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<int> rows;
      std::vector<int> pool(196);
      for (int i = 0; i < 196; ++i) pool[static_cast<size_t>(i)] = i;
      for (int i = 0; i < 112; ++i) {
        size_t pick = rng.below(pool.size());
        rows.push_back(pool[pick]);
        pool.erase(pool.begin() + static_cast<long>(pick));
      }
      CHECK(rank(take_rows(g, rows)) == 112);
    }
  }
  SUBCASE("square case is invertible") { CHECK(rank(vandermonde_mds(7, 7, 11)) == 7); }
  SUBCASE("field too small") {
    CHECK_THROWS_WITH_AS(vandermonde_mds(4, 2, 3), doctest::Contains("FieldTooSmall"), Error);
  }
  SUBCASE("random subsets of random vandermonde shapes") {
    Rng rng(31);
    for (int trial = 0; trial < 1000; ++trial) {
      int dim = 1 + static_cast<int>(rng.below(5));
      int code = dim + static_cast<int>(rng.below(5));
      uint32_t q = next_prime(static_cast<uint32_t>(code));
      FieldMatrix g = vandermonde_mds(code, dim, q);
      std::vector<int> pool(static_cast<size_t>(code));
      for (int i = 0; i < code; ++i) pool[static_cast<size_t>(i)] = i;
      std::vector<int> rows;
      for (int i = 0; i < dim; ++i) {
        size_t pick = rng.below(pool.size());
        rows.push_back(pool[pick]);
        pool.erase(pool.begin() + static_cast<long>(pick));
      }
      CHECK(rank(take_rows(g, rows)) == dim);
    }
  }
}

TEST_CASE("solve_linear") {
  SUBCASE("identity system returns the rhs") {
    Rng rng(13);
    FieldMatrix b = random_matrix(5, 2, 11, rng);
    CHECK(solve_linear(identity(5, 11), b) == b);
  }
  SUBCASE("vandermonde interpolation recovers polynomial coefficients") {
    // p(x) = 3 + 2x + 5x^2 over F_7, evaluated at 0,1,2
    FieldMatrix v = vandermonde_mds(3, 3, 7);
    FieldMatrix rhs(3, 1, 7);
    for (int x = 0; x < 3; ++x)
      rhs.at(x, 0) = static_cast<uint32_t>((3 + 2 * x + 5 * x * x) % 7);
    FieldMatrix coef = solve_linear(v, rhs);
    CHECK(coef.at(0, 0) == 3);
    CHECK(coef.at(1, 0) == 2);
    CHECK(coef.at(2, 0) == 5);
  }
  SUBCASE("rank-deficient coefficient matrix") {
    FieldMatrix a(2, 2, 5);
    a.at(0, 0) = 1;
    a.at(0, 1) = 2;
    a.at(1, 0) = 2;
    a.at(1, 1) = 4;
    FieldMatrix b(2, 1, 5);
    CHECK_THROWS_WITH_AS(solve_linear(a, b), doctest::Contains("RankDeficient"), Error);
  }
  SUBCASE("inconsistent overdetermined system") {
    FieldMatrix a(3, 1, 5);
    a.at(0, 0) = 1;
    a.at(1, 0) = 1;
    a.at(2, 0) = 1;
    FieldMatrix b(3, 1, 5);
    b.at(0, 0) = 1;
    b.at(1, 0) = 2;
    CHECK_THROWS_WITH_AS(solve_linear(a, b), doctest::Contains("Inconsistent"), Error);
  }
  SUBCASE("random consistent systems round-trip") {
    Rng rng(17);
    for (int i = 0; i < 50; ++i) {
      int n = 1 + static_cast<int>(rng.below(12));
      uint32_t q = 13;
      FieldMatrix a = random_full_rank(n, q, rng);
      FieldMatrix x = random_matrix(n, 2, q, rng);
      CHECK(solve_linear(a, mul(a, x)) == x);
    }
  }
}
