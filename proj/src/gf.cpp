#include "pir/gf.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pir::gf {

bool is_prime(uint32_t q) {
  if (q < 2) return false;
  if (q % 2 == 0) return q == 2;
  for (uint64_t d = 3; d * d <= q; d += 2)
    if (q % d == 0) return false;
  return true;
}

uint32_t next_prime(uint32_t n) {
  uint32_t q = n < 2 ? 2 : n;
  while (!is_prime(q)) ++q;
  return q;
}

uint32_t add_mod(uint32_t a, uint32_t b, uint32_t q) {
  uint32_t s = a + b;
  return s >= q ? s - q : s;
}

uint32_t sub_mod(uint32_t a, uint32_t b, uint32_t q) { return a >= b ? a - b : a + q - b; }

uint32_t mul_mod(uint32_t a, uint32_t b, uint32_t q) {
  return static_cast<uint32_t>(static_cast<uint64_t>(a) * b % q);
}

uint32_t pow_mod(uint32_t a, uint64_t e, uint32_t q) {
  uint32_t acc = 1 % q;
  uint32_t base = a % q;
  while (e) {
    if (e & 1) acc = mul_mod(acc, base, q);
    base = mul_mod(base, base, q);
    e >>= 1;
  }
  return acc;
}

uint32_t inv_mod(uint32_t a, uint32_t q) {
  if (a % q == 0) throw Error(Errc::bad_params, "zero has no inverse");
  return pow_mod(a, q - 2, q);
}

FieldMatrix identity(int n, uint32_t q) {
  FieldMatrix m(n, n, q);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

namespace {

// Barrett reduction: one multiply-high instead of a 64-bit division on the
// elimination and product hot paths. Valid for any a < 2^62 and prime q.
struct Barrett {
  uint32_t q;
  uint64_t magic;  // floor(2^64 / q); q >= 2 everywhere (prime)

  explicit Barrett(uint32_t modulus)
      : q(modulus),
        magic(static_cast<uint64_t>((static_cast<unsigned __int128>(1) << 64) / modulus)) {}

  // a mod q for a < 2^62: the estimated quotient undershoots floor(a/q) by at
  // most 2, so at most two subtractions correct it.
  uint32_t reduce(uint64_t a) const {
    uint64_t est = static_cast<uint64_t>((static_cast<unsigned __int128>(a) * magic) >> 64);
    uint64_t r = a - est * q;
    while (r >= q) r -= q;
    return static_cast<uint32_t>(r);
  }
};

// Row update a[r] -= f * a[p] for all rows below the pivot. The two kernels
// are kept separate on purpose: the serial one is the reference the parallel
// one is tested against. Results are bitwise identical because the per-row
// updates are independent and exact.

void eliminate_below_serial(FieldMatrix& m, int prow, int pcol, int row_begin) {
  const Barrett bar(m.q);
  const uint32_t* piv = m.row(prow);
  for (int r = row_begin; r < m.rows; ++r) {
    uint32_t* row = m.row(r);
    uint32_t f = row[pcol];
    if (f == 0) continue;
    const uint64_t neg = m.q - f;  // row - f*piv == row + (q-f)*piv
    for (int c = pcol; c < m.cols; ++c)
      row[c] = bar.reduce(row[c] + neg * piv[c]);
  }
}

void scale_row(FieldMatrix& m, int r, uint32_t f) {
  uint32_t* row = m.row(r);
  for (int c = 0; c < m.cols; ++c) row[c] = mul_mod(row[c], f, m.q);
}

// Reference elimination: plain loops, one pivot at a time.
std::vector<int> echelon_serial(FieldMatrix& m, int limit_cols) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < limit_cols && r < m.rows; ++c) {
    int pr = -1;
    for (int i = r; i < m.rows && pr < 0; ++i)
      if (m.at(i, c) != 0) pr = i;
    if (pr < 0) continue;
    if (pr != r)
      for (int j = 0; j < m.cols; ++j) std::swap(m.at(pr, j), m.at(r, j));
    scale_row(m, r, inv_mod(m.at(r, c), m.q));
    eliminate_below_serial(m, r, c, r + 1);
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

// Production elimination: one parallel region for the whole sweep, pivot
// bookkeeping in `single` blocks and the row updates workshared. The update
// order per row is fixed and the arithmetic exact, so the result is bitwise
// identical to the serial reference.
std::vector<int> echelon_parallel(FieldMatrix& m, int limit_cols) {
  std::vector<int> pivots;
#ifndef _OPENMP
  return echelon_serial(m, limit_cols);
#else
  const Barrett bar(m.q);
#pragma omp parallel shared(pivots)
  {
    // Every thread tracks the pivot row privately; the updates are identical
    // on all threads because have_pivot is broadcast by copyprivate, which
    // also keeps a later single block from overwriting it before every
    // thread has acted on it.
    int r = 0;
    bool have_pivot = false;
    for (int c = 0; c < limit_cols && r < m.rows; ++c) {
#pragma omp single copyprivate(have_pivot)
      {
        int pr = -1;
        for (int i = r; i < m.rows && pr < 0; ++i)
          if (m.at(i, c) != 0) pr = i;
        have_pivot = pr >= 0;
        if (have_pivot) {
          if (pr != r)
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(pr, j), m.at(r, j));
          scale_row(m, r, inv_mod(m.at(r, c), m.q));
          pivots.push_back(c);
        }
      }  // barrier + broadcast publish the pivot row and the flag
      if (!have_pivot) continue;
      const uint32_t* piv = m.row(r);
#pragma omp for schedule(static)
      for (int i = r + 1; i < m.rows; ++i) {
        uint32_t* row = m.row(i);
        uint32_t f = row[c];
        if (f == 0) continue;
        const uint64_t neg = m.q - f;
        for (int j = c; j < m.cols; ++j)
          row[j] = bar.reduce(row[j] + neg * piv[j]);
      }  // implicit barrier before the next pivot search
      ++r;
    }
  }
  return pivots;
#endif
}

// Crossover measured on small-core hosts: per-pivot barriers eat the gain
// until the matrices pass a few hundred rows.
constexpr long long kParallelEliminationCells = 512LL * 512;
constexpr long long kParallelProductOps = 1LL << 19;

std::vector<int> echelon(FieldMatrix& m, int limit_cols, Exec exec) {
  if (exec == Exec::automatic)
    exec = static_cast<long long>(m.rows) * m.cols >= kParallelEliminationCells
               ? Exec::parallel
               : Exec::serial;
  return exec == Exec::parallel ? echelon_parallel(m, limit_cols)
                                : echelon_serial(m, limit_cols);
}

}  // namespace

int rank(FieldMatrix m, Exec exec) {
  return static_cast<int>(echelon(m, m.cols, exec).size());
}

FieldMatrix mul(const FieldMatrix& a, const FieldMatrix& b, Exec exec) {
  if (a.cols != b.rows || a.q != b.q)
    throw Error(Errc::dimension_mismatch, "matrix product shape mismatch");
  FieldMatrix out(a.rows, b.cols, a.q);
  const Barrett bar(a.q);
  auto body = [&](int i) {
    uint32_t* dst = out.row(i);
    const uint32_t* ar = a.row(i);
    for (int k = 0; k < a.cols; ++k) {
      uint32_t f = ar[k];
      if (f == 0) continue;
      const uint32_t* br = b.row(k);
      for (int j = 0; j < b.cols; ++j)
        dst[j] = bar.reduce(dst[j] + static_cast<uint64_t>(f) * br[j]);
    }
  };
  if (exec == Exec::automatic)
    exec = static_cast<long long>(a.rows) * a.cols * b.cols >= kParallelProductOps
               ? Exec::parallel
               : Exec::serial;
  if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < a.rows; ++i) body(i);
  } else {
    for (int i = 0; i < a.rows; ++i) body(i);
  }
  return out;
}

FieldMatrix solve_linear(const FieldMatrix& a, const FieldMatrix& b, Exec exec) {
  if (a.rows != b.rows || a.q != b.q)
    throw Error(Errc::dimension_mismatch, "solve needs matching row counts and field");
  // Augment [a | b] and reduce.
  FieldMatrix aug(a.rows, a.cols + b.cols, a.q);
  for (int r = 0; r < a.rows; ++r) {
    for (int c = 0; c < a.cols; ++c) aug.at(r, c) = a.at(r, c);
    for (int c = 0; c < b.cols; ++c) aug.at(r, a.cols + c) = b.at(r, c);
  }
  std::vector<int> pivots = echelon(aug, a.cols, exec);
  if (static_cast<int>(pivots.size()) < a.cols)
    throw Error(Errc::rank_deficient, "coefficient matrix lacks full column rank");
  for (int r = a.cols; r < a.rows; ++r)
    for (int c = 0; c < b.cols; ++c)
      if (aug.at(r, a.cols + c) != 0)
        throw Error(Errc::inconsistent, "system has no solution");
  // Back-substitute; pivot rows are already normalized.
  FieldMatrix x(a.cols, b.cols, a.q);
  for (int r = a.cols - 1; r >= 0; --r) {
    for (int c = 0; c < b.cols; ++c) {
      uint64_t acc = aug.at(r, a.cols + c);
      for (int j = r + 1; j < a.cols; ++j)
        acc += static_cast<uint64_t>(aug.at(r, j)) * (a.q - x.at(j, c));
      x.at(r, c) = static_cast<uint32_t>(acc % a.q);
    }
  }
  return x;
}

FieldMatrix random_matrix(int rows, int cols, uint32_t q, Rng& rng) {
  FieldMatrix m(rows, cols, q);
  for (auto& v : m.a) v = static_cast<uint32_t>(rng.below(q));
  return m;
}

FieldMatrix random_full_rank(int n, uint32_t q, Rng& rng) {
  if (n < 1) throw Error(Errc::bad_params, "matrix size must be positive");
  for (;;) {
    FieldMatrix m = random_matrix(n, n, q, rng);
    if (rank(m) == n) return m;
  }
}

FieldMatrix vandermonde_mds(int code_len, int dim, uint32_t q) {
  if (dim < 0 || dim > code_len) throw Error(Errc::bad_params, "need 0 <= dim <= code_len");
  if (static_cast<uint32_t>(code_len) > q)
    throw Error(Errc::field_too_small,
                "field of size " + std::to_string(q) + " cannot seat " +
                    std::to_string(code_len) + " distinct evaluation points");
  FieldMatrix m(code_len, dim, q);
  for (int j = 0; j < code_len; ++j) {
    uint32_t x = static_cast<uint32_t>(j) % q;
    uint32_t p = 1 % q;
    for (int c = 0; c < dim; ++c) {
      m.at(j, c) = p;
      p = mul_mod(p, x, q);
    }
  }
  return m;
}

FieldMatrix take_rows(const FieldMatrix& m, const std::vector<int>& rows) {
  FieldMatrix out(static_cast<int>(rows.size()), m.cols, m.q);
  for (size_t i = 0; i < rows.size(); ++i)
    for (int c = 0; c < m.cols; ++c) out.at(static_cast<int>(i), c) = m.at(rows[i], c);
  return out;
}

}  // namespace pir::gf
