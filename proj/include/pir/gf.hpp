#pragma once

#include <cstdint>
#include <vector>

#include "pir/errors.hpp"
#include "pir/rng.hpp"

namespace pir::gf {

/// Which elimination/multiply kernel to run. `parallel` is the OpenMP path,
/// `serial` the plain-loop reference kept for testing and benchmarking
/// against it, and `automatic` (the default) picks by problem size: OpenMP
/// worksharing only pays off above a few hundred rows on small core counts.
/// All three produce identical results: row updates are independent and the
/// arithmetic is exact.
enum class Exec { serial, parallel, automatic };

bool is_prime(uint32_t q);
/// Smallest prime >= n (n >= 0; returns 2 for n <= 2).
uint32_t next_prime(uint32_t n);

uint32_t add_mod(uint32_t a, uint32_t b, uint32_t q);
uint32_t sub_mod(uint32_t a, uint32_t b, uint32_t q);
uint32_t mul_mod(uint32_t a, uint32_t b, uint32_t q);
uint32_t pow_mod(uint32_t a, uint64_t e, uint32_t q);
/// Multiplicative inverse of a != 0 in F_q (q prime).
uint32_t inv_mod(uint32_t a, uint32_t q);

/// Dense row-major matrix over the prime field F_q. Entries are reduced mod q.
struct FieldMatrix {
  int rows = 0;
  int cols = 0;
  uint32_t q = 2;
  std::vector<uint32_t> a;

  FieldMatrix() = default;
  FieldMatrix(int r, int c, uint32_t modulus)
      : rows(r), cols(c), q(modulus), a(static_cast<size_t>(r) * c, 0) {}

  uint32_t& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  uint32_t at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
  const uint32_t* row(int r) const { return a.data() + static_cast<size_t>(r) * cols; }
  uint32_t* row(int r) { return a.data() + static_cast<size_t>(r) * cols; }

  bool operator==(const FieldMatrix&) const = default;
};

FieldMatrix identity(int n, uint32_t q);

int rank(FieldMatrix m, Exec exec = Exec::automatic);

FieldMatrix mul(const FieldMatrix& a, const FieldMatrix& b, Exec exec = Exec::automatic);

/// Solves a*x = b where a has full column rank. Errc::rank_deficient if the
/// columns are dependent, Errc::inconsistent if no solution exists,
/// Errc::dimension_mismatch on shape errors.
FieldMatrix solve_linear(const FieldMatrix& a, const FieldMatrix& b,
                         Exec exec = Exec::automatic);

FieldMatrix random_matrix(int rows, int cols, uint32_t q, Rng& rng);

/// Uniform over GL(n, q): draw uniform matrices and reject singular ones
/// (acceptance probability is at least prod(1 - q^-i) > 0.288, so the loop
/// is short). Deterministic given the generator state.
FieldMatrix random_full_rank(int n, uint32_t q, Rng& rng);

/// code_len x dim Vandermonde generator with evaluation points 0..code_len-1;
/// row j is (j^0, j^1, ..., j^(dim-1)). Every dim x dim row-submatrix is
/// invertible, so the code is MDS. Errc::field_too_small if q < code_len.
FieldMatrix vandermonde_mds(int code_len, int dim, uint32_t q);

/// Submatrix of the given rows (in the given order).
FieldMatrix take_rows(const FieldMatrix& m, const std::vector<int>& rows);

}  // namespace pir::gf
