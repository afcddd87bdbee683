#pragma once
#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace khleo {

using Int = mpz_class;

inline int cmpabs(const Int& a, const Int& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()); }
inline int cmpabs(const Int& a, unsigned long b) { return mpz_cmpabs_ui(a.get_mpz_t(), b); }

// Dense integer matrix, row major.
struct IMat {
  int rows = 0, cols = 0;
  std::vector<Int> a;

  IMat() = default;
  IMat(int r, int c) : rows(r), cols(c), a(size_t(r) * c) {}
  static IMat identity(int n);

  Int& operator()(int i, int j) { return a[size_t(i) * cols + j]; }
  const Int& operator()(int i, int j) const { return a[size_t(i) * cols + j]; }
  bool is_zero() const;
};

IMat operator*(const IMat& x, const IMat& y);
IMat transpose(const IMat& x);
IMat select_rows(const IMat& x, int from, int to);
IMat select_cols(const IMat& x, int from, int to);

// U * M * V = S with S diagonal, d_i | d_{i+1}, U and V unimodular.
struct Smith {
  std::vector<Int> diag;  // nonzero invariant factors, positive
  int rank = 0;
  IMat U, Uinv, V, Vinv;
};

enum SmithWants : unsigned { kNone = 0, kU = 1, kUinv = 2, kV = 4, kVinv = 8 };

Smith smith_normal_form(const IMat& m, unsigned wants = kU | kV);

// Columns form a basis of the integer kernel of m (saturated lattice).
IMat integer_kernel(const IMat& m);
int integer_rank(const IMat& m);
// Invariant factors of the lattice spanned by the columns of g.
std::vector<Int> lattice_divisors(const IMat& g);

int two_adic_valuation(const Int& x);

// Vectors over F_p, p prime (p < 2^31).
using Vec = std::vector<uint32_t>;

// A subspace of F_p^n kept in reduced echelon form.
class ModSpace {
 public:
  ModSpace(uint32_t p, int n) : p_(p), n_(n) {}
  // Reduces v in place against the basis; returns true if v became zero.
  bool reduce(Vec& v) const;
  bool contains(Vec v) const { return reduce(v); }
  // Adds v to the span; returns true if the dimension grew.
  bool add(Vec v);
  int dim() const { return int(rows_.size()); }
  int ambient() const { return n_; }
  uint32_t prime() const { return p_; }
  const std::vector<Vec>& basis() const { return rows_; }

 private:
  uint32_t p_;
  int n_;
  std::vector<Vec> rows_;
  std::vector<int> pivots_;
};

uint32_t inv_mod(uint32_t a, uint32_t p);
// Kernel of the linear map sending e_k to images[k] (each of length n).
std::vector<Vec> mod_kernel(const std::vector<Vec>& images, int n, uint32_t p);
// Like mod_kernel but images are taken modulo the subspace `quotient`.
std::vector<Vec> mod_kernel_modulo(const std::vector<Vec>& images, const ModSpace& quotient);
Vec reduce_mod(const std::vector<Int>& v, uint32_t p);

}  // namespace khleo
