#include "khleo/linalg.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace khleo {

IMat IMat::identity(int n) {
  IMat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

bool IMat::is_zero() const {
  for (auto& x : a)
    if (sgn(x) != 0) return false;
  return true;
}

IMat operator*(const IMat& x, const IMat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("matrix size mismatch");
  IMat r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const Int& v = x(i, k);
      if (sgn(v) == 0) continue;
      for (int j = 0; j < y.cols; ++j)
        if (sgn(y(k, j)) != 0) r(i, j) += v * y(k, j);
    }
  return r;
}

IMat transpose(const IMat& x) {
  IMat r(x.cols, x.rows);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) r(j, i) = x(i, j);
  return r;
}

IMat select_rows(const IMat& x, int from, int to) {
  IMat r(to - from, x.cols);
  for (int i = from; i < to; ++i)
    for (int j = 0; j < x.cols; ++j) r(i - from, j) = x(i, j);
  return r;
}

IMat select_cols(const IMat& x, int from, int to) {
  IMat r(x.rows, to - from);
  for (int i = 0; i < x.rows; ++i)
    for (int j = from; j < to; ++j) r(i, j - from) = x(i, j);
  return r;
}

namespace {

struct SmithWork {
  IMat m;
  unsigned wants;
  IMat U, Uinv, V, Vinv;

  void row_swap(int i, int t) {
    if (i == t) return;
    for (int j = 0; j < m.cols; ++j) std::swap(m(i, j), m(t, j));
    if (wants & kU)
      for (int j = 0; j < U.cols; ++j) std::swap(U(i, j), U(t, j));
    if (wants & kUinv)
      for (int j = 0; j < Uinv.rows; ++j) std::swap(Uinv(j, i), Uinv(j, t));
  }
  void col_swap(int i, int t) {
    if (i == t) return;
    for (int j = 0; j < m.rows; ++j) std::swap(m(j, i), m(j, t));
    if (wants & kV)
      for (int j = 0; j < V.rows; ++j) std::swap(V(j, i), V(j, t));
    if (wants & kVinv)
      for (int j = 0; j < Vinv.cols; ++j) std::swap(Vinv(i, j), Vinv(t, j));
  }
  // row_i -= q * row_t
  void row_sub(int i, int t, const Int& q) {
    for (int j = 0; j < m.cols; ++j)
      if (sgn(m(t, j)) != 0) m(i, j) -= q * m(t, j);
    if (wants & kU)
      for (int j = 0; j < U.cols; ++j)
        if (sgn(U(t, j)) != 0) U(i, j) -= q * U(t, j);
    if (wants & kUinv)
      for (int j = 0; j < Uinv.rows; ++j)
        if (sgn(Uinv(j, i)) != 0) Uinv(j, t) += q * Uinv(j, i);
  }
  // col_i -= q * col_t
  void col_sub(int i, int t, const Int& q) {
    for (int j = 0; j < m.rows; ++j)
      if (sgn(m(j, t)) != 0) m(j, i) -= q * m(j, t);
    if (wants & kV)
      for (int j = 0; j < V.rows; ++j)
        if (sgn(V(j, t)) != 0) V(j, i) -= q * V(j, t);
    if (wants & kVinv)
      for (int j = 0; j < Vinv.cols; ++j)
        if (sgn(Vinv(i, j)) != 0) Vinv(t, j) += q * Vinv(i, j);
  }
  void row_negate(int t) {
    for (int j = 0; j < m.cols; ++j) m(t, j) = -m(t, j);
    if (wants & kU)
      for (int j = 0; j < U.cols; ++j) U(t, j) = -U(t, j);
    if (wants & kUinv)
      for (int j = 0; j < Uinv.rows; ++j) Uinv(j, t) = -Uinv(j, t);
  }
};

}  // namespace

Smith smith_normal_form(const IMat& input, unsigned wants) {
  SmithWork w{input, wants, {}, {}, {}, {}};
  int R = input.rows, C = input.cols;
  if (wants & kU) w.U = IMat::identity(R);
  if (wants & kUinv) w.Uinv = IMat::identity(R);
  if (wants & kV) w.V = IMat::identity(C);
  if (wants & kVinv) w.Vinv = IMat::identity(C);
  IMat& m = w.m;
  Smith out;
  int t = 0;
  for (; t < std::min(R, C); ++t) {
    for (;;) {
      // smallest nonzero entry of the remaining block
      int bi = -1, bj = -1;
      for (int i = t; i < R; ++i)
        for (int j = t; j < C; ++j)
          if (sgn(m(i, j)) != 0 &&
              (bi < 0 || cmpabs(m(i, j), m(bi, bj)) < 0)) {
            bi = i;
            bj = j;
            if (cmpabs(m(i, j), 1) == 0) goto found;
          }
    found:
      if (bi < 0) goto done;
      w.row_swap(bi, t);
      w.col_swap(bj, t);
      bool clean = true;
      Int q;
      for (int i = t + 1; i < R; ++i)
        if (sgn(m(i, t)) != 0) {
          mpz_fdiv_q(q.get_mpz_t(), m(i, t).get_mpz_t(), m(t, t).get_mpz_t());
          w.row_sub(i, t, q);
          if (sgn(m(i, t)) != 0) clean = false;
        }
      for (int j = t + 1; j < C; ++j)
        if (sgn(m(t, j)) != 0) {
          mpz_fdiv_q(q.get_mpz_t(), m(t, j).get_mpz_t(), m(t, t).get_mpz_t());
          w.col_sub(j, t, q);
          if (sgn(m(t, j)) != 0) clean = false;
        }
      if (!clean) continue;
      // divisibility of the remaining block
      int bad = -1;
      for (int i = t + 1; i < R && bad < 0; ++i)
        for (int j = t + 1; j < C; ++j)
          if (sgn(m(i, j)) != 0 && !mpz_divisible_p(m(i, j).get_mpz_t(), m(t, t).get_mpz_t())) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      w.row_sub(t, bad, Int(-1));
    }
    if (sgn(m(t, t)) < 0) w.row_negate(t);
    out.diag.push_back(m(t, t));
  }
done:
  out.rank = int(out.diag.size());
  out.U = std::move(w.U);
  out.Uinv = std::move(w.Uinv);
  out.V = std::move(w.V);
  out.Vinv = std::move(w.Vinv);
  return out;
}

IMat integer_kernel(const IMat& m) {
  if (m.rows == 0) return IMat::identity(m.cols);
  Smith s = smith_normal_form(m, kV);
  return select_cols(s.V, s.rank, m.cols);
}

int integer_rank(const IMat& m) {
  if (m.rows == 0 || m.cols == 0) return 0;
  return smith_normal_form(m, kNone).rank;
}

std::vector<Int> lattice_divisors(const IMat& g) {
  if (g.rows == 0 || g.cols == 0) return {};
  return smith_normal_form(g, kNone).diag;
}

int two_adic_valuation(const Int& x) {
  if (sgn(x) == 0) return -1;
  return int(mpz_scan1(x.get_mpz_t(), 0));
}

uint32_t inv_mod(uint32_t a, uint32_t p) {
  uint64_t r = 1, b = a % p;
  uint64_t e = p - 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return uint32_t(r);
}

bool ModSpace::reduce(Vec& v) const {
  for (size_t k = 0; k < rows_.size(); ++k) {
    int pc = pivots_[k];
    uint32_t c = v[pc];
    if (!c) continue;
    const Vec& r = rows_[k];
    for (int j = 0; j < n_; ++j)
      if (r[j]) v[j] = uint32_t((v[j] + uint64_t(p_ - c) * r[j]) % p_);
  }
  for (uint32_t x : v)
    if (x) return false;
  return true;
}

bool ModSpace::add(Vec v) {
  if (reduce(v)) return false;
  int pc = 0;
  while (!v[pc]) ++pc;
  uint32_t inv = inv_mod(v[pc], p_);
  for (auto& x : v) x = uint32_t(uint64_t(x) * inv % p_);
  for (auto& r : rows_) {
    uint32_t c = r[pc];
    if (!c) continue;
    for (int j = 0; j < n_; ++j)
      if (v[j]) r[j] = uint32_t((r[j] + uint64_t(p_ - c) * v[j]) % p_);
  }
  rows_.push_back(std::move(v));
  pivots_.push_back(pc);
  return true;
}

std::vector<Vec> mod_kernel_modulo(const std::vector<Vec>& images, const ModSpace& quotient) {
  uint32_t p = quotient.prime();
  int n = quotient.ambient();
  int m = int(images.size());
  // Row-reduce [image | e_k] pairs; rows whose image part vanishes give the kernel.
  std::vector<Vec> img, comb;
  std::vector<int> piv;
  std::vector<Vec> kernel;
  for (int k = 0; k < m; ++k) {
    Vec v = images[k];
    quotient.reduce(v);
    Vec e(m, 0);
    e[k] = 1;
    for (size_t r = 0; r < img.size(); ++r) {
      uint32_t c = v[piv[r]];
      if (!c) continue;
      for (int j = 0; j < n; ++j)
        if (img[r][j]) v[j] = uint32_t((v[j] + uint64_t(p - c) * img[r][j]) % p);
      for (int j = 0; j < m; ++j)
        if (comb[r][j]) e[j] = uint32_t((e[j] + uint64_t(p - c) * comb[r][j]) % p);
    }
    int pc = -1;
    for (int j = 0; j < n; ++j)
      if (v[j]) {
        pc = j;
        break;
      }
    if (pc < 0) {
      kernel.push_back(std::move(e));
      continue;
    }
    uint32_t inv = inv_mod(v[pc], p);
    for (auto& x : v) x = uint32_t(uint64_t(x) * inv % p);
    for (auto& x : e) x = uint32_t(uint64_t(x) * inv % p);
    img.push_back(std::move(v));
    comb.push_back(std::move(e));
    piv.push_back(pc);
  }
  return kernel;
}

std::vector<Vec> mod_kernel(const std::vector<Vec>& images, int n, uint32_t p) {
  return mod_kernel_modulo(images, ModSpace(p, n));
}

Vec reduce_mod(const std::vector<Int>& v, uint32_t p) {
  Vec r(v.size());
  Int t;
  for (size_t i = 0; i < v.size(); ++i) {
    mpz_fdiv_r_ui(t.get_mpz_t(), v[i].get_mpz_t(), p);
    r[i] = uint32_t(t.get_ui());
  }
  return r;
}

}  // namespace khleo
