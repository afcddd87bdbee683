#pragma once
#include <vector>

#include "khleo/complex.hpp"

namespace khleo::detail {

// A list of generator indices with reverse lookup.
struct Subset {
  std::vector<int> idx;
  std::vector<int> pos;  // per generator of the ambient complex, or -1

  Subset() = default;
  Subset(int ambient, std::vector<int> members) : idx(std::move(members)), pos(ambient, -1) {
    for (int k = 0; k < int(idx.size()); ++k) pos[idx[k]] = k;
  }
  int size() const { return int(idx.size()); }
};

// Images of the members of `from` under the columns m, in `to` coordinates
// mod p. Targets outside `to` are dropped.
inline std::vector<Vec> images_mod(const std::vector<Column>& m, const Subset& from, const Subset& to,
                                   uint32_t p) {
  std::vector<Vec> out(from.size(), Vec(to.size(), 0));
  for (int k = 0; k < from.size(); ++k) {
    int a = from.idx[k];
    if (a >= int(m.size())) continue;
    for (auto& [b, v] : m[a]) {
      int t = to.pos[b];
      if (t < 0) continue;
      Int r = v % p;
      if (r < 0) r += p;
      out[k][t] = uint32_t((out[k][t] + r.get_ui()) % p);
    }
  }
  return out;
}

// Moves a vector in `from` coordinates to `to` coordinates, dropping the
// generators outside `to`.
inline Vec transport(const Vec& v, const Subset& from, const Subset& to) {
  Vec out(to.size(), 0);
  for (int k = 0; k < from.size(); ++k) {
    int t = to.pos[from.idx[k]];
    if (t >= 0) out[t] = v[k];
  }
  return out;
}

// Linear combination sum c_k rows[k] mod p.
inline Vec combine(const Vec& c, const std::vector<Vec>& rows, int n, uint32_t p) {
  Vec out(n, 0);
  for (int k = 0; k < int(c.size()); ++k) {
    if (!c[k]) continue;
    for (int j = 0; j < n; ++j)
      out[j] = uint32_t((out[j] + uint64_t(c[k]) * rows[k][j]) % p);
  }
  return out;
}

inline std::vector<int> members(const Complex& c, int i, int q, bool at_least) {
  std::vector<int> r;
  for (int a = 0; a < c.size(); ++a) {
    const Gen& g = c.gens[a];
    if (g.i != i) continue;
    int dq = g.q - q;
    if (at_least ? (dq >= 0 && dq % 2 == 0) : dq == 0) r.push_back(a);
  }
  return r;
}

}  // namespace khleo::detail
