#pragma once
#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "khleo/complex.hpp"
#include "khleo/diagram.hpp"
#include "khleo/khovanov.hpp"

#ifndef KHLEO_SOURCE_DIR
#define KHLEO_SOURCE_DIR "."
#endif

namespace testing_support {

using Bigrading = std::pair<int, int>;
using Table = std::map<Bigrading, khleo::HomologyGroup>;

struct OracleKnot {
  std::string name, pd;
  nlohmann::json jones, kh, kh_odd;
  int rasmussen = 0;
};

inline std::vector<OracleKnot> oracle_knots(int max_crossings = 99) {
  std::ifstream in(std::string(KHLEO_SOURCE_DIR) + "/tests/data/knotinfo_oracle.tsv");
  std::vector<OracleKnot> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, '\t')) f.push_back(cell);
    OracleKnot k;
    k.name = f[0];
    k.pd = f[1];
    k.jones = nlohmann::json::parse(f[2]);
    k.kh = nlohmann::json::parse(f[3]);
    k.kh_odd = nlohmann::json::parse(f[4]);
    k.rasmussen = std::stoi(f[5]);
    if (std::stoi(k.name.substr(0, k.name.find('_'))) <= max_crossings) out.push_back(k);
  }
  return out;
}

// KnotInfo homology vectors: entries [torsion order (0 = free), multiplicity, i, j].
inline Table table_from_vector(const nlohmann::json& v) {
  Table t;
  for (auto& e : v) {
    auto& g = t[{e[2].get<int>(), e[3].get<int>()}];
    int order = e[0].get<int>(), mult = e[1].get<int>();
    if (order == 0) g.rank += mult;
    else
      for (int k = 0; k < mult; ++k) g.torsion.push_back(order);
  }
  for (auto& [k, g] : t) std::sort(g.torsion.begin(), g.torsion.end());
  return t;
}

// Integral homology of a complex over Z in every bigrading.
inline Table homology_table(const khleo::Complex& c) {
  std::map<int, std::vector<int>> qs;
  for (auto& g : c.gens) qs[g.q].push_back(g.i);
  Table t;
  for (auto& [q, is] : qs) {
    khleo::Complex piece = khleo::graded_piece(c, q);
    std::sort(is.begin(), is.end());
    is.erase(std::unique(is.begin(), is.end()), is.end());
    for (int i : is) {
      auto g = khleo::homology(piece, i).group();
      if (g.rank || !g.torsion.empty()) t[{i, q}] = g;
    }
    // torsion can also sit one degree above the last generator's degree
    for (int i : is) {
      auto g = khleo::homology(piece, i + 1).group();
      if ((g.rank || !g.torsion.empty()) && !t.count({i + 1, q})) t[{i + 1, q}] = g;
    }
  }
  return t;
}

// Integral homology on a fixed window of quantum gradings, for complexes
// over Z[h] whose h-towers are nonzero in infinitely many gradings.
inline Table homology_window(const khleo::Complex& c, int qlo, int qhi) {
  int ilo = 0, ihi = 0;
  for (auto& g : c.gens) ilo = std::min(ilo, g.i), ihi = std::max(ihi, g.i);
  Table t;
  for (int q = qlo; q <= qhi; ++q) {
    khleo::Complex piece = khleo::graded_piece(c, q);
    for (int i = ilo; i <= ihi + 1; ++i) {
      auto g = khleo::homology(piece, i).group();
      if (g.rank || !g.torsion.empty()) t[{i, q}] = g;
    }
  }
  return t;
}

inline std::map<Bigrading, int> mod2_table(const khleo::Complex& c) {
  std::map<Bigrading, int> t;
  std::map<int, std::vector<int>> qs;
  for (auto& g : c.gens) qs[g.q].push_back(g.i);
  for (auto& [q, is] : qs) {
    khleo::Complex piece = khleo::graded_piece(c, q);
    for (int i : is) {
      int r = khleo::homology_dim_mod(piece, i, 2);
      if (r) t[{i, q}] = r;
    }
  }
  return t;
}

inline std::map<int, long> jones_times_q_plus_inverse(const nlohmann::json& v) {
  // [min power, max power, coefficients...] in t; Euler characteristic is (q + 1/q) V(q^2)
  std::map<int, long> e;
  int lo = v[0].get<int>();
  for (size_t k = 2; k < v.size(); ++k) {
    long c = v[k].get<long>();
    if (!c) continue;
    int p = 2 * (lo + int(k) - 2);
    e[p + 1] += c;
    e[p - 1] += c;
  }
  for (auto it = e.begin(); it != e.end();) it = it->second == 0 ? e.erase(it) : std::next(it);
  return e;
}

inline bool zero_map(const std::vector<khleo::Column>& m) {
  for (auto& c : m)
    for (auto& [r, v] : c)
      if (v != 0) return false;
  return true;
}

inline std::vector<khleo::Column> add_maps(const std::vector<khleo::Column>& a,
                                           const std::vector<khleo::Column>& b, const khleo::Int& s = 1) {
  std::vector<khleo::Column> out(a.size());
  for (size_t k = 0; k < a.size(); ++k) {
    std::map<int, khleo::Int> acc;
    for (auto& [r, v] : a[k]) acc[r] += v;
    for (auto& [r, v] : b[k]) acc[r] += s * v;
    for (auto& [r, v] : acc)
      if (v != 0) out[k].push_back({r, v});
  }
  return out;
}

inline std::vector<khleo::Column> reduce2(std::vector<khleo::Column> m) {
  for (auto& c : m) {
    khleo::Column o;
    for (auto& [r, v] : c) {
      khleo::Int w = v % 2;
      if (w != 0) o.push_back({r, khleo::Int(1)});
    }
    c = o;
  }
  return m;
}

// I is an involutive chain map, T is a chain map and x + eps_q I(x) = h T(x)
// in every quantum grading of the Bar-Natan cube complex.
inline bool conjugation_identities(const khleo::Cube& cube) {
  using namespace khleo;
  Complex bn = khovanov_complex(cube, Theory::BarNatan);
  auto I = involution_I(cube);
  if (!maps_equal(compose(I, I), identity_map(bn.size()))) return false;
  if (!maps_equal(compose(bn.d, I), compose(I, bn.d))) return false;
  auto eps = chain_T_signs(cube);
  int lo = bn.gens[0].q, hi = lo;
  for (auto& g : bn.gens) lo = std::min(lo, g.q), hi = std::max(hi, g.q);
  for (int q = lo - 2; q <= hi; q += 2) {
    Complex p = graded_piece(bn, q), p2 = graded_piece(bn, q + 2);
    std::vector<int> at(bn.size(), -1);
    std::vector<int> from2;
    for (int g = 0, k = 0; g < bn.size(); ++g) {
      int dq = bn.gens[g].q - q;
      if (dq < 0 || dq % 2) continue;
      at[g] = k++;
      if (dq >= 2) from2.push_back(at[g]);
    }
    auto T = chain_T(cube, eps, q);
    if (!maps_equal(compose(p2.d, T), compose(T, p.d))) return false;
    // multiplication by h embeds piece q + 2 into piece q
    std::vector<Column> lhs(p.size()), hT(p.size());
    int e = eps.count(q) ? eps.at(q) : 1;
    for (int g = 0; g < bn.size(); ++g) {
      if (at[g] < 0) continue;
      std::map<int, Int> acc;
      acc[at[g]] += 1;
      for (auto& [r, v] : I[g]) acc[at[r]] += e * v;
      for (auto& [r, v] : acc)
        if (v != 0) lhs[at[g]].push_back({r, v});
      for (auto& [r, v] : T[at[g]]) hT[at[g]].push_back({from2[r], v});
    }
    if (!maps_equal(lhs, hT)) return false;
  }
  return true;
}

// nu^2 = 0, d nu + nu d = 0 and X nu + nu X = id on the even complex mod 2.
inline bool nu_identities(const khleo::Cube& cube) {
  using namespace khleo;
  Complex even = mod2(khovanov_complex(cube, Theory::Even));
  auto nu = shumakovitch_nu(cube);
  if (!zero_map(reduce2(compose(nu, nu)))) return false;
  if (!zero_map(reduce2(add_maps(compose(even.d, nu), compose(nu, even.d))))) return false;
  auto xnu = add_maps(compose(even.x, nu), compose(nu, even.x));
  return maps_equal(reduce2(xnu), identity_map(even.size()));
}

}  // namespace testing_support
