#include "khleo/complex.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace khleo {

const char* ring_name(Ring r, bool xmod) {
  switch (r) {
    case Ring::Z: return xmod ? "Z[X]/(X^2)" : "Z";
    case Ring::ZH: return xmod ? "Z[h,X]/(X^2-hX)" : "Z[h]";
    case Ring::F2: return xmod ? "F2[X]/(X^2)" : "F2";
    case Ring::F2H: return xmod ? "F2[h,X]/(X^2-hX)" : "F2[h]";
  }
  return "?";
}

void Complex::add_to(std::vector<Column>& cols, int from, int to, const Int& c) {
  if (sgn(c) == 0) return;
  if (int(cols.size()) <= from) cols.resize(from + 1);
  auto& col = cols[from];
  auto it = std::lower_bound(col.begin(), col.end(), to,
                             [](const Entry& e, int t) { return e.first < t; });
  if (it != col.end() && it->first == to) {
    it->second += c;
    if (sgn(it->second) == 0) col.erase(it);
  } else {
    col.insert(it, {to, c});
  }
}

Int Complex::entry(int from, int to) const {
  if (from >= int(d.size())) return 0;
  for (auto& [t, c] : d[from])
    if (t == to) return c;
  return 0;
}

void Complex::normalize() {
  d.resize(gens.size());
  if (xmod) x.resize(gens.size());
  auto fix = [&](Column& col) {
    std::sort(col.begin(), col.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
    Column out;
    for (auto& e : col) {
      Int v = e.second;
      if (is_mod2(ring)) v = v % 2 == 0 ? Int(0) : Int(1);
      if (!out.empty() && out.back().first == e.first) {
        out.back().second += v;
        if (is_mod2(ring)) out.back().second %= 2;
      } else {
        out.push_back({e.first, v});
      }
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const Entry& e) { return sgn(e.second) == 0; }),
              out.end());
    col = std::move(out);
  };
  for (auto& col : d) fix(col);
  for (auto& col : x) fix(col);
}

namespace {

std::string describe(const Complex& c, int g) {
  std::ostringstream os;
  if (!c.labels.empty() && !c.labels[g].empty()) os << c.labels[g];
  else os << "#" << g;
  os << "(" << c.gens[g].i << "," << c.gens[g].q << ")";
  return os.str();
}

Int mod2_if(const Complex& c, Int v) {
  if (is_mod2(c.ring)) {
    v %= 2;
    if (v < 0) v += 2;
  }
  return v;
}

}  // namespace

void check_complex(const Complex& c) {
  int n = c.size();
  if (int(c.d.size()) > n) throw std::logic_error("differential has too many columns");
  for (int a = 0; a < int(c.d.size()); ++a)
    for (auto& [b, v] : c.d[a]) {
      if (b < 0 || b >= n) throw std::logic_error("differential target out of range");
      if (c.gens[b].i != c.gens[a].i + 1)
        throw std::logic_error("differential entry " + describe(c, a) + " -> " + describe(c, b) +
                               " does not raise homological degree by 1");
      int dq = c.gens[b].q - c.gens[a].q;
      bool ok = has_h(c.ring) ? (dq >= 0 && dq % 2 == 0) : dq == 0;
      if (!ok)
        throw std::logic_error("differential entry " + describe(c, a) + " -> " + describe(c, b) +
                               " is not homogeneous");
    }
  if (c.xmod) {
    for (int a = 0; a < int(c.x.size()); ++a)
      for (auto& [b, v] : c.x[a]) {
        int dq = c.gens[b].q - (c.gens[a].q - 2);
        bool ok = c.gens[b].i == c.gens[a].i &&
                  (has_h(c.ring) ? (dq >= 0 && dq % 2 == 0) : dq == 0);
        if (!ok) throw std::logic_error("X-action entry " + describe(c, a) + " -> " + describe(c, b) +
                                        " is not homogeneous");
      }
  }
  if (!d_squared_zero(c)) throw std::logic_error("differential does not square to zero");
  if (c.xmod && !x_commutes(c)) throw std::logic_error("X-action does not commute with the differential");
}

static std::vector<Column> apply_cols(const Complex& c, const std::vector<Column>& f,
                                      const std::vector<Column>& g, int n) {
  // (f o g) columns
  std::vector<Column> out(n);
  for (int a = 0; a < n && a < int(g.size()); ++a) {
    std::map<int, Int> acc;
    for (auto& [b, v] : g[a])
      if (b < int(f.size()))
        for (auto& [t, w] : f[b]) acc[t] += v * w;
    for (auto& [t, v] : acc) {
      Int r = mod2_if(c, v);
      if (sgn(r) != 0) out[a].push_back({t, r});
    }
  }
  return out;
}

bool d_squared_zero(const Complex& c) {
  auto dd = apply_cols(c, c.d, c.d, c.size());
  for (auto& col : dd)
    if (!col.empty()) return false;
  return true;
}

bool x_commutes(const Complex& c) {
  auto a = apply_cols(c, c.d, c.x, c.size());
  auto b = apply_cols(c, c.x, c.d, c.size());
  return maps_equal(a, b);
}

Complex shift(const Complex& c, int n) {
  Complex r = c;
  for (auto& g : r.gens) g.q += n;
  return r;
}

namespace {

// The transposed X-action on the dual of an R-complex has X P = s g* + h P
// for P = (Xg)*. Pass to the R-basis {P, H = X P}, where g* = s (H - h P).
Complex rebase_dual(const Complex& c, const Complex& r) {
  XBasis xb = x_basis(c);
  int n = c.size();
  std::vector<int> hat_of(n, -1), sign(n, 0);
  for (int a = 0; a < n; ++a)
    if (xb.is_hat[a]) {
      int g = xb.plain[xb.base[a]];
      hat_of[g] = a;
      sign[g] = xb.is_hat[a];
    }
  auto convert = [&](const std::map<int, Int>& old) {
    std::map<int, Int> out;
    for (auto& [b, v] : old) {
      if (hat_of[b] >= 0) {
        out[b] += sign[b] * v;
        out[hat_of[b]] -= sign[b] * v;
      } else {
        out[b] += v;
      }
    }
    return out;
  };
  auto old_d = [&](int a, const Int& scale, std::map<int, Int>& acc) {
    if (a < int(r.d.size()))
      for (auto& [b, v] : r.d[a]) acc[b] += scale * v;
  };
  Complex s;
  s.ring = r.ring;
  s.xmod = true;
  s.gens = r.gens;
  s.labels = r.labels;
  s.d.assign(n, {});
  s.x.assign(n, {});
  for (int g = 0; g < n; ++g) {
    if (hat_of[g] < 0) continue;
    int p = hat_of[g];
    std::map<int, Int> dp, dh;
    old_d(p, 1, dp);
    old_d(g, sign[g], dh);
    old_d(p, 1, dh);
    for (auto& [b, v] : convert(dp)) s.add_entry(p, b, v);
    for (auto& [b, v] : convert(dh)) s.add_entry(g, b, v);
    s.add_x(p, g, 1);
    s.add_x(g, g, 1);
  }
  s.normalize();
  return s;
}

}  // namespace

Complex dual(const Complex& c) {
  Complex r;
  r.ring = c.ring;
  r.xmod = c.xmod;
  r.labels = c.labels;
  for (auto& l : r.labels)
    if (!l.empty()) l += "*";
  r.gens.resize(c.size());
  for (int a = 0; a < c.size(); ++a) r.gens[a] = {-c.gens[a].i, -c.gens[a].q};
  r.d.assign(c.size(), {});
  for (int a = 0; a < int(c.d.size()); ++a)
    for (auto& [b, v] : c.d[a]) {
      // d(b*) = (-1)^{gr_h(b*)+1} b* o d
      int s = ((-c.gens[b].i + 1) % 2 == 0) ? 1 : -1;
      r.add_entry(b, a, mod2_if(c, v * s));
    }
  if (c.xmod) {
    r.x.assign(c.size(), {});
    for (int a = 0; a < int(c.x.size()); ++a)
      for (auto& [b, v] : c.x[a]) r.add_x(b, a, v);
  }
  r.normalize();
  if (c.xmod && has_h(c.ring)) return rebase_dual(c, r);
  return r;
}

Complex mod2(const Complex& c) {
  Complex r = c;
  r.ring = has_h(c.ring) ? Ring::F2H : Ring::F2;
  r.normalize();
  return r;
}

Complex set_h_zero(const Complex& c) {
  Complex r = c;
  r.ring = is_mod2(c.ring) ? Ring::F2 : Ring::Z;
  for (int a = 0; a < int(r.d.size()); ++a) {
    auto& col = r.d[a];
    col.erase(std::remove_if(col.begin(), col.end(),
                             [&](const Entry& e) { return c.gens[e.first].q != c.gens[a].q; }),
              col.end());
  }
  for (int a = 0; a < int(r.x.size()); ++a) {
    auto& col = r.x[a];
    col.erase(std::remove_if(col.begin(), col.end(),
                             [&](const Entry& e) { return c.gens[e.first].q != c.gens[a].q - 2; }),
              col.end());
  }
  return r;
}

Complex tensor(const Complex& a, const Complex& b) {
  if (has_h(a.ring) != has_h(b.ring)) throw std::invalid_argument("tensor: mismatched rings");
  Complex r;
  r.ring = (is_mod2(a.ring) || is_mod2(b.ring)) ? (has_h(a.ring) ? Ring::F2H : Ring::F2) : a.ring;
  int nb = b.size();
  auto idx = [nb](int x, int y) { return x * nb + y; };
  r.gens.resize(size_t(a.size()) * nb);
  bool lab = !a.labels.empty() || !b.labels.empty();
  if (lab) r.labels.resize(r.gens.size());
  r.d.assign(r.gens.size(), {});
  for (int x = 0; x < a.size(); ++x)
    for (int y = 0; y < nb; ++y) {
      int t = idx(x, y);
      r.gens[t] = {a.gens[x].i + b.gens[y].i, a.gens[x].q + b.gens[y].q};
      if (lab)
        r.labels[t] = (a.labels.empty() ? "#" + std::to_string(x) : a.labels[x]) + "|" +
                      (b.labels.empty() ? "#" + std::to_string(y) : b.labels[y]);
      if (x < int(a.d.size()))
        for (auto& [u, v] : a.d[x]) r.add_entry(t, idx(u, y), v);
      int s = (a.gens[x].i % 2 == 0) ? 1 : -1;
      if (y < int(b.d.size()))
        for (auto& [u, v] : b.d[y]) r.add_entry(t, idx(x, u), v * s);
    }
  r.normalize();
  return r;
}

XBasis x_basis(const Complex& c) {
  if (!c.xmod) throw std::invalid_argument("complex carries no X-action");
  int n = c.size();
  XBasis xb;
  xb.base.assign(n, -1);
  xb.is_hat.assign(n, 0);
  std::vector<int> hit(n, 0);
  for (int a = 0; a < int(c.x.size()); ++a)
    for (auto& [b, v] : c.x[a])
      if (c.gens[b].q == c.gens[a].q - 2) hit[b] = 1;
  for (int a = 0; a < n; ++a) {
    if (hit[a]) continue;
    int pi = int(xb.plain.size());
    xb.plain.push_back(a);
    xb.base[a] = pi;
    int hat = -1;
    Int s;
    if (a < int(c.x.size()))
      for (auto& [b, v] : c.x[a])
        if (c.gens[b].q == c.gens[a].q - 2) {
          if (hat >= 0 || cmpabs(v, 1) != 0) throw std::invalid_argument("module is not free over X");
          hat = b;
          s = v;
        }
    if (hat < 0) throw std::invalid_argument("module is not free over X");
    xb.base[hat] = pi;
    xb.is_hat[hat] = s > 0 ? 1 : -1;
  }
  for (int a = 0; a < n; ++a)
    if (xb.base[a] < 0) throw std::invalid_argument("module is not free over X");
  return xb;
}


Complex tensor_over_x(const Complex& a, const Complex& b) {
  if (has_h(a.ring) != has_h(b.ring)) throw std::invalid_argument("tensor: mismatched rings");
  XBasis xa = x_basis(a), xb = x_basis(b);
  int na = int(xa.plain.size()), nb = int(xb.plain.size());
  int xx = has_h(a.ring) ? 1 : 0;
  Complex r;
  r.ring = (is_mod2(a.ring) || is_mod2(b.ring)) ? (has_h(a.ring) ? Ring::F2H : Ring::F2) : a.ring;
  r.xmod = true;
  int N = 2 * na * nb;
  r.gens.resize(N);
  r.d.assign(N, {});
  r.x.assign(N, {});
  auto pidx = [nb](int x, int y) { return 2 * (x * nb + y); };
  for (int x = 0; x < na; ++x)
    for (int y = 0; y < nb; ++y) {
      int t = pidx(x, y);
      const Gen& ga = a.gens[xa.plain[x]];
      const Gen& gb = b.gens[xb.plain[y]];
      r.gens[t] = {ga.i + gb.i, ga.q + gb.q - 1};
      r.gens[t + 1] = {ga.i + gb.i, ga.q + gb.q - 3};
    }
  // d(T) collected as (plain part, X part)
  for (int x = 0; x < na; ++x)
    for (int y = 0; y < nb; ++y) {
      int t = pidx(x, y);
      std::map<int, Int> plain_part, x_part;
      int ga = xa.plain[x], gb = xb.plain[y];
      if (ga < int(a.d.size()))
        for (auto& [u, v] : a.d[ga]) {
          int tt = pidx(xa.base[u], y);
          if (xa.is_hat[u]) x_part[tt] += v * xa.is_hat[u];
          else plain_part[tt] += v;
        }
      int s = (a.gens[ga].i % 2 == 0) ? 1 : -1;
      if (gb < int(b.d.size()))
        for (auto& [u, v] : b.d[gb]) {
          int tt = pidx(x, xb.base[u]);
          if (xb.is_hat[u]) x_part[tt] += v * s * xb.is_hat[u];
          else plain_part[tt] += v * s;
        }
      for (auto& [tt, v] : plain_part) {
        r.add_entry(t, tt, v);
        r.add_entry(t + 1, tt + 1, v);  // X * plain
      }
      for (auto& [tt, v] : x_part) {
        r.add_entry(t, tt + 1, v);
        if (xx) r.add_entry(t + 1, tt + 1, v);  // X * X = hX
      }
      r.add_x(t, t + 1, 1);
      if (xx) r.add_x(t + 1, t + 1, 1);
    }
  r.normalize();
  return r;
}

Complex quotient_by_x(const Complex& c) {
  XBasis xb = x_basis(c);
  Complex r;
  r.ring = c.ring;
  std::vector<int> idx(c.size(), -1);
  for (int k = 0; k < int(xb.plain.size()); ++k) idx[xb.plain[k]] = k;
  for (int g : xb.plain) {
    r.gens.push_back({c.gens[g].i, c.gens[g].q - 1});
    if (!c.labels.empty()) r.labels.push_back(c.labels[g]);
  }
  r.d.assign(r.size(), {});
  for (int g : xb.plain)
    if (g < int(c.d.size()))
      for (auto& [b, v] : c.d[g])
        if (idx[b] >= 0) r.add_entry(idx[g], idx[b], v);
  r.normalize();
  return r;
}

Complex graded_piece(const Complex& c, int q) {
  Complex r;
  r.ring = is_mod2(c.ring) ? Ring::F2 : Ring::Z;
  std::vector<int> idx(c.size(), -1);
  for (int a = 0; a < c.size(); ++a) {
    int dq = c.gens[a].q - q;
    bool in = has_h(c.ring) ? (dq >= 0 && dq % 2 == 0) : dq == 0;
    if (!in) continue;
    idx[a] = r.size();
    r.gens.push_back({c.gens[a].i, q});
    if (!c.labels.empty()) r.labels.push_back(c.labels[a]);
  }
  r.d.assign(r.size(), {});
  for (int a = 0; a < int(c.d.size()); ++a)
    if (idx[a] >= 0)
      for (auto& [b, v] : c.d[a])
        if (idx[b] >= 0) r.d[idx[a]].push_back({idx[b], v});
  return r;
}

Complex localize(const Complex& c, int parity) {
  int lo = 0;
  bool any = false;
  for (auto& g : c.gens)
    if (((g.q - parity) % 2 + 2) % 2 == 0 && (!any || g.q < lo)) {
      lo = g.q;
      any = true;
    }
  if (!any) lo = parity;
  return graded_piece(c, lo);
}

std::vector<int> gens_in_degree(const Complex& c, int i) {
  std::vector<int> r;
  for (int a = 0; a < c.size(); ++a)
    if (c.gens[a].i == i) r.push_back(a);
  return r;
}

IMat block(const Complex& c, const std::vector<int>& rows, const std::vector<int>& cols) {
  IMat m(int(rows.size()), int(cols.size()));
  std::vector<int> pos(c.size(), -1);
  for (int k = 0; k < int(rows.size()); ++k) pos[rows[k]] = k;
  for (int j = 0; j < int(cols.size()); ++j) {
    int a = cols[j];
    if (a < int(c.d.size()))
      for (auto& [b, v] : c.d[a])
        if (pos[b] >= 0) m(pos[b], j) = v;
  }
  return m;
}

std::string HomologyGroup::str() const {
  std::ostringstream os;
  bool first = true;
  if (rank) {
    os << "Z";
    if (rank > 1) os << "^" << rank;
    first = false;
  }
  for (auto& t : torsion) {
    if (!first) os << "+";
    os << "Z/" << t;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

HomologyGroup HomologyPresentation::group() const {
  HomologyGroup g;
  for (auto& o : order) {
    if (sgn(o) == 0) g.rank++;
    else g.torsion.push_back(o);
  }
  return g;
}

HomologyPresentation homology(const Complex& c, int i) {
  if (is_mod2(c.ring) || has_h(c.ring))
    throw std::invalid_argument("integral homology needs a complex over Z");
  HomologyPresentation h;
  h.degree = i;
  h.basis = gens_in_degree(c, i);
  auto prev = gens_in_degree(c, i - 1);
  auto next = gens_in_degree(c, i + 1);
  int n = int(h.basis.size());
  IMat A = block(c, h.basis, prev);
  IMat B = block(c, next, h.basis);
  Smith sb = smith_normal_form(B, kV | kVinv);
  if (B.rows == 0) {
    sb.V = IMat::identity(n);
    sb.Vinv = IMat::identity(n);
    sb.rank = 0;
  }
  int rb = sb.rank, k = n - rb;
  IMat K = select_cols(sb.V, rb, n);
  IMat P = select_rows(sb.Vinv, rb, n);  // coordinates on the kernel
  IMat Ap = P * A;
  Smith sa = smith_normal_form(Ap, kU | kUinv);
  if (Ap.cols == 0 || Ap.rows == 0) {
    sa.U = IMat::identity(k);
    sa.Uinv = IMat::identity(k);
    sa.rank = 0;
    sa.diag.clear();
  }
  IMat reps = K * sa.Uinv;
  IMat coord = sa.U * P;
  std::vector<int> keep;
  for (int j = 0; j < k; ++j) {
    if (j < sa.rank && sa.diag[j] == 1) continue;
    keep.push_back(j);
    h.order.push_back(j < sa.rank ? sa.diag[j] : Int(0));
  }
  h.reps = IMat(n, int(keep.size()));
  h.coord = IMat(int(keep.size()), n);
  for (int s = 0; s < int(keep.size()); ++s) {
    for (int r = 0; r < n; ++r) {
      h.reps(r, s) = reps(r, keep[s]);
      h.coord(s, r) = coord(keep[s], r);
    }
  }
  return h;
}

HomologyGroup homology_at(const Complex& c, int i, int q) {
  Complex piece = graded_piece(c, q);
  if (is_mod2(piece.ring)) {
    HomologyGroup g;
    g.rank = homology_dim_mod(piece, i, 2);
    return g;
  }
  return homology(piece, i).group();
}

int homology_dim_mod(const Complex& c, int i, uint32_t p) {
  auto cur = gens_in_degree(c, i);
  auto prev = gens_in_degree(c, i - 1);
  auto next = gens_in_degree(c, i + 1);
  auto rank_of = [&](const std::vector<int>& rows, const std::vector<int>& cols) {
    IMat m = block(c, rows, cols);
    ModSpace sp(p, m.rows);
    for (int j = 0; j < m.cols; ++j) {
      std::vector<Int> col(m.rows);
      for (int r = 0; r < m.rows; ++r) col[r] = m(r, j);
      sp.add(reduce_mod(col, p));
    }
    return sp.dim();
  };
  if (cur.empty()) return 0;
  int ra = prev.empty() ? 0 : rank_of(cur, prev);
  int rb = next.empty() ? 0 : rank_of(next, cur);
  return int(cur.size()) - ra - rb;
}

IMat induced_map(const std::vector<Column>& phi, const HomologyPresentation& src,
                 const HomologyPresentation& dst) {
  int ns = int(src.order.size()), nd = int(dst.order.size());
  IMat m(nd, ns);
  std::map<int, int> dpos;
  for (int k = 0; k < int(dst.basis.size()); ++k) dpos[dst.basis[k]] = k;
  for (int s = 0; s < ns; ++s) {
    std::vector<Int> y(dst.basis.size());
    for (int r = 0; r < int(src.basis.size()); ++r) {
      const Int& c = src.reps(r, s);
      if (sgn(c) == 0) continue;
      int g = src.basis[r];
      if (g >= int(phi.size())) continue;
      for (auto& [t, v] : phi[g]) {
        auto it = dpos.find(t);
        if (it == dpos.end()) throw std::logic_error("induced_map: image leaves the target degree");
        y[it->second] += c * v;
      }
    }
    for (int k = 0; k < nd; ++k) {
      Int acc = 0;
      for (int r = 0; r < int(y.size()); ++r) acc += dst.coord(k, r) * y[r];
      if (sgn(dst.order[k]) != 0) {
        acc %= dst.order[k];
        if (acc < 0) acc += dst.order[k];
      }
      m(k, s) = acc;
    }
  }
  return m;
}

std::map<int, long> euler_characteristic(const Complex& c) {
  std::map<int, long> e;
  for (auto& g : c.gens) e[g.q] += (g.i % 2 == 0) ? 1 : -1;
  for (auto it = e.begin(); it != e.end();)
    it = it->second == 0 ? e.erase(it) : std::next(it);
  return e;
}

std::vector<Column> compose(const std::vector<Column>& g, const std::vector<Column>& f) {
  std::vector<Column> out(f.size());
  for (size_t a = 0; a < f.size(); ++a) {
    std::map<int, Int> acc;
    for (auto& [b, v] : f[a])
      if (b < int(g.size()))
        for (auto& [t, w] : g[b]) acc[t] += v * w;
    for (auto& [t, v] : acc)
      if (sgn(v) != 0) out[a].push_back({t, v});
  }
  return out;
}

std::vector<Column> identity_map(int n) {
  std::vector<Column> m(n);
  for (int a = 0; a < n; ++a) m[a].push_back({a, Int(1)});
  return m;
}

bool maps_equal(const std::vector<Column>& a, const std::vector<Column>& b) {
  size_t n = std::max(a.size(), b.size());
  for (size_t k = 0; k < n; ++k) {
    const Column empty;
    const Column& x = k < a.size() ? a[k] : empty;
    const Column& y = k < b.size() ? b[k] : empty;
    if (x.size() != y.size()) return false;
    for (size_t j = 0; j < x.size(); ++j)
      if (x[j].first != y[j].first || x[j].second != y[j].second) return false;
  }
  return true;
}

}  // namespace khleo
