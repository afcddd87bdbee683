#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

#include "khleo/complex.hpp"

namespace khleo {

namespace {

using SMap = std::map<int, Int>;

void axpy(SMap& dst, const SMap& src, const Int& c, bool m2) {
  for (auto& [k, v] : src) {
    Int& t = dst[k];
    t += c * v;
    if (m2) t %= 2;
    if (sgn(t) == 0) dst.erase(k);
  }
}

}  // namespace

Simplified simplify_tracked(const Complex& c) {
  int n = c.size();
  bool m2 = is_mod2(c.ring);
  std::vector<SMap> out(n), F(n), G(n), H(n);
  std::vector<std::set<int>> in(n), fin(n);
  for (int a = 0; a < int(c.d.size()); ++a)
    for (auto& [b, v] : c.d[a]) {
      out[a][b] = v;
      in[b].insert(a);
    }
  for (int a = 0; a < n; ++a) {
    F[a][a] = 1;
    G[a][a] = 1;
    fin[a].insert(a);
  }
  std::vector<char> alive(n, 1);
  bool progress = true;
  while (progress) {
    progress = false;
    for (int a = 0; a < n; ++a) {
      if (!alive[a]) continue;
      int b = -1;
      for (auto& [t, v] : out[a])
        if (c.gens[t].q == c.gens[a].q && cmpabs(v, 1) == 0) {
          b = t;
          break;
        }
      if (b < 0) continue;
      progress = true;
      Int u = out[a][b];  // u = u^{-1}
      SMap mu = out[a];
      mu.erase(b);
      // differential: d'v = dv - lambda(v) u^{-1} mu
      for (int g : std::set<int>(in[b])) {
        if (g == a || !alive[g]) continue;
        Int lam = out[g][b];
        out[g].erase(b);
        for (auto& [t, v] : mu) {
          Int& e = out[g][t];
          e -= lam * u * v;
          if (m2) e %= 2;
          if (sgn(e) == 0) {
            out[g].erase(t);
            in[t].erase(g);
          } else {
            in[t].insert(g);
          }
        }
        // G(v) -= u^{-1} lambda(v) G(a)
        axpy(G[g], G[a], -u * lam, m2);
      }
      // H += G h F: every original x with F(x) = c b + ... gains c u^{-1} G(a)
      for (int x : fin[b]) axpy(H[x], G[a], F[x][b] * u, m2);
      // F(x): drop a, replace b by -u^{-1} mu
      for (int x : std::set<int>(fin[a])) F[x].erase(a);
      for (int x : std::set<int>(fin[b])) {
        Int cb = F[x][b];
        F[x].erase(b);
        for (auto& [t, v] : mu) {
          Int& e = F[x][t];
          e -= cb * u * v;
          if (m2) e %= 2;
          if (sgn(e) == 0) {
            F[x].erase(t);
            fin[t].erase(x);
          } else {
            fin[t].insert(x);
          }
        }
      }
      fin[a].clear();
      fin[b].clear();
      for (int g : in[a]) out[g].erase(a);
      for (auto& [t, v] : out[a]) in[t].erase(a);
      for (auto& [t, v] : out[b]) in[t].erase(b);
      out[a].clear();
      out[b].clear();
      in[a].clear();
      in[b].clear();
      alive[a] = alive[b] = 0;
    }
  }
  Simplified s;
  std::vector<int> idx(n, -1);
  for (int a = 0; a < n; ++a)
    if (alive[a]) {
      idx[a] = int(s.kept.size());
      s.kept.push_back(a);
    }
  Complex& r = s.complex;
  r.ring = c.ring;
  for (int a : s.kept) {
    r.gens.push_back(c.gens[a]);
    if (!c.labels.empty()) r.labels.push_back(c.labels[a]);
  }
  r.d.assign(r.size(), {});
  for (int a : s.kept)
    for (auto& [t, v] : out[a]) r.d[idx[a]].push_back({idx[t], v});
  s.eq.forward.assign(n, {});
  s.eq.homotopy.assign(n, {});
  for (int x = 0; x < n; ++x) {
    for (auto& [t, v] : F[x]) s.eq.forward[x].push_back({idx[t], v});
    for (auto& [t, v] : H[x]) s.eq.homotopy[x].push_back({t, v});
  }
  for (int a : s.kept) {
    Column col;
    for (auto& [t, v] : G[a]) col.push_back({t, v});
    s.eq.backward.push_back(std::move(col));
  }
  return s;
}

namespace {

struct Overflow {};

// int64 arithmetic with overflow detection
struct Checked {
  using T = int64_t;
  static T from(const Int& v) {
    if (!v.fits_slong_p()) throw Overflow{};
    return v.get_si();
  }
  static T from(int64_t v) { return v; }
  static Int to(T v) { return Int(long(v)); }
  static T sub_mul(T e, T a, T b) {
    T p, r;
    if (__builtin_mul_overflow(a, b, &p) || __builtin_sub_overflow(e, p, &r)) throw Overflow{};
    return r;
  }
  static bool unit(T v) { return v == 1 || v == -1; }
  static bool zero(T v) { return v == 0; }
  static T mod2(T v) { return v & 1; }
};

struct Big {
  using T = Int;
  static T from(const Int& v) { return v; }
  static T from(int64_t v) { return Int(long(v)); }
  static Int to(const T& v) { return v; }
  static T sub_mul(const T& e, const T& a, const T& b) { return e - a * b; }
  static bool unit(const T& v) { return cmpabs(v, 1UL) == 0; }
  static bool zero(const T& v) { return sgn(v) == 0; }
  static T mod2(const T& v) { return mpz_odd_p(v.get_mpz_t()) ? T(1) : T(0); }
};

template <class Ops>
struct JointEngine {
  using T = typename Ops::T;
  using Col = std::vector<std::pair<int, T>>;
  struct Layer {
    bool m2 = false;
    std::vector<Col> out;             // sorted by target
    std::vector<std::vector<int>> in;  // may hold stale sources
  };
  std::vector<Gen> gens;
  std::vector<Layer> layers;
  std::vector<char> alive;
  std::vector<int> stamp;
  int clock = 0;

  template <class Src>
  void add_layer(bool m2, std::vector<std::vector<std::pair<int, Src>>>& cols, bool consume) {
    int n = int(gens.size());
    Layer L;
    L.m2 = m2;
    L.out.resize(n);
    L.in.resize(n);
    for (int a = 0; a < int(cols.size()); ++a) {
      if (!alive[a]) continue;
      for (auto& [b, v] : cols[a]) {
        if (!alive[b]) continue;
        T t = Ops::from(v);
        if (m2) t = Ops::mod2(t);
        if (Ops::zero(t)) continue;
        L.out[a].push_back({b, t});
        L.in[b].push_back(a);
      }
      std::sort(L.out[a].begin(), L.out[a].end(), [](auto& x, auto& y) { return x.first < y.first; });
      if (consume) std::vector<std::pair<int, Src>>().swap(cols[a]);
    }
    layers.push_back(std::move(L));
  }

  static const T* find(const Col& col, int t) {
    auto it = std::lower_bound(col.begin(), col.end(), t,
                               [](const std::pair<int, T>& e, int k) { return e.first < k; });
    return (it != col.end() && it->first == t) ? &it->second : nullptr;
  }

  bool eligible(int a, int b) const {
    if (gens[a].q != gens[b].q) return false;
    for (auto& L : layers) {
      const T* v = find(L.out[a], b);
      if (!v || !Ops::unit(*v)) return false;
    }
    return true;
  }

  int choose(int a) const {
    int best = -1;
    size_t cost = 0;
    for (auto& [b, v] : layers[0].out[a]) {
      if (!alive[b] || !eligible(a, b)) continue;
      size_t c = layers[0].in[b].size() * layers[0].out[a].size();
      if (best < 0 || c < cost) {
        best = b;
        cost = c;
      }
    }
    return best;
  }

  // Computes every updated column first so that an overflow leaves the state untouched.
  void cancel(int a, int b, std::deque<int>& work, std::vector<char>& queued) {
    struct Update {
      size_t layer;
      int g;
      Col col;
      std::vector<int> fresh;
    };
    std::vector<Update> ups;
    for (size_t li = 0; li < layers.size(); ++li) {
      Layer& L = layers[li];
      T u = *find(L.out[a], b);
      Col mu;
      for (auto& e : L.out[a])
        if (e.first != b && alive[e.first]) mu.push_back(e);
      ++clock;
      for (int g : L.in[b]) {
        if (g == a || !alive[g] || stamp[g] == clock) continue;
        stamp[g] = clock;
        const Col& col = L.out[g];
        const T* lp = find(col, b);
        if (!lp) continue;
        T lu = Ops::sub_mul(T(0), *lp, Ops::sub_mul(T(0), u, T(1)));  // lambda*u
        Update up{li, g, {}, {}};
        up.col.reserve(col.size() + mu.size());
        size_t i = 0, j = 0;
        while (i < col.size() || j < mu.size()) {
          if (j == mu.size() || (i < col.size() && col[i].first < mu[j].first)) {
            if (col[i].first != b) up.col.push_back(col[i]);
            ++i;
            continue;
          }
          T base = T(0);
          bool had = false;
          if (i < col.size() && col[i].first == mu[j].first) {
            base = col[i].second;
            had = true;
            ++i;
          }
          T r = Ops::sub_mul(base, lu, mu[j].second);
          if (L.m2) r = Ops::mod2(r);
          if (!Ops::zero(r)) {
            up.col.push_back({mu[j].first, r});
            if (!had) up.fresh.push_back(mu[j].first);
          }
          ++j;
        }
        ups.push_back(std::move(up));
      }
    }
    for (auto& up : ups) {
      Layer& L = layers[up.layer];
      L.out[up.g] = std::move(up.col);
      for (int t : up.fresh) L.in[t].push_back(up.g);
      if (up.layer == 0 && !queued[up.g]) {
        queued[up.g] = 1;
        work.push_back(up.g);
      }
    }
    for (auto& L : layers) {
      for (int g : L.in[a])
        if (alive[g]) {
          auto& col = L.out[g];
          col.erase(std::remove_if(col.begin(), col.end(), [&](auto& e) { return e.first == a; }),
                    col.end());
        }
      Col().swap(L.out[a]);
      Col().swap(L.out[b]);
      std::vector<int>().swap(L.in[a]);
      std::vector<int>().swap(L.in[b]);
    }
    alive[a] = alive[b] = 0;
  }

  // Returns false if an entry overflowed; the state is then still consistent.
  bool run() {
    int n = int(gens.size());
    std::deque<int> work;
    std::vector<char> queued(n, 0);
    for (int a = 0; a < n; ++a)
      if (alive[a]) {
        work.push_back(a);
        queued[a] = 1;
      }
    while (!work.empty()) {
      int a = work.front();
      work.pop_front();
      queued[a] = 0;
      if (!alive[a]) continue;
      int b = choose(a);
      if (b < 0) continue;
      try {
        cancel(a, b, work, queued);
      } catch (const Overflow&) {
        return false;
      }
    }
    return true;
  }

  std::vector<int> kept() const {
    std::vector<int> k;
    for (int a = 0; a < int(gens.size()); ++a)
      if (alive[a]) k.push_back(a);
    return k;
  }

  Complex extract(size_t li, Ring ring, const std::vector<int>& kept) const {
    std::vector<int> idx(gens.size(), -1);
    for (int k = 0; k < int(kept.size()); ++k) idx[kept[k]] = k;
    Complex c;
    c.ring = ring;
    for (int a : kept) c.gens.push_back(gens[a]);
    c.d.assign(kept.size(), {});
    for (int a : kept)
      for (auto& [t, v] : layers[li].out[a])
        if (alive[t]) c.d[idx[a]].push_back({idx[t], Ops::to(v)});
    return c;
  }
};

template <class Src>
std::vector<Complex> joint_run(const std::vector<Gen>& gens, std::vector<Ring> rings,
                               std::vector<std::vector<std::vector<std::pair<int, Src>>>*> cols,
                               std::vector<int>& kept, bool consume) {
  std::vector<Complex> out;
  JointEngine<Checked> e;
  e.gens = gens;
  e.alive.assign(gens.size(), 1);
  e.stamp.assign(gens.size(), -1);
  bool small = true;
  try {
    for (size_t k = 0; k < cols.size(); ++k) e.add_layer(is_mod2(rings[k]), *cols[k], consume);
  } catch (const Overflow&) {
    small = false;
  }
  if (small && e.run()) {
    kept = e.kept();
    for (size_t k = 0; k < rings.size(); ++k) out.push_back(e.extract(k, rings[k], kept));
    return out;
  }
  JointEngine<Big> b;
  b.gens = gens;
  b.stamp.assign(gens.size(), -1);
  if (small) {
    // continue from the consistent int64 state
    b.alive = e.alive;
    for (auto& L : e.layers) {
      typename JointEngine<Big>::Layer M;
      M.m2 = L.m2;
      M.in = std::move(L.in);
      M.out.resize(L.out.size());
      for (size_t a = 0; a < L.out.size(); ++a)
        for (auto& [t, v] : L.out[a]) M.out[a].push_back({t, Int(long(v))});
      b.layers.push_back(std::move(M));
    }
  } else {
    b.alive.assign(gens.size(), 1);
    for (size_t k = 0; k < cols.size(); ++k) b.add_layer(is_mod2(rings[k]), *cols[k], false);
  }
  b.run();
  kept = b.kept();
  for (size_t k = 0; k < rings.size(); ++k) out.push_back(b.extract(k, rings[k], kept));
  return out;
}

}  // namespace

std::vector<int> simplify_joint(std::vector<Complex*> cs) {
  if (cs.empty()) return {};
  std::vector<Ring> rings;
  std::vector<std::vector<Column>*> cols;
  for (auto* c : cs) {
    if (c->gens.size() != cs[0]->gens.size())
      throw std::invalid_argument("joint simplification needs a shared generator set");
    c->d.resize(c->gens.size());
    rings.push_back(c->ring);
    cols.push_back(&c->d);
  }
  std::vector<int> kept;
  auto res = joint_run(cs[0]->gens, rings, cols, kept, false);
  for (size_t k = 0; k < cs.size(); ++k) {
    std::vector<std::string> labels;
    if (!cs[k]->labels.empty())
      for (int a : kept) labels.push_back(cs[k]->labels[a]);
    *cs[k] = std::move(res[k]);
    cs[k]->labels = std::move(labels);
  }
  return kept;
}

std::vector<Complex> simplify_joint_raw(const std::vector<Gen>& gens, std::vector<RawLayer>& layers,
                                        std::vector<int>* kept_out) {
  std::vector<Ring> rings;
  std::vector<std::vector<std::vector<std::pair<int, int64_t>>>*> cols;
  for (auto& L : layers) {
    L.cols.resize(gens.size());
    rings.push_back(L.ring);
    cols.push_back(&L.cols);
  }
  std::vector<int> kept;
  auto res = joint_run(gens, rings, cols, kept, true);
  if (kept_out) *kept_out = std::move(kept);
  return res;
}

}  // namespace khleo
