#include "khleo/leo.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "khleo/khovanov.hpp"
#include "subsets.hpp"

namespace khleo {

using detail::Subset;

const char* flavor_name(Flavor f) {
  switch (f) {
    case Flavor::Unreduced: return "unreduced";
    case Flavor::Reduced: return "reduced";
    case Flavor::TwoReduced: return "two-reduced";
  }
  return "?";
}

namespace {

std::vector<Column> identity_mod2(int n) { return identity_map(n); }

void finish_knot(LEOTriple& t, const PlanarDiagram& d, const std::string& name) {
  t.provenance = name.empty() ? "knot" : name;
  t.from_knot = true;
  t.diagram = d;
  t.diagram_shift = 0;
  validate(t);
}

// The mod-2 matrix f tensored with itself over the plain (or module) bases
// used by tensor / tensor_over_x.
std::vector<Column> tensor_f(const LEOTriple& a, const LEOTriple& b, int n) {
  auto fa = f_matrix(a), fb = f_matrix(b);
  std::vector<Column> out(n);
  auto put = [&](int from, int to) { Complex::add_to(out, from, to, 1); };
  if (a.flavor != Flavor::Unreduced) {
    int nb = b.size();
    for (int x = 0; x < a.size(); ++x)
      for (int y = 0; y < nb; ++y)
        for (auto& [u, v] : fa[x])
          for (auto& [w, s] : fb[y]) put(x * nb + y, u * nb + w);
  } else {
    XBasis ca = x_basis(a.C), cb = x_basis(b.C), da = x_basis(a.D), db = x_basis(b.D);
    int nb = int(cb.plain.size());
    int dnb = int(db.plain.size());
    for (int x = 0; x < int(ca.plain.size()); ++x)
      for (int y = 0; y < nb; ++y) {
        int t = 2 * (x * nb + y);
        for (auto& [u, v] : fa[ca.plain[x]])
          for (auto& [w, s] : fb[cb.plain[y]]) {
            int hats = (da.is_hat[u] ? 1 : 0) + (db.is_hat[w] ? 1 : 0);
            if (hats == 2) continue;  // X^2 = 0 mod (2,h)
            int tt = 2 * (da.base[u] * dnb + db.base[w]) + hats;
            put(t, tt);
            if (hats == 0) put(t + 1, tt + 1);
          }
      }
  }
  for (auto& col : out)
    for (auto& e : col) e.second %= 2;
  for (auto& col : out)
    col.erase(std::remove_if(col.begin(), col.end(), [](const Entry& e) { return sgn(e.second) == 0; }),
              col.end());
  return out;
}

bool same_plain(const Complex& a, const Complex& b) {
  XBasis x = x_basis(a), y = x_basis(b);
  return x.plain == y.plain && x.is_hat == y.is_hat;
}

// Inverse of a square matrix mod 2, by columns; empty if singular.
std::optional<std::vector<Column>> invert_mod2(const std::vector<Column>& m, int n) {
  std::vector<Vec> rows(n, Vec(2 * n, 0));
  for (int a = 0; a < n; ++a) {
    if (a < int(m.size()))
      for (auto& [b, v] : m[a])
        if (v % 2 != 0) rows[b][a] = 1;
    rows[a][n + a] = 1;
  }
  for (int c = 0; c < n; ++c) {
    int r = c;
    while (r < n && !rows[r][c]) ++r;
    if (r == n) return std::nullopt;
    std::swap(rows[r], rows[c]);
    for (int k = 0; k < n; ++k)
      if (k != c && rows[k][c])
        for (int j = 0; j < 2 * n; ++j) rows[k][j] ^= rows[c][j];
  }
  std::vector<Column> inv(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (rows[b][n + a]) inv[a].push_back({b, Int(1)});
  return inv;
}

}  // namespace

LEOTriple trivial_triple(Flavor flavor) {
  LEOTriple t;
  t.flavor = flavor;
  t.provenance = "trivial";
  t.from_knot = true;
  if (flavor == Flavor::Unreduced) {
    t.C.xmod = t.D.xmod = true;
    t.C.gens = t.D.gens = {{0, 1}, {0, -1}};
    t.C.labels = t.D.labels = {"1", "X"};
    t.C.d.assign(2, {});
    t.D.d.assign(2, {});
    t.C.x.assign(2, {});
    t.D.x.assign(2, {});
    t.C.add_x(0, 1, 1);
    t.D.add_x(0, 1, 1);
    t.D.add_x(1, 1, 1);
  } else {
    t.C.gens = t.D.gens = {{0, 0}};
    t.C.labels = t.D.labels = {"1"};
    t.C.d.assign(1, {});
    t.D.d.assign(1, {});
  }
  t.C.ring = Ring::Z;
  t.D.ring = flavor == Flavor::TwoReduced ? Ring::F2H : Ring::ZH;
  return t;
}

LEOTriple leo_of_knot(const PlanarDiagram& d, const std::string& name, bool simplify) {
  LEOTriple t;
  if (simplify) {
    KnotComplexes k = knot_complexes(d, false);
    t.C = std::move(k.odd);
    t.D = std::move(k.barnatan);
  } else {
    Cube cube = make_cube(d);
    EdgeAssignment ea = edge_assignment(cube);
    t.C = khovanov_complex(cube, Theory::Odd, &ea);
    t.D = khovanov_complex(cube, Theory::BarNatan);
  }
  finish_knot(t, d, name);
  return t;
}

LEOTriple lee_of_knot(const PlanarDiagram& d, const std::string& name, bool simplify) {
  LEOTriple t;
  t.even = true;
  if (simplify) {
    t.D = std::move(knot_complexes(d, false).barnatan);
    t.C = set_h_zero(t.D);
  } else {
    Cube cube = make_cube(d);
    t.C = khovanov_complex(cube, Theory::Even);
    t.D = khovanov_complex(cube, Theory::BarNatan);
  }
  finish_knot(t, d, name);
  return t;
}

KnotTriples knot_triples(const PlanarDiagram& d, const std::string& name, bool leo, bool lee, bool reduced) {
  KnotTriples out;
  if (leo || lee) {
    KnotComplexes k = knot_complexes(d, false);
    if (lee) {
      LEOTriple t;
      t.even = true;
      t.D = k.barnatan;
      t.C = set_h_zero(t.D);
      finish_knot(t, d, name);
      out.lee = std::move(t);
    }
    if (leo) {
      LEOTriple t;
      t.C = std::move(k.odd);
      t.D = std::move(k.barnatan);
      finish_knot(t, d, name);
      out.leo = std::move(t);
    }
  }
  if (reduced) out.reduced = reduced_leo_of_knot(d, name);
  return out;
}

LEOTriple reduced_leo_of_knot(const PlanarDiagram& d, const std::string& name, bool simplify) {
  LEOTriple t;
  t.flavor = Flavor::Reduced;
  if (simplify) {
    KnotComplexes k = knot_complexes(d, true);
    t.C = std::move(k.odd);
    t.D = std::move(k.barnatan);
  } else {
    Cube cube = make_cube(d);
    EdgeAssignment ea = edge_assignment(cube);
    t.C = reduced_khovanov_complex(cube, Theory::Odd, &ea);
    t.D = reduced_khovanov_complex(cube, Theory::BarNatan);
  }
  finish_knot(t, d, name);
  return t;
}

std::vector<Column> f_matrix(const LEOTriple& t) {
  if (t.f_identity) return identity_mod2(t.size());
  return t.f;
}

LEOTriple reduce(const LEOTriple& t) {
  if (t.flavor != Flavor::Unreduced) throw std::invalid_argument("reduce: triple is already reduced");
  LEOTriple r;
  if (t.has_x()) {
    r = t;
    r.flavor = Flavor::Reduced;
    r.C = quotient_by_x(t.C);
    r.D = quotient_by_x(t.D);
    if (!t.f_identity || !same_plain(t.C, t.D)) {
      XBasis xc = x_basis(t.C), xd = x_basis(t.D);
      auto f = f_matrix(t);
      r.f_identity = false;
      r.f.assign(xc.plain.size(), {});
      for (int k = 0; k < int(xc.plain.size()); ++k)
        for (auto& [b, v] : f[xc.plain[k]])
          if (!xd.is_hat[b]) r.f[k].push_back({xd.base[b], Int(1)});
    }
    r.diagram.reset();
  } else if (t.diagram) {
    if (t.even) {
      r.flavor = Flavor::Reduced;
      r.D = std::move(knot_complexes(*t.diagram, true).barnatan);
      r.C = set_h_zero(r.D);
      r.even = true;
      r.from_knot = true;
      r.provenance = t.provenance;
    } else {
      r = reduced_leo_of_knot(*t.diagram, t.provenance);
    }
    r = shift(r, t.diagram_shift);
  } else {
    throw std::invalid_argument("reduce: needs X-actions (unsimplified complexes) or a knot diagram");
  }
  r.diagram.reset();
  r.diagram_shift = 0;
  validate(r);
  return r;
}

LEOTriple two_reduce(const LEOTriple& t) {
  if (t.flavor != Flavor::Reduced) throw std::invalid_argument("two_reduce: needs a reduced triple");
  LEOTriple r = t;
  r.flavor = Flavor::TwoReduced;
  r.D = mod2(t.D);
  validate(r);
  return r;
}

LEOTriple tensor(const LEOTriple& a, const LEOTriple& b) {
  if (a.flavor != b.flavor) throw std::invalid_argument("tensor: flavor mismatch");
  LEOTriple r;
  r.flavor = a.flavor;
  if (a.flavor == Flavor::Unreduced) {
    if (!a.has_x() || !b.has_x())
      throw std::invalid_argument("tensor: unreduced triples need X-actions (build with simplify = false)");
    r.C = tensor_over_x(a.C, b.C);
    r.D = tensor_over_x(a.D, b.D);
    if (a.f_identity && b.f_identity && same_plain(a.C, a.D) && same_plain(b.C, b.D)) {
      r.f_identity = true;
    } else {
      r.f_identity = false;
      r.f = tensor_f(a, b, r.C.size());
    }
    if (a.diagram && b.diagram) {
      r.diagram = connected_sum(*a.diagram, *b.diagram);
      r.diagram_shift = a.diagram_shift + b.diagram_shift;
    }
  } else {
    r.C = khleo::tensor(a.C, b.C);
    r.D = khleo::tensor(a.D, b.D);
    r.f_identity = a.f_identity && b.f_identity;
    if (!r.f_identity) r.f = tensor_f(a, b, r.C.size());
  }
  r.from_knot = a.from_knot && b.from_knot && a.even == b.even;
  r.even = a.even && b.even;
  r.provenance = a.provenance + " # " + b.provenance;
  return r;
}

LEOTriple dual(const LEOTriple& t) {
  LEOTriple r = t;
  r.C = dual(t.C);
  r.D = dual(t.D);
  if (!t.f_identity) {
    auto inv = invert_mod2(t.f, t.size());
    if (!inv) throw std::invalid_argument("dual: f must be invertible at chain level");
    // (f^T)^{-1} = (f^{-1})^T
    r.f.assign(t.size(), {});
    for (int a = 0; a < t.size(); ++a)
      for (auto& [b, v] : (*inv)[a]) r.f[b].push_back({a, v});
    for (auto& col : r.f) std::sort(col.begin(), col.end(), [](auto& x, auto& y) { return x.first < y.first; });
  }
  if (t.diagram) {
    r.diagram = mirror(*t.diagram);
    r.diagram_shift = -t.diagram_shift;
  }
  r.provenance = t.provenance + "*";
  return r;
}

LEOTriple shift(const LEOTriple& t, int n) {
  if (n % 2 != 0) throw std::invalid_argument("shift: the quantum shift must be even");
  LEOTriple r = t;
  r.C = shift(t.C, n);
  r.D = shift(t.D, n);
  r.diagram_shift += n;
  if (n != 0) {
    std::ostringstream os;
    os << t.provenance << "{" << n << "}";
    r.provenance = os.str();
  }
  return r;
}

LEOTriple simplify(const LEOTriple& t) {
  LEOTriple r = t;
  if (t.f_identity) {
    simplify_joint({&r.C, &r.D});
  } else {
    // f' = forward_D o f o backward_C, keeping the h^0 part mod 2
    Simplified sc = simplify_tracked(t.C), sd = simplify_tracked(t.D);
    auto f = compose(sd.eq.forward, compose(f_matrix(t), sc.eq.backward));
    r.C = std::move(sc.complex);
    r.D = std::move(sd.complex);
    r.f.assign(r.C.size(), {});
    for (int a = 0; a < r.C.size(); ++a)
      for (auto& [b, v] : f[a])
        if (r.D.gens[b].q == r.C.gens[a].q && mpz_odd_p(v.get_mpz_t())) r.f[a].push_back({b, Int(1)});
  }
  r.C.xmod = r.D.xmod = false;
  r.C.x.clear();
  r.D.x.clear();
  return r;
}

namespace {

struct Monomial {
  Int c = 1;
  int x = 0, h = 0;
};

Monomial parse_monomial(const nlohmann::json& j) {
  Monomial m;
  if (j.is_number_integer()) {
    m.c = Int(j.get<long>());
    return m;
  }
  if (!j.is_string()) throw InvalidTriple("monomial must be a string or an integer");
  std::string s;
  for (char ch : j.get<std::string>())
    if (ch != ' ') s += ch;
  if (s.empty()) throw InvalidTriple("empty monomial");
  std::stringstream ss(s);
  std::string f;
  while (std::getline(ss, f, '*')) {
    while (!f.empty() && (f[0] == '-' || f[0] == '+')) {
      if (f[0] == '-') m.c = -m.c;
      f = f.substr(1);
    }
    if (f.empty()) throw InvalidTriple("bad monomial '" + s + "'");
    auto power = [&](size_t at) {
      if (f.size() == at) return 1;
      if (f[at] != '^') throw InvalidTriple("bad monomial '" + s + "'");
      return std::stoi(f.substr(at + 1));
    };
    if (std::all_of(f.begin(), f.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
      m.c *= Int(f);
    else if (f[0] == 'X')
      m.x += power(1);
    else if (f[0] == 'h')
      m.h += power(1);
    else
      throw InvalidTriple("bad monomial '" + s + "'");
  }
  if (m.x > 1) throw InvalidTriple("monomial '" + s + "': write X^2 as h*X");
  return m;
}

}  // namespace

LEOTriple from_algebraic(const nlohmann::json& j) {
  LEOTriple t;
  std::string fl = j.value("flavor", "unreduced");
  if (fl == "unreduced") t.flavor = Flavor::Unreduced;
  else if (fl == "reduced") t.flavor = Flavor::Reduced;
  else if (fl == "two-reduced" || fl == "two_reduced") t.flavor = Flavor::TwoReduced;
  else throw InvalidTriple("unknown flavor '" + fl + "'");
  t.provenance = j.value("name", "algebraic");
  bool un = t.flavor == Flavor::Unreduced;
  int w = un ? 2 : 1;  // expanded generators per listed generator

  std::map<std::string, int> index;
  std::vector<Gen> base;
  std::vector<std::string> names;
  for (auto& g : j.at("generators")) {
    std::string label = g.at("label").get<std::string>();
    if (index.count(label)) throw InvalidTriple("duplicate generator '" + label + "'");
    index[label] = int(base.size());
    base.push_back({g.at("i").get<int>(), g.at("q").get<int>()});
    names.push_back(label);
  }
  int n = int(base.size());
  for (Complex* c : {&t.C, &t.D}) {
    c->xmod = un;
    for (int k = 0; k < n; ++k) {
      c->gens.push_back(base[k]);
      c->labels.push_back(names[k]);
      if (un) {
        c->gens.push_back({base[k].i, base[k].q - 2});
        c->labels.push_back("X" + names[k]);
      }
    }
    c->d.assign(c->gens.size(), {});
    if (un) {
      c->x.assign(c->gens.size(), {});
      for (int k = 0; k < n; ++k) c->add_x(2 * k, 2 * k + 1, 1);
    }
  }
  t.C.ring = Ring::Z;
  t.D.ring = t.flavor == Flavor::TwoReduced ? Ring::F2H : Ring::ZH;
  if (un)
    for (int k = 0; k < n; ++k) t.D.add_x(2 * k + 1, 2 * k + 1, 1);

  auto lookup = [&](const nlohmann::json& e, int pos) {
    std::string l = e.at(pos).get<std::string>();
    auto it = index.find(l);
    if (it == index.end()) throw InvalidTriple("unknown generator '" + l + "'");
    return it->second;
  };
  auto read = [&](const char* key, Complex& c, bool allow_h) {
    if (!j.contains(key)) return;
    for (auto& e : j.at(key)) {
      int a = lookup(e, 0), b = lookup(e, 1);
      Monomial m = parse_monomial(e.at(2));
      std::string where = std::string(key) + " entry " + names[a] + " -> " + names[b];
      if (m.h && !allow_h) throw InvalidTriple(where + " involves h");
      if (m.x && !un) throw InvalidTriple(where + " involves X in a reduced flavor");
      if (base[b].i != base[a].i + 1) throw InvalidTriple(where + " does not raise i by 1");
      if (base[b].q - 2 * m.x - 2 * m.h != base[a].q) throw InvalidTriple(where + " does not preserve q");
      if (m.h < 0) throw InvalidTriple(where + " has a negative power of h");
      if (!un) {
        c.add_entry(a, b, m.c);
      } else if (m.x == 0) {
        c.add_entry(w * a, w * b, m.c);
        c.add_entry(w * a + 1, w * b + 1, m.c);
      } else {
        c.add_entry(w * a, w * b + 1, m.c);
        if (allow_h) c.add_entry(w * a + 1, w * b + 1, m.c);  // X^2 = hX
      }
    }
    c.normalize();
  };
  read("dC", t.C, false);
  read("dD", t.D, true);

  if (j.contains("f")) {
    t.f_identity = false;
    t.f.assign(t.C.size(), {});
    for (auto& e : j.at("f")) {
      int a = lookup(e, 0), b = lookup(e, 1);
      Monomial m = e.size() > 2 ? parse_monomial(e.at(2)) : Monomial{};
      if (m.h) throw InvalidTriple("f entries cannot involve h");
      if (m.c % 2 == 0) continue;
      if (!un) {
        Complex::add_to(t.f, a, b, 1);
      } else if (m.x == 0) {
        Complex::add_to(t.f, w * a, w * b, 1);
        Complex::add_to(t.f, w * a + 1, w * b + 1, 1);
      } else {
        Complex::add_to(t.f, w * a, w * b + 1, 1);
      }
    }
    for (auto& col : t.f) {
      for (auto& e : col) e.second %= 2;
      col.erase(std::remove_if(col.begin(), col.end(), [](const Entry& x) { return sgn(x.second) == 0; }),
                col.end());
    }
    if (maps_equal(t.f, identity_map(t.C.size()))) {
      t.f_identity = true;
      t.f.clear();
    }
  }
  validate(t);
  return t;
}

std::vector<std::string> validation_report(const LEOTriple& t) {
  std::vector<std::string> bad;
  const Complex& C = t.C;
  const Complex& D = t.D;
  if (C.size() != D.size()) {
    bad.push_back("C and D have different generator counts");
    return bad;
  }
  for (int a = 0; a < C.size(); ++a)
    if (C.gens[a].i != D.gens[a].i || C.gens[a].q != D.gens[a].q) {
      bad.push_back("C and D differ in the bigrading of generator " + std::to_string(a));
      return bad;
    }
  if (C.ring != Ring::Z) bad.push_back("C must be over Z");
  Ring want = t.flavor == Flavor::TwoReduced ? Ring::F2H : Ring::ZH;
  if (D.ring != want) bad.push_back(std::string("D must be over ") + ring_name(want, false));
  for (auto [name, c] : {std::pair{"C", &C}, std::pair{"D", &D}}) {
    try {
      check_complex(*c);
    } catch (const std::exception& e) {
      bad.push_back(std::string(name) + ": " + e.what());
    }
  }
  if (!bad.empty()) return bad;

  // f: a bigraded chain map C/2 -> D/(2,h) inducing isomorphisms.
  Complex D0 = set_h_zero(D);
  auto f = f_matrix(t);
  int n = C.size();
  for (int a = 0; a < n && a < int(f.size()); ++a)
    for (auto& [b, v] : f[a])
      if (C.gens[a].i != D.gens[b].i || C.gens[a].q != D.gens[b].q) {
        bad.push_back("f does not preserve the bigrading");
        return bad;
      }
  {
    Complex c2 = mod2(C), d2 = mod2(D0);
    auto lhs = compose(f, c2.d);
    auto rhs = compose(d2.d, f);
    auto red = [](std::vector<Column> m) {
      for (auto& col : m) {
        for (auto& e : col) e.second = ((e.second % 2) + 2) % 2;
        col.erase(std::remove_if(col.begin(), col.end(), [](const Entry& e) { return sgn(e.second) == 0; }),
                  col.end());
      }
      return m;
    };
    if (!maps_equal(red(lhs), red(rhs))) {
      bad.push_back("f is not a chain map mod (2,h)");
      return bad;
    }
    std::map<std::pair<int, int>, int> seen;
    for (auto& g : C.gens) seen[{g.i, g.q}] = 1;
    for (auto& [bg, unused] : seen) {
      auto [i, q] = bg;
      Subset c0(n, detail::members(C, i, q, false));
      Subset cm(n, detail::members(C, i - 1, q, false));
      Subset cp(n, detail::members(C, i + 1, q, false));
      auto cycles = [&](const Complex& k, const Subset& s0) {
        auto ker = mod_kernel(detail::images_mod(k.d, s0, cp, 2), cp.size(), 2);
        std::vector<Vec> out;
        for (auto& v : ker) {
          Vec z(s0.size(), 0);
          for (int x = 0; x < s0.size(); ++x) z[x] = v[x];
          out.push_back(z);
        }
        return out;
      };
      auto bounds = [&](const Complex& k) {
        ModSpace s(2, c0.size());
        for (auto& v : detail::images_mod(k.d, cm, c0, 2)) s.add(v);
        return s;
      };
      auto zc = cycles(c2, c0), zd = cycles(d2, c0);
      ModSpace bc = bounds(c2), bd = bounds(d2);
      int hc = int(zc.size()) - bc.dim(), hd = int(zd.size()) - bd.dim();
      ModSpace img = bd;
      for (auto& z : zc) {
        Vec fz(c0.size(), 0);
        for (int x = 0; x < c0.size(); ++x) {
          if (!z[x]) continue;
          int a = c0.idx[x];
          if (a < int(f.size()))
            for (auto& [b, v] : f[a]) fz[c0.pos[b]] ^= 1;
        }
        img.add(fz);
      }
      if (hc != hd || img.dim() - bd.dim() != hc) {
        std::ostringstream os;
        os << "f is not an isomorphism on mod-2 homology at (" << i << "," << q << ")";
        bad.push_back(os.str());
        return bad;
      }
    }
  }

  // Localized D: free of rank one over the localized ground ring, in degree 0.
  int parity = t.flavor == Flavor::Unreduced ? 1 : 0;
  int want_rank = t.flavor == Flavor::Unreduced ? 2 : 1;
  int lo = 0, hi = 0;
  for (auto& g : D.gens) {
    lo = std::min(lo, g.i);
    hi = std::max(hi, g.i);
  }
  for (int par = 0; par < 2; ++par) {
    Complex L = localize(D, par);
    for (int i = lo; i <= hi; ++i) {
      int expect = (par == parity && i == 0) ? want_rank : 0;
      bool ok;
      std::string got;
      if (L.ring == Ring::F2) {
        int dim = homology_dim_mod(L, i, 2);
        ok = dim == expect;
        got = "dimension " + std::to_string(dim);
      } else {
        HomologyGroup g = homology(L, i).group();
        ok = g.rank == expect && g.torsion.empty();
        got = g.str();
      }
      if (!ok) {
        std::ostringstream os;
        os << "localized D has " << got << " in degree " << i << " at " << (par ? "odd" : "even")
           << " q (expected rank " << expect << ")";
        bad.push_back(os.str());
      }
    }
  }
  return bad;
}

void validate(const LEOTriple& t) {
  auto bad = validation_report(t);
  if (bad.empty()) return;
  std::string msg = "invalid LEO triple (" + t.provenance + "):";
  for (auto& b : bad) msg += "\n  " + b;
  throw InvalidTriple(msg);
}

}  // namespace khleo
