#include "khleo/invariants.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <stdexcept>

#include "subsets.hpp"

namespace khleo {

using detail::Subset;
using detail::transport;

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::NotHalfFull: return "not half-full";
    case Verdict::HalfFull: return "half-full";
    case Verdict::Full: return "full";
  }
  return "?";
}

const char* order_name(Order o) {
  switch (o) {
    case Order::Less: return "less";
    case Order::Equal: return "equal";
    case Order::Greater: return "greater";
  }
  return "?";
}

namespace {

Vec mod2_vec(const IMat& m, int col) {
  std::vector<Int> v(m.rows);
  for (int r = 0; r < m.rows; ++r) v[r] = m(r, col);
  return reduce_mod(v, 2);
}


class Analyzer {
 public:
  explicit Analyzer(const LEOTriple& t) : t_(t), n_(t.size()) {
    if (t.C.size() != t.D.size()) throw InvalidTriple("C and D have different generator counts");
    parity_ = t.flavor == Flavor::Unreduced ? 1 : 0;
    rank_ = t.flavor == Flavor::Unreduced ? 2 : 1;
    mod2_only_ = is_mod2(t.D.ring);
    f_ = f_matrix(t);
    bool any = false;
    for (auto& g : t.D.gens) {
      if (((g.q - parity_) % 2 + 2) % 2 != 0) continue;
      if (g.i < -1 || g.i > 1) continue;
      if (!any) top_ = bottom_ = g.q;
      any = true;
      bottom_ = std::min(bottom_, g.q);
      if (g.i == 0) top_ = std::max(top_, g.q);
    }
    if (!any) throw InvalidTriple("D has no generators near homological degree 0");
    L0_ = Subset(n_, detail::members(t.D, 0, bottom_, true));
    Lm_ = Subset(n_, detail::members(t.D, -1, bottom_, true));
    L1_ = Subset(n_, detail::members(t.D, 1, bottom_, true));
  }

  int parity() const { return parity_; }
  int rank() const { return rank_; }
  int q0() const { return bottom_ - 2; }
  int top() const { return top_; }
  int max_two_power() const { return max_two_power_; }
  bool mod2_only() const { return mod2_only_; }

  // Largest q of the right parity in [q0, top] with pred(q); q0 always
  // satisfies the fullness predicates.
  int scan(const std::function<bool(int)>& pred, const char* what) {
    for (int q = top_; q >= q0(); q -= 2)
      if (pred(q)) return q;
    throw InvalidTriple(std::string("no grading satisfies ") + what + " (localized target is wrong)");
  }

  // Boundaries of the localized complex in degree 0, mod p.
  const ModSpace& local_bounds(uint32_t p) {
    auto it = lb_.find(p);
    if (it != lb_.end()) return it->second;
    ModSpace s(p, L0_.size());
    for (auto& v : detail::images_mod(t_.D.d, Lm_, L0_, p)) s.add(v);
    return lb_.emplace(p, std::move(s)).first->second;
  }
  int local_dim(uint32_t p) {
    auto it = ld_.find(p);
    if (it != ld_.end()) return it->second;
    int z = int(mod_kernel(detail::images_mod(t_.D.d, L0_, L1_, p), L1_.size(), p).size());
    return ld_[p] = z - local_bounds(p).dim();
  }

  // Integral homology of the localized complex in degree 0.
  const HomologyPresentation& local_homology() {
    if (!hl_) {
      if (mod2_only_) throw std::invalid_argument("integral invariants need D over Z[h]");
      Complex L = localize(t_.D, parity_);
      hl_ = std::make_unique<HomologyPresentation>(homology(L, 0));
      for (int k = 0; k < int(hl_->order.size()); ++k)
        if (sgn(hl_->order[k]) == 0) free_.push_back(k);
    }
    return *hl_;
  }
  // Free coordinates in H^0(h^{-1}D) of the P0-cycles given as columns.
  IMat local_coords(const Subset& P0, const IMat& cycles) {
    const HomologyPresentation& h = local_homology();
    IMat z(L0_.size(), cycles.cols);
    for (int k = 0; k < P0.size(); ++k) {
      int at = L0_.pos[P0.idx[k]];
      for (int j = 0; j < cycles.cols; ++j) z(at, j) = cycles(k, j);
    }
    IMat all = h.coord * z;
    IMat out(int(free_.size()), cycles.cols);
    for (int r = 0; r < int(free_.size()); ++r)
      for (int j = 0; j < cycles.cols; ++j) out(r, j) = all(free_[r], j);
    return out;
  }

  struct Slice {
    int q = 0;
    Subset P0, P1, Pm, Q0, Qm, Q1;
    std::vector<Vec> z2;   // mod-2 cycles of the piece, P0 coordinates
    std::vector<Vec> pz2;  // their projections p, Q0 coordinates
    std::unique_ptr<ModSpace> bq2;
    std::unique_ptr<IMat> zint;
    std::unique_ptr<Smith> csmith;
    std::unique_ptr<std::vector<Vec>> odd;
  };

  Slice& slice(int q) {
    auto it = slices_.find(q);
    if (it != slices_.end()) return *it->second;
    auto s = std::make_unique<Slice>();
    s->q = q;
    const Complex& D = t_.D;
    s->P0 = Subset(n_, detail::members(D, 0, q, true));
    s->P1 = Subset(n_, detail::members(D, 1, q, true));
    s->Pm = Subset(n_, detail::members(D, -1, q, true));
    s->Q0 = Subset(n_, detail::members(D, 0, q, false));
    s->Q1 = Subset(n_, detail::members(D, 1, q, false));
    s->Qm = Subset(n_, detail::members(D, -1, q, false));
    s->z2 = mod_kernel(detail::images_mod(D.d, s->P0, s->P1, 2), s->P1.size(), 2);
    for (auto& z : s->z2) s->pz2.push_back(transport(z, s->P0, s->Q0));
    s->bq2 = std::make_unique<ModSpace>(2, s->Q0.size());
    for (auto& v : detail::images_mod(D.d, s->Qm, s->Q0, 2)) s->bq2->add(v);
    return *slices_.emplace(q, std::move(s)).first->second;
  }

  const IMat& integral_cycles(Slice& s) {
    if (!s.zint) {
      IMat m = block(t_.D, s.P1.idx, s.P0.idx);
      s.zint = std::make_unique<IMat>(m.rows == 0 ? IMat::identity(s.P0.size()) : integer_kernel(m));
    }
    return *s.zint;
  }

  // f applied to a mod-2 vector of C generators in `from` coordinates.
  Vec apply_f(const Vec& v, const Subset& from) {
    Vec out(from.size(), 0);
    for (int k = 0; k < from.size(); ++k) {
      if (!v[k]) continue;
      int a = from.idx[k];
      if (a < int(f_.size()))
        for (auto& [b, c] : f_[a]) {
          int at = from.pos[b];
          if (at < 0) throw InvalidTriple("f does not preserve the bigrading");
          out[at] ^= 1;
        }
    }
    return out;
  }

  const Smith& c_smith(Slice& s) {
    if (!s.csmith) {
      IMat m = block(t_.C, s.Q0.idx, s.Qm.idx);
      s.csmith = std::make_unique<Smith>();
      if (m.rows > 0 && m.cols > 0) *s.csmith = smith_normal_form(m, kUinv);
      for (int j = 0; j < s.csmith->rank; ++j)
        max_two_power_ = std::max(max_two_power_, two_adic_valuation(s.csmith->diag[j]));
    }
    return *s.csmith;
  }

  // Image of f o beta_n in Q0 coordinates (D side).
  std::vector<Vec> bockstein_image(Slice& s, int n) {
    const Smith& sm = c_smith(s);
    std::vector<Vec> out;
    for (int j = 0; j < sm.rank; ++j) {
      int v = two_adic_valuation(sm.diag[j]);
      if (v >= 1 && v <= n) out.push_back(apply_f(mod2_vec(sm.Uinv, j), s.Q0));
    }
    return out;
  }

  // Image of f o beta_1 + beta_1 o f, with beta_1 of C and of D at h = 0.
  std::vector<Vec> beta_sum_image(Slice& s) {
    if (mod2_only_) throw std::invalid_argument("the beta sum needs D over Z[h]");
    auto xs = mod_kernel(detail::images_mod(t_.C.d, s.Qm, s.Q0, 2), s.Q0.size(), 2);
    auto half = [&](const Complex& c, const Vec& x) {
      std::vector<Int> acc(s.Q0.size());
      for (int k = 0; k < s.Qm.size(); ++k) {
        if (!x[k]) continue;
        int a = s.Qm.idx[k];
        if (a < int(c.d.size()))
          for (auto& [b, v] : c.d[a]) {
            int at = s.Q0.pos[b];
            if (at >= 0) acc[at] += v;
          }
      }
      for (auto& v : acc) {
        if (v % 2 != 0) throw std::logic_error("beta_1 lift is not a cycle mod 2");
        v /= 2;
      }
      return reduce_mod(acc, 2);
    };
    std::vector<Vec> out;
    for (auto& x : xs) {
      Vec a = apply_f(half(t_.C, x), s.Q0);
      Vec b = half(t_.D, apply_f(x, s.Qm));
      for (int k = 0; k < s.Q0.size(); ++k) a[k] ^= b[k];
      out.push_back(a);
    }
    return out;
  }

  // Image of f o j in Q0 coordinates.
  const std::vector<Vec>& odd_image(Slice& s) {
    if (!s.odd) {
      s.odd = std::make_unique<std::vector<Vec>>();
      IMat m = block(t_.C, s.Q1.idx, s.Q0.idx);
      IMat k = m.rows == 0 ? IMat::identity(s.Q0.size()) : integer_kernel(m);
      for (int j = 0; j < k.cols; ++j) s.odd->push_back(apply_f(mod2_vec(k, j), s.Q0));
    }
    return *s.odd;
  }

  FullnessVerdict verdict(int q, FullnessKind kind) {
    FullnessVerdict out;
    out.q = q;
    if (((q - parity_) % 2 + 2) % 2 != 0) return out;
    if (q > top_) return out;
    Slice& s = slice(q);
    std::vector<Vec> B;
    switch (kind.kind) {
      case Refinement::Bockstein: B = bockstein_image(s, kind.n); break;
      case Refinement::BetaSum: B = beta_sum_image(s); break;
      case Refinement::Oddly:
      case Refinement::Completely: B = odd_image(s); break;
    }
    ModSpace U = *s.bq2;
    for (auto& b : B) U.add(b);
    if (kind.kind == Refinement::Completely) return complete_verdict(s, U);
    auto K = mod_kernel_modulo(s.pz2, U);
    ModSpace S = local_bounds(2);
    int base = S.dim();
    for (auto& c : K) {
      Vec a = detail::combine(c, s.z2, s.P0.size(), 2);
      if (S.add(transport(a, s.P0, L0_))) {
        Column w;
        for (int k = 0; k < s.P0.size(); ++k)
          if (a[k]) w.push_back({s.P0.idx[k], Int(1)});
        out.witnesses.push_back(std::move(w));
      }
    }
    int dim = S.dim() - base;
    out.status = dim == 0 ? Verdict::NotHalfFull : dim >= local_dim(2) ? Verdict::Full : Verdict::HalfFull;
    return out;
  }

  FullnessVerdict complete_verdict(Slice& s, const ModSpace& U) {
    FullnessVerdict out;
    out.q = s.q;
    const IMat& z = integral_cycles(s);
    std::vector<Vec> rho;
    for (int j = 0; j < z.cols; ++j) rho.push_back(transport(mod2_vec(z, j), s.P0, s.Q0));
    auto K = mod_kernel_modulo(rho, U);
    IMat gens(s.P0.size(), int(K.size()) + z.cols);
    for (int k = 0; k < int(K.size()); ++k)
      for (int j = 0; j < z.cols; ++j)
        if (K[k][j])
          for (int r = 0; r < z.rows; ++r) gens(r, k) += z(r, j);
    for (int j = 0; j < z.cols; ++j)
      for (int r = 0; r < z.rows; ++r) gens(r, int(K.size()) + j) = 2 * z(r, j);
    IMat coords = local_coords(s.P0, gens);
    auto divs = lattice_divisors(coords);
    bool primitive = !divs.empty() && divs[0] == 1;
    bool all = int(divs.size()) == int(free_.size()) &&
               std::all_of(divs.begin(), divs.end(), [](const Int& d) { return d == 1; });
    out.status = all ? Verdict::Full : primitive ? Verdict::HalfFull : Verdict::NotHalfFull;
    return out;
  }

  // Dimension of i(H^{0,q}(D;F_p)), p = 0 meaning Q.
  int image_dim(int q, uint32_t p) {
    if (q > top_) return 0;
    Slice& s = slice(q);
    if (p == 0) {
      const IMat& z = integral_cycles(s);
      IMat bd = block(t_.D, L0_.idx, Lm_.idx);
      IMat both(L0_.size(), bd.cols + z.cols);
      for (int r = 0; r < L0_.size(); ++r)
        for (int j = 0; j < bd.cols; ++j) both(r, j) = bd(r, j);
      for (int k = 0; k < s.P0.size(); ++k)
        for (int j = 0; j < z.cols; ++j) both(L0_.pos[s.P0.idx[k]], bd.cols + j) = z(k, j);
      return integer_rank(both) - integer_rank(bd);
    }
    const std::vector<Vec>* cyc = &s.z2;
    std::vector<Vec> zp;
    if (p != 2) {
      zp = mod_kernel(detail::images_mod(t_.D.d, s.P0, s.P1, p), s.P1.size(), p);
      cyc = &zp;
    }
    ModSpace S = local_bounds(p);
    int base = S.dim();
    for (auto& z : *cyc) S.add(transport(z, s.P0, L0_));
    return S.dim() - base;
  }

  // Invariant factors of the lattice i(H^{0,q}(D)).
  std::vector<Int> image_lattice(int q) {
    if (q > top_) return {};
    Slice& s = slice(q);
    return lattice_divisors(local_coords(s.P0, integral_cycles(s)));
  }
  int free_rank() {
    local_homology();
    return int(free_.size());
  }

 private:
  const LEOTriple& t_;
  int n_;
  int parity_ = 1, rank_ = 2;
  bool mod2_only_ = false;
  int top_ = 0, bottom_ = 0;
  int max_two_power_ = 0;
  std::vector<Column> f_;
  Subset L0_, Lm_, L1_;
  std::map<uint32_t, ModSpace> lb_;
  std::map<uint32_t, int> ld_;
  std::unique_ptr<HomologyPresentation> hl_;
  std::vector<int> free_;
  std::map<int, std::unique_ptr<Slice>> slices_;
};

bool unreduced(const LEOTriple& t) { return t.flavor == Flavor::Unreduced; }

SPair s_field_with(Analyzer& an, const LEOTriple& t, uint32_t p) {
  if (an.mod2_only() && p != 2) throw std::invalid_argument("two-reduced triples only have s over F2");
  int full = an.local_dim(p == 0 ? 2 : p);
  if (p == 0) full = an.free_rank();
  int nz = an.scan([&](int q) { return an.image_dim(q, p) > 0; }, "i nonzero");
  int sj = an.scan([&](int q) { return an.image_dim(q, p) == full; }, "i surjective");
  if (!unreduced(t)) return {nz, sj};
  return {nz - 1, sj + 1};
}

SPair s_integral_with(Analyzer& an, const LEOTriple& t) {
  int r = an.free_rank();
  auto primitive = [&](int q) {
    auto d = an.image_lattice(q);
    return !d.empty() && d[0] == 1;
  };
  auto onto = [&](int q) {
    auto d = an.image_lattice(q);
    return int(d.size()) == r && std::all_of(d.begin(), d.end(), [](const Int& x) { return x == 1; });
  };
  int sj = an.scan(onto, "i surjective");
  if (!unreduced(t)) return {sj, sj};
  return {an.scan(primitive, "i primitive") - 1, sj + 1};
}

Refined refined_with(Analyzer& an, const LEOTriple& t, FullnessKind kind) {
  bool bock = kind.kind == Refinement::Bockstein || kind.kind == Refinement::BetaSum;
  Refined r;
  if (!unreduced(t)) {
    int q = an.scan([&](int x) { return an.verdict(x, kind).status == Verdict::Full; }, "reduced fullness");
    r.hat = bock ? q + 2 : q;
    return r;
  }
  int hf = an.scan([&](int x) { return an.verdict(x, kind).status != Verdict::NotHalfFull; }, "half-fullness");
  int fu = an.scan([&](int x) { return an.verdict(x, kind).status == Verdict::Full; }, "fullness");
  r.r = bock ? hf + 1 : hf - 1;
  r.s = bock ? fu + 3 : fu + 1;
  return r;
}

GradedS graded_s_with(Analyzer& an) {
  auto gen = [&](int q) -> Int {
    auto d = an.image_lattice(q);
    return d.empty() ? Int(0) : d[0];
  };
  GradedS g;
  g.sQ = an.scan([&](int q) { return sgn(gen(q)) != 0; }, "i nonzero");
  g.sZ = an.scan([&](int q) { return gen(q) == 1; }, "i surjective");
  g.length = (g.sQ - g.sZ) / 2;
  for (int q = g.sQ - 2; q >= g.sZ; q -= 2) g.c.push_back(Int(gen(q + 2) / gen(q)));
  return g;
}

nlohmann::json refined_json(const Refined& r) {
  nlohmann::json j = nlohmann::json::object();
  if (r.r) j["r"] = *r.r;
  if (r.s) j["s"] = *r.s;
  if (r.hat) j["hat_s"] = *r.hat;
  return j;
}

}  // namespace

LocalizedTarget localized_target(const LEOTriple& t, uint32_t p) {
  Analyzer an(t);
  LocalizedTarget lt;
  lt.q0 = an.q0();
  lt.parity = an.parity();
  lt.p = p;
  if (p == 0) {
    lt.group = an.local_homology().group();
  } else {
    lt.group.rank = an.local_dim(p);
  }
  return lt;
}

FullnessVerdict fullness(const LEOTriple& t, int q, FullnessKind kind) {
  Analyzer an(t);
  return an.verdict(q, kind);
}

SPair s_field(const LEOTriple& t, uint32_t p) {
  Analyzer an(t);
  return s_field_with(an, t, p);
}

SPair s_integral(const LEOTriple& t) {
  Analyzer an(t);
  return s_integral_with(an, t);
}

GradedS graded_s(const LEOTriple& t) {
  if (t.flavor != Flavor::Reduced) throw std::invalid_argument("graded_s needs a reduced triple");
  Analyzer an(t);
  return graded_s_with(an);
}

Refined refined(const LEOTriple& t, FullnessKind kind) {
  Analyzer an(t);
  return refined_with(an, t, kind);
}

InvariantReport refined_invariants(const LEOTriple& t, const InvariantConfig& cfg) {
  Analyzer an(t);
  InvariantReport rep;
  rep.provenance = t.provenance;
  rep.flavor = t.flavor;
  rep.q0 = an.q0();
  rep.beta_cap = cfg.beta_cap;
  bool integral = !an.mod2_only();
  for (uint32_t p : cfg.fields)
    if (integral || p == 2) rep.s_field[p] = s_field_with(an, t, p);
  if (cfg.integral && integral) rep.s_integral = s_integral_with(an, t);
  if (cfg.graded && t.flavor == Flavor::Reduced) rep.graded = graded_s_with(an);
  std::vector<int> orders = cfg.bockstein;
  if (cfg.beta_cap > 0) orders.push_back(cfg.beta_cap);
  for (int n : orders)
    if (!rep.bockstein.count(n)) rep.bockstein[n] = refined_with(an, t, {Refinement::Bockstein, n});
  if (cfg.beta_sum && integral) rep.beta = refined_with(an, t, {Refinement::BetaSum, 1});
  if (cfg.oddly) rep.oddly = refined_with(an, t, {Refinement::Oddly, 1});
  if (cfg.completely && integral) rep.completely = refined_with(an, t, {Refinement::Completely, 1});
  for (int q = an.top(); q >= an.q0(); q -= 2) an.bockstein_image(an.slice(q), 0);
  rep.max_two_power = an.max_two_power();
  return rep;
}

nlohmann::json InvariantReport::to_json() const {
  nlohmann::json j;
  j["provenance"] = provenance;
  j["flavor"] = flavor_name(flavor);
  j["q0"] = q0;
  nlohmann::json sf = nlohmann::json::object();
  for (auto& [p, s] : s_field) {
    std::string key = p == 0 ? "Q" : "F" + std::to_string(p);
    if (flavor == Flavor::Unreduced) sf[key] = {{"plus", s.plus}, {"minus", s.minus}};
    else sf[key] = s.plus;
  }
  j["s_field"] = sf;
  if (s_integral) {
    if (flavor == Flavor::Unreduced) j["s_Z"] = {{"plus", s_integral->plus}, {"minus", s_integral->minus}};
    else j["s_Z"] = s_integral->plus;
  }
  if (graded) {
    std::vector<std::string> c;
    for (auto& x : graded->c) c.push_back(x.get_str());
    j["graded_s"] = {{"s_Q", graded->sQ}, {"s_Z", graded->sZ}, {"length", graded->length}, {"c", c}};
  }
  nlohmann::json b = nlohmann::json::object();
  for (auto& [n, r] : bockstein) b[std::to_string(n)] = refined_json(r);
  j["bockstein"] = b;
  if (beta) j["beta"] = refined_json(*beta);
  if (oddly) j["odd"] = refined_json(*oddly);
  if (completely) j["complete"] = refined_json(*completely);
  j["beta_cap"] = beta_cap;
  j["max_two_power"] = max_two_power;
  j["cap_sufficient"] = max_two_power <= beta_cap;
  return j;
}

bool triviality(const LEOTriple& t, const LEOTriple& t_dual) {
  switch (t.flavor) {
    case Flavor::Unreduced: {
      if (!t.from_knot || !t_dual.from_knot)
        throw std::invalid_argument(
            "triviality: the unreduced criterion needs knot triples; reduce the triple first");
      auto rc = [](const LEOTriple& x) { return *refined(x, {Refinement::Completely, 1}).r; };
      return rc(t) == 0 && rc(t_dual) == 0;
    }
    case Flavor::Reduced: {
      auto sc = [](const LEOTriple& x) { return *refined(x, {Refinement::Completely, 1}).hat; };
      return sc(t) == 0 && sc(t_dual) == 0;
    }
    case Flavor::TwoReduced: {
      auto so = [](const LEOTriple& x) { return *refined(x, {Refinement::Oddly, 1}).hat; };
      return so(t) == 0 && so(t_dual) == 0;
    }
  }
  return false;
}

bool triviality(const LEOTriple& t) { return triviality(t, dual(t)); }

Order order_compare(const LEOTriple& a, const LEOTriple& b) {
  if (a.flavor != Flavor::TwoReduced || b.flavor != Flavor::TwoReduced)
    throw std::invalid_argument("order_compare needs two-reduced triples");
  auto so = [](const LEOTriple& x) { return *refined(x, {Refinement::Oddly, 1}).hat; };
  bool ge = so(tensor(a, dual(b))) >= 0;
  bool le = so(tensor(dual(a), b)) >= 0;
  if (ge && le) return Order::Equal;
  if (ge) return Order::Greater;
  if (le) return Order::Less;
  throw std::logic_error("order_compare: neither a >= b nor b >= a");
}

}  // namespace khleo
