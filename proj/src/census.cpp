#include "khleo/census.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <condition_variable>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "khleo/diagram.hpp"

namespace khleo {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(s);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Leading digits of names such as 9_42 or 12n_242.
std::optional<int> crossings_from_name(const std::string& name) {
  size_t i = 0;
  while (i < name.size() && std::isdigit(static_cast<unsigned char>(name[i]))) ++i;
  if (i == 0 || i > 3) return std::nullopt;
  return std::stoi(name.substr(0, i));
}

InvariantConfig leo_config(const JobSpec& job) {
  const Selection& s = job.invariants;
  InvariantConfig c;
  c.beta_cap = job.beta_cap;
  if (job.checks) {
    c.bockstein = {1, 2, 3};
    return c;
  }
  c.fields = {2};
  if (s.s3) c.fields.push_back(3);
  if (s.sQ) c.fields.push_back(0);
  c.bockstein = {1};
  c.beta_sum = s.beta;
  c.oddly = c.completely = c.graded = false;
  c.integral = s.sZ;
  return c;
}

InvariantConfig reduced_config(const JobSpec& job) {
  InvariantConfig c;
  c.beta_cap = job.beta_cap;
  if (job.checks) {
    c.bockstein = {1, 2, 3};
    return c;
  }
  c.fields = {2};
  c.bockstein = {1};
  c.beta_sum = c.oddly = c.integral = false;
  c.completely = job.invariants.sc;
  c.graded = job.invariants.graded;
  return c;
}

InvariantConfig lee_config(const JobSpec& job) {
  InvariantConfig c;
  c.beta_cap = job.beta_cap;
  c.fields = {2};
  c.integral = c.graded = false;
  c.bockstein = job.checks ? std::vector<int>{1, 2, 3} : std::vector<int>{1};
  c.beta_sum = c.oddly = c.completely = job.checks;
  return c;
}

std::string show(const std::string& what, int got, int want) {
  return what + " = " + std::to_string(got) + ", expected " + std::to_string(want);
}

std::string alpha_name(int n, int cap) {
  return n == cap ? "beta_" + std::to_string(n) + " (cap)" : "beta_" + std::to_string(n);
}

void check_pair(std::vector<std::string>& out, const std::string& what, const Refined& r, int want) {
  if (r.r && *r.r != want) out.push_back(show(what + " r", *r.r, want));
  if (r.s && *r.s != want) out.push_back(show(what + " s", *r.s, want));
  if (r.hat && *r.hat != want) out.push_back(show(what + " hat s", *r.hat, want));
}

void constant_report(std::vector<std::string>& out, const std::string& side, const InvariantReport& rep, int e) {
  for (auto& [p, s] : rep.s_field) {
    std::string name = side + " s over " + (p == 0 ? std::string("Q") : "F" + std::to_string(p));
    if (s.plus != e) out.push_back(show(name + " (+)", s.plus, e));
    if (s.minus != e) out.push_back(show(name + " (-)", s.minus, e));
  }
  if (rep.s_integral) {
    if (rep.s_integral->plus != e) out.push_back(show(side + " integral s (+)", rep.s_integral->plus, e));
    if (rep.s_integral->minus != e) out.push_back(show(side + " integral s (-)", rep.s_integral->minus, e));
  }
  if (rep.graded) {
    if (rep.graded->sQ != e) out.push_back(show(side + " graded s_Q", rep.graded->sQ, e));
    if (rep.graded->sZ != e) out.push_back(show(side + " graded s_Z", rep.graded->sZ, e));
  }
  for (auto& [n, r] : rep.bockstein) check_pair(out, side + " " + alpha_name(n, rep.beta_cap), r, e);
  if (rep.beta) check_pair(out, side + " beta", *rep.beta, e);
  if (rep.oddly) check_pair(out, side + " odd", *rep.oddly, e);
  if (rep.completely) check_pair(out, side + " complete", *rep.completely, e);
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::json side_json(const SideReports& s) {
  nlohmann::json j = nlohmann::json::object();
  if (s.leo) j["leo"] = s.leo->to_json();
  if (s.reduced) j["reduced"] = s.reduced->to_json();
  if (s.lee) j["lee"] = s.lee->to_json();
  return j;
}

}  // namespace

std::vector<KnotRecord> read_knot_table(std::istream& in) {
  std::vector<KnotRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    auto f = split(line, '\t');
    auto fail = [&](const std::string& msg) { throw ParseError("line " + std::to_string(lineno) + ": " + msg); };
    if (f.size() < 2) fail("expected name<TAB>pd");
    KnotRecord k;
    k.name = trim(f[0]);
    k.pd = trim(f[1]);
    if (k.name.empty()) fail("empty knot name");
    if (f.size() > 2 && !trim(f[2]).empty()) {
      try {
        size_t used = 0;
        k.signature = std::stoi(trim(f[2]), &used);
        if (used != trim(f[2]).size()) fail("bad signature '" + f[2] + "'");
      } catch (const std::logic_error&) {
        fail("bad signature '" + f[2] + "'");
      }
    }
    if (f.size() > 3 && !trim(f[3]).empty()) {
      std::string a = trim(f[3]);
      if (a == "Y" || a == "y") k.alternating = true;
      else if (a == "N" || a == "n") k.alternating = false;
      else fail("alternating flag must be Y or N");
    }
    if (auto c = crossings_from_name(k.name)) k.crossings = *c;
    else k.crossings = -1;  // filled from the diagram when it parses
    out.push_back(k);
  }
  return out;
}

std::vector<KnotRecord> read_knot_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_knot_table(in);
}

bool Selection::any() const { return s2 || s3 || sQ || sZ || graded || sq1e || sq1o || beta || betaN || sc; }

Selection all_invariants() {
  Selection s;
  s.s2 = s.s3 = s.sQ = s.sZ = s.graded = s.sq1e = s.sq1o = s.beta = s.betaN = s.sc = true;
  return s;
}

Selection parse_selection(const std::string& list) {
  Selection s;
  for (auto& raw : split(list, ',')) {
    std::string n = trim(raw);
    if (n == "all") s = all_invariants();
    else if (n == "s2") s.s2 = true;
    else if (n == "s3") s.s3 = true;
    else if (n == "sQ") s.sQ = true;
    else if (n == "sZ") s.sZ = true;
    else if (n == "gradedS") s.graded = true;
    else if (n == "sq1e") s.sq1e = true;
    else if (n == "sq1o") s.sq1o = true;
    else if (n == "beta") s.beta = true;
    else if (n == "betaN") s.betaN = true;
    else if (n == "sc") s.sc = true;
    else throw std::invalid_argument("unknown invariant '" + n + "'");
  }
  if (!s.any()) throw std::invalid_argument("no invariant selected");
  return s;
}

std::vector<std::string> relation_violations(const SideReports& s, std::vector<std::string>* notes) {
  std::vector<std::string> out;
  if (!s.leo) return out;
  const InvariantReport& L = *s.leo;
  const int s2 = L.s_field.at(2).plus;
  for (auto& [p, sp] : L.s_field)
    if (sp.plus != sp.minus)
      out.push_back("s+ != s- over " + (p == 0 ? std::string("Q") : "F" + std::to_string(p)));
  std::optional<int> sZ;
  if (L.s_integral) {
    sZ = L.s_integral->plus;
    if (L.s_integral->minus != *sZ) out.push_back("integral s+ != s-");
    for (auto& [p, sp] : L.s_field)
      if (*sZ > sp.plus) out.push_back("integral s exceeds a field s");
  }
  const InvariantReport* R = s.reduced ? &*s.reduced : nullptr;
  if (R) {
    if (R->s_field.count(2) && R->s_field.at(2).plus != s2) out.push_back(show("reduced s over F2", R->s_field.at(2).plus, s2));
    if (R->s_integral && sZ && R->s_integral->plus != *sZ) out.push_back(show("reduced integral s", R->s_integral->plus, *sZ));
    if (R->graded) {
      if (R->s_field.count(0) && R->graded->sQ != R->s_field.at(0).plus) out.push_back("graded s_Q disagrees with s over Q");
      if (R->s_integral && R->graded->sZ != R->s_integral->plus) out.push_back("graded s_Z disagrees with integral s");
    }
  }

  // Bockstein and beta refinements: r = hat s = s in {s2, s2 + 2}, monotone in n.
  auto bock = [&](const std::string& what, const Refined& u, const Refined* red) {
    if (*u.r != *u.s) out.push_back(what + ": r != s");
    if (*u.r != s2 && *u.r != s2 + 2) out.push_back(what + ": r outside {s, s+2}");
    if (red && red->hat && *red->hat != *u.s) out.push_back(what + ": hat s != s");
  };
  std::optional<int> prev;
  bool plus_two = false;
  for (auto& [n, u] : L.bockstein) {
    const Refined* red = R && R->bockstein.count(n) ? &R->bockstein.at(n) : nullptr;
    bock(alpha_name(n, L.beta_cap), u, red);
    if (prev && *u.s < *prev) out.push_back("Bockstein invariants not monotone in n");
    prev = *u.s;
    plus_two |= *u.s == s2 + 2 || (red && red->hat && *red->hat == s2 + 2);
  }
  if (L.beta) bock("beta", *L.beta, R && R->beta ? &*R->beta : nullptr);

  // Comprehensive refinements.
  auto comp = [&](const std::string& what, const Refined& u, const Refined* red, int top) {
    if (*u.r != *u.s) out.push_back(what + ": r != s");
    if (red && red->hat && *red->hat != *u.r) out.push_back(what + ": hat s != r");
    if (*u.r < top - 2 || *u.r > top) out.push_back(what + ": outside [top - 2, top]");
  };
  if (L.oddly) comp("odd", *L.oddly, R && R->oddly ? &*R->oddly : nullptr, s2);
  if (L.completely && sZ) comp("complete", *L.completely, R && R->completely ? &*R->completely : nullptr, *sZ);
  if (R && R->oddly && R->completely && *R->completely->hat > *R->oddly->hat) out.push_back("hat s_c > hat s_o");
  if (plus_two && R && R->oddly && *R->oddly->hat != s2) out.push_back("a Bockstein invariant is s+2 but hat s_o != s");

  if (s.lee) {
    const InvariantReport& E = *s.lee;
    if (E.s_field.count(2) && E.s_field.at(2).plus != s2) out.push_back(show("LEE s over F2", E.s_field.at(2).plus, s2));
    std::optional<int> eprev;
    auto lee_bock = [&](const std::string& what, const Refined& u) {
      for (int v : {*u.r, *u.s})
        if (v != s2 && v != s2 + 2) out.push_back("LEE " + what + " outside {s, s+2}");
      if (*u.r > *u.s) out.push_back("LEE " + what + ": r > s");
      if (*u.r != *u.s && notes) notes->push_back("LEE " + what + ": r = " + std::to_string(*u.r) + ", s = " + std::to_string(*u.s));
    };
    for (auto& [n, u] : E.bockstein) {
      lee_bock(alpha_name(n, E.beta_cap), u);
      if (eprev && *u.s < *eprev) out.push_back("LEE Bockstein invariants not monotone in n");
      eprev = *u.s;
    }
    if (E.beta) lee_bock("beta", *E.beta);
  }
  return out;
}

std::vector<std::string> constant_violations(const SideReports& s, int expected) {
  std::vector<std::string> out;
  if (s.leo) constant_report(out, "LEO", *s.leo, expected);
  if (s.reduced) constant_report(out, "reduced", *s.reduced, expected);
  if (s.lee) constant_report(out, "LEE", *s.lee, expected);
  return out;
}

KnotRow analyze_knot(const KnotRecord& k, const JobSpec& job) {
  KnotRow row;
  row.knot = k;
  try {
    PlanarDiagram d = parse_pd(k.pd);
    if (row.knot.crossings < 0) row.knot.crossings = d.size();
    const Selection& s = job.invariants;
    bool need_leo = job.checks || s.s2 || s.s3 || s.sQ || s.sZ || s.sq1o || s.beta || s.betaN;
    bool need_reduced = job.checks || s.graded || s.sc;
    KnotTriples t = knot_triples(d, k.name, need_leo, s.sq1e, need_reduced);
    auto fill = [&](SideReports& side, bool mirrored) {
      auto pick = [&](const LEOTriple& x) { return mirrored ? dual(x) : x; };
      if (t.leo) side.leo = refined_invariants(pick(*t.leo), leo_config(job));
      if (t.reduced) side.reduced = refined_invariants(pick(*t.reduced), reduced_config(job));
      if (t.lee) side.lee = refined_invariants(pick(*t.lee), lee_config(job));
    };
    fill(row.self, false);
    if (job.mirror) fill(row.mirror, true);

    auto tuple4 = [&](const std::optional<InvariantReport>& a, const std::optional<InvariantReport>& b,
                      auto get) {
      std::vector<int> v;
      Refined x = get(*a);
      v = {*x.r, *x.s};
      if (b) {
        Refined y = get(*b);
        v.push_back(-*y.r);
        v.push_back(-*y.s);
      }
      return v;
    };
    const SideReports& K = row.self;
    const SideReports& M = row.mirror;
    if (s.sq1e) tuple4(K.lee, M.lee, [](const InvariantReport& r) { return r.bockstein.at(1); }).swap(row.tuples["sq1e"]);
    if (s.sq1o) tuple4(K.leo, M.leo, [](const InvariantReport& r) { return r.bockstein.at(1); }).swap(row.tuples["sq1o"]);
    if (s.beta) tuple4(K.leo, M.leo, [](const InvariantReport& r) { return *r.beta; }).swap(row.tuples["beta"]);
    if (s.betaN) {
      auto& v = row.tuples["betaN"];
      v = {*K.leo->bockstein.at(job.beta_cap).r};
      if (M.leo) v.push_back(-*M.leo->bockstein.at(job.beta_cap).r);
    }
    if (s.sc) {
      auto& v = row.tuples["sc"];
      v = {*K.reduced->completely->hat};
      if (M.reduced) v.push_back(-*M.reduced->completely->hat);
    }

    if (job.checks) {
      for (auto& m : relation_violations(K, &row.notes)) row.failures.push_back(m);
      if (job.mirror) {
        for (auto& m : relation_violations(M, &row.notes)) row.failures.push_back("mirror: " + m);
        for (auto& [p, sp] : K.leo->s_field)
          if (M.leo->s_field.at(p).plus != -sp.plus) row.failures.push_back("mirror s is not -s");
        if (K.leo->s_integral && M.leo->s_integral->plus != -K.leo->s_integral->plus)
          row.failures.push_back("mirror integral s is not -s");
      }
      if (k.alternating.value_or(false) && k.signature) {
        for (auto& m : constant_violations(K, *k.signature)) row.failures.push_back("alternating: " + m);
        if (job.mirror)
          for (auto& m : constant_violations(M, -*k.signature)) row.failures.push_back("alternating mirror: " + m);
      }
    }
  } catch (const std::exception& e) {
    row.failures.push_back(std::string("error: ") + e.what());
  }
  return row;
}

void run(const std::vector<KnotRecord>& knots, const JobSpec& job, const std::function<void(const KnotRow&)>& sink) {
  int workers = job.jobs > 0 ? job.jobs : int(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::max(1, std::min<int>(workers, int(knots.size())));
  if (workers <= 1) {
    for (auto& k : knots) sink(analyze_knot(k, job));
    return;
  }
  std::vector<std::optional<KnotRow>> done(knots.size());
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (size_t i; (i = next++) < knots.size();) {
        KnotRow r = analyze_knot(knots[i], job);
        std::lock_guard lock(mu);
        done[i] = std::move(r);
        cv.notify_one();
      }
    });
  for (size_t i = 0; i < knots.size(); ++i) {
    std::unique_lock lock(mu);
    cv.wait(lock, [&] { return done[i].has_value(); });
    KnotRow r = std::move(*done[i]);
    done[i].reset();
    lock.unlock();
    sink(r);
  }
  for (auto& t : pool) t.join();
}

std::vector<KnotRow> run(const std::vector<KnotRecord>& knots, const JobSpec& job) {
  std::vector<KnotRow> rows;
  run(knots, job, [&](const KnotRow& r) { rows.push_back(r); });
  return rows;
}

bool non_constant(const std::vector<int>& t) {
  return std::adjacent_find(t.begin(), t.end(), std::not_equal_to<>()) != t.end();
}

void add_to_summary(CensusSummary& s, const KnotRow& row) {
  auto& line = s.by_crossings[row.knot.crossings];
  ++line.knots;
  if (!row.ok()) ++line.failures;
  for (size_t i = 0; i < kTupleNames.size(); ++i) {
    auto it = row.tuples.find(kTupleNames[i]);
    if (it != row.tuples.end() && non_constant(it->second)) ++line.non_constant[i];
  }
}

CensusSummary census_summary(const std::vector<KnotRow>& rows) {
  CensusSummary s;
  for (auto& r : rows) add_to_summary(s, r);
  return s;
}

std::string csv_header(const JobSpec& job) {
  std::string h = "# khleo census csv v" + std::to_string(kCsvVersion) + "; beta_cap=" + std::to_string(job.beta_cap) +
                  "; tuples list K then mirror entries, mirror entries negated\n";
  h += "name,crossings,signature,alternating,s2,s3,sQ,sZ,graded_length,graded_c,sq1e,sq1o,beta,betaN,sc,"
       "s2_mirror,s3_mirror,sQ_mirror,sZ_mirror,status,detail\n";
  return h;
}

std::string csv_row(const KnotRow& row, const JobSpec& job) {
  const Selection& sel = job.invariants;
  std::vector<std::string> c;
  c.push_back(row.knot.name);
  c.push_back(std::to_string(row.knot.crossings));
  c.push_back(row.knot.signature ? std::to_string(*row.knot.signature) : "");
  c.push_back(row.knot.alternating ? (*row.knot.alternating ? "Y" : "N") : "");
  auto field = [&](const SideReports& s, uint32_t p, bool on) -> std::string {
    if (!on || !s.leo || !s.leo->s_field.count(p)) return "";
    return std::to_string(s.leo->s_field.at(p).plus);
  };
  auto integral = [&](const SideReports& s) -> std::string {
    if (!sel.sZ || !s.leo || !s.leo->s_integral) return "";
    return std::to_string(s.leo->s_integral->plus);
  };
  c.push_back(field(row.self, 2, sel.s2));
  c.push_back(field(row.self, 3, sel.s3));
  c.push_back(field(row.self, 0, sel.sQ));
  c.push_back(integral(row.self));
  if (sel.graded && row.self.reduced && row.self.reduced->graded) {
    const GradedS& g = *row.self.reduced->graded;
    c.push_back(std::to_string(g.length));
    std::string cs;
    for (size_t i = 0; i < g.c.size(); ++i) cs += (i ? " " : "") + g.c[i].get_str();
    c.push_back(cs);
  } else {
    c.push_back("");
    c.push_back("");
  }
  for (const char* name : kTupleNames) {
    auto it = row.tuples.find(name);
    c.push_back(it == row.tuples.end() ? "" : join_ints(it->second));
  }
  c.push_back(field(row.mirror, 2, sel.s2));
  c.push_back(field(row.mirror, 3, sel.s3));
  c.push_back(field(row.mirror, 0, sel.sQ));
  c.push_back(integral(row.mirror));
  c.push_back(row.ok() ? "ok" : "fail");
  std::string detail;
  for (auto& f : row.failures) detail += (detail.empty() ? "" : "; ") + f;
  for (auto& n : row.notes) detail += (detail.empty() ? "note: " : "; note: ") + n;
  c.push_back(detail);
  std::string line;
  for (size_t i = 0; i < c.size(); ++i) line += (i ? "," : "") + csv_quote(c[i]);
  return line + "\n";
}

nlohmann::json row_json(const KnotRow& row) {
  nlohmann::json j;
  j["name"] = row.knot.name;
  j["crossings"] = row.knot.crossings;
  j["signature"] = row.knot.signature ? nlohmann::json(*row.knot.signature) : nlohmann::json(nullptr);
  j["alternating"] = row.knot.alternating ? nlohmann::json(*row.knot.alternating) : nlohmann::json(nullptr);
  j["status"] = row.ok() ? "ok" : "fail";
  j["failures"] = row.failures;
  j["notes"] = row.notes;
  nlohmann::json t = nlohmann::json::object();
  for (auto& [k, v] : row.tuples) t[k] = v;
  j["tuples"] = t;
  j["knot"] = side_json(row.self);
  j["mirror"] = side_json(row.mirror);
  return j;
}

std::string summary_text(const CensusSummary& s, const JobSpec& job) {
  std::ostringstream o;
  o << "# khleo census summary v" << kCsvVersion << "; counts of knots whose tuple is non-constant\n";
  o << "crossings,knots,failures,sq1e,sq1o,beta,beta" << job.beta_cap << ",sc\n";
  for (auto& [n, line] : s.by_crossings) {
    o << n << "," << line.knots << "," << line.failures;
    for (int x : line.non_constant) o << "," << x;
    o << "\n";
  }
  return o.str();
}

nlohmann::json summary_json(const CensusSummary& s, const JobSpec& job) {
  nlohmann::json j;
  j["beta_cap"] = job.beta_cap;
  nlohmann::json rows = nlohmann::json::array();
  for (auto& [n, line] : s.by_crossings) {
    nlohmann::json r;
    r["crossings"] = n;
    r["knots"] = line.knots;
    r["failures"] = line.failures;
    for (size_t i = 0; i < kTupleNames.size(); ++i) r[kTupleNames[i]] = line.non_constant[i];
    rows.push_back(r);
  }
  j["rows"] = rows;
  return j;
}

}  // namespace khleo
