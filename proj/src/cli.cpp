#include "qgroth/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <ostream>
#include <regex>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qgroth/errors.hpp"
#include "qgroth/fixtures.hpp"
#include "qgroth/kgroup.hpp"
#include "qgroth/resolve.hpp"
#include "qgroth/sl2cat.hpp"
#include "qgroth/workspace.hpp"

namespace qgroth::cli {

namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string command;
  int precision = kDefaultPrecision;
  int depth_cap = kDefaultDepthCap;
  std::optional<int> weight_floor;
  std::string format = "text";
  std::string convention = "balanced";
  std::vector<std::string> workspaces;
  std::string algebra;
  std::string module;
  std::string complex;
  std::optional<int> n;
  std::vector<std::string> kill;
  std::optional<int> m;
  int alpha = 0;
  std::string simple;
  std::string basis = "simple";
  std::optional<int> depth;
  bool differentials = false;
  bool realization = false;
  std::vector<int> numbers;
};

// Rendering -----------------------------------------------------------------

json integer_json(const Integer& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

json series_json(const LaurentSeries& s) {
  json coeffs = json::array();
  for (const auto& c : s.coeffs()) coeffs.push_back(integer_json(c));
  json out;
  out["text"] = s.to_string();
  out["valuation"] = s.valuation();
  out["coefficients"] = std::move(coeffs);
  out["precision"] = s.precision() ? json(*s.precision()) : json(nullptr);
  return out;
}

json precision_json(Precision p) { return p ? json(*p) : json(nullptr); }

json class_json(const KClass& x) {
  json coords = json::array();
  for (std::size_t i = 0; i < x.rank(); ++i) {
    const SimpleIndex s{i};
    coords.push_back({{"simple", x.algebra()->simple_label(s)},
                      {"name", generator_name(*x.algebra(), x.mode(), s)},
                      {"series", series_json(x.coord(s))}});
  }
  json out;
  out["basis"] = to_string(x.mode());
  out["precision"] = precision_json(x.precision());
  out["coords"] = std::move(coords);
  return out;
}

json matrix_json(const SeriesMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c).to_string());
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string matrix_text(const SeriesMatrix& m, const std::string& indent = "  ") {
  std::ostringstream out;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out << indent << '[';
    for (std::size_t c = 0; c < m.cols(); ++c) out << (c ? ", " : "") << m(r, c).to_string();
    out << "]\n";
  }
  return out.str();
}

std::string compact_matrix(const SeriesMatrix& m) {
  std::ostringstream out;
  out << '[';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out << (r ? ", " : "") << '[';
    for (std::size_t c = 0; c < m.cols(); ++c) out << (c ? ", " : "") << m(r, c).to_string();
    out << ']';
  }
  out << ']';
  return out.str();
}

std::vector<std::string> simple_labels(const GradedAlgebra& a) {
  std::vector<std::string> out;
  for (std::size_t s = 0; s < a.num_simples(); ++s) out.push_back(a.simple_label(SimpleIndex{s}));
  return out;
}

std::string sum_text(const GradedAlgebra& a, BasisMode mode, const FormalSum& term) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [key, mult] : term) {
    if (mult == 0) continue;
    if (!first) out << " + ";
    first = false;
    if (mult != 1) out << mult << ' ';
    out << generator_name(a, mode, key.simple) << '<' << key.shift << '>';
  }
  if (first) out << '0';
  return out.str();
}

json sum_json(const GradedAlgebra& a, const FormalSum& term) {
  json out = json::array();
  for (const auto& [key, mult] : term) {
    if (mult == 0) continue;
    out.push_back({{"simple", a.simple_label(key.simple)}, {"shift", key.shift}, {"multiplicity", mult}});
  }
  return out;
}

// "(s1) [P_1] + (s2) [P_2]", skipping coordinates that vanish in the window.
std::string expression_text(const KClass& x) {
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = 0; i < x.rank(); ++i) {
    const LaurentSeries& c = x.coords()[i];
    if (c.is_zero()) continue;
    if (!first) out << " + ";
    first = false;
    out << '(' << c.to_string() << ") [" << generator_name(*x.algebra(), x.mode(), SimpleIndex{i}) << ']';
  }
  if (first) out << (x.precision() ? "O(q^" + std::to_string(*x.precision()) + ")" : "0");
  return out.str();
}

// Context ---------------------------------------------------------------------

class Context {
public:
  explicit Context(const Options& o) : opt(o), lib_(load(o.workspaces)) {}

  const Options& opt;

  const Library& library() const { return lib_; }

  AlgebraPtr algebra() const {
    if (!opt.algebra.empty()) return lib_.algebra(opt.algebra);
    if (!opt.module.empty()) return module()->algebra();
    if (lib_.workspace().algebras.size() == 1) return lib_.algebra(lib_.workspace().algebras.front().name);
    throw UsageError("--algebra is required");
  }

  ModulePtr module() const {
    if (opt.module.empty()) throw UsageError("--module is required");
    for (const auto& d : lib_.workspace().modules) {
      if (d.name == opt.module) return lib_.module(opt.module);
    }
    // L, P, L_<label>, P_<label>, optionally followed by <shift>
    static const std::regex pattern(R"(^([LP])(?:_([^<]+))?(?:<(-?\d+)>)?$)");
    std::smatch m;
    if (!std::regex_match(opt.module, m, pattern)) throw DanglingReference("unknown module \"" + opt.module + "\"");
    if (opt.algebra.empty()) throw UsageError("--algebra is required for module \"" + opt.module + "\"");
    const AlgebraPtr a = lib_.algebra(opt.algebra);
    SimpleIndex s{0};
    if (m[2].matched) {
      auto idx = a->simple_of_label(m[2].str());
      if (!idx) throw DanglingReference("algebra \"" + a->name() + "\" has no simple \"" + m[2].str() + "\"");
      s = *idx;
    } else if (a->num_simples() != 1) {
      throw UsageError("algebra \"" + a->name() + "\" has several simples; write " + m[1].str() + "_<label>");
    }
    const int shift = m[3].matched ? std::stoi(m[3].str()) : 0;
    return make_module(m[1] == "L" ? simple_module(a, s, shift) : projective_module(a, s, shift));
  }

  SimpleIndex simple(const AlgebraPtr& a, const std::string& label) const {
    auto idx = a->simple_of_label(label);
    if (!idx) throw DanglingReference("algebra \"" + a->name() + "\" has no simple \"" + label + "\"");
    return *idx;
  }

  int floor() const { return opt.weight_floor ? *opt.weight_floor : 1 - opt.precision; }

private:
  static Workspace load(const std::vector<std::string>& paths) {
    Workspace ws;
    for (const auto& p : paths) {
      Workspace part = parse_workspace(p);
      ws.algebras.insert(ws.algebras.end(), part.algebras.begin(), part.algebras.end());
      ws.modules.insert(ws.modules.end(), part.modules.begin(), part.modules.end());
      ws.complexes.insert(ws.complexes.end(), part.complexes.begin(), part.complexes.end());
    }
    return ws;
  }

  Library lib_;
};

struct Result {
  json doc;
  std::string text;
  int status = kExitOk;
};

// Commands --------------------------------------------------------------------

Result cmd_validate(const Context& ctx) {
  Result r;
  json algebras = json::array();
  json modules = json::array();
  json complexes = json::array();
  std::ostringstream text;
  bool ok = true;

  auto record = [&](json& list, const std::string& what, const std::string& name, const std::vector<json>& issues) {
    list.push_back({{"name", name}, {"ok", issues.empty()}, {"violations", issues}});
    text << what << ' ' << name << ": " << (issues.empty() ? "ok" : "INVALID") << '\n';
    for (const auto& v : issues) {
      text << "  - " << v["kind"].get<std::string>() << ": " << v["message"].get<std::string>() << '\n';
    }
    ok = ok && issues.empty();
  };

  const Workspace& ws = ctx.library().workspace();
  std::vector<AlgebraDescription> descs = ws.algebras;
  if (!ctx.opt.algebra.empty() && std::none_of(descs.begin(), descs.end(), [&](const auto& d) {
        return d.name == ctx.opt.algebra;
      })) {
    descs.push_back(describe(*ctx.library().algebra(ctx.opt.algebra)));
  }
  if (descs.empty() && ws.modules.empty() && ws.complexes.empty()) {
    throw UsageError("validate needs --workspace or --algebra");
  }
  for (const auto& d : descs) {
    std::vector<json> issues;
    try {
      const ValidationReport rep = validate_algebra(table_from_description(d));
      for (const auto& v : rep.violations) issues.push_back({{"kind", v.kind}, {"message", v.message}});
    } catch (const ParseError& e) {
      issues.push_back({{"kind", "reference"}, {"message", e.what()}});
    }
    record(algebras, "algebra", d.name, issues);
  }
  for (const auto& d : ws.modules) {
    std::vector<json> issues;
    try {
      ctx.library().module(d.name);
    } catch (const Error& e) {
      issues.push_back({{"kind", e.kind()}, {"message", e.what()}});
    }
    record(modules, "module", d.name, issues);
  }
  for (const auto& d : ws.complexes) {
    std::vector<json> issues;
    try {
      ctx.library().complex(d.name);
    } catch (const Error& e) {
      issues.push_back({{"kind", e.kind()}, {"message", e.what()}});
    }
    record(complexes, "complex", d.name, issues);
  }
  r.doc["ok"] = ok;
  r.doc["algebras"] = std::move(algebras);
  r.doc["modules"] = std::move(modules);
  r.doc["complexes"] = std::move(complexes);
  r.text = text.str();
  r.status = ok ? kExitOk : kExitDomainError;
  return r;
}

Result cmd_cartan(const Context& ctx) {
  const AlgebraPtr a = ctx.algebra();
  const SeriesMatrix c = cartan_matrix(a);
  Result r;
  r.doc["algebra"] = a->name();
  r.doc["simples"] = simple_labels(*a);
  r.doc["matrix"] = matrix_json(c);
  std::ostringstream text;
  text << "Cartan matrix of " << a->name() << " (column s = [P_s] in the simple basis)\n" << matrix_text(c);
  r.text = text.str();
  return r;
}

BasisMode parse_basis(const std::string& s) {
  if (s == "simple") return BasisMode::Simple;
  if (s == "projective") return BasisMode::Projective;
  throw UsageError("--basis must be simple or projective");
}

Result cmd_class(const Context& ctx) {
  const ModulePtr m = ctx.module();
  KClass x = class_of_module(*m);
  const BasisMode mode = parse_basis(ctx.opt.basis);
  if (mode != BasisMode::Simple) x = change_basis(x, mode, ctx.opt.precision);
  Result r;
  r.doc["module"] = ctx.opt.module;
  r.doc["class"] = class_json(x);
  r.text = x.to_string() + "\n";
  return r;
}

json resolution_json(const ProjComplex& res, bool with_differentials) {
  const GradedAlgebra& a = *res.algebra;
  json terms = json::array();
  for (auto it = res.terms.rbegin(); it != res.terms.rend(); ++it) {
    json t;
    t["index"] = it->first;
    t["summands"] = sum_json(a, it->second);
    t["certificate"] = res.weight_certificate.count(it->first) ? json(res.weight_certificate.at(it->first)) : json(nullptr);
    if (with_differentials && res.differentials.count(it->first)) {
      const ModuleMap& d = res.differentials.at(it->first);
      json blocks = json::array();
      for (const auto& [deg, mat] : d.blocks) {
        json rows = json::array();
        for (std::size_t i = 0; i < mat.rows(); ++i) {
          json row = json::array();
          for (std::size_t j = 0; j < mat.cols(); ++j) row.push_back(format_rational(mat(i, j)));
          rows.push_back(std::move(row));
        }
        blocks.push_back({{"degree", deg}, {"matrix", std::move(rows)}});
      }
      t["differential"] = std::move(blocks);
    }
    terms.push_back(std::move(t));
  }
  json out;
  out["terms"] = std::move(terms);
  out["stop"] = to_string(res.stop);
  out["weight_floor"] = res.truncation_floor;
  out["tail_degree"] = res.tail_degree ? json(*res.tail_degree) : json(nullptr);
  out["class_precision"] = precision_json(res.kclass_precision());
  return out;
}

std::string resolution_text(const ProjComplex& res, bool with_differentials) {
  std::ostringstream out;
  for (auto it = res.terms.rbegin(); it != res.terms.rend(); ++it) {
    out << "P^" << it->first << ": " << sum_text(*res.algebra, BasisMode::Projective, it->second);
    if (res.weight_certificate.count(it->first)) out << "  (degree " << res.weight_certificate.at(it->first) << ')';
    out << '\n';
    if (with_differentials && res.differentials.count(it->first)) {
      for (const auto& [deg, mat] : res.differentials.at(it->first).blocks) {
        out << "  d^" << it->first << " in degree " << deg << ":\n";
        std::istringstream rows(mat.to_string());
        for (std::string line; std::getline(rows, line);) out << "    " << line << '\n';
      }
    }
  }
  out << "stop: " << to_string(res.stop);
  if (res.tail_degree) out << " (remaining terms have degree <= " << *res.tail_degree << ')';
  out << '\n';
  return out.str();
}

Result cmd_resolve(const Context& ctx) {
  const ModulePtr m = ctx.module();
  const ProjComplex res = minimal_resolution(m, ctx.floor(), ctx.opt.depth_cap);
  Result r;
  r.doc["module"] = ctx.opt.module;
  r.doc["resolution"] = resolution_json(res, ctx.opt.differentials);
  r.text = resolution_text(res, ctx.opt.differentials);
  return r;
}

Result cmd_ext(const Context& ctx) {
  const ModulePtr m = ctx.module();
  const AlgebraPtr& a = m->algebra();
  std::vector<SimpleIndex> targets;
  if (!ctx.opt.simple.empty()) {
    targets.push_back(ctx.simple(a, ctx.opt.simple));
  } else {
    for (std::size_t s = 0; s < a->num_simples(); ++s) targets.push_back(SimpleIndex{s});
  }
  Result r;
  json entries = json::array();
  std::ostringstream text;
  for (auto s : targets) {
    const ExtTable table = ext_dimensions(m, s, ctx.floor(), ctx.opt.depth_cap);
    for (const auto& [key, dim] : table) {
      entries.push_back({{"k", key.first}, {"simple", a->simple_label(s)}, {"shift", key.second}, {"dim", dim}});
      text << "Ext^" << key.first << "(M, " << generator_name(*a, BasisMode::Simple, s) << '<' << key.second
           << ">) = " << dim << '\n';
    }
  }
  r.doc["module"] = ctx.opt.module;
  r.doc["weight_floor"] = ctx.floor();
  r.doc["entries"] = std::move(entries);
  r.text = text.str();
  return r;
}

const char* verdict(Comparison c) {
  return (c == Comparison::Equal || c == Comparison::EqualSoFar) ? "yes" : "no";
}

Result cmd_euler(const Context& ctx) {
  const int n = ctx.opt.precision;
  Result r;
  std::ostringstream text;
  if (!ctx.opt.complex.empty()) {
    const ModuleComplex c = ctx.library().complex(ctx.opt.complex);
    const auto coh = c.cohomologies();
    const KClass direct = euler_characteristic(c.algebra, coh);
    KClass via = direct;
    if (!coh.empty()) {
      const ProjComplex res = assemble_complex_resolution(coh, ctx.floor(), ctx.opt.depth_cap);
      via = change_basis(euler_characteristic(res, n), BasisMode::Simple, n);
    }
    const Comparison cmp = compare(direct, via);
    r.doc["complex"] = ctx.opt.complex;
    r.doc["cohomology_sum"] = class_json(direct);
    r.doc["resolution_sum"] = class_json(via);
    r.doc["agree"] = std::string(verdict(cmp)) == "yes";
    text << "sum of cohomology:\n" << direct.to_string() << "\nvia projective resolutions:\n" << via.to_string()
         << "\nagree: " << verdict(cmp) << '\n';
  } else {
    const ModulePtr m = ctx.module();
    const ProjComplex res = minimal_resolution(m, ctx.floor(), ctx.opt.depth_cap);
    const KClass proj = euler_characteristic(res, n);
    const KClass simple = change_basis(proj, BasisMode::Simple, n);
    const KClass expected = class_of_module(*m);
    const Comparison cmp = compare(simple, expected);
    r.doc["module"] = ctx.opt.module;
    r.doc["projective"] = class_json(proj);
    r.doc["simple"] = class_json(simple);
    r.doc["agree"] = std::string(verdict(cmp)) == "yes";
    text << proj.to_string() << '\n' << simple.to_string() << "\nagrees with the class of the module: " << verdict(cmp)
         << '\n';
  }
  r.text = text.str();
  return r;
}

Result cmd_invert(const Context& ctx) {
  const AlgebraPtr a = ctx.algebra();
  Result r;
  json classes = json::array();
  std::ostringstream text;
  for (std::size_t s = 0; s < a->num_simples(); ++s) {
    const KClass x = KClass::generator(a, BasisMode::Simple, SimpleIndex{s});
    const KClass y = change_basis(x, BasisMode::Projective, ctx.opt.precision);
    classes.push_back({{"simple", a->simple_label(SimpleIndex{s})}, {"class", class_json(y)}});
    text << '[' << generator_name(*a, BasisMode::Simple, SimpleIndex{s}) << "] = " << expression_text(y) << '\n';
  }
  r.doc["algebra"] = a->name();
  r.doc["precision"] = ctx.opt.precision;
  r.doc["classes"] = std::move(classes);
  r.text = text.str();
  return r;
}

Result cmd_beta(const Context& ctx) {
  if (!ctx.opt.m) throw UsageError("beta needs --m");
  const ModulePtr m = ctx.module();
  const KClass x = class_of_module(*m);
  const BetaSplit split = beta_map(x, *ctx.opt.m);
  Result r;
  r.doc["module"] = ctx.opt.module;
  r.doc["m"] = *ctx.opt.m;
  r.doc["at_least"] = class_json(split.at_least);
  r.doc["below"] = class_json(split.below);
  std::ostringstream text;
  text << "weights >= " << *ctx.opt.m << ":\n"
       << split.at_least.to_string() << "\nweights <= " << *ctx.opt.m - 1 << ":\n"
       << split.below.to_string() << '\n';
  r.text = text.str();
  return r;
}

Result cmd_realize(const Context& ctx) {
  const ModulePtr m = ctx.module();
  KClass target = class_of_module(*m);
  const BasisMode mode = parse_basis(ctx.opt.basis);
  // the inverse of a projective class is a genuine infinite target
  if (mode == BasisMode::Projective) {
    std::vector<LaurentSeries> coords = change_basis(target, BasisMode::Projective, ctx.opt.precision).coords();
    target = KClass(target.algebra(), BasisMode::Simple, std::move(coords));
  }
  int n = 0;
  if (ctx.opt.n) {
    n = *ctx.opt.n;
  } else if (auto deg = weight_data(*m).degree) {
    n = *deg;
  }
  const int depth = ctx.opt.depth ? *ctx.opt.depth : ctx.opt.precision + n;
  const SimpleComplex c = realize_class(target, n, depth);
  const KClass back = euler_characteristic(c);
  const Comparison cmp = compare(back, target.truncated(c.precision));
  Result r;
  json terms = json::array();
  std::ostringstream text;
  for (auto it = c.terms.rbegin(); it != c.terms.rend(); ++it) {
    terms.push_back({{"index", it->first}, {"summands", sum_json(*c.algebra, it->second)}});
    text << "X^" << it->first << ": " << sum_text(*c.algebra, BasisMode::Simple, it->second) << '\n';
  }
  if (c.terms.empty()) text << "(empty complex)\n";
  r.doc["module"] = ctx.opt.module;
  r.doc["n"] = n;
  r.doc["terms"] = std::move(terms);
  r.doc["precision"] = precision_json(c.precision);
  r.doc["agree"] = std::string(verdict(cmp)) == "yes";
  text << "euler characteristic reproduces the target";
  if (c.precision) text << " to O(q^" << *c.precision << ')';
  text << ": " << verdict(cmp) << '\n';
  r.text = text.str();
  return r;
}

Result cmd_quotient(const Context& ctx) {
  const AlgebraPtr a = ctx.algebra();
  std::set<SimpleIndex> killed;
  for (const auto& label : ctx.opt.kill) killed.insert(ctx.simple(a, label));
  const int n = ctx.opt.precision;
  const KLinearMap q = functor_kmap(ExactQuotient{a, killed}, n, ctx.opt.depth_cap);
  const KLinearMap lq = functor_kmap(DerivedCornerAdjoint{a, killed}, n, ctx.opt.depth_cap);
  const ProjectorReport laws = check_projector_laws(q, lq, n);
  const ContinuityReport cq = check_continuity(q, ctx.opt.alpha);
  const ContinuityReport clq = check_continuity(lq, ctx.opt.alpha);

  auto map_json = [](const KLinearMap& f) {
    json j;
    j["source_rank"] = f.source_rank;
    j["target_rank"] = f.target_rank;
    j["matrix"] = matrix_json(f.matrix);
    j["precision"] = precision_json(f.precision);
    j["observed_amplitude"] = f.observed_amplitude ? json(*f.observed_amplitude) : json(nullptr);
    return j;
  };
  Result r;
  r.doc["algebra"] = a->name();
  r.doc["killed"] = ctx.opt.kill;
  r.doc["Q"] = map_json(q);
  r.doc["LQ'"] = map_json(lq);
  r.doc["projector_laws"] = {{"section_identity", laws.section_identity}, {"idempotent", laws.idempotent}};
  r.doc["continuity"] = {{"alpha", ctx.opt.alpha}, {"Q", cq.pass}, {"LQ'", clq.pass}};

  auto amp = [](const KLinearMap& f) {
    return f.observed_amplitude ? std::to_string(*f.observed_amplitude) : std::string("none (zero map)");
  };
  std::ostringstream text;
  text << "[Q] (" << q.target_rank << "x" << q.source_rank << "), observed amplitude " << amp(q) << ":\n"
       << matrix_text(q.matrix);
  text << "[LQ'] (" << lq.target_rank << "x" << lq.source_rank << "), observed amplitude " << amp(lq) << ":\n"
       << matrix_text(lq.matrix);
  text << (laws.section_identity ? "PASS" : "FAIL") << " [Q][LQ'] = 1\n";
  text << (laws.idempotent ? "PASS" : "FAIL") << " ([LQ'][Q])^2 = [LQ'][Q]\n";
  text << (cq.pass ? "PASS" : "FAIL") << " [Q] continuous with amplitude " << ctx.opt.alpha << '\n';
  text << (clq.pass ? "PASS" : "FAIL") << " [LQ'] continuous with amplitude " << ctx.opt.alpha << '\n';
  r.text = text.str();
  return r;
}

Result cmd_sl2(const Context& ctx) {
  if (!ctx.opt.n) throw UsageError("sl2 needs --n");
  if (*ctx.opt.n < 0) throw UsageError("--n must be nonnegative");
  const Sl2Convention conv =
      ctx.opt.convention == "printed" ? Sl2Convention::AsPrinted : Sl2Convention::Balanced;
  const QSl2Module m = build_module(*ctx.opt.n, conv);
  const RelationReport rep = check_relations(m);
  Result r;
  r.doc["n"] = *ctx.opt.n;
  r.doc["convention"] = to_string(conv);
  json rels = json::array();
  std::ostringstream text;
  for (const auto& rel : rep.relations) {
    rels.push_back({{"name", rel.name}, {"pass", rel.pass}, {"residual", matrix_json(rel.residual)}});
    text << (rel.pass ? "PASS " : "FAIL ") << rel.name;
    if (!rel.pass) text << "  residual " << compact_matrix(rel.residual);
    text << '\n';
  }
  r.doc["relations"] = std::move(rels);
  if (ctx.opt.realization) {
    const RealizationReport real = groth_realization(*ctx.opt.n, ctx.opt.precision);
    json entries = json::array();
    for (const auto& e : real.entries) {
      entries.push_back({{"i", e.i}, {"image", series_json(e.image)}, {"pass", e.pass},
                         {"cartan_check", e.cartan_check ? json(*e.cartan_check) : json(nullptr)}});
    }
    r.doc["realization"] = std::move(entries);
    text << real.to_string();
  }
  r.text = text.str();
  return r;
}

Result cmd_qbinom(const Context& ctx) {
  if (ctx.opt.numbers.empty()) throw UsageError("qbinom needs n followed by parts");
  const int n = ctx.opt.numbers.front();
  const std::vector<int> parts(ctx.opt.numbers.begin() + 1, ctx.opt.numbers.end());
  const LaurentSeries s = qmultinomial(n, parts);
  Result r;
  r.doc["n"] = n;
  r.doc["parts"] = parts;
  r.doc["series"] = series_json(s);
  r.text = s.to_string() + "\n";
  return r;
}

Result dispatch(const Context& ctx) {
  const std::string& c = ctx.opt.command;
  if (c == "validate") return cmd_validate(ctx);
  if (c == "cartan") return cmd_cartan(ctx);
  if (c == "class") return cmd_class(ctx);
  if (c == "resolve") return cmd_resolve(ctx);
  if (c == "ext") return cmd_ext(ctx);
  if (c == "euler") return cmd_euler(ctx);
  if (c == "invert") return cmd_invert(ctx);
  if (c == "beta") return cmd_beta(ctx);
  if (c == "realize") return cmd_realize(ctx);
  if (c == "quotient") return cmd_quotient(ctx);
  if (c == "sl2") return cmd_sl2(ctx);
  if (c == "qbinom") return cmd_qbinom(ctx);
  throw UsageError("unknown command " + c);
}

void emit_error(const Options& opt, std::ostream& out, std::ostream& err, const std::string& kind,
                const std::string& message) {
  err << "error: " << kind << ": " << message << '\n';
  if (opt.format == "json") {
    json doc;
    doc["command"] = opt.command;
    doc["error"] = {{"kind", kind}, {"message", message}};
    out << doc.dump(2) << '\n';
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  if (const char* env = std::getenv("QGROTH_PRECISION")) {
    try {
      std::size_t used = 0;
      opt.precision = std::stoi(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      err << "error: QGROTH_PRECISION must be an integer, got \"" << env << "\"\n";
      return kExitUsage;
    }
  }

  CLI::App app{"Completed Grothendieck groups of graded algebras", "qgroth"};
  app.require_subcommand(1);
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"validate", "check algebras, modules and complexes"},
      {"cartan", "graded Cartan matrix"},
      {"class", "class of a module"},
      {"resolve", "minimal projective resolution"},
      {"ext", "dimensions of Ext into shifted simples"},
      {"euler", "Euler characteristic of a resolution or complex"},
      {"invert", "simple classes in the projective basis"},
      {"beta", "split a class at a weight"},
      {"realize", "complex of simples realizing a class"},
      {"quotient", "Serre quotient functors on K-groups"},
      {"sl2", "check the U_q(sl2) relations on V_n"},
      {"qbinom", "quantum multinomial coefficient"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->callback([&opt, n = name] { opt.command = n; });
    sub->add_option("--precision", opt.precision, "series precision N (terms below q^N)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--depth-cap", opt.depth_cap, "maximal resolution length")->check(CLI::NonNegativeNumber);
    sub->add_option("--weight-floor", opt.weight_floor, "stop resolving below this weight");
    sub->add_option("--format", opt.format, "output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--workspace", opt.workspaces, "workspace JSON file")->check(CLI::ExistingFile);
    sub->add_option("--algebra", opt.algebra, "algebra name (workspace or built-in)");
    if (name == "class" || name == "resolve" || name == "ext" || name == "euler" || name == "beta" ||
        name == "realize") {
      sub->add_option("--module", opt.module, "module name, or L, P, L_<label>, P_<label> with optional <shift>");
    }
    if (name == "class" || name == "realize") {
      sub->add_option("--basis", opt.basis, "simple or projective")->check(CLI::IsMember({"simple", "projective"}));
    }
    if (name == "resolve") sub->add_flag("--differentials", opt.differentials, "include differential matrices");
    if (name == "ext") sub->add_option("--simple", opt.simple, "label of the target simple");
    if (name == "euler") sub->add_option("--complex", opt.complex, "complex name");
    if (name == "beta") sub->add_option("--m", opt.m, "weight at which to split");
    if (name == "realize") {
      sub->add_option("--n", opt.n, "weight bound of the target");
      sub->add_option("--depth", opt.depth, "number of weight layers");
    }
    if (name == "quotient") {
      sub->add_option("--kill", opt.kill, "label of a simple to kill")->take_all();
      sub->add_option("--alpha", opt.alpha, "amplitude to check continuity against");
    }
    if (name == "sl2") {
      sub->add_option("--n", opt.n, "highest weight");
      sub->add_option("--convention", opt.convention, "printed or balanced")
          ->check(CLI::IsMember({"printed", "balanced"}));
      sub->add_flag("--realization", opt.realization, "also check the dual canonical realization");
    }
    if (name == "qbinom") sub->add_option("numbers", opt.numbers, "n followed by the parts")->required();
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    const Context ctx(opt);
    Result r = dispatch(ctx);
    if (opt.format == "json") {
      json doc;
      doc["command"] = opt.command;
      for (auto& [k, v] : r.doc.items()) doc[k] = v;
      out << doc.dump(2) << '\n';
    } else {
      out << r.text;
    }
    return r.status;
  } catch (const UsageError& e) {
    emit_error(opt, out, err, "UsageError", e.what());
    return kExitUsage;
  } catch (const ParseError& e) {
    emit_error(opt, out, err, e.kind(), e.what());
    return kExitUsage;
  } catch (const DanglingReference& e) {
    emit_error(opt, out, err, e.kind(), e.what());
    return kExitUsage;
  } catch (const Error& e) {
    emit_error(opt, out, err, e.kind(), e.what());
    return kExitDomainError;
  } catch (const std::invalid_argument& e) {
    emit_error(opt, out, err, "InvalidArgument", e.what());
    return kExitDomainError;
  } catch (const std::out_of_range& e) {
    emit_error(opt, out, err, "OutOfRange", e.what());
    return kExitDomainError;
  } catch (const std::logic_error& e) {
    emit_error(opt, out, err, "LogicError", e.what());
    return kExitDomainError;
  }
}

}  // namespace qgroth::cli
