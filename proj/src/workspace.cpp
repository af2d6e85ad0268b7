#include "qgroth/workspace.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <variant>

#include <json.hpp>

#include "qgroth/errors.hpp"
#include "qgroth/fixtures.hpp"

namespace qgroth {

using nlohmann::json;

Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  auto integer = [&](const std::string& part) {
    if (part.empty()) throw ParseError("malformed rational \"" + s + "\"");
    std::size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    if (i == part.size()) throw ParseError("malformed rational \"" + s + "\"");
    for (; i < part.size(); ++i) {
      if (part[i] < '0' || part[i] > '9') throw ParseError("malformed rational \"" + s + "\"");
    }
    return Integer(part[0] == '+' ? part.substr(1) : part);
  };
  if (slash == std::string::npos) return Rational(integer(s));
  const Integer num = integer(s.substr(0, slash));
  const Integer den = integer(s.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator in \"" + s + "\"");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::string format_rational(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  return c.get_str();
}

namespace {

using PathToken = std::variant<std::string, std::size_t>;
using Path = std::vector<PathToken>;

// Offset of the value at `path` in already-validated JSON text; the deepest
// existing prefix when the path runs off the document.
class Locator {
public:
  explicit Locator(const std::string& text) : t_(text) {}

  std::size_t find(const Path& path) const {
    std::size_t i = ws(0);
    for (const auto& tok : path) {
      const std::size_t next = std::holds_alternative<std::string>(tok)
                                   ? member(i, std::get<std::string>(tok))
                                   : element(i, std::get<std::size_t>(tok));
      if (next == npos) return i;
      i = next;
    }
    return i;
  }

private:
  static constexpr std::size_t npos = std::string::npos;

  std::size_t ws(std::size_t i) const {
    while (i < t_.size() && (t_[i] == ' ' || t_[i] == '\n' || t_[i] == '\r' || t_[i] == '\t')) ++i;
    return i;
  }

  std::size_t skip_string(std::size_t i) const {
    for (++i; i < t_.size(); ++i) {
      if (t_[i] == '\\') {
        ++i;
      } else if (t_[i] == '"') {
        return i + 1;
      }
    }
    return t_.size();
  }

  std::size_t skip_value(std::size_t i) const {
    i = ws(i);
    if (i >= t_.size()) return i;
    if (t_[i] == '"') return skip_string(i);
    if (t_[i] == '{' || t_[i] == '[') {
      int depth = 0;
      while (i < t_.size()) {
        const char c = t_[i];
        if (c == '"') {
          i = skip_string(i);
          continue;
        }
        if (c == '{' || c == '[') ++depth;
        if (c == '}' || c == ']') {
          if (--depth == 0) return i + 1;
        }
        ++i;
      }
      return i;
    }
    while (i < t_.size() && t_[i] != ',' && t_[i] != '}' && t_[i] != ']' && t_[i] != ' ' && t_[i] != '\n' &&
           t_[i] != '\r' && t_[i] != '\t') {
      ++i;
    }
    return i;
  }

  std::size_t member(std::size_t i, const std::string& key) const {
    if (i >= t_.size() || t_[i] != '{') return npos;
    i = ws(i + 1);
    while (i < t_.size() && t_[i] == '"') {
      const std::size_t end = skip_string(i);
      const std::string k = json::parse(t_.substr(i, end - i)).get<std::string>();
      i = ws(end);
      if (i < t_.size() && t_[i] == ':') i = ws(i + 1);
      if (k == key) return i;
      i = ws(skip_value(i));
      if (i < t_.size() && t_[i] == ',') i = ws(i + 1);
    }
    return npos;
  }

  std::size_t element(std::size_t i, std::size_t index) const {
    if (i >= t_.size() || t_[i] != '[') return npos;
    i = ws(i + 1);
    for (std::size_t k = 0; i < t_.size() && t_[i] != ']'; ++k) {
      if (k == index) return i;
      i = ws(skip_value(i));
      if (i < t_.size() && t_[i] == ',') i = ws(i + 1);
    }
    return npos;
  }

  const std::string& t_;
};

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::string where(const std::string& source, const std::string& text, std::size_t offset) {
  const auto [line, col] = line_column(text, offset);
  return source + ":" + std::to_string(line) + ":" + std::to_string(col);
}

class Reader {
public:
  Reader(const std::string& text, const std::string& source) : text_(text), source_(source), locator_(text) {}

  [[noreturn]] void fail(const Path& path, const std::string& msg) const {
    throw ParseError(where(source_, text_, locator_.find(path)) + ": " + msg);
  }

  const json& field(const json& obj, const Path& path, const std::string& key) const {
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, "missing field \"" + key + "\"");
    return *it;
  }

  const json& array(const json& v, const Path& path) const {
    if (!v.is_array()) fail(path, "expected an array");
    return v;
  }

  std::string string(const json& v, const Path& path) const {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
  }

  long integer(const json& v, const Path& path) const {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    return v.get<long>();
  }

  Rational rational(const json& v, const Path& path) const {
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (!v.is_string()) fail(path, "expected a rational \"num/den\"");
    try {
      return parse_rational(v.get<std::string>());
    } catch (const ParseError& e) {
      fail(path, e.what());
    }
  }

  Matrix matrix(const json& v, const Path& path) const {
    array(v, path);
    std::vector<Vector> rows;
    std::size_t cols = 0;
    for (std::size_t r = 0; r < v.size(); ++r) {
      Path rp = path;
      rp.emplace_back(r);
      array(v[r], rp);
      if (r == 0) cols = v[r].size();
      if (v[r].size() != cols) fail(rp, "matrix rows have different lengths");
      Vector row;
      for (std::size_t c = 0; c < v[r].size(); ++c) {
        Path cp = rp;
        cp.emplace_back(c);
        row.push_back(rational(v[r][c], cp));
      }
      rows.push_back(std::move(row));
    }
    return Matrix::from_rows(cols, rows);
  }

  AlgebraDescription algebra(const json& v, const Path& path) const {
    AlgebraDescription d;
    d.name = string(field(v, path, "name"), with(path, "name"));
    const Path bp = with(path, "basis");
    const json& basis = array(field(v, path, "basis"), bp);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const Path p = with(bp, i);
      d.basis.push_back({string(field(basis[i], p, "label"), with(p, "label")),
                         static_cast<int>(integer(field(basis[i], p, "degree"), with(p, "degree")))});
    }
    const Path ip = with(path, "idempotents");
    const json& idem = array(field(v, path, "idempotents"), ip);
    for (std::size_t i = 0; i < idem.size(); ++i) d.idempotents.push_back(string(idem[i], with(ip, i)));
    if (v.contains("products")) {
      const Path pp = with(path, "products");
      const json& prods = array(v["products"], pp);
      for (std::size_t i = 0; i < prods.size(); ++i) {
        const Path p = with(pp, i);
        AlgebraDescription::Product prod;
        prod.left = string(field(prods[i], p, "left"), with(p, "left"));
        prod.right = string(field(prods[i], p, "right"), with(p, "right"));
        const Path rp = with(p, "result");
        const json& res = array(field(prods[i], p, "result"), rp);
        for (std::size_t k = 0; k < res.size(); ++k) {
          const Path tp = with(rp, k);
          const std::string label = string(field(res[k], tp, "label"), with(tp, "label"));
          const long num = integer(field(res[k], tp, "num"), with(tp, "num"));
          const long den = res[k].contains("den") ? integer(res[k]["den"], with(tp, "den")) : 1;
          if (den == 0) fail(with(tp, "den"), "zero denominator");
          Rational c(num, den);
          c.canonicalize();
          prod.result.push_back({label, c});
        }
        d.products.push_back(std::move(prod));
      }
    }
    return d;
  }

  ModuleDescription module(const json& v, const Path& path) const {
    ModuleDescription d;
    d.name = string(field(v, path, "name"), with(path, "name"));
    d.algebra = string(field(v, path, "algebra"), with(path, "algebra"));
    const Path cp = with(path, "components");
    const json& comps = array(field(v, path, "components"), cp);
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const Path p = with(cp, i);
      const long dim = integer(field(comps[i], p, "dim"), with(p, "dim"));
      if (dim < 0) fail(with(p, "dim"), "dimension must be nonnegative");
      d.components.push_back({static_cast<int>(integer(field(comps[i], p, "degree"), with(p, "degree"))),
                              static_cast<std::size_t>(dim)});
    }
    if (v.contains("action")) {
      const Path ap = with(path, "action");
      const json& acts = array(v["action"], ap);
      for (std::size_t i = 0; i < acts.size(); ++i) {
        const Path p = with(ap, i);
        d.action.push_back({string(field(acts[i], p, "element"), with(p, "element")),
                            static_cast<int>(integer(field(acts[i], p, "from_degree"), with(p, "from_degree"))),
                            matrix(field(acts[i], p, "matrix"), with(p, "matrix"))});
      }
    }
    return d;
  }

  ComplexDescription complex(const json& v, const Path& path) const {
    ComplexDescription d;
    d.name = string(field(v, path, "name"), with(path, "name"));
    d.algebra = string(field(v, path, "algebra"), with(path, "algebra"));
    const Path tp = with(path, "terms");
    const json& terms = array(field(v, path, "terms"), tp);
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const Path p = with(tp, i);
      d.terms.push_back({static_cast<int>(integer(field(terms[i], p, "index"), with(p, "index"))),
                         string(field(terms[i], p, "module"), with(p, "module"))});
    }
    if (v.contains("differentials")) {
      const Path dp = with(path, "differentials");
      const json& diffs = array(v["differentials"], dp);
      for (std::size_t i = 0; i < diffs.size(); ++i) {
        const Path p = with(dp, i);
        ComplexDescription::Differential diff;
        diff.index = static_cast<int>(integer(field(diffs[i], p, "index"), with(p, "index")));
        const Path bp = with(p, "blocks");
        const json& blocks = array(field(diffs[i], p, "blocks"), bp);
        for (std::size_t k = 0; k < blocks.size(); ++k) {
          const Path kp = with(bp, k);
          diff.blocks.push_back({static_cast<int>(integer(field(blocks[k], kp, "degree"), with(kp, "degree"))),
                                 matrix(field(blocks[k], kp, "matrix"), with(kp, "matrix"))});
        }
        d.differentials.push_back(std::move(diff));
      }
    }
    return d;
  }

  static Path with(Path p, PathToken t) {
    p.push_back(std::move(t));
    return p;
  }

private:
  const std::string& text_;
  const std::string& source_;
  Locator locator_;
};

}  // namespace

Workspace parse_workspace_text(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::string msg = e.what();
    const auto cut = msg.find(": ", msg.find("parse error"));
    throw ParseError(where(source, text, e.byte > 0 ? e.byte - 1 : 0) + ": invalid JSON" +
                     (cut == std::string::npos ? "" : msg.substr(cut)));
  }
  const Reader rd(text, source);
  if (!doc.is_object()) rd.fail({}, "workspace must be a JSON object");

  Workspace ws;
  const char* sections[] = {"algebras", "modules", "complexes"};
  for (const char* key : sections) {
    if (!doc.contains(key)) continue;
    const Path base{std::string(key)};
    const json& list = rd.array(doc[key], base);
    for (std::size_t i = 0; i < list.size(); ++i) {
      const Path p = Reader::with(base, i);
      if (key == sections[0]) ws.algebras.push_back(rd.algebra(list[i], p));
      if (key == sections[1]) ws.modules.push_back(rd.module(list[i], p));
      if (key == sections[2]) ws.complexes.push_back(rd.complex(list[i], p));
    }
  }

  std::set<std::string> algebras;
  for (std::size_t i = 0; i < ws.algebras.size(); ++i) {
    if (!algebras.insert(ws.algebras[i].name).second) {
      rd.fail({std::string("algebras"), i, std::string("name")}, "duplicate algebra \"" + ws.algebras[i].name + "\"");
    }
  }
  auto known_algebra = [&](const std::string& name) {
    return algebras.count(name) || fixtures::builtin_algebra(name).has_value();
  };
  std::set<std::string> modules;
  for (std::size_t i = 0; i < ws.modules.size(); ++i) {
    const auto& m = ws.modules[i];
    if (!modules.insert(m.name).second) {
      rd.fail({std::string("modules"), i, std::string("name")}, "duplicate module \"" + m.name + "\"");
    }
    if (!known_algebra(m.algebra)) {
      throw DanglingReference("module \"" + m.name + "\" refers to unknown algebra \"" + m.algebra + "\"");
    }
  }
  std::set<std::string> complexes;
  for (std::size_t i = 0; i < ws.complexes.size(); ++i) {
    const auto& c = ws.complexes[i];
    if (!complexes.insert(c.name).second) {
      rd.fail({std::string("complexes"), i, std::string("name")}, "duplicate complex \"" + c.name + "\"");
    }
    if (!known_algebra(c.algebra)) {
      throw DanglingReference("complex \"" + c.name + "\" refers to unknown algebra \"" + c.algebra + "\"");
    }
    for (const auto& t : c.terms) {
      if (!modules.count(t.module)) {
        throw DanglingReference("complex \"" + c.name + "\" refers to unknown module \"" + t.module + "\"");
      }
    }
  }
  return ws;
}

Workspace parse_workspace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_workspace_text(buf.str(), path.string());
}

namespace {

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(format_rational(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json small_integer(const Integer& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("coefficient " + z.get_str() + " does not fit in a JSON integer");
  return z.get_si();
}

}  // namespace

std::string serialize_workspace(const Workspace& ws) {
  json doc = json::object();
  json algebras = json::array();
  for (const auto& a : ws.algebras) {
    json basis = json::array();
    for (const auto& b : a.basis) basis.push_back({{"label", b.label}, {"degree", b.degree}});
    json products = json::array();
    for (const auto& p : a.products) {
      json result = json::array();
      for (const auto& t : p.result) {
        result.push_back({{"label", t.label}, {"num", small_integer(t.coeff.get_num())},
                          {"den", small_integer(t.coeff.get_den())}});
      }
      products.push_back({{"left", p.left}, {"right", p.right}, {"result", std::move(result)}});
    }
    algebras.push_back({{"name", a.name},
                        {"basis", std::move(basis)},
                        {"idempotents", a.idempotents},
                        {"products", std::move(products)}});
  }
  doc["algebras"] = std::move(algebras);

  json modules = json::array();
  for (const auto& m : ws.modules) {
    json comps = json::array();
    for (const auto& c : m.components) comps.push_back({{"degree", c.degree}, {"dim", c.dim}});
    json action = json::array();
    for (const auto& a : m.action) {
      action.push_back({{"element", a.element}, {"from_degree", a.from_degree}, {"matrix", matrix_json(a.matrix)}});
    }
    modules.push_back(
        {{"name", m.name}, {"algebra", m.algebra}, {"components", std::move(comps)}, {"action", std::move(action)}});
  }
  doc["modules"] = std::move(modules);

  json complexes = json::array();
  for (const auto& c : ws.complexes) {
    json terms = json::array();
    for (const auto& t : c.terms) terms.push_back({{"index", t.index}, {"module", t.module}});
    json diffs = json::array();
    for (const auto& d : c.differentials) {
      json blocks = json::array();
      for (const auto& b : d.blocks) blocks.push_back({{"degree", b.degree}, {"matrix", matrix_json(b.matrix)}});
      diffs.push_back({{"index", d.index}, {"blocks", std::move(blocks)}});
    }
    complexes.push_back({{"name", c.name},
                         {"algebra", c.algebra},
                         {"terms", std::move(terms)},
                         {"differentials", std::move(diffs)}});
  }
  doc["complexes"] = std::move(complexes);
  return doc.dump(2) + "\n";
}

GradedModule module_from_description(const AlgebraPtr& a, const ModuleDescription& d) {
  std::map<int, std::size_t> components;
  for (const auto& c : d.components) {
    if (components.count(c.degree)) {
      throw ValidationError("module \"" + d.name + "\": degree " + std::to_string(c.degree) + " listed twice");
    }
    if (c.dim > 0) components.emplace(c.degree, c.dim);
  }
  auto dim = [&](int deg) {
    auto it = components.find(deg);
    return it == components.end() ? std::size_t{0} : it->second;
  };
  ActionTable action;
  for (const auto& act : d.action) {
    const auto b = a->index_of(act.element);
    if (!b) {
      throw ValidationError("module \"" + d.name + "\": unknown algebra element \"" + act.element + "\"");
    }
    Matrix m = act.matrix;
    const std::size_t rows = dim(act.from_degree + a->degree(*b));
    const std::size_t cols = dim(act.from_degree);
    if (m.rows() == 0 && (rows == 0 || cols == 0)) m = Matrix(rows, cols);
    if (!action.emplace(ActionKey{*b, act.from_degree}, std::move(m)).second) {
      throw ValidationError("module \"" + d.name + "\": action of \"" + act.element + "\" on degree " +
                            std::to_string(act.from_degree) + " listed twice");
    }
  }
  return GradedModule::create(a, std::move(components), std::move(action));
}

ModuleDescription describe_module(const GradedModule& m, const std::string& name) {
  ModuleDescription d;
  d.name = name;
  d.algebra = m.algebra()->name();
  for (const auto& [deg, n] : m.components()) d.components.push_back({deg, n});
  for (const auto& [key, mat] : m.action_table()) {
    if (mat.is_zero()) continue;
    d.action.push_back({m.algebra()->basis(key.first).label, key.second, mat});
  }
  return d;
}

Library::Library(const Workspace& ws) : ws_(ws) {}

AlgebraPtr Library::algebra(const std::string& name) const {
  if (auto it = algebras_.find(name); it != algebras_.end()) return it->second;
  AlgebraPtr a;
  for (const auto& d : ws_.algebras) {
    if (d.name == name) a = build_from_table(d);
  }
  if (!a) {
    auto builtin = fixtures::builtin_algebra(name);
    if (!builtin) throw DanglingReference("unknown algebra \"" + name + "\"");
    a = *builtin;
  }
  algebras_.emplace(name, a);
  return a;
}

ModulePtr Library::module(const std::string& name) const {
  if (auto it = modules_.find(name); it != modules_.end()) return it->second;
  for (const auto& d : ws_.modules) {
    if (d.name == name) {
      ModulePtr m = make_module(module_from_description(algebra(d.algebra), d));
      modules_.emplace(name, m);
      return m;
    }
  }
  throw DanglingReference("unknown module \"" + name + "\"");
}

ModuleComplex Library::complex(const std::string& name) const {
  for (const auto& d : ws_.complexes) {
    if (d.name != name) continue;
    ModuleComplex c;
    c.algebra = algebra(d.algebra);
    for (const auto& t : d.terms) {
      ModulePtr m = module(t.module);
      if (m->algebra() != c.algebra && describe(*m->algebra()) != describe(*c.algebra)) {
        throw ValidationError("complex \"" + name + "\": module \"" + t.module + "\" is over another algebra");
      }
      if (!c.terms.emplace(t.index, m).second) {
        throw ValidationError("complex \"" + name + "\": index " + std::to_string(t.index) + " listed twice");
      }
    }
    for (const auto& diff : d.differentials) {
      ModuleMap f{c.term(diff.index), c.term(diff.index + 1), {}};
      for (const auto& b : diff.blocks) {
        Matrix m = b.matrix;
        if (m.rows() == 0) m = Matrix(f.target->dim(b.degree), f.source->dim(b.degree));
        f.blocks.emplace(b.degree, std::move(m));
      }
      c.differentials.emplace(diff.index, std::move(f));
    }
    try {
      c.check();
    } catch (const NotAModuleMap& e) {
      throw ValidationError("complex \"" + name + "\": " + e.what());
    }
    return c;
  }
  throw DanglingReference("unknown complex \"" + name + "\"");
}

}  // namespace qgroth
