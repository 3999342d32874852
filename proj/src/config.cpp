#include "nhssh/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

namespace nhssh::config {

namespace {

std::string where(const std::string& source, std::size_t line) {
  return line ? source + ":" + std::to_string(line) : source;
}

bool is_ident(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// Drops a trailing comment, leaving '#' inside strings alone.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && in_string) {
      ++i;
    } else if (line[i] == '"') {
      in_string = !in_string;
    } else if (line[i] == '#' && !in_string) {
      return line.substr(0, i);
    }
  }
  return line;
}

class ValueParser {
 public:
  ValueParser(const std::string& text, std::size_t line, const std::string& source, const std::string& field)
      : s_(text), line_(line), source_(source), field_(field) {}

  Value parse_all() {
    Value v = parse();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing characters '" + s_.substr(pos_) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ConfigError(source_, line_, field_, what); }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  Value parse() {
    skip_ws();
    if (pos_ >= s_.size()) fail("missing value");
    const char c = s_[pos_];
    if (c == '[') return parse_array();
    if (c == '"') return parse_string();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_word();
    return parse_number();
  }

  Value parse_array() {
    ++pos_;
    std::vector<Value> items;
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == ']') {
      ++pos_;
      return {items, line_};
    }
    for (;;) {
      items.push_back(parse());
      skip_ws();
      if (pos_ >= s_.size()) fail("unterminated array");
      if (s_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (s_[pos_] == ']') {
        ++pos_;
        return {items, line_};
      }
      fail("expected ',' or ']' in array");
    }
  }

  Value parse_string() {
    ++pos_;
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\') {
        if (++pos_ >= s_.size()) break;
        const char e = s_[pos_];
        if (e == 'n') out += '\n';
        else if (e == 't') out += '\t';
        else if (e == '"' || e == '\\') out += e;
        else fail(std::string("unknown escape '\\") + e + "'");
      } else {
        out += s_[pos_];
      }
      ++pos_;
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return {out, line_};
  }

  Value parse_word() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && is_ident(s_[pos_])) ++pos_;
    const std::string w = s_.substr(start, pos_ - start);
    if (w == "true") return {true, line_};
    if (w == "false") return {false, line_};
    if (w == "pi") return {std::numbers::pi, line_};
    if (w == "nan") return {std::numeric_limits<double>::quiet_NaN(), line_};
    if (w == "inf") return {std::numeric_limits<double>::infinity(), line_};
    fail("unexpected word '" + w + "' (strings need double quotes)");
  }

  Value parse_number() {
    const std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
    if (s_.compare(pos_, 3, "inf") == 0) {
      pos_ += 3;
      return {s_[start] == '-' ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity(),
              line_};
    }
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
                                s_[pos_] == 'e' || s_[pos_] == 'E' ||
                                ((s_[pos_] == '+' || s_[pos_] == '-') && (s_[pos_ - 1] == 'e' || s_[pos_ - 1] == 'E'))))
      ++pos_;
    const std::string text = s_.substr(start, pos_ - start);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (text.empty() || used != text.size()) fail("malformed number '" + text + "'");
    if (s_.compare(pos_, 2, "pi") == 0) {
      pos_ += 2;
      v *= std::numbers::pi;
    }
    if (pos_ < s_.size() && is_ident(s_[pos_])) fail("malformed number near '" + s_.substr(start) + "'");
    return {v, line_};
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  std::size_t line_;
  const std::string& source_;
  const std::string& field_;
};

Value from_json(const nlohmann::json& j, const std::string& source, const std::string& field) {
  if (j.is_boolean()) return {j.get<bool>(), 0};
  if (j.is_number()) return {j.get<double>(), 0};
  if (j.is_string()) return {j.get<std::string>(), 0};
  if (j.is_array()) {
    std::vector<Value> items;
    for (const auto& e : j) items.push_back(from_json(e, source, field));
    return {items, 0};
  }
  throw ConfigError(source, 0, field, "unsupported JSON value");
}

Document parse_json(const std::string& text, const std::string& source) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(source, 0, "", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError(source, 0, "", "top level must be an object of tables");
  Document doc;
  for (const auto& [table, body] : j.items()) {
    if (!body.is_object()) throw ConfigError(source, 0, table, "table must be an object");
    auto& t = doc[table];
    for (const auto& [key, value] : body.items()) t[key] = from_json(value, source, table + "." + key);
  }
  return doc;
}

// --- typed access ---------------------------------------------------------

class Reader {
 public:
  Reader(const Document& doc, const std::string& source) : doc_(doc), source_(source) {}

  const Value* find(const std::string& table, const std::string& key) {
    used_.insert(table + "." + key);
    const auto t = doc_.find(table);
    if (t == doc_.end()) return nullptr;
    const auto k = t->second.find(key);
    return k == t->second.end() ? nullptr : &k->second;
  }

  [[noreturn]] void fail(const std::string& table, const std::string& key, const std::string& what,
                         std::size_t line = 0) const {
    throw ConfigError(source_, line, table + "." + key, what);
  }

  double as_number(const Value& v, const std::string& table, const std::string& key) const {
    if (const auto* d = std::get_if<double>(&v.data)) return *d;
    fail(table, key, "expected a number", v.line);
  }

  int as_int(const Value& v, const std::string& table, const std::string& key) const {
    const double d = as_number(v, table, key);
    if (!(std::abs(d) < 1e9) || d != std::floor(d)) fail(table, key, "expected an integer", v.line);
    return static_cast<int>(d);
  }

  std::string as_string(const Value& v, const std::string& table, const std::string& key) const {
    if (const auto* s = std::get_if<std::string>(&v.data)) return *s;
    fail(table, key, "expected a string", v.line);
  }

  const std::vector<Value>& as_array(const Value& v, const std::string& table, const std::string& key) const {
    if (const auto* a = std::get_if<std::vector<Value>>(&v.data)) return *a;
    fail(table, key, "expected an array", v.line);
  }

  void number(const std::string& t, const std::string& k, double& out) {
    if (const auto* v = find(t, k)) out = as_number(*v, t, k);
  }
  void number(const std::string& t, const std::string& k, std::optional<double>& out) {
    if (const auto* v = find(t, k)) out = as_number(*v, t, k);
  }
  void integer(const std::string& t, const std::string& k, int& out, int min) {
    if (const auto* v = find(t, k)) {
      out = as_int(*v, t, k);
      if (out < min) fail(t, k, "must be at least " + std::to_string(min), v->line);
    }
  }
  void boolean(const std::string& t, const std::string& k, bool& out) {
    if (const auto* v = find(t, k)) {
      const auto* b = std::get_if<bool>(&v->data);
      if (!b) fail(t, k, "expected true or false", v->line);
      out = *b;
    }
  }
  void boolean(const std::string& t, const std::string& k, std::optional<bool>& out) {
    if (find(t, k)) {
      bool b = false;
      boolean(t, k, b);
      out = b;
    }
  }
  void string(const std::string& t, const std::string& k, std::string& out, const std::vector<std::string>& allowed) {
    if (const auto* v = find(t, k)) {
      out = as_string(*v, t, k);
      check_allowed(t, k, out, allowed, v->line);
    }
  }
  void strings(const std::string& t, const std::string& k, std::vector<std::string>& out,
               const std::vector<std::string>& allowed) {
    if (const auto* v = find(t, k)) {
      out.clear();
      for (const auto& e : as_array(*v, t, k)) {
        out.push_back(as_string(e, t, k));
        check_allowed(t, k, out.back(), allowed, v->line);
      }
    }
  }
  void numbers(const std::string& t, const std::string& k, std::vector<double>& out) {
    if (const auto* v = find(t, k)) {
      out.clear();
      for (const auto& e : as_array(*v, t, k)) out.push_back(as_number(e, t, k));
    }
  }

  // Everything in the document that no accessor asked for.
  void reject_unknown() const {
    for (const auto& [table, keys] : doc_)
      if (!table.empty() && !known_table(table) && keys.empty())
        throw ConfigError(source_, 0, table, "unknown table [" + table + "]");
    for (const auto& [table, keys] : doc_)
      for (const auto& [key, value] : keys)
        if (!used_.count(table + "." + key))
          throw ConfigError(source_, value.line, table.empty() ? key : table + "." + key,
                            table.empty() || known_table(table) ? "unknown key" : "unknown table [" + table + "]");
  }

 private:
  static bool known_table(const std::string& t) {
    return t == "model" || t == "lattice" || t == "scan" || t == "check" || t == "assert" || t == "output";
  }

  void check_allowed(const std::string& t, const std::string& k, const std::string& s,
                     const std::vector<std::string>& allowed, std::size_t line) const {
    if (allowed.empty() || std::find(allowed.begin(), allowed.end(), s) != allowed.end()) return;
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    fail(t, k, "'" + s + "' is not one of {" + list + "}", line);
  }

  const Document& doc_;
  const std::string& source_;
  std::set<std::string> used_;
};

const std::vector<std::string> kBcs{"PBC", "xOBC", "yOBC", "xyOBC"};
const std::vector<std::string> kAxes{"x", "y"};

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

ConfigError::ConfigError(const std::string& source, std::size_t line, const std::string& field,
                         const std::string& what)
    : std::runtime_error(where(source, line) + ": " + (field.empty() ? "" : field + ": ") + what),
      line_(line),
      field_(field) {}

Document parse_document(const std::string& text, const std::string& source) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_json(text, source);

  Document doc;
  std::string table;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(source, line, "", "malformed table header");
      table = trim(s.substr(1, s.size() - 2));
      if (table.empty() || !std::all_of(table.begin(), table.end(), is_ident))
        throw ConfigError(source, line, "", "bad table name '" + table + "'");
      if (doc.count(table)) throw ConfigError(source, line, table, "table defined twice");
      doc[table];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(source, line, "", "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string field = table.empty() ? key : table + "." + key;
    if (key.empty() || !std::all_of(key.begin(), key.end(), is_ident))
      throw ConfigError(source, line, field, "bad key");
    auto& t = doc[table];
    if (t.count(key)) throw ConfigError(source, line, field, "duplicate key");
    t[key] = ValueParser(trim(s.substr(eq + 1)), line, source, field).parse_all();
  }
  return doc;
}

void apply_override(Document& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const std::string lhs = trim(assignment.substr(0, eq));
  if (eq == std::string::npos) throw ConfigError("--set", 0, lhs, "expected table.key=value");
  const auto dot = lhs.find('.');
  if (dot == std::string::npos) throw ConfigError("--set", 0, lhs, "expected table.key=value");
  const std::string table = lhs.substr(0, dot);
  const std::string key = lhs.substr(dot + 1);
  if (table.empty() || key.empty() || !std::all_of(table.begin(), table.end(), is_ident) ||
      !std::all_of(key.begin(), key.end(), is_ident))
    throw ConfigError("--set", 0, lhs, "bad key");
  doc[table][key] = ValueParser(trim(assignment.substr(eq + 1)), 0, "--set", lhs).parse_all();
}

ModelParams RunConfig::params() const {
  ModelParams p{model.gamma_in, model.gamma_ex, model.gamma_in_p, model.gamma_ex_p, {}};
  p.perturbation.terms = model.terms;
  return p;
}

bool RunConfig::wants(const std::string& format) const {
  return std::find(output.formats.begin(), output.formats.end(), format) != output.formats.end();
}

RunConfig resolve(const Document& doc, const std::string& source) {
  Reader r(doc, source);
  RunConfig c;

  // [model]
  {
    auto& m = c.model;
    std::string hoppings = "reference";
    r.string("model", "hoppings", hoppings, {"reference", "hermitian"});
    const ModelParams base = hoppings == "hermitian" ? hermitian_params() : reference_params();
    m.gamma_in = base.gamma_in;
    m.gamma_ex = base.gamma_ex;
    m.gamma_in_p = base.gamma_in_p;
    m.gamma_ex_p = base.gamma_ex_p;
    r.number("model", "gamma_in", m.gamma_in);
    r.number("model", "gamma_ex", m.gamma_ex);
    r.number("model", "gamma_in_p", m.gamma_in_p);
    r.number("model", "gamma_ex_p", m.gamma_ex_p);

    if (const auto* v = r.find("model", "terms")) {
      for (const auto& t : r.as_array(*v, "model", "terms")) {
        const auto& triple = r.as_array(t, "model", "terms");
        if (triple.size() != 3) r.fail("model", "terms", "each term is [mu, nu, coeff]", v->line);
        const int mu = r.as_int(triple[0], "model", "terms");
        const int nu = r.as_int(triple[1], "model", "terms");
        if (mu < 0 || mu > 3 || nu < 0 || nu > 3)
          r.fail("model", "terms", "Pauli indices must lie in 0..3", v->line);
        m.terms.push_back({mu, nu, r.as_number(triple[2], "model", "terms")});
      }
    }
    std::optional<double> alpha, beta, theta, amp;
    r.number("model", "alpha", alpha);
    r.number("model", "beta", beta);
    r.number("model", "theta", theta);
    r.number("model", "amp", amp);
    std::string variant = "zz0";
    const bool has_variant = r.find("model", "variant") != nullptr;
    r.string("model", "variant", variant, {"zz0", "zzz"});
    if (alpha) m.terms.push_back(alpha_potential(*alpha).terms.front());
    if (beta) m.terms.push_back(beta_potential(*beta).terms.front());
    if (theta) {
      const auto spec = theta_potential(amp.value_or(0.8), *theta,
                                        variant == "zzz" ? ThetaVariant::ZZ : ThetaVariant::ZZero);
      m.terms.insert(m.terms.end(), spec.terms.begin(), spec.terms.end());
    } else if (amp || has_variant) {
      r.fail("model", amp ? "amp" : "variant", "only meaningful together with theta");
    }
  }

  // [lattice]
  {
    auto& l = c.lattice;
    r.integer("lattice", "nx", l.nx, 1);
    r.integer("lattice", "ny", l.ny, 1);
    r.strings("lattice", "bcs", l.bcs, kBcs);
    r.integer("lattice", "nkx", l.nkx, 1);
    r.integer("lattice", "nky", l.nky, 1);
    r.integer("lattice", "strip_cells", l.strip_cells, 1);
    r.number("lattice", "edge_threshold", l.edge_threshold);
    if (l.bcs.empty()) r.fail("lattice", "bcs", "needs at least one boundary condition");
    for (const auto& bc : l.bcs) {
      const bool px = bc == "PBC" || bc == "yOBC";
      const bool py = bc == "PBC" || bc == "xOBC";
      if ((px && l.nx < 2) || (py && l.ny < 2))
        r.fail("lattice", "bcs", bc + " needs at least two cells along each periodic axis");
    }
  }

  // [scan]
  {
    auto& s = c.scan;
    r.string("scan", "kind", s.kind, {"alpha", "theta", "size"});
    r.numbers("scan", "values", s.values);
    std::optional<double> start, stop;
    int steps = 0;
    r.number("scan", "start", start);
    r.number("scan", "stop", stop);
    r.integer("scan", "steps", steps, 2);
    if (start || stop || steps) {
      if (!start || !stop || !steps) r.fail("scan", "start", "start, stop and steps go together");
      if (!s.values.empty()) r.fail("scan", "values", "give either values or start/stop/steps");
      for (int i = 0; i < steps; ++i) s.values.push_back(*start + (*stop - *start) * i / (steps - 1));
    }
    if (const auto* v = r.find("scan", "sizes")) {
      for (const auto& e : r.as_array(*v, "scan", "sizes")) {
        if (std::holds_alternative<double>(e.data)) {
          const int n = r.as_int(e, "scan", "sizes");
          s.sizes.emplace_back(n, n);
        } else {
          const auto& pair = r.as_array(e, "scan", "sizes");
          if (pair.size() != 2) r.fail("scan", "sizes", "each size is n or [nx, ny]", v->line);
          s.sizes.emplace_back(r.as_int(pair[0], "scan", "sizes"), r.as_int(pair[1], "scan", "sizes"));
        }
        if (s.sizes.back().first < 1 || s.sizes.back().second < 1)
          r.fail("scan", "sizes", "sizes must be positive", v->line);
      }
    }
    r.number("scan", "amplitude", s.amplitude);
    r.string("scan", "variant", s.variant, {"zz0", "zzz"});
    r.number("scan", "resolution", s.resolution);
    r.boolean("scan", "include_obc", s.include_obc);
    r.string("scan", "scope", s.scope, {"xyOBC", "bulk", "edge"});
    if (!(s.resolution > 0)) r.fail("scan", "resolution", "must be positive");
    if ((s.kind == "alpha" || s.kind == "theta") && s.values.empty())
      r.fail("scan", "values", "a " + s.kind + " scan needs values or start/stop/steps");
    if (s.kind == "size" && s.sizes.size() < 3) r.fail("scan", "sizes", "a size scan needs at least three sizes");
    for (std::size_t i = 1; i < s.values.size(); ++i)
      if (!(s.values[i] > s.values[i - 1])) r.fail("scan", "values", "must be strictly increasing");
  }

  // [check]
  {
    auto& k = c.check;
    r.strings("check", "symmetries", k.symmetries, {});
    r.integer("check", "symmetry_grid", k.symmetry_grid, 1);
    r.number("check", "symmetry_tol", k.symmetry_tol);
    r.strings("check", "winding", k.winding, kAxes);
    r.integer("check", "winding_pairs", k.winding_pairs, 1);
    r.integer("check", "winding_samples", k.winding_samples, 3);
    int seed = 1;
    r.integer("check", "seed", seed, 0);
    k.seed = static_cast<std::uint64_t>(seed);
    r.strings("check", "skin", k.skin, kAxes);
    r.integer("check", "skin_cells", k.skin_cells, 2);
    r.numbers("check", "gbz_kx", k.gbz_kx);
    r.integer("check", "gbz_cells", k.gbz_cells, 2);
    r.number("check", "gbz_tol", k.gbz_tol);
  }

  // [assert]
  {
    auto& a = c.asserts;
    for (const auto& bc : kBcs) {
      std::optional<double> v;
      r.number("assert", "max_abs_im_" + lower(bc), v);
      if (v) a.max_abs_im[bc] = *v;
    }
    r.strings("assert", "real", a.real, kBcs);
    r.boolean("assert", "pbc_cross", a.pbc_cross);
    r.number("assert", "transition_min", a.transition_min);
    r.number("assert", "transition_max", a.transition_max);
    r.number("assert", "transition_near", a.transition_near);
    r.boolean("assert", "monotone", a.monotone);
    r.strings("assert", "preserved", a.preserved, {});
    r.strings("assert", "broken", a.broken, {});
    std::string wx, wy;
    r.string("assert", "winding_x", wx, {"zero", "nonzero"});
    r.string("assert", "winding_y", wy, {"zero", "nonzero"});
    if (!wx.empty()) a.winding_x = wx;
    if (!wy.empty()) a.winding_y = wy;
    r.boolean("assert", "skin_x", a.skin_x);
    r.boolean("assert", "skin_y", a.skin_y);
    r.number("assert", "gbz_fraction", a.gbz_fraction);
  }

  // [output]
  {
    auto& o = c.output;
    r.string("output", "dir", o.dir, {});
    r.strings("output", "formats", o.formats, {"csv", "json", "svg"});
    r.number("output", "tol", o.tol);
    r.integer("output", "workers", o.workers, 0);
    if (!(o.tol > 0)) r.fail("output", "tol", "must be positive");
  }

  r.reject_unknown();
  return c;
}

nlohmann::json echo(const RunConfig& c) {
  using nlohmann::json;
  json terms = json::array();
  for (const auto& t : c.model.terms) terms.push_back({t.mu, t.nu, t.coeff});
  json sizes = json::array();
  for (auto [x, y] : c.scan.sizes) sizes.push_back({x, y});

  json asserts = json::object();
  const auto& a = c.asserts;
  for (const auto& [bc, v] : a.max_abs_im) asserts["max_abs_im_" + lower(bc)] = v;
  if (!a.real.empty()) asserts["real"] = a.real;
  if (a.pbc_cross) asserts["pbc_cross"] = *a.pbc_cross;
  if (a.transition_min) asserts["transition_min"] = *a.transition_min;
  if (a.transition_max) asserts["transition_max"] = *a.transition_max;
  if (a.transition_near) asserts["transition_near"] = *a.transition_near;
  if (a.monotone) asserts["monotone"] = *a.monotone;
  if (!a.preserved.empty()) asserts["preserved"] = a.preserved;
  if (!a.broken.empty()) asserts["broken"] = a.broken;
  if (a.winding_x) asserts["winding_x"] = *a.winding_x;
  if (a.winding_y) asserts["winding_y"] = *a.winding_y;
  if (a.skin_x) asserts["skin_x"] = *a.skin_x;
  if (a.skin_y) asserts["skin_y"] = *a.skin_y;
  if (a.gbz_fraction) asserts["gbz_fraction"] = *a.gbz_fraction;

  json scan = {{"values", c.scan.values},     {"sizes", sizes},
               {"amplitude", c.scan.amplitude}, {"variant", c.scan.variant},
               {"resolution", c.scan.resolution}, {"include_obc", c.scan.include_obc},
               {"scope", c.scan.scope}};
  if (!c.scan.kind.empty()) scan["kind"] = c.scan.kind;

  return {
      {"model",
       {{"gamma_in", c.model.gamma_in},
        {"gamma_ex", c.model.gamma_ex},
        {"gamma_in_p", c.model.gamma_in_p},
        {"gamma_ex_p", c.model.gamma_ex_p},
        {"terms", terms}}},
      {"lattice",
       {{"nx", c.lattice.nx},
        {"ny", c.lattice.ny},
        {"bcs", c.lattice.bcs},
        {"nkx", c.lattice.nkx},
        {"nky", c.lattice.nky},
        {"strip_cells", c.lattice.strip_cells},
        {"edge_threshold", c.lattice.edge_threshold}}},
      {"scan", scan},
      {"check",
       {{"symmetries", c.check.symmetries},
        {"symmetry_grid", c.check.symmetry_grid},
        {"symmetry_tol", c.check.symmetry_tol},
        {"winding", c.check.winding},
        {"winding_pairs", c.check.winding_pairs},
        {"winding_samples", c.check.winding_samples},
        {"seed", c.check.seed},
        {"skin", c.check.skin},
        {"skin_cells", c.check.skin_cells},
        {"gbz_kx", c.check.gbz_kx},
        {"gbz_cells", c.check.gbz_cells},
        {"gbz_tol", c.check.gbz_tol}}},
      {"assert", asserts},
      {"output",
       {{"dir", c.output.dir}, {"formats", c.output.formats}, {"tol", c.output.tol}, {"workers", c.output.workers}}},
  };
}

RunConfig load_file(const std::string& path, const std::vector<std::string>& overrides) {
  Document doc;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, 0, "", "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    doc = parse_document(ss.str(), path);
  }
  for (const auto& o : overrides) apply_override(doc, o);
  return resolve(doc, path.empty() ? "config" : path);
}

}  // namespace nhssh::config
