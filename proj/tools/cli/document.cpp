#include "document.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace jensen::cli {

Json number(Real v) { return Json(static_cast<double>(v)); }

namespace {

std::string field_error(std::string_view field, const std::string& what) {
  return "field '" + std::string(field) + "': " + what;
}

void require_keys(const Json& node, std::string_view field, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : node.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      std::string sub = field.empty() ? key : std::string(field) + "." + key;
      throw InputError(field_error(sub, "unknown field"));
    }
  }
}

Real as_real(const Json& node, std::string_view field) {
  if (!node.is_number()) throw InputError(field_error(field, "expected a number, got " + std::string(node.type_name())));
  return static_cast<Real>(node.get<double>());
}

std::vector<Real> as_reals(const Json& node, std::string_view field) {
  if (!node.is_array()) throw InputError(field_error(field, "expected an array of numbers"));
  std::vector<Real> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(as_real(node[i], std::string(field) + "[" + std::to_string(i) + "]"));
  }
  return out;
}

WeightVector as_weights(const Json& node, std::string_view field, std::size_t n) {
  auto w = as_reals(node, field);
  if (w.size() != n) {
    throw InputError(field_error(field, "length " + std::to_string(w.size()) + " does not match x (length " +
                                            std::to_string(n) + ")"));
  }
  try {
    return WeightVector(std::move(w));
  } catch (const InputError& e) {
    throw InputError(field_error(field, e.what()));
  }
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

Json parse_document(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    // byte is one past the offending character
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string what = e.what();
    if (auto pos = what.find("parse error"); pos != std::string::npos) what = what.substr(pos);
    throw InputError(std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
  }
}

std::string read_source(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

FunctionSpec parse_function(const Json& node, std::string_view field) {
  if (!node.is_object()) throw InputError(field_error(field, "expected an object with a 'kind'"));
  require_keys(node, field, {"kind", "exponent", "coefficient"});
  if (!node.contains("kind") || !node["kind"].is_string()) {
    throw InputError(field_error(std::string(field) + ".kind", "expected a string"));
  }
  const auto name = node["kind"].get<std::string>();
  const auto kind = parse_function_kind(name);
  if (!kind) {
    throw InputError(field_error(std::string(field) + ".kind",
                                 "unknown function '" + name + "' (power, square, exp, xlogx, abspower)"));
  }
  std::optional<Real> exponent;
  if (node.contains("exponent")) exponent = as_real(node["exponent"], std::string(field) + ".exponent");
  Real coefficient = 1;
  if (node.contains("coefficient")) coefficient = as_real(node["coefficient"], std::string(field) + ".coefficient");
  try {
    return FunctionSpec::make(*kind, exponent, coefficient);
  } catch (const InputError& e) {
    throw InputError(field_error(field, e.what()));
  }
}

ModulusSpec parse_modulus(const Json& node, std::string_view field) {
  if (!node.is_object()) throw InputError(field_error(field, "expected an object"));
  require_keys(node, field, {"kind", "coefficient", "exponent"});
  if (node.contains("kind") && node["kind"] != "power") {
    throw InputError(field_error(std::string(field) + ".kind", "only 'power' moduli are supported"));
  }
  for (const char* key : {"coefficient", "exponent"}) {
    if (!node.contains(key)) throw InputError(field_error(std::string(field) + "." + key, "missing"));
  }
  try {
    return ModulusSpec(as_real(node["coefficient"], std::string(field) + ".coefficient"),
                       as_real(node["exponent"], std::string(field) + ".exponent"));
  } catch (const InputError& e) {
    std::string what = e.what();
    if (what.rfind("field '", 0) == 0) throw;
    throw InputError(field_error(field, what));
  }
}

Interval parse_interval(const Json& node, std::string_view field) {
  const auto v = as_reals(node, field);
  if (v.size() != 2) throw InputError(field_error(field, "expected [a, b]"));
  if (!(v[0] < v[1])) throw InputError(field_error(field, "needs a < b"));
  return {v[0], v[1]};
}

Instance parse_instance(const Json& doc, std::string_view source) {
  try {
    if (!doc.is_object()) throw InputError("expected a JSON object at top level");
    require_keys(doc, "", {"x", "p", "q", "f", "phi", "interval"});
    if (!doc.contains("x")) throw InputError(field_error("x", "missing"));
    if (!doc.contains("f")) throw InputError(field_error("f", "missing"));
    auto x = as_reals(doc["x"], "x");
    if (x.size() < 2) throw InputError(field_error("x", "needs at least two points"));
    const std::size_t n = x.size();
    auto p = doc.contains("p") ? as_weights(doc["p"], "p", n) : WeightVector::uniform(n);
    auto q = doc.contains("q") ? as_weights(doc["q"], "q", n) : WeightVector::uniform(n);
    auto f = parse_function(doc["f"], "f");
    std::optional<ModulusSpec> phi;
    if (doc.contains("phi")) phi = parse_modulus(doc["phi"], "phi");
    Interval iv;
    if (doc.contains("interval")) {
      iv = parse_interval(doc["interval"], "interval");
    } else {
      const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
      if (!(*lo < *hi)) throw InputError(field_error("interval", "missing, and x has a single distinct point"));
      iv = {*lo, *hi};
    }
    return Instance(std::move(x), std::move(p), std::move(q), std::move(f), iv, phi);
  } catch (const InputError& e) {
    throw InputError(std::string(source) + ": " + e.what());
  }
}

Json to_json(const FunctionSpec& f) {
  Json j;
  j["kind"] = std::string(to_string(f.kind()));
  if (f.has_exponent()) j["exponent"] = number(f.exponent());
  if (f.coefficient() != 1) j["coefficient"] = number(f.coefficient());
  return j;
}

Json to_json(const ModulusSpec& phi) {
  return Json{{"kind", "power"}, {"coefficient", number(phi.coefficient())}, {"exponent", number(phi.exponent())}};
}

namespace {

Json reals(std::span<const Real> v) {
  Json a = Json::array();
  for (Real e : v) a.push_back(number(e));
  return a;
}

Json terms(const std::vector<Term>& ts) {
  Json a = Json::array();
  for (const auto& t : ts) a.push_back(Json{{"name", t.name}, {"value", number(t.value)}});
  return a;
}

}  // namespace

Json to_json(const Instance& inst) {
  Json j;
  j["x"] = reals(inst.x());
  j["p"] = reals(inst.p().values());
  j["q"] = reals(inst.q().values());
  j["f"] = to_json(inst.f());
  if (inst.phi()) j["phi"] = to_json(*inst.phi());
  j["interval"] = Json::array({number(inst.interval().lo), number(inst.interval().hi)});
  return j;
}

Json to_json(const Tolerance& tol) { return Json{{"abs", number(tol.abs)}, {"rel", number(tol.rel)}}; }

Json to_json(const BoundReport& r) {
  Json j;
  j["theorem"] = r.tag;
  j["verdict"] = std::string(to_string(r.verdict));
  Json chain = Json::array();
  for (std::size_t i = 0; i < r.chain.size(); ++i) {
    Json t{{"name", r.chain[i].name}, {"value", number(r.chain[i].value)}};
    if (i > 0) t["slack"] = number(r.slacks[i - 1]);
    chain.push_back(std::move(t));
  }
  j["chain"] = std::move(chain);
  j["min_slack"] = number(r.min_slack());
  j["scale"] = number(r.scale);
  if (!r.details.empty()) j["details"] = terms(r.details);
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

Json to_json(const RefinementTerms& r) {
  Json j;
  j["theorem"] = r.tag;
  j["verdict"] = std::string(to_string(r.verdict));
  j["gap"] = Json{{"name", r.gap.name}, {"value", number(r.gap.value)}};
  j["terms"] = terms(r.terms);
  j["sum"] = number(r.total());
  j["slack"] = number(r.slack);
  j["scale"] = number(r.scale);
  if (!r.details.empty()) j["details"] = terms(r.details);
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

Json to_json(const Certificate& c) {
  Json j;
  j["f"] = to_json(c.f);
  j["phi"] = to_json(c.phi);
  j["interval"] = Json::array({number(c.interval.lo), number(c.interval.hi)});
  switch (c.kind) {
    case CertificateKind::Definition: j["kind"] = "definition"; break;
    case CertificateKind::Gradient: j["kind"] = "gradient"; break;
    case CertificateKind::Assumed: j["kind"] = "assumed"; break;
  }
  if (c.kind == CertificateKind::Assumed) return j;
  j["grid"] = Json::array({c.grid.x_points, c.grid.y_points, c.grid.t_points});
  j["passed"] = c.passed;
  j["cells"] = c.cells;
  j["worst_slack"] = number(c.worst_slack);
  j["worst_x"] = number(c.worst_x);
  j["worst_y"] = number(c.worst_y);
  if (c.kind == CertificateKind::Definition) j["worst_t"] = number(c.worst_t);
  return j;
}

namespace {

std::string scalar(const Json& v, bool quote) {
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (!std::isfinite(d)) return std::isnan(d) ? "\"nan\"" : (d > 0 ? "\"inf\"" : "\"-inf\"");
    return format_real(d);
  }
  if (v.is_string() && !quote) return v.get<std::string>();
  if (v.is_null()) return quote ? "null" : "-";
  return v.dump();
}

bool is_scalar(const Json& v) { return !v.is_object() && !v.is_array(); }

bool all_scalars(const Json& a) { return std::all_of(a.begin(), a.end(), is_scalar); }

bool flat_objects(const Json& a) {
  return !a.empty() && std::all_of(a.begin(), a.end(), [](const Json& e) {
    return e.is_object() && std::all_of(e.begin(), e.end(), is_scalar);
  });
}

void emit_json(std::ostream& os, const Json& j, std::size_t indent) {
  const std::string pad(indent + 2, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      os << "{}";
      return;
    }
    os << "{\n";
    bool first = true;
    for (const auto& [key, value] : j.items()) {
      if (!first) os << ",\n";
      first = false;
      os << pad << Json(key).dump() << ": ";
      emit_json(os, value, indent + 2);
    }
    os << "\n" << std::string(indent, ' ') << "}";
  } else if (j.is_array()) {
    if (j.empty()) {
      os << "[]";
      return;
    }
    if (all_scalars(j)) {
      os << "[";
      for (std::size_t i = 0; i < j.size(); ++i) os << (i ? ", " : "") << scalar(j[i], true);
      os << "]";
      return;
    }
    os << "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) os << ",\n";
      os << pad;
      emit_json(os, j[i], indent + 2);
    }
    os << "\n" << std::string(indent, ' ') << "]";
  } else {
    os << scalar(j, true);
  }
}

void emit_table(std::ostream& os, const Json& rows, std::size_t indent) {
  std::vector<std::string> cols;
  for (const auto& row : rows) {
    for (const auto& [key, value] : row.items()) {
      if (std::find(cols.begin(), cols.end(), key) == cols.end()) cols.push_back(key);
    }
  }
  std::vector<std::vector<std::string>> cells;
  cells.push_back(cols);
  for (const auto& row : rows) {
    std::vector<std::string> line;
    for (const auto& c : cols) line.push_back(row.contains(c) ? scalar(row[c], false) : "");
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> width(cols.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  }
  for (const auto& line : cells) {
    std::string out(indent, ' ');
    for (std::size_t i = 0; i < line.size(); ++i) {
      out += line[i];
      if (i + 1 < line.size()) out += std::string(width[i] - line[i].size() + 2, ' ');
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    os << out << "\n";
  }
}

void emit_text(std::ostream& os, const Json& j, std::size_t indent) {
  const std::string pad(indent, ' ');
  for (const auto& [key, value] : j.items()) {
    if (is_scalar(value)) {
      os << pad << key << ": " << scalar(value, false) << "\n";
    } else if (value.is_array() && all_scalars(value)) {
      os << pad << key << ": ";
      for (std::size_t i = 0; i < value.size(); ++i) os << (i ? ", " : "") << scalar(value[i], false);
      os << "\n";
    } else if (value.is_array() && flat_objects(value)) {
      os << pad << key << ":\n";
      emit_table(os, value, indent + 2);
    } else if (value.is_array()) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        os << pad << key << "[" << i << "]:\n";
        if (value[i].is_object()) {
          emit_text(os, value[i], indent + 2);
        } else {
          os << pad << "  " << scalar(value[i], false) << "\n";
        }
      }
    } else {
      os << pad << key << ":\n";
      emit_text(os, value, indent + 2);
    }
  }
}

}  // namespace

void write_json(std::ostream& os, const Json& doc) {
  emit_json(os, doc, 0);
  os << "\n";
}

void write_text(std::ostream& os, const Json& doc) { emit_text(os, doc, 0); }

}  // namespace jensen::cli
