#pragma once

#include <json.hpp>

#include <cstddef>
#include <map>
#include <string>
#include <utility>

#include "monodromic/core.hpp"
#include "monodromic/errors.hpp"
#include "monodromic/filtration.hpp"
#include "monodromic/gluing.hpp"
#include "monodromic/matrix.hpp"
#include "monodromic/mhm.hpp"
#include "monodromic/rational.hpp"
#include "monodromic/subspace.hpp"

// JSON document format for the three persistent object kinds.
//
// Every document is an envelope {"kind", "payload", "version"}.  Emission is
// canonical: object keys are sorted, matrices are row-major arrays of exact
// rational strings, subspaces are written by their canonical reduced basis,
// and the text ends in a single newline.  Parsing the emission of any object
// reproduces it bit for bit.

namespace monodromic {

using Json = nlohmann::json;

inline constexpr const char* kFormatVersion = "1.0.0";

inline constexpr const char* kKindCore = "core";
inline constexpr const char* kKindGluing = "gluing";
inline constexpr const char* kKindMMHM = "mmhm";

namespace detail {

// ---- emission -------------------------------------------------------------

inline Json json_of_matrix(const RationalMatrix& m) {
  Json entries = Json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) entries.push_back(rational_to_string(m.at(i, j)));
  return Json{{"cols", m.cols()}, {"entries", std::move(entries)}, {"rows", m.rows()}};
}

inline Json json_of_filtration(const Filtration& f) {
  Json jumps = Json::array();
  for (const auto& [index, space] : f.jumps())
    jumps.push_back(Json{{"generators", json_of_matrix(space.basis())}, {"index", index}});
  return Json{{"ambient", f.ambient()}, {"jumps", std::move(jumps)}};
}

inline Json json_of_mhs(const MHSModel& m) {
  return Json{{"dim", m.dim},
              {"hodge", json_of_filtration(m.filt.F)},
              {"twist", m.twist_label},
              {"weight", json_of_filtration(m.filt.W)}};
}

inline Json json_of_component(const CycleComponent& c) {
  return Json{{"mhs", json_of_mhs(c.mhs)}, {"nilp", json_of_matrix(c.nilp)}};
}

inline Json json_of_core(const CoreData& m) {
  Json comps = Json::array();
  for (const auto& [alpha, comp] : m.components())
    comps.push_back(
        Json{{"alpha", rational_to_string(alpha)}, {"nilp", json_of_matrix(comp.nilp)}});
  return Json{{"components", std::move(comps)},
              {"u", json_of_matrix(m.u())},
              {"w", json_of_matrix(m.w())}};
}

inline Json json_of_gluing(const GluingDatum& g) {
  Json psi = Json::array();
  for (const auto& [alpha, comp] : g.psi) {
    Json entry = json_of_component(comp);
    entry["alpha"] = rational_to_string(alpha);
    psi.push_back(std::move(entry));
  }
  return Json{{"c", json_of_matrix(g.c)},
              {"phi", json_of_component(g.phi)},
              {"psi", std::move(psi)},
              {"v", json_of_matrix(g.v)}};
}

inline Json json_of_mmhm(const MonodromicMHM& m) {
  Json filts = Json::array();
  for (const auto& [alpha, pair] : m.filt)
    filts.push_back(Json{{"alpha", rational_to_string(alpha)},
                         {"hodge", json_of_filtration(pair.F)},
                         {"weight", json_of_filtration(pair.W)}});
  return Json{{"core", json_of_core(m.core)},
              {"filtrations", std::move(filts)},
              {"polarizable", m.polarizable}};
}

inline std::string emit_envelope(const std::string& kind, Json payload) {
  Json envelope{{"kind", kind}, {"payload", std::move(payload)}, {"version", kFormatVersion}};
  return envelope.dump(2) + "\n";
}

// ---- field access; every failure names the offending field -----------------

inline const Json& require_field(const Json& j, const std::string& field) {
  if (!j.is_object()) throw SchemaError(field + ": enclosing value is not an object");
  auto it = j.find(field);
  if (it == j.end()) throw SchemaError(field + ": missing");
  return *it;
}

inline long long int_field(const Json& j, const std::string& field) {
  const Json& v = require_field(j, field);
  if (!v.is_number_integer()) throw SchemaError(field + ": not an integer");
  return v.get<long long>();
}

inline std::string string_field(const Json& j, const std::string& field) {
  const Json& v = require_field(j, field);
  if (!v.is_string()) throw SchemaError(field + ": not a string");
  return v.get<std::string>();
}

inline bool bool_field(const Json& j, const std::string& field) {
  const Json& v = require_field(j, field);
  if (!v.is_boolean()) throw SchemaError(field + ": not a boolean");
  return v.get<bool>();
}

inline const Json& array_field(const Json& j, const std::string& field) {
  const Json& v = require_field(j, field);
  if (!v.is_array()) throw SchemaError(field + ": not an array");
  return v;
}

inline Rational rational_field(const Json& j, const std::string& field) {
  return parse_rational(string_field(j, field));
}

inline RationalMatrix matrix_field(const Json& j, const std::string& field) {
  const Json& v = require_field(j, field);
  if (!v.is_object()) throw SchemaError(field + ": not a matrix object");
  long long rows = int_field(v, "rows");
  long long cols = int_field(v, "cols");
  if (rows < 0 || cols < 0) throw SchemaError(field + ": negative shape");
  const Json& entries = array_field(v, "entries");
  if (static_cast<long long>(entries.size()) != rows * cols)
    throw SchemaError(field + ": entry count does not match the shape");
  RationalMatrix m(static_cast<int>(rows), static_cast<int>(cols));
  int idx = 0;
  for (const Json& e : entries) {
    if (!e.is_string()) throw SchemaError(field + ": entries must be rational strings");
    m.at(idx / static_cast<int>(cols), idx % static_cast<int>(cols)) =
        parse_rational(e.get<std::string>());
    ++idx;
  }
  return m;
}

inline Filtration filtration_field(const Json& j, const std::string& field) {
  const Json& v = require_field(j, field);
  if (!v.is_object()) throw SchemaError(field + ": not a filtration object");
  long long ambient = int_field(v, "ambient");
  if (ambient < 0) throw SchemaError(field + ": negative ambient dimension");
  std::map<long long, Subspace> levels;
  for (const Json& jump : array_field(v, "jumps")) {
    long long index = int_field(jump, "index");
    RationalMatrix gen = matrix_field(jump, "generators");
    if (gen.rows() != static_cast<int>(ambient))
      throw SchemaError(field + ": generators have the wrong ambient dimension");
    if (levels.count(index)) throw SchemaError(field + ": duplicate jump index");
    levels[index] = Subspace::span(gen);
  }
  try {
    return Filtration::from_levels(static_cast<int>(ambient), levels);
  } catch (const Error& e) {
    throw SchemaError(field + ": " + e.what());
  }
}

inline MHSModel mhs_field(const Json& j, const std::string& field) {
  const Json& v = require_field(j, field);
  long long dim = int_field(v, "dim");
  if (dim < 0) throw SchemaError("dim: negative");
  Filtration hodge = filtration_field(v, "hodge");
  Filtration weight = filtration_field(v, "weight");
  if (hodge.ambient() != static_cast<int>(dim) || weight.ambient() != static_cast<int>(dim))
    throw SchemaError(field + ": filtration ambient does not match dim");
  MHSModel out;
  out.dim = static_cast<int>(dim);
  out.filt = FiltrationPair{hodge, weight};
  out.twist_label = int_field(v, "twist");
  return out;
}

inline CycleComponent component_field(const Json& j, const std::string& field) {
  const Json& v = require_field(j, field);
  return CycleComponent{mhs_field(v, "mhs"), matrix_field(v, "nilp")};
}

// ---- payload parsers --------------------------------------------------------

inline CoreData core_of_json(const Json& payload) {
  CoreData m;
  for (const Json& entry : array_field(payload, "components")) {
    Rational alpha = rational_field(entry, "alpha");
    if (alpha < Rational(-1) || alpha > Rational(0)) throw SchemaError("alpha out of range");
    if (m.dim(alpha) > 0) throw SchemaError("components: duplicate alpha");
    RationalMatrix nilp = matrix_field(entry, "nilp");
    if (!nilp.is_square()) throw SchemaError("nilp: not square");
    if (nilp.rows() > 0) m.set_component(alpha, nilp);
  }
  m.set_connectors(matrix_field(payload, "u"), matrix_field(payload, "w"));
  return m;
}

inline GluingDatum gluing_of_json(const Json& payload) {
  GluingDatum g;
  for (const Json& entry : array_field(payload, "psi")) {
    Rational alpha = rational_field(entry, "alpha");
    if (alpha <= Rational(-1) || alpha > Rational(0)) throw SchemaError("alpha out of range");
    if (g.psi.count(alpha)) throw SchemaError("psi: duplicate alpha");
    g.psi[alpha] = CycleComponent{mhs_field(entry, "mhs"), matrix_field(entry, "nilp")};
  }
  g.phi = component_field(payload, "phi");
  g.c = matrix_field(payload, "c");
  g.v = matrix_field(payload, "v");
  return g;
}

inline MonodromicMHM mmhm_of_json(const Json& payload) {
  MonodromicMHM m;
  m.core = core_of_json(require_field(payload, "core"));
  for (const Json& entry : array_field(payload, "filtrations")) {
    Rational alpha = rational_field(entry, "alpha");
    if (alpha < Rational(-1) || alpha > Rational(0)) throw SchemaError("alpha out of range");
    if (m.filt.count(alpha)) throw SchemaError("filtrations: duplicate alpha");
    m.filt[alpha] =
        FiltrationPair{filtration_field(entry, "hodge"), filtration_field(entry, "weight")};
  }
  m.polarizable = bool_field(payload, "polarizable");
  return m;
}

inline void check_version(const std::string& v) {
  int dots = 0;
  bool ok = !v.empty();
  bool digit_before = false;
  for (char ch : v) {
    if (ch == '.') {
      if (!digit_before) ok = false;
      ++dots;
      digit_before = false;
    } else if (ch >= '0' && ch <= '9') {
      digit_before = true;
    } else {
      ok = false;
    }
  }
  if (!ok || dots != 2 || !digit_before)
    throw SchemaError("version: malformed version string '" + v + "'");
  if (v != kFormatVersion) throw SchemaError("version: unsupported version '" + v + "'");
}

inline std::pair<int, int> line_col_of(const std::string& text, std::size_t byte) {
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace detail

// ---- public surface ---------------------------------------------------------

inline std::string emit_document(const CoreData& m) {
  return detail::emit_envelope(kKindCore, detail::json_of_core(m));
}

inline std::string emit_document(const GluingDatum& g) {
  return detail::emit_envelope(kKindGluing, detail::json_of_gluing(g));
}

inline std::string emit_document(const MonodromicMHM& m) {
  return detail::emit_envelope(kKindMMHM, detail::json_of_mmhm(m));
}

// A parsed document: `kind` says which member carries the payload.
struct Document {
  std::string kind;
  CoreData core;
  GluingDatum gluing;
  MonodromicMHM mmhm;
};

inline Document parse_document(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    auto [line, col] = detail::line_col_of(text, e.byte);
    throw ParseError(e.what(), line, col);
  }
  detail::check_version(detail::string_field(j, "version"));
  Document doc;
  doc.kind = detail::string_field(j, "kind");
  const Json& payload = detail::require_field(j, "payload");
  if (doc.kind == kKindCore) {
    doc.core = detail::core_of_json(payload);
  } else if (doc.kind == kKindGluing) {
    doc.gluing = detail::gluing_of_json(payload);
  } else if (doc.kind == kKindMMHM) {
    doc.mmhm = detail::mmhm_of_json(payload);
  } else {
    throw SchemaError("kind: unknown document kind '" + doc.kind + "'");
  }
  return doc;
}

}  // namespace monodromic
