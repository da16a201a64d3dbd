#include "sheaflab/document.hpp"

#include <algorithm>
#include <cstdio>
#include <initializer_list>
#include <limits>
#include <string>
#include <utility>

#include <json.hpp>

#include "sheaflab/errors.hpp"
#include "sheaflab/format.hpp"

namespace sheaflab {

namespace {

using nlohmann::json;

[[noreturn]] void type_error(const std::string& path, const char* expected) {
  throw Error(Errc::SyntaxError,
              "field '" + path + "' must be " + expected);
}

std::string join_path(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed, ParseMode mode) {
  if (mode == ParseMode::Lenient) return;
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw Error(Errc::UnknownField,
                  "unknown field '" + join_path(path, item.key()) + "'");
    }
  }
}

const json& require_field(const json& obj, const char* key,
                          const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(Errc::MissingField,
                "missing field '" + join_path(path, key) + "'");
  }
  return *it;
}

std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) type_error(path, "a string");
  return v.get<std::string>();
}

int get_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) type_error(path, "an integer");
  auto wide = v.get<std::int64_t>();
  if (wide < std::numeric_limits<int>::min() ||
      wide > std::numeric_limits<int>::max()) {
    throw Error(Errc::SyntaxError,
                "field '" + path + "' is out of range");
  }
  return int(wide);
}

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) type_error(path, "a number");
  return v.get<double>();
}

const json& get_object(const json& v, const std::string& path) {
  if (!v.is_object()) type_error(path, "an object");
  return v;
}

const json& get_array(const json& v, const std::string& path) {
  if (!v.is_array()) type_error(path, "an array");
  return v;
}

Eigen::VectorXd get_vector(const json& v, const std::string& path) {
  const json& arr = get_array(v, path);
  Eigen::VectorXd out(Eigen::Index(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out(Eigen::Index(i)) =
        get_number(arr[i], path + "[" + std::to_string(i) + "]");
  }
  return out;
}

void parse_complex(const json& v, SheafDocument& doc, ParseMode mode) {
  const json& obj = get_object(v, "complex");
  check_keys(obj, "complex", {"cells", "relations"}, mode);

  const json& cells = get_array(require_field(obj, "cells", "complex"),
                                "complex.cells");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::string path = "complex.cells[" + std::to_string(i) + "]";
    const json& entry = get_object(cells[i], path);
    check_keys(entry, path, {"id", "rank"}, mode);
    Cell c;
    c.id = get_string(require_field(entry, "id", path), path + ".id");
    c.rank = get_int(require_field(entry, "rank", path), path + ".rank");
    doc.cells.push_back(std::move(c));
  }

  const json& rels = get_array(require_field(obj, "relations", "complex"),
                               "complex.relations");
  for (std::size_t i = 0; i < rels.size(); ++i) {
    std::string path = "complex.relations[" + std::to_string(i) + "]";
    const json& entry = get_object(rels[i], path);
    check_keys(entry, path, {"upper", "lower", "slot"}, mode);
    CoveringRelation r;
    r.upper =
        get_string(require_field(entry, "upper", path), path + ".upper");
    r.lower =
        get_string(require_field(entry, "lower", path), path + ".lower");
    if (auto it = entry.find("slot"); it != entry.end()) {
      r.slot = get_string(*it, path + ".slot");
    }
    doc.relations.push_back(std::move(r));
  }
}

void parse_stalks(const json& v, SheafDocument& doc) {
  const json& obj = get_object(v, "stalks");
  for (const auto& item : obj.items()) {
    doc.stalks[item.key()] =
        get_int(item.value(), "stalks." + item.key());
  }
}

Eigen::MatrixXd parse_matrix(const json& v, const CoveringRelation& rel,
                             const std::string& path) {
  const json& rows = get_array(v, path);
  Eigen::Index row_count = Eigen::Index(rows.size());
  Eigen::Index col_count = 0;
  std::vector<Eigen::VectorXd> parsed;
  parsed.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::string row_path = path + "[" + std::to_string(r) + "]";
    Eigen::VectorXd row = get_vector(rows[r], row_path);
    if (r == 0) {
      col_count = row.size();
    } else if (row.size() != col_count) {
      char buf[64];
      std::snprintf(buf, sizeof buf,
                    "row %zu has %td entries, expected %td", r,
                    std::ptrdiff_t(row.size()), std::ptrdiff_t(col_count));
      throw Error(Errc::BadMatrixShape,
                  "matrix for relation " + relation_label(rel) +
                      " has ragged rows: " + buf);
    }
    parsed.push_back(std::move(row));
  }
  Eigen::MatrixXd m(row_count, col_count);
  for (Eigen::Index r = 0; r < row_count; ++r) {
    m.row(r) = parsed[std::size_t(r)].transpose();
  }
  return m;
}

void parse_maps(const json& v, SheafDocument& doc, ParseMode mode) {
  const json& arr = get_array(v, "maps");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string path = "maps[" + std::to_string(i) + "]";
    const json& entry = get_object(arr[i], path);
    check_keys(entry, path, {"upper", "lower", "slot", "matrix"}, mode);
    RestrictionMap m;
    m.rel.upper =
        get_string(require_field(entry, "upper", path), path + ".upper");
    m.rel.lower =
        get_string(require_field(entry, "lower", path), path + ".lower");
    if (auto it = entry.find("slot"); it != entry.end()) {
      m.rel.slot = get_string(*it, path + ".slot");
    }
    m.matrix = parse_matrix(require_field(entry, "matrix", path), m.rel,
                            path + ".matrix");
    doc.maps.push_back(std::move(m));
  }
}

void parse_sections(const json& v, SheafDocument& doc, ParseMode mode) {
  const json& obj = get_object(v, "sections");
  for (const auto& item : obj.items()) {
    std::string path = "sections." + item.key();
    const json& entry = get_object(item.value(), path);
    check_keys(entry, path, {"kind", "values"}, mode);
    DocumentSection s;
    s.kind = get_string(require_field(entry, "kind", path), path + ".kind");
    if (s.kind != "section" && s.kind != "assignment") {
      throw Error(Errc::SyntaxError,
                  "field '" + path +
                      ".kind' must be \"section\" or \"assignment\"");
    }
    const json& values = get_object(require_field(entry, "values", path),
                                    path + ".values");
    for (const auto& value : values.items()) {
      s.values[value.key()] =
          get_vector(value.value(), path + ".values." + value.key());
    }
    doc.sections[item.key()] = std::move(s);
  }
}

void parse_interval(const json& v, SheafDocument& doc, ParseMode mode) {
  const json& obj = get_object(v, "interval");
  check_keys(obj, "interval", {"domain", "step", "intervals"}, mode);

  const json& domain = get_array(require_field(obj, "domain", "interval"),
                                 "interval.domain");
  if (domain.size() != 2) {
    type_error("interval.domain", "an array of two numbers");
  }
  doc.cover.lo = get_number(domain[0], "interval.domain[0]");
  doc.cover.hi = get_number(domain[1], "interval.domain[1]");
  doc.cover.step = get_number(require_field(obj, "step", "interval"),
                              "interval.step");

  const json& ivs = get_array(require_field(obj, "intervals", "interval"),
                              "interval.intervals");
  for (std::size_t i = 0; i < ivs.size(); ++i) {
    std::string path = "interval.intervals[" + std::to_string(i) + "]";
    const json& pair = get_array(ivs[i], path);
    if (pair.size() != 2) type_error(path, "an array of two numbers");
    OpenInterval iv;
    iv.lo = get_number(pair[0], path + "[0]");
    iv.hi = get_number(pair[1], path + "[1]");
    doc.cover.intervals.push_back(iv);
  }
}

void canonicalize(SheafDocument& doc) {
  std::sort(doc.cells.begin(), doc.cells.end(),
            [](const Cell& a, const Cell& b) { return a.id < b.id; });
  std::sort(doc.relations.begin(), doc.relations.end());
  std::sort(doc.maps.begin(), doc.maps.end(),
            [](const RestrictionMap& a, const RestrictionMap& b) {
              return a.rel < b.rel;
            });
}

std::string escape(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  out += '"';
  return out;
}

std::string relation_fields(const CoveringRelation& rel) {
  return "\"upper\": " + escape(rel.upper) + ", \"lower\": " +
         escape(rel.lower) + ", \"slot\": " + escape(rel.slot);
}

std::string render_complex(const SheafDocument& doc) {
  std::string out = "  \"complex\": {\n    \"cells\": [";
  for (std::size_t i = 0; i < doc.cells.size(); ++i) {
    out += i ? ",\n      " : "\n      ";
    out += "{\"id\": " + escape(doc.cells[i].id) +
           ", \"rank\": " + std::to_string(doc.cells[i].rank) + "}";
  }
  out += doc.cells.empty() ? "]" : "\n    ]";
  out += ",\n    \"relations\": [";
  for (std::size_t i = 0; i < doc.relations.size(); ++i) {
    out += i ? ",\n      " : "\n      ";
    out += "{" + relation_fields(doc.relations[i]) + "}";
  }
  out += doc.relations.empty() ? "]" : "\n    ]";
  out += "\n  }";
  return out;
}

std::string render_stalks(const SheafDocument& doc) {
  std::string out = "  \"stalks\": {";
  bool first = true;
  for (const auto& [id, dim] : doc.stalks) {
    if (!first) out += ", ";
    first = false;
    out += escape(id) + ": " + std::to_string(dim);
  }
  out += "}";
  return out;
}

std::string render_maps(const SheafDocument& doc) {
  std::string out = "  \"maps\": [";
  for (std::size_t i = 0; i < doc.maps.size(); ++i) {
    const RestrictionMap& m = doc.maps[i];
    out += i ? ",\n    {" : "\n    {";
    out += "\n      \"upper\": " + escape(m.rel.upper) + ",";
    out += "\n      \"lower\": " + escape(m.rel.lower) + ",";
    out += "\n      \"slot\": " + escape(m.rel.slot) + ",";
    out += "\n      \"matrix\": [";
    for (Eigen::Index r = 0; r < m.matrix.rows(); ++r) {
      out += r ? ",\n        " : "\n        ";
      out += format_vector(m.matrix.row(r).transpose());
    }
    out += m.matrix.rows() == 0 ? "]" : "\n      ]";
    out += "\n    }";
  }
  out += doc.maps.empty() ? "]" : "\n  ]";
  return out;
}

std::string render_sections(const SheafDocument& doc) {
  std::string out = "  \"sections\": {";
  bool first_section = true;
  for (const auto& [name, s] : doc.sections) {
    out += first_section ? "\n    " : ",\n    ";
    first_section = false;
    out += escape(name) + ": {\n      \"kind\": " + escape(s.kind) +
           ",\n      \"values\": {";
    bool first_value = true;
    for (const auto& [id, v] : s.values) {
      out += first_value ? "\n        " : ",\n        ";
      first_value = false;
      out += escape(id) + ": " + format_vector(v);
    }
    out += s.values.empty() ? "}" : "\n      }";
    out += "\n    }";
  }
  out += doc.sections.empty() ? "}" : "\n  }";
  return out;
}

std::string render_interval(const SheafDocument& doc) {
  std::string out = "  \"interval\": {\n    \"domain\": [" +
                    format_number(doc.cover.lo) + ", " +
                    format_number(doc.cover.hi) + "],\n    \"step\": " +
                    format_number(doc.cover.step) +
                    ",\n    \"intervals\": [";
  for (std::size_t i = 0; i < doc.cover.intervals.size(); ++i) {
    out += i ? ",\n      " : "\n      ";
    out += "[" + format_number(doc.cover.intervals[i].lo) + ", " +
           format_number(doc.cover.intervals[i].hi) + "]";
  }
  out += doc.cover.intervals.empty() ? "]" : "\n    ]";
  out += "\n  }";
  return out;
}

bool same_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return a.size() == 0 || (a.array() == b.array()).all();
}

bool same_vector(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) return false;
  return a.size() == 0 || (a.array() == b.array()).all();
}

const DocumentSection& find_section(const SheafDocument& doc,
                                    const std::string& name) {
  auto it = doc.sections.find(name);
  if (it == doc.sections.end()) {
    throw Error(Errc::MissingField,
                "document has no section named '" + name + "'");
  }
  return it->second;
}

}  // namespace

bool operator==(const DocumentSection& a, const DocumentSection& b) {
  if (a.kind != b.kind || a.values.size() != b.values.size()) return false;
  auto bi = b.values.begin();
  for (auto ai = a.values.begin(); ai != a.values.end(); ++ai, ++bi) {
    if (ai->first != bi->first || !same_vector(ai->second, bi->second)) {
      return false;
    }
  }
  return true;
}

bool operator==(const SheafDocument& a, const SheafDocument& b) {
  if (a.format_version != b.format_version || a.title != b.title ||
      a.notes != b.notes || a.has_complex != b.has_complex ||
      a.has_interval != b.has_interval) {
    return false;
  }
  if (a.cells != b.cells || a.relations != b.relations ||
      a.stalks != b.stalks) {
    return false;
  }
  if (a.maps.size() != b.maps.size()) return false;
  for (std::size_t i = 0; i < a.maps.size(); ++i) {
    if (a.maps[i].rel != b.maps[i].rel ||
        !same_matrix(a.maps[i].matrix, b.maps[i].matrix)) {
      return false;
    }
  }
  if (a.sections != b.sections) return false;
  if (a.has_interval) {
    if (a.cover.lo != b.cover.lo || a.cover.hi != b.cover.hi ||
        a.cover.step != b.cover.step ||
        a.cover.intervals.size() != b.cover.intervals.size()) {
      return false;
    }
    for (std::size_t i = 0; i < a.cover.intervals.size(); ++i) {
      if (a.cover.intervals[i].lo != b.cover.intervals[i].lo ||
          a.cover.intervals[i].hi != b.cover.intervals[i].hi) {
        return false;
      }
    }
  }
  return true;
}

SheafDocument parse_sheaf_document(const std::string& text, ParseMode mode) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::SyntaxError, e.what());
  }
  if (!j.is_object()) {
    throw Error(Errc::SyntaxError, "document root must be an object");
  }
  check_keys(j, "",
             {"format_version", "title", "notes", "complex", "stalks",
              "maps", "sections", "interval"},
             mode);

  SheafDocument doc;
  doc.format_version =
      get_int(require_field(j, "format_version", ""), "format_version");
  if (doc.format_version != 1) {
    throw Error(Errc::SyntaxError,
                "unsupported format_version " +
                    std::to_string(doc.format_version));
  }
  if (auto it = j.find("title"); it != j.end()) {
    doc.title = get_string(*it, "title");
  }
  if (auto it = j.find("notes"); it != j.end()) {
    doc.notes = get_string(*it, "notes");
  }

  if (j.contains("interval")) {
    for (const char* key : {"complex", "stalks", "maps"}) {
      if (j.contains(key)) {
        throw Error(Errc::UnknownField,
                    std::string("field '") + key +
                        "' is not allowed in an interval document");
      }
    }
    parse_interval(j.at("interval"), doc, mode);
    doc.has_interval = true;
  } else {
    parse_complex(require_field(j, "complex", ""), doc, mode);
    parse_stalks(require_field(j, "stalks", ""), doc);
    parse_maps(require_field(j, "maps", ""), doc, mode);
    doc.has_complex = true;
  }

  if (auto it = j.find("sections"); it != j.end()) {
    parse_sections(*it, doc, mode);
  }

  canonicalize(doc);
  return doc;
}

std::string serialize_sheaf_document(const SheafDocument& input) {
  SheafDocument doc = input;
  canonicalize(doc);

  std::vector<std::string> stanzas;
  stanzas.push_back("  \"format_version\": " +
                    std::to_string(doc.format_version));
  if (!doc.title.empty()) {
    stanzas.push_back("  \"title\": " + escape(doc.title));
  }
  if (!doc.notes.empty()) {
    stanzas.push_back("  \"notes\": " + escape(doc.notes));
  }
  if (doc.has_complex) {
    stanzas.push_back(render_complex(doc));
    stanzas.push_back(render_stalks(doc));
    stanzas.push_back(render_maps(doc));
  }
  if (!doc.sections.empty()) {
    stanzas.push_back(render_sections(doc));
  }
  if (doc.has_interval) {
    stanzas.push_back(render_interval(doc));
  }

  std::string out = "{\n";
  for (std::size_t i = 0; i < stanzas.size(); ++i) {
    if (i) out += ",\n";
    out += stanzas[i];
  }
  out += "\n}\n";
  return out;
}

bool is_interval_document(const SheafDocument& doc) {
  return doc.has_interval;
}

Complex document_complex(const SheafDocument& doc) {
  if (!doc.has_complex) {
    throw Error(Errc::MissingField, "document has no complex stanza");
  }
  return build_complex(doc.cells, doc.relations);
}

Sheaf document_sheaf(const SheafDocument& doc) {
  if (doc.has_interval) return document_interval(doc).sheaf;
  return build_sheaf(document_complex(doc), doc.stalks, doc.maps);
}

IntervalSheaf document_interval(const SheafDocument& doc) {
  if (!doc.has_interval) {
    throw Error(Errc::MissingField, "document has no interval stanza");
  }
  return build_interval_sheaf(doc.cover);
}

Section document_section(const SheafDocument& doc, const std::string& name) {
  const DocumentSection& stored = find_section(doc, name);
  if (stored.kind != "section") {
    throw Error(Errc::SyntaxError,
                "'" + name + "' is stored as a node assignment, not a "
                             "full section");
  }
  Section s;
  s.values = stored.values;
  return s;
}

NodeAssignment document_assignment(const SheafDocument& doc,
                                   const std::string& name) {
  const DocumentSection& stored = find_section(doc, name);
  if (stored.kind != "assignment") {
    throw Error(Errc::SyntaxError,
                "'" + name + "' is stored as a full section, not a node "
                             "assignment");
  }
  NodeAssignment a;
  a.values = stored.values;
  return a;
}

}  // namespace sheaflab
