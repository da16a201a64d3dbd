#ifndef SHEAFLAB_DOCUMENT_HPP
#define SHEAFLAB_DOCUMENT_HPP

#include <map>
#include <string>
#include <vector>

#include "sheaflab/complex.hpp"
#include "sheaflab/interval.hpp"
#include "sheaflab/sections.hpp"
#include "sheaflab/sheaf.hpp"

namespace sheaflab {

/// Strict parsing rejects unknown fields; lenient parsing skips them.
enum class ParseMode { Strict, Lenient };

/// Named bundle of stalk values stored in a document: a full per-cell
/// section or a maximal-cells-only node assignment.
struct DocumentSection {
  std::string kind;  // "section" or "assignment"
  std::map<std::string, Eigen::VectorXd> values;
};

/// In-memory form of a sheaf file. Carries either an explicit complex with
/// stalks and restriction maps, or an interval stanza describing a grid
/// cover whose sheaf is derived; never both. Parsing canonicalizes ordering
/// (cells by id, relations and maps by (upper, lower, slot)), so
/// parse -> serialize -> parse is the identity.
struct SheafDocument {
  int format_version = 1;
  std::string title;  // optional, empty when absent
  std::string notes;  // optional, empty when absent

  bool has_complex = false;
  std::vector<Cell> cells;
  std::vector<CoveringRelation> relations;
  std::map<std::string, int> stalks;
  std::vector<RestrictionMap> maps;

  std::map<std::string, DocumentSection> sections;

  bool has_interval = false;
  GridCover cover;
};

bool operator==(const DocumentSection& a, const DocumentSection& b);
bool operator==(const SheafDocument& a, const SheafDocument& b);

/// Parses the textual sheaf format (see docs/file-format.md). Throws
/// SyntaxError with position info for malformed text or wrong value types,
/// UnknownField (strict mode) with the field path, MissingField, and
/// BadMatrixShape naming the offending relation.
SheafDocument parse_sheaf_document(const std::string& text,
                                   ParseMode mode = ParseMode::Strict);

/// Canonical serialization: fixed key order, two-space indent, numbers to
/// 12 significant digits. Inverse of parse_sheaf_document on documents whose
/// numbers carry at most 12 significant decimal digits.
std::string serialize_sheaf_document(const SheafDocument& doc);

bool is_interval_document(const SheafDocument& doc);

/// Builds the complex of an explicit-complex document.
Complex document_complex(const SheafDocument& doc);

/// Builds the sheaf the document denotes: build_sheaf for explicit
/// documents, the derived cover sheaf for interval documents.
Sheaf document_sheaf(const SheafDocument& doc);

/// Builds the sampled cover model of an interval document; throws
/// MissingField when the document has no interval stanza.
IntervalSheaf document_interval(const SheafDocument& doc);

/// Looks up a stored section by name; throws MissingField if the name is
/// absent and SyntaxError if it is stored with the other kind.
Section document_section(const SheafDocument& doc, const std::string& name);
NodeAssignment document_assignment(const SheafDocument& doc,
                                   const std::string& name);

}  // namespace sheaflab

#endif
