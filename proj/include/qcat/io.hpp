#pragma once

#include <string>

#include "qcat/diagram.hpp"

namespace qcat {

struct ParseError : QcatError {
    using QcatError::QcatError;
};

/// Parses a version-1 diagram document. Structural errors (bad JSON, unknown
/// kinds, malformed endpoints) raise ParseError; semantic defects are left to
/// validate().
Diagram parse_document(const std::string& text);

/// Serializes a diagram as a version-1 JSON document. Node and wire order is
/// fixed by id, so serialization is byte-stable. With `elide_unit_wires`,
/// dim-1 identity wires running straight from an input slot to an output slot
/// are dropped (boundary slots renumber accordingly); internal dim-1 wires
/// stay explicit.
std::string serialize_document(const Diagram& d, bool elide_unit_wires = true);

/// Deterministic Graphviz rendering; inputs rank left, outputs rank right.
std::string export_dot(const Diagram& d);

}  // namespace qcat
