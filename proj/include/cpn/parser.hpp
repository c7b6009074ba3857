#ifndef CPN_PARSER_HPP
#define CPN_PARSER_HPP

#include <string>
#include <string_view>
#include <vector>

#include "cpn/catalog.hpp"

namespace cpn {

struct ParseDiagnostic {
    int line = 1;  // 1-based line of the input the diagnostic refers to
    Severity severity = Severity::warning;
    std::string message;

    bool operator==(const ParseDiagnostic&) const = default;
};

struct ParseResult {
    Catalog catalog;
    std::vector<ParseDiagnostic> diagnostics;
};

/// Parse the canonical plain-text catalogue format.
///
/// Line-oriented grammar:
///   - "CODE Title" starts a course entry (CODE = letters + token with a digit);
///   - lines starting with "Prerequisites:", "Corequisites:" or
///     "Cross-listings:" (any indentation, case-insensitive) attach to the
///     most recent course; a value ending in a dangling connective
///     ("and"/"or"/"either") continues on the next line;
///   - "#" lines are comments, blank lines separate entries;
///   - anything else is a section label (department heading).
///
/// Unrecognized requirement phrases ("Junior or Senior standing") are stored
/// in the record's soft_rules with a warning diagnostic. Throws ParseError on
/// an attribute line before any course heading or a duplicate course code.
ParseResult parse_catalog_text(std::string_view text);

/// Parse a prerequisite clause: conjuncts joined by "and", each either a
/// single code, "either X or Y [or Z...]" or "X or Y [or Z...]". Title text
/// after a code is ignored up to the next connective. Throws
/// ClauseSyntaxError on nested "either", unbalanced connectives, duplicate
/// alternatives, or a conjunct with no course code.
RequirementClause parse_clause(std::string_view raw);

/// Parse the structured interchange document (JSON):
///   {source_label: string,
///    records: [{code, title, prerequisites: [[string]],
///               corequisites: [{target, mode: "hard"|"soft"}],
///               cross_listings: [string], soft_rules: [string]}]}
/// Throws SchemaViolationError naming the offending field and record.
ParseResult parse_catalog_structured(std::string_view bytes);

/// Serialize to the structured interchange document. The output re-parses to
/// an equal Catalog.
std::string serialize_catalog_structured(const Catalog& catalog);

}  // namespace cpn

#endif
