#ifndef CPN_CATALOG_HPP
#define CPN_CATALOG_HPP

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cpn {

/// A course identifier such as "BIOL 110": an uppercase alphabetic subject
/// and an alphanumeric number token ("310", "200L", ...).
struct CourseCode {
    std::string subject;
    std::string number;

    auto operator<=>(const CourseCode&) const = default;

    /// Rendered form, "BIOL 110".
    std::string str() const { return subject + " " + number; }
};

/// Normalize a raw code: trim, collapse internal whitespace, uppercase.
/// Throws MalformedCodeError unless the input is "<letters> <alnum token>".
CourseCode normalize_code(std::string_view raw);

/// Non-throwing variant; nullopt on malformed input.
std::optional<CourseCode> try_normalize_code(std::string_view raw);

/// One disjunction group of a prerequisite rule: any listed course satisfies
/// the group.
struct OrGroup {
    std::vector<CourseCode> alternatives;

    bool operator==(const OrGroup&) const = default;
};

/// A full prerequisite rule: every group must be satisfied (AND of ORs).
/// No conjuncts means no prerequisites.
struct RequirementClause {
    std::vector<OrGroup> conjuncts;

    bool operator==(const RequirementClause&) const = default;

    /// Codes in textual order, groups flattened.
    std::vector<CourseCode> flatten() const;
};

/// Hard = coregistration required; soft = prior credit also accepted.
enum class CoreqStrength { hard, soft };

struct CoreqDecl {
    CourseCode target;
    CoreqStrength mode = CoreqStrength::hard;

    bool operator==(const CoreqDecl&) const = default;
};

/// One catalogue entry.
struct CourseRecord {
    CourseCode code;
    std::string title;
    RequirementClause prerequisites;
    std::vector<CoreqDecl> corequisites;
    std::vector<CourseCode> cross_listings;
    /// Diffuse requirements ("Junior or Senior standing"), captured verbatim
    /// and never turned into arcs.
    std::vector<std::string> soft_rules;

    bool operator==(const CourseRecord&) const = default;
};

struct Catalog {
    std::vector<CourseRecord> records;
    std::string source_label;

    bool operator==(const Catalog&) const = default;

    /// Record with the given code, or nullptr.
    const CourseRecord* find(const CourseCode& code) const;
};

enum class Severity { error, warning };

struct Finding {
    Severity severity = Severity::warning;
    CourseCode code;     // the code the finding is about
    std::string message;

    bool operator==(const Finding&) const = default;
};

using ValidationReport = std::vector<Finding>;

/// Referential-integrity check: duplicate codes and self-references are
/// errors, references to codes with no record are warnings. An empty report
/// means the catalogue is clean. Findings are data; this never throws.
ValidationReport validate_catalog(const Catalog& catalog);

}  // namespace cpn

#endif
