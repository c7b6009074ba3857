#include "cpn/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "cpn/errors.hpp"

namespace cpn {

namespace {

bool is_alpha_token(std::string_view s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalpha(c); });
}

bool is_alnum_token(std::string_view s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c); });
}

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.emplace_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

}  // namespace

CourseCode normalize_code(std::string_view raw) {
    auto code = try_normalize_code(raw);
    if (!code) {
        throw MalformedCodeError("malformed course code: \"" + std::string(raw) + "\"");
    }
    return *code;
}

std::optional<CourseCode> try_normalize_code(std::string_view raw) {
    auto tokens = split_ws(raw);
    if (tokens.size() != 2) return std::nullopt;
    if (!is_alpha_token(tokens[0]) || !is_alnum_token(tokens[1])) return std::nullopt;
    return CourseCode{upper(std::move(tokens[0])), upper(std::move(tokens[1]))};
}

std::vector<CourseCode> RequirementClause::flatten() const {
    std::vector<CourseCode> out;
    for (const auto& group : conjuncts) {
        out.insert(out.end(), group.alternatives.begin(), group.alternatives.end());
    }
    return out;
}

const CourseRecord* Catalog::find(const CourseCode& code) const {
    for (const auto& record : records) {
        if (record.code == code) return &record;
    }
    return nullptr;
}

ValidationReport validate_catalog(const Catalog& catalog) {
    ValidationReport report;
    std::set<CourseCode> seen;
    std::set<CourseCode> defined;
    for (const auto& record : catalog.records) defined.insert(record.code);

    for (const auto& record : catalog.records) {
        if (!seen.insert(record.code).second) {
            report.push_back({Severity::error, record.code,
                              "duplicate course code " + record.code.str()});
        }

        auto check_reference = [&](const CourseCode& ref, const char* kind) {
            if (ref == record.code) {
                report.push_back({Severity::error, ref,
                                  record.code.str() + " references itself in its " +
                                      kind});
            } else if (!defined.count(ref)) {
                report.push_back({Severity::warning, ref,
                                  ref.str() + " is referenced by " + record.code.str() +
                                      " (" + kind + ") but has no record"});
            }
        };

        for (const auto& group : record.prerequisites.conjuncts) {
            for (const auto& alt : group.alternatives) check_reference(alt, "prerequisites");
        }
        for (const auto& coreq : record.corequisites) {
            check_reference(coreq.target, "corequisites");
        }
        for (const auto& cross : record.cross_listings) {
            check_reference(cross, "cross-listings");
        }
    }
    return report;
}

}  // namespace cpn
