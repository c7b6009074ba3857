#include "cpn/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cpn/errors.hpp"

namespace cpn {

namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

bool ci_eq(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    }
    return true;
}

bool ci_starts_with(std::string_view s, std::string_view prefix) {
    return s.size() >= prefix.size() && ci_eq(s.substr(0, prefix.size()), prefix);
}

// Tokenize on whitespace; "," and ";" become standalone separator tokens.
std::vector<std::string> tokenize(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    };
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            flush();
        } else if (c == ',' || c == ';') {
            flush();
            out.emplace_back(",");
        } else {
            cur.push_back(c);
        }
    }
    flush();
    return out;
}

bool is_alpha_tok(std::string_view s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalpha(c); });
}

// A course code in running text needs a digit in its number token to tell it
// apart from title words ("Genetics Laboratory" is not a code).
bool is_numberish_tok(std::string_view s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c); }) &&
           std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::optional<CourseCode> code_at(const std::vector<std::string>& toks, std::size_t i) {
    if (i + 1 >= toks.size()) return std::nullopt;
    if (!is_alpha_tok(toks[i]) || !is_numberish_tok(toks[i + 1])) return std::nullopt;
    if (ci_eq(toks[i], "and") || ci_eq(toks[i], "or") || ci_eq(toks[i], "either"))
        return std::nullopt;
    return try_normalize_code(toks[i] + " " + toks[i + 1]);
}

bool segment_has_code(const std::vector<std::string>& toks, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i + 1 < end; ++i) {
        if (code_at(toks, i)) return true;
    }
    return false;
}

std::string join(const std::vector<std::string>& toks, std::size_t begin, std::size_t end) {
    std::string out;
    for (std::size_t i = begin; i < end; ++i) {
        if (!out.empty()) out += ' ';
        out += toks[i];
    }
    return out;
}

// Outcome of tolerant clause parsing. Conjunct texts without any course code
// become soft rules; structurally broken conjuncts become problems.
struct ClauseOutcome {
    RequirementClause clause;
    std::vector<std::string> soft_rules;
    std::vector<std::string> problems;
};

// Parse one conjunct segment [begin, end) as an OR-group.
void parse_or_group(const std::vector<std::string>& toks, std::size_t begin, std::size_t end,
                    ClauseOutcome& out) {
    if (begin >= end) {
        out.problems.push_back("empty conjunct (unbalanced 'and')");
        return;
    }
    if (!segment_has_code(toks, begin, end)) {
        out.soft_rules.push_back(join(toks, begin, end));
        return;
    }

    std::size_t i = begin;
    bool either_flag = false;
    if (ci_eq(toks[i], "either")) {
        either_flag = true;
        ++i;
    }

    OrGroup group;
    while (true) {
        auto code = code_at(toks, i);
        if (!code) {
            out.problems.push_back("expected a course code near \"" +
                                   join(toks, i, std::min(i + 2, end)) + "\"");
            return;
        }
        if (std::find(group.alternatives.begin(), group.alternatives.end(), *code) !=
            group.alternatives.end()) {
            out.problems.push_back("duplicate alternative " + code->str());
            return;
        }
        group.alternatives.push_back(*code);
        i += 2;

        // Title words after the code are ignored up to the next connective.
        while (i < end && !ci_eq(toks[i], "or")) {
            if (ci_eq(toks[i], "either")) {
                out.problems.push_back("nested 'either'");
                return;
            }
            ++i;
        }
        if (i == end) break;
        ++i;  // consume "or"
        if (i == end) {
            out.problems.push_back("dangling 'or'");
            return;
        }
    }

    if (either_flag && group.alternatives.size() < 2) {
        out.problems.push_back("'either' with fewer than two alternatives");
        return;
    }
    out.clause.conjuncts.push_back(std::move(group));
}

ClauseOutcome parse_clause_tolerant(std::string_view raw) {
    ClauseOutcome out;
    auto toks = tokenize(raw);
    if (toks.empty()) return out;

    // Split into conjunct segments on "and" tokens; a comma at conjunct level
    // separates like "and".
    std::size_t begin = 0;
    for (std::size_t i = 0; i <= toks.size(); ++i) {
        bool split = i == toks.size() || ci_eq(toks[i], "and") || toks[i] == ",";
        if (!split) continue;
        parse_or_group(toks, begin, i, out);
        begin = i + 1;
    }
    return out;
}

struct CoreqOutcome {
    std::vector<CoreqDecl> decls;
    std::vector<std::string> soft_rules;
};

CoreqOutcome parse_coreq_list(std::string_view raw) {
    CoreqOutcome out;
    auto toks = tokenize(raw);

    // Phrases are separated by commas and "and"; "or" only appears inside
    // the "credit or coregistration in X" form.
    std::size_t begin = 0;
    auto handle_phrase = [&](std::size_t b, std::size_t e) {
        if (b >= e) return;
        CoreqStrength mode = CoreqStrength::hard;
        std::size_t i = b;
        if (e - i >= 4 && ci_eq(toks[i], "credit") && ci_eq(toks[i + 1], "or") &&
            ci_eq(toks[i + 2], "coregistration") && ci_eq(toks[i + 3], "in")) {
            mode = CoreqStrength::soft;
            i += 4;
        } else if (e - i >= 2 && ci_eq(toks[i], "coregistration") && ci_eq(toks[i + 1], "in")) {
            i += 2;
        }
        auto code = code_at(toks, i);
        if (code) {
            out.decls.push_back({*code, mode});  // trailing title words ignored
        } else {
            out.soft_rules.push_back(join(toks, b, e));
        }
    };
    for (std::size_t i = 0; i <= toks.size(); ++i) {
        bool split = i == toks.size() || toks[i] == "," || ci_eq(toks[i], "and");
        if (!split) continue;
        handle_phrase(begin, i);
        begin = i + 1;
    }
    return out;
}

struct CrossOutcome {
    std::vector<CourseCode> codes;
    std::vector<std::string> rejected;
};

CrossOutcome parse_cross_list(std::string_view raw) {
    CrossOutcome out;
    auto toks = tokenize(raw);
    std::size_t begin = 0;
    auto handle_phrase = [&](std::size_t b, std::size_t e) {
        if (b >= e) return;
        auto code = code_at(toks, b);
        if (code) {
            out.codes.push_back(*code);
        } else {
            out.rejected.push_back(join(toks, b, e));
        }
    };
    for (std::size_t i = 0; i <= toks.size(); ++i) {
        bool split = i == toks.size() || toks[i] == "," || ci_eq(toks[i], "and");
        if (!split) continue;
        handle_phrase(begin, i);
        begin = i + 1;
    }
    return out;
}

enum class AttrKind { prerequisites, corequisites, cross_listings };

bool value_is_dangling(const std::string& value) {
    auto toks = tokenize(value);
    if (toks.empty()) return false;
    const std::string& last = toks.back();
    return last == "," || ci_eq(last, "and") || ci_eq(last, "or") || ci_eq(last, "either");
}

}  // namespace

RequirementClause parse_clause(std::string_view raw) {
    auto outcome = parse_clause_tolerant(raw);
    if (!outcome.problems.empty()) {
        throw ClauseSyntaxError(outcome.problems.front() + " in clause \"" + std::string(raw) +
                                "\"");
    }
    if (!outcome.soft_rules.empty() || outcome.clause.conjuncts.empty()) {
        throw ClauseSyntaxError("no course code in clause \"" + std::string(raw) + "\"");
    }
    return outcome.clause;
}

ParseResult parse_catalog_text(std::string_view text) {
    ParseResult result;
    std::vector<CourseRecord>& records = result.catalog.records;
    std::set<CourseCode> seen_codes;

    struct PendingAttr {
        AttrKind kind;
        std::string value;
        int line;
    };
    std::optional<PendingAttr> pending;

    auto finalize_pending = [&] {
        if (!pending) return;
        CourseRecord& record = records.back();
        switch (pending->kind) {
            case AttrKind::prerequisites: {
                auto outcome = parse_clause_tolerant(pending->value);
                for (auto& group : outcome.clause.conjuncts) {
                    record.prerequisites.conjuncts.push_back(std::move(group));
                }
                for (auto& soft : outcome.soft_rules) {
                    result.diagnostics.push_back(
                        {pending->line, Severity::warning,
                         record.code.str() + ": soft-wired rule recorded, not graphed: \"" +
                             soft + "\""});
                    record.soft_rules.push_back(std::move(soft));
                }
                for (const auto& problem : outcome.problems) {
                    result.diagnostics.push_back(
                        {pending->line, Severity::error,
                         record.code.str() + ": prerequisite clause rejected: " + problem});
                }
                break;
            }
            case AttrKind::corequisites: {
                auto outcome = parse_coreq_list(pending->value);
                for (auto& decl : outcome.decls) record.corequisites.push_back(std::move(decl));
                for (auto& soft : outcome.soft_rules) {
                    result.diagnostics.push_back(
                        {pending->line, Severity::warning,
                         record.code.str() + ": unrecognized corequisite phrase recorded: \"" +
                             soft + "\""});
                    record.soft_rules.push_back(std::move(soft));
                }
                break;
            }
            case AttrKind::cross_listings: {
                auto outcome = parse_cross_list(pending->value);
                for (const auto& code : outcome.codes) {
                    if (std::find(record.cross_listings.begin(), record.cross_listings.end(),
                                  code) == record.cross_listings.end()) {
                        record.cross_listings.push_back(code);
                    }
                }
                for (const auto& rejected : outcome.rejected) {
                    result.diagnostics.push_back(
                        {pending->line, Severity::warning,
                         record.code.str() + ": unrecognized cross-listing skipped: \"" +
                             rejected + "\""});
                }
                break;
            }
        }
        pending.reset();
    };

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view raw =
            nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (raw.empty() && pos > text.size()) break;  // no trailing phantom line

        std::string line = trim(raw);
        if (line.empty()) {
            finalize_pending();
            continue;
        }
        if (line[0] == '#') continue;  // comment

        AttrKind kind{};
        std::string value;
        bool is_attr = false;
        if (ci_starts_with(line, "prerequisites:")) {
            is_attr = true;
            kind = AttrKind::prerequisites;
            value = trim(line.substr(std::string_view("prerequisites:").size()));
        } else if (ci_starts_with(line, "corequisites:")) {
            is_attr = true;
            kind = AttrKind::corequisites;
            value = trim(line.substr(std::string_view("corequisites:").size()));
        } else if (ci_starts_with(line, "cross-listings:")) {
            is_attr = true;
            kind = AttrKind::cross_listings;
            value = trim(line.substr(std::string_view("cross-listings:").size()));
        }

        if (is_attr) {
            finalize_pending();
            if (records.empty()) {
                throw ParseError(line_no, "attribute line before any course heading");
            }
            pending = PendingAttr{kind, value, line_no};
            if (!value_is_dangling(pending->value)) finalize_pending();
            continue;
        }

        // A pending attribute ends with a connective: absorb this line.
        if (pending) {
            pending->value += ' ';
            pending->value += line;
            if (!value_is_dangling(pending->value)) finalize_pending();
            continue;
        }

        auto toks = tokenize(line);
        if (auto code = code_at(toks, 0)) {
            if (!seen_codes.insert(*code).second) {
                throw ParseError(line_no, "duplicate course code " + code->str());
            }
            CourseRecord record;
            record.code = *code;
            record.title = join(toks, 2, toks.size());
            records.push_back(std::move(record));
            continue;
        }

        // Section label (department heading) or a suspicious line.
        if (line.find(':') != std::string::npos) {
            result.diagnostics.push_back(
                {line_no, Severity::warning, "unrecognized attribute line skipped: \"" + line + "\""});
        }
        // else: department heading, recorded as a section label only
    }
    finalize_pending();
    return result;
}

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
    throw SchemaViolationError(where + ": " + what);
}

std::string require_string(const json& j, const std::string& where) {
    if (!j.is_string()) schema_error(where, "expected a string");
    return j.get<std::string>();
}

CourseCode require_code(const json& j, const std::string& where) {
    auto code = try_normalize_code(require_string(j, where));
    if (!code) schema_error(where, "malformed course code \"" + j.get<std::string>() + "\"");
    return *code;
}

}  // namespace

ParseResult parse_catalog_structured(std::string_view bytes) {
    json doc = json::parse(bytes, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) schema_error("document", "not valid JSON");
    if (!doc.is_object()) schema_error("document", "expected an object");

    ParseResult result;
    if (doc.contains("source_label")) {
        result.catalog.source_label = require_string(doc["source_label"], "source_label");
    }
    if (!doc.contains("records") || !doc["records"].is_array()) {
        schema_error("records", "missing or not an array");
    }

    std::set<CourseCode> seen;
    int index = 0;
    for (const auto& rec : doc["records"]) {
        const std::string where = "records[" + std::to_string(index) + "]";
        if (!rec.is_object()) schema_error(where, "expected an object");
        if (!rec.contains("code")) schema_error(where + ".code", "missing required field");

        CourseRecord record;
        record.code = require_code(rec["code"], where + ".code");
        if (!seen.insert(record.code).second) {
            schema_error(where + ".code", "duplicate course code " + record.code.str());
        }
        if (rec.contains("title")) record.title = require_string(rec["title"], where + ".title");

        if (rec.contains("prerequisites")) {
            const auto& prereq = rec["prerequisites"];
            if (!prereq.is_array()) schema_error(where + ".prerequisites", "expected an array");
            int g = 0;
            for (const auto& group : prereq) {
                const std::string gw = where + ".prerequisites[" + std::to_string(g) + "]";
                if (!group.is_array() || group.empty()) {
                    schema_error(gw, "expected a nonempty array of course codes");
                }
                OrGroup og;
                for (const auto& alt : group) og.alternatives.push_back(require_code(alt, gw));
                record.prerequisites.conjuncts.push_back(std::move(og));
                ++g;
            }
        }
        if (rec.contains("corequisites")) {
            const auto& coreqs = rec["corequisites"];
            if (!coreqs.is_array()) schema_error(where + ".corequisites", "expected an array");
            int c = 0;
            for (const auto& coreq : coreqs) {
                const std::string cw = where + ".corequisites[" + std::to_string(c) + "]";
                if (!coreq.is_object() || !coreq.contains("target") || !coreq.contains("mode")) {
                    schema_error(cw, "expected an object with target and mode");
                }
                CoreqDecl decl;
                decl.target = require_code(coreq["target"], cw + ".target");
                std::string mode = require_string(coreq["mode"], cw + ".mode");
                if (mode == "hard") {
                    decl.mode = CoreqStrength::hard;
                } else if (mode == "soft") {
                    decl.mode = CoreqStrength::soft;
                } else {
                    schema_error(cw + ".mode", "expected \"hard\" or \"soft\"");
                }
                record.corequisites.push_back(std::move(decl));
                ++c;
            }
        }
        if (rec.contains("cross_listings")) {
            const auto& cross = rec["cross_listings"];
            if (!cross.is_array()) schema_error(where + ".cross_listings", "expected an array");
            for (const auto& c : cross) {
                record.cross_listings.push_back(require_code(c, where + ".cross_listings"));
            }
        }
        if (rec.contains("soft_rules")) {
            const auto& soft = rec["soft_rules"];
            if (!soft.is_array()) schema_error(where + ".soft_rules", "expected an array");
            for (const auto& s : soft) {
                record.soft_rules.push_back(require_string(s, where + ".soft_rules"));
            }
        }
        result.catalog.records.push_back(std::move(record));
        ++index;
    }
    return result;
}

std::string serialize_catalog_structured(const Catalog& catalog) {
    json doc;
    doc["source_label"] = catalog.source_label;
    doc["records"] = json::array();
    for (const auto& record : catalog.records) {
        json rec;
        rec["code"] = record.code.str();
        rec["title"] = record.title;
        rec["prerequisites"] = json::array();
        for (const auto& group : record.prerequisites.conjuncts) {
            json g = json::array();
            for (const auto& alt : group.alternatives) g.push_back(alt.str());
            rec["prerequisites"].push_back(std::move(g));
        }
        rec["corequisites"] = json::array();
        for (const auto& coreq : record.corequisites) {
            rec["corequisites"].push_back(
                {{"target", coreq.target.str()},
                 {"mode", coreq.mode == CoreqStrength::hard ? "hard" : "soft"}});
        }
        rec["cross_listings"] = json::array();
        for (const auto& cross : record.cross_listings) rec["cross_listings"].push_back(cross.str());
        rec["soft_rules"] = record.soft_rules;
        doc["records"].push_back(std::move(rec));
    }
    return doc.dump(2) + "\n";
}

}  // namespace cpn
