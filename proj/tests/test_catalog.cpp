#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cpn/catalog.hpp"
#include "cpn/errors.hpp"

using namespace cpn;

TEST_CASE("normalize_code handles case and whitespace") {
    CHECK(normalize_code("biol  110") == CourseCode{"BIOL", "110"});
    CHECK(normalize_code("CHEM 200") == CourseCode{"CHEM", "200"});
    CHECK(normalize_code("  math\t99a ") == CourseCode{"MATH", "99A"});
}

TEST_CASE("normalize_code rejects malformed input") {
    CHECK_THROWS_AS(normalize_code("Biology"), MalformedCodeError);
    CHECK_THROWS_AS(normalize_code(""), MalformedCodeError);
    CHECK_THROWS_AS(normalize_code("BIOL 110 extra"), MalformedCodeError);
    CHECK_THROWS_AS(normalize_code("B10L 110"), MalformedCodeError);
    CHECK_THROWS_AS(normalize_code("BIOL 1-10"), MalformedCodeError);
    CHECK(!try_normalize_code("110 BIOL"));
}

TEST_CASE("normalize_code is idempotent on rendered codes") {
    std::mt19937_64 rng(7);
    const char* subjects[] = {"biol", "ChEm", "MATH", "x", "LONGSUBJ"};
    const char* numbers[] = {"1", "110", "200l", "99A", "0003"};
    for (int i = 0; i < 100; ++i) {
        std::string raw = std::string(subjects[rng() % 5]) + "   " + numbers[rng() % 5];
        const CourseCode once = normalize_code(raw);
        CHECK(normalize_code(once.str()) == once);
    }
}

namespace {

CourseRecord record(const char* code, const char* title = "") {
    CourseRecord r;
    r.code = normalize_code(code);
    r.title = title;
    return r;
}

}  // namespace

TEST_CASE("validate_catalog accepts the empty catalogue") {
    CHECK(validate_catalog(Catalog{}).empty());
}

TEST_CASE("validate_catalog flags dangling references as warnings") {
    Catalog catalog;
    auto biol = record("BIOL 110");
    biol.prerequisites.conjuncts.push_back({{normalize_code("CHEM 999")}});
    catalog.records.push_back(biol);

    const auto report = validate_catalog(catalog);
    REQUIRE(report.size() == 1);
    CHECK(report[0].severity == Severity::warning);
    CHECK(report[0].code == CourseCode{"CHEM", "999"});
    CHECK(report[0].message.find("CHEM 999") != std::string::npos);
}

TEST_CASE("validate_catalog flags duplicates and self-references as errors") {
    Catalog catalog;
    catalog.records.push_back(record("BIOL 110"));
    catalog.records.push_back(record("BIOL 110"));
    auto self_prereq = record("CHEM 100");
    self_prereq.prerequisites.conjuncts.push_back({{normalize_code("CHEM 100")}});
    catalog.records.push_back(self_prereq);
    auto self_cross = record("MATH 110");
    self_cross.cross_listings.push_back(normalize_code("MATH 110"));
    catalog.records.push_back(self_cross);

    const auto report = validate_catalog(catalog);
    int errors = 0;
    for (const auto& finding : report) {
        if (finding.severity == Severity::error) ++errors;
    }
    CHECK(errors == 3);
}

TEST_CASE("clean cross-referenced catalogue has no findings") {
    Catalog catalog;
    auto a = record("BIOL 110");
    auto b = record("CHEM 100");
    a.prerequisites.conjuncts.push_back({{b.code}});
    b.corequisites.push_back({a.code, CoreqStrength::soft});
    catalog.records.push_back(a);
    catalog.records.push_back(b);
    CHECK(validate_catalog(catalog).empty());
}

TEST_CASE("clause flatten preserves textual order") {
    RequirementClause clause;
    clause.conjuncts.push_back({{normalize_code("B 2"), normalize_code("A 1")}});
    clause.conjuncts.push_back({{normalize_code("C 3")}});
    const auto flat = clause.flatten();
    REQUIRE(flat.size() == 3);
    CHECK(flat[0] == CourseCode{"B", "2"});
    CHECK(flat[1] == CourseCode{"A", "1"});
    CHECK(flat[2] == CourseCode{"C", "3"});
}
