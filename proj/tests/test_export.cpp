#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpn/builder.hpp"
#include "cpn/errors.hpp"
#include "cpn/export.hpp"
#include "cpn/metrics.hpp"
#include "cpn/parser.hpp"
#include "cpn/roles.hpp"

using namespace cpn;

namespace {

Catalog load_fixture(const std::string& name) {
    std::ifstream in(std::string(CPN_FIXTURES_DIR) + "/" + name, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_catalog_text(buffer.str()).catalog;
}

Cpn load_fig1() {
    auto result = build_cpn(load_fixture("fig1.txt"));
    return std::move(result.cpn);
}

int count_occurrences(const std::string& haystack, const std::string& needle) {
    int count = 0;
    std::size_t pos = 0;
    while ((pos = haystack.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

// Minimal GraphML reader for round-trip checks: counts elements and pulls
// every weight value out of the edge data blocks.
struct MiniGraphml {
    int nodes = 0;
    int edges = 0;
    std::vector<double> weights;
};

MiniGraphml read_graphml(const std::string& text) {
    MiniGraphml out;
    out.nodes = count_occurrences(text, "<node ");
    out.edges = count_occurrences(text, "<edge ");
    std::size_t pos = 0;
    const std::string open = "<data key=\"weight\">";
    while ((pos = text.find(open, pos)) != std::string::npos) {
        pos += open.size();
        const std::size_t end = text.find("</data>", pos);
        REQUIRE(end != std::string::npos);
        out.weights.push_back(std::stod(text.substr(pos, end - pos)));
    }
    return out;
}

}  // namespace

TEST_CASE("graphml carries every node, edge, and weight") {
    const auto graph = load_fig1();
    const auto text = export_graphml(graph);

    const auto parsed = read_graphml(text);
    CHECK(parsed.nodes == 10);
    CHECK(parsed.edges == 9);
    REQUIRE(parsed.weights.size() == 9);

    // CHEM 102 -> CHEM 200 carries the split weight.
    const NodeId chem102 = *graph.node_of(normalize_code("CHEM 102"));
    const NodeId chem200 = *graph.node_of(normalize_code("CHEM 200"));
    const std::string edge_open = "<edge source=\"n" + std::to_string(chem102) +
                                  "\" target=\"n" + std::to_string(chem200) + "\">";
    const std::size_t at = text.find(edge_open);
    REQUIRE(at != std::string::npos);
    CHECK(text.substr(at, 200).find("<data key=\"weight\">0.500000</data>") != std::string::npos);

    // Weight strings carry exactly 6 significant digits.
    CHECK(text.find("<data key=\"weight\">1.00000</data>") != std::string::npos);
}

TEST_CASE("graphml round trip recovers counts and weights") {
    const auto graph = load_fig1();
    const auto parsed = read_graphml(export_graphml(graph));
    REQUIRE(parsed.weights.size() == graph.arc_count());
    std::size_t i = 0;
    for (const auto& arc : graph.arcs()) {
        CHECK(parsed.weights[i++] == doctest::Approx(arc.weight).epsilon(1e-9));
    }
}

TEST_CASE("graphml counts equal graph counts on random graphs") {
    std::mt19937_64 rng(83);
    for (int trial = 0; trial < 10; ++trial) {
        Cpn graph;
        const int n = 1 + static_cast<int>(rng() % 15);
        for (int i = 0; i < n; ++i) graph.add_node({{"R", std::to_string(i)}});
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i != j && rng() % 4 == 0) {
                    graph.add_arc(i, j, 1.0, ArcProvenance::prerequisite);
                }
            }
        }
        const auto parsed = read_graphml(export_graphml(graph));
        CHECK(parsed.nodes == static_cast<int>(graph.node_count()));
        CHECK(parsed.edges == static_cast<int>(graph.arc_count()));
    }
}

TEST_CASE("empty graph exports are well-formed") {
    const auto text = export_graphml(Cpn{});
    CHECK(text.find("<graphml") != std::string::npos);
    CHECK(text.find("</graphml>") != std::string::npos);
    CHECK(count_occurrences(text, "<node ") == 0);
    CHECK(count_occurrences(text, "<edge ") == 0);

    const auto dot = export_dot(Cpn{});
    CHECK(dot == "digraph cpn {\n}\n");
}

TEST_CASE("dot output lists nodes and arrow edges") {
    Cpn pair;
    pair.add_node({normalize_code("A 1")});
    pair.add_node({normalize_code("B 2")});
    pair.add_arc(0, 1, 1.0, ArcProvenance::prerequisite);
    const auto dot = export_dot(pair);
    CHECK(count_occurrences(dot, "->") == 1);
    CHECK(dot.find("\"A 1\" -> \"B 2\"") != std::string::npos);

    const auto fig1 = export_dot(load_fig1());
    CHECK(count_occurrences(fig1, "->") == 9);
    CHECK(fig1.find("\"BIOL 310/CHEM 310\"") != std::string::npos);
}

TEST_CASE("exports are deterministic") {
    const auto graph = load_fig1();
    auto metrics = degree_metrics(graph);
    const auto components = weakly_connected_components(graph);
    annotate_betweenness(metrics, betweenness(graph, *components.largest()));
    const auto roles = classify_roles(graph, metrics);

    ExportOptions options;
    options.include_roles = true;
    options.size_by = SizeBy::out_degree;
    CHECK(export_graphml(graph, &metrics, &roles, options) ==
          export_graphml(graph, &metrics, &roles, options));
    CHECK(export_dot(graph, &metrics, &roles, options) ==
          export_dot(graph, &metrics, &roles, options));
}

TEST_CASE("missing metrics or roles are refused") {
    const auto graph = load_fig1();
    ExportOptions size_opt;
    size_opt.size_by = SizeBy::betweenness;
    CHECK_THROWS_AS(export_graphml(graph, nullptr, nullptr, size_opt), MissingDataError);
    ExportOptions role_opt;
    role_opt.include_roles = true;
    CHECK_THROWS_AS(export_dot(graph, nullptr, nullptr, role_opt), MissingDataError);
}

TEST_CASE("weights render with six significant digits") {
    Cpn graph;
    graph.add_node({normalize_code("A 1")});
    graph.add_node({normalize_code("B 2")});
    graph.add_node({normalize_code("C 3")});
    graph.add_arc(0, 2, 1.0 / 3.0, ArcProvenance::prerequisite);
    graph.add_arc(1, 2, 1.0, ArcProvenance::prerequisite);
    const auto text = export_graphml(graph);
    CHECK(text.find(">0.333333<") != std::string::npos);
    CHECK(text.find(">1.00000<") != std::string::npos);
}

TEST_CASE("labels are escaped in both formats") {
    Cpn graph;
    CourseCode code{"AANDB", "1"};
    graph.add_node({code}, {"Title with \"quotes\" & <angles>"});
    const auto xml = export_graphml(graph);
    CHECK(xml.find('<' + std::string("data key=\"label\">AANDB 1</data>")) != std::string::npos);
    const auto dot = export_dot(graph);
    CHECK(dot.find("\"AANDB 1\"") != std::string::npos);
}

TEST_CASE("report carries the normative fields") {
    const auto catalog = load_fixture("fig1.txt");
    const auto built = build_cpn(catalog);
    const auto& graph = built.cpn;

    auto metrics = degree_metrics(graph);
    const auto components = weakly_connected_components(graph);
    annotate_betweenness(metrics, betweenness(graph, *components.largest()));

    ReportInputs inputs;
    inputs.summary = summarize(graph);
    inputs.components = components;
    inputs.diagnostics = built.diagnostics;
    inputs.top_out_degree = top_table(graph, metrics, RankKey::weighted_out_degree, 10);
    inputs.top_betweenness = top_table(graph, metrics, RankKey::betweenness, 10);

    const auto rendered = export_report(graph, inputs);
    const auto doc = nlohmann::json::parse(rendered.json);

    CHECK(doc["summary"]["full"]["nodes"] == 10);
    CHECK(doc["summary"]["full"]["arcs"] == 9);
    CHECK(doc["summary"]["full"]["weakly_connected_components"] == 2);
    CHECK(doc["summary"]["full"]["diameter"].is_null());
    CHECK(doc["summary"]["largest_component"]["nodes"] == 9);
    CHECK(doc["summary"]["largest_component"]["diameter"] == 3);
    CHECK(doc["components"] == nlohmann::json::array({9, 1}));
    CHECK(doc["top_out_degree"][0]["label"] == "BIOL 110");
    CHECK(doc["top_out_degree"][0]["value"] == 2.0);
    CHECK(doc["diagnostics"]["merged_groups"] ==
          nlohmann::json::array({nlohmann::json::array({"BIOL 310", "CHEM 310"})}));

    CHECK(doc["summary"]["full"]["mean_degree"].get<double>() == doctest::Approx(1.8));

    // The text table mirrors the two-column shape.
    CHECK(rendered.text.find("metric") != std::string::npos);
    CHECK(rendered.text.find("full CPN") != std::string::npos);
    CHECK(rendered.text.find("largest component") != std::string::npos);
    CHECK(rendered.text.find("1.80") != std::string::npos);
    CHECK(rendered.text.find("--") != std::string::npos);

    CHECK(export_report(graph, inputs).json == rendered.json);
    CHECK(export_report(graph, inputs).text == rendered.text);
}

TEST_CASE("report lists removed arcs with both endpoint labels") {
    BuildPolicy policy;
    policy.coreq_mode = CoreqArcMode::bidirectional;
    const auto built = build_cpn(load_fixture("lecture_lab.txt"), policy);
    const auto enforced = enforce_dag(built.cpn, policy);

    ReportInputs inputs;
    inputs.summary = summarize(enforced.cpn);
    inputs.components = weakly_connected_components(enforced.cpn);
    inputs.diagnostics = enforced.diagnostics;

    const auto rendered = export_report(enforced.cpn, inputs);
    const auto doc = nlohmann::json::parse(rendered.json);
    REQUIRE(doc["diagnostics"]["removed_arcs"].size() == 2);
    bool found = false;
    for (const auto& arc : doc["diagnostics"]["removed_arcs"]) {
        if (arc["source_label"] == "CHEM 114" && arc["target_label"] == "CHEM 113") found = true;
    }
    CHECK(found);
    CHECK(rendered.text.find("CHEM 114 -> CHEM 113") != std::string::npos);
}

TEST_CASE("zeroed report for an empty run") {
    ReportInputs inputs;
    inputs.summary = summarize(Cpn{});
    const auto rendered = export_report(Cpn{}, inputs);
    const auto doc = nlohmann::json::parse(rendered.json);
    CHECK(doc["summary"]["full"]["nodes"] == 0);
    CHECK(doc["components"].empty());
    CHECK(doc["top_out_degree"].empty());
    CHECK(!doc.contains("spearman"));
}
