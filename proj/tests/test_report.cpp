#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include "test_support.hpp"

using namespace flowtaint;
namespace ft = flowtaint::test;

namespace {

// Minimal DOT well-formedness check: balanced braces, quoted strings and
// HTML-like labels close properly, and the document is a single digraph.
bool dotWellFormed(const std::string& dot) {
    if (dot.rfind("digraph ", 0) != 0) return false;
    int braces = 0;
    std::size_t i = 0;
    while (i < dot.size()) {
        char c = dot[i];
        if (c == '"') {
            ++i;
            while (i < dot.size() && dot[i] != '"') {
                if (dot[i] == '\\') ++i;
                ++i;
            }
            if (i >= dot.size()) return false;
        } else if (c == '<') {
            int depth = 0;
            while (i < dot.size()) {
                if (dot[i] == '<') ++depth;
                if (dot[i] == '>') {
                    if (--depth == 0) break;
                }
                ++i;
            }
            if (depth != 0) return false;
        } else if (c == '{') {
            ++braces;
        } else if (c == '}') {
            if (--braces < 0) return false;
        }
        ++i;
    }
    return braces == 0 && dot.back() == '\n';
}

ReportDocument pilotReport() {
    Model m = ft::loadPilot();
    auto seqs = enumerateSequences(m);
    auto findings = analyseModel(m);
    return buildReport("pilot", {}, seqs, findings);
}

}  // namespace

TEST_CASE("sequence flags mirror the findings that reference them") {
    ReportDocument doc = pilotReport();
    REQUIRE(doc.sequences.size() == 5);
    for (const auto& row : doc.sequences) {
        bool pre = false, post = false;
        for (const TaintFinding& f : doc.findings) {
            if (f.sequenceIds.count(row.id)) {
                (f.kind == TaintKind::PreProcess ? pre : post) = true;
            }
        }
        CHECK(row.preTaint == pre);
        CHECK(row.postTaint == post);
    }
}

TEST_CASE("text report lists one line per sequence with taint flags") {
    std::string text = renderText(pilotReport());
    CHECK(text.find("5 sequences, 2 findings") != std::string::npos);
    CHECK(text.find("<job, alarm>  pre=yes post=yes") != std::string::npos);
    CHECK(text.find("<job, update>  pre=yes post=no") != std::string::npos);
    CHECK(text.find("<current software>  pre=no post=no") != std::string::npos);
    CHECK(text.find("attacker: Unintentional Barry") != std::string::npos);
    CHECK(text.find("obstacle: Change alarm not received") != std::string::npos);
}

TEST_CASE("an empty model renders a zero-count report") {
    std::string text = renderText(buildReport("empty", {}, {}, {}));
    CHECK(text.find("0 sequences, 0 findings") != std::string::npos);
}

TEST_CASE("a report with violations renders only the violations section") {
    std::vector<Violation> vs{{"f", rules::kEmptyAssets, "no assets"}};
    std::string text = renderText(buildReport("broken", vs, {}, {}));
    CHECK(text.find("violations (1):") != std::string::npos);
    CHECK(text.find("R_EMPTY_ASSETS") != std::string::npos);
    CHECK(text.find("sequences:") == std::string::npos);
}

TEST_CASE("structured report carries both pilot findings") {
    std::string json = renderStructured(pilotReport());
    auto doc = nlohmann::json::parse(json);
    CHECK(doc["model"] == "pilot");
    CHECK(doc["violations"].empty());
    CHECK(doc["sequences"].size() == 5);
    REQUIRE(doc["findings"].size() == 2);
    CHECK(doc["findings"][0]["kind"] == "pre-process");
    CHECK(doc["findings"][0]["witnesses"]["attacker"] == "Unintentional Barry");
    CHECK(doc["findings"][1]["kind"] == "post-process");
    CHECK(doc["findings"][1]["witnesses"]["obstacle"] == "Change alarm not received");

    // sequence ids ascending
    auto ids = doc["findings"][0]["sequenceids"].get<std::vector<std::size_t>>();
    CHECK(std::is_sorted(ids.begin(), ids.end()));
}

TEST_CASE("structured rendering is byte-stable and distinguishes reports") {
    ReportDocument a = pilotReport();
    CHECK(renderStructured(a) == renderStructured(a));
    ReportDocument b = a;
    b.findings.pop_back();
    CHECK(renderStructured(a) != renderStructured(b));
}

TEST_CASE("DFD DOT export shapes nodes by kind and styles tainted edges") {
    Model m = ft::loadPilot();
    auto findings = analyseModel(m);
    std::string dot = exportDfdDot(m, &findings);
    CHECK(dotWellFormed(dot));
    CHECK(dot.find("\"Instrument Technician\" [shape=box]") != std::string::npos);
    CHECK(dot.find("\"Modify Telemetry Software\" [shape=ellipse]") != std::string::npos);
    CHECK(dot.find("SIDES=\"TB\"") != std::string::npos);  // datastore rules
    // 7 labelled edges
    std::size_t edges = 0, pos = 0;
    while ((pos = dot.find(" -> ", pos)) != std::string::npos) {
        ++edges;
        pos += 4;
    }
    CHECK(edges == 7);
    CHECK(dot.find("job\\n[pre-process taint]") != std::string::npos);
    CHECK(dot.find("alarm\\n[post-process taint]") != std::string::npos);
    CHECK(dot.find("color=red") != std::string::npos);
}

TEST_CASE("DFD DOT export without findings carries no taint styling") {
    Model m = ft::loadPilot();
    std::string dot = exportDfdDot(m);
    CHECK(dotWellFormed(dot));
    CHECK(dot.find("color=red") == std::string::npos);
    CHECK(dot.find("taint") == std::string::npos);
}

TEST_CASE("an empty model exports an empty digraph body") {
    Model m;
    std::string dot = exportDfdDot(m);
    CHECK(dotWellFormed(dot));
    CHECK(dot.find(" -> ") == std::string::npos);
}

TEST_CASE("trust boundaries render as dashed clusters") {
    Model m = ft::loadPilot();
    m.trustBoundaries.push_back({"Telemetry zone", {"Sandbox", "Telemetry Outstation"}});
    std::string dot = exportDfdDot(m);
    CHECK(dotWellFormed(dot));
    CHECK(dot.find("subgraph cluster_0") != std::string::npos);
    CHECK(dot.find("style=dashed") != std::string::npos);
}

TEST_CASE("goal model DOT marks the unresolved pilot obstacle") {
    Model m = ft::loadPilot();
    std::string dot = exportGoalModelDot(m);
    CHECK(dotWellFormed(dot));
    std::size_t obstructed = dot.find("\"Change alarm not received\"");
    REQUIRE(obstructed != std::string::npos);
    CHECK(dot.find("fillcolor=lightcoral", obstructed) != std::string::npos);
    // The resolved obstacle is not highlighted.
    std::size_t resolved = dot.find("\"Invalid telemetry software installed\" [");
    REQUIRE(resolved != std::string::npos);
    std::size_t lineEnd = dot.find('\n', resolved);
    CHECK(dot.substr(resolved, lineEnd - resolved).find("lightcoral") ==
          std::string::npos);
}

TEST_CASE("an and-refined parent with resolved children is not highlighted") {
    Model m;
    m.goals.push_back({"G"});
    m.obstacles.push_back({"c1", {}, {}, {"G"}, {}, {}});
    m.obstacles.push_back({"c2", {}, {}, {"G"}, {}, {}});
    m.obstacles.push_back({"parent", {}, {}, {}, {}, {"c1", "c2"}});
    std::string dot = exportGoalModelDot(m);
    CHECK(dotWellFormed(dot));
    std::size_t parent = dot.find("\"parent\" [");
    REQUIRE(parent != std::string::npos);
    std::size_t lineEnd = dot.find('\n', parent);
    CHECK(dot.substr(parent, lineEnd - parent).find("lightcoral") ==
          std::string::npos);
    CHECK(dot.find("label=\"and\"") != std::string::npos);
}
