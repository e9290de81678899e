#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "test_support.hpp"

using namespace flowtaint;
namespace ft = flowtaint::test;

namespace {

// Independent oracle: a direct transcription of the declarative definition
// (resolved -> false; or -> any child; and -> all children; leaf -> true),
// written against the raw obstacle records rather than the production path.
bool obstructedOracle(const Model& m, const std::string& name) {
    const Obstacle& o = *m.findObstacle(name);
    if (!o.resolvingGoals.empty()) return false;
    if (!o.orChildren.empty()) {
        bool any = false;
        for (const std::string& c : o.orChildren) any = any || obstructedOracle(m, c);
        return any;
    }
    if (!o.andChildren.empty()) {
        bool all = true;
        for (const std::string& c : o.andChildren) all = all && obstructedOracle(m, c);
        return all;
    }
    return true;
}

// Random acyclic unmixed refinement forest arranged in levels; children
// always sit one level below their parent, which rules out cycles and keeps
// the recursion shallow.
Model randomObstacleForest(std::mt19937& rng, int depth) {
    Model m;
    m.goals.push_back({"G"});
    std::uniform_int_distribution<int> levelWidth(1, 6);
    std::uniform_int_distribution<int> width(0, 4);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> resolve(0, 4);
    std::vector<std::pair<int, int>> levels;
    int next = 0;
    for (int lvl = 0; lvl < depth; ++lvl) {
        int w = levelWidth(rng);
        levels.push_back({next, next + w - 1});
        for (int k = 0; k < w; ++k) {
            m.obstacles.push_back({"o" + std::to_string(next++), {}, {}, {}, {}, {}});
        }
    }
    for (int lvl = 0; lvl < depth; ++lvl) {
        for (int i = levels[lvl].first; i <= levels[lvl].second; ++i) {
            Obstacle& o = m.obstacles[i];
            if (resolve(rng) == 0) o.resolvingGoals.push_back("G");
            if (lvl + 1 >= depth) continue;
            std::uniform_int_distribution<int> pick(levels[lvl + 1].first,
                                                    levels[lvl + 1].second);
            int n = width(rng);
            auto& children = coin(rng) ? o.orChildren : o.andChildren;
            for (int k = 0; k < n; ++k) {
                std::string c = "o" + std::to_string(pick(rng));
                if (std::find(children.begin(), children.end(), c) == children.end())
                    children.push_back(c);
            }
        }
    }
    return m;
}

Model pilot() { return ft::loadPilot(); }

FlowSequence sequenceByLabels(const Model& m,
                              const std::vector<std::string>& labels) {
    for (const FlowSequence& s : enumerateSequences(m)) {
        if (s.labels() == labels) return s;
    }
    throw std::runtime_error("no such sequence");
}

}  // namespace

TEST_CASE("obstruction base cases") {
    Model m;
    m.goals.push_back({"G"});
    m.obstacles.push_back({"resolved", {}, {}, {"G"}, {}, {}});
    m.obstacles.push_back({"open", {}, {}, {}, {}, {}});
    CHECK_FALSE(isObstacleObstructed(m, *m.findObstacle("resolved")));
    CHECK(isObstacleObstructed(m, *m.findObstacle("open")));
}

TEST_CASE("or-refinement needs any obstructed child, and-refinement all") {
    Model m;
    m.goals.push_back({"G"});
    m.obstacles.push_back({"resolvedLeaf", {}, {}, {"G"}, {}, {}});
    m.obstacles.push_back({"openLeaf", {}, {}, {}, {}, {}});
    m.obstacles.push_back({"orParent", {}, {}, {}, {"resolvedLeaf", "openLeaf"}, {}});
    m.obstacles.push_back({"andParent", {}, {}, {}, {}, {"resolvedLeaf", "openLeaf"}});
    CHECK(isObstacleObstructed(m, *m.findObstacle("orParent")));
    CHECK_FALSE(isObstacleObstructed(m, *m.findObstacle("andParent")));
}

TEST_CASE("a resolving goal clears a parent whatever its children say") {
    Model m;
    m.goals.push_back({"G"});
    m.obstacles.push_back({"openLeaf", {}, {}, {}, {}, {}});
    m.obstacles.push_back({"parent", {}, {}, {"G"}, {"openLeaf"}, {}});
    CHECK_FALSE(isObstacleObstructed(m, *m.findObstacle("parent")));
}

TEST_CASE("obstruction matches the declarative oracle on random forests") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> depth(1, 5);
    for (int trial = 0; trial < 300; ++trial) {
        Model m = randomObstacleForest(rng, depth(rng));
        for (const Obstacle& o : m.obstacles) {
            INFO("trial " << trial << ", obstacle " << o.name);
            CHECK(isObstacleObstructed(m, o) == obstructedOracle(m, o.name));
        }
    }
}

TEST_CASE("the pilot job/alarm sequence carries both taint kinds") {
    Model m = pilot();
    FlowSequence seq = sequenceByLabels(m, {"job", "alarm"});
    auto findings = analyseDataFlows(m, seq);
    REQUIRE(findings.size() == 2);

    CHECK(findings[0].kind == TaintKind::PreProcess);
    CHECK(findings[0].process == "Modify Telemetry Software");
    CHECK(findings[0].flowLabel == "job");
    CHECK(findings[0].subject == "Outstation update");
    CHECK(findings[0].attacker == "Unintentional Barry");
    CHECK(findings[0].persona == "Barry");
    CHECK(findings[0].role == "Instrument Technician");

    CHECK(findings[1].kind == TaintKind::PostProcess);
    CHECK(findings[1].process == "Modify Telemetry Software");
    CHECK(findings[1].flowLabel == "alarm");
    CHECK(findings[1].subject == "Software change alarm raised");
    CHECK(findings[1].obstacle == "Change alarm not received");
}

TEST_CASE("raising the attacker's time capability removes pre-process taint") {
    Model m = pilot();
    for (Capability& c : m.attackers[0].capabilities) c.value = Value::High;
    for (const TaintFinding& f : analyseModel(m)) {
        CHECK(f.kind != TaintKind::PreProcess);
    }
}

TEST_CASE("resolving the exception obstacle removes post-process taint") {
    Model m = pilot();
    for (Obstacle& o : m.obstacles) {
        if (o.name == "Change alarm not received")
            o.resolvingGoals.push_back("Software change alarm raised");
    }
    for (const TaintFinding& f : analyseModel(m)) {
        CHECK(f.kind != TaintKind::PostProcess);
    }
}

TEST_CASE("the pilot model yields exactly two merged findings") {
    Model m = pilot();
    auto findings = analyseModel(m);
    REQUIRE(findings.size() == 2);

    const TaintFinding& pre = findings[0];
    CHECK(pre.kind == TaintKind::PreProcess);
    CHECK(pre.flowLabel == "job");
    CHECK(pre.subject == "Outstation update");
    // All four job-rooted sequences contribute.
    CHECK(pre.sequenceIds == std::set<std::size_t>{0, 1, 2, 3});

    const TaintFinding& post = findings[1];
    CHECK(post.kind == TaintKind::PostProcess);
    CHECK(post.flowLabel == "alarm");
    CHECK(post.sequenceIds == std::set<std::size_t>{2});
}

TEST_CASE("no attackers means no pre-process findings") {
    Model m = pilot();
    m.attackers.clear();
    for (const TaintFinding& f : analyseModel(m)) {
        CHECK(f.kind != TaintKind::PreProcess);
    }
}

TEST_CASE("no use-case exceptions means no post-process findings") {
    Model m = pilot();
    m.useCases[0].exceptions.clear();
    for (const TaintFinding& f : analyseModel(m)) {
        CHECK(f.kind != TaintKind::PostProcess);
    }
}

TEST_CASE("adding resolving goals never adds post-process findings") {
    std::mt19937 rng(13);
    Model m = pilot();
    auto countPost = [](const std::vector<TaintFinding>& fs) {
        std::size_t n = 0;
        for (const TaintFinding& f : fs)
            if (f.kind == TaintKind::PostProcess) ++n;
        return n;
    };
    std::size_t before = countPost(analyseModel(m));
    std::uniform_int_distribution<std::size_t> pick(0, m.obstacles.size() - 1);
    for (int trial = 0; trial < 10; ++trial) {
        Model variant = m;
        variant.obstacles[pick(rng)].resolvingGoals.push_back(
            variant.goals[0].name);
        CHECK(countPost(analyseModel(variant)) <= before);
    }
}

TEST_CASE("analysis output is stable across repeated runs") {
    Model m = pilot();
    auto a = analyseModel(m);
    auto b = analyseModel(m);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].sameFinding(b[i]));
        CHECK(a[i].sequenceIds == b[i].sequenceIds);
    }
}
