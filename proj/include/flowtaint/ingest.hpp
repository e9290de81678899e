#pragma once

#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include <json.hpp>

#include "flowtaint/model.hpp"

namespace flowtaint {

struct ParseIssue {
    std::string path;     // location in the document, e.g. "dataflows[3].assets"
    std::string code;     // machine-readable E_* code
    std::string message;
};

namespace issues {
inline constexpr const char* kSyntax = "E_SYNTAX";
inline constexpr const char* kDanglingRef = "E_DANGLING_REF";
inline constexpr const char* kDupName = "E_DUP_NAME";
inline constexpr const char* kBadEnum = "E_BAD_ENUM";
inline constexpr const char* kKindMismatch = "E_KIND_MISMATCH";
}  // namespace issues

using LoadResult = std::variant<Model, std::vector<ParseIssue>>;

namespace detail {

using nlohmann::json;

class Loader {
public:
    LoadResult load(const std::string& text) {
        json doc;
        try {
            doc = json::parse(text);
        } catch (const json::parse_error& e) {
            issue("", issues::kSyntax, e.what());
            return std::move(issues_);
        }
        if (!doc.is_object()) {
            issue("", issues::kSyntax, "top level must be an object of collections");
            return std::move(issues_);
        }

        parseAssets(doc);
        parseRoles(doc);
        parsePersonas(doc);
        parseAttackers(doc);
        parseTasks(doc);
        parseUseCases(doc);
        parseGoals(doc);
        parseObstacles(doc);
        parseNodes(doc);
        parseDataFlows(doc);
        parseTrustBoundaries(doc);
        resolveReferences();

        if (!issues_.empty()) return std::move(issues_);
        return std::move(model_);
    }

private:
    Model model_;
    std::vector<ParseIssue> issues_;

    void issue(std::string path, std::string code, std::string message) {
        issues_.push_back({std::move(path), std::move(code), std::move(message)});
    }

    // --- primitive field access, every miss becomes an issue ---

    const json* collection(const json& doc, const char* key) {
        if (!doc.contains(key)) return nullptr;  // omitted collections are empty
        if (!doc[key].is_array()) {
            issue(key, issues::kSyntax, std::string(key) + " must be an array");
            return nullptr;
        }
        return &doc[key];
    }

    bool requireObject(const json& rec, const std::string& path) {
        if (rec.is_object()) return true;
        issue(path, issues::kSyntax, "record must be an object");
        return false;
    }

    std::string stringField(const json& rec, const char* key,
                            const std::string& path, bool required = true) {
        if (!rec.contains(key)) {
            if (required)
                issue(path + "." + key, issues::kSyntax,
                      std::string("missing field '") + key + "'");
            return {};
        }
        if (!rec[key].is_string()) {
            issue(path + "." + key, issues::kSyntax,
                  std::string("field '") + key + "' must be a string");
            return {};
        }
        return rec[key].get<std::string>();
    }

    std::vector<std::string> stringListField(const json& rec, const char* key,
                                             const std::string& path) {
        std::vector<std::string> out;
        if (!rec.contains(key)) return out;  // omitted lists are empty
        if (!rec[key].is_array()) {
            issue(path + "." + key, issues::kSyntax,
                  std::string("field '") + key + "' must be an array of strings");
            return out;
        }
        std::size_t i = 0;
        for (const json& item : rec[key]) {
            if (!item.is_string()) {
                issue(path + "." + key + "[" + std::to_string(i) + "]",
                      issues::kSyntax, "expected a string");
            } else {
                out.push_back(item.get<std::string>());
            }
            ++i;
        }
        return out;
    }

    Value valueField(const json& rec, const char* key, const std::string& path) {
        std::string s = stringField(rec, key, path);
        if (auto v = valueFromString(s)) return *v;
        if (!s.empty())
            issue(path + "." + key, issues::kBadEnum,
                  "'" + s + "' is not one of Low, Medium, High");
        return Value::Low;
    }

    template <class T>
    void checkUniqueNames(const std::vector<T>& xs, const char* coll) {
        std::unordered_set<std::string> seen;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (!seen.insert(xs[i].name).second) {
                issue(std::string(coll) + "[" + std::to_string(i) + "].name",
                      issues::kDupName,
                      "duplicate name '" + xs[i].name + "' in " + coll);
            }
        }
    }

    // --- per-collection parsing ---

    void parseAssets(const json& doc) {
        if (const json* coll = collection(doc, "assets")) {
            std::size_t i = 0;
            for (const json& rec : *coll) {
                std::string path = "assets[" + std::to_string(i++) + "]";
                if (!requireObject(rec, path)) continue;
                Asset a;
                a.name = stringField(rec, "name", path);
                a.shortCode = stringField(rec, "shortcode", path, false);
                model_.assets.push_back(std::move(a));
            }
        }
        checkUniqueNames(model_.assets, "assets");
    }

    void parseRoles(const json& doc) {
        if (const json* coll = collection(doc, "roles")) {
            std::size_t i = 0;
            for (const json& rec : *coll) {
                std::string path = "roles[" + std::to_string(i++) + "]";
                if (!requireObject(rec, path)) continue;
                model_.roles.push_back({stringField(rec, "name", path)});
            }
        }
        checkUniqueNames(model_.roles, "roles");
    }

    void parsePersonas(const json& doc) {
        if (const json* coll = collection(doc, "personas")) {
            std::size_t i = 0;
            for (const json& rec : *coll) {
                std::string path = "personas[" + std::to_string(i++) + "]";
                if (!requireObject(rec, path)) continue;
                Persona p;
                p.name = stringField(rec, "name", path);
                p.roles = stringListField(rec, "roles", path);
                model_.personas.push_back(std::move(p));
            }
        }
        checkUniqueNames(model_.personas, "personas");
    }

    void parseAttackers(const json& doc) {
        if (const json* coll = collection(doc, "attackers")) {
            std::size_t i = 0;
            for (const json& rec : *coll) {
                std::string path = "attackers[" + std::to_string(i++) + "]";
                if (!requireObject(rec, path)) continue;
                Attacker a;
                a.name = stringField(rec, "name", path);
                a.roles = stringListField(rec, "roles", path);
                a.motivations = stringListField(rec, "motivations", path);
                if (rec.contains("capabilities")) {
                    if (!rec["capabilities"].is_array()) {
                        issue(path + ".capabilities", issues::kSyntax,
                              "capabilities must be an array");
                    } else {
                        std::size_t j = 0;
                        for (const json& cap : rec["capabilities"]) {
                            std::string cpath =
                                path + ".capabilities[" + std::to_string(j++) + "]";
                            if (!requireObject(cap, cpath)) continue;
                            Capability c;
                            c.name = stringField(cap, "name", cpath);
                            c.value = valueField(cap, "value", cpath);
                            a.capabilities.push_back(std::move(c));
                        }
                    }
                }
                model_.attackers.push_back(std::move(a));
            }
        }
        checkUniqueNames(model_.attackers, "attackers");
    }

    void parseTasks(const json& doc) {
        if (const json* coll = collection(doc, "tasks")) {
            std::size_t i = 0;
            for (const json& rec : *coll) {
                std::string path = "tasks[" + std::to_string(i++) + "]";
                if (!requireObject(rec, path)) continue;
                Task t;
                t.name = stringField(rec, "name", path);
                t.assets = stringListField(rec, "assets", path);
                if (!rec.contains("participants") || !rec["participants"].is_array()) {
                    issue(path + ".participants", issues::kSyntax,
                          "task requires a non-empty participants array");
                } else {
                    std::size_t j = 0;
                    std::unordered_set<std::string> seen;
                    for (const json& part : rec["participants"]) {
                        std::string ppath =
                            path + ".participants[" + std::to_string(j++) + "]";
                        if (!requireObject(part, ppath)) continue;
                        TaskParticipant p;
                        p.persona = stringField(part, "persona", ppath);
                        p.demand = valueField(part, "demand", ppath);
                        p.goalConflict = valueField(part, "goalconflict", ppath);
                        if (!seen.insert(p.persona).second) {
                            issue(ppath + ".persona", issues::kDupName,
                                  "persona '" + p.persona +
                                      "' participates more than once");
                        }
                        t.participants.push_back(std::move(p));
                    }
                    if (t.participants.empty()) {
                        issue(path + ".participants", issues::kSyntax,
                              "task requires at least one participant");
                    }
                }
                model_.tasks.push_back(std::move(t));
            }
        }
        checkUniqueNames(model_.tasks, "tasks");
    }

    void parseUseCases(const json& doc) {
        if (const json* coll = collection(doc, "usecases")) {
            std::size_t i = 0;
            for (const json& rec : *coll) {
                std::string path = "usecases[" + std::to_string(i++) + "]";
                if (!requireObject(rec, path)) continue;
                UseCase uc;
                uc.name = stringField(rec, "name", path);
                uc.actors = stringListField(rec, "actors", path);
                uc.contextualisingTasks =
                    stringListField(rec, "contextualisingtasks", path);
                uc.exceptions = stringListField(rec, "exceptions", path);
                model_.useCases.push_back(std::move(uc));
            }
        }
        checkUniqueNames(model_.useCases, "usecases");
    }

    void parseGoals(const json& doc) {
        if (const json* coll = collection(doc, "goals")) {
            std::size_t i = 0;
            for (const json& rec : *coll) {
                std::string path = "goals[" + std::to_string(i++) + "]";
                if (!requireObject(rec, path)) continue;
                model_.goals.push_back({stringField(rec, "name", path)});
            }
        }
        checkUniqueNames(model_.goals, "goals");
    }

    void parseObstacles(const json& doc) {
        if (const json* coll = collection(doc, "obstacles")) {
            std::size_t i = 0;
            for (const json& rec : *coll) {
                std::string path = "obstacles[" + std::to_string(i++) + "]";
                if (!requireObject(rec, path)) continue;
                Obstacle o;
                o.name = stringField(rec, "name", path);
                o.concernedAssets = stringListField(rec, "concerns", path);
                o.obstructedGoals = stringListField(rec, "obstructs", path);
                o.resolvingGoals = stringListField(rec, "resolvedby", path);
                o.orChildren = stringListField(rec, "orchildren", path);
                o.andChildren = stringListField(rec, "andchildren", path);
                model_.obstacles.push_back(std::move(o));
            }
        }
        checkUniqueNames(model_.obstacles, "obstacles");
    }

    void parseNodes(const json& doc) {
        if (const json* coll = collection(doc, "nodes")) {
            std::size_t i = 0;
            for (const json& rec : *coll) {
                std::string path = "nodes[" + std::to_string(i++) + "]";
                if (!requireObject(rec, path)) continue;
                Node n;
                n.name = stringField(rec, "name", path);
                std::string kind = stringField(rec, "kind", path);
                if (auto k = nodeKindFromString(kind)) {
                    n.kind = *k;
                } else if (!kind.empty()) {
                    issue(path + ".kind", issues::kBadEnum,
                          "'" + kind +
                              "' is not one of entity, process, datastore");
                }
                n.roleRef = stringField(rec, "roleref", path, false);
                if (!n.roleRef.empty() && n.kind != NodeKind::Entity) {
                    issue(path + ".roleref", issues::kKindMismatch,
                          "only entity nodes may be bound to a role");
                }
                model_.nodes.push_back(std::move(n));
            }
        }
        checkUniqueNames(model_.nodes, "nodes");
    }

    void parseDataFlows(const json& doc) {
        if (const json* coll = collection(doc, "dataflows")) {
            std::size_t i = 0;
            for (const json& rec : *coll) {
                std::string path = "dataflows[" + std::to_string(i++) + "]";
                if (!requireObject(rec, path)) continue;
                DataFlow df;
                df.label = stringField(rec, "label", path);
                df.fromName = stringField(rec, "from", path);
                df.toName = stringField(rec, "to", path);
                df.assets = stringListField(rec, "assets", path);
                model_.dataFlows.push_back(std::move(df));
            }
        }
        // (label, from, to) must be unique.
        for (std::size_t i = 0; i < model_.dataFlows.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                const DataFlow& a = model_.dataFlows[i];
                const DataFlow& b = model_.dataFlows[j];
                if (a.label == b.label && a.fromName == b.fromName &&
                    a.toName == b.toName) {
                    issue("dataflows[" + std::to_string(i) + "]",
                          issues::kDupName,
                          "duplicate dataflow ('" + a.label + "', '" +
                              a.fromName + "', '" + a.toName + "')");
                }
            }
        }
    }

    void parseTrustBoundaries(const json& doc) {
        if (const json* coll = collection(doc, "trustboundaries")) {
            std::size_t i = 0;
            for (const json& rec : *coll) {
                std::string path = "trustboundaries[" + std::to_string(i++) + "]";
                if (!requireObject(rec, path)) continue;
                TrustBoundary tb;
                tb.name = stringField(rec, "name", path);
                tb.members = stringListField(rec, "members", path);
                model_.trustBoundaries.push_back(std::move(tb));
            }
        }
    }

    // --- cross-reference resolution; every dangling name is reported ---

    void requireRef(bool found, const std::string& path, const std::string& name,
                    const char* what) {
        if (!found)
            issue(path, issues::kDanglingRef,
                  std::string("unknown ") + what + " '" + name + "'");
    }

    void checkRefList(const std::vector<std::string>& names,
                      const std::string& path, const char* what,
                      bool (Loader::*exists)(const std::string&) const) {
        for (std::size_t i = 0; i < names.size(); ++i) {
            requireRef((this->*exists)(names[i]),
                       path + "[" + std::to_string(i) + "]", names[i], what);
        }
    }

    bool assetExists(const std::string& n) const { return model_.findAsset(n); }
    bool roleExists(const std::string& n) const { return model_.findRole(n); }
    bool personaExists(const std::string& n) const { return model_.findPersona(n); }
    bool taskExists(const std::string& n) const { return model_.findTask(n); }
    bool goalExists(const std::string& n) const { return model_.findGoal(n); }
    bool obstacleExists(const std::string& n) const { return model_.findObstacle(n); }
    bool nodeExists(const std::string& n) const { return model_.findNode(n); }

    void resolveReferences() {
        for (std::size_t i = 0; i < model_.personas.size(); ++i) {
            checkRefList(model_.personas[i].roles,
                         "personas[" + std::to_string(i) + "].roles", "role",
                         &Loader::roleExists);
        }
        for (std::size_t i = 0; i < model_.attackers.size(); ++i) {
            checkRefList(model_.attackers[i].roles,
                         "attackers[" + std::to_string(i) + "].roles", "role",
                         &Loader::roleExists);
        }
        for (std::size_t i = 0; i < model_.tasks.size(); ++i) {
            const Task& t = model_.tasks[i];
            std::string path = "tasks[" + std::to_string(i) + "]";
            checkRefList(t.assets, path + ".assets", "asset",
                         &Loader::assetExists);
            for (std::size_t j = 0; j < t.participants.size(); ++j) {
                requireRef(personaExists(t.participants[j].persona),
                           path + ".participants[" + std::to_string(j) +
                               "].persona",
                           t.participants[j].persona, "persona");
            }
        }
        for (std::size_t i = 0; i < model_.useCases.size(); ++i) {
            const UseCase& uc = model_.useCases[i];
            std::string path = "usecases[" + std::to_string(i) + "]";
            checkRefList(uc.actors, path + ".actors", "role",
                         &Loader::roleExists);
            checkRefList(uc.contextualisingTasks, path + ".contextualisingtasks",
                         "task", &Loader::taskExists);
            checkRefList(uc.exceptions, path + ".exceptions", "obstacle",
                         &Loader::obstacleExists);
        }
        for (std::size_t i = 0; i < model_.obstacles.size(); ++i) {
            const Obstacle& o = model_.obstacles[i];
            std::string path = "obstacles[" + std::to_string(i) + "]";
            checkRefList(o.concernedAssets, path + ".concerns", "asset",
                         &Loader::assetExists);
            checkRefList(o.obstructedGoals, path + ".obstructs", "goal",
                         &Loader::goalExists);
            checkRefList(o.resolvingGoals, path + ".resolvedby", "goal",
                         &Loader::goalExists);
            checkRefList(o.orChildren, path + ".orchildren", "obstacle",
                         &Loader::obstacleExists);
            checkRefList(o.andChildren, path + ".andchildren", "obstacle",
                         &Loader::obstacleExists);
        }
        for (std::size_t i = 0; i < model_.nodes.size(); ++i) {
            const Node& n = model_.nodes[i];
            if (!n.roleRef.empty()) {
                requireRef(roleExists(n.roleRef),
                           "nodes[" + std::to_string(i) + "].roleref", n.roleRef,
                           "role");
            }
        }
        for (std::size_t i = 0; i < model_.dataFlows.size(); ++i) {
            DataFlow& df = model_.dataFlows[i];
            std::string path = "dataflows[" + std::to_string(i) + "]";
            checkRefList(df.assets, path + ".assets", "asset",
                         &Loader::assetExists);
            const Node* from = model_.findNode(df.fromName);
            const Node* to = model_.findNode(df.toName);
            requireRef(from != nullptr, path + ".from", df.fromName, "node");
            requireRef(to != nullptr, path + ".to", df.toName, "node");
            // Endpoint kinds are derived from the named nodes.
            if (from) df.fromType = from->kind;
            if (to) df.toType = to->kind;
        }
        for (std::size_t i = 0; i < model_.trustBoundaries.size(); ++i) {
            checkRefList(model_.trustBoundaries[i].members,
                         "trustboundaries[" + std::to_string(i) + "].members",
                         "node", &Loader::nodeExists);
        }
    }
};

}  // namespace detail

/// Parses the model document, resolving all cross-references. Returns either
/// a fully resolved Model or every issue found. Never runs analysis.
inline LoadResult loadModel(const std::string& documentText) {
    return detail::Loader().load(documentText);
}

}  // namespace flowtaint
