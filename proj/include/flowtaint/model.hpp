#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace flowtaint {

/// Three-valued rating used for capabilities, task demand and goal conflict.
/// Total order: Low < Medium < High.
enum class Value { Low, Medium, High };

inline constexpr bool operator<(Value a, Value b) {
    return static_cast<int>(a) < static_cast<int>(b);
}

inline const char* toString(Value v) {
    switch (v) {
        case Value::Low: return "Low";
        case Value::Medium: return "Medium";
        case Value::High: return "High";
    }
    return "?";
}

inline std::optional<Value> valueFromString(const std::string& s) {
    if (s == "Low") return Value::Low;
    if (s == "Medium") return Value::Medium;
    if (s == "High") return Value::High;
    return std::nullopt;
}

enum class NodeKind { Entity, Process, Datastore };

inline const char* toString(NodeKind k) {
    switch (k) {
        case NodeKind::Entity: return "entity";
        case NodeKind::Process: return "process";
        case NodeKind::Datastore: return "datastore";
    }
    return "?";
}

inline std::optional<NodeKind> nodeKindFromString(const std::string& s) {
    if (s == "entity") return NodeKind::Entity;
    if (s == "process") return NodeKind::Process;
    if (s == "datastore") return NodeKind::Datastore;
    return std::nullopt;
}

struct Asset {
    std::string name;
    std::string shortCode;  // optional, empty when absent
};

struct Role {
    std::string name;
};

struct Node {
    std::string name;
    NodeKind kind = NodeKind::Entity;
    std::string roleRef;  // non-empty only for role-bound (human) entities
};

/// Labelled directed edge carrying a non-empty set of information assets.
/// Endpoint kinds are denormalised from the named nodes at load time.
struct DataFlow {
    std::string label;
    std::string fromName;
    std::string toName;
    NodeKind fromType = NodeKind::Entity;
    NodeKind toType = NodeKind::Process;
    std::vector<std::string> assets;  // asset names, document order
};

struct Persona {
    std::string name;
    std::vector<std::string> roles;
};

struct Capability {
    std::string name;  // open taxonomy, e.g. "Time"
    Value value = Value::Low;
};

struct Attacker {
    std::string name;
    std::vector<std::string> roles;
    std::vector<std::string> motivations;  // open taxonomy; "Productivity" is canonical
    std::vector<Capability> capabilities;
};

/// One canonical motivation name is tested by the analysis.
inline constexpr const char* kProductivity = "Productivity";

/// A capability constrains the analysis when it names time and is rated Low.
/// The combined "Resources/Personnel and Time" phrasing counts as Time.
inline bool isTimeCapability(const Capability& c) {
    return c.name == "Time" || c.name == "Resources/Personnel and Time";
}

struct TaskParticipant {
    std::string persona;
    Value demand = Value::Low;
    Value goalConflict = Value::Low;
};

struct Task {
    std::string name;
    std::vector<TaskParticipant> participants;
    std::vector<std::string> assets;  // assets the personas interact with
};

struct UseCase {
    std::string name;
    std::vector<std::string> actors;               // role names
    std::vector<std::string> contextualisingTasks; // task names
    std::vector<std::string> exceptions;           // obstacle names
};

struct Goal {
    std::string name;
};

struct Obstacle {
    std::string name;
    std::vector<std::string> concernedAssets;
    std::vector<std::string> obstructedGoals;
    std::vector<std::string> resolvingGoals;
    std::vector<std::string> orChildren;
    std::vector<std::string> andChildren;
};

/// Decorative region of the diagram; carries no analysis semantics.
struct TrustBoundary {
    std::string name;
    std::vector<std::string> members;  // node names
};

/// The complete contextualised specification. Immutable after load; all
/// operations are read-only queries.
struct Model {
    std::vector<Asset> assets;
    std::vector<Role> roles;
    std::vector<Persona> personas;
    std::vector<Attacker> attackers;
    std::vector<Task> tasks;
    std::vector<UseCase> useCases;
    std::vector<Goal> goals;
    std::vector<Obstacle> obstacles;
    std::vector<Node> nodes;
    std::vector<DataFlow> dataFlows;
    std::vector<TrustBoundary> trustBoundaries;

    const Node* findNode(const std::string& name) const {
        return find(nodes, name);
    }
    const Asset* findAsset(const std::string& name) const {
        return find(assets, name);
    }
    const Role* findRole(const std::string& name) const {
        return find(roles, name);
    }
    const Persona* findPersona(const std::string& name) const {
        return find(personas, name);
    }
    const Task* findTask(const std::string& name) const {
        return find(tasks, name);
    }
    const UseCase* findUseCase(const std::string& name) const {
        return find(useCases, name);
    }
    const Goal* findGoal(const std::string& name) const {
        return find(goals, name);
    }
    const Obstacle* findObstacle(const std::string& name) const {
        return find(obstacles, name);
    }

private:
    template <class T>
    static const T* find(const std::vector<T>& xs, const std::string& name) {
        auto it = std::find_if(xs.begin(), xs.end(),
                               [&](const T& x) { return x.name == name; });
        return it == xs.end() ? nullptr : &*it;
    }
};

/// All flows leaving a node, in document order.
inline std::vector<const DataFlow*> nodeFlows(const Model& model, const Node& node) {
    std::vector<const DataFlow*> out;
    for (const DataFlow& df : model.dataFlows) {
        if (df.fromName == node.name) out.push_back(&df);
    }
    return out;
}

struct LookupError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The use case bound to a same-named process node.
inline const UseCase& processForName(const Model& model, const std::string& name) {
    if (const UseCase* uc = model.findUseCase(name)) return *uc;
    throw LookupError("no use case named '" + name + "'");
}

}  // namespace flowtaint
