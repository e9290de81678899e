#pragma once

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "flowtaint/model.hpp"

namespace flowtaint {

struct Violation {
    std::string subject;  // element name
    std::string rule;     // R_* code
    std::string message;
};

namespace rules {
inline constexpr const char* kFlowPair = "R_FLOW_PAIR";
inline constexpr const char* kEmptyAssets = "R_EMPTY_ASSETS";
inline constexpr const char* kNoUseCase = "R_NO_USECASE";
inline constexpr const char* kObstacleCycle = "R_OBSTACLE_CYCLE";
inline constexpr const char* kMixedRefinement = "R_MIXED_REFINEMENT";
inline constexpr const char* kHumanRole = "R_HUMAN_ROLE";
}  // namespace rules

/// The five endpoint pairings admitted by the dataflow well-formedness
/// predicate.
inline bool isPermittedFlowPair(NodeKind from, NodeKind to) {
    using K = NodeKind;
    return (from == K::Entity && to == K::Process) ||
           (from == K::Process && to == K::Entity) ||
           (from == K::Datastore && to == K::Process) ||
           (from == K::Process && to == K::Datastore) ||
           (from == K::Process && to == K::Process);
}

/// Well-formedness of a single flow: assets non-empty and an admitted
/// endpoint pairing.
inline std::vector<Violation> checkDataFlow(const DataFlow& flow) {
    std::vector<Violation> out;
    if (flow.assets.empty()) {
        out.push_back({flow.label, rules::kEmptyAssets,
                       "dataflow '" + flow.label + "' carries no assets"});
    }
    if (!isPermittedFlowPair(flow.fromType, flow.toType)) {
        out.push_back({flow.label, rules::kFlowPair,
                       "dataflow '" + flow.label + "' connects " +
                           std::string(toString(flow.fromType)) + " to " +
                           std::string(toString(flow.toType))});
    }
    return out;
}

namespace detail {

// Obstacle refinement children, or before and. Validation rejects mixed
// refinement separately, so the union is safe to walk here.
inline std::vector<std::string> refinementChildren(const Obstacle& o) {
    std::vector<std::string> out = o.orChildren;
    out.insert(out.end(), o.andChildren.begin(), o.andChildren.end());
    return out;
}

// Colours: 0 unseen, 1 on stack, 2 done. Records every obstacle on a cycle.
inline void obstacleCycleMembers(const Model& model,
                                 std::unordered_set<std::string>& onCycle) {
    std::unordered_map<std::string, int> colour;
    std::vector<std::string> stack;

    // Iterative DFS with back-edge detection over the refinement relation.
    struct Frame {
        const Obstacle* obstacle;
        std::size_t next = 0;
    };
    for (const Obstacle& root : model.obstacles) {
        if (colour[root.name] != 0) continue;
        std::vector<Frame> frames{{&root}};
        colour[root.name] = 1;
        stack.push_back(root.name);
        while (!frames.empty()) {
            Frame& f = frames.back();
            auto children = refinementChildren(*f.obstacle);
            if (f.next < children.size()) {
                const std::string& childName = children[f.next++];
                const Obstacle* child = model.findObstacle(childName);
                if (!child) continue;  // dangling ref is an ingest concern
                int c = colour[childName];
                if (c == 0) {
                    colour[childName] = 1;
                    stack.push_back(childName);
                    frames.push_back({child});
                } else if (c == 1) {
                    // Everything on the stack from the child upwards is on
                    // the cycle.
                    for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
                        onCycle.insert(*it);
                        if (*it == childName) break;
                    }
                }
            } else {
                colour[f.obstacle->name] = 2;
                stack.pop_back();
                frames.pop_back();
            }
        }
    }
}

}  // namespace detail

/// Whole-model integrity: per-flow checks plus process/use-case binding,
/// obstacle refinement sanity and human-entity role resolution. Violations
/// are ordered by element document order, then rule code.
inline std::vector<Violation> checkModel(const Model& model) {
    std::vector<Violation> out;

    std::unordered_set<std::string> onCycle;
    detail::obstacleCycleMembers(model, onCycle);
    for (const Obstacle& o : model.obstacles) {
        if (!o.orChildren.empty() && !o.andChildren.empty()) {
            out.push_back({o.name, rules::kMixedRefinement,
                           "obstacle '" + o.name +
                               "' mixes or- and and-refinement"});
        }
        if (onCycle.count(o.name)) {
            out.push_back({o.name, rules::kObstacleCycle,
                           "obstacle '" + o.name +
                               "' participates in a refinement cycle"});
        }
    }

    for (const Node& node : model.nodes) {
        if (node.kind == NodeKind::Entity && !node.roleRef.empty() &&
            !model.findRole(node.roleRef)) {
            out.push_back({node.name, rules::kHumanRole,
                           "entity '" + node.name + "' is bound to unknown role '" +
                               node.roleRef + "'"});
        }
        if (node.kind == NodeKind::Process && !model.findUseCase(node.name)) {
            out.push_back({node.name, rules::kNoUseCase,
                           "process '" + node.name + "' has no matching use case"});
        }
    }

    for (const DataFlow& flow : model.dataFlows) {
        for (Violation& v : checkDataFlow(flow)) out.push_back(std::move(v));
    }

    // Emission above follows document order per collection (obstacles,
    // nodes, dataflows) and rule-code order within one element.
    return out;
}

}  // namespace flowtaint
