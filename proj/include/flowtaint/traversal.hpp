#pragma once

#include <cstddef>
#include <string>
#include <unordered_set>
#include <vector>

#include "flowtaint/model.hpp"

namespace flowtaint {

/// A path of connected flows discovered from one root entity.
struct FlowSequence {
    std::string rootEntity;
    std::vector<const DataFlow*> flows;  // non-empty, path-connected

    std::vector<std::string> labels() const {
        std::vector<std::string> out;
        out.reserve(flows.size());
        for (const DataFlow* f : flows) out.push_back(f->label);
        return out;
    }
};

inline bool sameFlows(const FlowSequence& a, const FlowSequence& b) {
    return a.flows == b.flows;
}

struct TraversalState {
    std::vector<FlowSequence> allSeqs;
    std::unordered_set<std::string> visited;
};

/// Depth-first enumeration of flow sequences from currentNode. Expansion
/// stops at already-visited targets, which bounds every walk on cyclic
/// graphs. The visited set persists across the whole enumeration.
inline void dataFlows(TraversalState& state, const Model& model,
                      const Node& currentNode, const std::string& rootEntity,
                      std::vector<const DataFlow*> prefix) {
    state.visited.insert(currentNode.name);
    auto dfs = nodeFlows(model, currentNode);
    if (dfs.empty()) {
        if (!prefix.empty()) state.allSeqs.push_back({rootEntity, prefix});
        return;
    }
    for (const DataFlow* df : dfs) {
        std::vector<const DataFlow*> newPrefix = prefix;
        newPrefix.push_back(df);
        if (state.visited.count(df->toName)) {
            state.allSeqs.push_back({rootEntity, std::move(newPrefix)});
        } else {
            dataFlows(state, model, *model.findNode(df->toName), rootEntity,
                      std::move(newPrefix));
        }
    }
}

/// Unique flow sequences over all entity roots, in document order. The
/// visited set is shared across roots; a later entity whose flows lead
/// straight into already-explored territory contributes only the truncated
/// sequence. Fully identical sequences are kept once (first occurrence).
inline std::vector<FlowSequence> enumerateSequences(const Model& model) {
    TraversalState state;
    for (const Node& node : model.nodes) {
        if (node.kind != NodeKind::Entity) continue;
        dataFlows(state, model, node, node.name, {});
    }
    std::vector<FlowSequence> unique;
    for (FlowSequence& seq : state.allSeqs) {
        bool seen = false;
        for (const FlowSequence& u : unique) {
            if (sameFlows(u, seq)) {
                seen = true;
                break;
            }
        }
        if (!seen) unique.push_back(std::move(seq));
    }
    return unique;
}

}  // namespace flowtaint
