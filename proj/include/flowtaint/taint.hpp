#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "flowtaint/model.hpp"
#include "flowtaint/traversal.hpp"

namespace flowtaint {

enum class TaintKind { PreProcess, PostProcess };

inline const char* toString(TaintKind k) {
    return k == TaintKind::PreProcess ? "pre-process" : "post-process";
}

/// A taint report binding a process to the task (pre) or obstructed goal
/// (post) that explains it.
struct TaintFinding {
    TaintKind kind = TaintKind::PreProcess;
    std::string process;    // use case name
    std::string flowLabel;
    std::string subject;    // task name (pre) or goal name (post)
    // Contributing elements: attacker/persona/role for pre-process taint,
    // obstacle for post-process taint.
    std::string attacker;
    std::string persona;
    std::string role;
    std::string obstacle;
    std::set<std::size_t> sequenceIds;
    std::size_t flowPosition = 0;  // index of the flow within its first sequence

    bool sameFinding(const TaintFinding& o) const {
        return kind == o.kind && process == o.process &&
               flowLabel == o.flowLabel && subject == o.subject &&
               attacker == o.attacker && persona == o.persona &&
               role == o.role && obstacle == o.obstacle;
    }
};

/// Whether an obstacle remains obstructed: a resolving goal clears it; an
/// or-refined obstacle is obstructed when any child is; an and-refined one
/// only when all children are; an unresolved leaf is obstructed.
/// Requires an acyclic, unmixed refinement tree (validation enforces this).
inline bool isObstacleObstructed(const Model& model, const Obstacle& obstacle) {
    if (!obstacle.resolvingGoals.empty()) return false;
    if (!obstacle.orChildren.empty()) {
        for (const std::string& name : obstacle.orChildren) {
            if (isObstacleObstructed(model, *model.findObstacle(name))) return true;
        }
        return false;
    }
    if (!obstacle.andChildren.empty()) {
        for (const std::string& name : obstacle.andChildren) {
            if (!isObstacleObstructed(model, *model.findObstacle(name))) return false;
        }
        return true;
    }
    return true;
}

namespace detail {

template <class T>
inline bool contains(const std::vector<T>& xs, const T& x) {
    return std::find(xs.begin(), xs.end(), x) != xs.end();
}

inline bool intersects(const std::vector<std::string>& a,
                       const std::vector<std::string>& b) {
    for (const std::string& x : a) {
        if (contains(b, x)) return true;
    }
    return false;
}

inline bool attackerTimeConstrained(const Attacker& a) {
    for (const Capability& c : a.capabilities) {
        if (isTimeCapability(c) && c.value == Value::Low) return true;
    }
    return false;
}

inline bool taskIsDemandingOrConflicted(const Task& t) {
    for (const TaskParticipant& p : t.participants) {
        if (p.demand == Value::Medium || p.demand == Value::High) return true;
        if (p.goalConflict == Value::Medium || p.goalConflict == Value::High)
            return true;
    }
    return false;
}

}  // namespace detail

/// One pass of the taint checks over a single flow sequence. Findings are
/// emitted in flow order; pre-process checks before post-process checks on
/// the same flow.
inline std::vector<TaintFinding> analyseDataFlows(const Model& model,
                                                  const FlowSequence& dfSeq) {
    std::vector<TaintFinding> findings;

    std::size_t position = 0;
    for (const DataFlow* df : dfSeq.flows) {
        // Pre-process taint: a role-bound human entity feeding a process
        // whose contextualising task is demanding or goal-conflicted for a
        // persona sharing a role with a productivity-driven, time-poor
        // attacker.
        if (df->fromType == NodeKind::Entity && df->toType == NodeKind::Process) {
            const Node* from = model.findNode(df->fromName);
            if (from && !from->roleRef.empty() && model.findRole(from->roleRef)) {
                const UseCase& uc = processForName(model, df->toName);
                for (const std::string& taskName : uc.contextualisingTasks) {
                    const Task& t = *model.findTask(taskName);
                    if (!detail::intersects(df->assets, t.assets)) continue;
                    // Roles fulfilled by the task's personas, document order.
                    std::vector<std::string> taskRoles;
                    for (const TaskParticipant& p : t.participants) {
                        for (const std::string& r :
                             model.findPersona(p.persona)->roles) {
                            if (!detail::contains(taskRoles, r))
                                taskRoles.push_back(r);
                        }
                    }
                    for (const std::string& r : taskRoles) {
                        for (const Attacker& a : model.attackers) {
                            if (!detail::contains(a.roles, r)) continue;
                            bool motivated = detail::contains(
                                a.motivations, std::string(kProductivity));
                            if (!motivated || !detail::attackerTimeConstrained(a) ||
                                !detail::taskIsDemandingOrConflicted(t))
                                continue;
                            TaintFinding f;
                            f.kind = TaintKind::PreProcess;
                            f.process = uc.name;
                            f.flowLabel = df->label;
                            f.subject = t.name;
                            f.attacker = a.name;
                            f.role = r;
                            for (const TaskParticipant& p : t.participants) {
                                if (detail::contains(
                                        model.findPersona(p.persona)->roles, r)) {
                                    f.persona = p.persona;
                                    break;
                                }
                            }
                            f.flowPosition = position;
                            findings.push_back(std::move(f));
                        }
                    }
                }
            }
        }

        // Post-process taint: an unresolved exception of the source process
        // concerning an asset the outgoing flow carries.
        if (df->fromType == NodeKind::Process) {
            const UseCase& uc = processForName(model, df->fromName);
            for (const std::string& obstacleName : uc.exceptions) {
                const Obstacle& o = *model.findObstacle(obstacleName);
                if (!detail::intersects(o.concernedAssets, df->assets)) continue;
                for (const std::string& goalName : o.obstructedGoals) {
                    if (!isObstacleObstructed(model, o)) continue;
                    TaintFinding f;
                    f.kind = TaintKind::PostProcess;
                    f.process = uc.name;
                    f.flowLabel = df->label;
                    f.subject = goalName;
                    f.obstacle = o.name;
                    f.flowPosition = position;
                    findings.push_back(std::move(f));
                }
            }
        }
        ++position;
    }
    return findings;
}

/// Full analysis: enumerate sequences, analyse each, and merge findings
/// that coincide in everything but the sequence they arose from. Ordered by
/// first sequence id, then flow position, then kind.
inline std::vector<TaintFinding> analyseModel(const Model& model) {
    std::vector<FlowSequence> seqs = enumerateSequences(model);
    std::vector<TaintFinding> merged;
    for (std::size_t id = 0; id < seqs.size(); ++id) {
        for (TaintFinding& f : analyseDataFlows(model, seqs[id])) {
            f.sequenceIds.insert(id);
            auto it = std::find_if(merged.begin(), merged.end(),
                                   [&](const TaintFinding& m) {
                                       return m.sameFinding(f);
                                   });
            if (it == merged.end()) {
                merged.push_back(std::move(f));
            } else {
                it->sequenceIds.insert(id);
            }
        }
    }
    std::stable_sort(merged.begin(), merged.end(),
                     [](const TaintFinding& a, const TaintFinding& b) {
                         if (*a.sequenceIds.begin() != *b.sequenceIds.begin())
                             return *a.sequenceIds.begin() < *b.sequenceIds.begin();
                         if (a.flowPosition != b.flowPosition)
                             return a.flowPosition < b.flowPosition;
                         return a.kind < b.kind;
                     });
    return merged;
}

}  // namespace flowtaint
