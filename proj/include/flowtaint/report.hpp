#pragma once

#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "flowtaint/model.hpp"
#include "flowtaint/taint.hpp"
#include "flowtaint/traversal.hpp"
#include "flowtaint/validation.hpp"

namespace flowtaint {

/// Everything a report run produced: validation issues, the sequence table
/// with per-sequence taint flags, and the merged findings.
struct ReportDocument {
    struct SequenceRow {
        std::size_t id = 0;
        std::vector<std::string> flowLabels;
        bool preTaint = false;
        bool postTaint = false;
    };

    std::string modelName;
    std::vector<Violation> violations;
    std::vector<SequenceRow> sequences;
    std::vector<TaintFinding> findings;
};

inline ReportDocument buildReport(std::string modelName,
                                  std::vector<Violation> violations,
                                  const std::vector<FlowSequence>& sequences,
                                  std::vector<TaintFinding> findings) {
    ReportDocument doc;
    doc.modelName = std::move(modelName);
    doc.violations = std::move(violations);
    for (std::size_t id = 0; id < sequences.size(); ++id) {
        doc.sequences.push_back({id, sequences[id].labels(), false, false});
    }
    for (const TaintFinding& f : findings) {
        for (std::size_t id : f.sequenceIds) {
            if (f.kind == TaintKind::PreProcess)
                doc.sequences[id].preTaint = true;
            else
                doc.sequences[id].postTaint = true;
        }
    }
    doc.findings = std::move(findings);
    return doc;
}

namespace detail {

inline std::string joinLabels(const std::vector<std::string>& labels) {
    std::string out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i) out += ", ";
        out += labels[i];
    }
    return out;
}

}  // namespace detail

/// Line-oriented human-readable summary; one line per sequence, one block
/// per finding naming the elements that explain it. Colour wraps only the
/// finding headers.
inline std::string renderText(const ReportDocument& report, bool colour = false) {
    const char* red = colour ? "\033[31m" : "";
    const char* reset = colour ? "\033[0m" : "";
    std::ostringstream os;
    os << "model: " << report.modelName << "\n";

    if (!report.violations.empty()) {
        os << "violations (" << report.violations.size() << "):\n";
        for (const Violation& v : report.violations) {
            os << "  " << v.rule << " " << v.subject << ": " << v.message << "\n";
        }
        return os.str();
    }

    os << report.sequences.size() << " sequences, " << report.findings.size()
       << " findings\n";
    if (!report.sequences.empty()) {
        os << "sequences:\n";
        for (const auto& row : report.sequences) {
            os << "  " << (row.id + 1) << ". <" << detail::joinLabels(row.flowLabels)
               << ">  pre=" << (row.preTaint ? "yes" : "no")
               << " post=" << (row.postTaint ? "yes" : "no") << "\n";
        }
    }
    for (const TaintFinding& f : report.findings) {
        os << red << toString(f.kind) << " taint on process '" << f.process
           << "' via flow '" << f.flowLabel << "'" << reset << "\n";
        if (f.kind == TaintKind::PreProcess) {
            os << "  task: " << f.subject << "\n";
            os << "  attacker: " << f.attacker << "  persona: " << f.persona
               << "  role: " << f.role << "\n";
        } else {
            os << "  obstructed goal: " << f.subject << "\n";
            os << "  obstacle: " << f.obstacle << "\n";
        }
        os << "  sequences:";
        for (std::size_t id : f.sequenceIds) os << " " << (id + 1);
        os << "\n";
    }
    return os.str();
}

/// Machine-parseable report; byte-stable for identical inputs.
inline std::string renderStructured(const ReportDocument& report) {
    nlohmann::ordered_json doc;
    doc["model"] = report.modelName;
    doc["violations"] = nlohmann::ordered_json::array();
    for (const Violation& v : report.violations) {
        doc["violations"].push_back(
            {{"subject", v.subject}, {"rule", v.rule}, {"message", v.message}});
    }
    doc["sequences"] = nlohmann::ordered_json::array();
    for (const auto& row : report.sequences) {
        doc["sequences"].push_back({{"id", row.id},
                                    {"flows", row.flowLabels},
                                    {"pretaint", row.preTaint},
                                    {"posttaint", row.postTaint}});
    }
    doc["findings"] = nlohmann::ordered_json::array();
    for (const TaintFinding& f : report.findings) {
        nlohmann::ordered_json j;
        j["kind"] = f.kind == TaintKind::PreProcess ? "pre-process" : "post-process";
        j["process"] = f.process;
        j["flow"] = f.flowLabel;
        j["subject"] = f.subject;
        nlohmann::ordered_json witnesses;
        if (f.kind == TaintKind::PreProcess) {
            witnesses["attacker"] = f.attacker;
            witnesses["persona"] = f.persona;
            witnesses["role"] = f.role;
        } else {
            witnesses["obstacle"] = f.obstacle;
        }
        j["witnesses"] = witnesses;
        j["sequenceids"] = std::vector<std::size_t>(f.sequenceIds.begin(),
                                                    f.sequenceIds.end());
        doc["findings"].push_back(std::move(j));
    }
    return doc.dump(2) + "\n";
}

/// Serialises a Model back into the document format accepted by loadModel.
inline std::string serialiseModel(const Model& model) {
    using nlohmann::ordered_json;
    ordered_json doc;

    doc["assets"] = ordered_json::array();
    for (const Asset& a : model.assets) {
        ordered_json j{{"name", a.name}};
        if (!a.shortCode.empty()) j["shortcode"] = a.shortCode;
        doc["assets"].push_back(std::move(j));
    }
    doc["roles"] = ordered_json::array();
    for (const Role& r : model.roles) doc["roles"].push_back({{"name", r.name}});
    doc["personas"] = ordered_json::array();
    for (const Persona& p : model.personas)
        doc["personas"].push_back({{"name", p.name}, {"roles", p.roles}});
    doc["attackers"] = ordered_json::array();
    for (const Attacker& a : model.attackers) {
        ordered_json caps = ordered_json::array();
        for (const Capability& c : a.capabilities)
            caps.push_back({{"name", c.name}, {"value", toString(c.value)}});
        doc["attackers"].push_back({{"name", a.name},
                                    {"roles", a.roles},
                                    {"motivations", a.motivations},
                                    {"capabilities", std::move(caps)}});
    }
    doc["tasks"] = ordered_json::array();
    for (const Task& t : model.tasks) {
        ordered_json parts = ordered_json::array();
        for (const TaskParticipant& p : t.participants)
            parts.push_back({{"persona", p.persona},
                             {"demand", toString(p.demand)},
                             {"goalconflict", toString(p.goalConflict)}});
        doc["tasks"].push_back({{"name", t.name},
                                {"participants", std::move(parts)},
                                {"assets", t.assets}});
    }
    doc["usecases"] = ordered_json::array();
    for (const UseCase& uc : model.useCases) {
        doc["usecases"].push_back(
            {{"name", uc.name},
             {"actors", uc.actors},
             {"contextualisingtasks", uc.contextualisingTasks},
             {"exceptions", uc.exceptions}});
    }
    doc["goals"] = ordered_json::array();
    for (const Goal& g : model.goals) doc["goals"].push_back({{"name", g.name}});
    doc["obstacles"] = ordered_json::array();
    for (const Obstacle& o : model.obstacles) {
        doc["obstacles"].push_back({{"name", o.name},
                                    {"concerns", o.concernedAssets},
                                    {"obstructs", o.obstructedGoals},
                                    {"resolvedby", o.resolvingGoals},
                                    {"orchildren", o.orChildren},
                                    {"andchildren", o.andChildren}});
    }
    doc["nodes"] = ordered_json::array();
    for (const Node& n : model.nodes) {
        ordered_json j{{"name", n.name}, {"kind", toString(n.kind)}};
        if (!n.roleRef.empty()) j["roleref"] = n.roleRef;
        doc["nodes"].push_back(std::move(j));
    }
    doc["dataflows"] = ordered_json::array();
    for (const DataFlow& df : model.dataFlows) {
        doc["dataflows"].push_back({{"label", df.label},
                                    {"from", df.fromName},
                                    {"to", df.toName},
                                    {"assets", df.assets}});
    }
    if (!model.trustBoundaries.empty()) {
        doc["trustboundaries"] = ordered_json::array();
        for (const TrustBoundary& tb : model.trustBoundaries) {
            doc["trustboundaries"].push_back(
                {{"name", tb.name}, {"members", tb.members}});
        }
    }
    return doc.dump(2) + "\n";
}

namespace detail {

inline std::string dotEscape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

inline std::string dotId(const std::string& name) {
    return "\"" + dotEscape(name) + "\"";
}

}  // namespace detail

/// DOT rendering of the DFD. Entities are boxes, processes ellipses,
/// datastores open-ended rectangles (top and bottom rules only). Edges
/// named in the findings are coloured and annotated with the taint kind.
inline std::string exportDfdDot(const Model& model,
                                const std::vector<TaintFinding>* findings = nullptr) {
    std::ostringstream os;
    os << "digraph dfd {\n";
    os << "  rankdir=LR;\n";
    for (const Node& n : model.nodes) {
        os << "  " << detail::dotId(n.name);
        switch (n.kind) {
            case NodeKind::Entity:
                os << " [shape=box];\n";
                break;
            case NodeKind::Process:
                os << " [shape=ellipse];\n";
                break;
            case NodeKind::Datastore:
                os << " [shape=none, label=<<TABLE BORDER=\"0\" CELLBORDER=\"0\" "
                      "CELLSPACING=\"0\"><TR><TD SIDES=\"TB\" BORDER=\"1\" "
                      "CELLPADDING=\"4\">"
                   << detail::dotEscape(n.name) << "</TD></TR></TABLE>>];\n";
                break;
        }
    }
    std::size_t cluster = 0;
    for (const TrustBoundary& tb : model.trustBoundaries) {
        os << "  subgraph cluster_" << cluster++ << " {\n";
        os << "    label=" << detail::dotId(tb.name) << ";\n";
        os << "    style=dashed;\n";
        for (const std::string& member : tb.members) {
            if (model.findNode(member)) os << "    " << detail::dotId(member) << ";\n";
        }
        os << "  }\n";
    }
    for (const DataFlow& df : model.dataFlows) {
        std::string taint;
        if (findings) {
            for (const TaintFinding& f : *findings) {
                if (f.flowLabel == df.label &&
                    (f.process == df.toName || f.process == df.fromName)) {
                    taint = toString(f.kind);
                    break;
                }
            }
        }
        os << "  " << detail::dotId(df.fromName) << " -> "
           << detail::dotId(df.toName) << " [label=\"" << detail::dotEscape(df.label);
        if (!taint.empty()) os << "\\n[" << taint << " taint]";
        os << "\"";
        if (!taint.empty()) os << ", color=red, fontcolor=red";
        os << "];\n";
    }
    os << "}\n";
    return os.str();
}

/// DOT rendering of the goal/obstacle model. Or- and and-refinement edges
/// are distinguished by style; resolution edges run from goals to obstacles;
/// obstructed obstacles are highlighted.
inline std::string exportGoalModelDot(const Model& model) {
    std::ostringstream os;
    os << "digraph goals {\n";
    for (const Goal& g : model.goals) {
        os << "  " << detail::dotId(g.name) << " [shape=parallelogram];\n";
    }
    for (const Obstacle& o : model.obstacles) {
        os << "  " << detail::dotId(o.name) << " [shape=polygon, skew=-0.3";
        if (isObstacleObstructed(model, o))
            os << ", style=filled, fillcolor=lightcoral";
        os << "];\n";
    }
    for (const Obstacle& o : model.obstacles) {
        for (const std::string& g : o.obstructedGoals) {
            os << "  " << detail::dotId(o.name) << " -> " << detail::dotId(g)
               << " [arrowhead=onormal, label=\"obstructs\"];\n";
        }
        for (const std::string& g : o.resolvingGoals) {
            os << "  " << detail::dotId(g) << " -> " << detail::dotId(o.name)
               << " [label=\"resolves\"];\n";
        }
        for (const std::string& c : o.orChildren) {
            os << "  " << detail::dotId(c) << " -> " << detail::dotId(o.name)
               << " [style=solid, label=\"or\"];\n";
        }
        for (const std::string& c : o.andChildren) {
            os << "  " << detail::dotId(c) << " -> " << detail::dotId(o.name)
               << " [style=dashed, label=\"and\"];\n";
        }
    }
    os << "}\n";
    return os.str();
}

}  // namespace flowtaint
