#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#if !defined(_WIN32)
#include <unistd.h>
#endif

#include "flowtaint/ingest.hpp"
#include "flowtaint/report.hpp"
#include "flowtaint/taint.hpp"
#include "flowtaint/traversal.hpp"
#include "flowtaint/validation.hpp"

namespace flowtaint::cli {

// Exit-code contract; higher severity wins when several apply.
inline constexpr int kExitClean = 0;
inline constexpr int kExitFindings = 1;
inline constexpr int kExitViolations = 2;
inline constexpr int kExitUsage = 3;

namespace detail {

inline std::string modelNameFromPath(const std::string& path) {
    std::size_t slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    std::size_t dot = base.find_last_of('.');
    return dot == std::string::npos || dot == 0 ? base : base.substr(0, dot);
}

inline bool readFile(const std::string& path, std::string& out, std::ostream& err) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        err << "error: cannot read '" << path << "'\n";
        return false;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    out = buf.str();
    return true;
}

inline bool colourEnabled(const std::ostream& out) {
#if defined(_WIN32)
    bool tty = false;
#else
    bool tty = ::isatty(1) != 0;
#endif
    return &out == &std::cout && tty &&
           std::getenv("FLOWTAINT_NO_COLOR") == nullptr;
}

// Loads and reports parse issues; true only when a Model came back.
inline bool loadOrReport(const std::string& path, Model& model,
                         std::ostream& err) {
    std::string text;
    if (!readFile(path, text, err)) return false;
    LoadResult result = loadModel(text);
    if (auto* issues = std::get_if<std::vector<ParseIssue>>(&result)) {
        for (const ParseIssue& issue : *issues) {
            err << issue.code << " at " << (issue.path.empty() ? "<document>" : issue.path)
                << ": " << issue.message << "\n";
        }
        return false;
    }
    model = std::move(std::get<Model>(result));
    return true;
}

}  // namespace detail

/// Dispatches one subcommand. Diagnostics go to err, the report payload to
/// out. Returns the exit status.
inline int run(const std::vector<std::string>& argv, std::ostream& out,
               std::ostream& err) {
    CLI::App app{"taint analysis for contextualised data flow diagrams", "flowtaint"};
    app.require_subcommand(1);

    std::string file;
    std::string format = "text";
    std::string view;
    bool withFindings = false;

    CLI::App* validate = app.add_subcommand("validate", "check model well-formedness");
    validate->add_option("file", file, "model document")->required();

    CLI::App* sequences = app.add_subcommand("sequences", "enumerate dataflow sequences");
    sequences->add_option("file", file, "model document")->required();

    CLI::App* analyse = app.add_subcommand("analyse", "run the full taint analysis");
    analyse->add_option("file", file, "model document")->required();
    analyse->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json"}));

    CLI::App* exportCmd = app.add_subcommand("export", "emit a DOT graph");
    exportCmd->add_option("file", file, "model document")->required();
    exportCmd->add_option("--view", view, "dfd or goals")
        ->required()
        ->check(CLI::IsMember({"dfd", "goals"}));
    exportCmd->add_flag("--with-findings", withFindings,
                        "style tainted flows in the DFD view");

    // CLI11 wants argc/argv; reparse from the vector.
    std::vector<const char*> args;
    args.push_back("flowtaint");
    for (const std::string& a : argv) args.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(args.size()), args.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitClean;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    Model model;
    if (!detail::loadOrReport(file, model, err)) return kExitUsage;

    std::vector<Violation> violations = checkModel(model);

    if (app.got_subcommand(validate)) {
        ReportDocument doc = buildReport(detail::modelNameFromPath(file),
                                         violations, {}, {});
        out << renderText(doc);
        return violations.empty() ? kExitClean : kExitViolations;
    }

    if (!violations.empty()) {
        // Analysis stages are only defined on valid models.
        for (const Violation& v : violations) {
            err << v.rule << " " << v.subject << ": " << v.message << "\n";
        }
        return kExitViolations;
    }

    if (app.got_subcommand(sequences)) {
        std::vector<FlowSequence> seqs = enumerateSequences(model);
        ReportDocument doc =
            buildReport(detail::modelNameFromPath(file), {}, seqs, {});
        out << renderText(doc);
        return kExitClean;
    }

    if (app.got_subcommand(analyse)) {
        std::vector<FlowSequence> seqs = enumerateSequences(model);
        std::vector<TaintFinding> findings = analyseModel(model);
        ReportDocument doc = buildReport(detail::modelNameFromPath(file), {},
                                         seqs, findings);
        out << (format == "json" ? renderStructured(doc)
                                 : renderText(doc, detail::colourEnabled(out)));
        return doc.findings.empty() ? kExitClean : kExitFindings;
    }

    if (app.got_subcommand(exportCmd)) {
        if (view == "dfd") {
            if (withFindings) {
                std::vector<TaintFinding> findings = analyseModel(model);
                out << exportDfdDot(model, &findings);
            } else {
                out << exportDfdDot(model);
            }
        } else {
            out << exportGoalModelDot(model);
        }
        return kExitClean;
    }

    return kExitUsage;
}

}  // namespace flowtaint::cli
