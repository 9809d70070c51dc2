/**
 * @file driver.h
 *
 * The compile pipeline (parse, check, desugar, normalize, stratify, lower,
 * guard, plan) and the run entry points used by the CLI, the python module
 * and the tests. Relation data crosses this boundary as rows of rendered
 * fields; inside a run everything is interned.
 */

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ast.h"
#include "eval.h"
#include "lower.h"
#include "ram.h"
#include "rewrite.h"
#include "semantics.h"
#include "storage.h"

namespace dlc::driver {

/** User-facing failure with fully rendered diagnostics. */
class UserError : public std::runtime_error {
public:
    explicit UserError(std::string message) : std::runtime_error(std::move(message)) {}
};

struct CompiledProgram {
    ast::Program parsed;      // as written
    ast::Program desugared;   // after rule-choice lowering
    ast::Program normalized;  // after disjunction elimination
    sem::StratifiedProgram stratified;
    ram::RelationTable relations;
    ram::RamProgram ram;
    storage::IndexPlan plan;
    storage::SymbolTable symbols;  // program constants; runs copy and extend it

    const ast::RelationDecl* decl(const std::string& name) const;
};

struct CompileResult {
    std::optional<CompiledProgram> program;
    std::vector<Diagnostic> diags;

    bool ok() const {
        return program.has_value();
    }
};

CompileResult compile(std::string_view source);

/** compile() that throws UserError instead of returning diagnostics. */
CompiledProgram compileOrThrow(std::string_view source, const std::string& file = "<input>");

std::string emitRam(const CompiledProgram& program);
std::string emitDesugared(const CompiledProgram& program);

using Row = std::vector<std::string>;
using Rows = std::vector<Row>;

struct RunRequest {
    eval::EvalOptions options;
    // Facts come from `<factsDir>/<relation>.facts` when factsDir is set,
    // from the in-memory map otherwise.
    std::optional<std::string> factsDir;
    std::map<std::string, Rows> facts;
    bool wantTrace = false;
    bool dumpAllRelations = false;  // snapshot every full relation, not just outputs
};

struct RunOutcome {
    std::map<std::string, Rows> outputs;  // per output relation, in index order
    std::map<std::string, Rows> relationDumps;
    std::vector<eval::TraceEntry> trace;
    eval::EvalStats stats;
    storage::SymbolTable symbols;  // as of the end of the run; resolves trace ids
};

/** Evaluates the program; throws UserError on bad fact data or limits. */
RunOutcome runCompiled(const CompiledProgram& program, const RunRequest& request);

/** One line per tuple merged in a fixpoint iteration: `iter\trel\tfields`. */
std::string renderTrace(const CompiledProgram& program, const RunOutcome& outcome);

void writeOutputsToDir(const RunOutcome& outcome, const std::string& dir);

}  // namespace dlc::driver
