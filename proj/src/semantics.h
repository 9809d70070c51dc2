/**
 * @file semantics.h
 *
 * Validation and normalization passes over the parsed program: structural
 * checks, choice-domain checks and reduction, disjunction elimination,
 * groundedness, type checking and stratification. All passes are pure.
 */

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ast.h"
#include "diagnostics.h"

namespace dlc::sem {

/** Declaration integrity, io invariants, fact shape, counter placement. */
std::vector<Diagnostic> checkStructure(const ast::Program& program);

/** Every choice-domain attribute exists and appears once per domain. */
std::vector<Diagnostic> checkChoiceDomains(const ast::Program& program);

/**
 * Drops any domain implied by a retained one: a kept domain D1 with
 * D1 ⊆ D2 makes D2 redundant. Exact duplicates collapse to the first
 * occurrence; output order is first-occurrence order.
 */
std::vector<ast::ChoiceDomain> reduceRedundantDomains(const std::vector<ast::ChoiceDomain>& domains);

/**
 * Disjunction elimination: each rule is replaced by the set of rules formed
 * by choosing one disjunct per disjunction, leftmost disjunction first.
 */
ast::Program normalize(const ast::Program& program);

/**
 * Groundedness: every variable in a head, negated atom or comparison is
 * reachable from positive atoms through equality chains. Leftover rule
 * choice goals are reported as UnloweredChoiceGoal.
 */
std::vector<Diagnostic> checkGroundedness(const ast::Program& program);

/** Static symbol/number consistency for rules and facts. */
std::vector<Diagnostic> checkTypes(const ast::Program& program);

struct Stratum {
    std::vector<std::string> relations;
    std::vector<ast::Rule> rules;
};

struct StratifiedProgram {
    std::vector<Stratum> strata;
};

struct StratifyResult {
    std::optional<StratifiedProgram> program;
    std::vector<Diagnostic> diags;
};

/**
 * Groups relations into strata (one per dependency SCC, topologically
 * ordered, ties broken by declaration order). Negation and aggregation
 * inside an SCC is a CycleError. The partition depends only on the rule
 * set, not on rule order.
 */
StratifyResult stratify(const ast::Program& program);

/**
 * Evaluation order of a rule body: literals are taken left to right, and a
 * literal not yet evaluable (an unbound arithmetic argument, comparison or
 * negation) is deferred until its variables are bound. When `preferFirst`
 * names an immediately evaluable literal it is scheduled up front; the
 * recursive lowering uses this to drive each variant from its delta atom.
 */
struct ScheduleResult {
    std::vector<std::size_t> order;       // indices into rule.body
    std::optional<std::size_t> stuck;     // literal that can never run
    std::vector<std::string> unboundHead; // head variables left unbound
};

ScheduleResult scheduleBody(const ast::Rule& rule, std::optional<std::size_t> preferFirst = {});

/**
 * The variable a comparison can bind under the given bound set: a plain
 * `x = e` or an invertible one-level arithmetic form such as `x + 1 = e`.
 */
std::optional<std::string> equalityBindsVar(const ast::Literal& cmp,
        const std::function<bool(const std::string&)>& isBound);

/** All plain variables appearing in a term, in order of occurrence. */
void collectVariables(const ast::Term& term, std::vector<std::string>& out);

}  // namespace dlc::sem
