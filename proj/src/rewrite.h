/**
 * @file rewrite.h
 *
 * Desugars rule-level choice goals into relation-level choice. Each rule
 * carrying `choice((D),(Z))` goals gets one fresh auxiliary relation that
 * holds the rule's bindings under the goal's functional dependencies, plus
 * a copy rule projecting the auxiliary tuples into the original head.
 */

#pragma once

#include <vector>

#include "ast.h"
#include "diagnostics.h"

namespace dlc::rewrite {

struct RewriteResult {
    ast::Program program;
    std::vector<Diagnostic> diags;
    // Names of the synthesized auxiliary relations, one per rewritten rule.
    std::vector<std::string> auxRelations;
};

RewriteResult lowerRuleChoice(const ast::Program& program);

}  // namespace dlc::rewrite
