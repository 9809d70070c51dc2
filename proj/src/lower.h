/**
 * @file lower.h
 *
 * AST to RAM translation. Non-recursive rules become nested scans inserting
 * into the full relation; each recursive stratum becomes a fixpoint loop
 * over delta/new/full relation versions. addGuards then augments inserts
 * into choice-constrained relations with the existence checks that enforce
 * the functional dependencies.
 */

#pragma once

#include "ast.h"
#include "ram.h"
#include "semantics.h"
#include "storage.h"

namespace dlc::lower {

struct LoweredProgram {
    ram::RelationTable relations;
    ram::RamProgram ram;
};

/**
 * Lowers a normalized, desugared, stratified program. Choice domains on
 * each relation are reduced before being attached to the relation table.
 */
LoweredProgram lowerProgram(const ast::Program& program, const sem::StratifiedProgram& stratified,
        storage::SymbolTable& symbols);

/**
 * Replaces every insert into a choice-constrained relation by a guarded
 * insert: one existence check per reduced domain against the insert target,
 * plus the same pattern against the full relation when the target is a
 * `new_` version.
 */
void addGuards(ram::RamProgram& program, const ram::RelationTable& relations);

}  // namespace dlc::lower
