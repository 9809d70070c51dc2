/**
 * @file ram.h
 *
 * The relational algebra machine: an imperative IR of scans, filters,
 * guarded inserts and fixpoint loops that programs are lowered into and
 * that the evaluator interprets. Immutable once built.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ast.h"

namespace dlc::ram {

using RelId = std::int32_t;

enum class RelVersion { Full, Delta, New };

struct RelationInfo {
    std::string name;  // full relation name; delta/new variants print with a prefix
    std::size_t arity = 0;
    std::vector<ast::AttrType> types;
    std::vector<ast::ChoiceDomain> domains;  // reduced
    RelVersion version = RelVersion::Full;
    RelId base = -1;  // full relation for delta/new variants, self otherwise
    bool isInput = false;
    bool isOutput = false;

    std::string printName() const {
        switch (version) {
            case RelVersion::Full: return name;
            case RelVersion::Delta: return "delta_" + name;
            case RelVersion::New: return "new_" + name;
        }
        return name;
    }
};

struct RelationTable {
    std::vector<RelationInfo> infos;

    const RelationInfo& operator[](RelId id) const {
        return infos[static_cast<std::size_t>(id)];
    }
    RelationInfo& operator[](RelId id) {
        return infos[static_cast<std::size_t>(id)];
    }
    std::size_t size() const {
        return infos.size();
    }
};

struct Expr {
    enum class Kind { TupleElement, ConstSym, ConstNum, AutoInc, Add, Sub };

    Kind kind = Kind::ConstNum;
    int frame = 0;            // TupleElement: frame slot of the bound tuple
    int index = 0;            // TupleElement: column
    std::int64_t value = 0;   // ConstNum value or interned ConstSym id
    std::vector<Expr> operands;

    static Expr elem(int frame, int index) {
        Expr e;
        e.kind = Kind::TupleElement;
        e.frame = frame;
        e.index = index;
        return e;
    }
    static Expr sym(std::int64_t id) {
        Expr e;
        e.kind = Kind::ConstSym;
        e.value = id;
        return e;
    }
    static Expr num(std::int64_t v) {
        Expr e;
        e.kind = Kind::ConstNum;
        e.value = v;
        return e;
    }
    static Expr autoInc() {
        Expr e;
        e.kind = Kind::AutoInc;
        return e;
    }
    static Expr binary(Kind kind, Expr lhs, Expr rhs) {
        Expr e;
        e.kind = kind;
        e.operands.push_back(std::move(lhs));
        e.operands.push_back(std::move(rhs));
        return e;
    }
};

/** Positional pattern; disengaged entries are the wildcard ⊥. */
using Pattern = std::vector<std::optional<Expr>>;

struct ExistenceCheck {
    RelId rel = -1;
    Pattern pattern;
};

struct Cond {
    enum class Kind { Emptiness, NotExists, Exists, Compare, And, Not, True };

    Kind kind = Kind::True;
    RelId rel = -1;                 // Emptiness
    ExistenceCheck check;           // NotExists / Exists
    ast::CmpOp op = ast::CmpOp::Eq; // Compare
    std::vector<Expr> exprs;        // Compare: lhs, rhs
    std::vector<Cond> operands;     // And / Not

    static Cond emptiness(RelId rel) {
        Cond c;
        c.kind = Kind::Emptiness;
        c.rel = rel;
        return c;
    }
    static Cond notExists(ExistenceCheck check) {
        Cond c;
        c.kind = Kind::NotExists;
        c.check = std::move(check);
        return c;
    }
    static Cond exists(ExistenceCheck check) {
        Cond c;
        c.kind = Kind::Exists;
        c.check = std::move(check);
        return c;
    }
    static Cond compare(ast::CmpOp op, Expr lhs, Expr rhs) {
        Cond c;
        c.kind = Kind::Compare;
        c.op = op;
        c.exprs.push_back(std::move(lhs));
        c.exprs.push_back(std::move(rhs));
        return c;
    }
    static Cond conjunction(std::vector<Cond> cs) {
        if (cs.size() == 1) return std::move(cs[0]);
        Cond c;
        c.kind = Kind::And;
        c.operands = std::move(cs);
        return c;
    }
    static Cond negation(Cond inner) {
        Cond c;
        c.kind = Kind::Not;
        c.operands.push_back(std::move(inner));
        return c;
    }
};

struct Op {
    enum class Kind {
        Sequence,
        Loop,
        ExitIf,
        Scan,
        IndexScan,
        Filter,
        Insert,
        GuardedInsert,
        Merge,
        Swap,
        Clear,
        ReadInput,
        WriteOutput,
        AggregateInto,
    };

    Kind kind = Kind::Sequence;
    RelId rel = -1;
    RelId rel2 = -1;                     // Merge dst / Swap second operand
    int frame = -1;                      // Scan/IndexScan tuple slot, AggregateInto out slot
    Pattern pattern;                     // IndexScan / AggregateInto
    std::vector<Expr> tuple;             // Insert / GuardedInsert
    std::vector<ExistenceCheck> checks;  // GuardedInsert
    Cond cond;                           // ExitIf / Filter
    ast::AggregateKind aggKind = ast::AggregateKind::Count;
    int aggColumn = -1;                  // measured column for max/min
    std::vector<Op> children;            // Sequence / Loop / Scan / IndexScan / Filter body
};

struct RamProgram {
    std::vector<Op> stmts;
    int frameCount = 0;  // number of tuple slots used by scans and aggregates
};

struct SymbolResolver {
    virtual ~SymbolResolver() = default;
    virtual std::string resolve(std::int64_t id) const = 0;
};

/**
 * Renders the program in the uppercase textual form used throughout the
 * engine's dumps: `∅` prints as EMPTY and the wildcard as `_`. The output
 * is byte-stable for identical programs.
 */
std::string print(const RamProgram& program, const RelationTable& rels, const SymbolResolver& syms);

std::string print(const Expr& expr, const SymbolResolver& syms);
std::string print(const Cond& cond, const RelationTable& rels, const SymbolResolver& syms);

}  // namespace dlc::ram
