/**
 * @file ast.h
 *
 * Abstract syntax for the surface language: relation declarations with
 * choice domains, facts, rules and io directives. Immutable after
 * construction; equality is structural and ignores source positions.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "diagnostics.h"

namespace dlc::ast {

enum class AttrType { Symbol, Number };

/** A set of attribute positions (0-based, sorted, duplicate-free). */
struct ChoiceDomain {
    std::vector<std::size_t> positions;

    bool operator==(const ChoiceDomain&) const = default;
};

struct Attribute {
    std::string name;
    AttrType type = AttrType::Symbol;
};

struct RelationDecl {
    std::string name;
    std::vector<Attribute> attrs;
    std::vector<ChoiceDomain> choiceDomains;
    // Domains as written, one name list per domain; kept so the semantic
    // checker can report unknown or duplicate attributes by name.
    std::vector<std::vector<std::string>> choiceDomainNames;
    SourcePos pos;
};

inline std::size_t arity(const RelationDecl& decl) {
    return decl.attrs.size();
}

/**
 * A term in an atom argument, comparison side or rule head. Flat tagged
 * representation; Binary holds two operands and op '+' or '-'.
 */
struct Term {
    enum class Kind { Variable, SymbolConst, NumberConst, Counter, Wildcard, Binary };

    Kind kind = Kind::Wildcard;
    std::string text;           // Variable name or SymbolConst value
    std::int64_t number = 0;    // NumberConst value
    char op = 0;                // Binary operator
    std::vector<Term> operands; // Binary: exactly two
    SourcePos pos;

    static Term variable(std::string name) {
        Term t;
        t.kind = Kind::Variable;
        t.text = std::move(name);
        return t;
    }
    static Term symbol(std::string value) {
        Term t;
        t.kind = Kind::SymbolConst;
        t.text = std::move(value);
        return t;
    }
    static Term num(std::int64_t value) {
        Term t;
        t.kind = Kind::NumberConst;
        t.number = value;
        return t;
    }
    static Term counter() {
        Term t;
        t.kind = Kind::Counter;
        return t;
    }
    static Term wildcard() {
        Term t;
        t.kind = Kind::Wildcard;
        return t;
    }
    static Term binary(char op, Term lhs, Term rhs) {
        Term t;
        t.kind = Kind::Binary;
        t.op = op;
        t.operands.push_back(std::move(lhs));
        t.operands.push_back(std::move(rhs));
        return t;
    }

    bool isVariable() const {
        return kind == Kind::Variable;
    }
};

bool operator==(const Term& a, const Term& b);

struct Atom {
    std::string relation;
    std::vector<Term> args;
    SourcePos pos;
};

bool operator==(const Atom& a, const Atom& b);

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

enum class AggregateKind { Count, Max, Min };

/**
 * A body literal. Aggregate binds the aggregate over `atom` to `aggBindVar`
 * (`aggMeasureVar` names the measured target variable for max/min).
 * ChoiceGoal is the rule-level choice goal and only survives until the
 * rewrite pass; Disjunction only until normalization.
 */
struct Literal {
    enum class Kind { Positive, Negated, Comparison, Aggregate, ChoiceGoal, Disjunction };

    Kind kind = Kind::Positive;
    Atom atom;                                   // Positive / Negated / Aggregate target
    CmpOp op = CmpOp::Eq;                        // Comparison
    std::vector<Term> cmp;                       // Comparison: lhs, rhs
    AggregateKind aggKind = AggregateKind::Count;
    std::string aggMeasureVar;
    std::string aggBindVar;
    std::vector<std::string> domainVars;         // ChoiceGoal
    std::vector<std::string> dependentVars;      // ChoiceGoal
    std::vector<std::vector<Literal>> disjuncts; // Disjunction
    SourcePos pos;

    static Literal positive(Atom a) {
        Literal l;
        l.kind = Kind::Positive;
        l.atom = std::move(a);
        return l;
    }
    static Literal negated(Atom a) {
        Literal l;
        l.kind = Kind::Negated;
        l.atom = std::move(a);
        return l;
    }
    static Literal comparison(CmpOp op, Term lhs, Term rhs) {
        Literal l;
        l.kind = Kind::Comparison;
        l.op = op;
        l.cmp.push_back(std::move(lhs));
        l.cmp.push_back(std::move(rhs));
        return l;
    }
};

bool operator==(const Literal& a, const Literal& b);

struct Rule {
    Atom head;
    std::vector<Literal> body;
    SourcePos pos;
};

bool operator==(const Rule& a, const Rule& b);

struct Fact {
    Atom atom;
    SourcePos pos;
};

enum class IoKind { Input, Output };

struct IoDirective {
    std::string relation;
    IoKind kind = IoKind::Input;
    SourcePos pos;
};

struct Program {
    std::vector<RelationDecl> decls;
    std::vector<Fact> facts;
    std::vector<Rule> rules;
    std::vector<IoDirective> io;
};

bool operator==(const Program& a, const Program& b);

const char* cmpOpName(CmpOp op);

std::string toString(const Term& term);
std::string toString(const Atom& atom);
std::string toString(const Literal& literal);
std::string toString(const Rule& rule);
std::string toString(const RelationDecl& decl);

/** Pretty-prints a whole program; parsing the result round-trips. */
std::string toString(const Program& program);

}  // namespace dlc::ast
