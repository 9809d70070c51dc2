#include "ast.h"

#include <sstream>

namespace dlc::ast {

bool operator==(const Term& a, const Term& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Term::Kind::Variable:
        case Term::Kind::SymbolConst:
            return a.text == b.text;
        case Term::Kind::NumberConst:
            return a.number == b.number;
        case Term::Kind::Counter:
        case Term::Kind::Wildcard:
            return true;
        case Term::Kind::Binary:
            return a.op == b.op && a.operands == b.operands;
    }
    return false;
}

bool operator==(const Atom& a, const Atom& b) {
    return a.relation == b.relation && a.args == b.args;
}

bool operator==(const Literal& a, const Literal& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Literal::Kind::Positive:
        case Literal::Kind::Negated:
            return a.atom == b.atom;
        case Literal::Kind::Comparison:
            return a.op == b.op && a.cmp == b.cmp;
        case Literal::Kind::Aggregate:
            return a.aggKind == b.aggKind && a.atom == b.atom && a.aggMeasureVar == b.aggMeasureVar &&
                   a.aggBindVar == b.aggBindVar;
        case Literal::Kind::ChoiceGoal:
            return a.domainVars == b.domainVars && a.dependentVars == b.dependentVars;
        case Literal::Kind::Disjunction:
            return a.disjuncts == b.disjuncts;
    }
    return false;
}

bool operator==(const Rule& a, const Rule& b) {
    return a.head == b.head && a.body == b.body;
}

static bool declEq(const RelationDecl& a, const RelationDecl& b) {
    if (a.name != b.name || a.choiceDomains != b.choiceDomains) return false;
    if (a.attrs.size() != b.attrs.size()) return false;
    for (std::size_t i = 0; i < a.attrs.size(); ++i) {
        if (a.attrs[i].name != b.attrs[i].name || a.attrs[i].type != b.attrs[i].type) return false;
    }
    return true;
}

bool operator==(const Program& a, const Program& b) {
    if (a.decls.size() != b.decls.size() || a.facts.size() != b.facts.size() ||
        a.rules.size() != b.rules.size() || a.io.size() != b.io.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.decls.size(); ++i) {
        if (!declEq(a.decls[i], b.decls[i])) return false;
    }
    for (std::size_t i = 0; i < a.facts.size(); ++i) {
        if (!(a.facts[i].atom == b.facts[i].atom)) return false;
    }
    for (std::size_t i = 0; i < a.rules.size(); ++i) {
        if (!(a.rules[i] == b.rules[i])) return false;
    }
    for (std::size_t i = 0; i < a.io.size(); ++i) {
        if (a.io[i].relation != b.io[i].relation || a.io[i].kind != b.io[i].kind) return false;
    }
    return true;
}

const char* cmpOpName(CmpOp op) {
    switch (op) {
        case CmpOp::Eq: return "=";
        case CmpOp::Ne: return "!=";
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Gt: return ">";
        case CmpOp::Ge: return ">=";
    }
    return "?";
}

static void escapeSymbol(std::ostream& os, const std::string& s) {
    os << '"';
    for (char c : s) {
        if (c == '"') os << '\\';
        os << c;
    }
    os << '"';
}

std::string toString(const Term& term) {
    std::ostringstream os;
    switch (term.kind) {
        case Term::Kind::Variable:
            os << term.text;
            break;
        case Term::Kind::SymbolConst:
            escapeSymbol(os, term.text);
            break;
        case Term::Kind::NumberConst:
            os << term.number;
            break;
        case Term::Kind::Counter:
            os << '$';
            break;
        case Term::Kind::Wildcard:
            os << '_';
            break;
        case Term::Kind::Binary:
            os << toString(term.operands[0]) << ' ' << term.op << ' ' << toString(term.operands[1]);
            break;
    }
    return os.str();
}

std::string toString(const Atom& atom) {
    std::string out = atom.relation + "(";
    for (std::size_t i = 0; i < atom.args.size(); ++i) {
        if (i) out += ", ";
        out += toString(atom.args[i]);
    }
    out += ")";
    return out;
}

static const char* aggName(AggregateKind kind) {
    switch (kind) {
        case AggregateKind::Count: return "count";
        case AggregateKind::Max: return "max";
        case AggregateKind::Min: return "min";
    }
    return "?";
}

std::string toString(const Literal& literal) {
    switch (literal.kind) {
        case Literal::Kind::Positive:
            return toString(literal.atom);
        case Literal::Kind::Negated:
            return "!" + toString(literal.atom);
        case Literal::Kind::Comparison:
            return toString(literal.cmp[0]) + " " + cmpOpName(literal.op) + " " + toString(literal.cmp[1]);
        case Literal::Kind::Aggregate: {
            std::string out = literal.aggBindVar + " = " + aggName(literal.aggKind) + " ";
            if (literal.aggKind != AggregateKind::Count) out += literal.aggMeasureVar + " ";
            out += ": " + toString(literal.atom);
            return out;
        }
        case Literal::Kind::ChoiceGoal: {
            std::string out = "choice((";
            for (std::size_t i = 0; i < literal.domainVars.size(); ++i) {
                if (i) out += ", ";
                out += literal.domainVars[i];
            }
            out += "), (";
            for (std::size_t i = 0; i < literal.dependentVars.size(); ++i) {
                if (i) out += ", ";
                out += literal.dependentVars[i];
            }
            out += "))";
            return out;
        }
        case Literal::Kind::Disjunction: {
            std::string out = "(";
            for (std::size_t i = 0; i < literal.disjuncts.size(); ++i) {
                if (i) out += " ; ";
                out += "(";
                for (std::size_t j = 0; j < literal.disjuncts[i].size(); ++j) {
                    if (j) out += ", ";
                    out += toString(literal.disjuncts[i][j]);
                }
                out += ")";
            }
            out += ")";
            return out;
        }
    }
    return {};
}

std::string toString(const Rule& rule) {
    std::string out = toString(rule.head) + " :- ";
    for (std::size_t i = 0; i < rule.body.size(); ++i) {
        if (i) out += ", ";
        out += toString(rule.body[i]);
    }
    out += ".";
    return out;
}

std::string toString(const RelationDecl& decl) {
    std::string out = ".decl " + decl.name + "(";
    for (std::size_t i = 0; i < decl.attrs.size(); ++i) {
        if (i) out += ", ";
        out += decl.attrs[i].name;
        out += decl.attrs[i].type == AttrType::Number ? ":number" : ":symbol";
    }
    out += ")";
    if (!decl.choiceDomainNames.empty()) {
        out += " choice-domain ";
        for (std::size_t i = 0; i < decl.choiceDomainNames.size(); ++i) {
            if (i) out += ", ";
            const auto& names = decl.choiceDomainNames[i];
            if (names.size() == 1) {
                out += names[0];
            } else {
                out += "(";
                for (std::size_t j = 0; j < names.size(); ++j) {
                    if (j) out += ", ";
                    out += names[j];
                }
                out += ")";
            }
        }
    }
    return out;
}

std::string toString(const Program& program) {
    std::string out;
    for (const auto& decl : program.decls) {
        out += toString(decl);
        out += "\n";
    }
    for (const auto& io : program.io) {
        out += io.kind == IoKind::Input ? ".input " : ".output ";
        out += io.relation;
        out += "\n";
    }
    for (const auto& fact : program.facts) {
        out += toString(fact.atom);
        out += ".\n";
    }
    for (const auto& rule : program.rules) {
        out += toString(rule);
        out += "\n";
    }
    return out;
}

}  // namespace dlc::ast
