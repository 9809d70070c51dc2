#include "ram.h"

#include <sstream>

namespace dlc::ram {

namespace {

void escape(std::ostream& os, const std::string& s) {
    os << '"';
    for (char c : s) {
        if (c == '"') os << '\\';
        os << c;
    }
    os << '"';
}

void printExpr(std::ostream& os, const Expr& e, const SymbolResolver& syms) {
    switch (e.kind) {
        case Expr::Kind::TupleElement:
            os << 't' << e.frame << '[' << e.index << ']';
            break;
        case Expr::Kind::ConstSym:
            escape(os, syms.resolve(e.value));
            break;
        case Expr::Kind::ConstNum:
            os << e.value;
            break;
        case Expr::Kind::AutoInc:
            os << '$';
            break;
        case Expr::Kind::Add:
        case Expr::Kind::Sub:
            os << '(';
            printExpr(os, e.operands[0], syms);
            os << (e.kind == Expr::Kind::Add ? " + " : " - ");
            printExpr(os, e.operands[1], syms);
            os << ')';
            break;
    }
}

void printPattern(std::ostream& os, const Pattern& pattern, const SymbolResolver& syms) {
    os << '(';
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        if (i) os << ", ";
        if (pattern[i]) {
            printExpr(os, *pattern[i], syms);
        } else {
            os << '_';
        }
    }
    os << ')';
}

void printCond(std::ostream& os, const Cond& c, const RelationTable& rels, const SymbolResolver& syms) {
    switch (c.kind) {
        case Cond::Kind::Emptiness:
            os << '(' << rels[c.rel].printName() << " = EMPTY)";
            break;
        case Cond::Kind::NotExists:
            os << "(NOT ";
            printPattern(os, c.check.pattern, syms);
            os << " IN " << rels[c.check.rel].printName() << ')';
            break;
        case Cond::Kind::Exists:
            os << '(';
            printPattern(os, c.check.pattern, syms);
            os << " IN " << rels[c.check.rel].printName() << ')';
            break;
        case Cond::Kind::Compare:
            os << '(';
            printExpr(os, c.exprs[0], syms);
            os << ' ' << ast::cmpOpName(c.op) << ' ';
            printExpr(os, c.exprs[1], syms);
            os << ')';
            break;
        case Cond::Kind::And: {
            os << '(';
            for (std::size_t i = 0; i < c.operands.size(); ++i) {
                if (i) os << " AND ";
                printCond(os, c.operands[i], rels, syms);
            }
            os << ')';
            break;
        }
        case Cond::Kind::Not:
            os << "(NOT ";
            printCond(os, c.operands[0], rels, syms);
            os << ')';
            break;
        case Cond::Kind::True:
            os << "(TRUE)";
            break;
    }
}

void printTuple(std::ostream& os, const std::vector<Expr>& tuple, const SymbolResolver& syms) {
    os << '(';
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (i) os << ", ";
        printExpr(os, tuple[i], syms);
    }
    os << ')';
}

class Printer {
public:
    Printer(std::ostream& os, const RelationTable& rels, const SymbolResolver& syms)
            : os_(os), rels_(rels), syms_(syms) {}

    void stmt(const Op& op, int depth) {
        switch (op.kind) {
            case Op::Kind::Sequence:
                for (const auto& child : op.children) stmt(child, depth);
                break;
            case Op::Kind::Loop:
                line(depth) << "LOOP\n";
                for (const auto& child : op.children) stmt(child, depth + 1);
                line(depth) << "END LOOP\n";
                break;
            case Op::Kind::ExitIf: {
                auto& os = line(depth);
                os << "EXIT IF ";
                printCond(os, op.cond, rels_, syms_);
                os << '\n';
                break;
            }
            case Op::Kind::Scan:
                line(depth) << "FOR t" << op.frame << " IN " << rels_[op.rel].printName() << '\n';
                for (const auto& child : op.children) stmt(child, depth + 1);
                break;
            case Op::Kind::IndexScan: {
                auto& os = line(depth);
                os << "FOR t" << op.frame << " IN " << rels_[op.rel].printName() << " ON INDEX ";
                bool first = true;
                for (std::size_t i = 0; i < op.pattern.size(); ++i) {
                    if (!op.pattern[i]) continue;
                    if (!first) os << " AND ";
                    os << 't' << op.frame << '[' << i << "] = ";
                    printExpr(os, *op.pattern[i], syms_);
                    first = false;
                }
                os << '\n';
                for (const auto& child : op.children) stmt(child, depth + 1);
                break;
            }
            case Op::Kind::Filter: {
                auto& os = line(depth);
                os << "IF ";
                printCond(os, op.cond, rels_, syms_);
                os << '\n';
                for (const auto& child : op.children) stmt(child, depth + 1);
                break;
            }
            case Op::Kind::Insert: {
                auto& os = line(depth);
                os << "INSERT ";
                printTuple(os, op.tuple, syms_);
                os << " INTO " << rels_[op.rel].printName() << '\n';
                break;
            }
            case Op::Kind::GuardedInsert: {
                auto& os = line(depth);
                os << "GUARDED INSERT ";
                printTuple(os, op.tuple, syms_);
                os << " INTO " << rels_[op.rel].printName() << " IF ";
                for (std::size_t i = 0; i < op.checks.size(); ++i) {
                    if (i) os << " AND ";
                    os << "(NOT ";
                    printPattern(os, op.checks[i].pattern, syms_);
                    os << " IN " << rels_[op.checks[i].rel].printName() << ')';
                }
                os << '\n';
                break;
            }
            case Op::Kind::Merge:
                line(depth) << "MERGE " << rels_[op.rel].printName() << " INTO "
                            << rels_[op.rel2].printName() << '\n';
                break;
            case Op::Kind::Swap:
                line(depth) << "SWAP (" << rels_[op.rel].printName() << ", " << rels_[op.rel2].printName()
                            << ")\n";
                break;
            case Op::Kind::Clear:
                line(depth) << "CLEAR " << rels_[op.rel].printName() << '\n';
                break;
            case Op::Kind::ReadInput:
                line(depth) << "READ INPUT INTO " << rels_[op.rel].printName() << '\n';
                break;
            case Op::Kind::WriteOutput:
                line(depth) << "WRITE OUTPUT " << rels_[op.rel].printName() << '\n';
                break;
            case Op::Kind::AggregateInto: {
                auto& os = line(depth);
                os << 't' << op.frame << " := ";
                switch (op.aggKind) {
                    case ast::AggregateKind::Count: os << "COUNT"; break;
                    case ast::AggregateKind::Max: os << "MAX"; break;
                    case ast::AggregateKind::Min: os << "MIN"; break;
                }
                if (op.aggColumn >= 0) os << " [" << op.aggColumn << "]";
                os << ' ' << rels_[op.rel].printName() << " MATCHING ";
                printPattern(os, op.pattern, syms_);
                os << '\n';
                break;
            }
        }
    }

private:
    std::ostream& line(int depth) {
        for (int i = 0; i < depth; ++i) os_ << "  ";
        return os_;
    }

    std::ostream& os_;
    const RelationTable& rels_;
    const SymbolResolver& syms_;
};

}  // namespace

std::string print(const Expr& expr, const SymbolResolver& syms) {
    std::ostringstream os;
    printExpr(os, expr, syms);
    return os.str();
}

std::string print(const Cond& cond, const RelationTable& rels, const SymbolResolver& syms) {
    std::ostringstream os;
    printCond(os, cond, rels, syms);
    return os.str();
}

std::string print(const RamProgram& program, const RelationTable& rels, const SymbolResolver& syms) {
    std::ostringstream os;
    Printer printer(os, rels, syms);
    for (const auto& op : program.stmts) printer.stmt(op, 0);
    return os.str();
}

}  // namespace dlc::ram
