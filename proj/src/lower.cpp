#include "lower.h"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace dlc::lower {

using namespace ast;
using ram::Cond;
using ram::Expr;
using ram::Op;
using ram::RelId;

namespace {

class Lowerer {
public:
    Lowerer(const Program& program, const sem::StratifiedProgram& stratified,
            storage::SymbolTable& symbols)
            : program_(program), stratified_(stratified), symbols_(symbols) {}

    LoweredProgram run() {
        buildRelationTable();

        std::vector<Op> stmts;
        for (const auto& io : program_.io) {
            if (io.kind != IoKind::Input) continue;
            Op op;
            op.kind = Op::Kind::ReadInput;
            op.rel = fullId(io.relation);
            stmts.push_back(std::move(op));
        }
        for (const auto& fact : program_.facts) {
            Op op;
            op.kind = Op::Kind::Insert;
            op.rel = fullId(fact.atom.relation);
            for (const auto& arg : fact.atom.args) op.tuple.push_back(constant(arg));
            stmts.push_back(std::move(op));
        }

        for (const auto& stratum : stratified_.strata) lowerStratum(stratum, stmts);

        for (const auto& io : program_.io) {
            if (io.kind != IoKind::Output) continue;
            Op op;
            op.kind = Op::Kind::WriteOutput;
            op.rel = fullId(io.relation);
            stmts.push_back(std::move(op));
        }

        LoweredProgram result;
        result.relations = std::move(table_);
        result.ram.stmts = std::move(stmts);
        result.ram.frameCount = frameCount_;
        return result;
    }

private:
    const Program& program_;
    const sem::StratifiedProgram& stratified_;
    storage::SymbolTable& symbols_;

    ram::RelationTable table_;
    std::unordered_map<std::string, RelId> fullIds_;
    std::unordered_map<std::string, RelId> deltaIds_;
    std::unordered_map<std::string, RelId> newIds_;
    std::unordered_map<std::string, const RelationDecl*> decls_;
    int frameCount_ = 0;

    void buildRelationTable() {
        std::unordered_set<std::string> inputs, outputs;
        for (const auto& io : program_.io) {
            (io.kind == IoKind::Input ? inputs : outputs).insert(io.relation);
        }
        for (const auto& decl : program_.decls) {
            decls_.emplace(decl.name, &decl);
            ram::RelationInfo info;
            info.name = decl.name;
            info.arity = arity(decl);
            for (const auto& attr : decl.attrs) info.types.push_back(attr.type);
            info.domains = sem::reduceRedundantDomains(decl.choiceDomains);
            info.version = ram::RelVersion::Full;
            info.base = static_cast<RelId>(table_.size());
            info.isInput = inputs.count(decl.name) > 0;
            info.isOutput = outputs.count(decl.name) > 0;
            fullIds_.emplace(decl.name, info.base);
            table_.infos.push_back(std::move(info));
        }
    }

    RelId fullId(const std::string& name) const {
        return fullIds_.at(name);
    }

    RelId variantId(const std::string& name, ram::RelVersion version) {
        auto& ids = version == ram::RelVersion::Delta ? deltaIds_ : newIds_;
        auto it = ids.find(name);
        if (it != ids.end()) return it->second;
        const auto& full = table_[fullId(name)];
        ram::RelationInfo info;
        info.name = full.name;
        info.arity = full.arity;
        info.types = full.types;
        info.domains = full.domains;
        info.version = version;
        info.base = full.base;
        RelId id = static_cast<RelId>(table_.size());
        table_.infos.push_back(std::move(info));
        ids.emplace(name, id);
        return id;
    }

    Expr constant(const Term& term) {
        if (term.kind == Term::Kind::SymbolConst) return Expr::sym(symbols_.intern(term.text));
        return Expr::num(term.number);
    }

    bool isRecursive(const Rule& rule, const std::unordered_set<std::string>& stratumRels) const {
        for (const auto& lit : rule.body) {
            if (lit.kind == Literal::Kind::Positive && stratumRels.count(lit.atom.relation)) return true;
        }
        return false;
    }

    void lowerStratum(const sem::Stratum& stratum, std::vector<Op>& stmts) {
        std::unordered_set<std::string> members(stratum.relations.begin(), stratum.relations.end());

        std::vector<const Rule*> nonRecursive, recursive;
        for (const auto& rule : stratum.rules) {
            (isRecursive(rule, members) ? recursive : nonRecursive).push_back(&rule);
        }

        for (const Rule* rule : nonRecursive) {
            stmts.push_back(lowerRule(*rule, members, -1, false));
        }
        if (recursive.empty()) return;

        // Seed the delta versions with everything derived so far.
        for (const auto& name : stratum.relations) {
            Op seed;
            seed.kind = Op::Kind::Merge;
            seed.rel = fullId(name);
            seed.rel2 = variantId(name, ram::RelVersion::Delta);
            stmts.push_back(std::move(seed));
        }

        Op loop;
        loop.kind = Op::Kind::Loop;
        for (const Rule* rule : recursive) {
            int occurrences = 0;
            for (const auto& lit : rule->body) {
                if (lit.kind == Literal::Kind::Positive && members.count(lit.atom.relation)) ++occurrences;
            }
            for (int occ = 0; occ < occurrences; ++occ) {
                loop.children.push_back(lowerRule(*rule, members, occ, true));
            }
        }

        std::vector<Cond> exits;
        for (const auto& name : stratum.relations) {
            exits.push_back(Cond::emptiness(variantId(name, ram::RelVersion::New)));
        }
        Op exitOp;
        exitOp.kind = Op::Kind::ExitIf;
        exitOp.cond = Cond::conjunction(std::move(exits));
        loop.children.push_back(std::move(exitOp));

        for (const auto& name : stratum.relations) {
            Op merge;
            merge.kind = Op::Kind::Merge;
            merge.rel = variantId(name, ram::RelVersion::New);
            merge.rel2 = fullId(name);
            loop.children.push_back(std::move(merge));
        }
        for (const auto& name : stratum.relations) {
            Op swap;
            swap.kind = Op::Kind::Swap;
            swap.rel = variantId(name, ram::RelVersion::Delta);
            swap.rel2 = variantId(name, ram::RelVersion::New);
            loop.children.push_back(std::move(swap));
            Op clear;
            clear.kind = Op::Kind::Clear;
            clear.rel = variantId(name, ram::RelVersion::New);
            loop.children.push_back(std::move(clear));
        }
        stmts.push_back(std::move(loop));
    }

    /**
     * Lowers one rule. For recursive rules (deltaOcc >= 0) the given
     * occurrence of a same-stratum atom reads the delta version and the
     * head inserts into the new version; a not-in-full check keeps the
     * new version disjoint from the full relation unless choice guards
     * subsume it.
     */
    Op lowerRule(const Rule& rule, const std::unordered_set<std::string>& stratumRels, int deltaOcc,
            bool intoNew) {
        // Variants start from their delta atom when it can lead; evaluating
        // anything larger first would rescan full relations every iteration.
        std::optional<std::size_t> deltaLiteral;
        if (deltaOcc >= 0) {
            int occ = 0;
            for (std::size_t i = 0; i < rule.body.size(); ++i) {
                const Literal& lit = rule.body[i];
                if (lit.kind == Literal::Kind::Positive && stratumRels.count(lit.atom.relation)) {
                    if (occ == deltaOcc) {
                        deltaLiteral = i;
                        break;
                    }
                    ++occ;
                }
            }
        }
        auto schedule = sem::scheduleBody(rule, deltaLiteral);
        if (schedule.stuck) {
            throw InternalError("lowering a rule whose body cannot be scheduled: " + toString(rule));
        }

        std::unordered_map<std::string, Expr> bindings;
        int firstFrame = 0;
        std::vector<RelId> scanned;

        Op body = buildChain(rule, stratumRels, deltaOcc, intoNew, schedule.order, 0, bindings,
                firstFrame, scanned);

        if (deltaOcc >= 0) {
            // Guard the whole rule with non-emptiness of its sources.
            std::vector<Cond> conds;
            std::vector<RelId> seen;
            for (RelId r : scanned) {
                if (std::find(seen.begin(), seen.end(), r) == seen.end()) {
                    seen.push_back(r);
                    conds.push_back(Cond::negation(Cond::emptiness(r)));
                }
            }
            if (!conds.empty()) {
                Op filter;
                filter.kind = Op::Kind::Filter;
                filter.cond = Cond::conjunction(std::move(conds));
                filter.children.push_back(std::move(body));
                return filter;
            }
        }
        return body;
    }

    Op buildChain(const Rule& rule, const std::unordered_set<std::string>& stratumRels, int deltaOcc,
            bool intoNew, const std::vector<std::size_t>& order, std::size_t step,
            std::unordered_map<std::string, Expr>& bindings, int& frame, std::vector<RelId>& scanned) {
        if (step == order.size()) return makeInsert(rule, intoNew, bindings);

        const Literal& lit = rule.body[order[step]];
        switch (lit.kind) {
            case Literal::Kind::Positive: {
                // Which same-stratum occurrence is this, in body order?
                int occ = -1;
                if (stratumRels.count(lit.atom.relation)) {
                    occ = 0;
                    for (std::size_t i = 0; i < order[step]; ++i) {
                        const Literal& prev = rule.body[i];
                        if (prev.kind == Literal::Kind::Positive && stratumRels.count(prev.atom.relation)) {
                            ++occ;
                        }
                    }
                }
                RelId rel;
                if (occ >= 0 && deltaOcc >= 0) {
                    rel = occ == deltaOcc ? variantId(lit.atom.relation, ram::RelVersion::Delta)
                                          : fullId(lit.atom.relation);
                } else {
                    rel = fullId(lit.atom.relation);
                }
                scanned.push_back(rel);

                int slot = frame++;
                frameCount_ = std::max(frameCount_, slot + 1);

                ram::Pattern pattern(lit.atom.args.size());
                std::vector<Cond> postConds;
                std::unordered_map<std::string, int> newVars;
                for (std::size_t i = 0; i < lit.atom.args.size(); ++i) {
                    const Term& arg = lit.atom.args[i];
                    switch (arg.kind) {
                        case Term::Kind::Wildcard:
                            break;
                        case Term::Kind::Variable: {
                            auto bound = bindings.find(arg.text);
                            if (bound != bindings.end()) {
                                pattern[i] = bound->second;
                            } else {
                                auto seenAt = newVars.find(arg.text);
                                if (seenAt != newVars.end()) {
                                    postConds.push_back(Cond::compare(CmpOp::Eq,
                                            Expr::elem(slot, static_cast<int>(i)),
                                            Expr::elem(slot, seenAt->second)));
                                } else {
                                    newVars.emplace(arg.text, static_cast<int>(i));
                                }
                            }
                            break;
                        }
                        default:
                            pattern[i] = evalTerm(arg, bindings);
                            break;
                    }
                }
                for (const auto& [name, idx] : newVars) {
                    bindings.emplace(name, Expr::elem(slot, idx));
                }

                bool anyBound = std::any_of(pattern.begin(), pattern.end(),
                        [](const auto& p) { return p.has_value(); });
                Op scanOp;
                scanOp.kind = anyBound ? Op::Kind::IndexScan : Op::Kind::Scan;
                scanOp.rel = rel;
                scanOp.frame = slot;
                if (anyBound) scanOp.pattern = std::move(pattern);

                Op inner = buildChain(rule, stratumRels, deltaOcc, intoNew, order, step + 1, bindings,
                        frame, scanned);
                if (!postConds.empty()) {
                    Op filter;
                    filter.kind = Op::Kind::Filter;
                    filter.cond = Cond::conjunction(std::move(postConds));
                    filter.children.push_back(std::move(inner));
                    inner = std::move(filter);
                }
                scanOp.children.push_back(std::move(inner));
                return scanOp;
            }

            case Literal::Kind::Negated: {
                ram::ExistenceCheck check;
                check.rel = fullId(lit.atom.relation);
                check.pattern.resize(lit.atom.args.size());
                for (std::size_t i = 0; i < lit.atom.args.size(); ++i) {
                    if (lit.atom.args[i].kind != Term::Kind::Wildcard) {
                        check.pattern[i] = evalTerm(lit.atom.args[i], bindings);
                    }
                }
                Op filter;
                filter.kind = Op::Kind::Filter;
                filter.cond = Cond::notExists(std::move(check));
                filter.children.push_back(buildChain(rule, stratumRels, deltaOcc, intoNew, order,
                        step + 1, bindings, frame, scanned));
                return filter;
            }

            case Literal::Kind::Comparison: {
                bool lhsBound = termBound(lit.cmp[0], bindings);
                bool rhsBound = termBound(lit.cmp[1], bindings);
                if (lhsBound && rhsBound) {
                    Op filter;
                    filter.kind = Op::Kind::Filter;
                    filter.cond = Cond::compare(lit.op, evalTerm(lit.cmp[0], bindings),
                            evalTerm(lit.cmp[1], bindings));
                    filter.children.push_back(buildChain(rule, stratumRels, deltaOcc, intoNew, order,
                            step + 1, bindings, frame, scanned));
                    return filter;
                }
                // Binding equality: the free variable takes the bound side,
                // inverting a one-level sum or difference if needed.
                auto var = sem::equalityBindsVar(
                        lit, [&](const std::string& v) { return bindings.count(v) > 0; });
                if (!var) throw InternalError("unschedulable comparison reached the lowerer");
                const Term& freeTerm = lhsBound ? lit.cmp[1] : lit.cmp[0];
                Expr boundSide = evalTerm(lhsBound ? lit.cmp[0] : lit.cmp[1], bindings);
                bindings.emplace(*var, invert(freeTerm, *var, std::move(boundSide), bindings));
                return buildChain(rule, stratumRels, deltaOcc, intoNew, order, step + 1, bindings, frame,
                        scanned);
            }

            case Literal::Kind::Aggregate: {
                int slot = frame++;
                frameCount_ = std::max(frameCount_, slot + 1);
                Op agg;
                agg.kind = Op::Kind::AggregateInto;
                agg.rel = fullId(lit.atom.relation);
                agg.frame = slot;
                agg.aggKind = lit.aggKind;
                agg.pattern.resize(lit.atom.args.size());
                for (std::size_t i = 0; i < lit.atom.args.size(); ++i) {
                    const Term& arg = lit.atom.args[i];
                    if (arg.kind == Term::Kind::Wildcard) continue;
                    if (arg.isVariable() && arg.text == lit.aggMeasureVar) {
                        agg.aggColumn = static_cast<int>(i);
                        continue;
                    }
                    agg.pattern[i] = evalTerm(arg, bindings);
                }
                // An already-bound result variable turns the aggregate into
                // an equality constraint on its value.
                std::optional<Expr> bound;
                auto existing = bindings.find(lit.aggBindVar);
                if (existing != bindings.end()) {
                    bound = existing->second;
                } else {
                    bindings.emplace(lit.aggBindVar, Expr::elem(slot, 0));
                }
                Op inner = buildChain(rule, stratumRels, deltaOcc, intoNew, order, step + 1, bindings,
                        frame, scanned);
                if (bound) {
                    Op filter;
                    filter.kind = Op::Kind::Filter;
                    filter.cond = Cond::compare(CmpOp::Eq, *bound, Expr::elem(slot, 0));
                    filter.children.push_back(std::move(inner));
                    inner = std::move(filter);
                }
                agg.children.push_back(std::move(inner));
                return agg;
            }

            default:
                throw InternalError("unexpected literal kind during lowering");
        }
    }

    Op makeInsert(const Rule& rule, bool intoNew, std::unordered_map<std::string, Expr>& bindings) {
        Op insert;
        insert.kind = Op::Kind::Insert;
        const std::string& head = rule.head.relation;
        insert.rel = intoNew ? variantId(head, ram::RelVersion::New) : fullId(head);
        for (const auto& arg : rule.head.args) insert.tuple.push_back(evalTerm(arg, bindings));

        // Standard semi-naive dedup: skip tuples already in the full
        // relation. Choice guards subsume this for constrained relations.
        if (intoNew && table_[fullId(head)].domains.empty()) {
            ram::ExistenceCheck check;
            check.rel = fullId(head);
            for (const auto& e : insert.tuple) check.pattern.emplace_back(e);
            Op filter;
            filter.kind = Op::Kind::Filter;
            filter.cond = Cond::notExists(std::move(check));
            filter.children.push_back(std::move(insert));
            return filter;
        }
        return insert;
    }

    bool termBound(const Term& term, const std::unordered_map<std::string, Expr>& bindings) const {
        std::vector<std::string> vars;
        sem::collectVariables(term, vars);
        for (const auto& v : vars) {
            if (!bindings.count(v)) return false;
        }
        return true;
    }

    /**
     * Solves `freeTerm = value` for `var`. freeTerm is either the variable
     * itself or a one-level sum/difference with the variable as one operand
     * and everything else already bound.
     */
    Expr invert(const Term& freeTerm, const std::string& var, Expr value,
            const std::unordered_map<std::string, Expr>& bindings) {
        if (freeTerm.isVariable()) return value;
        const Term& a = freeTerm.operands[0];
        const Term& b = freeTerm.operands[1];
        bool varIsLhs = a.isVariable() && a.text == var;
        Expr otherExpr = evalTerm(varIsLhs ? b : a, bindings);
        if (freeTerm.op == '+') {
            return Expr::binary(Expr::Kind::Sub, std::move(value), std::move(otherExpr));
        }
        if (varIsLhs) {  // var - other = value  =>  var = value + other
            return Expr::binary(Expr::Kind::Add, std::move(value), std::move(otherExpr));
        }
        // other - var = value  =>  var = other - value
        return Expr::binary(Expr::Kind::Sub, std::move(otherExpr), std::move(value));
    }

    Expr evalTerm(const Term& term, const std::unordered_map<std::string, Expr>& bindings) {
        switch (term.kind) {
            case Term::Kind::Variable:
                return bindings.at(term.text);
            case Term::Kind::SymbolConst:
                return Expr::sym(symbols_.intern(term.text));
            case Term::Kind::NumberConst:
                return Expr::num(term.number);
            case Term::Kind::Counter:
                return Expr::autoInc();
            case Term::Kind::Binary:
                return Expr::binary(term.op == '+' ? Expr::Kind::Add : Expr::Kind::Sub,
                        evalTerm(term.operands[0], bindings), evalTerm(term.operands[1], bindings));
            case Term::Kind::Wildcard:
                throw InternalError("wildcard in an expression position");
        }
        throw InternalError("unreachable term kind");
    }
};

void addGuardsTo(Op& op, const ram::RelationTable& rels) {
    for (auto& child : op.children) addGuardsTo(child, rels);
    if (op.kind != Op::Kind::Insert) return;
    const ram::RelationInfo& info = rels[op.rel];
    if (info.domains.empty()) return;

    Op guarded;
    guarded.kind = Op::Kind::GuardedInsert;
    guarded.rel = op.rel;
    guarded.tuple = op.tuple;
    for (const auto& domain : info.domains) {
        ram::ExistenceCheck check;
        check.rel = op.rel;
        check.pattern.resize(op.tuple.size());
        for (std::size_t c : domain.positions) check.pattern[c] = op.tuple[c];
        guarded.checks.push_back(check);
        if (info.version == ram::RelVersion::New) {
            check.rel = info.base;
            guarded.checks.push_back(std::move(check));
        }
    }
    op = std::move(guarded);
}

}  // namespace

LoweredProgram lowerProgram(const Program& program, const sem::StratifiedProgram& stratified,
        storage::SymbolTable& symbols) {
    Lowerer lowerer(program, stratified, symbols);
    return lowerer.run();
}

void addGuards(ram::RamProgram& program, const ram::RelationTable& relations) {
    for (auto& op : program.stmts) addGuardsTo(op, relations);
}

}  // namespace dlc::lower
