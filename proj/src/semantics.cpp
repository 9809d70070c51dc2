#include "semantics.h"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace dlc::sem {

using namespace ast;

namespace {

using DeclMap = std::unordered_map<std::string, const RelationDecl*>;

DeclMap declMap(const Program& program) {
    DeclMap map;
    for (const auto& decl : program.decls) map.emplace(decl.name, &decl);
    return map;
}

void forEachAtom(const std::vector<Literal>& body, const std::function<void(const Atom&, bool)>& fn);

void forEachAtom(const Literal& lit, const std::function<void(const Atom&, bool)>& fn) {
    switch (lit.kind) {
        case Literal::Kind::Positive:
            fn(lit.atom, false);
            break;
        case Literal::Kind::Negated:
        case Literal::Kind::Aggregate:
            fn(lit.atom, true);
            break;
        case Literal::Kind::Disjunction:
            for (const auto& alt : lit.disjuncts) forEachAtom(alt, fn);
            break;
        default:
            break;
    }
}

void forEachAtom(const std::vector<Literal>& body, const std::function<void(const Atom&, bool)>& fn) {
    for (const auto& lit : body) forEachAtom(lit, fn);
}

bool termHasCounter(const Term& t) {
    if (t.kind == Term::Kind::Counter) return true;
    for (const auto& op : t.operands) {
        if (termHasCounter(op)) return true;
    }
    return false;
}

bool literalHasCounter(const Literal& lit) {
    switch (lit.kind) {
        case Literal::Kind::Positive:
        case Literal::Kind::Negated:
        case Literal::Kind::Aggregate:
            for (const auto& a : lit.atom.args) {
                if (termHasCounter(a)) return true;
            }
            return false;
        case Literal::Kind::Comparison:
            return termHasCounter(lit.cmp[0]) || termHasCounter(lit.cmp[1]);
        case Literal::Kind::Disjunction:
            for (const auto& alt : lit.disjuncts) {
                for (const auto& l : alt) {
                    if (literalHasCounter(l)) return true;
                }
            }
            return false;
        default:
            return false;
    }
}

}  // namespace

void collectVariables(const Term& term, std::vector<std::string>& out) {
    if (term.kind == Term::Kind::Variable) {
        out.push_back(term.text);
        return;
    }
    for (const auto& op : term.operands) collectVariables(op, out);
}

std::vector<Diagnostic> checkStructure(const Program& program) {
    std::vector<Diagnostic> diags;
    auto decls = declMap(program);

    std::unordered_set<std::string> seen;
    for (const auto& decl : program.decls) {
        if (!seen.insert(decl.name).second) {
            diags.push_back({decl.pos, "DuplicateDecl", "relation '" + decl.name + "' declared more than once"});
        }
        if (decl.name.find("__choice_") != std::string::npos) {
            diags.push_back({decl.pos, "ReservedRelationName",
                    "relation name '" + decl.name + "' uses the reserved infix '__choice_'"});
        }
        std::unordered_set<std::string> attrs;
        for (const auto& attr : decl.attrs) {
            if (!attrs.insert(attr.name).second) {
                diags.push_back({decl.pos, "DuplicateAttribute",
                        "attribute '" + attr.name + "' declared twice on relation '" + decl.name + "'"});
            }
        }
    }

    auto checkAtomRef = [&](const Atom& atom) {
        auto it = decls.find(atom.relation);
        if (it == decls.end()) {
            diags.push_back({atom.pos, "UnknownRelation", "relation '" + atom.relation + "' is not declared"});
            return;
        }
        if (atom.args.size() != arity(*it->second)) {
            diags.push_back({atom.pos, "ArityMismatch",
                    "relation '" + atom.relation + "' has arity " + std::to_string(arity(*it->second)) +
                            " but is used with " + std::to_string(atom.args.size()) + " arguments"});
        }
    };

    std::unordered_set<std::string> inputRels;
    for (const auto& io : program.io) {
        if (decls.find(io.relation) == decls.end()) {
            diags.push_back({io.pos, "UnknownRelation", "relation '" + io.relation + "' is not declared"});
        }
        if (io.kind == IoKind::Input) inputRels.insert(io.relation);
    }

    for (const auto& fact : program.facts) {
        checkAtomRef(fact.atom);
        for (const auto& arg : fact.atom.args) {
            if (arg.kind != Term::Kind::SymbolConst && arg.kind != Term::Kind::NumberConst) {
                diags.push_back({fact.pos, "FactNotConstant",
                        "fact for '" + fact.atom.relation + "' has a non-constant argument"});
                break;
            }
        }
        if (inputRels.count(fact.atom.relation)) {
            diags.push_back({fact.pos, "FactForInputRelation",
                    "relation '" + fact.atom.relation + "' is an input relation and cannot have source facts"});
        }
    }

    for (const auto& rule : program.rules) {
        checkAtomRef(rule.head);
        for (const auto& arg : rule.head.args) {
            if (arg.kind == Term::Kind::Wildcard) {
                diags.push_back({rule.pos, "WildcardInHead",
                        "rule head for '" + rule.head.relation + "' contains a wildcard"});
            }
        }
        if (inputRels.count(rule.head.relation)) {
            diags.push_back({rule.pos, "RuleForInputRelation",
                    "relation '" + rule.head.relation + "' is an input relation and cannot be derived"});
        }
        forEachAtom(rule.body, [&](const Atom& atom, bool) { checkAtomRef(atom); });
        for (const auto& lit : rule.body) {
            if (literalHasCounter(lit)) {
                diags.push_back({lit.pos, "CounterInBody", "the counter '$' may appear only in rule heads"});
            }
            if (lit.kind == Literal::Kind::ChoiceGoal) {
                for (const auto& v : lit.domainVars) {
                    if (std::find(lit.dependentVars.begin(), lit.dependentVars.end(), v) !=
                            lit.dependentVars.end()) {
                        diags.push_back({lit.pos, "ChoiceVarOverlap",
                                "variable '" + v + "' appears in both sides of a choice goal"});
                    }
                }
            }
        }
    }
    return diags;
}

std::vector<Diagnostic> checkChoiceDomains(const Program& program) {
    std::vector<Diagnostic> diags;
    for (const auto& decl : program.decls) {
        for (const auto& names : decl.choiceDomainNames) {
            std::unordered_set<std::string> seen;
            for (const auto& name : names) {
                bool known = false;
                for (const auto& attr : decl.attrs) {
                    if (attr.name == name) known = true;
                }
                if (!known) {
                    diags.push_back({decl.pos, "UnknownAttribute",
                            "choice domain of '" + decl.name + "' names unknown attribute '" + name + "'"});
                }
                if (!seen.insert(name).second) {
                    diags.push_back({decl.pos, "DuplicateAttributeInDomain",
                            "attribute '" + name + "' repeated within a choice domain of '" + decl.name + "'"});
                }
            }
        }
    }
    return diags;
}

std::vector<ChoiceDomain> reduceRedundantDomains(const std::vector<ChoiceDomain>& domains) {
    std::vector<ChoiceDomain> kept;
    for (std::size_t i = 0; i < domains.size(); ++i) {
        const auto& d = domains[i];
        bool redundant = false;
        // Implied by any strictly smaller domain anywhere in the list.
        for (const auto& e : domains) {
            if (e.positions.size() < d.positions.size() &&
                    std::includes(d.positions.begin(), d.positions.end(), e.positions.begin(),
                            e.positions.end())) {
                redundant = true;
                break;
            }
        }
        // Exact duplicate of an earlier domain.
        for (std::size_t j = 0; j < i && !redundant; ++j) {
            if (domains[j].positions == d.positions) redundant = true;
        }
        if (!redundant) kept.push_back(d);
    }
    return kept;
}

namespace {

void expandRule(const Rule& rule, std::vector<Rule>& out) {
    for (std::size_t i = 0; i < rule.body.size(); ++i) {
        if (rule.body[i].kind != Literal::Kind::Disjunction) continue;
        for (const auto& alt : rule.body[i].disjuncts) {
            Rule variant;
            variant.head = rule.head;
            variant.pos = rule.pos;
            variant.body.assign(rule.body.begin(), rule.body.begin() + i);
            variant.body.insert(variant.body.end(), alt.begin(), alt.end());
            variant.body.insert(variant.body.end(), rule.body.begin() + i + 1, rule.body.end());
            expandRule(variant, out);
        }
        return;
    }
    out.push_back(rule);
}

}  // namespace

Program normalize(const Program& program) {
    Program result = program;
    result.rules.clear();
    for (const auto& rule : program.rules) expandRule(rule, result.rules);
    return result;
}

std::optional<std::string> equalityBindsVar(const Literal& cmp,
        const std::function<bool(const std::string&)>& isBound) {
    if (cmp.kind != Literal::Kind::Comparison || cmp.op != CmpOp::Eq) return std::nullopt;

    auto ready = [&](const Term& t) {
        std::vector<std::string> vars;
        collectVariables(t, vars);
        for (const auto& v : vars) {
            if (!isBound(v)) return false;
        }
        return true;
    };
    auto freeSide = [&](const Term& t) -> std::optional<std::string> {
        // A bare unbound variable, or a one-level sum/difference with one
        // unbound variable operand.
        if (t.isVariable() && !isBound(t.text)) return t.text;
        if (t.kind == Term::Kind::Binary) {
            const Term& a = t.operands[0];
            const Term& b = t.operands[1];
            if (a.isVariable() && !isBound(a.text) && ready(b)) return a.text;
            if (b.isVariable() && !isBound(b.text) && ready(a)) return b.text;
        }
        return std::nullopt;
    };

    bool lhsReady = ready(cmp.cmp[0]);
    bool rhsReady = ready(cmp.cmp[1]);
    if (lhsReady && rhsReady) return std::nullopt;
    if (rhsReady) return freeSide(cmp.cmp[0]);
    if (lhsReady) return freeSide(cmp.cmp[1]);
    return std::nullopt;
}

ScheduleResult scheduleBody(const Rule& rule, std::optional<std::size_t> preferFirst) {
    ScheduleResult result;
    std::unordered_set<std::string> bound;
    auto isBound = [&](const std::string& v) { return bound.count(v) > 0; };

    auto varsBound = [&](const Term& t) {
        std::vector<std::string> vars;
        collectVariables(t, vars);
        for (const auto& v : vars) {
            if (!bound.count(v)) return false;
        }
        return true;
    };

    auto evaluable = [&](const Literal& lit) {
        switch (lit.kind) {
            case Literal::Kind::Positive:
                for (const auto& arg : lit.atom.args) {
                    if (arg.kind == Term::Kind::Binary && !varsBound(arg)) return false;
                }
                return true;
            case Literal::Kind::Negated:
                for (const auto& arg : lit.atom.args) {
                    if (arg.kind != Term::Kind::Wildcard && !varsBound(arg)) return false;
                }
                return true;
            case Literal::Kind::Comparison: {
                if (varsBound(lit.cmp[0]) && varsBound(lit.cmp[1])) return true;
                return equalityBindsVar(lit, isBound).has_value();
            }
            case Literal::Kind::Aggregate:
                for (const auto& arg : lit.atom.args) {
                    if (arg.kind == Term::Kind::Wildcard) continue;
                    if (arg.kind == Term::Kind::Variable && arg.text == lit.aggMeasureVar) continue;
                    if (!varsBound(arg)) return false;
                }
                return true;
            default:
                return false;  // choice goals and disjunctions never schedule
        }
    };

    auto bindFrom = [&](const Literal& lit) {
        switch (lit.kind) {
            case Literal::Kind::Positive:
                for (const auto& arg : lit.atom.args) {
                    if (arg.kind == Term::Kind::Variable) bound.insert(arg.text);
                }
                break;
            case Literal::Kind::Comparison:
                if (auto var = equalityBindsVar(lit, isBound)) bound.insert(*var);
                break;
            case Literal::Kind::Aggregate:
                bound.insert(lit.aggBindVar);
                break;
            default:
                break;
        }
    };

    std::vector<bool> done(rule.body.size(), false);
    if (preferFirst && *preferFirst < rule.body.size() && evaluable(rule.body[*preferFirst])) {
        bindFrom(rule.body[*preferFirst]);
        result.order.push_back(*preferFirst);
        done[*preferFirst] = true;
    }
    for (std::size_t scheduled = result.order.size(); scheduled < rule.body.size();) {
        bool progress = false;
        for (std::size_t i = 0; i < rule.body.size(); ++i) {
            if (done[i]) continue;
            if (!evaluable(rule.body[i])) continue;
            bindFrom(rule.body[i]);
            result.order.push_back(i);
            done[i] = true;
            ++scheduled;
            progress = true;
            break;
        }
        if (!progress) {
            for (std::size_t i = 0; i < rule.body.size(); ++i) {
                if (!done[i]) {
                    result.stuck = i;
                    break;
                }
            }
            break;
        }
    }

    std::vector<std::string> headVars;
    for (const auto& arg : rule.head.args) collectVariables(arg, headVars);
    for (const auto& v : headVars) {
        if (!bound.count(v) &&
                std::find(result.unboundHead.begin(), result.unboundHead.end(), v) == result.unboundHead.end()) {
            result.unboundHead.push_back(v);
        }
    }
    return result;
}

std::vector<Diagnostic> checkGroundedness(const Program& program) {
    std::vector<Diagnostic> diags;
    for (const auto& rule : program.rules) {
        auto schedule = scheduleBody(rule);
        if (schedule.stuck) {
            const Literal& lit = rule.body[*schedule.stuck];
            if (lit.kind == Literal::Kind::ChoiceGoal) {
                diags.push_back({lit.pos, "UnloweredChoiceGoal",
                        "rule choice goal must be desugared before semantic checking"});
            } else {
                std::vector<std::string> vars;
                if (lit.kind == Literal::Kind::Comparison) {
                    collectVariables(lit.cmp[0], vars);
                    collectVariables(lit.cmp[1], vars);
                } else {
                    for (const auto& arg : lit.atom.args) collectVariables(arg, vars);
                }
                std::string var = vars.empty() ? "?" : vars.front();
                diags.push_back({lit.pos, "UngroundedVariable",
                        "variable '" + var + "' cannot be grounded in rule " + toString(rule)});
            }
            continue;
        }
        for (const auto& v : schedule.unboundHead) {
            diags.push_back({rule.pos, "UngroundedVariable",
                    "head variable '" + v + "' is not grounded in rule " + toString(rule)});
        }
    }
    return diags;
}

namespace {

/** Union-find type solver for one rule. */
class TypeSolver {
public:
    explicit TypeSolver(std::vector<Diagnostic>& diags, SourcePos pos) : diags_(diags), pos_(pos) {}

    void requireVar(const std::string& var, AttrType type) {
        auto [it, fresh] = types_.try_emplace(key(var), type);
        if (!fresh && it->second != type) conflict(var);
    }

    void unify(const std::string& a, const std::string& b) {
        std::string ra = key(a), rb = key(b);
        if (ra == rb) return;
        parent_[rb] = ra;
        auto ita = types_.find(ra);
        auto itb = types_.find(rb);
        if (itb != types_.end()) {
            if (ita == types_.end()) {
                types_.emplace(ra, itb->second);
            } else if (ita->second != itb->second) {
                conflict(a);
            }
            types_.erase(rb);
        }
    }

    // Constrains a term to a type; inner arithmetic forces Number.
    void requireTerm(const Term& t, AttrType type) {
        switch (t.kind) {
            case Term::Kind::Variable:
                requireVar(t.text, type);
                break;
            case Term::Kind::SymbolConst:
                if (type != AttrType::Symbol) conflict("\"" + t.text + "\"");
                break;
            case Term::Kind::NumberConst:
            case Term::Kind::Counter:
                if (type != AttrType::Number) conflict(std::to_string(t.number));
                break;
            case Term::Kind::Binary:
                if (type != AttrType::Number) conflict("arithmetic expression");
                for (const auto& op : t.operands) requireTerm(op, AttrType::Number);
                break;
            case Term::Kind::Wildcard:
                break;
        }
    }

    std::optional<AttrType> typeOf(const Term& t) {
        switch (t.kind) {
            case Term::Kind::Variable: {
                auto it = types_.find(key(t.text));
                return it == types_.end() ? std::nullopt : std::optional(it->second);
            }
            case Term::Kind::SymbolConst:
                return AttrType::Symbol;
            case Term::Kind::NumberConst:
            case Term::Kind::Counter:
            case Term::Kind::Binary:
                return AttrType::Number;
            case Term::Kind::Wildcard:
                return std::nullopt;
        }
        return std::nullopt;
    }

private:
    std::string key(const std::string& var) {
        auto it = parent_.find(var);
        if (it == parent_.end()) return var;
        std::string root = key(it->second);
        parent_[var] = root;
        return root;
    }

    void conflict(const std::string& what) {
        diags_.push_back({pos_, "TypeMismatch", "symbol/number mismatch involving " + what});
    }

    std::vector<Diagnostic>& diags_;
    SourcePos pos_;
    std::unordered_map<std::string, std::string> parent_;
    std::unordered_map<std::string, AttrType> types_;
};

}  // namespace

std::vector<Diagnostic> checkTypes(const Program& program) {
    std::vector<Diagnostic> diags;
    auto decls = declMap(program);

    auto attrType = [&](const Atom& atom, std::size_t i) -> std::optional<AttrType> {
        auto it = decls.find(atom.relation);
        if (it == decls.end() || i >= it->second->attrs.size()) return std::nullopt;
        return it->second->attrs[i].type;
    };

    for (const auto& fact : program.facts) {
        for (std::size_t i = 0; i < fact.atom.args.size(); ++i) {
            auto expected = attrType(fact.atom, i);
            if (!expected) continue;
            const Term& arg = fact.atom.args[i];
            bool ok = (arg.kind == Term::Kind::SymbolConst && *expected == AttrType::Symbol) ||
                      (arg.kind == Term::Kind::NumberConst && *expected == AttrType::Number);
            if (!ok) {
                diags.push_back({fact.pos, "TypeMismatch",
                        "fact argument " + std::to_string(i) + " of '" + fact.atom.relation +
                                "' does not match the declared attribute type"});
            }
        }
    }

    for (const auto& rule : program.rules) {
        TypeSolver solver(diags, rule.pos);

        auto constrainAtom = [&](const Atom& atom) {
            for (std::size_t i = 0; i < atom.args.size(); ++i) {
                auto expected = attrType(atom, i);
                if (expected) solver.requireTerm(atom.args[i], *expected);
            }
        };

        constrainAtom(rule.head);
        for (const auto& lit : rule.body) {
            switch (lit.kind) {
                case Literal::Kind::Positive:
                case Literal::Kind::Negated:
                    constrainAtom(lit.atom);
                    break;
                case Literal::Kind::Aggregate:
                    constrainAtom(lit.atom);
                    solver.requireVar(lit.aggBindVar, AttrType::Number);
                    if (!lit.aggMeasureVar.empty()) solver.requireVar(lit.aggMeasureVar, AttrType::Number);
                    break;
                case Literal::Kind::Comparison: {
                    bool ordered = lit.op != CmpOp::Eq && lit.op != CmpOp::Ne;
                    if (ordered) {
                        solver.requireTerm(lit.cmp[0], AttrType::Number);
                        solver.requireTerm(lit.cmp[1], AttrType::Number);
                        break;
                    }
                    auto lt = solver.typeOf(lit.cmp[0]);
                    auto rt = solver.typeOf(lit.cmp[1]);
                    if (lt && rt && *lt != *rt) {
                        diags.push_back({lit.pos, "TypeMismatch",
                                "comparison mixes a symbol with a number"});
                    } else if (lt && !rt) {
                        solver.requireTerm(lit.cmp[1], *lt);
                    } else if (rt && !lt) {
                        solver.requireTerm(lit.cmp[0], *rt);
                    } else if (!lt && !rt && lit.cmp[0].isVariable() && lit.cmp[1].isVariable()) {
                        solver.unify(lit.cmp[0].text, lit.cmp[1].text);
                    }
                    break;
                }
                default:
                    break;
            }
        }
    }
    return diags;
}

StratifyResult stratify(const Program& program) {
    StratifyResult result;

    std::vector<std::string> names;
    std::unordered_map<std::string, std::size_t> index;
    for (const auto& decl : program.decls) {
        index.emplace(decl.name, names.size());
        names.push_back(decl.name);
    }

    // Dependency edges body -> head; `negated` wins over plain edges.
    std::map<std::pair<std::size_t, std::size_t>, bool> edges;
    for (const auto& rule : program.rules) {
        auto head = index.find(rule.head.relation);
        if (head == index.end()) continue;
        forEachAtom(rule.body, [&](const Atom& atom, bool negatedOrAgg) {
            auto it = index.find(atom.relation);
            if (it == index.end()) return;
            auto& neg = edges[{it->second, head->second}];
            neg = neg || negatedOrAgg;
        });
    }

    // Tarjan SCC; nodes are visited in declaration order.
    std::vector<std::vector<std::size_t>> succ(names.size());
    for (const auto& [edge, neg] : edges) succ[edge.first].push_back(edge.second);

    std::vector<int> idx(names.size(), -1), low(names.size(), 0), comp(names.size(), -1);
    std::vector<bool> onStack(names.size(), false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> sccs;
    int counter = 0;

    auto strongconnect = [&](auto&& self, std::size_t v) -> void {
        idx[v] = low[v] = counter++;
        stack.push_back(v);
        onStack[v] = true;
        for (std::size_t w : succ[v]) {
            if (idx[w] < 0) {
                self(self, w);
                low[v] = std::min(low[v], low[w]);
            } else if (onStack[w]) {
                low[v] = std::min(low[v], idx[w]);
            }
        }
        if (low[v] == idx[v]) {
            std::vector<std::size_t> scc;
            for (;;) {
                std::size_t w = stack.back();
                stack.pop_back();
                onStack[w] = false;
                comp[w] = static_cast<int>(sccs.size());
                scc.push_back(w);
                if (w == v) break;
            }
            std::sort(scc.begin(), scc.end());
            sccs.push_back(std::move(scc));
        }
    };
    for (std::size_t v = 0; v < names.size(); ++v) {
        if (idx[v] < 0) strongconnect(strongconnect, v);
    }

    for (const auto& [edge, neg] : edges) {
        if (neg && comp[edge.first] == comp[edge.second]) {
            std::string cycle;
            for (std::size_t v : sccs[comp[edge.first]]) {
                if (!cycle.empty()) cycle += " -> ";
                cycle += names[v];
            }
            result.diags.push_back({{}, "CycleError",
                    "relation '" + names[edge.second] + "' depends on the negation or aggregation of '" +
                            names[edge.first] + "' within the recursive cycle: " + cycle});
            return result;
        }
    }

    // Tarjan emits SCCs in reverse topological order.
    StratifiedProgram stratified;
    for (auto it = sccs.rbegin(); it != sccs.rend(); ++it) {
        Stratum stratum;
        for (std::size_t v : *it) stratum.relations.push_back(names[v]);
        std::unordered_set<std::string> members(stratum.relations.begin(), stratum.relations.end());
        for (const auto& rule : program.rules) {
            if (members.count(rule.head.relation)) stratum.rules.push_back(rule);
        }
        stratified.strata.push_back(std::move(stratum));
    }
    result.program = std::move(stratified);
    return result;
}

}  // namespace dlc::sem
