#include "rewrite.h"

#include "semantics.h"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace dlc::rewrite {

using namespace ast;

namespace {

bool hasChoiceGoal(const Rule& rule) {
    for (const auto& lit : rule.body) {
        if (lit.kind == Literal::Kind::ChoiceGoal) return true;
    }
    return false;
}

bool nestedChoiceGoal(const Literal& lit) {
    if (lit.kind != Literal::Kind::Disjunction) return false;
    for (const auto& alt : lit.disjuncts) {
        for (const auto& l : alt) {
            if (l.kind == Literal::Kind::ChoiceGoal || nestedChoiceGoal(l)) return true;
        }
    }
    return false;
}

// Type of a variable as seen by the positive body atoms, defaulting to
// number when it only appears in comparisons or arithmetic.
AttrType variableType(const std::string& var, const Rule& rule,
        const std::unordered_map<std::string, const RelationDecl*>& decls) {
    for (const auto& lit : rule.body) {
        if (lit.kind != Literal::Kind::Positive && lit.kind != Literal::Kind::Negated) continue;
        auto it = decls.find(lit.atom.relation);
        if (it == decls.end()) continue;
        for (std::size_t i = 0; i < lit.atom.args.size() && i < it->second->attrs.size(); ++i) {
            if (lit.atom.args[i].isVariable() && lit.atom.args[i].text == var) {
                return it->second->attrs[i].type;
            }
        }
    }
    return AttrType::Number;
}

}  // namespace

RewriteResult lowerRuleChoice(const Program& program) {
    RewriteResult result;
    result.program = program;
    result.program.rules.clear();

    std::unordered_map<std::string, const RelationDecl*> decls;
    for (const auto& decl : program.decls) decls.emplace(decl.name, &decl);

    std::size_t ruleIndex = 0;
    for (const auto& rule : program.rules) {
        ++ruleIndex;
        for (const auto& lit : rule.body) {
            if (nestedChoiceGoal(lit)) {
                result.diags.push_back({lit.pos, "ChoiceGoalInDisjunction",
                        "choice goals may not appear inside disjunctions"});
            }
        }
        if (!hasChoiceGoal(rule)) {
            result.program.rules.push_back(rule);
            continue;
        }

        // Variables of the non-choice body literals, for the occurrence check.
        std::unordered_set<std::string> bodyVars;
        for (const auto& lit : rule.body) {
            if (lit.kind == Literal::Kind::ChoiceGoal) continue;
            switch (lit.kind) {
                case Literal::Kind::Positive:
                case Literal::Kind::Negated:
                case Literal::Kind::Aggregate:
                    for (const auto& arg : lit.atom.args) {
                        std::vector<std::string> vars;
                        sem::collectVariables(arg, vars);
                        bodyVars.insert(vars.begin(), vars.end());
                    }
                    if (!lit.aggBindVar.empty()) bodyVars.insert(lit.aggBindVar);
                    break;
                case Literal::Kind::Comparison:
                    for (const auto& side : lit.cmp) {
                        std::vector<std::string> vars;
                        sem::collectVariables(side, vars);
                        bodyVars.insert(vars.begin(), vars.end());
                    }
                    break;
                default:
                    break;
            }
        }

        // Auxiliary attribute order: head variables first, then remaining
        // choice-goal variables in first-occurrence order.
        std::vector<std::string> auxVars;
        auto addVar = [&](const std::string& v) {
            if (std::find(auxVars.begin(), auxVars.end(), v) == auxVars.end()) auxVars.push_back(v);
        };
        std::vector<std::string> headVars;
        for (const auto& arg : rule.head.args) sem::collectVariables(arg, headVars);
        for (const auto& v : headVars) addVar(v);

        bool bad = false;
        std::vector<const Literal*> goals;
        for (const auto& lit : rule.body) {
            if (lit.kind != Literal::Kind::ChoiceGoal) continue;
            goals.push_back(&lit);
            for (const auto* side : {&lit.domainVars, &lit.dependentVars}) {
                for (const auto& v : *side) {
                    if (!bodyVars.count(v)) {
                        result.diags.push_back({lit.pos, "ChoiceVarNotInBody",
                                "choice goal variable '" + v + "' does not occur in the rule body"});
                        bad = true;
                    }
                    addVar(v);
                }
            }
        }
        if (bad) {
            result.program.rules.push_back(rule);
            continue;
        }

        RelationDecl aux;
        aux.name = rule.head.relation + "__choice_r" + std::to_string(ruleIndex);
        aux.pos = rule.pos;
        for (const auto& v : auxVars) {
            aux.attrs.push_back({v, variableType(v, rule, decls)});
        }
        for (const Literal* goal : goals) {
            ChoiceDomain dom;
            std::vector<std::string> names;
            for (const auto& v : goal->domainVars) {
                auto it = std::find(auxVars.begin(), auxVars.end(), v);
                dom.positions.push_back(static_cast<std::size_t>(it - auxVars.begin()));
                names.push_back(v);
            }
            std::sort(dom.positions.begin(), dom.positions.end());
            aux.choiceDomains.push_back(std::move(dom));
            aux.choiceDomainNames.push_back(std::move(names));
        }

        // aux(Y') :- B(Y).
        Rule auxRule;
        auxRule.pos = rule.pos;
        auxRule.head.relation = aux.name;
        for (const auto& v : auxVars) auxRule.head.args.push_back(Term::variable(v));
        for (const auto& lit : rule.body) {
            if (lit.kind != Literal::Kind::ChoiceGoal) auxRule.body.push_back(lit);
        }

        // A(X) :- aux(Y').
        Rule copyRule;
        copyRule.pos = rule.pos;
        copyRule.head = rule.head;
        Atom auxAtom;
        auxAtom.relation = aux.name;
        for (const auto& v : auxVars) auxAtom.args.push_back(Term::variable(v));
        copyRule.body.push_back(Literal::positive(std::move(auxAtom)));

        result.program.decls.push_back(std::move(aux));
        result.auxRelations.push_back(result.program.decls.back().name);
        result.program.rules.push_back(std::move(auxRule));
        result.program.rules.push_back(std::move(copyRule));
    }
    return result;
}

}  // namespace dlc::rewrite
