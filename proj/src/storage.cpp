#include "storage.h"

#include <algorithm>
#include <set>

namespace dlc::storage {

Relation::Relation(std::size_t arity, std::vector<ast::AttrType> types,
        std::vector<ast::ChoiceDomain> domains, const std::vector<IndexSignature>& signatures)
        : arity_(arity), types_(std::move(types)), domains_(std::move(domains)) {
    // Index 0: full lexicographic order.
    auto full = std::make_unique<Index>();
    for (std::size_t c = 0; c < arity_; ++c) full->order.push_back(static_cast<std::uint32_t>(c));
    indexes_.push_back(std::move(full));

    for (const auto& sig : signatures) {
        if (sig.empty() || sig.size() >= arity_) {
            signatures_[sig] = 0;
            continue;
        }
        std::vector<std::uint32_t> order;
        for (std::size_t c : sig) order.push_back(static_cast<std::uint32_t>(c));
        for (std::size_t c = 0; c < arity_; ++c) {
            if (std::find(sig.begin(), sig.end(), c) == sig.end()) {
                order.push_back(static_cast<std::uint32_t>(c));
            }
        }
        // A signature whose induced order equals the primary one aliases it.
        if (order == indexes_.front()->order) {
            signatures_[sig] = 0;
            continue;
        }
        std::size_t existing = indexes_.size();
        for (std::size_t i = 1; i < indexes_.size(); ++i) {
            if (indexes_[i]->order == order) {
                existing = i;
                break;
            }
        }
        if (existing == indexes_.size()) {
            auto index = std::make_unique<Index>();
            index->order = std::move(order);
            indexes_.push_back(std::move(index));
        }
        signatures_[sig] = existing;
    }
}

bool Relation::insert(const Tuple& tuple) {
    if (tuple.size() != arity_) {
        throw InternalError("ArityMismatch: tuple arity " + std::to_string(tuple.size()) +
                            " inserted into relation of arity " + std::to_string(arity_));
    }
    if (!indexes_.front()->set.insert(tuple).second) return false;
    for (std::size_t i = 1; i < indexes_.size(); ++i) indexes_[i]->set.insert(tuple);
    return true;
}

const Relation::Index& Relation::indexFor(const PatternValue& pattern) const {
    IndexSignature sig;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        if (pattern[i]) sig.push_back(i);
    }
    if (sig.empty() || sig.size() >= arity_) return primary();
    auto it = signatures_.find(sig);
    if (it == signatures_.end()) {
        throw InternalError("MissingIndex: no index planned for the probed signature");
    }
    return *indexes_[it->second];
}

bool Relation::exists(const PatternValue& pattern) const {
    if (pattern.size() != arity_) throw InternalError("ArityMismatch: pattern arity mismatch");
    const Index& index = indexFor(pattern);
    auto it = index.set.lower_bound(detail::Probe{&pattern, false});
    if (it == index.set.end()) return false;
    for (std::size_t i = 0; i < arity_; ++i) {
        if (pattern[i] && (*it)[i] != *pattern[i]) return false;
    }
    return true;
}

void Relation::scan(const PatternValue& pattern, const std::function<void(const Tuple&)>& fn) const {
    if (pattern.size() != arity_) throw InternalError("ArityMismatch: pattern arity mismatch");
    const Index& index = indexFor(pattern);
    auto it = index.set.lower_bound(detail::Probe{&pattern, false});
    auto end = index.set.upper_bound(detail::Probe{&pattern, true});
    for (; it != end; ++it) {
        bool match = true;
        for (std::size_t i = 0; i < arity_ && match; ++i) {
            if (pattern[i] && (*it)[i] != *pattern[i]) match = false;
        }
        if (match) fn(*it);
    }
}

void Relation::scanAll(const std::function<void(const Tuple&)>& fn) const {
    for (const auto& t : primary().set) fn(t);
}

std::int64_t Relation::aggregate(const PatternValue& pattern, ast::AggregateKind kind, int column,
        bool& any) const {
    std::int64_t count = 0;
    std::int64_t best = 0;
    bool seen = false;
    scan(pattern, [&](const Tuple& t) {
        ++count;
        if (column >= 0) {
            Value v = t[static_cast<std::size_t>(column)];
            if (!seen) {
                best = v;
            } else if (kind == ast::AggregateKind::Max) {
                best = std::max(best, v);
            } else {
                best = std::min(best, v);
            }
            seen = true;
        }
    });
    if (kind == ast::AggregateKind::Count) {
        any = true;
        return count;
    }
    any = seen;
    return best;
}

void Relation::mergeFrom(const Relation& src) {
    if (src.arity_ != arity_) throw InternalError("ArityMismatch: merge of relations with unequal arity");
    src.scanAll([&](const Tuple& t) { insert(t); });
#ifndef NDEBUG
    if (!checkFunctionalDependencies()) {
        throw InternalError("functional dependency violated after merge");
    }
#endif
}

void Relation::swapContents(Relation& other) {
    if (other.arity_ != arity_ || other.domains_ != domains_ || indexes_.size() != other.indexes_.size()) {
        throw InternalError("swap of relations with unequal shape");
    }
    indexes_.swap(other.indexes_);
}

void Relation::clear() {
    for (auto& index : indexes_) index->set.clear();
}

bool Relation::checkFunctionalDependencies() const {
    for (const auto& domain : domains_) {
        std::set<Tuple> seen;
        bool ok = true;
        scanAll([&](const Tuple& t) {
            Tuple key;
            for (std::size_t c : domain.positions) key.push_back(t[c]);
            if (!seen.insert(key).second) ok = false;
        });
        if (!ok) return false;
    }
    return true;
}

namespace {

IndexSignature boundColumns(const ram::Pattern& pattern) {
    IndexSignature sig;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        if (pattern[i]) sig.push_back(i);
    }
    return sig;
}

void collect(const ram::Cond& cond, std::vector<std::set<IndexSignature>>& sigs) {
    switch (cond.kind) {
        case ram::Cond::Kind::NotExists:
        case ram::Cond::Kind::Exists:
            sigs[static_cast<std::size_t>(cond.check.rel)].insert(boundColumns(cond.check.pattern));
            break;
        case ram::Cond::Kind::And:
        case ram::Cond::Kind::Not:
            for (const auto& c : cond.operands) collect(c, sigs);
            break;
        default:
            break;
    }
}

void collect(const ram::Op& op, std::vector<std::set<IndexSignature>>& sigs) {
    switch (op.kind) {
        case ram::Op::Kind::IndexScan:
            sigs[static_cast<std::size_t>(op.rel)].insert(boundColumns(op.pattern));
            break;
        case ram::Op::Kind::AggregateInto:
            sigs[static_cast<std::size_t>(op.rel)].insert(boundColumns(op.pattern));
            break;
        case ram::Op::Kind::GuardedInsert:
            for (const auto& check : op.checks) {
                sigs[static_cast<std::size_t>(check.rel)].insert(boundColumns(check.pattern));
            }
            break;
        case ram::Op::Kind::Filter:
        case ram::Op::Kind::ExitIf:
            collect(op.cond, sigs);
            break;
        default:
            break;
    }
    for (const auto& child : op.children) collect(child, sigs);
}

}  // namespace

IndexPlan planIndexes(const ram::RamProgram& program, const ram::RelationTable& rels) {
    std::vector<std::set<IndexSignature>> sigs(rels.size());
    for (const auto& op : program.stmts) collect(op, sigs);

    // Drop empty and fully-bound signatures: the full-order index serves them.
    for (std::size_t i = 0; i < sigs.size(); ++i) {
        std::set<IndexSignature> kept;
        for (const auto& sig : sigs[i]) {
            if (!sig.empty() && sig.size() < rels[static_cast<ram::RelId>(i)].arity) kept.insert(sig);
        }
        sigs[i] = std::move(kept);
    }

    // Delta/new variants of a relation share one signature set so their
    // contents can be swapped wholesale.
    for (std::size_t i = 0; i < rels.size(); ++i) {
        const auto& info = rels[static_cast<ram::RelId>(i)];
        if (info.version == ram::RelVersion::Delta) {
            for (std::size_t j = 0; j < rels.size(); ++j) {
                const auto& other = rels[static_cast<ram::RelId>(j)];
                if (other.version == ram::RelVersion::New && other.base == info.base) {
                    std::set<IndexSignature> merged = sigs[i];
                    merged.insert(sigs[j].begin(), sigs[j].end());
                    sigs[i] = merged;
                    sigs[j] = std::move(merged);
                }
            }
        }
    }

    IndexPlan plan;
    for (auto& s : sigs) plan.signatures.emplace_back(s.begin(), s.end());
    return plan;
}

Instance makeInstance(const ram::RelationTable& rels, const IndexPlan& plan) {
    Instance instance;
    for (std::size_t i = 0; i < rels.size(); ++i) {
        const auto& info = rels[static_cast<ram::RelId>(i)];
        instance.addRelation(Relation(info.arity, info.types, info.domains, plan.of(static_cast<ram::RelId>(i))));
    }
    return instance;
}

}  // namespace dlc::storage
