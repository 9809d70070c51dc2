/**
 * @file storage.h
 *
 * In-memory relation store. Values are interned symbol ids or signed
 * integers, both held as int64 cells typed by the relation schema. Each
 * relation keeps one ordered index per planned column signature; the
 * full lexicographic order always exists and serves scans, output and
 * fully-bound membership probes.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#ifdef DLC_HAVE_ABSL
#include <absl/container/btree_set.h>
#else
#include <set>
#endif

#include <boost/container/small_vector.hpp>

#include "diagnostics.h"
#include "ram.h"

namespace dlc::storage {

using Value = std::int64_t;
using Tuple = boost::container::small_vector<Value, 4>;

/** Wildcard-capable concrete probe; disengaged cells match anything. */
using PatternValue = boost::container::small_vector<std::optional<Value>, 4>;

class SymbolTable : public ram::SymbolResolver {
public:
    std::int64_t intern(std::string_view text) {
        auto it = ids_.find(std::string(text));
        if (it != ids_.end()) return it->second;
        std::int64_t id = static_cast<std::int64_t>(strings_.size());
        strings_.emplace_back(text);
        ids_.emplace(strings_.back(), id);
        return id;
    }

    std::string resolve(std::int64_t id) const override {
        return strings_.at(static_cast<std::size_t>(id));
    }

    std::size_t size() const {
        return strings_.size();
    }

private:
    std::vector<std::string> strings_;
    std::unordered_map<std::string, std::int64_t> ids_;
};

/** Sorted list of bound column positions. */
using IndexSignature = std::vector<std::size_t>;

namespace detail {

/** Probe keys for range lookups under a column permutation. */
struct Probe {
    const PatternValue* pattern;
    bool high;  // low probe sorts before all matches, high probe after
};

struct TupleOrder {
    using is_transparent = void;

    const std::vector<std::uint32_t>* order;

    bool operator()(const Tuple& a, const Tuple& b) const {
        for (auto c : *order) {
            if (a[c] != b[c]) return a[c] < b[c];
        }
        return false;
    }
    bool operator()(const Tuple& a, const Probe& p) const {
        return compare(a, p) < 0;
    }
    bool operator()(const Probe& p, const Tuple& a) const {
        return compare(a, p) > 0;
    }

private:
    int compare(const Tuple& a, const Probe& p) const {
        for (auto c : *order) {
            const auto& cell = (*p.pattern)[c];
            if (!cell) return p.high ? -1 : 1;
            if (a[c] != *cell) return a[c] < *cell ? -1 : 1;
        }
        return p.high ? -1 : 1;
    }
};

#ifdef DLC_HAVE_ABSL
using TupleSet = absl::btree_set<Tuple, TupleOrder>;
#else
using TupleSet = std::set<Tuple, TupleOrder>;
#endif

}  // namespace detail

class Relation {
public:
    Relation() = default;
    Relation(std::size_t arity, std::vector<ast::AttrType> types, std::vector<ast::ChoiceDomain> domains,
            const std::vector<IndexSignature>& signatures);

    std::size_t arity() const {
        return arity_;
    }
    std::size_t size() const {
        return primary().set.size();
    }
    bool empty() const {
        return primary().set.empty();
    }
    const std::vector<ast::AttrType>& types() const {
        return types_;
    }
    const std::vector<ast::ChoiceDomain>& domains() const {
        return domains_;
    }

    /** False iff the tuple was already present. */
    bool insert(const Tuple& tuple);

    /** True iff some tuple matches all bound positions of the pattern. */
    bool exists(const PatternValue& pattern) const;

    /** Matching tuples in index order. */
    void scan(const PatternValue& pattern, const std::function<void(const Tuple&)>& fn) const;

    /** Full contents in lexicographic order. */
    void scanAll(const std::function<void(const Tuple&)>& fn) const;

    std::int64_t aggregate(const PatternValue& pattern, ast::AggregateKind kind, int column,
            bool& any) const;

    void mergeFrom(const Relation& src);
    void swapContents(Relation& other);
    void clear();

    /** True iff every declared functional dependency holds. */
    bool checkFunctionalDependencies() const;

private:
    struct Index {
        std::vector<std::uint32_t> order;
        detail::TupleSet set;

        Index() : set(detail::TupleOrder{&order}) {}
        Index(const Index& other) : order(other.order), set(other.set.begin(), other.set.end(), detail::TupleOrder{&order}) {}
        Index(Index&&) = delete;
        Index& operator=(const Index&) = delete;
    };

    const Index& primary() const {
        return *indexes_.front();
    }
    const Index& indexFor(const PatternValue& pattern) const;

    std::size_t arity_ = 0;
    std::vector<ast::AttrType> types_;
    std::vector<ast::ChoiceDomain> domains_;
    // indexes_[0] is the full-order index; signatures_ maps each planned
    // signature to the index that serves it.
    std::vector<std::unique_ptr<Index>> indexes_;
    std::map<IndexSignature, std::size_t> signatures_;
};

class Instance {
public:
    Instance() = default;

    void addRelation(Relation rel) {
        relations_.push_back(std::move(rel));
    }
    Relation& operator[](ram::RelId id) {
        return relations_[static_cast<std::size_t>(id)];
    }
    const Relation& operator[](ram::RelId id) const {
        return relations_[static_cast<std::size_t>(id)];
    }
    std::size_t size() const {
        return relations_.size();
    }

private:
    std::vector<Relation> relations_;
};

/** Bound-column signatures required by the scans and checks of a program. */
struct IndexPlan {
    std::vector<std::vector<IndexSignature>> signatures;  // by RelId

    const std::vector<IndexSignature>& of(ram::RelId id) const {
        return signatures[static_cast<std::size_t>(id)];
    }
};

/**
 * Collects, per relation, the distinct partially-bound signatures used by
 * any index scan, existence check or aggregate on it. Fully-bound and empty
 * signatures are served by the always-present full-order index. Delta/new
 * pairs share a signature set so that swap stays O(1).
 */
IndexPlan planIndexes(const ram::RamProgram& program, const ram::RelationTable& rels);

/** Builds the relation store for a planned program. */
Instance makeInstance(const ram::RelationTable& rels, const IndexPlan& plan);

}  // namespace dlc::storage
