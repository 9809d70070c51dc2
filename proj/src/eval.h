/**
 * @file eval.h
 *
 * Tree-walking interpreter for guarded RAM programs. Guarded insertions are
 * buffered per rule evaluation and flushed in derivation order (or in a
 * seeded shuffle of it), so the first candidate surviving its existence
 * checks wins each choice-domain slot.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ram.h"
#include "storage.h"

namespace dlc::eval {

enum class ChoicePolicy { First, Shuffled };

struct EvalOptions {
    ChoicePolicy policy = ChoicePolicy::First;
    std::uint64_t seed = 0;
    std::uint64_t maxIterations = 0;  // 0 = unlimited
    bool validateFd = false;          // re-check all FDs after every top-level statement
};

struct TraceEntry {
    std::uint64_t iteration = 0;  // 1-based, within the enclosing fixpoint loop
    ram::RelId rel = -1;          // full relation the tuples were merged into
    std::vector<storage::Tuple> added;
};

struct EvalStats {
    std::uint64_t iterations = 0;
    std::uint64_t inserted = 0;
};

class IterationLimitError : public std::runtime_error {
public:
    explicit IterationLimitError(std::uint64_t limit)
            : std::runtime_error("IterationLimit: fixpoint loop exceeded " + std::to_string(limit) +
                                 " iterations") {}
};

/** Supplies tuples for an input relation when ReadInput executes. */
using FactSource = std::function<std::vector<storage::Tuple>(const ram::RelationInfo&)>;

/** Receives a finished output relation when WriteOutput executes. */
using OutputSink = std::function<void(const ram::RelationInfo&, const storage::Relation&)>;

EvalStats run(const ram::RamProgram& program, const ram::RelationTable& rels,
        storage::Instance& instance, const FactSource& source, const OutputSink& sink,
        const EvalOptions& options, std::vector<TraceEntry>* trace = nullptr);

}  // namespace dlc::eval
