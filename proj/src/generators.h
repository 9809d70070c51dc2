/**
 * @file generators.h
 *
 * Seeded random input generators for the benchmark corpus. A generator is a
 * pure function of its parameters; the same seed always yields the same
 * fact rows.
 */

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace dlc::gen {

using Row = std::vector<std::string>;
using Rows = std::vector<Row>;
using FactMap = std::map<std::string, Rows>;

/**
 * Multi-component control-flow-shaped graphs: per component one start node
 * without incoming edges, every other node reachable-ish with out-degree
 * mostly 1-3, plus a few unreachable stragglers.
 */
FactMap spanningForestInput(std::uint64_t seed, std::size_t components, std::size_t edgesPerComponent);

/** Single-component variant with relations edge(x,y) / startNode(x). */
FactMap spanningTreeInput(std::uint64_t seed, std::size_t edges);

FactMap eligibleAdvisorsInput(std::uint64_t seed, std::size_t students);

/** Distinct non-negative numbers; the sentinel -1 stays free. */
FactMap totalOrderInput(std::uint64_t seed, std::size_t items);

FactMap bipartiteMatchingInput(std::uint64_t seed, std::size_t edges);

/** Sizes differ by a seed-dependent margin, either side may win. */
FactMap moreDogsThanCatsInput(std::uint64_t seed, std::size_t animals);

FactMap highestMarkInput(std::uint64_t seed, std::size_t rows);

/** Dispatch by benchmark name; scale follows each generator's convention. */
FactMap benchmarkInput(const std::string& name, std::uint64_t seed, std::size_t scale);

void writeFacts(const FactMap& facts, const std::string& dir);

}  // namespace dlc::gen
