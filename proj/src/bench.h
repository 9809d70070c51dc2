/**
 * @file bench.h
 *
 * Benchmark harness: runs each corpus program version over generated inputs
 * in a child process with a wall-clock timeout, samples peak resident
 * memory, validates outputs with the oracles, and renders comparison
 * tables with native-over-choice speedup columns.
 */

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "generators.h"
#include "oracles.h"

namespace dlc::bench {

extern const std::vector<std::string> kBenchmarks;  // all benchmark names
extern const std::vector<std::string> kVersions;    // choice, rulechoice, native

struct CellResult {
    std::string benchmark;
    std::string version;
    std::size_t scale = 0;
    double seconds = 0;
    long peakRssKb = -1;  // -1 when the platform did not report it
    std::uint64_t iterations = 0;
    std::string verdict;  // ok | oracle-failed | timeout | error
    std::string detail;
};

struct BenchOptions {
    std::vector<std::string> suite;  // empty = all
    std::vector<std::size_t> scales{100, 500, 1000};
    double timeoutSeconds = 120;
    std::uint64_t seed = 7;
    int repetitions = 1;
    std::string corpusDir = "corpus";
    std::string workDir;        // empty = unique temp directory
    std::string engineBinary;   // engine used for child runs
};

struct Report {
    std::vector<CellResult> cells;

    std::string tsv() const;
    std::string table() const;

    const CellResult* find(const std::string& benchmark, const std::string& version,
            std::size_t scale) const;
};

Report run(const BenchOptions& options);

struct ChildRun {
    double seconds = 0;
    long peakRssKb = -1;
    int exitCode = 0;
    bool timedOut = false;
};

/** Executes `binary args...` with a timeout; stdout/stderr go to logPath. */
ChildRun runChild(const std::string& binary, const std::vector<std::string>& args,
        double timeoutSeconds, const std::string& logPath);

/** Oracle dispatch: validates one benchmark's outputs against its inputs. */
oracles::Verdict checkOutputs(const std::string& benchmark, const gen::FactMap& facts,
        const std::map<std::string, oracles::Rows>& outputs);

/** Output relation names per benchmark (for reading back result files). */
std::vector<std::string> outputRelations(const std::string& benchmark);

}  // namespace dlc::bench
