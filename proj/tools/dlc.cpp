/**
 * @file dlc.cpp
 *
 * Command line entry point.
 *
 *   dlc run PROGRAM [--facts DIR] [--out DIR] [--emit-ram] [--emit-desugared]
 *                   [--choice-policy first|shuffled] [--seed N]
 *                   [--max-iterations N] [--trace FILE] [--stats FILE]
 *   dlc bench run [--suite NAME] [--scales CSV] [--timeout SECS] [--seed N]
 *                 [--reps N] [--out FILE] [--corpus DIR] [--workdir DIR]
 *   dlc bench gen NAME --seed N --scale K [--out DIR]
 *
 * Exit codes: 0 success, 1 user error (diagnostics on stderr), 2 internal
 * error.
 */

#include <unistd.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bench.h"
#include "driver.h"
#include "generators.h"

namespace {

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw dlc::driver::UserError(path + ":1:1: IoError: cannot open program file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string selfPath() {
    char buf[4096];
    ssize_t n = ::readlink("/proc/self/exe", buf, sizeof(buf) - 1);
    if (n <= 0) return "dlc";
    buf[n] = '\0';
    return buf;
}

struct RunArgs {
    std::string program;
    std::string factsDir = ".";
    std::string outDir = ".";
    bool emitRam = false;
    bool emitDesugared = false;
    std::string policy = "first";
    std::uint64_t seed = 0;
    std::uint64_t maxIterations = 0;
    std::string traceFile;
    std::string statsFile;
};

int cmdRun(const RunArgs& args) {
    dlc::driver::CompileResult compiled = dlc::driver::compile(readFile(args.program));
    if (!compiled.ok()) {
        std::cerr << dlc::render(compiled.diags, args.program);
        return 1;
    }
    const auto& program = *compiled.program;

    if (args.emitDesugared) std::cout << dlc::driver::emitDesugared(program);
    if (args.emitRam) std::cout << dlc::driver::emitRam(program);
    if (args.emitRam || args.emitDesugared) return 0;

    dlc::driver::RunRequest request;
    request.factsDir = args.factsDir;
    request.options.policy = args.policy == "shuffled" ? dlc::eval::ChoicePolicy::Shuffled
                                                       : dlc::eval::ChoicePolicy::First;
    request.options.seed = args.seed;
    request.options.maxIterations = args.maxIterations;
    request.wantTrace = !args.traceFile.empty();

    dlc::driver::RunOutcome outcome = dlc::driver::runCompiled(program, request);
    dlc::driver::writeOutputsToDir(outcome, args.outDir);

    if (!args.traceFile.empty()) {
        std::ofstream trace(args.traceFile, std::ios::binary);
        trace << dlc::driver::renderTrace(program, outcome);
    }
    if (!args.statsFile.empty()) {
        std::ofstream stats(args.statsFile);
        stats << "iterations\t" << outcome.stats.iterations << "\n"
              << "inserted\t" << outcome.stats.inserted << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dlchoice: a Datalog engine with relation-level choice constraints"};
    app.require_subcommand(1);

    RunArgs runArgs;
    auto* runCmd = app.add_subcommand("run", "evaluate a program");
    runCmd->add_option("program", runArgs.program, "program file")->required();
    runCmd->add_option("--facts", runArgs.factsDir, "directory with <relation>.facts inputs");
    runCmd->add_option("--out", runArgs.outDir, "directory for <relation>.tsv outputs");
    runCmd->add_flag("--emit-ram", runArgs.emitRam, "print the guarded RAM program and exit");
    runCmd->add_flag("--emit-desugared", runArgs.emitDesugared,
            "print the program after rule-choice desugaring and exit");
    runCmd->add_option("--choice-policy", runArgs.policy, "first|shuffled")
            ->check(CLI::IsMember({"first", "shuffled"}));
    runCmd->add_option("--seed", runArgs.seed, "seed for the shuffled policy");
    runCmd->add_option("--max-iterations", runArgs.maxIterations, "abort after N fixpoint iterations");
    runCmd->add_option("--trace", runArgs.traceFile, "write the per-iteration merge trace to FILE");
    runCmd->add_option("--stats", runArgs.statsFile, "write run statistics to FILE");

    auto* benchCmd = app.add_subcommand("bench", "benchmark harness");
    benchCmd->require_subcommand(1);

    dlc::bench::BenchOptions benchOptions;
    std::string suite = "all";
    std::string scalesCsv = "100,500,1000";
    std::string reportFile;
    auto* benchRun = benchCmd->add_subcommand("run", "run benchmark cells and report");
    benchRun->add_option("--suite", suite, "benchmark name or 'all'");
    benchRun->add_option("--scales", scalesCsv, "comma-separated input scales");
    benchRun->add_option("--timeout", benchOptions.timeoutSeconds, "per-cell timeout in seconds");
    benchRun->add_option("--seed", benchOptions.seed, "input generator seed");
    benchRun->add_option("--reps", benchOptions.repetitions, "repetitions per cell (min is reported)");
    benchRun->add_option("--out", reportFile, "write the TSV report to FILE");
    benchRun->add_option("--corpus", benchOptions.corpusDir, "corpus directory");
    benchRun->add_option("--workdir", benchOptions.workDir, "scratch directory");

    std::string genName;
    std::uint64_t genSeed = 0;
    std::size_t genScale = 100;
    std::string genOut = ".";
    auto* benchGen = benchCmd->add_subcommand("gen", "generate benchmark input facts");
    benchGen->add_option("name", genName, "benchmark name")->required();
    benchGen->add_option("--seed", genSeed, "generator seed");
    benchGen->add_option("--scale", genScale, "input scale");
    benchGen->add_option("--out", genOut, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (runCmd->parsed()) return cmdRun(runArgs);
        if (benchGen->parsed()) {
            dlc::gen::writeFacts(dlc::gen::benchmarkInput(genName, genSeed, genScale), genOut);
            return 0;
        }
        if (benchRun->parsed()) {
            if (suite != "all") benchOptions.suite.push_back(suite);
            benchOptions.scales.clear();
            std::stringstream ss(scalesCsv);
            std::string part;
            while (std::getline(ss, part, ',')) {
                if (!part.empty()) benchOptions.scales.push_back(std::stoull(part));
            }
            benchOptions.engineBinary = selfPath();
            dlc::bench::Report report = dlc::bench::run(benchOptions);
            std::cout << report.table();
            if (!reportFile.empty()) {
                std::ofstream out(reportFile, std::ios::binary);
                out << report.tsv();
            }
            for (const auto& cell : report.cells) {
                if (cell.verdict == "oracle-failed" || cell.verdict == "error") return 1;
            }
            return 0;
        }
    } catch (const dlc::driver::UserError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const dlc::eval::IterationLimitError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
