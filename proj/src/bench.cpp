#include "bench.h"

#include <fcntl.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace dlc::bench {

namespace fs = std::filesystem;

const std::vector<std::string> kBenchmarks = {"spanning_forest", "eligible_advisors", "total_order",
        "bipartite_matching", "more_dogs_than_cats", "highest_mark"};
const std::vector<std::string> kVersions = {"choice", "rulechoice", "native"};

ChildRun runChild(const std::string& binary, const std::vector<std::string>& args,
        double timeoutSeconds, const std::string& logPath) {
    ChildRun result;

    std::vector<std::string> argStore;
    argStore.push_back(binary);
    argStore.insert(argStore.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argStore) argv.push_back(a.data());
    argv.push_back(nullptr);

    auto start = std::chrono::steady_clock::now();
    pid_t pid = fork();
    if (pid == 0) {
        int fd = ::open(logPath.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
        if (fd >= 0) {
            dup2(fd, 1);
            dup2(fd, 2);
            ::close(fd);
        }
        execv(binary.c_str(), argv.data());
        _exit(127);
    }
    if (pid < 0) {
        result.exitCode = -1;
        return result;
    }

    int status = 0;
    struct rusage usage {};
    for (;;) {
        pid_t done = wait4(pid, &status, WNOHANG, &usage);
        double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (done == pid) {
            result.seconds = elapsed;
            break;
        }
        if (done < 0) {
            result.exitCode = -1;
            return result;
        }
        if (elapsed > timeoutSeconds) {
            kill(pid, SIGKILL);
            wait4(pid, &status, 0, &usage);
            result.seconds = elapsed;
            result.timedOut = true;
            break;
        }
        usleep(2000);
    }
#ifdef __linux__
    result.peakRssKb = usage.ru_maxrss;
#endif
    result.exitCode = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::vector<std::string> outputRelations(const std::string& benchmark) {
    if (benchmark == "spanning_forest" || benchmark == "spanning_tree") return {"st"};
    if (benchmark == "eligible_advisors") return {"advisor"};
    if (benchmark == "total_order") return {"succ"};
    if (benchmark == "bipartite_matching") return {"matched"};
    if (benchmark == "more_dogs_than_cats") return {"moreDogs"};
    if (benchmark == "highest_mark") return {"highest"};
    return {};
}

oracles::Verdict checkOutputs(const std::string& benchmark, const gen::FactMap& facts,
        const std::map<std::string, oracles::Rows>& outputs) {
    auto out = [&](const std::string& name) -> const oracles::Rows& {
        static const oracles::Rows empty;
        auto it = outputs.find(name);
        return it == outputs.end() ? empty : it->second;
    };
    auto in = [&](const std::string& name) -> const oracles::Rows& {
        static const oracles::Rows empty;
        auto it = facts.find(name);
        return it == facts.end() ? empty : it->second;
    };
    if (benchmark == "spanning_forest") {
        return oracles::checkSpanningForest(in("edge"), in("startNode"), out("st"));
    }
    if (benchmark == "spanning_tree") {
        return oracles::checkSpanningTree(in("edge"), in("startNode"), out("st"));
    }
    if (benchmark == "eligible_advisors") {
        return oracles::checkEligibleAdvisors(in("eligible"), out("advisor"));
    }
    if (benchmark == "total_order") return oracles::checkTotalOrder(in("item"), out("succ"));
    if (benchmark == "bipartite_matching") {
        return oracles::checkBipartiteMatching(in("candidate"), out("matched"));
    }
    if (benchmark == "more_dogs_than_cats") {
        return oracles::checkMoreDogsThanCats(in("dog"), in("cat"), out("moreDogs"));
    }
    if (benchmark == "highest_mark") return oracles::checkHighestMark(in("score"), out("highest"));
    return oracles::Verdict::fail("unknown benchmark " + benchmark);
}

namespace {

oracles::Rows readRows(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    oracles::Rows rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
        oracles::Row row;
        std::size_t start = 0;
        for (;;) {
            std::size_t tab = line.find('\t', start);
            if (tab == std::string::npos) {
                row.push_back(line.substr(start));
                break;
            }
            row.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::uint64_t readIterations(const std::string& statsPath) {
    std::ifstream in(statsPath);
    std::string key;
    std::uint64_t value = 0;
    while (in >> key >> value) {
        if (key == "iterations") return value;
    }
    return 0;
}

std::string formatSeconds(double s) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << s;
    return os.str();
}

}  // namespace

Report run(const BenchOptions& options) {
    Report report;
    std::vector<std::string> suite = options.suite.empty() ? kBenchmarks : options.suite;

    fs::path work = options.workDir.empty()
            ? fs::temp_directory_path() / ("dlc_bench_" + std::to_string(::getpid()))
            : fs::path(options.workDir);
    fs::create_directories(work);

    for (const auto& benchmark : suite) {
        for (std::size_t scale : options.scales) {
            std::uint64_t inputSeed = options.seed + scale * 1000003;
            gen::FactMap facts = gen::benchmarkInput(benchmark, inputSeed, scale);
            fs::path factsDir = work / (benchmark + "_" + std::to_string(scale) + "_facts");
            gen::writeFacts(facts, factsDir.string());

            for (const auto& version : kVersions) {
                CellResult cell;
                cell.benchmark = benchmark;
                cell.version = version;
                cell.scale = scale;

                std::string program = options.corpusDir + "/" + benchmark + "_" + version + ".dl";
                fs::path outDir = work / (benchmark + "_" + std::to_string(scale) + "_" + version);
                fs::create_directories(outDir);
                fs::path statsFile = outDir / "stats.txt";
                fs::path logFile = outDir / "run.log";

                std::vector<std::string> args{"run", program, "--facts", factsDir.string(), "--out",
                        outDir.string(), "--stats", statsFile.string()};

                ChildRun best;
                bool first = true;
                for (int rep = 0; rep < std::max(1, options.repetitions); ++rep) {
                    ChildRun attempt = runChild(options.engineBinary, args, options.timeoutSeconds,
                            logFile.string());
                    if (first || attempt.seconds < best.seconds) best.seconds = attempt.seconds;
                    best.peakRssKb = std::max(best.peakRssKb, attempt.peakRssKb);
                    best.exitCode = attempt.exitCode;
                    best.timedOut = attempt.timedOut;
                    first = false;
                    if (attempt.timedOut || attempt.exitCode != 0) break;
                }

                cell.seconds = best.seconds;
                cell.peakRssKb = best.peakRssKb;
                if (best.timedOut) {
                    cell.verdict = "timeout";
                } else if (best.exitCode != 0) {
                    cell.verdict = "error";
                    cell.detail = "exit code " + std::to_string(best.exitCode);
                } else {
                    cell.iterations = readIterations(statsFile.string());
                    std::map<std::string, oracles::Rows> outputs;
                    for (const auto& rel : outputRelations(benchmark)) {
                        outputs[rel] = readRows((outDir / (rel + ".tsv")).string());
                    }
                    oracles::Verdict verdict = checkOutputs(benchmark, facts, outputs);
                    cell.verdict = verdict.ok ? "ok" : "oracle-failed";
                    cell.detail = verdict.message;
                }
                report.cells.push_back(std::move(cell));
            }
        }
    }
    return report;
}

const CellResult* Report::find(const std::string& benchmark, const std::string& version,
        std::size_t scale) const {
    for (const auto& cell : cells) {
        if (cell.benchmark == benchmark && cell.version == version && cell.scale == scale) return &cell;
    }
    return nullptr;
}

std::string Report::tsv() const {
    std::ostringstream os;
    os << "benchmark\tversion\tscale\tseconds\tpeak_rss_kb\titerations\tverdict\tdetail\n";
    for (const auto& cell : cells) {
        os << cell.benchmark << '\t' << cell.version << '\t' << cell.scale << '\t'
           << formatSeconds(cell.seconds) << '\t';
        if (cell.peakRssKb >= 0) {
            os << cell.peakRssKb;
        }
        os << '\t' << cell.iterations << '\t' << cell.verdict << '\t' << cell.detail << '\n';
    }
    return os.str();
}

std::string Report::table() const {
    std::ostringstream os;
    os << std::left << std::setw(22) << "benchmark" << std::setw(8) << "scale" << std::setw(12)
       << "choice(s)" << std::setw(14) << "rulebased(s)" << std::setw(12) << "native(s)" << std::setw(12)
       << "speedup" << std::setw(14) << "choice(MB)" << std::setw(14) << "native(MB)" << "oracle\n";

    std::vector<std::pair<std::string, std::size_t>> keys;
    for (const auto& cell : cells) {
        std::pair<std::string, std::size_t> key{cell.benchmark, cell.scale};
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
    }
    for (const auto& [benchmark, scale] : keys) {
        const CellResult* choice = find(benchmark, "choice", scale);
        const CellResult* rulechoice = find(benchmark, "rulechoice", scale);
        const CellResult* native = find(benchmark, "native", scale);

        auto cellTime = [](const CellResult* c) {
            if (!c) return std::string("-");
            if (c->verdict == "timeout") return std::string("timeout");
            return formatSeconds(c->seconds);
        };
        auto cellMb = [](const CellResult* c) {
            if (!c || c->peakRssKb < 0) return std::string("-");
            return formatSeconds(static_cast<double>(c->peakRssKb) / 1024.0);
        };

        // Speedup = native time over choice time; a native timeout reports a
        // lower bound in the `> N` style.
        std::string speedup = "-";
        if (choice && native && choice->verdict == "ok" && choice->seconds > 0) {
            if (native->verdict == "timeout") {
                speedup = "> " + formatSeconds(native->seconds / choice->seconds);
            } else if (native->verdict == "ok") {
                speedup = formatSeconds(native->seconds / choice->seconds);
            }
        }

        std::string oracle = "ok";
        for (const CellResult* c : {choice, rulechoice, native}) {
            if (c && c->verdict != "ok" && c->verdict != "timeout") oracle = c->verdict;
        }

        os << std::left << std::setw(22) << benchmark << std::setw(8) << scale << std::setw(12)
           << cellTime(choice) << std::setw(14) << cellTime(rulechoice) << std::setw(12)
           << cellTime(native) << std::setw(12) << speedup << std::setw(14) << cellMb(choice)
           << std::setw(14) << cellMb(native) << oracle << '\n';
    }
    return os.str();
}

}  // namespace dlc::bench
