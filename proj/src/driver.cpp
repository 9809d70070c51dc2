#include "driver.h"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "parser.h"

namespace dlc::driver {

const ast::RelationDecl* CompiledProgram::decl(const std::string& name) const {
    for (const auto& d : normalized.decls) {
        if (d.name == name) return &d;
    }
    return nullptr;
}

CompileResult compile(std::string_view source) {
    CompileResult result;

    ast::Program parsed;
    try {
        parsed = parse(source);
    } catch (const SyntaxError& e) {
        result.diags.push_back(e.diagnostic());
        return result;
    }

    auto append = [&](std::vector<Diagnostic> diags) {
        result.diags.insert(result.diags.end(), diags.begin(), diags.end());
    };

    append(sem::checkStructure(parsed));
    append(sem::checkChoiceDomains(parsed));
    if (!result.diags.empty()) return result;

    rewrite::RewriteResult rewritten = rewrite::lowerRuleChoice(parsed);
    append(rewritten.diags);
    if (!result.diags.empty()) return result;

    ast::Program normalized = sem::normalize(rewritten.program);
    append(sem::checkGroundedness(normalized));
    append(sem::checkTypes(normalized));
    if (!result.diags.empty()) return result;

    sem::StratifyResult stratified = sem::stratify(normalized);
    append(stratified.diags);
    if (!stratified.program) return result;

    CompiledProgram program;
    program.parsed = std::move(parsed);
    program.desugared = std::move(rewritten.program);
    program.normalized = std::move(normalized);
    program.stratified = std::move(*stratified.program);

    lower::LoweredProgram lowered =
            lower::lowerProgram(program.normalized, program.stratified, program.symbols);
    lower::addGuards(lowered.ram, lowered.relations);
    program.plan = storage::planIndexes(lowered.ram, lowered.relations);
    program.relations = std::move(lowered.relations);
    program.ram = std::move(lowered.ram);

    result.program = std::move(program);
    return result;
}

CompiledProgram compileOrThrow(std::string_view source, const std::string& file) {
    CompileResult result = compile(source);
    if (!result.ok()) throw UserError(render(result.diags, file));
    return std::move(*result.program);
}

std::string emitRam(const CompiledProgram& program) {
    return ram::print(program.ram, program.relations, program.symbols);
}

std::string emitDesugared(const CompiledProgram& program) {
    return ast::toString(program.desugared);
}

namespace {

storage::Tuple parseRow(const Row& row, const ram::RelationInfo& info, storage::SymbolTable& symbols,
        const std::string& where, std::size_t lineNo) {
    if (row.size() != info.arity) {
        throw UserError(where + ":" + std::to_string(lineNo) + ":1: WrongFieldCount: expected " +
                        std::to_string(info.arity) + " fields, found " + std::to_string(row.size()));
    }
    storage::Tuple tuple;
    tuple.reserve(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (info.types[i] == ast::AttrType::Number) {
            std::int64_t value = 0;
            const std::string& field = row[i];
            auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
            if (ec != std::errc() || p != field.data() + field.size()) {
                throw UserError(where + ":" + std::to_string(lineNo) + ":" + std::to_string(i + 1) +
                                ": BadNumber: cannot parse '" + field + "' as a number");
            }
            tuple.push_back(value);
        } else {
            tuple.push_back(symbols.intern(row[i]));
        }
    }
    return tuple;
}

Rows readTsv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UserError(path + ":1:1: IoError: cannot open input file");
    Rows rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
        Row row;
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

std::string renderValue(storage::Value v, ast::AttrType type, const storage::SymbolTable& symbols) {
    if (type == ast::AttrType::Number) return std::to_string(v);
    return symbols.resolve(v);
}

}  // namespace

RunOutcome runCompiled(const CompiledProgram& program, const RunRequest& request) {
    RunOutcome outcome;
    storage::SymbolTable symbols = program.symbols;
    storage::Instance instance = storage::makeInstance(program.relations, program.plan);

    eval::FactSource source = [&](const ram::RelationInfo& info) {
        Rows rows;
        std::string where = info.name;
        if (request.factsDir) {
            where = *request.factsDir + "/" + info.name + ".facts";
            rows = readTsv(where);
        } else {
            auto it = request.facts.find(info.name);
            if (it != request.facts.end()) rows = it->second;
        }
        std::vector<storage::Tuple> tuples;
        tuples.reserve(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            tuples.push_back(parseRow(rows[i], info, symbols, where, i + 1));
        }
        return tuples;
    };

    eval::OutputSink sink = [&](const ram::RelationInfo& info, const storage::Relation& rel) {
        Rows rows;
        rel.scanAll([&](const storage::Tuple& t) {
            Row row;
            row.reserve(t.size());
            for (std::size_t i = 0; i < t.size(); ++i) {
                row.push_back(renderValue(t[i], info.types[i], symbols));
            }
            rows.push_back(std::move(row));
        });
        outcome.outputs[info.name] = std::move(rows);
    };

    outcome.stats = eval::run(program.ram, program.relations, instance, source, sink, request.options,
            request.wantTrace ? &outcome.trace : nullptr);
    if (request.dumpAllRelations) {
        for (std::size_t i = 0; i < program.relations.size(); ++i) {
            const auto& info = program.relations[static_cast<ram::RelId>(i)];
            if (info.version != ram::RelVersion::Full) continue;
            Rows rows;
            instance[static_cast<ram::RelId>(i)].scanAll([&](const storage::Tuple& t) {
                Row row;
                for (std::size_t c = 0; c < t.size(); ++c) {
                    row.push_back(renderValue(t[c], info.types[c], symbols));
                }
                rows.push_back(std::move(row));
            });
            outcome.relationDumps[info.name] = std::move(rows);
        }
    }
    outcome.symbols = std::move(symbols);
    return outcome;
}

std::string renderTrace(const CompiledProgram& program, const RunOutcome& outcome) {
    std::ostringstream os;
    for (const auto& entry : outcome.trace) {
        const auto& info = program.relations[entry.rel];
        for (const auto& tuple : entry.added) {
            os << entry.iteration << '\t' << info.name;
            for (std::size_t i = 0; i < tuple.size(); ++i) {
                os << '\t' << renderValue(tuple[i], info.types[i], outcome.symbols);
            }
            os << '\n';
        }
    }
    return os.str();
}

void writeOutputsToDir(const RunOutcome& outcome, const std::string& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& [name, rows] : outcome.outputs) {
        std::ofstream out(dir + "/" + name + ".tsv", std::ios::binary);
        if (!out) throw UserError(dir + "/" + name + ".tsv:1:1: IoError: cannot open output file");
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out << '\t';
                out << row[i];
            }
            out << '\n';
        }
    }
}

}  // namespace dlc::driver
