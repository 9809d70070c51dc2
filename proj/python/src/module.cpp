/**
 * @file module.cpp
 *
 * Python bindings for the engine's main operations: compile-and-run with
 * in-memory facts, plus the RAM and desugared-program dumps.
 */

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "driver.h"
#include "parser.h"

namespace py = pybind11;

namespace {

using dlc::driver::Rows;

dlc::driver::CompiledProgram compileOr_raise(const std::string& source) {
    dlc::driver::CompileResult result = dlc::driver::compile(source);
    if (!result.ok()) throw py::value_error(dlc::render(result.diags, "<program>"));
    return std::move(*result.program);
}

Rows toRows(const dlc::driver::CompiledProgram& program, const std::string& relation,
        const py::list& tuples) {
    Rows rows;
    const dlc::ast::RelationDecl* decl = program.decl(relation);
    for (const auto& item : tuples) {
        py::sequence tuple = py::cast<py::sequence>(item);
        dlc::driver::Row row;
        for (std::size_t i = 0; i < tuple.size(); ++i) {
            py::handle cell = tuple[i];
            if (py::isinstance<py::int_>(cell)) {
                row.push_back(std::to_string(py::cast<long long>(cell)));
            } else {
                row.push_back(py::cast<std::string>(cell));
            }
        }
        (void)decl;
        rows.push_back(std::move(row));
    }
    return rows;
}

py::dict runProgram(const std::string& source, const py::dict& facts, const std::string& policy,
        std::uint64_t seed, std::uint64_t maxIterations) {
    dlc::driver::CompiledProgram program = compileOr_raise(source);

    dlc::driver::RunRequest request;
    request.options.policy = policy == "shuffled" ? dlc::eval::ChoicePolicy::Shuffled
                                                  : dlc::eval::ChoicePolicy::First;
    request.options.seed = seed;
    request.options.maxIterations = maxIterations;
    for (const auto& item : facts) {
        std::string relation = py::cast<std::string>(item.first);
        request.facts[relation] = toRows(program, relation, py::cast<py::list>(item.second));
    }

    dlc::driver::RunOutcome outcome;
    try {
        outcome = dlc::driver::runCompiled(program, request);
    } catch (const dlc::driver::UserError& e) {
        throw py::value_error(e.what());
    } catch (const dlc::eval::IterationLimitError& e) {
        throw py::value_error(e.what());
    }

    py::dict result;
    for (const auto& [relation, rows] : outcome.outputs) {
        const dlc::ast::RelationDecl* decl = program.decl(relation);
        py::list pyRows;
        for (const auto& row : rows) {
            py::tuple pyRow(row.size());
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (decl && decl->attrs[i].type == dlc::ast::AttrType::Number) {
                    pyRow[i] = py::int_(std::stoll(row[i]));
                } else {
                    pyRow[i] = py::str(row[i]);
                }
            }
            pyRows.append(std::move(pyRow));
        }
        result[py::str(relation)] = std::move(pyRows);
    }
    return result;
}

std::string emitRam(const std::string& source) {
    return dlc::driver::emitRam(compileOr_raise(source));
}

std::string emitDesugared(const std::string& source) {
    return dlc::driver::emitDesugared(compileOr_raise(source));
}

std::size_t ruleCount(const std::string& source) {
    try {
        return dlc::parse(source).rules.size();
    } catch (const dlc::SyntaxError& e) {
        throw py::value_error(dlc::render(e.diagnostic(), "<program>"));
    }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Datalog engine with relation-level choice constraints";

    m.def("run_program", &runProgram, py::arg("source"), py::arg("facts") = py::dict(),
            py::arg("policy") = "first", py::arg("seed") = 0, py::arg("max_iterations") = 0,
            "Compile and evaluate a program; returns {relation: [tuples]} for "
            "every .output relation. Facts map input relation names to lists "
            "of tuples (str for symbol attributes, int for number attributes).");
    m.def("emit_ram", &emitRam, py::arg("source"),
            "The guarded relational-machine program a source compiles to.");
    m.def("emit_desugared", &emitDesugared, py::arg("source"),
            "The program after rule-level choice goals are desugared.");
    m.def("rule_count", &ruleCount, py::arg("source"), "Number of parsed rules (facts excluded).");
}
