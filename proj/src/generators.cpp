#include "generators.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>

namespace dlc::gen {

namespace {

using Rng = std::mt19937_64;

std::size_t pick(Rng& rng, std::size_t bound) {
    return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng);
}

}  // namespace

FactMap spanningForestInput(std::uint64_t seed, std::size_t components, std::size_t edgesPerComponent) {
    Rng rng(seed);
    FactMap facts;
    auto& edges = facts["edge"];
    auto& starts = facts["startNode"];
    for (std::size_t m = 0; m < components; ++m) {
        std::string module = "m" + std::to_string(m);
        // Nodes n0..n{k}; n0 is the start and never a target.
        std::size_t nodes = std::max<std::size_t>(2, edgesPerComponent / 2 + pick(rng, edgesPerComponent / 2 + 1));
        auto node = [&](std::size_t i) { return module + "_n" + std::to_string(i); };
        starts.push_back({module, node(0)});

        std::set<std::pair<std::size_t, std::size_t>> seen;
        std::size_t made = 0;
        // A backbone from earlier nodes keeps most of the component reachable.
        for (std::size_t i = 1; i < nodes && made < edgesPerComponent; ++i) {
            std::size_t from = pick(rng, i);  // some earlier node
            if (seen.insert({from, i}).second) {
                edges.push_back({module, node(from), node(i)});
                ++made;
            }
        }
        while (made < edgesPerComponent) {
            std::size_t from = pick(rng, nodes);
            std::size_t to = 1 + pick(rng, nodes - 1);  // never into the start node
            if (from == to) continue;
            if (!seen.insert({from, to}).second) continue;
            edges.push_back({module, node(from), node(to)});
            ++made;
        }
    }
    return facts;
}

FactMap spanningTreeInput(std::uint64_t seed, std::size_t edgeCount) {
    FactMap forest = spanningForestInput(seed, 1, edgeCount);
    FactMap facts;
    for (const auto& row : forest["edge"]) facts["edge"].push_back({row[1], row[2]});
    for (const auto& row : forest["startNode"]) facts["startNode"].push_back({row[1]});
    return facts;
}

FactMap eligibleAdvisorsInput(std::uint64_t seed, std::size_t students) {
    Rng rng(seed);
    FactMap facts;
    std::size_t advisors = std::max<std::size_t>(2, students / 10);
    auto& rows = facts["eligible"];
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t s = 0; s < students; ++s) {
        std::size_t options = 1 + pick(rng, 4);
        for (std::size_t k = 0; k < options; ++k) {
            std::size_t a = pick(rng, advisors);
            if (seen.insert({s, a}).second) {
                rows.push_back({"s" + std::to_string(s), "a" + std::to_string(a)});
            }
        }
    }
    return facts;
}

FactMap totalOrderInput(std::uint64_t seed, std::size_t items) {
    Rng rng(seed);
    FactMap facts;
    std::set<std::size_t> values;
    while (values.size() < items) values.insert(pick(rng, items * 10 + 1));
    std::vector<std::size_t> shuffled(values.begin(), values.end());
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (std::size_t v : shuffled) facts["item"].push_back({std::to_string(v)});
    return facts;
}

FactMap bipartiteMatchingInput(std::uint64_t seed, std::size_t edgeCount) {
    Rng rng(seed);
    FactMap facts;
    std::size_t side = std::max<std::size_t>(2, edgeCount / 3);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    auto& rows = facts["candidate"];
    while (rows.size() < edgeCount && seen.size() < side * side) {
        std::size_t u = pick(rng, side);
        std::size_t v = pick(rng, side);
        if (seen.insert({u, v}).second) {
            rows.push_back({"u" + std::to_string(u), "v" + std::to_string(v)});
        }
    }
    return facts;
}

FactMap moreDogsThanCatsInput(std::uint64_t seed, std::size_t animals) {
    Rng rng(seed);
    FactMap facts;
    facts["dog"];
    facts["cat"];
    // A margin of up to 10% either way; ties are possible at tiny scales.
    std::size_t margin = animals / 10 + 1;
    std::size_t dogs = animals / 2 + pick(rng, 2 * margin) - margin;
    dogs = std::min(dogs, animals);
    for (std::size_t i = 0; i < dogs; ++i) facts["dog"].push_back({"d" + std::to_string(i)});
    for (std::size_t i = 0; i < animals - dogs; ++i) facts["cat"].push_back({"c" + std::to_string(i)});
    return facts;
}

FactMap highestMarkInput(std::uint64_t seed, std::size_t rowCount) {
    Rng rng(seed);
    FactMap facts;
    std::size_t grades = std::max<std::size_t>(1, rowCount / 200);
    auto& rows = facts["score"];
    for (std::size_t i = 0; i < rowCount; ++i) {
        std::size_t grade = pick(rng, grades);
        rows.push_back({"g" + std::to_string(grade), "st" + std::to_string(i),
                std::to_string(pick(rng, 1001))});
    }
    return facts;
}

FactMap benchmarkInput(const std::string& name, std::uint64_t seed, std::size_t scale) {
    if (name == "spanning_forest") {
        // Scale counts total edges, spread over components of ~30 edges.
        std::size_t components = std::max<std::size_t>(1, scale / 30);
        std::size_t perComponent = std::max<std::size_t>(1, scale / components);
        return spanningForestInput(seed, components, perComponent);
    }
    if (name == "spanning_tree") return spanningTreeInput(seed, scale);
    if (name == "eligible_advisors") return eligibleAdvisorsInput(seed, scale);
    if (name == "total_order") return totalOrderInput(seed, scale);
    if (name == "bipartite_matching") return bipartiteMatchingInput(seed, scale);
    if (name == "more_dogs_than_cats") return moreDogsThanCatsInput(seed, scale);
    if (name == "highest_mark") return highestMarkInput(seed, scale);
    throw std::invalid_argument("unknown benchmark: " + name);
}

void writeFacts(const FactMap& facts, const std::string& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& [name, rows] : facts) {
        std::ofstream out(dir + "/" + name + ".facts", std::ios::binary);
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out << '\t';
                out << row[i];
            }
            out << '\n';
        }
    }
}

}  // namespace dlc::gen
