#include "oracles.h"

#include <algorithm>
#include <deque>
#include <set>

namespace dlc::oracles {

namespace {

std::string rowText(const Row& row) {
    std::string out = "(";
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ", ";
        out += row[i];
    }
    out += ")";
    return out;
}

}  // namespace

Verdict checkSpanningForest(const Rows& edges, const Rows& startNodes, const Rows& st) {
    std::set<std::string> modules;
    std::map<std::string, std::set<std::pair<std::string, std::string>>> edgeSet;
    std::map<std::string, std::string> start;
    for (const auto& e : edges) {
        modules.insert(e[0]);
        edgeSet[e[0]].insert({e[1], e[2]});
    }
    for (const auto& s : startNodes) {
        modules.insert(s[0]);
        if (start.count(s[0])) return Verdict::fail("module " + s[0] + " has two start nodes");
        start[s[0]] = s[1];
    }

    std::map<std::string, Rows> stByModule;
    for (const auto& row : st) {
        if (!modules.count(row[0])) return Verdict::fail("st row for unknown module " + rowText(row));
        stByModule[row[0]].push_back({row[1], row[2]});
    }

    for (const auto& module : modules) {
        auto startIt = start.find(module);
        if (startIt == start.end()) {
            if (!stByModule[module].empty()) {
                return Verdict::fail("module " + module + " has st edges but no start node");
            }
            continue;
        }
        const std::string& root = startIt->second;
        const auto& medges = edgeSet[module];

        // Independent reachability by BFS over the input edges.
        std::map<std::string, std::vector<std::string>> adj;
        for (const auto& [x, y] : medges) adj[x].push_back(y);
        std::set<std::string> reachable{root};
        std::deque<std::string> queue{root};
        while (!queue.empty()) {
            std::string node = queue.front();
            queue.pop_front();
            for (const auto& next : adj[node]) {
                if (reachable.insert(next).second) queue.push_back(next);
            }
        }

        std::map<std::string, std::string> parent;
        for (const auto& row : stByModule[module]) {
            const std::string& x = row[0];
            const std::string& y = row[1];
            if (!medges.count({x, y})) {
                return Verdict::fail("module " + module + ": st edge " + rowText(row) +
                                     " is not an input edge");
            }
            if (y == root) {
                return Verdict::fail("module " + module + ": root " + root + " has an incoming edge");
            }
            if (!parent.emplace(y, x).second) {
                return Verdict::fail("module " + module + ": node " + y + " has two incoming edges");
            }
        }

        std::set<std::string> covered{root};
        for (const auto& [y, x] : parent) covered.insert(y);
        if (covered != reachable) {
            for (const auto& node : reachable) {
                if (!covered.count(node)) {
                    return Verdict::fail("module " + module + ": reachable node " + node +
                                         " is not covered by the tree");
                }
            }
            for (const auto& node : covered) {
                if (!reachable.count(node)) {
                    return Verdict::fail("module " + module + ": tree contains unreachable node " + node);
                }
            }
        }

        // Every covered node must reach the root through parents, acyclically.
        for (const auto& [y, x] : parent) {
            std::set<std::string> seen;
            std::string node = y;
            while (node != root) {
                if (!seen.insert(node).second) {
                    return Verdict::fail("module " + module + ": cycle through node " + node);
                }
                auto it = parent.find(node);
                if (it == parent.end()) {
                    return Verdict::fail("module " + module + ": node " + node +
                                         " is disconnected from the root");
                }
                node = it->second;
            }
        }
    }
    return Verdict::pass();
}

Verdict checkSpanningTree(const Rows& edges, const Rows& startNodes, const Rows& st) {
    Rows medges, mstarts, mst;
    for (const auto& e : edges) medges.push_back({"m", e[0], e[1]});
    for (const auto& s : startNodes) mstarts.push_back({"m", s[0]});
    for (const auto& row : st) mst.push_back({"m", row[0], row[1]});
    return checkSpanningForest(medges, mstarts, mst);
}

Verdict checkTotalOrder(const Rows& items, const Rows& succ) {
    std::set<std::string> itemSet;
    for (const auto& row : items) itemSet.insert(row[0]);

    std::map<std::string, std::string> next;
    std::set<std::string> placed;
    for (const auto& row : succ) {
        const std::string& prev = row[0];
        const std::string& cur = row[1];
        if (!itemSet.count(cur)) return Verdict::fail("successor row places non-item " + cur);
        if (prev != "-1" && !itemSet.count(prev)) {
            return Verdict::fail("successor row starts from non-item " + prev);
        }
        if (!next.emplace(prev, cur).second) return Verdict::fail(prev + " has two successors");
        if (!placed.insert(cur).second) return Verdict::fail(cur + " has two predecessors");
    }
    if (placed.size() != itemSet.size()) {
        return Verdict::fail("chain covers " + std::to_string(placed.size()) + " of " +
                             std::to_string(itemSet.size()) + " items");
    }

    std::size_t visited = 0;
    std::string node = "-1";
    while (true) {
        auto it = next.find(node);
        if (it == next.end()) break;
        node = it->second;
        if (++visited > itemSet.size()) return Verdict::fail("cycle in successor chain");
    }
    if (visited != itemSet.size()) {
        return Verdict::fail("walk from the sentinel visits " + std::to_string(visited) + " of " +
                             std::to_string(itemSet.size()) + " items");
    }
    return Verdict::pass();
}

Verdict checkBipartiteMatching(const Rows& candidates, const Rows& matched) {
    std::set<std::pair<std::string, std::string>> candidateSet;
    for (const auto& row : candidates) candidateSet.insert({row[0], row[1]});

    std::set<std::string> left, right;
    for (const auto& row : matched) {
        if (!candidateSet.count({row[0], row[1]})) {
            return Verdict::fail("matched edge " + rowText(row) + " is not a candidate");
        }
        if (!left.insert(row[0]).second) return Verdict::fail(row[0] + " is matched twice");
        if (!right.insert(row[1]).second) return Verdict::fail(row[1] + " is matched twice");
    }
    for (const auto& [u, v] : candidateSet) {
        if (!left.count(u) && !right.count(v)) {
            return Verdict::fail("candidate (" + u + ", " + v + ") joins two unmatched endpoints");
        }
    }
    return Verdict::pass();
}

Verdict checkMoreDogsThanCats(const Rows& dogs, const Rows& cats, const Rows& moreDogs) {
    std::set<std::string> dogSet, catSet;
    for (const auto& row : dogs) dogSet.insert(row[0]);
    for (const auto& row : cats) catSet.insert(row[0]);
    bool expected = dogSet.size() > catSet.size();
    bool reported = !moreDogs.empty();
    if (expected != reported) {
        return Verdict::fail("reported " + std::string(reported ? "true" : "false") + " for " +
                             std::to_string(dogSet.size()) + " dogs vs " + std::to_string(catSet.size()) +
                             " cats");
    }
    return Verdict::pass();
}

Verdict checkHighestMark(const Rows& scores, const Rows& highest) {
    std::map<std::string, long long> best;
    std::set<std::vector<std::string>> scoreSet;
    for (const auto& row : scores) {
        scoreSet.insert(row);
        long long mark = std::stoll(row[2]);
        auto [it, fresh] = best.emplace(row[0], mark);
        if (!fresh) it->second = std::max(it->second, mark);
    }
    std::set<std::string> reported;
    for (const auto& row : highest) {
        if (!scoreSet.count(row)) return Verdict::fail("reported row " + rowText(row) + " is not a score");
        if (std::stoll(row[2]) != best.at(row[0])) {
            return Verdict::fail("grade " + row[0] + ": reported mark " + row[2] + " is not the maximum " +
                                 std::to_string(best.at(row[0])));
        }
        reported.insert(row[0]);
    }
    for (const auto& [grade, mark] : best) {
        if (!reported.count(grade)) return Verdict::fail("grade " + grade + " has no reported row");
    }
    return Verdict::pass();
}

Verdict checkEligibleAdvisors(const Rows& eligible, const Rows& advisors) {
    std::set<std::pair<std::string, std::string>> eligibleSet;
    std::set<std::string> students;
    for (const auto& row : eligible) {
        eligibleSet.insert({row[0], row[1]});
        students.insert(row[0]);
    }
    std::map<std::string, std::string> assigned;
    for (const auto& row : advisors) {
        if (!eligibleSet.count({row[0], row[1]})) {
            return Verdict::fail("assignment " + rowText(row) + " is not eligible");
        }
        if (!assigned.emplace(row[0], row[1]).second) {
            return Verdict::fail("student " + row[0] + " has two advisors");
        }
    }
    for (const auto& student : students) {
        if (!assigned.count(student)) return Verdict::fail("student " + student + " has no advisor");
    }
    return Verdict::pass();
}

}  // namespace dlc::oracles
