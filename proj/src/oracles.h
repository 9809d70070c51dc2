/**
 * @file oracles.h
 *
 * Independent validity checkers for the benchmark outputs. Each checker
 * works on rendered rows (inputs and outputs) and never touches the engine,
 * so a passing verdict is evidence independent of the evaluation path.
 */

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dlc::oracles {

using Row = std::vector<std::string>;
using Rows = std::vector<Row>;

struct Verdict {
    bool ok = true;
    std::string message;  // counterexample description on failure

    static Verdict pass() {
        return {true, ""};
    }
    static Verdict fail(std::string why) {
        return {false, std::move(why)};
    }
};

/**
 * Per module: the st edges form a tree rooted at the start node covering
 * exactly the nodes reachable from it (checked by an independent BFS), with
 * at most one incoming edge per node and no edge into the root.
 */
Verdict checkSpanningForest(const Rows& edges, const Rows& startNodes, const Rows& st);

/** Single-component variant: edge(x,y) / startNode(x) / st(x,y). */
Verdict checkSpanningTree(const Rows& edges, const Rows& startNodes, const Rows& st);

/**
 * The succ rows form one chain starting at the sentinel "-1" that visits
 * every item exactly once.
 */
Verdict checkTotalOrder(const Rows& items, const Rows& succ);

/**
 * The matched rows are a subset of the candidate edges, share no endpoints,
 * and no candidate edge joins two unmatched endpoints (greedy maximality).
 */
Verdict checkBipartiteMatching(const Rows& candidates, const Rows& matched);

/** The boolean output equals the direct cardinality comparison. */
Verdict checkMoreDogsThanCats(const Rows& dogs, const Rows& cats, const Rows& moreDogs);

/**
 * Every grade with data is reported, every reported row is a real score row
 * and carries that grade's maximum mark.
 */
Verdict checkHighestMark(const Rows& scores, const Rows& highest);

/** Every student with at least one eligible advisor maps to exactly one. */
Verdict checkEligibleAdvisors(const Rows& eligible, const Rows& advisors);

}  // namespace dlc::oracles
