#include "recnav/navsim.hpp"

#include "recnav/error.hpp"
#include "recnav/rng.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace recnav {

GoalScorer goal_scorer_single(const KnowledgeMatrix& knowledge, NodeId target) {
    return [&knowledge, target](NodeId c) { return knowledge.score(c, target); };
}

GoalScorer goal_scorer_centroid(const KnowledgeMatrix& knowledge, std::span<const NodeId> cluster) {
    if (cluster.empty()) {
        throw InvalidArgument("centroid scorer needs a non-empty cluster");
    }
    std::vector<NodeId> members(cluster.begin(), cluster.end());
    if (knowledge.kind() == KnowledgeKind::optimal) {
        return [&knowledge, members = std::move(members)](NodeId c) {
            double best = -std::numeric_limits<double>::infinity();
            for (NodeId t : members) {
                best = std::max(best, knowledge.score(c, t));
            }
            return best;
        };
    }
    return [&knowledge, members = std::move(members)](NodeId c) {
        double sum = 0.0;
        for (NodeId t : members) {
            sum += knowledge.score(c, t);
        }
        return sum / static_cast<double>(members.size());
    };
}

std::size_t WalkTrace::advances() const {
    return static_cast<std::size_t>(std::count_if(
        steps.begin(), steps.end(), [](const WalkStep& s) { return s.action == StepAction::advance; }));
}

namespace {

/// Path-stack walker shared by the single-goal and foraging walks.
class Walker {
public:
    Walker(const Digraph& g, NodeId start, std::uint32_t budget, std::uint64_t seed, WalkTrace& trace)
        : g_(g), budget_(budget), rng_(seed), trace_(trace), visited_(g.size(), 0) {
        if (start >= g.size()) {
            throw InvalidArgument("walk start node outside the network");
        }
        trace_.start = start;
        path_.push_back(start);
        visited_[start] = 1;
    }

    /// One advance or backtrack. Returns false when the budget is spent or the
    /// walk is stuck at its start with nothing left to explore.
    bool step(const GoalScorer& scorer) {
        if (trace_.steps.size() >= budget_) {
            return false;
        }
        const NodeId current = path_.back();
        ties_.clear();
        double best = 0.0;
        for (NodeId v : g_.out(current)) {
            if (visited_[v]) {
                continue;
            }
            const double s = scorer(v);
            if (ties_.empty() || s > best) {
                best = s;
                ties_.assign(1, v);
            } else if (s == best && std::find(ties_.begin(), ties_.end(), v) == ties_.end()) {
                ties_.push_back(v);
            }
        }
        const auto step_no = static_cast<std::uint32_t>(trace_.steps.size() + 1);
        if (!ties_.empty()) {
            const NodeId next = ties_.size() == 1 ? ties_.front() : ties_[rng_.uniform_index(ties_.size())];
            visited_[next] = 1;
            path_.push_back(next);
            trace_.steps.push_back({step_no, StepAction::advance, next});
            return true;
        }
        if (path_.size() > 1) {
            path_.pop_back();
            trace_.steps.push_back({step_no, StepAction::backtrack, path_.back()});
            return true;
        }
        return false;
    }

private:
    const Digraph& g_;
    std::uint32_t budget_;
    Rng rng_;
    WalkTrace& trace_;
    std::vector<char> visited_;
    std::vector<NodeId> path_;
    std::vector<NodeId> ties_;
};

} // namespace

WalkTrace greedy_walk(const Digraph& g, NodeId start, const GoalScorer& scorer,
                      std::span<const NodeId> targets, std::uint32_t budget, std::uint64_t seed) {
    if (targets.empty()) {
        throw InvalidArgument("greedy_walk needs at least one target");
    }
    WalkTrace trace;
    trace.goals_total = 1;
    Walker walker(g, start, budget, seed, trace);
    auto is_target = [&](NodeId v) { return std::find(targets.begin(), targets.end(), v) != targets.end(); };
    if (is_target(start)) {
        trace.found.push_back({start, 0});
    }
    while (trace.found.empty() && walker.step(scorer)) {
        const auto& last = trace.steps.back();
        if (last.action == StepAction::advance && is_target(last.node)) {
            trace.found.push_back({last.node, last.step});
        }
    }
    trace.success_fraction = trace.found.empty() ? 0.0 : 1.0;
    return trace;
}

WalkTrace forage_walk(const Digraph& g, const KnowledgeMatrix& knowledge, NodeId start,
                      std::span<const NodeId> members, std::uint32_t budget, std::uint64_t seed) {
    std::vector<NodeId> unfound;
    for (NodeId m : members) {
        if (m != start) {
            unfound.push_back(m);
        }
    }
    WalkTrace trace;
    trace.goals_total = unfound.size();
    Walker walker(g, start, budget, seed, trace);
    while (!unfound.empty()) {
        const auto scorer = goal_scorer_centroid(knowledge, unfound);
        bool found = false;
        while (!found && walker.step(scorer)) {
            const auto& last = trace.steps.back();
            if (last.action != StepAction::advance) {
                continue;
            }
            auto it = std::find(unfound.begin(), unfound.end(), last.node);
            if (it != unfound.end()) {
                trace.found.push_back({last.node, last.step});
                unfound.erase(it);
                found = true;
            }
        }
        if (!found) {
            break;
        }
    }
    trace.success_fraction = trace.goals_total == 0
                                 ? 0.0
                                 : static_cast<double>(trace.found.size()) /
                                       static_cast<double>(trace.goals_total);
    return trace;
}

ItemClustering cluster_items(const ItemCatalog& catalog, std::size_t min_size, std::size_t max_size) {
    std::map<std::pair<std::vector<std::string>, int>, std::vector<NodeId>> groups;
    for (ItemId id = 0; id < catalog.size(); ++id) {
        const auto& item = catalog.item(id);
        if (!item.year || item.genres.empty()) {
            continue;
        }
        groups[{item.genres, *item.year}].push_back(id);
    }
    ItemClustering result;
    for (auto& [key, members] : groups) {
        if (members.size() < min_size || members.size() > max_size) {
            continue;
        }
        result.keys.push_back({key.first, key.second});
        result.clusters.push_back(std::move(members));
    }
    if (result.clusters.empty()) {
        throw InvalidArgument("no (genre set, year) cluster has between " + std::to_string(min_size) +
                              " and " + std::to_string(max_size) + " items");
    }
    return result;
}

} // namespace recnav
