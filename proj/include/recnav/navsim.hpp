#pragma once

#include "recnav/corpus.hpp"
#include "recnav/digraph.hpp"
#include "recnav/knowledge.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace recnav {

/// Value of moving to a candidate node under the current goal.
using GoalScorer = std::function<double(NodeId)>;

/// score(c) = S[c, target].
GoalScorer goal_scorer_single(const KnowledgeMatrix& knowledge, NodeId target);

/// score(c) = mean over t in cluster of S[c, t]. For shortest-path knowledge
/// the cluster score is the best member score instead (distance to the nearest
/// member), so the oracle stays an oracle for set-valued goals.
GoalScorer goal_scorer_centroid(const KnowledgeMatrix& knowledge, std::span<const NodeId> cluster);

enum class StepAction { advance, backtrack };

struct WalkStep {
    std::uint32_t step = 0; // 1-based
    StepAction action = StepAction::advance;
    NodeId node = 0;        // node occupied after the action
};

struct FoundTarget {
    NodeId target = 0;
    std::uint32_t step = 0;
};

struct WalkTrace {
    NodeId start = 0;
    std::vector<WalkStep> steps;
    std::vector<FoundTarget> found;
    std::size_t goals_total = 0;
    double success_fraction = 0.0;

    std::uint32_t steps_used() const { return static_cast<std::uint32_t>(steps.size()); }
    std::size_t advances() const;
    bool succeeded() const { return goals_total > 0 && found.size() == goals_total; }
};

/// Greedy local search from `start` until any node of `targets` is reached or
/// `budget` steps are spent. Each step either advances to the best-scoring
/// unvisited out-neighbor (ties drawn uniformly from the seeded stream) or, at
/// a dead end, backtracks one node along the path; both cost one step.
WalkTrace greedy_walk(const Digraph& g, NodeId start, const GoalScorer& scorer,
                      std::span<const NodeId> targets, std::uint32_t budget, std::uint64_t seed);

/// Patch exhaustion: visits as many of `members` (excluding `start`) as the
/// budget allows, steering by the centroid of the members not found yet.
WalkTrace forage_walk(const Digraph& g, const KnowledgeMatrix& knowledge, NodeId start,
                      std::span<const NodeId> members, std::uint32_t budget, std::uint64_t seed);

struct ClusterKey {
    std::vector<std::string> genres;
    int year = 0;

    friend bool operator==(const ClusterKey&, const ClusterKey&) = default;
};

/// Items grouped by (genre set, year); only groups of 3..30 items are kept.
struct ItemClustering {
    std::vector<ClusterKey> keys;
    std::vector<std::vector<NodeId>> clusters; // members ascending

    std::size_t size() const noexcept { return clusters.size(); }
};

/// Items with unknown year or no genres are left out. Throws InvalidArgument
/// when no cluster survives the size filter.
ItemClustering cluster_items(const ItemCatalog& catalog, std::size_t min_size = 3,
                             std::size_t max_size = 30);

struct NodePair {
    NodeId start = 0;
    NodeId target = 0;
};

struct BerryTask {
    std::array<std::size_t, 4> clusters{}; // cluster indices; start lies in the first
    NodeId start = 0;
};

struct ForageTask {
    std::size_t cluster = 0;
    NodeId start = 0;
};

/// Uniform ordered pairs with start != target; reachability is ignored.
std::vector<NodePair> sample_pairs(std::size_t num_nodes, std::size_t count, std::uint64_t seed);
/// Four distinct clusters per task, start drawn from the first. Needs >= 4 clusters.
std::vector<BerryTask> sample_berry_tasks(const ItemClustering& clustering, std::size_t count,
                                          std::uint64_t seed);
std::vector<ForageTask> sample_forage_tasks(const ItemClustering& clustering, std::size_t count,
                                            std::uint64_t seed);

struct ScenarioRun {
    std::size_t sample_id = 0;
    std::size_t goals_total = 0;
    std::size_t goals_found = 0;
    std::uint32_t steps_used = 0;
    double success_fraction = 0.0;
    std::vector<WalkTrace> walks; // one per goal stage
};

struct ScenarioResult {
    std::vector<ScenarioRun> runs;
    double success_ratio = 0.0; // mean success_fraction over runs
};

enum class ScenarioKind { p2p, berrypicking, foraging };
std::string_view to_string(ScenarioKind kind);
ScenarioKind parse_scenario(std::string_view text);

ScenarioResult run_p2p(const Digraph& g, const KnowledgeMatrix& knowledge, std::span<const NodePair> pairs,
                       std::uint32_t budget, std::uint64_t seed);

/// Goals are clusters 2..4 in order; each goal gets a fresh budget and visited
/// set and starts where the previous one was met. The run stops at the first
/// goal that is not met.
ScenarioResult run_berrypicking(const Digraph& g, const KnowledgeMatrix& knowledge,
                                const ItemClustering& clustering, std::span<const BerryTask> tasks,
                                std::uint32_t budget, std::uint64_t seed);

ScenarioResult run_foraging(const Digraph& g, const KnowledgeMatrix& knowledge,
                            const ItemClustering& clustering, std::span<const ForageTask> tasks,
                            std::uint32_t budget, std::uint64_t seed);

} // namespace recnav
