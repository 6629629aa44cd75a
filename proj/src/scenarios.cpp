#include "recnav/error.hpp"
#include "recnav/navsim.hpp"
#include "recnav/rng.hpp"

#include <algorithm>
#include <numeric>

namespace recnav {

std::string_view to_string(ScenarioKind kind) {
    switch (kind) {
    case ScenarioKind::p2p: return "p2p";
    case ScenarioKind::berrypicking: return "berry";
    case ScenarioKind::foraging: return "forage";
    }
    return "p2p";
}

ScenarioKind parse_scenario(std::string_view text) {
    if (text == "p2p") return ScenarioKind::p2p;
    if (text == "berry" || text == "berrypicking") return ScenarioKind::berrypicking;
    if (text == "forage" || text == "foraging") return ScenarioKind::foraging;
    throw InvalidArgument("unknown scenario '" + std::string(text) + "' (expected p2p|berry|forage)");
}

std::vector<NodePair> sample_pairs(std::size_t num_nodes, std::size_t count, std::uint64_t seed) {
    if (num_nodes < 2) {
        throw InvalidArgument("pair sampling needs at least 2 nodes");
    }
    Rng rng(derive_seed(seed, "sample/pairs"));
    std::vector<NodePair> pairs(count);
    for (auto& p : pairs) {
        p.start = static_cast<NodeId>(rng.uniform_index(num_nodes));
        do {
            p.target = static_cast<NodeId>(rng.uniform_index(num_nodes));
        } while (p.target == p.start);
    }
    return pairs;
}

std::vector<BerryTask> sample_berry_tasks(const ItemClustering& clustering, std::size_t count,
                                          std::uint64_t seed) {
    if (clustering.size() < 4) {
        throw InvalidArgument("berrypicking needs at least 4 clusters, got " +
                              std::to_string(clustering.size()));
    }
    Rng rng(derive_seed(seed, "sample/berry"));
    std::vector<BerryTask> tasks(count);
    for (auto& task : tasks) {
        for (std::size_t i = 0; i < 4; ++i) {
            std::size_t c;
            do {
                c = rng.uniform_index(clustering.size());
            } while (std::find(task.clusters.begin(), task.clusters.begin() + static_cast<std::ptrdiff_t>(i), c) !=
                     task.clusters.begin() + static_cast<std::ptrdiff_t>(i));
            task.clusters[i] = c;
        }
        const auto& first = clustering.clusters[task.clusters[0]];
        task.start = first[rng.uniform_index(first.size())];
    }
    return tasks;
}

std::vector<ForageTask> sample_forage_tasks(const ItemClustering& clustering, std::size_t count,
                                            std::uint64_t seed) {
    if (clustering.size() == 0) {
        throw InvalidArgument("foraging needs at least one cluster");
    }
    Rng rng(derive_seed(seed, "sample/forage"));
    std::vector<ForageTask> tasks(count);
    for (auto& task : tasks) {
        task.cluster = rng.uniform_index(clustering.size());
        const auto& members = clustering.clusters[task.cluster];
        task.start = members[rng.uniform_index(members.size())];
    }
    return tasks;
}

namespace {

void finish(ScenarioResult& result) {
    double sum = 0.0;
    for (const auto& run : result.runs) {
        sum += run.success_fraction;
    }
    result.success_ratio = result.runs.empty() ? 0.0 : sum / static_cast<double>(result.runs.size());
}

void check_size(const Digraph& g, const KnowledgeMatrix& knowledge) {
    if (g.size() != knowledge.size()) {
        throw InvalidArgument("knowledge matrix and network sizes differ");
    }
}

} // namespace

ScenarioResult run_p2p(const Digraph& g, const KnowledgeMatrix& knowledge, std::span<const NodePair> pairs,
                       std::uint32_t budget, std::uint64_t seed) {
    check_size(g, knowledge);
    ScenarioResult result;
    result.runs.reserve(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto [start, target] = pairs[i];
        const NodeId goal[] = {target};
        auto trace = greedy_walk(g, start, goal_scorer_single(knowledge, target), goal, budget,
                                 derive_seed(seed, "walk/p2p", i));
        ScenarioRun run;
        run.sample_id = i;
        run.goals_total = 1;
        run.goals_found = trace.found.size();
        run.steps_used = trace.steps_used();
        run.success_fraction = trace.success_fraction;
        run.walks.push_back(std::move(trace));
        result.runs.push_back(std::move(run));
    }
    finish(result);
    return result;
}

ScenarioResult run_berrypicking(const Digraph& g, const KnowledgeMatrix& knowledge,
                                const ItemClustering& clustering, std::span<const BerryTask> tasks,
                                std::uint32_t budget, std::uint64_t seed) {
    check_size(g, knowledge);
    ScenarioResult result;
    result.runs.reserve(tasks.size());
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const auto& task = tasks[i];
        ScenarioRun run;
        run.sample_id = i;
        run.goals_total = 3;
        NodeId position = task.start;
        for (std::size_t goal = 1; goal < 4; ++goal) {
            const auto& cluster = clustering.clusters.at(task.clusters[goal]);
            auto trace = greedy_walk(g, position, goal_scorer_centroid(knowledge, cluster), cluster, budget,
                                     derive_seed(seed, "walk/berry", i * 4 + goal));
            run.steps_used += trace.steps_used();
            const bool met = trace.succeeded();
            if (met) {
                ++run.goals_found;
                position = trace.found.front().target;
            }
            run.walks.push_back(std::move(trace));
            if (!met) {
                break;
            }
        }
        run.success_fraction = static_cast<double>(run.goals_found) / 3.0;
        result.runs.push_back(std::move(run));
    }
    finish(result);
    return result;
}

ScenarioResult run_foraging(const Digraph& g, const KnowledgeMatrix& knowledge,
                            const ItemClustering& clustering, std::span<const ForageTask> tasks,
                            std::uint32_t budget, std::uint64_t seed) {
    check_size(g, knowledge);
    ScenarioResult result;
    result.runs.reserve(tasks.size());
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const auto& task = tasks[i];
        const auto& cluster = clustering.clusters.at(task.cluster);
        auto trace = forage_walk(g, knowledge, task.start, cluster, budget, derive_seed(seed, "walk/forage", i));
        ScenarioRun run;
        run.sample_id = i;
        run.goals_total = trace.goals_total;
        run.goals_found = trace.found.size();
        run.steps_used = trace.steps_used();
        run.success_fraction = trace.success_fraction;
        run.walks.push_back(std::move(trace));
        result.runs.push_back(std::move(run));
    }
    finish(result);
    return result;
}

} // namespace recnav
