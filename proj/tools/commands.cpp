#include "commands.hpp"

#include "recnav/corpus.hpp"
#include "recnav/csv.hpp"
#include "recnav/error.hpp"
#include "recnav/knowledge.hpp"
#include "recnav/navsim.hpp"
#include "recnav/network.hpp"
#include "recnav/rng.hpp"
#include "recnav/similarity.hpp"
#include "recnav/topology.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <tuple>

namespace recnav::cli {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

constexpr std::size_t kDefaultMaxN = 20;
constexpr std::size_t kMinTableDepth = 50;

// ---------------------------------------------------------------------------
// Logging: RECNAV_LOG=quiet|warn|info (default warn)

enum class LogLevel { quiet, warn, info };

LogLevel log_level() {
    const char* env = std::getenv("RECNAV_LOG");
    if (!env) return LogLevel::warn;
    const std::string v = env;
    if (v == "quiet") return LogLevel::quiet;
    if (v == "info" || v == "debug") return LogLevel::info;
    return LogLevel::warn;
}

void log_info(const std::string& message) {
    if (log_level() >= LogLevel::info) {
        std::cerr << "recnav: " << message << '\n';
    }
}

void log_warn(const std::string& message) {
    if (log_level() >= LogLevel::warn) {
        std::cerr << "recnav: warning: " << message << '\n';
    }
}

// ---------------------------------------------------------------------------
// Argument helpers

std::vector<std::string> split_list(const std::string& text, char sep = ',') {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, sep)) {
        if (!part.empty()) {
            out.push_back(part);
        }
    }
    return out;
}

std::size_t parse_count(const std::string& text) {
    const auto v = parse_int(text, "--n", 0);
    if (v < 0) {
        throw InvalidArgument("negative value '" + text + "'");
    }
    return static_cast<std::size_t>(v);
}

/// "5", "1..20", "1,5,10" or combinations like "1..3,10".
std::vector<std::size_t> parse_n_list(const std::string& text) {
    std::set<std::size_t> values;
    try {
        for (const auto& part : split_list(text)) {
            const auto dots = part.find("..");
            if (dots == std::string::npos) {
                values.insert(parse_count(part));
                continue;
            }
            const auto lo = parse_count(part.substr(0, dots));
            const auto hi = parse_count(part.substr(dots + 2));
            if (lo > hi) {
                throw InvalidArgument("empty range '" + part + "'");
            }
            for (auto n = lo; n <= hi; ++n) {
                values.insert(n);
            }
        }
    } catch (const ParseError&) {
        throw InvalidArgument("cannot parse --n '" + text + "' (expected int, a..b or a list)");
    }
    if (values.empty()) {
        throw InvalidArgument("--n selects no values");
    }
    return {values.begin(), values.end()};
}

std::pair<double, double> parse_real_range(const std::string& text, const std::string& flag) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        throw InvalidArgument(flag + " expects min..max, got '" + text + "'");
    }
    try {
        return {parse_double(text.substr(0, dots), flag, 0), parse_double(text.substr(dots + 2), flag, 0)};
    } catch (const ParseError&) {
        throw InvalidArgument(flag + " expects min..max, got '" + text + "'");
    }
}

void require_file(const std::string& path, const std::string& flag) {
    if (path.empty()) {
        throw InvalidArgument(flag + " is required");
    }
    if (!fs::exists(path)) {
        throw IoError("missing input " + flag + " " + path);
    }
}

void write_text(const fs::path& path, const std::string& content) {
    write_file_atomic(path, content);
    log_info("wrote " + path.string());
}

void write_json(const fs::path& path, const json& value) {
    write_text(path, value.dump(2) + "\n");
}

json read_json(const fs::path& path) {
    const auto text = read_file(path);
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(path.string(), 0, std::string("invalid JSON: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Run configuration shared by all commands

struct RunConfig {
    std::string command;
    std::uint64_t seed = 1;
    std::string items;
    std::string ratings;
    std::string corpus;
    std::string wiki;
    std::string algo = "cf";
    std::string n = "5";
    std::string diversifier = "none";
    double lambda = 0.5;
    std::string knowledge = "title,neighbors,optimal,random";
    std::string scenario = "p2p";
    std::size_t samples = 1200;
    std::uint32_t budget = 50;
    std::string out = ".";
    std::string dataset = "synthetic";
    // generate
    std::size_t num_items = 500;
    std::size_t num_users = 2000;
    double zipf = 1.0;
    std::size_t genres = 8;
    std::string years = "1995..2004";
    // build / diversify
    std::size_t min_ratings = 20;
    std::string rating_scale = "1..5";
    std::string rating_transform = "raw";
    std::size_t k = 0;
    std::size_t pool = 50;
    bool allow_large_n = false;
    bool dump_table = false;

    json to_json(const std::vector<std::string>& keys) const {
        json all = {
            {"seed", seed},
            {"items", items},
            {"ratings", ratings},
            {"corpus", corpus},
            {"wiki", wiki},
            {"algo", algo},
            {"n", n},
            {"diversifier", diversifier},
            {"lambda", lambda},
            {"knowledge", knowledge},
            {"scenario", scenario},
            {"samples", samples},
            {"budget", budget},
            {"out", out},
            {"dataset", dataset},
            {"num_items", num_items},
            {"num_users", num_users},
            {"zipf", zipf},
            {"genres", genres},
            {"years", years},
            {"min_ratings", min_ratings},
            {"rating_scale", rating_scale},
            {"rating_transform", rating_transform},
            {"k", k},
            {"pool", pool},
            {"allow_large_n", allow_large_n},
            {"dump_table", dump_table},
        };
        json j = {{"command", command}};
        json args = json::object();
        for (const auto& key : keys) {
            args[key] = all.at(key);
        }
        j["args"] = args;
        return j;
    }
};

// ---------------------------------------------------------------------------
// Network files

std::string network_stem(Algo algo, std::size_t n, Diversifier d) {
    return "net_" + std::string(to_string(algo)) + "_N" + std::to_string(n) + "_" + std::string(to_string(d));
}

struct NetworkFile {
    fs::path csv;
    Algo algo;
    std::size_t n;
    Diversifier diversifier;
};

std::vector<NetworkFile> list_networks(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw IoError("missing input directory " + dir.string());
    }
    static const std::regex pattern(R"(net_(cf|cb)_N(\d+)_(none|random|diversify|exprel)\.csv)");
    std::vector<NetworkFile> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::smatch m;
        const auto name = entry.path().filename().string();
        if (std::regex_match(name, m, pattern)) {
            files.push_back({entry.path(), parse_algo(m[1].str()), std::stoul(m[2].str()),
                             parse_diversifier(m[3].str())});
        }
    }
    std::sort(files.begin(), files.end(), [](const NetworkFile& a, const NetworkFile& b) {
        return std::tuple(a.algo, a.diversifier, a.n) < std::tuple(b.algo, b.diversifier, b.n);
    });
    return files;
}

RecNetwork load_network(const NetworkFile& file) {
    fs::path sidecar = file.csv;
    sidecar.replace_extension(".json");
    const auto meta = read_json(sidecar);
    try {
        Provenance p;
        p.algo = parse_algo(meta.at("algo").get<std::string>());
        p.diversifier = parse_diversifier(meta.at("diversifier").get<std::string>());
        if (meta.contains("lambda") && !meta["lambda"].is_null()) {
            p.lambda = meta["lambda"].get<double>();
        }
        if (meta.contains("seed") && !meta["seed"].is_null()) {
            p.seed = meta["seed"].get<std::uint64_t>();
        }
        const auto nodes = meta.at("n_nodes").get<std::size_t>();
        const auto top_n = meta.at("N").get<std::size_t>();
        if (p.algo != file.algo || p.diversifier != file.diversifier || top_n != file.n) {
            throw ParseError(sidecar.string(), 0, "sidecar does not match file name");
        }
        std::ifstream in(file.csv, std::ios::binary);
        if (!in) {
            throw IoError("cannot open input file: " + file.csv.string());
        }
        return read_network_csv(in, file.csv.string(), nodes, top_n, p);
    } catch (const json::exception& e) {
        throw ParseError(sidecar.string(), 0, std::string("bad network sidecar: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw ParseError(sidecar.string(), 0, e.what());
    }
}

void save_network(const fs::path& dir, const RecNetwork& net, const json& config,
                  const std::vector<std::string>& warnings) {
    const auto& p = net.provenance();
    const auto stem = network_stem(p.algo, net.top_n(), p.diversifier);
    std::ostringstream csv;
    write_network_csv(csv, net);
    write_text(dir / (stem + ".csv"), csv.str());
    json meta = {
        {"algo", to_string(p.algo)},
        {"N", net.top_n()},
        {"diversifier", to_string(p.diversifier)},
        {"lambda", p.lambda ? json(*p.lambda) : json(nullptr)},
        {"seed", p.seed ? json(*p.seed) : json(nullptr)},
        {"n_nodes", net.size()},
        {"n_edges", net.edge_count()},
        {"warnings", warnings},
        {"config", config},
    };
    write_json(dir / (stem + ".json"), meta);
}

// ---------------------------------------------------------------------------
// Feature inputs for build / diversify

struct FeatureInputs {
    ItemCatalog catalog;
    FeatureMatrix features;
    std::vector<ExternalId> excluded; // items without usable features
};

FeatureInputs load_features(const RunConfig& cfg, Algo algo) {
    require_file(cfg.items, "--items");
    FeatureInputs in;
    in.catalog = load_catalog(cfg.items);
    if (algo == Algo::cf) {
        require_file(cfg.ratings, "--ratings");
        const auto [lo, hi] = parse_real_range(cfg.rating_scale, "--rating-scale");
        const auto ratings = load_ratings(cfg.ratings, in.catalog, cfg.min_ratings, RatingScale{lo, hi});
        RatingTransform transform;
        if (cfg.rating_transform == "raw") {
            transform = RatingTransform::raw;
        } else if (cfg.rating_transform == "binary") {
            transform = RatingTransform::binary;
        } else {
            throw InvalidArgument("--rating-transform must be raw|binary");
        }
        in.features = rating_features(ratings, transform);
    } else {
        require_file(cfg.corpus, "--corpus");
        const auto corpus = load_corpus(cfg.corpus, in.catalog);
        auto result = tfidf(corpus);
        for (ItemId id : result.empty_documents) {
            log_warn("item " + std::to_string(in.catalog.external_id(id)) + " has no usable tokens");
        }
        in.features = std::move(result.features);
    }
    for (ItemId id = 0; id < in.features.size(); ++id) {
        if (in.features.is_zero(id)) {
            in.excluded.push_back(in.catalog.external_id(id));
        }
    }
    return in;
}

std::size_t table_depth(const RunConfig& cfg, std::size_t num_items, std::size_t max_n) {
    if (num_items < 2) {
        throw InvalidArgument("need at least 2 items to build a network");
    }
    std::size_t k = cfg.k ? cfg.k : std::max(max_n, kMinTableDepth);
    k = std::min(k, num_items - 1);
    if (max_n > k) {
        throw InvalidArgument("N=" + std::to_string(max_n) + " exceeds the similarity table depth " +
                              std::to_string(k));
    }
    return k;
}

void check_n_range(const RunConfig& cfg, const std::vector<std::size_t>& ns) {
    for (auto n : ns) {
        if (n < 1) {
            throw InvalidArgument("N must be at least 1");
        }
        if (n > kDefaultMaxN && !cfg.allow_large_n) {
            throw InvalidArgument("N=" + std::to_string(n) + " is outside [1, 20]; pass --allow-large-n to override");
        }
    }
}

// ---------------------------------------------------------------------------
// Commands

void cmd_generate(const RunConfig& cfg) {
    SyntheticParams params;
    params.seed = cfg.seed;
    params.num_items = cfg.num_items;
    params.num_users = cfg.num_users;
    params.zipf_exponent = cfg.zipf;
    params.num_genres = cfg.genres;
    const auto [lo, hi] = parse_real_range(cfg.years, "--years");
    params.year_min = static_cast<int>(lo);
    params.year_max = static_cast<int>(hi);
    const auto data = generate_synthetic(params);

    const fs::path dir = cfg.out;
    std::ostringstream items, ratings, corpus;
    write_catalog(items, data.catalog);
    write_ratings(ratings, data.ratings, data.catalog);
    write_corpus(corpus, data.corpus, data.catalog);
    write_text(dir / "items.csv", items.str());
    write_text(dir / "ratings.csv", ratings.str());
    write_text(dir / "corpus.tsv", corpus.str());
    json meta = cfg.to_json({"seed", "num_items", "num_users", "zipf", "genres", "years", "out"});
    meta["outputs"] = {"items.csv", "ratings.csv", "corpus.tsv"};
    meta["num_ratings"] = data.ratings.size();
    write_json(dir / "generate.json", meta);
}

void cmd_build(const RunConfig& cfg) {
    const Algo algo = parse_algo(cfg.algo);
    const auto ns = parse_n_list(cfg.n);
    check_n_range(cfg, ns);
    const auto in = load_features(cfg, algo);
    const auto k = table_depth(cfg, in.catalog.size(), ns.back());
    const auto table = build_similarity_table(in.features, k);
    const fs::path dir = cfg.out;
    const json config = cfg.to_json({"items", "ratings", "corpus", "algo", "n", "k", "min_ratings",
                                     "rating_scale", "rating_transform", "allow_large_n", "out"});
    if (cfg.dump_table) {
        std::ostringstream csv;
        write_similarity_table(csv, table);
        write_text(dir / ("similarity_" + std::string(to_string(algo)) + ".csv"), csv.str());
    }
    std::vector<std::string> notes;
    for (auto id : in.excluded) {
        notes.push_back("item " + std::to_string(id) + " has no features; it has no out-links");
    }
    for (auto n : ns) {
        save_network(dir, build_network(table, n, algo), config, notes);
    }
}

void cmd_diversify(const RunConfig& cfg) {
    const Algo algo = parse_algo(cfg.algo);
    const auto ns = parse_n_list(cfg.n);
    check_n_range(cfg, ns);
    if (ns.front() < 2) {
        throw InvalidArgument("diversification requires N >= 2");
    }
    std::vector<Diversifier> diversifiers;
    for (const auto& name : split_list(cfg.diversifier)) {
        const auto d = parse_diversifier(name);
        if (d == Diversifier::none) {
            throw InvalidArgument("--diversifier none is not a diversification; use build");
        }
        diversifiers.push_back(d);
    }
    if (diversifiers.empty()) {
        throw InvalidArgument("--diversifier is required");
    }
    if (!(cfg.lambda >= 0.0 && cfg.lambda <= 1.0)) {
        throw InvalidArgument("--lambda must lie in [0, 1]");
    }
    const fs::path dir = cfg.out;
    std::vector<NetworkFile> bases;
    for (auto n : ns) {
        NetworkFile f{dir / (network_stem(algo, n, Diversifier::none) + ".csv"), algo, n, Diversifier::none};
        if (!fs::exists(f.csv)) {
            throw IoError("missing input network " + f.csv.string() + " (run build first)");
        }
        bases.push_back(f);
    }

    const auto in = load_features(cfg, algo);
    const auto k = table_depth(cfg, in.catalog.size(), std::max(ns.back(), cfg.pool));
    const auto table = build_similarity_table(in.features, k);
    const std::uint64_t stage_seed = derive_seed(cfg.seed, "stage:diversify");
    const json config = cfg.to_json({"seed", "items", "ratings", "corpus", "algo", "n", "diversifier", "lambda",
                                     "k", "pool", "min_ratings", "rating_scale", "rating_transform",
                                     "allow_large_n", "out"});
    for (const auto& base_file : bases) {
        const auto base = load_network(base_file);
        if (base.size() != in.catalog.size()) {
            throw ParseError(base_file.csv.string(), 0, "network size does not match the catalog");
        }
        for (auto d : diversifiers) {
            std::vector<std::string> warnings;
            RecNetwork result;
            switch (d) {
            case Diversifier::random:
                result = diversify_random(base, stage_seed);
                break;
            case Diversifier::diversify: {
                auto r = diversify_ziegler(base, table, in.features, cfg.pool);
                result = std::move(r.network);
                warnings = std::move(r.warnings);
                break;
            }
            case Diversifier::exprel: {
                auto r = diversify_exprel(base, table, cfg.lambda, cfg.pool);
                result = std::move(r.network);
                warnings = std::move(r.warnings);
                break;
            }
            case Diversifier::none:
                break;
            }
            for (const auto& w : warnings) {
                log_warn(std::string(to_string(d)) + " N=" + std::to_string(base.top_n()) + ": " + w);
            }
            save_network(dir, result, config, warnings);
        }
    }
}

json topology_json(const RecNetwork& net, const ComponentReport& comp, const BowTie& bt) {
    const auto& p = net.provenance();
    json sizes = json::object();
    for (auto r : kAllBowTieRegions) {
        sizes[std::string(to_string(r))] = bt.size(r);
    }
    json report = {
        {"N", net.top_n()},
        {"algo", to_string(p.algo)},
        {"diversifier", to_string(p.diversifier)},
        {"n_nodes", net.size()},
        {"num_scc", comp.num_scc},
        {"largest_scc_size", comp.largest_size()},
        {"largest_scc_fraction", comp.largest_scc_fraction},
        {"clustering", comp.clustering_coefficient},
        {"bowtie_sizes", sizes},
    };
    const auto g = net.graph();
    if (comp.largest_size() >= 2) {
        const auto ecc = eccentricities(g, comp);
        json hist = json::object();
        for (const auto& [value, count] : ecc.histogram()) {
            hist[std::to_string(value)] = count;
        }
        report["diameter"] = ecc.diameter;
        report["eccentricity_histogram"] = hist;
    } else {
        report["diameter"] = nullptr;
        report["eccentricity_histogram"] = json::object();
    }
    return report;
}

std::vector<std::pair<std::string, double>> topology_metrics(const json& report) {
    std::vector<std::pair<std::string, double>> m;
    m.emplace_back("num_scc", report.at("num_scc").get<double>());
    m.emplace_back("largest_scc_fraction", report.at("largest_scc_fraction").get<double>());
    m.emplace_back("clustering", report.at("clustering").get<double>());
    if (!report.at("diameter").is_null()) {
        m.emplace_back("diameter", report.at("diameter").get<double>());
    }
    const double n = report.at("n_nodes").get<double>();
    for (auto r : kAllBowTieRegions) {
        const auto name = std::string(to_string(r));
        const double size = report.at("bowtie_sizes").at(name).get<double>();
        m.emplace_back("bowtie_" + name, size);
        m.emplace_back("bowtie_frac_" + name, n > 0 ? size / n : 0.0);
    }
    for (const auto& [value, count] : report.at("eccentricity_histogram").items()) {
        m.emplace_back("ecc_hist_" + value, count.get<double>());
    }
    return m;
}

void cmd_topology(const RunConfig& cfg) {
    const fs::path dir = cfg.out;
    auto files = list_networks(dir);
    if (files.empty()) {
        throw IoError("no network files (net_*.csv) in " + dir.string());
    }
    const json config = cfg.to_json({"out"});
    std::string long_csv = csv_line({"algo", "N", "diversifier", "metric", "value"});
    std::map<std::pair<Algo, Diversifier>, std::vector<std::pair<std::size_t, BowTie>>> series;
    for (const auto& file : files) {
        const auto net = load_network(file);
        const auto g = net.graph();
        const auto comp = strongly_connected_components(g);
        auto bt = bowtie(g, comp);
        auto report = topology_json(net, comp, bt);
        report["config"] = config;
        const auto stem = file.csv.stem().string().substr(4); // drop "net_"
        write_json(dir / ("topology_" + stem + ".json"), report);
        for (const auto& [metric, value] : topology_metrics(report)) {
            long_csv += csv_line({std::string(to_string(file.algo)), std::to_string(file.n),
                                  std::string(to_string(file.diversifier)), metric, format_double(value)});
        }
        series[{file.algo, file.diversifier}].emplace_back(file.n, std::move(bt));
    }
    write_text(dir / "topology.csv", long_csv);

    for (const auto& [key, entries] : series) {
        if (entries.size() < 2) {
            continue;
        }
        std::vector<BowTie> bowties;
        for (const auto& e : entries) {
            bowties.push_back(e.second);
        }
        const auto matrices = membership_change(bowties);
        std::string csv = csv_line({"algo", "diversifier", "N_from", "N_to", "from", "to", "count"});
        for (std::size_t i = 0; i < matrices.size(); ++i) {
            for (auto from : kAllBowTieRegions) {
                for (auto to : kAllBowTieRegions) {
                    csv += csv_line({std::string(to_string(key.first)), std::string(to_string(key.second)),
                                     std::to_string(entries[i].first), std::to_string(entries[i + 1].first),
                                     std::string(to_string(from)), std::string(to_string(to)),
                                     std::to_string(matrices[i][static_cast<std::size_t>(from)]
                                                                [static_cast<std::size_t>(to)])});
                }
            }
        }
        write_text(dir / ("membership_" + std::string(to_string(key.first)) + "_" +
                          std::string(to_string(key.second)) + ".csv"),
                   csv);
    }
}

void cmd_simulate(const RunConfig& cfg) {
    const auto scenario = parse_scenario(cfg.scenario);
    std::vector<KnowledgeKind> kinds;
    for (const auto& name : split_list(cfg.knowledge)) {
        kinds.push_back(parse_knowledge(name));
    }
    if (kinds.empty()) {
        throw InvalidArgument("--knowledge selects no kinds");
    }
    if (cfg.budget < 1) {
        throw InvalidArgument("--budget must be at least 1");
    }
    if (cfg.samples < 1) {
        throw InvalidArgument("--samples must be at least 1");
    }
    const bool needs_catalog = scenario != ScenarioKind::p2p ||
                               std::find(kinds.begin(), kinds.end(), KnowledgeKind::title) != kinds.end() ||
                               std::find(kinds.begin(), kinds.end(), KnowledgeKind::wiki_neighbors) != kinds.end();
    std::optional<ItemCatalog> catalog;
    if (needs_catalog) {
        require_file(cfg.items, "--items");
        catalog = load_catalog(cfg.items);
    }
    std::optional<Digraph> wiki;
    if (std::find(kinds.begin(), kinds.end(), KnowledgeKind::wiki_neighbors) != kinds.end()) {
        require_file(cfg.wiki, "--wiki");
        std::ifstream in(cfg.wiki, std::ios::binary);
        wiki = read_item_graph(in, cfg.wiki, *catalog);
    }

    const fs::path dir = cfg.out;
    auto files = list_networks(dir);
    // Optional filters: --algo / --diversifier / --n select a subset of the networks on disk.
    std::optional<std::set<std::size_t>> n_filter;
    if (!cfg.n.empty() && cfg.n != "all") {
        const auto ns = parse_n_list(cfg.n);
        n_filter.emplace(ns.begin(), ns.end());
    }
    std::erase_if(files, [&](const NetworkFile& f) {
        if (cfg.algo != "all" && f.algo != parse_algo(cfg.algo)) return true;
        if (cfg.diversifier != "all") {
            const auto allowed = split_list(cfg.diversifier);
            if (std::find(allowed.begin(), allowed.end(), std::string(to_string(f.diversifier))) == allowed.end()) {
                return true;
            }
        }
        return n_filter && !n_filter->contains(f.n);
    });
    if (files.empty()) {
        throw IoError("no network files in " + dir.string() + " match the selection");
    }

    const std::uint64_t stage_seed = derive_seed(cfg.seed, "stage:simulate");
    const std::size_t num_nodes = catalog ? catalog->size() : load_network(files.front()).size();
    std::optional<ItemClustering> clustering;
    std::vector<NodePair> pairs;
    std::vector<BerryTask> berry;
    std::vector<ForageTask> forage;
    switch (scenario) {
    case ScenarioKind::p2p:
        pairs = sample_pairs(num_nodes, cfg.samples, stage_seed);
        break;
    case ScenarioKind::berrypicking:
        clustering = cluster_items(*catalog);
        berry = sample_berry_tasks(*clustering, cfg.samples, stage_seed);
        break;
    case ScenarioKind::foraging:
        clustering = cluster_items(*catalog);
        forage = sample_forage_tasks(*clustering, cfg.samples, stage_seed);
        break;
    }

    std::optional<KnowledgeMatrix> title;
    const std::string scenario_name(to_string(scenario));
    std::string csv = csv_line({"scenario", "algo", "N", "diversifier", "knowledge", "seed", "sample_id",
                                "goals_total", "goals_found", "steps_used", "success_fraction"});
    json aggregates = json::array();
    for (const auto& file : files) {
        const auto net = load_network(file);
        if (net.size() != num_nodes) {
            throw ParseError(file.csv.string(), 0, "network size does not match the catalog");
        }
        const auto g = net.graph();
        for (auto kind : kinds) {
            std::unique_ptr<KnowledgeMatrix> owned;
            const KnowledgeMatrix* knowledge;
            if (kind == KnowledgeKind::title) {
                if (!title) {
                    title = KnowledgeMatrix::title(*catalog);
                }
                knowledge = &*title;
            } else {
                owned = std::make_unique<KnowledgeMatrix>(
                    build_knowledge(kind, net, catalog ? &*catalog : nullptr, wiki ? &*wiki : nullptr));
                knowledge = owned.get();
            }
            ScenarioResult result;
            switch (scenario) {
            case ScenarioKind::p2p:
                result = run_p2p(g, *knowledge, pairs, cfg.budget, stage_seed);
                break;
            case ScenarioKind::berrypicking:
                result = run_berrypicking(g, *knowledge, *clustering, berry, cfg.budget, stage_seed);
                break;
            case ScenarioKind::foraging:
                result = run_foraging(g, *knowledge, *clustering, forage, cfg.budget, stage_seed);
                break;
            }
            const std::string prefix = csv_line({scenario_name, std::string(to_string(file.algo)),
                                                 std::to_string(file.n), std::string(to_string(file.diversifier)),
                                                 std::string(to_string(kind)), std::to_string(cfg.seed)});
            const std::string head = prefix.substr(0, prefix.size() - 1);
            for (const auto& run : result.runs) {
                csv += head + "," +
                       csv_line({std::to_string(run.sample_id), std::to_string(run.goals_total),
                                 std::to_string(run.goals_found), std::to_string(run.steps_used),
                                 format_double(run.success_fraction)});
            }
            aggregates.push_back({{"scenario", scenario_name},
                                  {"algo", to_string(file.algo)},
                                  {"N", file.n},
                                  {"diversifier", to_string(file.diversifier)},
                                  {"knowledge", to_string(kind)},
                                  {"runs", result.runs.size()},
                                  {"success_ratio", result.success_ratio}});
        }
    }
    write_text(dir / ("sim_" + scenario_name + ".csv"), csv);
    json meta = cfg.to_json({"seed", "items", "wiki", "algo", "n", "diversifier", "knowledge", "scenario",
                             "samples", "budget", "out"});
    meta["aggregates"] = aggregates;
    if (clustering) {
        meta["clusters"] = clustering->size();
    }
    write_json(dir / ("sim_" + scenario_name + ".json"), meta);
}

void cmd_report(const RunConfig& cfg) {
    const fs::path dir = cfg.out;
    if (!fs::is_directory(dir)) {
        throw IoError("missing input directory " + dir.string());
    }
    using Key = std::tuple<std::string, std::size_t, std::string, std::string>; // algo, N, div, metric
    std::map<Key, double> rows;
    std::vector<fs::path> topo_files, sim_files;
    static const std::regex topo_pattern(R"(topology_(cf|cb)_N\d+_\w+\.json)");
    static const std::regex sim_pattern(R"(sim_(p2p|berry|forage)\.csv)");
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (std::regex_match(name, topo_pattern)) topo_files.push_back(entry.path());
        if (std::regex_match(name, sim_pattern)) sim_files.push_back(entry.path());
    }
    if (topo_files.empty() && sim_files.empty()) {
        throw IoError("no topology or simulation outputs in " + dir.string());
    }
    std::sort(topo_files.begin(), topo_files.end());
    std::sort(sim_files.begin(), sim_files.end());

    for (const auto& path : topo_files) {
        const auto report = read_json(path);
        try {
            const auto algo = report.at("algo").get<std::string>();
            const auto n = report.at("N").get<std::size_t>();
            const auto div = report.at("diversifier").get<std::string>();
            for (const auto& [metric, value] : topology_metrics(report)) {
                rows[{algo, n, div, metric}] = value;
            }
        } catch (const json::exception& e) {
            throw ParseError(path.string(), 0, std::string("bad topology report: ") + e.what());
        }
    }

    const std::vector<std::string> sim_header{"scenario", "algo", "N", "diversifier", "knowledge", "seed",
                                              "sample_id", "goals_total", "goals_found", "steps_used",
                                              "success_fraction"};
    for (const auto& path : sim_files) {
        std::ifstream in(path, std::ios::binary);
        CsvReader reader(in, path.string());
        CsvRecord record;
        if (!reader.next(record) || record.fields != sim_header) {
            throw ParseError(path.string(), record.line, "unexpected simulation CSV header");
        }
        std::map<Key, std::pair<double, std::size_t>> sums;
        while (reader.next(record)) {
            if (record.fields.size() != sim_header.size()) {
                throw ParseError(path.string(), record.line, "expected 11 fields");
            }
            const auto n = static_cast<std::size_t>(parse_int(record.fields[2], path.string(), record.line));
            auto& [sum, count] = sums[{record.fields[1], n, record.fields[3],
                                       "success_" + record.fields[0] + "_" + record.fields[4]}];
            sum += parse_double(record.fields[10], path.string(), record.line);
            ++count;
        }
        for (const auto& [key, acc] : sums) {
            rows[key] = acc.first / static_cast<double>(acc.second);
        }
    }

    std::string csv = csv_line({"dataset", "algo", "N", "diversifier", "metric", "value"});
    for (const auto& [key, value] : rows) {
        const auto& [algo, n, div, metric] = key;
        csv += csv_line({csv_field(cfg.dataset), algo, std::to_string(n), div, metric, format_double(value)});
    }
    write_text(dir / "report.csv", csv);
    json meta = cfg.to_json({"dataset", "out"});
    std::vector<std::string> inputs;
    for (const auto& p : topo_files) inputs.push_back(p.filename().string());
    for (const auto& p : sim_files) inputs.push_back(p.filename().string());
    meta["inputs"] = inputs;
    meta["rows"] = rows.size();
    write_json(dir / "report.json", meta);
}

int fail(const char* kind, int code, const std::string& message) {
    json line = {{"error", kind}, {"exit_code", code}, {"message", message}};
    std::cerr << line.dump() << std::endl;
    return code;
}

} // namespace

int run(int argc, const char* const* argv) {
    RunConfig cfg;
    CLI::App app{"Recommendation network reachability and navigability toolkit", "recnav"};
    app.require_subcommand(1);

    auto add_seed = [&](CLI::App* c) { c->add_option("--seed", cfg.seed, "Top-level random seed"); };
    auto add_out = [&](CLI::App* c, const char* help) { c->add_option("--out", cfg.out, help); };
    auto add_features = [&](CLI::App* c) {
        c->add_option("--items", cfg.items, "Item catalog CSV");
        c->add_option("--ratings", cfg.ratings, "Ratings CSV (cf)");
        c->add_option("--corpus", cfg.corpus, "Item text TSV (cb)");
        c->add_option("--algo", cfg.algo, "cf|cb");
        c->add_option("--n", cfg.n, "N as int, a..b range or list");
        c->add_option("--k", cfg.k, "Similarity table depth (default max(N, 50))");
        c->add_option("--min-ratings", cfg.min_ratings, "Drop users with fewer ratings");
        c->add_option("--rating-scale", cfg.rating_scale, "Declared rating range min..max");
        c->add_option("--rating-transform", cfg.rating_transform, "raw|binary rating vectors");
        c->add_flag("--allow-large-n", cfg.allow_large_n, "Permit N > 20");
    };

    auto* generate = app.add_subcommand("generate", "Write a seeded synthetic catalog, ratings and corpus");
    add_seed(generate);
    generate->add_option("--num-items", cfg.num_items, "Number of items");
    generate->add_option("--num-users", cfg.num_users, "Number of users");
    generate->add_option("--zipf", cfg.zipf, "Popularity Zipf exponent");
    generate->add_option("--genres", cfg.genres, "Number of genres");
    generate->add_option("--years", cfg.years, "Publication years min..max");
    add_out(generate, "Output directory");

    auto* build = app.add_subcommand("build", "Build top-N recommendation networks");
    add_features(build);
    build->add_flag("--dump-table", cfg.dump_table, "Also write the similarity table CSV");
    add_out(build, "Run directory");

    auto* diversify = app.add_subcommand("diversify", "Diversify networks written by build");
    add_features(diversify);
    add_seed(diversify);
    diversify->add_option("--diversifier", cfg.diversifier, "random|diversify|exprel (comma list allowed)");
    diversify->add_option("--lambda", cfg.lambda, "ExpRel relevance/expansion trade-off");
    diversify->add_option("--pool", cfg.pool, "Candidate pool depth");
    add_out(diversify, "Run directory");

    auto* topology = app.add_subcommand("topology", "Components, clustering, eccentricity, bow-tie");
    add_out(topology, "Run directory");

    auto* simulate = app.add_subcommand("simulate", "Greedy navigation scenarios");
    add_seed(simulate);
    simulate->add_option("--items", cfg.items, "Item catalog CSV");
    simulate->add_option("--wiki", cfg.wiki, "External item graph CSV for wiki_neighbors");
    simulate->add_option("--scenario", cfg.scenario, "p2p|berry|forage");
    simulate->add_option("--knowledge", cfg.knowledge, "Comma list of knowledge kinds");
    simulate->add_option("--samples", cfg.samples, "Samples per network and knowledge kind");
    simulate->add_option("--budget", cfg.budget, "Step budget per goal");
    simulate->add_option("--algo", cfg.algo, "cf|cb|all");
    simulate->add_option("--n", cfg.n, "N selection or 'all'");
    simulate->add_option("--diversifier", cfg.diversifier, "Diversifier list or 'all'");
    add_out(simulate, "Run directory");

    auto* report = app.add_subcommand("report", "Merge topology and simulation outputs into report.csv");
    report->add_option("--dataset", cfg.dataset, "Dataset label");
    add_out(report, "Run directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("invalid_parameter", kInvalidParameter, e.what());
    }

    // Simulation filters default to "all" unless given explicitly.
    if (simulate->parsed()) {
        if (simulate->count("--algo") == 0) cfg.algo = "all";
        if (simulate->count("--n") == 0) cfg.n = "all";
        if (simulate->count("--diversifier") == 0) cfg.diversifier = "all";
    }

    try {
        if (generate->parsed()) {
            cfg.command = "generate";
            cmd_generate(cfg);
        } else if (build->parsed()) {
            cfg.command = "build";
            cmd_build(cfg);
        } else if (diversify->parsed()) {
            cfg.command = "diversify";
            cmd_diversify(cfg);
        } else if (topology->parsed()) {
            cfg.command = "topology";
            cmd_topology(cfg);
        } else if (simulate->parsed()) {
            cfg.command = "simulate";
            cmd_simulate(cfg);
        } else if (report->parsed()) {
            cfg.command = "report";
            cmd_report(cfg);
        }
    } catch (const InvalidArgument& e) {
        return fail("invalid_parameter", kInvalidParameter, e.what());
    } catch (const IoError& e) {
        return fail("missing_input", kMissingInput, e.what());
    } catch (const ParseError& e) {
        return fail("schema_mismatch", kSchemaMismatch, e.what());
    } catch (const std::exception& e) {
        return fail("internal", kInternalError, e.what());
    }
    return kOk;
}

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    return run(static_cast<int>(argv.size()), argv.data());
}

} // namespace recnav::cli
