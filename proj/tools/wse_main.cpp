#include "wse/clustering.hpp"
#include "wse/embedding.hpp"
#include "wse/errors.hpp"
#include "wse/graph.hpp"
#include "wse/simulate.hpp"
#include "wse/walk.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr const char* kVersion = "0.2.0";

struct CommonOpts {
    std::uint64_t seed = 0;
    bool strict = false;
    int threads = 1;
    std::string out;
    bool to_stdout = false;
    bool timings = false;
    CLI::Option* seed_opt = nullptr;
};

struct GraphOpts {
    std::string edges;
    bool unweighted = false;
    bool lcc = false;
    std::string weight_source;  // empty means the per-command default
    std::string weights_file;
    std::string boost_subset;
    double boost_factor = 10.0;
};

void add_common(CLI::App* sub, CommonOpts& c) {
    c.seed_opt = sub->add_option("--seed", c.seed, "RNG seed; drawn and printed if absent")
                     ->envname("WSE_SEED");
    sub->add_flag("--strict", c.strict, "fail instead of drawing a seed when --seed is absent")
        ->envname("WSE_STRICT");
    sub->add_option("--threads", c.threads, "worker threads (results do not depend on this)")
        ->default_val(1)
        ->check(CLI::PositiveNumber)
        ->envname("WSE_THREADS");
    sub->add_option("--out", c.out, "output path (command-specific default)");
    sub->add_flag("--stdout", c.to_stdout,
                  "write the primary output to standard output; no companion files");
    sub->add_flag("--timings", c.timings, "report wall time on standard error");
}

void add_graph(CLI::App* sub, GraphOpts& g) {
    sub->add_option("--edges", g.edges, "edge list file: 'src dst' or 'src dst weight' lines")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_flag("--unweighted", g.unweighted, "reject a third column in the edge list");
    sub->add_flag("--lcc", g.lcc, "restrict to the largest connected component");
    sub->add_option("--weights", g.weight_source,
                    "node weight source: unit, internal (w = d), or file")
        ->check(CLI::IsMember({"unit", "internal", "file"}));
    sub->add_option("--weights-file", g.weights_file, "node weight file for --weights file")
        ->check(CLI::ExistingFile);
    sub->add_option("--boost-subset", g.boost_subset,
                    "file of node labels whose weights are multiplied by --boost-factor")
        ->check(CLI::ExistingFile);
    sub->add_option("--boost-factor", g.boost_factor, "multiplier for --boost-subset")
        ->default_val(10.0)
        ->check(CLI::PositiveNumber);
}

std::uint64_t resolve_seed(const CommonOpts& c) {
    if (c.seed_opt->count() > 0) return c.seed;
    if (c.strict) throw std::invalid_argument("--strict requires an explicit --seed");
    std::random_device device;
    std::uint64_t drawn =
        (static_cast<std::uint64_t>(device()) << 32) ^ static_cast<std::uint64_t>(device());
    std::cerr << "seed: " << drawn << " (drawn; pass --seed " << drawn << " to reproduce)\n";
    return drawn;
}

std::vector<std::string> read_label_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    std::vector<std::string> labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream stream(line);
        std::string first, extra;
        if (!(stream >> first)) continue;
        if (stream >> extra)
            throw std::invalid_argument(path + " line " + std::to_string(line_no) +
                                        ": expected one label per line");
        labels.push_back(first);
    }
    return labels;
}

wse::Graph load_graph(const GraphOpts& opts) {
    wse::EdgeListOptions edge_options;
    edge_options.weighted = !opts.unweighted;
    wse::Graph g = wse::load_edge_list_file(opts.edges, edge_options);
    if (opts.lcc) g = wse::largest_connected_component(g).graph;
    return g;
}

wse::NodeWeights resolve_node_weights(const wse::Graph& g, const GraphOpts& opts,
                                      const std::string& default_source) {
    std::string source = opts.weight_source.empty() ? default_source : opts.weight_source;
    wse::NodeWeights w = wse::NodeWeights::unit(g.node_count());
    if (source == "internal") {
        w = wse::internal_weights(g);
    } else if (source == "file") {
        if (opts.weights_file.empty())
            throw std::invalid_argument("--weights file requires --weights-file");
        w = wse::load_node_weights_file(opts.weights_file, g);
    } else if (source != "unit") {
        throw std::invalid_argument("unknown weight source '" + source + "'");
    }
    if (!opts.boost_subset.empty()) {
        std::vector<int> subset;
        for (const auto& label : read_label_lines(opts.boost_subset))
            subset.push_back(g.index_of(label));
        w = wse::boost_weights(w, subset, opts.boost_factor);
    }
    return w;
}

std::string default_weight_source(wse::EmbeddingMode mode) {
    return mode == wse::EmbeddingMode::regular ? "unit" : "internal";
}

std::string sidecar_path(const std::string& out) {
    if (out.size() >= 4 && out.substr(out.size() - 4) == ".tsv")
        return out.substr(0, out.size() - 4) + ".json";
    return out + ".json";
}

std::string summary_path(const std::string& out) {
    if (out.size() >= 4 && out.substr(out.size() - 4) == ".tsv")
        return out.substr(0, out.size() - 4) + "_summary.json";
    return out + "_summary.json";
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
    if (!text.empty() && text.back() != '\n') out << "\n";
    if (!out) throw std::runtime_error("failed while writing '" + path + "'");
}

nlohmann::ordered_json graph_config_json(const std::string& command, const GraphOpts& g,
                                         const std::string& weight_source_used) {
    nlohmann::ordered_json config;
    config["command"] = command;
    config["edges"] = g.edges;
    config["unweighted"] = g.unweighted;
    config["lcc"] = g.lcc;
    config["weights"] = weight_source_used;
    if (!g.weights_file.empty()) config["weights_file"] = g.weights_file;
    if (!g.boost_subset.empty()) {
        config["boost_subset"] = g.boost_subset;
        config["boost_factor"] = g.boost_factor;
    }
    return config;
}

class Stopwatch {
public:
    explicit Stopwatch(bool enabled) : enabled_(enabled) {}
    ~Stopwatch() {
        if (!enabled_) return;
        auto elapsed = std::chrono::steady_clock::now() - start_;
        std::cerr << "timing: " << std::fixed << std::setprecision(3)
                  << std::chrono::duration<double>(elapsed).count() << " s\n";
    }

private:
    bool enabled_;
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct EmbedOpts {
    CommonOpts common;
    GraphOpts graph;
    std::string mode = "weighted";
    int k = 100;
    double tol = 1e-8;
};

void run_embed(const EmbedOpts& opts) {
    Stopwatch watch(opts.common.timings);
    wse::EmbeddingMode mode = wse::embedding_mode_from_string(opts.mode);
    if (mode == wse::EmbeddingMode::regular && !opts.graph.weight_source.empty() &&
        opts.graph.weight_source != "unit")
        throw std::invalid_argument("regular mode embeds with unit weights; drop --weights");
    if (mode == wse::EmbeddingMode::regular && !opts.graph.boost_subset.empty())
        throw std::invalid_argument("regular mode embeds with unit weights; drop --boost-subset");

    std::uint64_t seed = resolve_seed(opts.common);
    wse::Graph g = load_graph(opts.graph);
    std::string source =
        mode == wse::EmbeddingMode::regular ? "unit" : default_weight_source(mode);
    if (!opts.graph.weight_source.empty()) source = opts.graph.weight_source;
    wse::NodeWeights w = resolve_node_weights(g, opts.graph, source);
    wse::Embedding embedding = wse::embed(g, w, opts.k, mode, opts.tol, seed);

    if (opts.common.to_stdout) {
        wse::write_embedding_tsv(embedding, std::cout);
        return;
    }
    std::string out = opts.common.out.empty() ? "embedding.tsv" : opts.common.out;
    wse::write_embedding_tsv_file(embedding, out);

    auto sidecar = nlohmann::ordered_json::parse(wse::embedding_sidecar_json(embedding));
    sidecar["config"] = graph_config_json("embed", opts.graph, source);
    sidecar["version"] = kVersion;
    write_text_file(sidecar_path(out), sidecar.dump(2));
}

struct ClusterOpts {
    CommonOpts common;
    GraphOpts graph;
    std::string mode = "weighted";
    std::string embedding_file;
    int k = 100;
    double tol = 1e-8;
    int clusters = 20;
    int restarts = 100;
    int max_iters = 100;
    double kmeans_tol = 1e-9;
    double fraction = 0.5;
    int top_m = 5;
};

void run_cluster(const ClusterOpts& opts) {
    Stopwatch watch(opts.common.timings);
    wse::EmbeddingMode mode = wse::embedding_mode_from_string(opts.mode);
    std::uint64_t seed = resolve_seed(opts.common);
    wse::Graph g = load_graph(opts.graph);

    // Points to cluster, their labels, and the per-point weights used for
    // summaries: internal weight d for the ranking, and the per-mode mass
    // (unit for regular, d for shifted and weighted).
    std::vector<std::string> labels;
    Eigen::MatrixXd points;
    if (!opts.embedding_file.empty()) {
        wse::EmbeddingTable table = wse::read_embedding_tsv_file(opts.embedding_file);
        labels = std::move(table.labels);
        points = wse::normalize_rows(table.coords);
    } else {
        std::string source =
            mode == wse::EmbeddingMode::regular ? "unit" : default_weight_source(mode);
        if (!opts.graph.weight_source.empty() && mode != wse::EmbeddingMode::regular)
            source = opts.graph.weight_source;
        wse::NodeWeights w = resolve_node_weights(g, opts.graph, source);
        wse::Embedding embedding = wse::embed(g, w, opts.k, mode, opts.tol, seed);
        labels = embedding.labels;
        points = wse::normalize_rows(embedding);
    }

    wse::NodeWeights d = wse::internal_weights(g);
    Eigen::VectorXd rank(points.rows()), mass(points.rows());
    for (Eigen::Index row = 0; row < points.rows(); ++row) {
        int node = g.index_of(labels[static_cast<std::size_t>(row)]);
        rank[row] = d[node];
        mass[row] = mode == wse::EmbeddingMode::regular ? 1.0 : d[node];
    }

    wse::ClusterModel model =
        wse::kmeans_pp(points, opts.clusters, opts.restarts, opts.max_iters,
                       opts.kmeans_tol, seed, opts.common.threads);
    wse::ClusterSummary summary =
        wse::summarize_clusters(model, points, wse::NodeWeights(rank),
                                wse::NodeWeights(mass), opts.fraction, opts.top_m);

    if (opts.common.to_stdout) {
        wse::write_assignments_tsv(model, labels, std::cout);
        return;
    }
    std::string out = opts.common.out.empty() ? "clusters.tsv" : opts.common.out;
    wse::write_assignments_tsv_file(model, labels, out);
    write_text_file(summary_path(out), wse::cluster_summary_json(summary, labels));
}

struct WalkOpts {
    CommonOpts common;
    GraphOpts graph;
    std::vector<std::string> pair_labels;
    std::string pairs_file;
};

void run_walk(const WalkOpts& opts) {
    Stopwatch watch(opts.common.timings);
    std::vector<std::pair<std::string, std::string>> pairs;
    if (opts.pair_labels.size() % 2 != 0)
        throw std::invalid_argument("pair labels must come in twos");
    for (std::size_t p = 0; p + 1 < opts.pair_labels.size(); p += 2)
        pairs.emplace_back(opts.pair_labels[p], opts.pair_labels[p + 1]);
    if (!opts.pairs_file.empty()) {
        std::ifstream in(opts.pairs_file);
        if (!in) throw std::runtime_error("cannot open '" + opts.pairs_file + "' for reading");
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::istringstream stream(line);
            std::string a, b, extra;
            if (!(stream >> a)) continue;
            if (!(stream >> b) || (stream >> extra))
                throw std::invalid_argument(opts.pairs_file + " line " +
                                            std::to_string(line_no) +
                                            ": expected two labels per line");
            pairs.emplace_back(a, b);
        }
    }
    if (pairs.empty()) throw std::invalid_argument("no node pairs given");

    wse::Graph g = load_graph(opts.graph);
    wse::NodeWeights w = resolve_node_weights(g, opts.graph, "unit");
    wse::WalkAnalyzer analyzer(g, w);

    std::ostringstream rows;
    rows << std::setprecision(17);
    for (const auto& [a, b] : pairs) {
        wse::WalkStatistics stats = analyzer.pair(g.index_of(a), g.index_of(b));
        rows << a << '\t' << b << '\t' << stats.hitting_ij << '\t' << stats.hitting_ji
             << '\t' << stats.commute << '\t' << stats.similarity << "\n";
    }

    if (opts.common.to_stdout) {
        std::cout << rows.str();
        return;
    }
    write_text_file(opts.common.out.empty() ? "walk.tsv" : opts.common.out, rows.str());
}

struct PairOpts {
    CommonOpts common;
    GraphOpts graph;
    std::string source;
    std::string sink;
};

void run_dirichlet(const PairOpts& opts) {
    Stopwatch watch(opts.common.timings);
    wse::Graph g = load_graph(opts.graph);
    wse::NodeWeights w = resolve_node_weights(g, opts.graph, "unit");
    int i = g.index_of(opts.source);
    int j = g.index_of(opts.sink);

    wse::WalkAnalyzer analyzer(g, w);
    wse::DirichletSolution solution = analyzer.dirichlet(i, j);

    std::ostringstream rows;
    rows << std::setprecision(17);
    for (int node = 0; node < g.node_count(); ++node)
        rows << g.label(node) << '\t' << solution.potentials[node] << "\n";

    nlohmann::ordered_json report;
    report["alpha"] = solution.alpha;
    report["q"] = solution.charge;
    report["vbar"] = solution.weighted_mean;
    report["H_ij"] = solution.charge / solution.alpha;
    report["H_ji"] = (w.total() - solution.charge) / solution.alpha;
    report["C_ij"] = w.total() / solution.alpha;

    if (opts.common.to_stdout) {
        std::cout << rows.str();
        return;
    }
    std::string out = opts.common.out.empty() ? "potentials.tsv" : opts.common.out;
    write_text_file(out, rows.str());
    write_text_file(sidecar_path(out), report.dump(2));
}

struct SimulateOpts {
    CommonOpts common;
    GraphOpts graph;
    std::string source;
    std::string sink;
    std::int64_t trials = 0;
};

void run_simulate(const SimulateOpts& opts) {
    Stopwatch watch(opts.common.timings);
    std::uint64_t seed = resolve_seed(opts.common);
    wse::Graph g = load_graph(opts.graph);
    wse::NodeWeights w = resolve_node_weights(g, opts.graph, "unit");
    wse::HittingEstimate estimate =
        wse::simulate_hitting(g, w, g.index_of(opts.source), g.index_of(opts.sink),
                              opts.trials, seed, opts.common.threads);

    nlohmann::ordered_json report;
    report["mean"] = estimate.mean;
    report["stderr"] = estimate.std_error;
    report["trials"] = estimate.trials;
    report["seed"] = seed;

    if (opts.common.to_stdout) {
        std::cout << report.dump(2) << "\n";
        return;
    }
    write_text_file(opts.common.out.empty() ? "simulate.json" : opts.common.out,
                    report.dump(2));
}

struct GenOpts {
    CommonOpts common;
    std::string type;
    int n = 5;
};

void run_gen(const GenOpts& opts) {
    wse::Graph g = [&] {
        if (opts.type == "path") return wse::fixtures::path(opts.n);
        if (opts.type == "cycle") return wse::fixtures::cycle(opts.n);
        if (opts.type == "complete") return wse::fixtures::complete(opts.n);
        if (opts.type == "two-triangles") return wse::fixtures::two_triangles();
        throw std::invalid_argument("unknown fixture type '" + opts.type + "'");
    }();
    if (opts.common.out.empty() || opts.common.to_stdout) {
        wse::write_edge_list(g, std::cout);
        return;
    }
    std::ofstream out(opts.common.out);
    if (!out) throw std::runtime_error("cannot open '" + opts.common.out + "' for writing");
    wse::write_edge_list(g, out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted spectral embedding of graphs"};
    app.set_version_flag("--version", std::string("wse ") + kVersion);
    app.require_subcommand(1);

    EmbedOpts embed;
    auto* embed_cmd = app.add_subcommand("embed", "compute a spectral embedding");
    add_common(embed_cmd, embed.common);
    add_graph(embed_cmd, embed.graph);
    embed_cmd->add_option("--mode", embed.mode, "regular, shifted, or weighted")
        ->default_val("weighted")
        ->check(CLI::IsMember({"regular", "shifted", "weighted"}));
    embed_cmd->add_option("--k", embed.k, "embedding dimension")->default_val(100);
    embed_cmd->add_option("--tol", embed.tol, "eigensolver residual tolerance")
        ->default_val(1e-8)
        ->check(CLI::PositiveNumber)
        ->envname("WSE_TOL");

    ClusterOpts cluster;
    auto* cluster_cmd = app.add_subcommand("cluster", "embed, normalize, and k-means cluster");
    add_common(cluster_cmd, cluster.common);
    add_graph(cluster_cmd, cluster.graph);
    cluster_cmd->add_option("--mode", cluster.mode, "regular, shifted, or weighted")
        ->default_val("weighted")
        ->check(CLI::IsMember({"regular", "shifted", "weighted"}));
    cluster_cmd->add_option("--embedding", cluster.embedding_file,
                            "precomputed embedding TSV; skips the embedding step")
        ->check(CLI::ExistingFile);
    cluster_cmd->add_option("--k", cluster.k, "embedding dimension")->default_val(100);
    cluster_cmd->add_option("--tol", cluster.tol, "eigensolver residual tolerance")
        ->default_val(1e-8)
        ->check(CLI::PositiveNumber)
        ->envname("WSE_TOL");
    cluster_cmd->add_option("--clusters", cluster.clusters, "cluster count")->default_val(20);
    cluster_cmd->add_option("--restarts", cluster.restarts, "independent k-means++ runs")
        ->default_val(100);
    cluster_cmd->add_option("--max-iters", cluster.max_iters, "Lloyd iteration cap")
        ->default_val(100);
    cluster_cmd->add_option("--kmeans-tol", cluster.kmeans_tol,
                            "Lloyd stop: largest center movement below this")
        ->default_val(1e-9);
    cluster_cmd->add_option("--fraction", cluster.fraction,
                            "fraction of closest members eligible as representatives")
        ->default_val(0.5);
    cluster_cmd->add_option("--top", cluster.top_m, "representatives per cluster")
        ->default_val(5);

    WalkOpts walk;
    auto* walk_cmd = app.add_subcommand("walk", "hitting and commute times for node pairs");
    add_common(walk_cmd, walk.common);
    add_graph(walk_cmd, walk.graph);
    walk_cmd->add_option("pairs", walk.pair_labels, "node labels, two per query pair");
    walk_cmd->add_option("--pairs-file", walk.pairs_file, "file of 'src dst' lines")
        ->check(CLI::ExistingFile);

    PairOpts dirichlet;
    auto* dirichlet_cmd =
        app.add_subcommand("dirichlet", "potentials with one node pinned high, one low");
    add_common(dirichlet_cmd, dirichlet.common);
    add_graph(dirichlet_cmd, dirichlet.graph);
    dirichlet_cmd->add_option("--source", dirichlet.source, "node pinned at potential 1")
        ->required();
    dirichlet_cmd->add_option("--sink", dirichlet.sink, "node pinned at potential 0")
        ->required();

    SimulateOpts simulate;
    auto* simulate_cmd =
        app.add_subcommand("simulate", "Monte Carlo estimate of a mean hitting time");
    add_common(simulate_cmd, simulate.common);
    add_graph(simulate_cmd, simulate.graph);
    simulate_cmd->add_option("--source", simulate.source, "start node")->required();
    simulate_cmd->add_option("--sink", simulate.sink, "target node")->required();
    simulate_cmd->add_option("--trials", simulate.trials, "number of walks")->required();

    GenOpts gen;
    auto* gen_cmd = app.add_subcommand("gen", "emit a tiny fixture graph as an edge list");
    add_common(gen_cmd, gen.common);
    gen_cmd->add_option("--type", gen.type, "path, cycle, complete, or two-triangles")
        ->required()
        ->check(CLI::IsMember({"path", "cycle", "complete", "two-triangles"}));
    gen_cmd->add_option("--n", gen.n, "node count for path/cycle/complete")->default_val(5);

    embed_cmd->callback([&] { run_embed(embed); });
    cluster_cmd->callback([&] { run_cluster(cluster); });
    walk_cmd->callback([&] { run_walk(walk); });
    dirichlet_cmd->callback([&] { run_dirichlet(dirichlet); });
    simulate_cmd->callback([&] { run_simulate(simulate); });
    gen_cmd->callback([&] { run_gen(gen); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const wse::NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
