#include "wse/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace wse {

namespace {

std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream stream(line);
    std::string tok;
    while (stream >> tok) tokens.push_back(tok);
    return tokens;
}

double parse_weight(const std::string& tok, std::size_t line_no, const char* what) {
    std::size_t pos = 0;
    double value;
    try {
        value = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("line " + std::to_string(line_no) + ": " + what +
                                    " '" + tok + "' is not a number");
    }
    if (pos != tok.size() || !std::isfinite(value))
        throw std::invalid_argument("line " + std::to_string(line_no) + ": " + what +
                                    " '" + tok + "' is not a number");
    return value;
}

std::vector<std::vector<int>> connected_components(const Eigen::SparseMatrix<double>& adj) {
    int n = static_cast<int>(adj.rows());
    std::vector<int> component(n, -1);
    std::vector<std::vector<int>> components;
    std::vector<int> stack;
    for (int start = 0; start < n; ++start) {
        if (component[start] >= 0) continue;
        int id = static_cast<int>(components.size());
        components.emplace_back();
        component[start] = id;
        stack.push_back(start);
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            components[id].push_back(u);
            for (Eigen::SparseMatrix<double>::InnerIterator it(adj, u); it; ++it) {
                int v = static_cast<int>(it.row());
                if (component[v] < 0) {
                    component[v] = id;
                    stack.push_back(v);
                }
            }
        }
    }
    return components;
}

}  // namespace

Graph::Graph(std::vector<std::string> labels, const std::vector<WeightedEdge>& edges)
    : n_(static_cast<int>(labels.size())), labels_(std::move(labels)) {
    index_.reserve(labels_.size());
    for (int i = 0; i < n_; ++i) {
        auto [it, inserted] = index_.emplace(labels_[i], i);
        if (!inserted)
            throw std::invalid_argument("duplicate node label '" + labels_[i] + "'");
    }

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(edges.size() * 2);
    for (const auto& e : edges) {
        if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_)
            throw std::invalid_argument("edge endpoint out of range: (" +
                                        std::to_string(e.u) + ", " + std::to_string(e.v) + ")");
        if (e.u == e.v)
            throw std::invalid_argument("self-loop at node '" + labels_[e.u] + "'");
        if (!(e.weight > 0.0))
            throw std::invalid_argument("edge (" + labels_[e.u] + ", " + labels_[e.v] +
                                        ") has non-positive weight " + std::to_string(e.weight));
        triplets.emplace_back(e.u, e.v, e.weight);
        triplets.emplace_back(e.v, e.u, e.weight);
    }
    adjacency_.resize(n_, n_);
    adjacency_.setFromTriplets(triplets.begin(), triplets.end());  // duplicates summed
    adjacency_.makeCompressed();
    edge_count_ = adjacency_.nonZeros() / 2;
    degrees_ = adjacency_ * Eigen::VectorXd::Ones(n_);
}

int Graph::index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end())
        throw std::invalid_argument("unknown node label '" + label + "'");
    return it->second;
}

bool Graph::has_label(const std::string& label) const {
    return index_.find(label) != index_.end();
}

bool Graph::connected() const {
    if (n_ == 0) return false;
    return static_cast<int>(connected_components(adjacency_)[0].size()) == n_;
}

NodeWeights::NodeWeights(Eigen::VectorXd values) : values_(std::move(values)) {
    if (values_.size() == 0)
        throw std::invalid_argument("node weights must be non-empty");
    for (Eigen::Index i = 0; i < values_.size(); ++i) {
        if (!(values_[i] > 0.0) || !std::isfinite(values_[i]))
            throw std::invalid_argument("node weight " + std::to_string(i) +
                                        " is not positive: " + std::to_string(values_[i]));
    }
    total_ = values_.sum();
    stationary_ = values_ / total_;
}

NodeWeights NodeWeights::unit(int n) {
    return NodeWeights(Eigen::VectorXd::Ones(n));
}

Graph load_edge_list(std::istream& in, const EdgeListOptions& options) {
    std::vector<std::string> labels;
    std::unordered_map<std::string, int> index;
    auto intern = [&](const std::string& label) {
        auto it = index.find(label);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(labels.size());
        labels.push_back(label);
        index.emplace(label, id);
        return id;
    };

    std::vector<WeightedEdge> edges;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto pos = line.find(options.comment_prefix); pos != std::string::npos)
            line.erase(pos);
        auto tokens = split_tokens(line);
        if (tokens.empty()) continue;
        if (tokens.size() != 2 && !(options.weighted && tokens.size() == 3))
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": expected 'src dst" +
                                        (options.weighted ? " [weight]'" : "'") + ", got " +
                                        std::to_string(tokens.size()) + " fields");
        if (tokens[0] == tokens[1])
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": self-loop at node '" + tokens[0] + "'");
        double weight = 1.0;
        if (tokens.size() == 3) {
            weight = parse_weight(tokens[2], line_no, "edge weight");
            if (!(weight > 0.0))
                throw std::invalid_argument("line " + std::to_string(line_no) +
                                            ": edge weight must be positive, got " + tokens[2]);
        }
        int u = intern(tokens[0]);
        int v = intern(tokens[1]);
        edges.push_back({u, v, weight});
    }
    return Graph(std::move(labels), edges);
}

Graph load_edge_list_file(const std::string& path, const EdgeListOptions& options) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open edge list file '" + path + "'");
    return load_edge_list(in, options);
}

void write_edge_list(const Graph& g, std::ostream& out) {
    out << std::setprecision(17);
    const auto& adj = g.adjacency();
    for (int u = 0; u < g.node_count(); ++u) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(adj, u); it; ++it) {
            int v = static_cast<int>(it.row());
            if (v <= u) continue;
            out << g.label(u) << '\t' << g.label(v) << '\t' << it.value() << '\n';
        }
    }
}

NodeWeights internal_weights(const Graph& g) {
    const auto& d = g.degrees();
    for (int i = 0; i < g.node_count(); ++i) {
        if (!(d[i] > 0.0))
            throw std::invalid_argument("node '" + g.label(i) +
                                        "' is isolated; internal weights must be positive");
    }
    return NodeWeights(d);
}

NodeWeights load_node_weights(std::istream& in, const Graph& g,
                              const WeightFileOptions& options) {
    Eigen::VectorXd values = Eigen::VectorXd::Ones(g.node_count());
    std::vector<bool> seen(g.node_count(), false);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto pos = line.find(options.comment_prefix); pos != std::string::npos)
            line.erase(pos);
        auto tokens = split_tokens(line);
        if (tokens.empty()) continue;
        if (tokens.size() != 2)
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": expected 'node_id weight', got " +
                                        std::to_string(tokens.size()) + " fields");
        if (!g.has_label(tokens[0]))
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": unknown node '" + tokens[0] + "'");
        int i = g.index_of(tokens[0]);
        if (seen[i])
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": duplicate weight for node '" + tokens[0] + "'");
        double weight = parse_weight(tokens[1], line_no, "node weight");
        if (!(weight > 0.0))
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": node weight must be positive, got " + tokens[1]);
        values[i] = weight;
        seen[i] = true;
    }
    if (options.require_full) {
        for (int i = 0; i < g.node_count(); ++i)
            if (!seen[i])
                throw std::invalid_argument("node '" + g.label(i) +
                                            "' has no weight and full coverage is required");
    }
    return NodeWeights(std::move(values));
}

NodeWeights load_node_weights_file(const std::string& path, const Graph& g,
                                   const WeightFileOptions& options) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open node weight file '" + path + "'");
    return load_node_weights(in, g, options);
}

ComponentExtraction largest_connected_component(const Graph& g) {
    auto components = connected_components(g.adjacency());
    // Components are discovered in order of their smallest index, so keeping
    // the first strict maximum implements the tie-break.
    std::size_t best = 0;
    for (std::size_t c = 1; c < components.size(); ++c)
        if (components[c].size() > components[best].size()) best = c;

    auto& keep = components[best];
    std::sort(keep.begin(), keep.end());
    std::vector<int> index_map(g.node_count(), -1);
    std::vector<std::string> labels;
    labels.reserve(keep.size());
    for (std::size_t j = 0; j < keep.size(); ++j) {
        index_map[keep[j]] = static_cast<int>(j);
        labels.push_back(g.label(keep[j]));
    }

    std::vector<WeightedEdge> edges;
    const auto& adj = g.adjacency();
    for (int old_u : keep) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(adj, old_u); it; ++it) {
            int old_v = static_cast<int>(it.row());
            if (old_v <= old_u) continue;
            edges.push_back({index_map[old_u], index_map[old_v], it.value()});
        }
    }
    return {Graph(std::move(labels), edges), std::move(index_map)};
}

NodeWeights boost_weights(const NodeWeights& w, const std::vector<int>& subset,
                          double factor) {
    if (!(factor > 0.0))
        throw std::invalid_argument("boost factor must be positive, got " +
                                    std::to_string(factor));
    Eigen::VectorXd values = w.values();
    for (int i : subset) {
        if (i < 0 || i >= w.size())
            throw std::invalid_argument("boost subset contains unknown node index " +
                                        std::to_string(i));
        values[i] = w[i] * factor;
    }
    return NodeWeights(std::move(values));
}

namespace fixtures {

namespace {
std::vector<std::string> numbered_labels(int n) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    return labels;
}
}  // namespace

Graph path(int n) {
    std::vector<WeightedEdge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
    return Graph(numbered_labels(n), edges);
}

Graph cycle(int n) {
    std::vector<WeightedEdge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
    if (n > 2) edges.push_back({n - 1, 0, 1.0});
    return Graph(numbered_labels(n), edges);
}

Graph complete(int n) {
    std::vector<WeightedEdge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.push_back({i, j, 1.0});
    return Graph(numbered_labels(n), edges);
}

Graph two_triangles() {
    std::vector<WeightedEdge> edges = {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0},
                                       {3, 4, 1.0}, {4, 5, 1.0}, {3, 5, 1.0},
                                       {2, 3, 1.0}};
    return Graph(numbered_labels(6), edges);
}

}  // namespace fixtures

}  // namespace wse
