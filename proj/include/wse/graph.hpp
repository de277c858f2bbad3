#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace wse {

struct WeightedEdge {
    int u;
    int v;
    double weight;
};

/// Undirected graph with non-negative edge weights and no self-loops.
/// Nodes carry external string labels mapped to internal indices 0..n-1.
/// Immutable after construction; safe to share across threads.
class Graph {
public:
    /// Builds from labels and edges over internal indices. Parallel edges
    /// are merged by summing their weights.
    Graph(std::vector<std::string> labels, const std::vector<WeightedEdge>& edges);

    int node_count() const { return n_; }
    std::int64_t edge_count() const { return edge_count_; }

    /// Symmetric adjacency with zero diagonal.
    const Eigen::SparseMatrix<double>& adjacency() const { return adjacency_; }

    /// Row sums of the adjacency (degrees for unit edge weights). May contain
    /// zeros if the graph has isolated nodes.
    const Eigen::VectorXd& degrees() const { return degrees_; }

    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(int index) const { return labels_.at(index); }

    /// Internal index of a label; throws std::invalid_argument if unknown.
    int index_of(const std::string& label) const;
    bool has_label(const std::string& label) const;

    bool connected() const;

private:
    int n_ = 0;
    std::int64_t edge_count_ = 0;
    Eigen::SparseMatrix<double> adjacency_;
    Eigen::VectorXd degrees_;
    std::vector<std::string> labels_;
    std::unordered_map<std::string, int> index_;
};

/// Positive per-node weights with cached total and stationary distribution
/// pi = w / |w|. Immutable after construction.
class NodeWeights {
public:
    explicit NodeWeights(Eigen::VectorXd values);

    static NodeWeights unit(int n);

    int size() const { return static_cast<int>(values_.size()); }
    const Eigen::VectorXd& values() const { return values_; }
    double operator[](int i) const { return values_[i]; }
    double total() const { return total_; }
    const Eigen::VectorXd& stationary() const { return stationary_; }

private:
    Eigen::VectorXd values_;
    double total_;
    Eigen::VectorXd stationary_;
};

struct EdgeListOptions {
    bool weighted = true;  // when false a third column is a parse error
    char comment_prefix = '#';
};

/// Parses whitespace-separated "src dst" or "src dst weight" lines. Labels
/// are interned in first-appearance order; duplicate edges sum their
/// weights. Self-loops, non-positive weights, and malformed lines are
/// reported with their line number.
Graph load_edge_list(std::istream& in, const EdgeListOptions& options = {});
Graph load_edge_list_file(const std::string& path, const EdgeListOptions& options = {});

/// Writes one "src dst weight" line per undirected edge, u < v by internal
/// index, weights at full precision. Reloading yields an equal adjacency.
void write_edge_list(const Graph& g, std::ostream& out);

/// Node weights equal to adjacency row sums d. Throws if some node is
/// isolated (its weight would be zero).
NodeWeights internal_weights(const Graph& g);

struct WeightFileOptions {
    bool require_full = false;  // when true every node must be covered
    char comment_prefix = '#';
};

/// Parses "node_id weight" lines aligned to g's indexing. Nodes absent from
/// the stream default to weight 1 unless require_full is set.
NodeWeights load_node_weights(std::istream& in, const Graph& g,
                              const WeightFileOptions& options = {});
NodeWeights load_node_weights_file(const std::string& path, const Graph& g,
                                   const WeightFileOptions& options = {});

struct ComponentExtraction {
    Graph graph;                 // induced subgraph of the largest component
    std::vector<int> index_map;  // old index -> new index, -1 if dropped
};

/// Induced subgraph on the largest connected component. Ties are broken by
/// the component containing the smallest internal index.
ComponentExtraction largest_connected_component(const Graph& g);

/// Multiplies the weights of `subset` by `factor`, leaving the rest as is.
NodeWeights boost_weights(const NodeWeights& w, const std::vector<int>& subset,
                          double factor);

/// Tiny deterministic test-fixture graphs.
namespace fixtures {
Graph path(int n);
Graph cycle(int n);
Graph complete(int n);
Graph two_triangles();  // triangles {0,1,2} and {3,4,5} joined by edge 2-3
}  // namespace fixtures

}  // namespace wse
