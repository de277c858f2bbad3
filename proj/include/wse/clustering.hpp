#pragma once

#include "wse/embedding.hpp"
#include "wse/graph.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace wse {

struct ClusterModel {
    int k = 0;
    std::vector<int> assignment;  // point index -> cluster id in [0, k)
    Eigen::MatrixXd centers;      // k x d
    double inertia = 0.0;         // sum of squared distances to assigned centers
    int restarts_used = 0;
    std::uint64_t seed = 0;
    /// Inertia after each assignment step of the winning restart;
    /// non-increasing by Lloyd's argument.
    std::vector<double> inertia_history;
};

struct ClusterInfo {
    int cluster_id = 0;
    int size = 0;
    double weighted_size = 0.0;       // mass of the members
    std::vector<int> representatives;  // ranked point indices
};

using ClusterSummary = std::vector<ClusterInfo>;

/// Scales every row to unit Euclidean norm. A zero row has no direction and
/// is an error; the Embedding overload names the offending node.
Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& points);
Eigen::MatrixXd normalize_rows(const Embedding& embedding);

/// k-means with D^2 seeding, `restarts` independent runs, Lloyd iterations
/// until the largest center movement drops below tol or max_iters is hit.
/// Empty clusters are reseeded from the point farthest from its center.
/// Returns the lowest-inertia model; deterministic for a fixed seed and any
/// thread count (restart r draws from its own RNG stream).
ClusterModel kmeans_pp(const Eigen::MatrixXd& points, int k, int restarts, int max_iters,
                       double tol, std::uint64_t seed, int threads = 1);

/// Per-cluster summary: the mass-weighted center of each cluster is taken in
/// the embedding space, the ceil(fraction * size) members closest to it are
/// kept, and the top_m among them ranked by descending internal weight
/// (ties by index) become the representatives.
ClusterSummary summarize_clusters(const ClusterModel& model, const Eigen::MatrixXd& points,
                                  const NodeWeights& internal_weight,
                                  const NodeWeights& mass_weights, double fraction = 0.5,
                                  int top_m = 5);

/// TSV rows "node_label<TAB>cluster_id" in node order.
void write_assignments_tsv(const ClusterModel& model, const std::vector<std::string>& labels,
                           std::ostream& out);
void write_assignments_tsv_file(const ClusterModel& model,
                                const std::vector<std::string>& labels,
                                const std::string& path);

/// JSON array of {cluster_id, size, representatives: [labels]}.
std::string cluster_summary_json(const ClusterSummary& summary,
                                 const std::vector<std::string>& labels);

}  // namespace wse
