#pragma once

#include "wse/graph.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

namespace wse {

/// Exact statistics of the continuous-time walk on one node pair. The walk
/// holds at node i for an exponential time with rate d_i / w_i and then
/// jumps to a neighbor with probability proportional to the edge weight.
struct WalkStatistics {
    double hitting_ij = 0.0;  // mean time to reach j from i
    double hitting_ji = 0.0;
    double commute = 0.0;     // hitting_ij + hitting_ji
    double similarity = 0.0;  // cosine similarity, in [-1, 1]
};

/// Potentials of the electrical network with node i pinned at 1 and node j
/// at 0, together with the boundary flux and weighted summaries.
struct DirichletSolution {
    int source = 0;
    int sink = 0;
    Eigen::VectorXd potentials;  // v, with v[source] = 1 and v[sink] = 0
    double alpha = 0.0;          // boundary flux; 1 / effective resistance
    double weighted_mean = 0.0;  // vbar = sum_k pi_k v_k
    double charge = 0.0;         // q = sum_k w_k v_k
};

/// Shared engine for exact walk statistics on one (graph, weights) pair.
/// Factorizes the Laplacian once (grounded at the last node) and answers
/// queries with one or two triangular solves each.
class WalkAnalyzer {
public:
    /// The graph must be connected and stay alive while the analyzer is used.
    WalkAnalyzer(const Graph& g, NodeWeights w);

    const Graph& graph() const { return *graph_; }
    const NodeWeights& weights() const { return weights_; }

    double hitting(int i, int j) const;
    Eigen::VectorXd hitting_to(int j) const;  // mean hitting times of j from every node
    double commute(int i, int j) const;
    double stationary_hitting(int j) const;
    double similarity(int i, int j) const;
    WalkStatistics pair(int i, int j) const;

    DirichletSolution dirichlet(int i, int j) const;
    double resistance(int i, int j) const;

    /// Solves L z = b for right-hand sides with zero sum, fixing z at the
    /// ground node to 0. Exposed for identity tests.
    Eigen::VectorXd solve_grounded(const Eigen::Ref<const Eigen::VectorXd>& b) const;

private:
    void check_node(int i) const;
    // (e_i - pi)^T L^+ (e_j - pi) given z = solve_grounded(e_j - pi).
    double centered_entry(int i, const Eigen::VectorXd& z) const;

    const Graph* graph_;
    NodeWeights weights_;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver_;
};

double hitting_time(const Graph& g, const NodeWeights& w, int i, int j);
double hitting_time_unit(const Graph& g, int i, int j);
double commute_time(const Graph& g, const NodeWeights& w, int i, int j);
double stationary_hitting(const Graph& g, const NodeWeights& w, int j);
double cosine_similarity(const Graph& g, const NodeWeights& w, int i, int j);

/// Potentials do not depend on node weights; the unit-weight overload fills
/// the weighted summaries with w = e.
DirichletSolution dirichlet_solve(const Graph& g, int i, int j);
DirichletSolution dirichlet_solve(const Graph& g, const NodeWeights& w, int i, int j);

/// Mean hitting time recovered from the Dirichlet solution as q / alpha.
double hitting_via_dirichlet(const Graph& g, const NodeWeights& w, int i, int j);

double effective_resistance(const Graph& g, int i, int j);

/// Evolves potentials under dv/dt = -W^{-1} L v by full spectral expansion
/// in the generalized eigenmodes. Small graphs only (dense decomposition).
Eigen::VectorXd relax_potentials(const Graph& g, const NodeWeights& w,
                                 const Eigen::Ref<const Eigen::VectorXd>& v0, double t,
                                 int cap = 2000);

/// Full mean-hitting-time matrix H with H(i, j) the time to reach j from i.
/// Gated to small n (n^2 memory, n solves).
Eigen::MatrixXd hitting_matrix(const Graph& g, const NodeWeights& w, int cap = 2000);

}  // namespace wse
