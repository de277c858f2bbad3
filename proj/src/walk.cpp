#include "wse/walk.hpp"

#include "wse/errors.hpp"
#include "wse/laplacian.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace wse {

namespace {

void require_connected(const Graph& g) {
    if (!g.connected())
        throw std::invalid_argument(
            "graph is disconnected; walk statistics are undefined across components");
}

// e_j - pi, the mean-zero right-hand side behind hitting-time solves.
Eigen::VectorXd unit_minus_stationary(const NodeWeights& w, int j) {
    Eigen::VectorXd b = -w.stationary();
    b[j] += 1.0;
    return b;
}

}  // namespace

WalkAnalyzer::WalkAnalyzer(const Graph& g, NodeWeights w)
    : graph_(&g), weights_(std::move(w)) {
    if (weights_.size() != g.node_count())
        throw std::invalid_argument("weight vector size does not match node count");
    require_connected(g);

    // Laplacian with the last row and column removed; grounding one node
    // makes the system positive definite on connected graphs.
    const int n = g.node_count();
    const int m = n - 1;
    const auto& adj = g.adjacency();
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(adj.nonZeros()) + static_cast<std::size_t>(n));
    for (int u = 0; u < m; ++u) triplets.emplace_back(u, u, g.degrees()[u]);
    for (int u = 0; u < n; ++u) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(adj, u); it; ++it) {
            int r = static_cast<int>(it.row());
            if (r < m && u < m) triplets.emplace_back(r, u, -it.value());
        }
    }
    Eigen::SparseMatrix<double> grounded(m, m);
    grounded.setFromTriplets(triplets.begin(), triplets.end());
    solver_.compute(grounded);
    if (solver_.info() != Eigen::Success)
        throw NumericalError("Laplacian factorization failed");
}

void WalkAnalyzer::check_node(int i) const {
    if (i < 0 || i >= graph_->node_count())
        throw std::invalid_argument("node index " + std::to_string(i) +
                                    " out of range [0, " +
                                    std::to_string(graph_->node_count()) + ")");
}

Eigen::VectorXd WalkAnalyzer::solve_grounded(const Eigen::Ref<const Eigen::VectorXd>& b) const {
    const int n = graph_->node_count();
    if (b.size() != n) throw std::invalid_argument("right-hand side has wrong size");
    if (std::abs(b.sum()) > 1e-8 * (1.0 + b.cwiseAbs().sum()))
        throw std::invalid_argument("right-hand side must sum to zero");
    Eigen::VectorXd z(n);
    z.head(n - 1) = solver_.solve(b.head(n - 1));
    if (solver_.info() != Eigen::Success)
        throw NumericalError("Laplacian solve failed");
    z[n - 1] = 0.0;
    return z;
}

double WalkAnalyzer::centered_entry(int i, const Eigen::VectorXd& z) const {
    return z[i] - weights_.stationary().dot(z);
}

double WalkAnalyzer::hitting(int i, int j) const {
    check_node(i);
    check_node(j);
    if (i == j) return 0.0;
    Eigen::VectorXd z = solve_grounded(unit_minus_stationary(weights_, j));
    return weights_.total() * (z[j] - z[i]);
}

Eigen::VectorXd WalkAnalyzer::hitting_to(int j) const {
    check_node(j);
    Eigen::VectorXd z = solve_grounded(unit_minus_stationary(weights_, j));
    return weights_.total() * (Eigen::VectorXd::Constant(z.size(), z[j]) - z);
}

double WalkAnalyzer::commute(int i, int j) const {
    check_node(i);
    check_node(j);
    if (i == j) return 0.0;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(graph_->node_count());
    b[i] = 1.0;
    b[j] = -1.0;
    Eigen::VectorXd u = solve_grounded(b);
    return weights_.total() * (u[i] - u[j]);
}

double WalkAnalyzer::stationary_hitting(int j) const {
    check_node(j);
    Eigen::VectorXd z = solve_grounded(unit_minus_stationary(weights_, j));
    return weights_.total() * centered_entry(j, z);
}

double WalkAnalyzer::similarity(int i, int j) const {
    check_node(i);
    check_node(j);
    if (i == j) return 1.0;
    Eigen::VectorXd zi = solve_grounded(unit_minus_stationary(weights_, i));
    Eigen::VectorXd zj = solve_grounded(unit_minus_stationary(weights_, j));
    double gii = centered_entry(i, zi);
    double gjj = centered_entry(j, zj);
    if (gii <= 0.0 || gjj <= 0.0)
        throw std::runtime_error("node '" +
                                 graph_->label(gii <= 0.0 ? i : j) +
                                 "' coincides with the center of mass; similarity undefined");
    double gij = centered_entry(i, zj);
    return std::clamp(gij / std::sqrt(gii * gjj), -1.0, 1.0);
}

WalkStatistics WalkAnalyzer::pair(int i, int j) const {
    check_node(i);
    check_node(j);
    WalkStatistics stats;
    if (i == j) {
        stats.similarity = 1.0;
        return stats;
    }
    Eigen::VectorXd zi = solve_grounded(unit_minus_stationary(weights_, i));
    Eigen::VectorXd zj = solve_grounded(unit_minus_stationary(weights_, j));
    stats.hitting_ij = weights_.total() * (zj[j] - zj[i]);
    stats.hitting_ji = weights_.total() * (zi[i] - zi[j]);
    stats.commute = stats.hitting_ij + stats.hitting_ji;
    double gii = centered_entry(i, zi);
    double gjj = centered_entry(j, zj);
    if (gii <= 0.0 || gjj <= 0.0)
        throw std::runtime_error("node '" +
                                 graph_->label(gii <= 0.0 ? i : j) +
                                 "' coincides with the center of mass; similarity undefined");
    stats.similarity = std::clamp(centered_entry(i, zj) / std::sqrt(gii * gjj), -1.0, 1.0);
    return stats;
}

DirichletSolution WalkAnalyzer::dirichlet(int i, int j) const {
    check_node(i);
    check_node(j);
    if (i == j) throw std::invalid_argument("source and sink must differ");
    const int n = graph_->node_count();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b[i] = 1.0;
    b[j] = -1.0;
    Eigen::VectorXd u = solve_grounded(b);
    double resistance = u[i] - u[j];
    if (!(resistance > 0.0))
        throw NumericalError("non-positive effective resistance between nodes " +
                             std::to_string(i) + " and " + std::to_string(j));

    DirichletSolution solution;
    solution.source = i;
    solution.sink = j;
    solution.alpha = 1.0 / resistance;
    solution.potentials = (u.array() - u[j]).matrix() * solution.alpha;
    solution.potentials[i] = 1.0;
    solution.potentials[j] = 0.0;
    solution.weighted_mean = weights_.stationary().dot(solution.potentials);
    solution.charge = weights_.total() * solution.weighted_mean;
    return solution;
}

double WalkAnalyzer::resistance(int i, int j) const {
    check_node(i);
    check_node(j);
    if (i == j) return 0.0;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(graph_->node_count());
    b[i] = 1.0;
    b[j] = -1.0;
    Eigen::VectorXd u = solve_grounded(b);
    return u[i] - u[j];
}

double hitting_time(const Graph& g, const NodeWeights& w, int i, int j) {
    return WalkAnalyzer(g, w).hitting(i, j);
}

double hitting_time_unit(const Graph& g, int i, int j) {
    return WalkAnalyzer(g, NodeWeights::unit(g.node_count())).hitting(i, j);
}

double commute_time(const Graph& g, const NodeWeights& w, int i, int j) {
    return WalkAnalyzer(g, w).commute(i, j);
}

double stationary_hitting(const Graph& g, const NodeWeights& w, int j) {
    return WalkAnalyzer(g, w).stationary_hitting(j);
}

double cosine_similarity(const Graph& g, const NodeWeights& w, int i, int j) {
    return WalkAnalyzer(g, w).similarity(i, j);
}

DirichletSolution dirichlet_solve(const Graph& g, int i, int j) {
    return WalkAnalyzer(g, NodeWeights::unit(g.node_count())).dirichlet(i, j);
}

DirichletSolution dirichlet_solve(const Graph& g, const NodeWeights& w, int i, int j) {
    return WalkAnalyzer(g, w).dirichlet(i, j);
}

double hitting_via_dirichlet(const Graph& g, const NodeWeights& w, int i, int j) {
    DirichletSolution solution = dirichlet_solve(g, w, i, j);
    return solution.charge / solution.alpha;
}

double effective_resistance(const Graph& g, int i, int j) {
    if (i == j) throw std::invalid_argument("effective resistance needs two distinct nodes");
    return WalkAnalyzer(g, NodeWeights::unit(g.node_count())).resistance(i, j);
}

Eigen::VectorXd relax_potentials(const Graph& g, const NodeWeights& w,
                                 const Eigen::Ref<const Eigen::VectorXd>& v0, double t,
                                 int cap) {
    if (t < 0.0) throw std::invalid_argument("relaxation time must be non-negative");
    if (v0.size() != g.node_count())
        throw std::invalid_argument("initial potentials have wrong size");
    LaplacianOperator op(g, LaplacianOperator::Kind::weighted, w);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op.dense(cap));
    if (solver.info() != Eigen::Success)
        throw NumericalError("dense eigendecomposition failed");

    // v(t) = W^{-1/2} U exp(-Lambda t) U^T W^{1/2} v0
    Eigen::ArrayXd sqrt_w = w.values().array().sqrt();
    Eigen::VectorXd modes = solver.eigenvectors().transpose() * (v0.array() * sqrt_w).matrix();
    for (Eigen::Index k = 0; k < modes.size(); ++k)
        modes[k] *= std::exp(-std::max(solver.eigenvalues()[k], 0.0) * t);
    return ((solver.eigenvectors() * modes).array() / sqrt_w).matrix();
}

Eigen::MatrixXd hitting_matrix(const Graph& g, const NodeWeights& w, int cap) {
    const int n = g.node_count();
    if (n > cap)
        throw std::invalid_argument("hitting matrix gated to n <= " + std::to_string(cap) +
                                    ", got n = " + std::to_string(n));
    WalkAnalyzer analyzer(g, w);
    Eigen::MatrixXd hitting(n, n);
    for (int j = 0; j < n; ++j) hitting.col(j) = analyzer.hitting_to(j);
    return hitting;
}

}  // namespace wse
