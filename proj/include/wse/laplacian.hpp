#pragma once

#include "wse/graph.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <optional>

namespace wse {

/// Symmetric positive semi-definite graph operator, applied matrix-free.
///
/// regular:  v -> (D - A) v
/// weighted: v -> W^{-1/2} (D - A) W^{-1/2} v
///
/// The caller keeps the graph alive for the lifetime of the operator.
class LaplacianOperator {
public:
    enum class Kind { regular, weighted };

    LaplacianOperator(const Graph& g, Kind kind,
                      std::optional<NodeWeights> weights = std::nullopt);

    int size() const { return graph_->node_count(); }
    Kind kind() const { return kind_; }
    const Graph& graph() const { return *graph_; }
    const NodeWeights& weights() const;

    void apply(const Eigen::Ref<const Eigen::VectorXd>& in, Eigen::VectorXd& out) const;
    Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& in) const;

    /// Unit-norm vector spanning the kernel for a connected graph:
    /// e/sqrt(n) (regular) or sqrt(pi) (weighted).
    Eigen::VectorXd kernel_vector() const;

    /// Euclidean norm of the operator's diagonal, a natural scale for
    /// near-zero tests.
    double diagonal_norm() const;

    /// The operator as an explicit sparse matrix.
    Eigen::SparseMatrix<double> sparse() const;

    /// The operator as a dense matrix; refuses n > cap.
    Eigen::MatrixXd dense(int cap = kDenseCap) const;

    static constexpr int kDenseCap = 2000;

private:
    const Graph* graph_;
    Kind kind_;
    std::optional<NodeWeights> weights_;
    Eigen::VectorXd inv_sqrt_w_;  // weighted kind only
};

LaplacianOperator build_laplacian(const Graph& g, LaplacianOperator::Kind kind,
                                  std::optional<NodeWeights> weights = std::nullopt);

/// Moore-Penrose pseudo-inverse via a full dense eigendecomposition.
/// Eigenvalues at or below max(cutoff, n * eps * lambda_max) are treated as
/// zero. Guarded by the dense size cap.
Eigen::MatrixXd pseudo_inverse(const LaplacianOperator& op, double cutoff = 0.0,
                               int cap = LaplacianOperator::kDenseCap);

}  // namespace wse
