#include "wse/laplacian.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace wse {

LaplacianOperator::LaplacianOperator(const Graph& g, Kind kind,
                                     std::optional<NodeWeights> weights)
    : graph_(&g), kind_(kind), weights_(std::move(weights)) {
    if (kind_ == Kind::weighted) {
        if (!weights_)
            throw std::invalid_argument("weighted Laplacian requires node weights");
        if (weights_->size() != g.node_count())
            throw std::invalid_argument("node weight count " + std::to_string(weights_->size()) +
                                        " does not match node count " +
                                        std::to_string(g.node_count()));
        inv_sqrt_w_ = weights_->values().cwiseSqrt().cwiseInverse();
    }
}

const NodeWeights& LaplacianOperator::weights() const {
    if (!weights_) throw std::logic_error("regular Laplacian has no node weights");
    return *weights_;
}

void LaplacianOperator::apply(const Eigen::Ref<const Eigen::VectorXd>& in,
                              Eigen::VectorXd& out) const {
    const auto& adj = graph_->adjacency();
    const auto& deg = graph_->degrees();
    if (kind_ == Kind::regular) {
        out.noalias() = deg.cwiseProduct(in) - adj * in;
    } else {
        Eigen::VectorXd scaled = inv_sqrt_w_.cwiseProduct(in);
        out.noalias() = deg.cwiseProduct(scaled) - adj * scaled;
        out.array() *= inv_sqrt_w_.array();
    }
}

Eigen::VectorXd LaplacianOperator::apply(const Eigen::Ref<const Eigen::VectorXd>& in) const {
    Eigen::VectorXd out(in.size());
    apply(in, out);
    return out;
}

Eigen::VectorXd LaplacianOperator::kernel_vector() const {
    int n = size();
    if (kind_ == Kind::regular)
        return Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    return weights_->stationary().cwiseSqrt();
}

double LaplacianOperator::diagonal_norm() const {
    const auto& deg = graph_->degrees();
    if (kind_ == Kind::regular) return deg.norm();
    return deg.cwiseProduct(inv_sqrt_w_.cwiseAbs2()).norm();
}

Eigen::SparseMatrix<double> LaplacianOperator::sparse() const {
    int n = size();
    const auto& adj = graph_->adjacency();
    const auto& deg = graph_->degrees();
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(adj.nonZeros() + n);
    for (int u = 0; u < n; ++u) {
        double du = kind_ == Kind::regular ? deg[u]
                                           : deg[u] * inv_sqrt_w_[u] * inv_sqrt_w_[u];
        triplets.emplace_back(u, u, du);
        for (Eigen::SparseMatrix<double>::InnerIterator it(adj, u); it; ++it) {
            int v = static_cast<int>(it.row());
            double value = kind_ == Kind::regular ? -it.value()
                                                  : -it.value() * inv_sqrt_w_[u] * inv_sqrt_w_[v];
            triplets.emplace_back(static_cast<int>(it.row()), u, value);
        }
    }
    Eigen::SparseMatrix<double> result(n, n);
    result.setFromTriplets(triplets.begin(), triplets.end());
    result.makeCompressed();
    return result;
}

Eigen::MatrixXd LaplacianOperator::dense(int cap) const {
    if (size() > cap)
        throw std::invalid_argument("dense Laplacian requested for n = " +
                                    std::to_string(size()) + " > cap " + std::to_string(cap));
    return Eigen::MatrixXd(sparse());
}

LaplacianOperator build_laplacian(const Graph& g, LaplacianOperator::Kind kind,
                                  std::optional<NodeWeights> weights) {
    return LaplacianOperator(g, kind, std::move(weights));
}

Eigen::MatrixXd pseudo_inverse(const LaplacianOperator& op, double cutoff, int cap) {
    int n = op.size();
    Eigen::MatrixXd dense = op.dense(cap);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("dense eigendecomposition failed in pseudo_inverse");
    const auto& values = solver.eigenvalues();
    const auto& vectors = solver.eigenvectors();
    double lambda_max = values[n - 1];
    double threshold = std::max(cutoff, n * std::numeric_limits<double>::epsilon() * lambda_max);
    Eigen::MatrixXd result = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        if (values[i] <= threshold) continue;
        result.noalias() += vectors.col(i) * vectors.col(i).transpose() / values[i];
    }
    return result;
}

}  // namespace wse
