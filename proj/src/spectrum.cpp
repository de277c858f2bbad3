#include "wse/spectrum.hpp"

#include "wse/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace wse {

namespace {

constexpr double kSignThreshold = 1e-8;

// First component of magnitude above the threshold is made positive.
void fix_signs(Eigen::MatrixXd& vectors) {
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
        for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
            double value = vectors(r, c);
            if (std::abs(value) > kSignThreshold) {
                if (value < 0.0) vectors.col(c) = -vectors.col(c);
                break;
            }
        }
    }
}

Spectrum dense_eigensolve(const LaplacianOperator& op, int k) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op.dense(op.size()));
    if (solver.info() != Eigen::Success)
        throw NumericalError("dense eigendecomposition failed");
    Spectrum result;
    result.kind = op.kind();
    result.eigenvalues = solver.eigenvalues().head(k);
    result.vectors = solver.eigenvectors().leftCols(k);
    fix_signs(result.vectors);
    return result;
}

Eigen::VectorXd random_direction(std::mt19937_64& gen, int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = 2.0 * uniform01(gen) - 1.0;
    return v;
}

// Two classical Gram-Schmidt passes against the kernel vector and the whole
// basis ("twice is enough").
void reorthogonalize(Eigen::VectorXd& w, const Eigen::VectorXd& kernel,
                     const std::vector<Eigen::VectorXd>& basis) {
    for (int pass = 0; pass < 2; ++pass) {
        w -= kernel.dot(w) * kernel;
        for (const auto& v : basis) w -= v.dot(w) * v;
    }
}

Spectrum lanczos_eigensolve(const LaplacianOperator& op, int k, double tol,
                            std::uint64_t seed, const EigensolveOptions& options) {
    const int n = op.size();
    const Eigen::VectorXd kernel = op.kernel_vector();

    Spectrum result;
    result.kind = op.kind();
    if (k == 1) {
        result.eigenvalues = Eigen::VectorXd::Zero(1);
        result.vectors = kernel;
        fix_signs(result.vectors);
        return result;
    }

    const int want = k - 1;          // pairs beyond the analytic kernel pair
    const int deflated_dim = n - 1;  // dimension orthogonal to the kernel
    const int cap = options.max_basis > 0
                        ? std::min(options.max_basis, deflated_dim)
                        : std::min(deflated_dim, std::max(50 * k, 300));
    const double breakdown = 1e-13 * std::max(1.0, op.diagonal_norm());

    auto gen = substream(seed, 0, /*tag=*/3);
    auto fresh_direction = [&](const std::vector<Eigen::VectorXd>& basis) {
        for (int attempt = 0; attempt < 64; ++attempt) {
            Eigen::VectorXd v = random_direction(gen, n);
            reorthogonalize(v, kernel, basis);
            double norm = v.norm();
            if (norm > 1e-8) return Eigen::VectorXd(v / norm);
        }
        throw NumericalError("could not generate a start vector orthogonal to the basis");
    };

    std::vector<Eigen::VectorXd> basis;
    basis.reserve(std::min(cap, 1024));
    std::vector<double> alpha, beta;  // beta[j] links basis[j] and basis[j+1]
    basis.push_back(fresh_direction(basis));

    int next_check = std::min(cap, std::max(2 * want, want + 20));
    std::vector<double> best_residuals(want, std::numeric_limits<double>::infinity());

    while (true) {
        const int m = static_cast<int>(basis.size());
        Eigen::VectorXd w = op.apply(basis[m - 1]);
        if (m > 1) w -= beta[m - 2] * basis[m - 2];
        alpha.push_back(basis[m - 1].dot(w));
        w -= alpha[m - 1] * basis[m - 1];
        reorthogonalize(w, kernel, basis);
        double b = w.norm();

        bool exhausted = m == deflated_dim;
        bool check_now = exhausted || m >= next_check || b <= breakdown;
        if (check_now) {
            Eigen::Map<const Eigen::VectorXd> diag(alpha.data(), m);
            Eigen::VectorXd subdiag(std::max(m - 1, 0));
            for (int i = 0; i + 1 < m; ++i) subdiag[i] = beta[i];
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
            tri.computeFromTridiagonal(diag, subdiag, Eigen::ComputeEigenvectors);
            if (tri.info() != Eigen::Success)
                throw NumericalError("tridiagonal eigendecomposition failed");

            if (m >= want) {
                bool maybe_converged = true;
                for (int i = 0; i < want; ++i) {
                    double estimate = std::abs(b * tri.eigenvectors()(m - 1, i));
                    best_residuals[i] = std::min(best_residuals[i], estimate);
                    if (estimate > tol * std::max(1.0, tri.eigenvalues()[i]))
                        maybe_converged = false;
                }
                if (maybe_converged || exhausted) {
                    // Assemble Ritz vectors and verify true residuals.
                    Eigen::MatrixXd ritz(n, want);
                    for (int i = 0; i < want; ++i) {
                        ritz.col(i).setZero();
                        for (int j = 0; j < m; ++j)
                            ritz.col(i) += tri.eigenvectors()(j, i) * basis[j];
                    }
                    bool converged = true;
                    for (int i = 0; i < want; ++i) {
                        double theta = tri.eigenvalues()[i];
                        double residual = (op.apply(ritz.col(i)) - theta * ritz.col(i)).norm();
                        best_residuals[i] = std::min(best_residuals[i], residual);
                        if (residual > tol * std::max(1.0, theta)) converged = false;
                    }
                    if (converged) {
                        result.eigenvalues.resize(k);
                        result.vectors.resize(n, k);
                        result.eigenvalues[0] = 0.0;
                        result.vectors.col(0) = kernel;
                        result.eigenvalues.tail(want) = tri.eigenvalues().head(want);
                        result.vectors.rightCols(want) = ritz;
                        fix_signs(result.vectors);
                        return result;
                    }
                    if (exhausted)
                        throw EigensolveError(
                            "Lanczos exhausted the full basis without meeting tol = " +
                                std::to_string(tol),
                            best_residuals);
                }
            }
            if (m >= cap)
                throw EigensolveError("Lanczos basis cap " + std::to_string(cap) +
                                          " reached without convergence",
                                      best_residuals);
            next_check = std::min(cap, std::max(m + 1, (m * 3) / 2));
        }

        if (b <= breakdown) {
            // Invariant subspace found; continue in a fresh random direction.
            beta.push_back(0.0);
            basis.push_back(fresh_direction(basis));
        } else {
            beta.push_back(b);
            basis.push_back(w / b);
        }
    }
}

}  // namespace

Spectrum eigensolve(const LaplacianOperator& op, int k, double tol, std::uint64_t seed,
                    const EigensolveOptions& options) {
    const int n = op.size();
    if (k < 1 || k > n)
        throw std::invalid_argument("eigensolve: k = " + std::to_string(k) +
                                    " out of range [1, " + std::to_string(n) + "]");
    if (!(tol > 0.0)) throw std::invalid_argument("eigensolve: tol must be positive");
    if (n <= options.dense_cutoff) return dense_eigensolve(op, k);
    return lanczos_eigensolve(op, k, tol, seed, options);
}

}  // namespace wse
