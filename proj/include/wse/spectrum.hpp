#pragma once

#include "wse/errors.hpp"
#include "wse/laplacian.hpp"

#include <Eigen/Core>

#include <cstdint>

namespace wse {

/// The bottom of a Laplacian spectrum: eigenvalues in ascending order with
/// orthonormal eigenvectors as columns. Signs follow a fixed convention (the
/// first component of magnitude above 1e-8 is positive) so repeated solves
/// are comparable.
struct Spectrum {
    LaplacianOperator::Kind kind;
    Eigen::VectorXd eigenvalues;  // ascending
    Eigen::MatrixXd vectors;      // n x k, column i pairs with eigenvalues[i]

    int count() const { return static_cast<int>(eigenvalues.size()); }
};

struct EigensolveOptions {
    /// Problems with n at or below this use a full dense eigendecomposition;
    /// larger ones use Lanczos with full reorthogonalization.
    int dense_cutoff = LaplacianOperator::kDenseCap;
    /// Hard cap on the Lanczos basis size; 0 picks min(n - 1, 50 * k).
    int max_basis = 0;
};

/// Computes the k smallest eigenpairs of the operator. Deterministic for a
/// fixed seed. Throws EigensolveError when the iterative path cannot reach
/// the requested residual tolerance within its basis cap.
Spectrum eigensolve(const LaplacianOperator& op, int k, double tol, std::uint64_t seed,
                    const EigensolveOptions& options = {});

}  // namespace wse
