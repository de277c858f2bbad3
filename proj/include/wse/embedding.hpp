#pragma once

#include "wse/graph.hpp"
#include "wse/spectrum.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace wse {

enum class EmbeddingMode { regular, shifted, weighted };

std::string to_string(EmbeddingMode mode);
EmbeddingMode embedding_mode_from_string(const std::string& name);

/// Spectral coordinates of a connected graph: one row per node, one column
/// per informative spectral dimension (the trivial eigenvalue is dropped).
struct Embedding {
    EmbeddingMode mode = EmbeddingMode::regular;
    std::vector<std::string> labels;
    Eigen::MatrixXd coords;       // n x k
    Eigen::VectorXd eigenvalues;  // the k + 1 smallest, leading zero included
    Eigen::VectorXd weights;      // node weights used; empty for regular mode
    double tol = 0.0;
    std::uint64_t seed = 0;

    int node_count() const { return static_cast<int>(coords.rows()); }
    int dimension() const { return static_cast<int>(coords.cols()); }
};

/// Row i is (u_2[i]/sqrt(lambda_2), ..., u_{k+1}[i]/sqrt(lambda_{k+1})).
/// Column sums are zero: the centroid of the embedded nodes is the origin.
Embedding regular_embedding(const Graph& g, int k, double tol, std::uint64_t seed,
                            const EigensolveOptions& options = {});

/// Same construction on the weighted Laplacian, rows further scaled by
/// 1/sqrt(w_i). The weighted centroid sum_i w_i y_i is zero.
Embedding weighted_embedding(const Graph& g, const NodeWeights& w, int k, double tol,
                             std::uint64_t seed, const EigensolveOptions& options = {});

/// Recenters a regular embedding at its weighted center of mass
/// xbar = sum_i pi_i x_i. Throws on a non-regular input.
Embedding shifted_embedding(const Embedding& x, const NodeWeights& w);

/// Convenience dispatcher used by the CLI: regular ignores w for the
/// coordinates, shifted centers the regular embedding with w, weighted uses
/// the weighted Laplacian.
Embedding embed(const Graph& g, const NodeWeights& w, int k, EmbeddingMode mode,
                double tol, std::uint64_t seed, const EigensolveOptions& options = {});

/// The weighted mean of the rows, sum_i pi_i coords[i].
Eigen::RowVectorXd weighted_mean_row(const Eigen::MatrixXd& coords, const NodeWeights& w);

/// TSV with a header row, then per node: label and the coordinates at 17
/// significant digits.
void write_embedding_tsv(const Embedding& embedding, std::ostream& out);
void write_embedding_tsv_file(const Embedding& embedding, const std::string& path);

/// JSON object {mode, k, tol, seed, eigenvalues} describing the run.
std::string embedding_sidecar_json(const Embedding& embedding);

/// Label + coordinate matrix parsed back from the TSV form.
struct EmbeddingTable {
    std::vector<std::string> labels;
    Eigen::MatrixXd coords;
};

EmbeddingTable read_embedding_tsv(std::istream& in);
EmbeddingTable read_embedding_tsv_file(const std::string& path);

}  // namespace wse
