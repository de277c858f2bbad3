#include "wse/embedding.hpp"

#include "wse/laplacian.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace wse {

namespace {

void require_connected(const Graph& g) {
    if (!g.connected())
        throw std::invalid_argument(
            "graph is disconnected; embed its largest connected component instead");
}

void require_dimension(const Graph& g, int k) {
    if (k < 1 || k > g.node_count() - 1)
        throw std::invalid_argument("embedding dimension k = " + std::to_string(k) +
                                    " out of range [1, " +
                                    std::to_string(g.node_count() - 1) + "]");
}

// Divides out the (k+1 smallest) spectrum into coordinates: column j of the
// result is u_{j+1} / sqrt(lambda_{j+1}).
Eigen::MatrixXd coords_from_spectrum(const Spectrum& spectrum) {
    const int k = spectrum.count() - 1;
    Eigen::MatrixXd coords(spectrum.vectors.rows(), k);
    for (int j = 0; j < k; ++j) {
        double lambda = spectrum.eigenvalues[j + 1];
        if (!(lambda > 0.0))
            throw NumericalError("eigenvalue " + std::to_string(j + 2) +
                                 " is not positive on a connected graph");
        coords.col(j) = spectrum.vectors.col(j + 1) / std::sqrt(lambda);
    }
    return coords;
}

}  // namespace

std::string to_string(EmbeddingMode mode) {
    switch (mode) {
        case EmbeddingMode::regular: return "regular";
        case EmbeddingMode::shifted: return "shifted";
        case EmbeddingMode::weighted: return "weighted";
    }
    throw std::invalid_argument("unknown embedding mode");
}

EmbeddingMode embedding_mode_from_string(const std::string& name) {
    if (name == "regular") return EmbeddingMode::regular;
    if (name == "shifted") return EmbeddingMode::shifted;
    if (name == "weighted") return EmbeddingMode::weighted;
    throw std::invalid_argument("unknown embedding mode '" + name +
                                "' (expected regular, shifted, or weighted)");
}

Embedding regular_embedding(const Graph& g, int k, double tol, std::uint64_t seed,
                            const EigensolveOptions& options) {
    require_dimension(g, k);
    require_connected(g);
    LaplacianOperator op(g, LaplacianOperator::Kind::regular);
    Spectrum spectrum = eigensolve(op, k + 1, tol, seed, options);

    Embedding result;
    result.mode = EmbeddingMode::regular;
    result.labels = g.labels();
    result.coords = coords_from_spectrum(spectrum);
    result.eigenvalues = std::move(spectrum.eigenvalues);
    result.tol = tol;
    result.seed = seed;
    return result;
}

Embedding weighted_embedding(const Graph& g, const NodeWeights& w, int k, double tol,
                             std::uint64_t seed, const EigensolveOptions& options) {
    require_dimension(g, k);
    require_connected(g);
    if (w.size() != g.node_count())
        throw std::invalid_argument("weight vector size does not match node count");
    LaplacianOperator op(g, LaplacianOperator::Kind::weighted, w);
    Spectrum spectrum = eigensolve(op, k + 1, tol, seed, options);

    Embedding result;
    result.mode = EmbeddingMode::weighted;
    result.labels = g.labels();
    result.coords = coords_from_spectrum(spectrum);
    Eigen::ArrayXd inv_sqrt_w = w.values().array().sqrt().inverse();
    result.coords.array().colwise() *= inv_sqrt_w;
    result.eigenvalues = std::move(spectrum.eigenvalues);
    result.weights = w.values();
    result.tol = tol;
    result.seed = seed;
    return result;
}

Embedding shifted_embedding(const Embedding& x, const NodeWeights& w) {
    if (x.mode != EmbeddingMode::regular)
        throw std::invalid_argument("shifted embedding expects a regular-mode input, got " +
                                    to_string(x.mode));
    if (w.size() != x.node_count())
        throw std::invalid_argument("weight vector size does not match node count");

    Embedding result = x;
    result.mode = EmbeddingMode::shifted;
    result.coords.rowwise() -= weighted_mean_row(x.coords, w);
    result.weights = w.values();
    return result;
}

Embedding embed(const Graph& g, const NodeWeights& w, int k, EmbeddingMode mode,
                double tol, std::uint64_t seed, const EigensolveOptions& options) {
    switch (mode) {
        case EmbeddingMode::regular:
            return regular_embedding(g, k, tol, seed, options);
        case EmbeddingMode::shifted:
            return shifted_embedding(regular_embedding(g, k, tol, seed, options), w);
        case EmbeddingMode::weighted:
            return weighted_embedding(g, w, k, tol, seed, options);
    }
    throw std::invalid_argument("unknown embedding mode");
}

Eigen::RowVectorXd weighted_mean_row(const Eigen::MatrixXd& coords, const NodeWeights& w) {
    if (w.size() != coords.rows())
        throw std::invalid_argument("weight vector size does not match row count");
    return w.stationary().transpose() * coords;
}

void write_embedding_tsv(const Embedding& embedding, std::ostream& out) {
    out << "node";
    for (int j = 1; j <= embedding.dimension(); ++j) out << "\tc" << j;
    out << "\n";
    out << std::setprecision(17);
    for (int i = 0; i < embedding.node_count(); ++i) {
        out << embedding.labels[i];
        for (int j = 0; j < embedding.dimension(); ++j) out << '\t' << embedding.coords(i, j);
        out << "\n";
    }
    if (!out) throw std::runtime_error("failed while writing embedding TSV");
}

void write_embedding_tsv_file(const Embedding& embedding, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_embedding_tsv(embedding, out);
}

std::string embedding_sidecar_json(const Embedding& embedding) {
    nlohmann::json sidecar;
    sidecar["mode"] = to_string(embedding.mode);
    sidecar["k"] = embedding.dimension();
    sidecar["tol"] = embedding.tol;
    sidecar["seed"] = embedding.seed;
    sidecar["eigenvalues"] = std::vector<double>(
        embedding.eigenvalues.data(), embedding.eigenvalues.data() + embedding.eigenvalues.size());
    return sidecar.dump(2);
}

EmbeddingTable read_embedding_tsv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> rows;

    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream stream(line);
        std::vector<std::string> tokens;
        std::string tok;
        while (stream >> tok) tokens.push_back(tok);
        if (tokens.empty()) continue;
        if (!header_seen) {
            header_seen = true;  // first non-blank line is the header
            continue;
        }
        if (tokens.size() < 2)
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": expected a label and at least one coordinate");
        std::vector<double> row;
        row.reserve(tokens.size() - 1);
        for (std::size_t t = 1; t < tokens.size(); ++t) {
            std::size_t pos = 0;
            double value = 0.0;
            try {
                value = std::stod(tokens[t], &pos);
            } catch (const std::exception&) {
                pos = std::string::npos;
            }
            if (pos != tokens[t].size() || !std::isfinite(value))
                throw std::invalid_argument("line " + std::to_string(line_no) +
                                            ": coordinate '" + tokens[t] +
                                            "' is not a number");
            row.push_back(value);
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": row width differs from the first row");
        labels.push_back(tokens[0]);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("embedding table has no data rows");

    EmbeddingTable table;
    table.labels = std::move(labels);
    table.coords.resize(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            table.coords(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                rows[i][j];
    return table;
}

EmbeddingTable read_embedding_tsv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    return read_embedding_tsv(in);
}

}  // namespace wse
