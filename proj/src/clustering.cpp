#include "wse/clustering.hpp"

#include "wse/parallel.hpp"
#include "wse/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace wse {

namespace {

constexpr std::uint64_t kRestartTag = 11;

int count_distinct_rows(const Eigen::MatrixXd& points) {
    const Eigen::Index n = points.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    auto row_less = [&](Eigen::Index a, Eigen::Index b) {
        for (Eigen::Index c = 0; c < points.cols(); ++c) {
            if (points(a, c) < points(b, c)) return true;
            if (points(a, c) > points(b, c)) return false;
        }
        return false;
    };
    std::sort(order.begin(), order.end(), row_less);
    int distinct = n > 0 ? 1 : 0;
    for (std::size_t i = 1; i < order.size(); ++i)
        if (row_less(order[i - 1], order[i])) ++distinct;
    return distinct;
}

struct RestartResult {
    double inertia = std::numeric_limits<double>::infinity();
    std::vector<int> assignment;
    Eigen::MatrixXd centers;
    std::vector<double> history;
};

// Nearest center of each point via the expansion |p - c|^2 =
// |p|^2 - 2 p.c + |c|^2; |p|^2 is constant per point and dropped from the
// argmin. Ties go to the lowest cluster id.
void assign_points(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centers,
                   std::vector<int>& assignment) {
    const Eigen::Index n = points.rows();
    const Eigen::Index k = centers.rows();
    Eigen::MatrixXd cross = points * centers.transpose();  // n x k
    Eigen::VectorXd center_norms = centers.rowwise().squaredNorm();
    for (Eigen::Index i = 0; i < n; ++i) {
        int best = 0;
        double best_score = center_norms[0] - 2.0 * cross(i, 0);
        for (Eigen::Index c = 1; c < k; ++c) {
            double score = center_norms[c] - 2.0 * cross(i, c);
            if (score < best_score) {
                best_score = score;
                best = static_cast<int>(c);
            }
        }
        assignment[static_cast<std::size_t>(i)] = best;
    }
}

double exact_inertia(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centers,
                     const std::vector<int>& assignment) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < points.rows(); ++i)
        total += (points.row(i) - centers.row(assignment[static_cast<std::size_t>(i)]))
                     .squaredNorm();
    return total;
}

Eigen::MatrixXd seed_centers(const Eigen::MatrixXd& points, int k, std::mt19937_64& gen) {
    const Eigen::Index n = points.rows();
    Eigen::MatrixXd centers(k, points.cols());
    centers.row(0) = points.row(static_cast<Eigen::Index>(uniform_index(gen, n)));
    Eigen::VectorXd dist2 =
        (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (int c = 1; c < k; ++c) {
        double total = dist2.sum();
        Eigen::Index chosen;
        if (total > 0.0) {
            double target = uniform01(gen) * total;
            double running = 0.0;
            chosen = n - 1;
            for (Eigen::Index i = 0; i < n; ++i) {
                running += dist2[i];
                if (running > target) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = static_cast<Eigen::Index>(uniform_index(gen, n));
        }
        centers.row(c) = points.row(chosen);
        dist2 = dist2.cwiseMin(
            (points.rowwise() - centers.row(c)).rowwise().squaredNorm());
    }
    return centers;
}

RestartResult run_restart(const Eigen::MatrixXd& points, int k, int max_iters, double tol,
                          std::uint64_t seed, std::uint64_t restart) {
    auto gen = substream(seed, restart, kRestartTag);
    const Eigen::Index n = points.rows();

    RestartResult result;
    result.centers = seed_centers(points, k, gen);
    result.assignment.assign(static_cast<std::size_t>(n), 0);

    for (int iter = 0; iter < max_iters; ++iter) {
        assign_points(points, result.centers, result.assignment);
        result.history.push_back(exact_inertia(points, result.centers, result.assignment));

        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
        std::vector<int> counts(static_cast<std::size_t>(k), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            int c = result.assignment[static_cast<std::size_t>(i)];
            sums.row(c) += points.row(i);
            ++counts[static_cast<std::size_t>(c)];
        }

        bool repaired = false;
        Eigen::MatrixXd updated(k, points.cols());
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0)
                updated.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];
            else
                updated.row(c) = result.centers.row(c);  // repaired below
        }
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) continue;
            // Reseed from the point farthest from its assigned center.
            Eigen::Index farthest = 0;
            double farthest_dist = -1.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                int a = result.assignment[static_cast<std::size_t>(i)];
                double dist = (points.row(i) - updated.row(a)).squaredNorm();
                if (dist > farthest_dist) {
                    farthest_dist = dist;
                    farthest = i;
                }
            }
            updated.row(c) = points.row(farthest);
            result.assignment[static_cast<std::size_t>(farthest)] = c;
            repaired = true;
        }

        double movement = (updated - result.centers).rowwise().norm().maxCoeff();
        result.centers = std::move(updated);
        if (!repaired && movement < tol) break;
    }

    // One last assignment so the reported labels are nearest w.r.t. the
    // final centers.
    assign_points(points, result.centers, result.assignment);
    result.inertia = exact_inertia(points, result.centers, result.assignment);
    result.history.push_back(result.inertia);
    return result;
}

}  // namespace

Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& points) {
    Eigen::MatrixXd normalized(points.rows(), points.cols());
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        double norm = points.row(i).norm();
        if (norm == 0.0)
            throw std::invalid_argument("row " + std::to_string(i) +
                                        " has zero norm and no direction");
        normalized.row(i) = points.row(i) / norm;
    }
    return normalized;
}

Eigen::MatrixXd normalize_rows(const Embedding& embedding) {
    for (Eigen::Index i = 0; i < embedding.coords.rows(); ++i)
        if (embedding.coords.row(i).norm() == 0.0)
            throw std::invalid_argument("node '" +
                                        embedding.labels[static_cast<std::size_t>(i)] +
                                        "' embeds to the zero vector and cannot be normalized");
    return normalize_rows(embedding.coords);
}

ClusterModel kmeans_pp(const Eigen::MatrixXd& points, int k, int restarts, int max_iters,
                       double tol, std::uint64_t seed, int threads) {
    if (points.rows() == 0) throw std::invalid_argument("no points to cluster");
    if (k < 1) throw std::invalid_argument("cluster count must be at least 1");
    if (restarts < 1) throw std::invalid_argument("restarts must be at least 1");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
    if (!(tol >= 0.0)) throw std::invalid_argument("tol must be non-negative");
    int distinct = count_distinct_rows(points);
    if (k > distinct)
        throw std::invalid_argument("k = " + std::to_string(k) +
                                    " exceeds the number of distinct points (" +
                                    std::to_string(distinct) + ")");

    std::vector<RestartResult> results(static_cast<std::size_t>(restarts));
    parallel_for(static_cast<std::size_t>(restarts), threads, [&](std::size_t r) {
        results[r] = run_restart(points, k, max_iters, tol, seed, r);
    });

    std::size_t best = 0;
    for (std::size_t r = 1; r < results.size(); ++r)
        if (results[r].inertia < results[best].inertia) best = r;

    ClusterModel model;
    model.k = k;
    model.assignment = std::move(results[best].assignment);
    model.centers = std::move(results[best].centers);
    model.inertia = results[best].inertia;
    model.restarts_used = restarts;
    model.seed = seed;
    model.inertia_history = std::move(results[best].history);
    return model;
}

ClusterSummary summarize_clusters(const ClusterModel& model, const Eigen::MatrixXd& points,
                                  const NodeWeights& internal_weight,
                                  const NodeWeights& mass_weights, double fraction,
                                  int top_m) {
    const Eigen::Index n = points.rows();
    if (static_cast<Eigen::Index>(model.assignment.size()) != n)
        throw std::invalid_argument("assignment size does not match point count");
    if (internal_weight.size() != n || mass_weights.size() != n)
        throw std::invalid_argument("weight vector size does not match point count");
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw std::invalid_argument("fraction must lie in (0, 1]");
    if (top_m < 0) throw std::invalid_argument("top_m must be non-negative");

    std::vector<std::vector<int>> members(static_cast<std::size_t>(model.k));
    for (Eigen::Index i = 0; i < n; ++i)
        members[static_cast<std::size_t>(model.assignment[static_cast<std::size_t>(i)])]
            .push_back(static_cast<int>(i));

    ClusterSummary summary;
    summary.reserve(static_cast<std::size_t>(model.k));
    for (int c = 0; c < model.k; ++c) {
        const auto& nodes = members[static_cast<std::size_t>(c)];
        ClusterInfo info;
        info.cluster_id = c;
        info.size = static_cast<int>(nodes.size());
        if (nodes.empty()) {
            summary.push_back(std::move(info));
            continue;
        }

        Eigen::RowVectorXd center = Eigen::RowVectorXd::Zero(points.cols());
        double mass = 0.0;
        for (int i : nodes) {
            center += mass_weights[i] * points.row(i);
            mass += mass_weights[i];
        }
        center /= mass;
        info.weighted_size = mass;

        std::vector<int> closest = nodes;
        std::vector<double> dist(static_cast<std::size_t>(n), 0.0);
        for (int i : nodes) dist[static_cast<std::size_t>(i)] = (points.row(i) - center).norm();
        std::sort(closest.begin(), closest.end(), [&](int a, int b) {
            double da = dist[static_cast<std::size_t>(a)];
            double db = dist[static_cast<std::size_t>(b)];
            if (da != db) return da < db;
            return a < b;
        });
        std::size_t keep = static_cast<std::size_t>(
            std::ceil(fraction * static_cast<double>(nodes.size())));
        keep = std::min(keep, closest.size());
        closest.resize(keep);

        std::sort(closest.begin(), closest.end(), [&](int a, int b) {
            if (internal_weight[a] != internal_weight[b])
                return internal_weight[a] > internal_weight[b];
            return a < b;
        });
        if (static_cast<std::size_t>(top_m) < closest.size()) closest.resize(top_m);
        info.representatives = std::move(closest);
        summary.push_back(std::move(info));
    }
    return summary;
}

void write_assignments_tsv(const ClusterModel& model, const std::vector<std::string>& labels,
                           std::ostream& out) {
    if (labels.size() != model.assignment.size())
        throw std::invalid_argument("label count does not match assignment size");
    for (std::size_t i = 0; i < labels.size(); ++i)
        out << labels[i] << '\t' << model.assignment[i] << "\n";
    if (!out) throw std::runtime_error("failed while writing assignments TSV");
}

void write_assignments_tsv_file(const ClusterModel& model,
                                const std::vector<std::string>& labels,
                                const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_assignments_tsv(model, labels, out);
}

std::string cluster_summary_json(const ClusterSummary& summary,
                                 const std::vector<std::string>& labels) {
    nlohmann::ordered_json array = nlohmann::ordered_json::array();
    for (const auto& info : summary) {
        nlohmann::ordered_json entry;
        entry["cluster_id"] = info.cluster_id;
        entry["size"] = info.size;
        auto names = nlohmann::ordered_json::array();
        for (int i : info.representatives) names.push_back(labels.at(static_cast<std::size_t>(i)));
        entry["representatives"] = std::move(names);
        array.push_back(std::move(entry));
    }
    return array.dump(2);
}

}  // namespace wse
