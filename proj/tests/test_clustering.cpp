#include "wse/clustering.hpp"
#include "wse/embedding.hpp"
#include "wse/graph.hpp"

#include "oracles.hpp"

#include <doctest.h>
#include <json.hpp>

#include <Eigen/Dense>

#include <random>
#include <sstream>

using wse::ClusterModel;
using wse::NodeWeights;

namespace {

Eigen::MatrixXd from_rows(const std::vector<std::vector<double>>& rows) {
    Eigen::MatrixXd m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    return m;
}

/// Two well-separated Gaussian-ish blobs, `per` points each, in 2D.
Eigen::MatrixXd two_blobs(int per, std::mt19937_64& gen, double gap = 20.0) {
    Eigen::MatrixXd points(2 * per, 2);
    std::normal_distribution<double> noise(0.0, 0.5);
    for (int i = 0; i < per; ++i) {
        points(i, 0) = noise(gen);
        points(i, 1) = noise(gen);
        points(per + i, 0) = gap + noise(gen);
        points(per + i, 1) = noise(gen);
    }
    return points;
}

double recompute_inertia(const Eigen::MatrixXd& points, const ClusterModel& model) {
    double total = 0.0;
    for (int i = 0; i < points.rows(); ++i)
        total += (points.row(i) - model.centers.row(model.assignment[i])).squaredNorm();
    return total;
}

}  // namespace

TEST_CASE("row normalization scales to unit length") {
    Eigen::MatrixXd points = from_rows({{3.0, 4.0}, {0.0, -2.0}});
    Eigen::MatrixXd unit = wse::normalize_rows(points);
    CHECK(unit(0, 0) == doctest::Approx(0.6));
    CHECK(unit(0, 1) == doctest::Approx(0.8));
    CHECK(unit(1, 0) == 0.0);
    CHECK(unit(1, 1) == doctest::Approx(-1.0));
    // Idempotent on already-unit rows.
    CHECK((wse::normalize_rows(unit) - unit).cwiseAbs().maxCoeff() <= 1e-15);

    Eigen::MatrixXd with_zero = from_rows({{1.0, 0.0}, {0.0, 0.0}});
    CHECK_THROWS_WITH_AS(wse::normalize_rows(with_zero), doctest::Contains("row 1"),
                         std::invalid_argument);
}

TEST_CASE("embedding normalization names the offending node") {
    wse::Embedding e;
    e.mode = wse::EmbeddingMode::regular;
    e.labels = {"alpha", "beta"};
    e.coords = from_rows({{1.0, 2.0}, {0.0, 0.0}});
    CHECK_THROWS_WITH_AS(wse::normalize_rows(e), doctest::Contains("beta"),
                         std::invalid_argument);
}

TEST_CASE("k = 1 recovers the mean") {
    std::mt19937_64 gen(41);
    Eigen::MatrixXd points(20, 3);
    for (int i = 0; i < points.size(); ++i)
        points.data()[i] = static_cast<double>(gen() % 1000) / 100.0;
    ClusterModel model = wse::kmeans_pp(points, 1, 3, 50, 1e-10, 11);
    Eigen::RowVectorXd mean = points.colwise().mean();
    CHECK((model.centers.row(0) - mean).cwiseAbs().maxCoeff() <= 1e-10);
    double expected = 0.0;
    for (int i = 0; i < points.rows(); ++i)
        expected += (points.row(i) - mean).squaredNorm();
    CHECK(model.inertia == doctest::Approx(expected));
}

TEST_CASE("two obvious pairs split exactly") {
    Eigen::MatrixXd points =
        from_rows({{0.0, 0.0}, {0.1, 0.0}, {10.0, 0.0}, {10.1, 0.0}});
    ClusterModel model = wse::kmeans_pp(points, 2, 5, 100, 1e-12, 3);
    CHECK(model.assignment[0] == model.assignment[1]);
    CHECK(model.assignment[2] == model.assignment[3]);
    CHECK(model.assignment[0] != model.assignment[2]);
    // Each center is the midpoint of its pair; inertia is 4 * 0.05^2.
    CHECK(model.inertia == doctest::Approx(0.01));
    CHECK(model.inertia == doctest::Approx(oracle::best_two_partition_inertia(points)));
}

TEST_CASE("k equal to the number of distinct points zeroes the inertia") {
    Eigen::MatrixXd points = from_rows({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {0.0, 1.0}});
    ClusterModel model = wse::kmeans_pp(points, 3, 10, 100, 1e-12, 5);
    CHECK(model.inertia <= 1e-20);
    CHECK_THROWS_WITH_AS(wse::kmeans_pp(points, 4, 10, 100, 1e-12, 5),
                         doctest::Contains("distinct"), std::invalid_argument);
}

TEST_CASE("restarted k-means finds the exhaustive 2-means optimum") {
    std::mt19937_64 gen(42);
    for (int trial = 0; trial < 3; ++trial) {
        Eigen::MatrixXd points(10, 2);
        for (int i = 0; i < points.size(); ++i)
            points.data()[i] = static_cast<double>(gen() % 2000) / 100.0;
        ClusterModel model = wse::kmeans_pp(points, 2, 200, 200, 1e-12, 77 + trial);
        double best = oracle::best_two_partition_inertia(points);
        CHECK(model.inertia <= best * (1.0 + 1e-12) + 1e-12);
        CHECK(model.inertia >= best * (1.0 - 1e-12) - 1e-12);
    }
}

TEST_CASE("the winning restart's inertia history never increases") {
    std::mt19937_64 gen(43);
    Eigen::MatrixXd points = two_blobs(30, gen, 3.0);  // overlapping enough to iterate
    ClusterModel model = wse::kmeans_pp(points, 4, 8, 100, 1e-12, 13);
    REQUIRE(!model.inertia_history.empty());
    for (size_t i = 1; i < model.inertia_history.size(); ++i)
        CHECK(model.inertia_history[i] <= model.inertia_history[i - 1] + 1e-12);
    CHECK(model.inertia == doctest::Approx(model.inertia_history.back()));
}

TEST_CASE("separated blobs are recovered regardless of labeling") {
    std::mt19937_64 gen(44);
    Eigen::MatrixXd points = two_blobs(25, gen);
    ClusterModel model = wse::kmeans_pp(points, 2, 10, 100, 1e-10, 21);
    std::vector<int> truth(50, 0);
    for (int i = 25; i < 50; ++i) truth[i] = 1;
    CHECK(oracle::adjusted_rand_index(model.assignment, truth) == doctest::Approx(1.0));
}

TEST_CASE("every point sits with its nearest center, lowest id on ties") {
    std::mt19937_64 gen(45);
    Eigen::MatrixXd points(30, 2);
    for (int i = 0; i < points.size(); ++i)
        points.data()[i] = static_cast<double>(gen() % 1000) / 50.0;
    ClusterModel model = wse::kmeans_pp(points, 5, 6, 100, 1e-12, 31);
    for (int i = 0; i < points.rows(); ++i) {
        int best = 0;
        double best_d = (points.row(i) - model.centers.row(0)).squaredNorm();
        for (int c = 1; c < 5; ++c) {
            double d = (points.row(i) - model.centers.row(c)).squaredNorm();
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        CHECK(model.assignment[i] == best);
    }
    CHECK(model.inertia == doctest::Approx(recompute_inertia(points, model)));
}

TEST_CASE("k-means is deterministic and thread-count independent") {
    std::mt19937_64 gen(46);
    Eigen::MatrixXd points = two_blobs(20, gen, 6.0);
    ClusterModel a = wse::kmeans_pp(points, 3, 12, 100, 1e-10, 55, 1);
    ClusterModel b = wse::kmeans_pp(points, 3, 12, 100, 1e-10, 55, 1);
    ClusterModel c = wse::kmeans_pp(points, 3, 12, 100, 1e-10, 55, 4);
    CHECK(a.assignment == b.assignment);
    CHECK(a.centers == b.centers);
    CHECK(a.inertia == b.inertia);
    CHECK(a.assignment == c.assignment);
    CHECK(a.centers == c.centers);
    CHECK(a.inertia == c.inertia);
    CHECK(a.restarts_used == 12);
    CHECK(a.seed == 55);
}

TEST_CASE("k-means argument validation") {
    Eigen::MatrixXd points = from_rows({{0.0}, {1.0}, {2.0}});
    CHECK_THROWS_AS(wse::kmeans_pp(points, 0, 1, 10, 1e-9, 1), std::invalid_argument);
    CHECK_THROWS_AS(wse::kmeans_pp(points, 2, 0, 10, 1e-9, 1), std::invalid_argument);
    CHECK_THROWS_AS(wse::kmeans_pp(points, 2, 1, 0, 1e-9, 1), std::invalid_argument);
    CHECK_THROWS_AS(wse::kmeans_pp(points, 2, 1, 10, -1.0, 1), std::invalid_argument);
}

TEST_CASE("summary keeps the central half and ranks by internal weight") {
    // One cluster on a line. A heavy hub sits far out at 10; the center
    // (unit masses) is 2.5, so the hub is dropped by the distance filter and
    // the best-connected remaining node represents the cluster.
    Eigen::MatrixXd points = from_rows({{10.0}, {0.0}, {0.1}, {-0.1}});
    ClusterModel model;
    model.k = 1;
    model.assignment = {0, 0, 0, 0};
    model.centers = from_rows({{2.5}});
    NodeWeights degrees(Eigen::Vector4d(10, 9, 1, 1));
    NodeWeights unit = NodeWeights::unit(4);

    wse::ClusterSummary summary =
        wse::summarize_clusters(model, points, degrees, unit, 0.5, 1);
    REQUIRE(summary.size() == 1);
    CHECK(summary[0].cluster_id == 0);
    CHECK(summary[0].size == 4);
    CHECK(summary[0].weighted_size == doctest::Approx(4.0));
    REQUIRE(summary[0].representatives.size() == 1);
    CHECK(summary[0].representatives[0] == 1);  // the degree-9 node at 0.0

    // With fraction = 1 nothing is filtered and the hub wins on weight.
    wse::ClusterSummary all = wse::summarize_clusters(model, points, degrees, unit, 1.0, 2);
    CHECK(all[0].representatives == std::vector<int>{0, 1});
}

TEST_CASE("summary center moves with the mass weights") {
    Eigen::MatrixXd points = from_rows({{3.0}, {0.0}, {-3.0}});
    ClusterModel model;
    model.k = 1;
    model.assignment = {0, 0, 0};
    model.centers = from_rows({{0.0}});
    NodeWeights unit = NodeWeights::unit(3);
    NodeWeights heavy(Eigen::Vector3d(10, 1, 1));

    // Unit masses: center 0, the middle point survives the keep-1 filter.
    wse::ClusterSummary plain =
        wse::summarize_clusters(model, points, unit, unit, 0.3, 5);
    CHECK(plain[0].representatives == std::vector<int>{1});
    // Heavy first point drags the center to 2.25 and itself into the kept set.
    wse::ClusterSummary dragged =
        wse::summarize_clusters(model, points, unit, heavy, 0.3, 5);
    CHECK(dragged[0].representatives == std::vector<int>{0});
    CHECK(dragged[0].weighted_size == doctest::Approx(12.0));  // total member mass
}

TEST_CASE("summary resolves distance ties by index and truncates to top_m") {
    Eigen::MatrixXd points = from_rows({{1.0}, {-1.0}, {1.0}, {-1.0}});
    ClusterModel model;
    model.k = 1;
    model.assignment = {0, 0, 0, 0};
    model.centers = from_rows({{0.0}});
    NodeWeights unit = NodeWeights::unit(4);
    wse::ClusterSummary summary =
        wse::summarize_clusters(model, points, unit, unit, 0.5, 5);
    CHECK(summary[0].representatives == std::vector<int>{0, 1});

    // fraction 0.5 of 3 members keeps ceil(1.5) = 2.
    Eigen::MatrixXd three = from_rows({{0.0}, {1.0}, {2.0}});
    ClusterModel m3;
    m3.k = 1;
    m3.assignment = {0, 0, 0};
    m3.centers = from_rows({{1.0}});
    wse::ClusterSummary s3 = wse::summarize_clusters(m3, three, NodeWeights::unit(3),
                                                     NodeWeights::unit(3), 0.5, 5);
    CHECK(s3[0].representatives.size() == 2);

    wse::ClusterSummary truncated = wse::summarize_clusters(m3, three, NodeWeights::unit(3),
                                                            NodeWeights::unit(3), 1.0, 1);
    CHECK(truncated[0].representatives.size() == 1);
}

TEST_CASE("summary ranks the full cluster by weight then index when unfiltered") {
    Eigen::MatrixXd points = from_rows({{0.0}, {0.2}, {0.4}, {0.6}});
    ClusterModel model;
    model.k = 1;
    model.assignment = {0, 0, 0, 0};
    model.centers = from_rows({{0.3}});
    NodeWeights internal(Eigen::Vector4d(2, 7, 7, 1));
    wse::ClusterSummary summary = wse::summarize_clusters(
        model, points, internal, NodeWeights::unit(4), 1.0, 4);
    CHECK(summary[0].representatives == std::vector<int>{1, 2, 0, 3});
    CHECK(summary[0].weighted_size == doctest::Approx(4.0));
}

TEST_CASE("an empty cluster summarizes to size zero") {
    Eigen::MatrixXd points = from_rows({{0.0}, {1.0}});
    ClusterModel model;
    model.k = 3;
    model.assignment = {0, 2};
    model.centers = from_rows({{0.0}, {5.0}, {1.0}});
    NodeWeights unit = NodeWeights::unit(2);
    wse::ClusterSummary summary = wse::summarize_clusters(model, points, unit, unit);
    REQUIRE(summary.size() == 3);
    CHECK(summary[1].size == 0);
    CHECK(summary[1].representatives.empty());
    CHECK(summary[0].size == 1);
    CHECK(summary[2].size == 1);
}

TEST_CASE("summary argument validation") {
    Eigen::MatrixXd points = from_rows({{0.0}, {1.0}});
    ClusterModel model;
    model.k = 1;
    model.assignment = {0, 0};
    model.centers = from_rows({{0.5}});
    NodeWeights unit = NodeWeights::unit(2);
    CHECK_THROWS_AS(wse::summarize_clusters(model, points, unit, unit, 0.0, 5),
                    std::invalid_argument);
    CHECK_THROWS_AS(wse::summarize_clusters(model, points, unit, unit, 1.5, 5),
                    std::invalid_argument);
    CHECK_THROWS_AS(wse::summarize_clusters(model, points, unit, unit, 0.5, -1),
                    std::invalid_argument);
}

TEST_CASE("assignment TSV and summary JSON writers") {
    Eigen::MatrixXd points = from_rows({{0.0}, {0.1}, {5.0}});
    ClusterModel model = wse::kmeans_pp(points, 2, 4, 50, 1e-10, 9);
    std::vector<std::string> labels = {"ann", "bob", "cat"};
    std::ostringstream out;
    wse::write_assignments_tsv(model, labels, out);
    std::string expected_pair = model.assignment[0] == model.assignment[1] ? "same" : "";
    REQUIRE(expected_pair == "same");
    std::ostringstream want;
    want << "ann\t" << model.assignment[0] << "\nbob\t" << model.assignment[1] << "\ncat\t"
         << model.assignment[2] << "\n";
    CHECK(out.str() == want.str());

    NodeWeights unit = NodeWeights::unit(3);
    wse::ClusterSummary summary = wse::summarize_clusters(model, points, unit, unit, 1.0, 5);
    auto parsed = nlohmann::json::parse(wse::cluster_summary_json(summary, labels));
    REQUIRE(parsed.is_array());
    REQUIRE(parsed.size() == 2);
    for (const auto& entry : parsed) {
        REQUIRE(entry.contains("cluster_id"));
        REQUIRE(entry.contains("size"));
        REQUIRE(entry.contains("representatives"));
        CHECK(entry.size() == 3);  // nothing else leaks into the contract
        for (const auto& rep : entry["representatives"]) {
            std::string name = rep.get<std::string>();
            CHECK((name == "ann" || name == "bob" || name == "cat"));
        }
    }
}

TEST_CASE("pipeline smoke test: two triangles split cleanly") {
    wse::Graph g = wse::fixtures::two_triangles();
    wse::Embedding e = wse::embed(g, wse::internal_weights(g), 2,
                                  wse::EmbeddingMode::weighted, 1e-10, 17);
    ClusterModel model = wse::kmeans_pp(e.coords, 2, 8, 100, 1e-10, 17);
    std::vector<int> truth = {0, 0, 0, 1, 1, 1};
    CHECK(oracle::adjusted_rand_index(model.assignment, truth) == doctest::Approx(1.0));
}
