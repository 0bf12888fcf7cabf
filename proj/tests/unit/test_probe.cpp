#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cxprobe/common/error.hpp"
#include "cxprobe/common/rng.hpp"
#include "cxprobe/probe/crossval.hpp"
#include "cxprobe/probe/kmeans.hpp"
#include "cxprobe/probe/logistic.hpp"
#include "cxprobe/probe/probes.hpp"
#include "oracles.hpp"

using namespace cxprobe;
using namespace cxprobe::probe;

namespace {

std::vector<int> as_int(const std::vector<std::size_t>& v) { return {v.begin(), v.end()}; }

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.normal();
  }
  return m;
}

}  // namespace

TEST_CASE("kmeans on {0,1,10,11}") {
  const std::vector<std::vector<double>> pts{{0}, {1}, {10}, {11}};
  const auto r = kmeans(pts, 2, 1);
  CHECK(r.labels[0] == r.labels[1]);
  CHECK(r.labels[2] == r.labels[3]);
  CHECK(r.labels[0] != r.labels[2]);
  CHECK(r.inertia == doctest::Approx(1.0));
  CHECK(r.inertia == doctest::Approx(oracle::best_two_partition(pts).wcss));
}

TEST_CASE("kmeans degenerate and k=1 cases") {
  SUBCASE("identical points") {
    const std::vector<std::vector<double>> pts(5, std::vector<double>{2.0, 2.0});
    const auto r = kmeans(pts, 2, 3);
    CHECK(r.inertia == 0.0);
    const auto sizes = r.cluster_sizes();
    CHECK(sizes[0] + sizes[1] == 5);
  }
  SUBCASE("k=1: centroid is the mean, inertia is n times the variance") {
    const std::vector<std::vector<double>> pts{{1, 0}, {3, 2}, {5, 10}};
    const auto r = kmeans(pts, 1, 0);
    CHECK(r.centroids[0][0] == doctest::Approx(3.0));
    CHECK(r.centroids[0][1] == doctest::Approx(4.0));
    CHECK(r.inertia == doctest::Approx(8.0 + 56.0));
  }
  SUBCASE("fewer points than clusters") {
    const auto r = kmeans(std::vector<std::vector<double>>{{1.0}}, 3, 0);
    CHECK(r.labels.size() == 1);
    CHECK(r.inertia == 0.0);
  }
  SUBCASE("errors") {
    CHECK_THROWS(kmeans(std::vector<std::vector<double>>{}, 2, 0));
    CHECK_THROWS_AS(kmeans(std::vector<std::vector<double>>{{1.0}, {1.0, 2.0}}, 2, 0), DimensionError);
  }
}

TEST_CASE("kmeans matches the exhaustive optimum on small instances") {
  for (std::uint64_t inst = 0; inst < 40; ++inst) {
    Rng rng(derive_seed(2024, "kmeans-oracle", {inst}));
    const std::size_t n = 3 + rng.uniform_index(6);
    const std::size_t dim = 1 + rng.uniform_index(3);
    std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
    for (auto& p : pts) {
      for (auto& v : p) v = rng.normal() * 3;
    }
    const auto best = oracle::best_two_partition(pts);
    const auto got = kmeans(Matrix::from_rows(pts), KMeansOptions{.k = 2, .seed = inst, .restarts = 50});
    CAPTURE(inst);
    CHECK(got.inertia == doctest::Approx(best.wcss).epsilon(1e-9));
    CHECK(oracle::wcss_of(pts, as_int(got.labels), 2) == doctest::Approx(got.inertia).epsilon(1e-9));
  }
}

TEST_CASE("lloyd inertia never increases and best-of-restarts is minimal") {
  Rng rng(8);
  const Matrix pts = random_matrix(60, 3, rng);
  for (int r = 0; r < 5; ++r) {
    Rng init(static_cast<std::uint64_t>(r));
    const auto run = lloyd(pts, kmeans_plus_plus(pts, 3, init), 300, 1e-6);
    for (std::size_t i = 1; i < run.inertia_trace.size(); ++i) {
      CHECK(run.inertia_trace[i] <= run.inertia_trace[i - 1] + 1e-9);
    }
  }
  const auto best = kmeans(pts, KMeansOptions{.k = 3, .seed = 4, .restarts = 10});
  for (std::uint64_t r = 0; r < 10; ++r) {
    Rng init(derive_seed(4, "kmeans.restart", {r}));
    const auto run = lloyd(pts, kmeans_plus_plus(pts, 3, init), 300, 1e-6);
    CHECK(best.inertia <= run.result.inertia + 1e-12);
  }
  CHECK(kmeans(pts, KMeansOptions{.k = 3, .seed = 4}).labels == best.labels);
}

TEST_CASE("logistic gradient matches central differences") {
  for (std::uint64_t inst = 0; inst < 10; ++inst) {
    Rng rng(100 + inst);
    const Matrix x = random_matrix(5, 3, rng);
    std::vector<int> y{0, 1, 1, 0, 1};
    std::vector<double> w{rng.normal(), rng.normal(), rng.normal()};
    const double b = rng.normal();
    const double lambda = 0.7;
    const auto obj = logistic_objective(x, y, w, b, lambda);
    const auto num = oracle::numeric_gradient(x, y, w, b, lambda, 1e-5);
    std::vector<double> ana = obj.grad_weights;
    ana.push_back(obj.grad_bias);
    for (std::size_t j = 0; j < ana.size(); ++j) {
      const double rel = std::abs(ana[j] - num[j]) / std::max(1e-8, std::max(std::abs(ana[j]), std::abs(num[j])));
      CHECK(rel <= 1e-4);
    }
  }
}

TEST_CASE("logistic training") {
  SUBCASE("separable 1-D data") {
    const Matrix x = Matrix::from_rows({{-1.0}, {1.0}});
    const std::vector<int> y{0, 1};
    const auto c = train_classifier(x, y, 1.0);
    CHECK(c.predict(x) == y);
  }
  SUBCASE("single class is rejected") {
    const Matrix x = Matrix::from_rows({{-1.0}, {1.0}});
    const std::vector<int> zeros{0, 0};
    CHECK_THROWS_AS(train_classifier(x, zeros), DegenerateLabelsError);
  }
  SUBCASE("converges, loss decreases monotonically, deterministic") {
    Rng rng(12);
    const Matrix x = random_matrix(80, 4, rng);
    std::vector<int> y(80);
    for (std::size_t i = 0; i < 80; ++i) y[i] = x(i, 0) + 0.5 * x(i, 1) + 0.3 * rng.normal() > 0;
    const auto r = fit_logistic(x, y, TrainOptions{.regularization = 1.0});
    CHECK(r.gradient_norm <= 1e-6);
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i) {
      CHECK(r.objective_trace[i] <= r.objective_trace[i - 1]);
    }
    const auto again = fit_logistic(x, y, TrainOptions{.regularization = 1.0});
    CHECK(again.classifier.weights == r.classifier.weights);
    CHECK(again.classifier.bias == r.classifier.bias);
  }
  SUBCASE("decision invariant under positive scaling") {
    LinearClassifier c{{0.3, -1.2}, 0.4, 1.0};
    LinearClassifier scaled{{0.3 * 7.5, -1.2 * 7.5}, 0.4 * 7.5, 1.0};
    Rng rng(2);
    for (int i = 0; i < 100; ++i) {
      const std::vector<double> p{rng.normal(), rng.normal()};
      CHECK(c.predict(p) == scaled.predict(p));
    }
  }
}

TEST_CASE("kfold_split") {
  SUBCASE("10 items, 5 folds of 2") {
    const std::vector<int> labels(10, 0);
    const auto s = kfold_split(labels, 5, 1, false);
    CHECK(s.fold_sizes() == std::vector<std::size_t>(5, 2));
  }
  SUBCASE("stratified 6 + 4 items") {
    std::vector<int> labels{0, 0, 0, 0, 0, 0, 1, 1, 1, 1};
    // Four members cannot cover five folds.
    CHECK_THROWS_AS(kfold_split(labels, 5, 3, true), StratificationError);
    for (std::size_t k : {2u, 3u, 4u}) {
      const auto s = kfold_split(labels, k, 3, true);
      const auto sizes = s.fold_sizes();
      CHECK(*std::max_element(sizes.begin(), sizes.end()) - *std::min_element(sizes.begin(), sizes.end()) <= 1);
      for (int cls : {0, 1}) {
        std::vector<int> per(k, 0);
        for (std::size_t i = 0; i < labels.size(); ++i) {
          if (labels[i] == cls) ++per[s.assignments[i]];
        }
        CHECK(*std::max_element(per.begin(), per.end()) - *std::min_element(per.begin(), per.end()) <= 1);
      }
    }
  }
  SUBCASE("class smaller than k") {
    std::vector<int> labels{0, 0, 0, 0, 0, 0, 1, 1, 1};
    CHECK_THROWS_AS(kfold_split(labels, 5, 1, true), StratificationError);
  }
  SUBCASE("k below 2") {
    const std::vector<int> labels(4, 0);
    CHECK_THROWS_AS(kfold_split(labels, 1, 1, false), std::invalid_argument);
  }
  SUBCASE("train and test partition the items") {
    std::vector<int> labels(23);
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = i % 3 == 0;
    const auto s = kfold_split(labels, 5, 9, true);
    for (std::size_t f = 0; f < 5; ++f) {
      auto test = s.test_indices(f), train = s.train_indices(f);
      CHECK(test.size() + train.size() == labels.size());
      std::vector<std::size_t> all = test;
      all.insert(all.end(), train.begin(), train.end());
      std::sort(all.begin(), all.end());
      for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i] == i);
    }
    CHECK(kfold_split(labels, 5, 9, true).assignments == s.assignments);
  }
}

TEST_CASE("f_score") {
  const std::vector<int> gold{1, 1, 0, 0, 1};
  CHECK(f_score(gold, gold) == 1.0);
  // TP=2, FP=1, FN=1
  const std::vector<int> p{1, 1, 1, 0, 0}, g{1, 1, 0, 0, 1};
  CHECK(f_score(p, g) == 2.0 / 3.0);
  const std::vector<int> none{0, 0, 0, 0, 0};
  CHECK(f_score(none, gold) == 0.0);
  CHECK(f_score(gold, gold, 0) == 1.0);
  const std::vector<int> shorter{1};
  CHECK_THROWS_AS(f_score(shorter, gold), DimensionError);
}

TEST_CASE("standardizer uses the given rows only") {
  const Matrix x = Matrix::from_rows({{1, 5}, {3, 5}, {100, 7}});
  const std::vector<std::size_t> train{0, 1};
  const auto s = Standardizer::fit(x, train);
  CHECK(s.mean[0] == doctest::Approx(2.0));
  CHECK(s.mean[1] == doctest::Approx(5.0));
  const std::vector<std::size_t> all{0, 1, 2};
  const Matrix z = s.apply(x, all);
  CHECK(z(0, 0) == doctest::Approx(-1.0));
  CHECK(z(1, 0) == doctest::Approx(1.0));
  CHECK(z(2, 1) == doctest::Approx(2.0));  // zero-spread dimension is only centred
}

TEST_CASE("false-positive probe: NA when a cluster is too small") {
  std::vector<std::vector<double>> rows;
  Rng rng(1);
  for (int i = 0; i < 30; ++i) rows.push_back({rng.normal() * 0.01, rng.normal() * 0.01});
  for (int i = 0; i < 3; ++i) rows.push_back({100.0 + i, 100.0});
  const auto r = false_positive_probe(Matrix::from_rows(rows), 5);
  CHECK(r.na);
  CHECK(r.na_reason == "single cluster");
  CHECK(std::isnan(r.mean_f));
}

TEST_CASE("false-positive probe: needs 2 x folds items") {
  const Matrix x = Matrix::from_rows({{0}, {1}, {2}, {3}, {4}, {5}, {6}, {7}, {8}});
  CHECK_THROWS(false_positive_probe(x, 1));
}

TEST_CASE("false-positive probe is reproducible and reports fold means") {
  Rng rng(77);
  const Matrix x = random_matrix(60, 8, rng);
  const auto a = false_positive_probe(x, 3);
  const auto b = false_positive_probe(x, 3);
  REQUIRE_FALSE(a.na);
  CHECK(a.per_fold_f == b.per_fold_f);
  CHECK(a.per_fold_f.size() == 5);
  const double mean = std::accumulate(a.per_fold_f.begin(), a.per_fold_f.end(), 0.0) / 5.0;
  CHECK(a.mean_f == doctest::Approx(mean));
  CHECK(a.cluster_sizes[0] + a.cluster_sizes[1] == 60);
}

TEST_CASE("validation probe requires equal category counts") {
  CategoryEmbeddings e;
  for (std::size_t c = 0; c < e.size(); ++c) {
    for (int i = 0; i < 10; ++i) e[c].push_back({"s", embedding::EmbeddingCondition::Direct, {double(c), double(i)}});
  }
  e[2].pop_back();
  CHECK_THROWS_AS(validation_probe(e, embedding::EmbeddingCondition::Direct, 1), DegenerateInputError);
}
