#include "cxprobe/probe/kmeans.hpp"

#include <cmath>
#include <limits>

#include "cxprobe/common/error.hpp"

namespace cxprobe::probe {

std::vector<std::size_t> ClusterAssignment::cluster_sizes() const {
  std::vector<std::size_t> sizes(centroids.size(), 0);
  for (std::size_t l : labels) ++sizes[l];
  return sizes;
}

std::vector<std::vector<double>> kmeans_plus_plus(const Matrix& points, std::size_t k, Rng& rng) {
  const std::size_t n = points.rows();
  std::vector<std::vector<double>> centroids;
  centroids.reserve(k);
  auto first = points.row(rng.uniform_index(n));
  centroids.emplace_back(first.begin(), first.end());

  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(points.row(i), centroids[0]);

  while (centroids.size() < k) {
    double total = 0.0;
    for (double v : d2) total += v;
    std::size_t pick = 0;
    if (total <= 0.0) {
      pick = rng.uniform_index(n);
    } else {
      const double target = rng.uniform01() * total;
      double acc = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > target && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
      while (d2[pick] <= 0.0 && pick > 0) --pick;
    }
    auto row = points.row(pick);
    centroids.emplace_back(row.begin(), row.end());
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(points.row(i), centroids.back()));
    }
  }
  return centroids;
}

namespace {

double assign(const Matrix& points, const std::vector<std::vector<double>>& centroids,
              std::vector<std::size_t>& labels) {
  double inertia = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_c = 0;
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      const double d = squared_distance(points.row(i), centroids[c]);
      if (d < best) {
        best = d;
        best_c = c;
      }
    }
    labels[i] = best_c;
    inertia += best;
  }
  return inertia;
}

}  // namespace

LloydRun lloyd(const Matrix& points, std::vector<std::vector<double>> centroids,
               std::size_t max_iterations, double tolerance) {
  const std::size_t n = points.rows(), dim = points.cols(), k = centroids.size();
  LloydRun run;
  std::vector<std::size_t> labels(n);
  run.inertia_trace.push_back(assign(points, centroids, labels));

  std::size_t it = 0;
  while (it < max_iterations) {
    ++it;
    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto row = points.row(i);
      for (std::size_t d = 0; d < dim; ++d) sums[labels[i]][d] += row[d];
      ++counts[labels[i]];
    }
    double max_shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t d = 0; d < dim; ++d) sums[c][d] /= static_cast<double>(counts[c]);
      max_shift = std::max(max_shift, std::sqrt(squared_distance(sums[c], centroids[c])));
      centroids[c] = std::move(sums[c]);
    }
    run.inertia_trace.push_back(assign(points, centroids, labels));
    if (max_shift < tolerance) break;
  }

  run.result.labels = std::move(labels);
  run.result.centroids = std::move(centroids);
  run.result.inertia = run.inertia_trace.back();
  run.result.iterations = it;
  return run;
}

ClusterAssignment kmeans(const Matrix& points, const KMeansOptions& opts) {
  if (points.rows() == 0) throw DegenerateInputError("kmeans: empty point list");
  if (opts.k == 0) throw std::invalid_argument("kmeans: k must be at least 1");
  const std::size_t restarts = std::max<std::size_t>(1, opts.restarts);

  ClusterAssignment best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(opts.seed, "kmeans.restart", {r}));
    LloydRun run = lloyd(points, kmeans_plus_plus(points, opts.k, rng), opts.max_iterations,
                         opts.tolerance);
    if (run.result.inertia < best.inertia) best = std::move(run.result);
  }
  return best;
}

ClusterAssignment kmeans(const std::vector<std::vector<double>>& points, std::size_t k,
                         std::uint64_t seed, std::size_t restarts) {
  return kmeans(Matrix::from_rows(points), KMeansOptions{.k = k, .seed = seed, .restarts = restarts});
}

}  // namespace cxprobe::probe
