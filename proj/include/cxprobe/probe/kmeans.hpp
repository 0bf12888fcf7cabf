#pragma once

#include <cstdint>
#include <vector>

#include "cxprobe/common/rng.hpp"
#include "cxprobe/probe/matrix.hpp"

namespace cxprobe::probe {

struct ClusterAssignment {
  std::vector<std::size_t> labels;             // one per point, in [0, k)
  std::vector<std::vector<double>> centroids;  // k centroids
  double inertia = 0.0;                        // sum of squared distances to own centroid
  std::size_t iterations = 0;

  std::vector<std::size_t> cluster_sizes() const;
};

struct KMeansOptions {
  std::size_t k = 2;
  std::uint64_t seed = 0;
  std::size_t restarts = 10;
  std::size_t max_iterations = 300;
  double tolerance = 1e-6;  // largest centroid movement that counts as converged
};

// k-means++ seeding. When fewer than k distinct points exist, the remaining
// centroids duplicate existing points and their clusters stay empty.
std::vector<std::vector<double>> kmeans_plus_plus(const Matrix& points, std::size_t k, Rng& rng);

struct LloydRun {
  ClusterAssignment result;
  std::vector<double> inertia_trace;  // after every assignment step
};

// Lloyd iterations from the given centroids. Empty clusters keep their
// previous centroid; ties go to the lower cluster index.
LloydRun lloyd(const Matrix& points, std::vector<std::vector<double>> centroids,
               std::size_t max_iterations, double tolerance);

// Best-inertia result over opts.restarts seeded k-means++/Lloyd runs.
ClusterAssignment kmeans(const Matrix& points, const KMeansOptions& opts);
ClusterAssignment kmeans(const std::vector<std::vector<double>>& points, std::size_t k,
                         std::uint64_t seed, std::size_t restarts = 10);

}  // namespace cxprobe::probe
