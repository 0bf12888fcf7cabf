#pragma once

#include <span>
#include <vector>

#include "cxprobe/probe/matrix.hpp"

namespace cxprobe::probe {

struct LinearClassifier {
  std::vector<double> weights;
  double bias = 0.0;
  double regularization = 0.0;

  double decision(std::span<const double> x) const;
  // Positive iff weights.x + bias >= 0.
  int predict(std::span<const double> x) const { return decision(x) >= 0.0 ? 1 : 0; }
  std::vector<int> predict(const Matrix& x) const;
};

// L2-penalized negative log-likelihood of a logistic model with labels in
// {0,1}: sum_i [softplus(z_i) - y_i z_i] + (lambda/2)|w|^2, z = w.x + b.
// The bias is not penalized.
struct Objective {
  double value = 0.0;
  std::vector<double> grad_weights;
  double grad_bias = 0.0;
};

Objective logistic_objective(const Matrix& x, std::span<const int> labels,
                             std::span<const double> weights, double bias, double regularization);

struct TrainOptions {
  double regularization = 1.0;
  double gradient_tolerance = 1e-6;
  std::size_t max_iterations = 1000;
};

struct TrainResult {
  LinearClassifier classifier;
  std::vector<double> objective_trace;  // value after each accepted step
  std::size_t iterations = 0;
  double gradient_norm = 0.0;
};

// L-BFGS with Armijo backtracking from the zero vector, so every accepted
// step lowers the objective and training is deterministic. Throws
// DegenerateLabelsError unless both classes are present.
TrainResult fit_logistic(const Matrix& x, std::span<const int> labels, const TrainOptions& opts = {});

LinearClassifier train_classifier(const Matrix& x, std::span<const int> labels,
                                  double regularization = 1.0);

}  // namespace cxprobe::probe
