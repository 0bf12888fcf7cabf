#include "cxprobe/probe/logistic.hpp"

#include <cmath>
#include <deque>

#include "cxprobe/common/error.hpp"

namespace cxprobe::probe {

double LinearClassifier::decision(std::span<const double> x) const {
  return dot(weights, x) + bias;
}

std::vector<int> LinearClassifier::predict(const Matrix& x) const {
  std::vector<int> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict(x.row(i));
  return out;
}

namespace {

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void check_inputs(const Matrix& x, std::span<const int> labels) {
  if (labels.size() != x.rows()) {
    throw DimensionError("label count " + std::to_string(labels.size()) + " != row count " +
                         std::to_string(x.rows()));
  }
  bool has0 = false, has1 = false;
  for (int y : labels) {
    if (y == 0) has0 = true;
    else if (y == 1) has1 = true;
    else throw std::invalid_argument("labels must be 0 or 1");
  }
  if (!has0 || !has1) throw DegenerateLabelsError("training labels contain a single class");
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (double v : x.row(i)) {
      if (!std::isfinite(v)) throw DegenerateInputError("non-finite feature value");
    }
  }
}

// Parameters packed as [w..., b].
struct Packed {
  const Matrix& x;
  std::span<const int> y;
  double lambda;

  double eval(const std::vector<double>& theta, std::vector<double>& grad) const {
    const std::size_t d = x.cols();
    const std::span<const double> w(theta.data(), d);
    Objective o = logistic_objective(x, y, w, theta[d], lambda);
    grad.assign(o.grad_weights.begin(), o.grad_weights.end());
    grad.push_back(o.grad_bias);
    return o.value;
  }
};

double norm(const std::vector<double>& v) { return std::sqrt(dot(v, v)); }

}  // namespace

Objective logistic_objective(const Matrix& x, std::span<const int> labels,
                             std::span<const double> weights, double bias,
                             double regularization) {
  Objective o;
  o.grad_weights.assign(x.cols(), 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto row = x.row(i);
    const double z = dot(weights, row) + bias;
    const double y = labels[i];
    o.value += softplus(z) - y * z;
    const double r = sigmoid(z) - y;
    for (std::size_t j = 0; j < row.size(); ++j) o.grad_weights[j] += r * row[j];
    o.grad_bias += r;
  }
  for (std::size_t j = 0; j < weights.size(); ++j) {
    o.value += 0.5 * regularization * weights[j] * weights[j];
    o.grad_weights[j] += regularization * weights[j];
  }
  return o;
}

TrainResult fit_logistic(const Matrix& x, std::span<const int> labels, const TrainOptions& opts) {
  check_inputs(x, labels);
  if (opts.regularization < 0) throw std::invalid_argument("regularization must be >= 0");

  constexpr std::size_t kMemory = 10;
  constexpr double kArmijo = 1e-4;
  const std::size_t p = x.cols() + 1;
  const Packed problem{x, labels, opts.regularization};

  std::vector<double> theta(p, 0.0), grad, trial(p), trial_grad;
  double value = problem.eval(theta, grad);

  struct Pair {
    std::vector<double> s, y;
    double rho;
  };
  std::deque<Pair> memory;
  TrainResult result;

  std::size_t it = 0;
  for (; it < opts.max_iterations; ++it) {
    if (norm(grad) <= opts.gradient_tolerance) break;

    // Two-loop recursion: direction = -H grad.
    std::vector<double> q = grad;
    std::vector<double> alpha(memory.size());
    for (std::size_t m = memory.size(); m-- > 0;) {
      alpha[m] = memory[m].rho * dot(memory[m].s, q);
      for (std::size_t j = 0; j < p; ++j) q[j] -= alpha[m] * memory[m].y[j];
    }
    double gamma = 1.0;
    if (!memory.empty()) {
      const Pair& last = memory.back();
      gamma = dot(last.s, last.y) / dot(last.y, last.y);
    } else {
      gamma = 1.0 / std::max(1.0, norm(grad));
    }
    for (double& v : q) v *= gamma;
    for (std::size_t m = 0; m < memory.size(); ++m) {
      const double beta = memory[m].rho * dot(memory[m].y, q);
      for (std::size_t j = 0; j < p; ++j) q[j] += (alpha[m] - beta) * memory[m].s[j];
    }
    std::vector<double> direction(p);
    for (std::size_t j = 0; j < p; ++j) direction[j] = -q[j];

    double slope = dot(grad, direction);
    if (slope >= 0) {
      memory.clear();
      const double scale = 1.0 / std::max(1.0, norm(grad));
      for (std::size_t j = 0; j < p; ++j) direction[j] = -grad[j] * scale;
      slope = dot(grad, direction);
    }

    double step = 1.0;
    double trial_value = 0.0;
    bool accepted = false;
    while (step > 1e-20) {
      for (std::size_t j = 0; j < p; ++j) trial[j] = theta[j] + step * direction[j];
      trial_value = problem.eval(trial, trial_grad);
      if (std::isfinite(trial_value) && trial_value <= value + kArmijo * step * slope &&
          trial_value < value) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (memory.empty()) break;  // no descent possible even along -grad
      memory.clear();
      continue;
    }

    Pair pair{std::vector<double>(p), std::vector<double>(p), 0.0};
    for (std::size_t j = 0; j < p; ++j) {
      pair.s[j] = trial[j] - theta[j];
      pair.y[j] = trial_grad[j] - grad[j];
    }
    const double sy = dot(pair.s, pair.y);
    if (sy > 1e-12 * norm(pair.s) * norm(pair.y)) {
      pair.rho = 1.0 / sy;
      memory.push_back(std::move(pair));
      if (memory.size() > kMemory) memory.pop_front();
    }
    theta.swap(trial);
    grad.swap(trial_grad);
    value = trial_value;
    result.objective_trace.push_back(value);
  }

  result.iterations = it;
  result.gradient_norm = norm(grad);
  result.classifier.weights.assign(theta.begin(), theta.end() - 1);
  result.classifier.bias = theta.back();
  result.classifier.regularization = opts.regularization;
  return result;
}

LinearClassifier train_classifier(const Matrix& x, std::span<const int> labels,
                                  double regularization) {
  return fit_logistic(x, labels, TrainOptions{.regularization = regularization}).classifier;
}

}  // namespace cxprobe::probe
