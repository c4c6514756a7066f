#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "anchor/features.hpp"

namespace anchor {

struct TrainOptions {
  double C = 1.0;
  std::uint64_t seed = 0;
  int max_epochs = 1000;
  double tolerance = 1e-6;  // relative change of the dual objective per epoch
  double kkt_tolerance = 1e-3;
  int candidates = 8;  // partners tried per coordinate step
};

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  double C = 1.0;
  std::uint64_t train_seed = 0;
  double objective_value = 0.0;  // primal (1/2)|w|^2 + C * sum hinge
  int epochs = 0;
  bool converged = false;
  // Dual objective (1/2)|w|^2 - sum(alpha), one entry per epoch; non-increasing.
  std::vector<double> dual_trace;

  double decision(const SparseVector& x) const;
};

// L1-loss SVM with an unregularized bias, solved in the dual by coordinate
// descent over pairs of multipliers (the pair keeps sum(alpha_i y_i) = 0).
// Labels are +1 / -1. Throws DataError unless both classes are present.
LinearModel train_linear_svm(std::span<const SparseVector> X, std::span<const int> y,
                             const TrainOptions& options = {});

double primal_objective(std::span<const double> weights, double bias, std::span<const SparseVector> X,
                        std::span<const int> y, double C);

// Bias minimizing the hinge term for fixed weights (midpoint of the optimal
// interval). Requires both classes.
double optimal_bias(std::span<const double> scores, std::span<const int> y);

struct Prediction {
  bool positive = false;
  double score = 0.0;
};

// Score 0 counts as negative. Throws UsageError on a dimension mismatch.
Prediction predict(const LinearModel& model, const SparseVector& x);

}  // namespace anchor
