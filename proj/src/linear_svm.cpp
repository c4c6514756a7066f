#include "anchor/linear_svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "anchor/error.hpp"
#include "anchor/random.hpp"

namespace anchor {
namespace {

void axpy(double a, const SparseVector& x, std::vector<double>& w) {
  for (std::size_t k = 0; k < x.index.size(); ++k) w[x.index[k]] += a * x.value[k];
}

double squared(std::span<const double> w) {
  double s = 0.0;
  for (double v : w) s += v * v;
  return s;
}

// Largest KKT violation m(alpha) - M(alpha) over the working sets.
double kkt_gap(std::span<const double> alpha, std::span<const double> scores, std::span<const int> y, double C) {
  double up = -std::numeric_limits<double>::infinity();
  double low = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < alpha.size(); ++t) {
    const double v = y[t] - scores[t];
    const bool in_up = (y[t] > 0 && alpha[t] < C) || (y[t] < 0 && alpha[t] > 0);
    const bool in_low = (y[t] < 0 && alpha[t] < C) || (y[t] > 0 && alpha[t] > 0);
    if (in_up) up = std::max(up, v);
    if (in_low) low = std::min(low, v);
  }
  return up - low;
}

}  // namespace

double LinearModel::decision(const SparseVector& x) const { return x.dot(weights) + bias; }

double primal_objective(std::span<const double> weights, double bias, std::span<const SparseVector> X,
                        std::span<const int> y, double C) {
  double loss = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) loss += std::max(0.0, 1.0 - y[i] * (X[i].dot(weights) + bias));
  return 0.5 * squared(weights) + C * loss;
}

double optimal_bias(std::span<const double> scores, std::span<const int> y) {
  // hinge_i(b) has a kink at 1 - f_i (positives) or -1 - f_i (negatives); the
  // slope of the sum is -n_pos + #(kinks below b), so the minimizers lie
  // between the n_pos-th and (n_pos+1)-th smallest kinks.
  std::vector<double> kinks(scores.size());
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    kinks[i] = y[i] - scores[i];
    n_pos += y[i] > 0 ? 1 : 0;
  }
  if (n_pos == 0 || n_pos == scores.size()) throw DataError("optimal bias needs both classes");
  std::sort(kinks.begin(), kinks.end());
  return 0.5 * (kinks[n_pos - 1] + kinks[n_pos]);
}

LinearModel train_linear_svm(std::span<const SparseVector> X, std::span<const int> y, const TrainOptions& options) {
  if (X.size() != y.size()) throw UsageError("feature and label counts differ");
  if (!(options.C > 0.0)) throw UsageError("C must be positive");
  if (options.max_epochs < 1 || options.candidates < 1) throw UsageError("invalid training options");
  const std::size_t n = X.size();
  std::size_t n_pos = 0;
  for (int label : y) {
    if (label != 1 && label != -1) throw UsageError("labels must be +1 or -1");
    n_pos += label > 0 ? 1 : 0;
  }
  if (n_pos == 0 || n_pos == n) throw DataError("training data must contain both classes");
  const std::size_t dim = X[0].dim;
  for (const auto& x : X) {
    if (x.dim != dim) throw UsageError("feature vectors have different dimensions");
  }

  const double C = options.C;
  std::vector<double> alpha(n, 0.0);
  std::vector<double> w(dim, 0.0);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = X[i].squared_norm();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> scores(n);

  Rng rng(options.seed);
  LinearModel model;
  model.C = C;
  model.train_seed = options.seed;
  double previous = 0.0;  // dual objective at alpha = 0

  for (int epoch = 1; epoch <= options.max_epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(perm));
    for (std::size_t i : perm) {
      const double fi = X[i].dot(w);
      double best_gain = 0.0;
      double best_t = 0.0;
      std::size_t best_j = n;
      for (int c = 0; c < options.candidates; ++c) {
        std::size_t j = rng.below(n - 1);
        if (j >= i) ++j;
        const double fj = X[j].dot(w);
        const double eta = sq[i] + sq[j] - 2.0 * X[i].dot(X[j]);
        // Moving t along (alpha_i += y_i t, alpha_j -= y_j t) changes w by t (x_i - x_j).
        const double slope = (fi - y[i]) - (fj - y[j]);
        const double lo = std::max(y[i] > 0 ? -alpha[i] : alpha[i] - C, y[j] > 0 ? alpha[j] - C : -alpha[j]);
        const double hi = std::min(y[i] > 0 ? C - alpha[i] : alpha[i], y[j] > 0 ? alpha[j] : C - alpha[j]);
        if (hi <= lo) continue;
        double t;
        if (eta > 1e-12) {
          t = std::clamp(-slope / eta, lo, hi);
        } else {
          t = slope > 0 ? lo : slope < 0 ? hi : 0.0;
        }
        const double gain = -(slope * t + 0.5 * eta * t * t);
        if (gain > best_gain) {
          best_gain = gain;
          best_t = t;
          best_j = j;
        }
      }
      if (best_j == n) continue;
      const std::size_t j = best_j;
      alpha[i] = std::clamp(alpha[i] + y[i] * best_t, 0.0, C);
      alpha[j] = std::clamp(alpha[j] - y[j] * best_t, 0.0, C);
      axpy(best_t, X[i], w);
      axpy(-best_t, X[j], w);
    }

    const double dual = 0.5 * squared(w) - std::accumulate(alpha.begin(), alpha.end(), 0.0);
    model.dual_trace.push_back(dual);
    model.epochs = epoch;
    for (std::size_t t = 0; t < n; ++t) scores[t] = X[t].dot(w);
    const double change = std::abs(previous - dual) / std::max(std::abs(dual), 1e-12);
    previous = dual;
    if (change < options.tolerance && kkt_gap(alpha, scores, y, C) < options.kkt_tolerance) {
      model.converged = true;
      break;
    }
  }

  for (std::size_t t = 0; t < n; ++t) scores[t] = X[t].dot(w);
  model.bias = optimal_bias(scores, y);
  model.weights = std::move(w);
  model.objective_value = primal_objective(model.weights, model.bias, X, y, C);
  return model;
}

Prediction predict(const LinearModel& model, const SparseVector& x) {
  if (x.dim != model.weights.size()) {
    throw UsageError("vector dimension " + std::to_string(x.dim) + " does not match model dimension " +
                     std::to_string(model.weights.size()));
  }
  const double score = model.decision(x);
  return {score > 0.0, score};
}

}  // namespace anchor
