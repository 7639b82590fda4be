#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "drifter/dataset.hpp"

namespace drifter {

enum class ModelKind { kOls, kKnn };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& s);

/// Recipe for fitting a predictor.
struct TrainerSpec {
  ModelKind kind = ModelKind::kOls;
  int knn_neighbors = 5;         ///< KNN only, >= 1
  double ridge_fallback = 1e-8;  ///< OLS only: added to the Gram diagonal when singular
};

/**
 * A fitted regression function. Prediction is a pure function of the
 * stored parameters and x; instances are immutable and safe to share
 * across threads.
 */
class Predictor {
 public:
  virtual ~Predictor() = default;

  virtual ModelKind kind() const = 0;
  virtual std::size_t dim() const = 0;
  virtual double predict(std::span<const double> x) const = 0;
  virtual nlohmann::json to_json() const = 0;

  /// Predictions for every row of d (responses are never read).
  std::vector<double> predict_all(const Dataset& d) const;
};

using PredictorPtr = std::shared_ptr<const Predictor>;

/// Linear model: predict(x) = coef[0] + coef[1..m] . x (intercept first).
class OlsModel final : public Predictor {
 public:
  explicit OlsModel(std::vector<double> coefficients, bool ridge_used = false);

  ModelKind kind() const override { return ModelKind::kOls; }
  std::size_t dim() const override { return coef_.size() - 1; }
  double predict(std::span<const double> x) const override;
  nlohmann::json to_json() const override;

  const std::vector<double>& coefficients() const { return coef_; }
  /// True when the fit had to add the ridge term to a singular Gram matrix.
  bool ridge_used() const { return ridge_used_; }

 private:
  std::vector<double> coef_;
  bool ridge_used_;
};

/// k-nearest-neighbour regressor: mean response of the k nearest stored
/// samples by Euclidean distance, distance ties broken by lower time index.
class KnnModel final : public Predictor {
 public:
  KnnModel(std::vector<std::int64_t> indices, std::vector<double> covariates,
           std::size_t dim, std::vector<double> responses, int neighbors);

  ModelKind kind() const override { return ModelKind::kKnn; }
  std::size_t dim() const override { return dim_; }
  double predict(std::span<const double> x) const override;
  nlohmann::json to_json() const override;

  int neighbors() const { return neighbors_; }
  std::int64_t stored_samples() const { return static_cast<std::int64_t>(indices_.size()); }

 private:
  std::vector<std::int64_t> indices_;
  std::vector<double> x_;  // row-major
  std::vector<double> y_;
  std::size_t dim_;
  int neighbors_;
};

/**
 * @brief Fit a predictor on a dataset with responses.
 *
 * OLS solves the normal equations with an LDLT factorization; if the Gram
 * matrix is singular (e.g. fewer samples than m+1) the ridge term
 * spec.ridge_fallback * I is added and the solve retried. KNN stores the
 * samples verbatim.
 */
PredictorPtr fit(const TrainerSpec& spec, const Dataset& d);

/// Inverse of Predictor::to_json(). Round-trips at full binary precision.
PredictorPtr model_from_json(const nlohmann::json& j);

}  // namespace drifter
