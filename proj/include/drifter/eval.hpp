#pragma once

#include <cstdint>
#include <span>

#include <json.hpp>

#include "drifter/dataset.hpp"
#include "drifter/drift.hpp"
#include "drifter/predictor.hpp"
#include "drifter/rng.hpp"

namespace drifter {

/// Generalization error: sqrt(mean squared residual) of f on d.
double rmse(const Predictor& f, const Dataset& d);

/**
 * @brief Empirical generalization-error threshold.
 *
 * Randomly partitions the rows into `folds` near-equal folds, predicts
 * every sample from a model fit on the other folds, and returns
 * multiplier * RMS of the out-of-fold residuals. The random partition does
 * not account for autocorrelation in the series.
 */
double sigma_emp(const Dataset& d_tr, const TrainerSpec& trainer, int folds,
                 double multiplier, Rng& rng);

/// Ground-truth drift labels: one per test window, true iff the window's
/// RMSE strictly exceeds sigma.
std::vector<bool> label_segments(const Predictor& f, const Dataset& d_te,
                                 std::int64_t l_te, double sigma);

struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  std::int64_t total() const { return tp + fp + tn + fn; }
  bool operator==(const ConfusionCounts&) const = default;
};

ConfusionCounts confusion(const std::vector<bool>& flags,
                          const std::vector<bool>& labels);

/// F1 = 2TP / (2TP + FP + FN); TN never enters. NaN when the denominator
/// is zero (no positives anywhere).
double f1_score(const ConfusionCounts& c);

/// Rescale test responses so their mean matches the training mean.
Dataset detrend(const Dataset& d_tr, const Dataset& d_te);

struct RocPoint {
  double threshold = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
  double f1 = 0.0;
};

struct RocResult {
  /// Sorted by descending threshold: runs from (0,0) towards (1,1).
  std::vector<RocPoint> points;
  double delta_opt = 0.0;
  double c_opt = 0.0;
  double f1_opt = 0.0;
  bool degenerate = false;  ///< labels were all identical
};

/**
 * @brief ROC sweep and best-F1 threshold.
 *
 * Candidate thresholds are the midpoints between consecutive distinct
 * indicator values plus sentinels below the minimum and above the maximum.
 * delta_opt maximizes F1 (ties resolved to the smallest threshold);
 * c_opt = (delta_opt - cal_mean) / cal_sd recovers the matching
 * threshold multiplier.
 */
RocResult roc_and_opt(std::span<const double> indicators,
                      const std::vector<bool>& labels, double cal_mean,
                      double cal_sd);

struct TheoremReport {
  double lhs = 0.0;  ///< E[(f(x)-y)^2] estimate
  double rhs = 0.0;  ///< (1+n/n')^-1 E[(f(x)-f'(x))^2] + sigma_y^2 estimate
  double relative_error = 0.0;
  std::int64_t n = 0;
  std::int64_t n_prime = 0;
  int m = 0;
  double sigma_y = 0.0;
  std::int64_t trials = 0;
  int n_eval = 0;
  std::int64_t skipped = 0;  ///< trials dropped because a fit was singular
};

/**
 * @brief Monte-Carlo check of the error-disagreement identity.
 *
 * Per trial: draw a true coefficient vector and i.i.d. standard normal
 * covariates (centered, uncorrelated), fit OLS models f and f' on
 * independent sets of sizes n and n', and accumulate both sides of the
 * identity over n_eval fresh evaluation points. Requires n, n' >= 10 m and
 * trials >= 100; fails if more than 1% of trials hit singular fits.
 */
TheoremReport verify_theorem(std::int64_t n, std::int64_t n_prime, int m,
                             double sigma_y, int n_eval, std::int64_t trials,
                             Rng& rng);

nlohmann::json theorem_to_json(const TheoremReport& report);

struct SegmentRecord {
  Segment bounds;
  double indicator = 0.0;
  double true_error = 0.0;
  bool label = false;
  bool flag = false;
};

/// Knobs of the ground-truth evaluation pipeline.
struct PipelineConfig {
  std::int64_t k = 10;       ///< overlapping-plan segment count parameter
  std::int64_t l_te = 15;    ///< test window length
  int n_ind = 2;
  double c = 5.0;            ///< threshold multiplier for the reported confusion
  TrainerSpec full_trainer;  ///< also used for the sigma_emp cross-validation
  TrainerSpec segment_trainer;
  int folds = 5;
  double sigma_multiplier = 2.0;
  std::uint64_t seed = 0;
};

struct EvalResult {
  std::vector<SegmentRecord> segments;
  ConfusionCounts confusion;  ///< at delta = cal_mean + c * cal_sd
  double f1 = 0.0;            ///< at that delta; NaN when undefined
  RocResult roc;
  double sigma = 0.0;  ///< sigma_emp used for the labels
  double delta = 0.0;
  double cal_mean = 0.0;
  double cal_sd = 0.0;
};

/**
 * @brief Full ground-truth evaluation.
 *
 * Fits the full model on d_tr, trains the overlapping segment ensemble,
 * derives sigma_emp labels, computes per-window indicators, the confusion
 * at the calibrated threshold, and the ROC / optimal-threshold sweep.
 */
EvalResult evaluate(const Dataset& d_tr, const Dataset& d_te,
                    const PipelineConfig& cfg);

nlohmann::json eval_to_json(const EvalResult& r, const PipelineConfig& cfg);
std::string eval_segments_csv(const EvalResult& r);
std::string eval_roc_csv(const EvalResult& r);

}  // namespace drifter
