#pragma once

#include <optional>
#include <span>

#include <json.hpp>

#include "drifter/dataset.hpp"
#include "drifter/predictor.hpp"

namespace drifter {

/// Segment models f_1..f_k', one per segment of the plan they were
/// trained on, in plan order.
struct SegmentEnsemble {
  std::vector<PredictorPtr> models;
  SegmentationPlan plan;
  TrainerSpec trainer;

  std::size_t size() const { return models.size(); }
  /// Design length of a training segment (every segment except a clamped
  /// last one shares it).
  std::int64_t segment_length() const;
};

/// Fit one model per plan segment on slice(d_tr, segment).
SegmentEnsemble drifter_train(const Dataset& d_tr, const SegmentationPlan& plan,
                              const TrainerSpec& trainer);

/// Root-mean-square disagreement between two predictors over the
/// covariates of d. Responses are never read.
double rmse_star(const Predictor& f, const Predictor& f_i, const Dataset& d);

/// Same, over two aligned prediction vectors.
double rmse_star(std::span<const double> f_pred, std::span<const double> fi_pred);

/**
 * @brief Concept drift indicator for one test window.
 *
 * Computes z_i = rmse_star(f, model_i, d) for every ensemble member and
 * returns the n_ind-th smallest. Warns (without failing) when the window
 * is longer than the ensemble's training segments.
 */
double drifter_test(const Dataset& d, const Predictor& f,
                    const SegmentEnsemble& ensemble, int n_ind);

/// drifter_test with the full model supplied as per-row predictions,
/// for externally computed (black-box) regressors.
double drifter_test(const Dataset& d, std::span<const double> f_pred,
                    const SegmentEnsemble& ensemble, int n_ind);

/// mean + c * sd over the values (sample sd, n-1 denominator).
double threshold_from_indicators(std::span<const double> indicators, double c);

struct Calibration {
  double delta = 0.0;
  double mean = 0.0;
  double sd = 0.0;
  std::vector<double> indicators;  ///< one per non-overlapping training window
};

/**
 * @brief Detection threshold from the training data.
 *
 * Splits d_tr into non-overlapping windows of length l_te (responses
 * ignored), computes the indicator on each, and returns
 * delta = mean + c * sd together with the raw indicator values.
 * Requires at least two windows.
 *
 * Note: the ensemble trained on the full training data is reused, so the
 * calibration windows overlap the segment-model training data; the
 * resulting indicator values carry a mild optimistic bias.
 */
Calibration calibrate_threshold(const Dataset& d_tr, const Predictor& f,
                                const SegmentEnsemble& ensemble, int n_ind,
                                std::int64_t l_te, double c);
Calibration calibrate_threshold(const Dataset& d_tr, std::span<const double> f_pred,
                                const SegmentEnsemble& ensemble, int n_ind,
                                std::int64_t l_te, double c);

/// Full model + segment ensemble + detection parameters.
struct DriftDetector {
  PredictorPtr full_model;  ///< null when the full model is external (predictions supplied per call)
  SegmentEnsemble ensemble;
  int n_ind = 2;
  std::int64_t l_te = 15;
  std::optional<double> delta;
};

struct SegmentVerdict {
  Segment bounds;  ///< time indices of the first and last sample in the window
  double indicator = 0.0;
  bool flagged = false;  ///< indicator >= delta
};

struct DriftReport {
  std::vector<SegmentVerdict> segments;
  double delta = 0.0;

  std::int64_t flagged_count() const;
};

/**
 * @brief Classify every test window of d_te as drifting or not.
 *
 * Splits d_te into consecutive windows of length detector.l_te, computes
 * the indicator on each and flags those with indicator >= delta. Requires
 * detector.delta to be set and d_te to hold at least one full window.
 */
DriftReport detect(const Dataset& d_te, const DriftDetector& detector);
DriftReport detect(const Dataset& d_te, const DriftDetector& detector,
                   std::span<const double> f_pred);

nlohmann::json detector_to_json(const DriftDetector& detector);
DriftDetector detector_from_json(const nlohmann::json& j);

/// Columns: segment_start,segment_end,indicator,flagged (flagged as 0/1).
std::string report_to_csv(const DriftReport& report);
void write_report_csv(const DriftReport& report, const std::string& path);

}  // namespace drifter
