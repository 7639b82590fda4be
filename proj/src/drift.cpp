#include "drifter/drift.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "drifter/io_util.hpp"

namespace drifter {

namespace {

double nth_smallest(std::vector<double> values, int n_ind) {
  std::nth_element(values.begin(), values.begin() + (n_ind - 1), values.end());
  return values[static_cast<std::size_t>(n_ind - 1)];
}

void check_test_inputs(const Dataset& d, const SegmentEnsemble& ensemble, int n_ind) {
  if (d.empty()) {
    throw std::invalid_argument("drifter_test: empty test data");
  }
  if (ensemble.models.empty()) {
    throw std::invalid_argument("drifter_test: empty ensemble");
  }
  if (n_ind < 1 || static_cast<std::size_t>(n_ind) > ensemble.size()) {
    throw std::invalid_argument("drifter_test: n_ind = " + std::to_string(n_ind) +
                                " out of range [1, " + std::to_string(ensemble.size()) + "]");
  }
  // longer windows may mix several concepts and inflate the indicator
  const std::int64_t l_tr = ensemble.segment_length();
  if (l_tr > 0 && d.size() > l_tr) {
    std::cerr << "drifter: warning: test window length " << d.size()
              << " exceeds training segment length " << l_tr << "\n";
  }
}

std::vector<double> predictions_of(const Predictor& model, const Dataset& d) {
  return model.predict_all(d);
}

}  // namespace

std::int64_t SegmentEnsemble::segment_length() const {
  return plan.segments.empty() ? 0 : plan.segments.front().length();
}

SegmentEnsemble drifter_train(const Dataset& d_tr, const SegmentationPlan& plan,
                              const TrainerSpec& trainer) {
  if (!d_tr.has_response()) {
    throw std::invalid_argument("drifter_train: training data has no responses");
  }
  if (plan.segments.empty()) {
    throw std::invalid_argument("drifter_train: empty segmentation plan");
  }
  SegmentEnsemble ensemble;
  ensemble.plan = plan;
  ensemble.trainer = trainer;
  ensemble.models.reserve(plan.segments.size());
  for (const Segment& s : plan.segments) {
    try {
      ensemble.models.push_back(fit(trainer, slice(d_tr, s)));
    } catch (const std::exception& e) {
      throw std::runtime_error("drifter_train: fitting segment [" +
                               std::to_string(s.start) + ", " + std::to_string(s.end) +
                               "] failed: " + e.what());
    }
  }
  return ensemble;
}

double rmse_star(std::span<const double> f_pred, std::span<const double> fi_pred) {
  if (f_pred.empty() || f_pred.size() != fi_pred.size()) {
    throw std::invalid_argument("rmse_star: prediction vectors empty or mismatched");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < f_pred.size(); ++i) {
    const double diff = f_pred[i] - fi_pred[i];
    acc += diff * diff;
  }
  return std::sqrt(acc / static_cast<double>(f_pred.size()));
}

double rmse_star(const Predictor& f, const Predictor& f_i, const Dataset& d) {
  if (d.empty()) {
    throw std::invalid_argument("rmse_star: empty dataset");
  }
  double acc = 0.0;
  for (std::int64_t i = 0; i < d.size(); ++i) {
    const auto x = d.covariates(i);
    const double diff = f.predict(x) - f_i.predict(x);
    acc += diff * diff;
  }
  return std::sqrt(acc / static_cast<double>(d.size()));
}

namespace {

double drifter_test_impl(const Dataset& d, std::span<const double> f_pred,
                         const SegmentEnsemble& ensemble, int n_ind) {
  std::vector<double> z;
  z.reserve(ensemble.size());
  for (const PredictorPtr& model : ensemble.models) {
    z.push_back(rmse_star(f_pred, predictions_of(*model, d)));
  }
  return nth_smallest(std::move(z), n_ind);
}

}  // namespace

double drifter_test(const Dataset& d, const Predictor& f,
                    const SegmentEnsemble& ensemble, int n_ind) {
  check_test_inputs(d, ensemble, n_ind);
  const std::vector<double> f_pred = predictions_of(f, d);
  return drifter_test_impl(d, f_pred, ensemble, n_ind);
}

double drifter_test(const Dataset& d, std::span<const double> f_pred,
                    const SegmentEnsemble& ensemble, int n_ind) {
  check_test_inputs(d, ensemble, n_ind);
  if (static_cast<std::int64_t>(f_pred.size()) != d.size()) {
    throw std::invalid_argument("drifter_test: prediction count does not match test rows");
  }
  return drifter_test_impl(d, f_pred, ensemble, n_ind);
}

double threshold_from_indicators(std::span<const double> indicators, double c) {
  if (indicators.size() < 2) {
    throw std::invalid_argument("threshold_from_indicators: need at least 2 values");
  }
  double mean = 0.0;
  for (double v : indicators) mean += v;
  mean /= static_cast<double>(indicators.size());
  double ss = 0.0;
  for (double v : indicators) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(indicators.size() - 1));
  return mean + c * sd;
}

namespace {

Calibration calibrate_impl(const Dataset& d_tr, const Predictor* f,
                           std::span<const double> f_pred,
                           const SegmentEnsemble& ensemble, int n_ind,
                           std::int64_t l_te, double c) {
  const SegmentationPlan windows = test_plan(d_tr.size(), l_te);
  if (windows.size() < 2) {
    throw std::invalid_argument("calibrate_threshold: fewer than 2 calibration segments (n = " +
                                std::to_string(d_tr.size()) + ", l_te = " +
                                std::to_string(l_te) + ")");
  }
  Calibration cal;
  cal.indicators.reserve(static_cast<std::size_t>(windows.size()));
  for (const Segment& w : windows.segments) {
    const Dataset window = slice_rows(d_tr, w.start, w.end);
    if (f != nullptr) {
      cal.indicators.push_back(drifter_test(window, *f, ensemble, n_ind));
    } else {
      const auto sub = f_pred.subspan(static_cast<std::size_t>(w.start - 1),
                                      static_cast<std::size_t>(w.length()));
      cal.indicators.push_back(drifter_test(window, sub, ensemble, n_ind));
    }
  }
  double mean = 0.0;
  for (double v : cal.indicators) mean += v;
  mean /= static_cast<double>(cal.indicators.size());
  double ss = 0.0;
  for (double v : cal.indicators) ss += (v - mean) * (v - mean);
  cal.mean = mean;
  cal.sd = std::sqrt(ss / static_cast<double>(cal.indicators.size() - 1));
  cal.delta = cal.mean + c * cal.sd;
  return cal;
}

}  // namespace

Calibration calibrate_threshold(const Dataset& d_tr, const Predictor& f,
                                const SegmentEnsemble& ensemble, int n_ind,
                                std::int64_t l_te, double c) {
  return calibrate_impl(d_tr, &f, {}, ensemble, n_ind, l_te, c);
}

Calibration calibrate_threshold(const Dataset& d_tr, std::span<const double> f_pred,
                                const SegmentEnsemble& ensemble, int n_ind,
                                std::int64_t l_te, double c) {
  if (static_cast<std::int64_t>(f_pred.size()) != d_tr.size()) {
    throw std::invalid_argument("calibrate_threshold: prediction count does not match rows");
  }
  return calibrate_impl(d_tr, nullptr, f_pred, ensemble, n_ind, l_te, c);
}

std::int64_t DriftReport::flagged_count() const {
  std::int64_t count = 0;
  for (const auto& s : segments) count += s.flagged ? 1 : 0;
  return count;
}

namespace {

DriftReport detect_impl(const Dataset& d_te, const DriftDetector& detector,
                        const std::span<const double>* f_pred) {
  if (!detector.delta.has_value()) {
    throw std::invalid_argument("detect: detector threshold delta is not set");
  }
  if (d_te.size() < detector.l_te) {
    throw std::invalid_argument("detect: test data has " + std::to_string(d_te.size()) +
                                " rows, shorter than one test segment (l_te = " +
                                std::to_string(detector.l_te) + ")");
  }
  if (f_pred == nullptr && detector.full_model == nullptr) {
    throw std::invalid_argument("detect: detector has an external full model; "
                                "per-row predictions are required");
  }
  const double delta = *detector.delta;
  DriftReport report;
  report.delta = delta;
  const SegmentationPlan windows = test_plan(d_te.size(), detector.l_te);
  report.segments.reserve(static_cast<std::size_t>(windows.size()));
  for (const Segment& w : windows.segments) {
    const Dataset window = slice_rows(d_te, w.start, w.end);
    double d = 0.0;
    if (f_pred != nullptr) {
      const auto sub = f_pred->subspan(static_cast<std::size_t>(w.start - 1),
                                       static_cast<std::size_t>(w.length()));
      d = drifter_test(window, sub, detector.ensemble, detector.n_ind);
    } else {
      d = drifter_test(window, *detector.full_model, detector.ensemble, detector.n_ind);
    }
    report.segments.push_back({{window.index_at(0), window.index_at(window.size() - 1)},
                               d,
                               d >= delta});
  }
  return report;
}

}  // namespace

DriftReport detect(const Dataset& d_te, const DriftDetector& detector) {
  return detect_impl(d_te, detector, nullptr);
}

DriftReport detect(const Dataset& d_te, const DriftDetector& detector,
                   std::span<const double> f_pred) {
  if (static_cast<std::int64_t>(f_pred.size()) != d_te.size()) {
    throw std::invalid_argument("detect: prediction count does not match test rows");
  }
  return detect_impl(d_te, detector, &f_pred);
}

nlohmann::json detector_to_json(const DriftDetector& detector) {
  nlohmann::json segments = nlohmann::json::array();
  for (const Segment& s : detector.ensemble.plan.segments) {
    segments.push_back({s.start, s.end});
  }
  nlohmann::json models = nlohmann::json::array();
  for (const PredictorPtr& model : detector.ensemble.models) {
    models.push_back(model->to_json());
  }
  const TrainerSpec& t = detector.ensemble.trainer;
  return {{"schema_version", 1},
          {"full_model", detector.full_model ? detector.full_model->to_json()
                                             : nlohmann::json(nullptr)},
          {"segment_models", std::move(models)},
          {"plan", {{"n", detector.ensemble.plan.n}, {"segments", std::move(segments)}}},
          {"trainer",
           {{"kind", to_string(t.kind)},
            {"knn_neighbors", t.knn_neighbors},
            {"ridge_fallback", t.ridge_fallback}}},
          {"n_ind", detector.n_ind},
          {"l_te", detector.l_te},
          {"delta", detector.delta.has_value() ? nlohmann::json(*detector.delta)
                                               : nlohmann::json(nullptr)}};
}

DriftDetector detector_from_json(const nlohmann::json& j) {
  DriftDetector det;
  if (!j.at("full_model").is_null()) {
    det.full_model = model_from_json(j.at("full_model"));
  }
  for (const auto& mj : j.at("segment_models")) {
    det.ensemble.models.push_back(model_from_json(mj));
  }
  det.ensemble.plan.n = j.at("plan").at("n").get<std::int64_t>();
  for (const auto& sj : j.at("plan").at("segments")) {
    det.ensemble.plan.segments.push_back(
        {sj.at(0).get<std::int64_t>(), sj.at(1).get<std::int64_t>()});
  }
  if (det.ensemble.models.size() != det.ensemble.plan.segments.size()) {
    throw std::invalid_argument("detector_from_json: model count does not match plan");
  }
  const auto& tj = j.at("trainer");
  det.ensemble.trainer.kind = model_kind_from_string(tj.at("kind").get<std::string>());
  det.ensemble.trainer.knn_neighbors = tj.at("knn_neighbors").get<int>();
  det.ensemble.trainer.ridge_fallback = tj.at("ridge_fallback").get<double>();
  det.n_ind = j.at("n_ind").get<int>();
  det.l_te = j.at("l_te").get<std::int64_t>();
  if (!j.at("delta").is_null()) {
    det.delta = j.at("delta").get<double>();
  }
  return det;
}

std::string report_to_csv(const DriftReport& report) {
  std::string out = "segment_start,segment_end,indicator,flagged\n";
  for (const auto& s : report.segments) {
    out += std::to_string(s.bounds.start);
    out += ',';
    out += std::to_string(s.bounds.end);
    out += ',';
    out += format_double(s.indicator);
    out += ',';
    out += s.flagged ? '1' : '0';
    out += '\n';
  }
  return out;
}

void write_report_csv(const DriftReport& report, const std::string& path) {
  atomic_write_file(path, report_to_csv(report));
}

}  // namespace drifter
