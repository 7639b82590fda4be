#include "drifter/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace drifter {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using RowMajorMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

// Numerically singular when a pivot collapses relative to the largest one.
bool ldlt_singular(const Eigen::LDLT<MatrixXd>& ldlt) {
  if (ldlt.info() != Eigen::Success) return true;
  const VectorXd d = ldlt.vectorD();
  const double dmax = d.cwiseAbs().maxCoeff();
  if (!(dmax > 0.0)) return true;
  return d.minCoeff() <= dmax * 1e-12;
}

PredictorPtr fit_ols(const TrainerSpec& spec, const Dataset& d) {
  const auto n = d.size();
  const auto m = static_cast<Eigen::Index>(d.dim());
  const Eigen::Index p = m + 1;

  RowMajorMap x(d.covariate_data().data(), n, m);
  Eigen::Map<const VectorXd> y(d.response_data().data(), n);

  // Gram matrix and right-hand side of the normal equations for [1; x]
  MatrixXd gram(p, p);
  gram(0, 0) = static_cast<double>(n);
  gram.block(0, 1, 1, m) = x.colwise().sum();
  gram.block(1, 0, m, 1) = gram.block(0, 1, 1, m).transpose();
  gram.block(1, 1, m, m) = x.transpose() * x;
  VectorXd rhs(p);
  rhs(0) = y.sum();
  rhs.tail(m) = x.transpose() * y;

  bool ridge_used = false;
  Eigen::LDLT<MatrixXd> ldlt(gram);
  if (n < p || ldlt_singular(ldlt)) {
    if (spec.ridge_fallback <= 0.0) {
      throw std::runtime_error("fit: singular Gram matrix and no ridge fallback");
    }
    ridge_used = true;
    MatrixXd ridged = gram;
    ridged.diagonal().array() += spec.ridge_fallback;
    ldlt.compute(ridged);
    if (ldlt.info() != Eigen::Success) {
      throw std::runtime_error("fit: Gram matrix factorization failed even with ridge term");
    }
  }
  const VectorXd beta = ldlt.solve(rhs);
  return std::make_shared<OlsModel>(std::vector<double>(beta.data(), beta.data() + p),
                                    ridge_used);
}

PredictorPtr fit_knn(const TrainerSpec& spec, const Dataset& d) {
  if (spec.knn_neighbors < 1) {
    throw std::invalid_argument("fit: knn_neighbors must be >= 1");
  }
  return std::make_shared<KnnModel>(d.indices(), d.covariate_data(), d.dim(),
                                    d.response_data(), spec.knn_neighbors);
}

}  // namespace

std::string to_string(ModelKind kind) {
  return kind == ModelKind::kOls ? "ols" : "knn";
}

ModelKind model_kind_from_string(const std::string& s) {
  if (s == "ols") return ModelKind::kOls;
  if (s == "knn") return ModelKind::kKnn;
  throw std::invalid_argument("unknown model kind '" + s + "'");
}

std::vector<double> Predictor::predict_all(const Dataset& d) const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(d.size()));
  for (std::int64_t i = 0; i < d.size(); ++i) {
    out.push_back(predict(d.covariates(i)));
  }
  return out;
}

OlsModel::OlsModel(std::vector<double> coefficients, bool ridge_used)
    : coef_(std::move(coefficients)), ridge_used_(ridge_used) {
  if (coef_.empty()) {
    throw std::invalid_argument("OlsModel: empty coefficient vector");
  }
}

double OlsModel::predict(std::span<const double> x) const {
  if (x.size() != dim()) {
    throw std::invalid_argument("predict: covariate dimension " + std::to_string(x.size()) +
                                " does not match model dimension " + std::to_string(dim()));
  }
  double acc = coef_[0];
  for (std::size_t j = 0; j < x.size(); ++j) {
    acc += coef_[j + 1] * x[j];
  }
  return acc;
}

nlohmann::json OlsModel::to_json() const {
  return {{"kind", "ols"}, {"coef", coef_}};
}

KnnModel::KnnModel(std::vector<std::int64_t> indices, std::vector<double> covariates,
                   std::size_t dim, std::vector<double> responses, int neighbors)
    : indices_(std::move(indices)),
      x_(std::move(covariates)),
      y_(std::move(responses)),
      dim_(dim),
      neighbors_(neighbors) {
  if (indices_.empty()) {
    throw std::invalid_argument("KnnModel: no stored samples");
  }
  if (x_.size() != indices_.size() * dim_ || y_.size() != indices_.size()) {
    throw std::invalid_argument("KnnModel: inconsistent sample storage");
  }
  if (neighbors_ < 1) {
    throw std::invalid_argument("KnnModel: neighbors must be >= 1");
  }
}

double KnnModel::predict(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw std::invalid_argument("predict: covariate dimension " + std::to_string(x.size()) +
                                " does not match model dimension " + std::to_string(dim_));
  }
  const std::size_t n = indices_.size();
  // (squared distance, time index, response); the index breaks distance ties
  std::vector<std::tuple<double, std::int64_t, double>> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = x_.data() + i * dim_;
    double d2 = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
      const double diff = row[j] - x[j];
      d2 += diff * diff;
    }
    order[i] = {d2, indices_[i], y_[i]};
  }
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(neighbors_), n);
  std::partial_sort(order.begin(), order.begin() + k, order.end());

  double acc = 0.0;
  for (std::size_t r = 0; r < k; ++r) {
    acc += std::get<2>(order[r]);
  }
  return acc / static_cast<double>(k);
}

nlohmann::json KnnModel::to_json() const {
  nlohmann::json samples = nlohmann::json::array();
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    samples.push_back({{"i", indices_[i]},
                       {"x", std::vector<double>(x_.begin() + i * dim_,
                                                 x_.begin() + (i + 1) * dim_)},
                       {"y", y_[i]}});
  }
  return {{"kind", "knn"}, {"neighbors", neighbors_}, {"samples", std::move(samples)}};
}

PredictorPtr fit(const TrainerSpec& spec, const Dataset& d) {
  if (d.empty()) {
    throw std::invalid_argument("fit: empty dataset");
  }
  if (!d.has_response()) {
    throw std::invalid_argument("fit: dataset has no responses");
  }
  if (spec.ridge_fallback < 0.0) {
    throw std::invalid_argument("fit: ridge_fallback must be >= 0");
  }
  switch (spec.kind) {
    case ModelKind::kOls:
      return fit_ols(spec, d);
    case ModelKind::kKnn:
      return fit_knn(spec, d);
  }
  throw std::logic_error("fit: unknown model kind");
}

PredictorPtr model_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "ols") {
    return std::make_shared<OlsModel>(j.at("coef").get<std::vector<double>>());
  }
  if (kind == "knn") {
    std::vector<std::int64_t> indices;
    std::vector<double> x;
    std::vector<double> y;
    std::size_t dim = 0;
    for (const auto& s : j.at("samples")) {
      indices.push_back(s.at("i").get<std::int64_t>());
      const auto row = s.at("x").get<std::vector<double>>();
      if (indices.size() == 1) dim = row.size();
      x.insert(x.end(), row.begin(), row.end());
      y.push_back(s.at("y").get<double>());
    }
    return std::make_shared<KnnModel>(std::move(indices), std::move(x), dim, std::move(y),
                                      j.at("neighbors").get<int>());
  }
  throw std::invalid_argument("model_from_json: unknown kind '" + kind + "'");
}

}  // namespace drifter
