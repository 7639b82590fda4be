#include "drifter/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "drifter/io_util.hpp"

namespace drifter {

namespace {

std::vector<std::string> default_names(std::size_t dim) {
  std::vector<std::string> names;
  names.reserve(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    names.push_back("x" + std::to_string(j + 1));
  }
  return names;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    cells.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') {
    cells.emplace_back();
  }
  return cells;
}

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Dataset::Dataset(std::vector<std::int64_t> indices, std::vector<double> covariates,
                 std::size_t dim, std::optional<std::vector<double>> responses,
                 std::vector<std::string> covariate_names, std::string response_name)
    : indices_(std::move(indices)),
      x_(std::move(covariates)),
      dim_(dim),
      has_response_(responses.has_value()),
      covariate_names_(std::move(covariate_names)),
      response_name_(std::move(response_name)) {
  if (x_.size() != indices_.size() * dim_) {
    throw std::invalid_argument("Dataset: covariate block size does not match rows * dim");
  }
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] < 1 || (i > 0 && indices_[i] <= indices_[i - 1])) {
      throw std::invalid_argument("Dataset: indices must be positive and strictly increasing");
    }
  }
  if (has_response_) {
    y_ = std::move(*responses);
    if (y_.size() != indices_.size()) {
      throw std::invalid_argument("Dataset: response count does not match row count");
    }
  }
  if (covariate_names_.empty()) {
    covariate_names_ = default_names(dim_);
  } else if (covariate_names_.size() != dim_) {
    throw std::invalid_argument("Dataset: covariate name count does not match dim");
  }
}

double Dataset::response(std::int64_t row) const {
  if (!has_response_) {
    throw std::logic_error("Dataset: no responses present");
  }
  return y_[static_cast<std::size_t>(row)];
}

Sample Dataset::sample(std::int64_t row) const {
  const auto x = covariates(row);
  Sample s;
  s.index = index_at(row);
  s.covariates.assign(x.begin(), x.end());
  if (has_response_) s.response = response(row);
  return s;
}

Dataset Dataset::without_response() const {
  return Dataset(indices_, x_, dim_, std::nullopt, covariate_names_, response_name_);
}

Dataset Dataset::with_scaled_responses(double factor) const {
  if (!has_response_) {
    throw std::logic_error("Dataset: no responses to scale");
  }
  std::vector<double> scaled = y_;
  for (double& v : scaled) v *= factor;
  return Dataset(indices_, x_, dim_, std::move(scaled), covariate_names_, response_name_);
}

Dataset load_csv(const std::string& path,
                 const std::optional<std::string>& response_column) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open '" + path + "'");
  }

  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("'" + path + "': empty file, expected a header row");
  }
  std::vector<std::string> header = split_line(line);
  for (auto& name : header) name = trimmed(name);
  if (header.empty()) {
    throw std::runtime_error("'" + path + "': empty header row");
  }

  std::size_t response_col = header.size();  // one past the end = none
  if (response_column) {
    const auto it = std::find(header.begin(), header.end(), *response_column);
    if (it == header.end()) {
      throw std::runtime_error("'" + path + "': response column '" + *response_column +
                               "' not found in header");
    }
    response_col = static_cast<std::size_t>(it - header.begin());
  }

  const std::size_t dim = header.size() - (response_column ? 1 : 0);
  if (dim == 0) {
    throw std::runtime_error("'" + path + "': no covariate columns");
  }

  std::vector<std::string> names;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j != response_col) names.push_back(header[j]);
  }

  std::vector<std::int64_t> indices;
  std::vector<double> x;
  std::vector<double> y;
  std::int64_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
    ++row;
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != header.size()) {
      throw std::runtime_error("'" + path + "': row " + std::to_string(row) + " has " +
                               std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(header.size()));
    }
    for (std::size_t j = 0; j < cells.size(); ++j) {
      double value = 0.0;
      if (!parse_double(trimmed(cells[j]), value)) {
        throw std::runtime_error("'" + path + "': cannot parse '" + trimmed(cells[j]) +
                                 "' at row " + std::to_string(row) + ", column '" +
                                 header[j] + "'");
      }
      if (j == response_col) {
        y.push_back(value);
      } else {
        x.push_back(value);
      }
    }
    indices.push_back(row);
  }

  std::optional<std::vector<double>> responses;
  if (response_column) responses = std::move(y);
  return Dataset(std::move(indices), std::move(x), dim, std::move(responses),
                 std::move(names), response_column.value_or("y"));
}

std::string to_csv(const Dataset& d) {
  std::string out;
  for (std::size_t j = 0; j < d.dim(); ++j) {
    if (j) out += ',';
    out += d.covariate_names()[j];
  }
  if (d.has_response()) {
    out += ',';
    out += d.response_name();
  }
  out += '\n';
  for (std::int64_t i = 0; i < d.size(); ++i) {
    const auto x = d.covariates(i);
    for (std::size_t j = 0; j < d.dim(); ++j) {
      if (j) out += ',';
      out += format_double(x[j]);
    }
    if (d.has_response()) {
      out += ',';
      out += format_double(d.response(i));
    }
    out += '\n';
  }
  return out;
}

void write_csv(const Dataset& d, const std::string& path) {
  atomic_write_file(path, to_csv(d));
}

Dataset slice(const Dataset& d, Segment s) {
  if (s.start < 1 || s.start > s.end) {
    throw std::invalid_argument("slice: invalid segment [" + std::to_string(s.start) +
                                ", " + std::to_string(s.end) + "]");
  }
  if (!d.empty() && s.end > d.indices().back()) {
    throw std::invalid_argument("slice: segment end " + std::to_string(s.end) +
                                " is out of range (last index " +
                                std::to_string(d.indices().back()) + ")");
  }
  const auto& idx = d.indices();
  const auto lo = std::lower_bound(idx.begin(), idx.end(), s.start);
  const auto hi = std::upper_bound(idx.begin(), idx.end(), s.end);
  const auto first = lo - idx.begin();
  const auto count = hi - lo;
  if (count <= 0) {
    return Dataset({}, {}, d.dim(),
                   d.has_response() ? std::optional<std::vector<double>>({}) : std::nullopt,
                   d.covariate_names(), d.response_name());
  }
  return slice_rows(d, first + 1, first + count);
}

Dataset slice_rows(const Dataset& d, std::int64_t first, std::int64_t last) {
  if (first < 1 || first > last || last > d.size()) {
    throw std::invalid_argument("slice_rows: invalid row range [" + std::to_string(first) +
                                ", " + std::to_string(last) + "] for " +
                                std::to_string(d.size()) + " rows");
  }
  const auto a = static_cast<std::size_t>(first - 1);
  const auto b = static_cast<std::size_t>(last);
  std::vector<std::int64_t> indices(d.indices().begin() + a, d.indices().begin() + b);
  std::vector<double> x(d.covariate_data().begin() + a * d.dim(),
                        d.covariate_data().begin() + b * d.dim());
  std::optional<std::vector<double>> y;
  if (d.has_response()) {
    y = std::vector<double>(d.response_data().begin() + a, d.response_data().begin() + b);
  }
  return Dataset(std::move(indices), std::move(x), d.dim(), std::move(y),
                 d.covariate_names(), d.response_name());
}

SegmentationPlan overlapping_plan(std::int64_t n, std::int64_t k) {
  if (n < 1 || k < 1) {
    throw std::invalid_argument("overlapping_plan: n and k must be positive");
  }
  const std::int64_t l_tr = n / k;
  if (l_tr < 2) {
    throw std::invalid_argument("overlapping_plan: k = " + std::to_string(k) +
                                " is too large for n = " + std::to_string(n) +
                                " (segment length would be < 2)");
  }
  const std::int64_t stride = l_tr / 2;
  SegmentationPlan plan;
  plan.n = n;
  const std::int64_t count = 2 * k - 1;
  plan.segments.reserve(static_cast<std::size_t>(count));
  for (std::int64_t j = 1; j <= count; ++j) {
    const std::int64_t start = 1 + (j - 1) * stride;
    plan.segments.push_back({start, start + l_tr - 1});
  }
  plan.segments.back().end = n;  // clamp: the plan must cover [1, n]
  return plan;
}

SegmentationPlan test_plan(std::int64_t n, std::int64_t l_te) {
  if (l_te < 1) {
    throw std::invalid_argument("test_plan: l_te must be >= 1");
  }
  if (n < 0) {
    throw std::invalid_argument("test_plan: n must be >= 0");
  }
  SegmentationPlan plan;
  plan.n = n;
  const std::int64_t count = n / l_te;
  plan.segments.reserve(static_cast<std::size_t>(count));
  for (std::int64_t j = 0; j < count; ++j) {
    plan.segments.push_back({j * l_te + 1, (j + 1) * l_te});
  }
  return plan;
}

}  // namespace drifter
