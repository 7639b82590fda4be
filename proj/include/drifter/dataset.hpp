#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace drifter {

/// Inclusive time-index interval [start, end], 1-based.
struct Segment {
  std::int64_t start = 0;
  std::int64_t end = 0;

  std::int64_t length() const { return end - start + 1; }
  bool contains(std::int64_t i) const { return start <= i && i <= end; }
  bool intersects(const Segment& other) const {
    return start <= other.end && other.start <= end;
  }
  bool operator==(const Segment&) const = default;
};

/// Ordered segments laid over a range of length n.
struct SegmentationPlan {
  std::vector<Segment> segments;
  std::int64_t n = 0;  ///< length of the covered range

  std::int64_t size() const { return static_cast<std::int64_t>(segments.size()); }
};

/// One observation: time index, covariates, optional response.
struct Sample {
  std::int64_t index = 0;
  std::vector<double> covariates;
  std::optional<double> response;
};

/**
 * @brief Immutable time-indexed dataset.
 *
 * Stores an n x m covariate block (row-major) and, when has_response() is
 * true, a response value for every row. Row order is time order; indices
 * are strictly increasing, assigned 1..n on load and preserved by slicing.
 * Safe for concurrent read access.
 */
class Dataset {
 public:
  Dataset() = default;

  /**
   * @param indices strictly increasing positive time indices, one per row
   * @param covariates row-major block of indices.size() * dim values
   * @param dim covariate dimension m
   * @param responses one value per row, or nullopt for reduced data
   */
  Dataset(std::vector<std::int64_t> indices, std::vector<double> covariates,
          std::size_t dim, std::optional<std::vector<double>> responses,
          std::vector<std::string> covariate_names = {},
          std::string response_name = "y");

  std::int64_t size() const { return static_cast<std::int64_t>(indices_.size()); }
  bool empty() const { return indices_.empty(); }
  std::size_t dim() const { return dim_; }
  bool has_response() const { return has_response_; }

  /// Time index of a 0-based row.
  std::int64_t index_at(std::int64_t row) const { return indices_[static_cast<std::size_t>(row)]; }
  std::span<const double> covariates(std::int64_t row) const {
    return {x_.data() + static_cast<std::size_t>(row) * dim_, dim_};
  }
  double response(std::int64_t row) const;
  Sample sample(std::int64_t row) const;

  const std::vector<std::int64_t>& indices() const { return indices_; }
  const std::vector<double>& covariate_data() const { return x_; }
  const std::vector<double>& response_data() const { return y_; }
  const std::vector<std::string>& covariate_names() const { return covariate_names_; }
  const std::string& response_name() const { return response_name_; }

  /// Same rows with the response column dropped (reduced data).
  Dataset without_response() const;
  /// Copy with every response multiplied by `factor`.
  Dataset with_scaled_responses(double factor) const;

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<std::int64_t> indices_;
  std::vector<double> x_;  // row-major, size() * dim_
  std::vector<double> y_;  // empty unless has_response_
  std::size_t dim_ = 0;
  bool has_response_ = false;
  std::vector<std::string> covariate_names_;
  std::string response_name_;
};

/**
 * @brief Load a CSV file (one header row, comma separated, all cells numeric).
 *
 * Row order becomes time order; indices are assigned 1..n. When
 * `response_column` is given that column becomes the response, otherwise
 * every column is a covariate. Missing or non-numeric cells are errors
 * reported with their data row and column name.
 */
Dataset load_csv(const std::string& path,
                 const std::optional<std::string>& response_column = std::nullopt);

/// CSV text for a dataset; doubles are written in shortest round-trip form.
std::string to_csv(const Dataset& d);

/// Atomic CSV write (temp file + rename).
void write_csv(const Dataset& d, const std::string& path);

/// All samples whose time index falls in s (paper-style index slicing).
Dataset slice(const Dataset& d, Segment s);

/// Rows first..last by 1-based position, indices preserved.
Dataset slice_rows(const Dataset& d, std::int64_t first, std::int64_t last);

/**
 * @brief Overlapping training segmentation.
 *
 * 2k-1 segments of length l_tr = floor(n/k) with stride floor(l_tr/2);
 * the last segment is clamped to end at n so the plan covers [1, n].
 */
SegmentationPlan overlapping_plan(std::int64_t n, std::int64_t k);

/// Consecutive non-overlapping segments of length l_te; a trailing
/// partial segment is dropped.
SegmentationPlan test_plan(std::int64_t n, std::int64_t l_te);

}  // namespace drifter
