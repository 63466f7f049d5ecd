#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace diffspec {

// Points are stored one per row so that each observation is contiguous.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Labels = std::vector<int>;

// n x D observations with optional integer class ids.
struct PointCloud {
  Matrix points;
  std::optional<Labels> labels;

  PointCloud() = default;
  explicit PointCloud(Matrix pts, std::optional<Labels> lbl = std::nullopt)
      : points(std::move(pts)), labels(std::move(lbl)) {}

  std::size_t size() const { return static_cast<std::size_t>(points.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(points.cols()); }
  bool has_labels() const { return labels.has_value(); }

  // Throws InvalidInput unless n >= 1, D >= 1, every entry is finite and,
  // when labels are present, they are nonnegative with length n.
  void validate() const;

  // 1 + max label. Requires labels.
  int num_classes() const;

  // Rows selected by index, labels carried along when present.
  PointCloud subset(const std::vector<std::size_t>& rows) const;
};

// Indices of each class, class c at position c. Empty classes stay empty.
std::vector<std::vector<std::size_t>> class_members(const Labels& labels, int num_classes);

}  // namespace diffspec
