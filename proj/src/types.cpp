#include "diffspec/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "diffspec/error.hpp"

namespace diffspec {

void PointCloud::validate() const {
  if (points.rows() < 1 || points.cols() < 1) {
    throw InvalidInput("point cloud must have at least one point and one dimension");
  }
  if (!points.allFinite()) throw InvalidInput("point cloud contains non-finite values");
  if (labels) {
    if (labels->size() != size()) {
      throw InvalidInput("label count " + std::to_string(labels->size()) +
                         " does not match point count " + std::to_string(size()));
    }
    for (int l : *labels) {
      if (l < 0) throw InvalidInput("labels must be nonnegative");
    }
  }
}

int PointCloud::num_classes() const {
  if (!labels || labels->empty()) throw InvalidInput("point cloud has no labels");
  return *std::max_element(labels->begin(), labels->end()) + 1;
}

PointCloud PointCloud::subset(const std::vector<std::size_t>& rows) const {
  Matrix out(static_cast<Eigen::Index>(rows.size()), points.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) = points.row(static_cast<Eigen::Index>(rows[r]));
  }
  std::optional<Labels> lbl;
  if (labels) {
    lbl.emplace();
    lbl->reserve(rows.size());
    for (std::size_t r : rows) lbl->push_back((*labels)[r]);
  }
  return PointCloud(std::move(out), std::move(lbl));
}

std::vector<std::vector<std::size_t>> class_members(const Labels& labels, int num_classes) {
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(num_classes));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int l = labels[i];
    if (l < 0 || l >= num_classes) throw InvalidInput("label out of range");
    members[static_cast<std::size_t>(l)].push_back(i);
  }
  return members;
}

}  // namespace diffspec
