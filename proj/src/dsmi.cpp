#include "diffspec/dsmi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "diffspec/clustering.hpp"
#include "diffspec/error.hpp"
#include "diffspec/parallel.hpp"
#include "diffspec/rng.hpp"
#include "diffspec/spectrum.hpp"

namespace diffspec {

std::string sigma_policy_name(SigmaPolicy policy) {
  return policy == SigmaPolicy::Global ? "global" : "subset";
}

namespace {

struct SubsetEntropy {
  double value = 0.0;
  double sigma = 0.0;
  std::size_t size = 0;
};

SubsetEntropy subset_dse(const Eigen::MatrixXd& full_sq, const std::vector<std::size_t>& rows,
                         const KernelConfig& config, std::optional<double> global_sigma,
                         double t) {
  const Eigen::MatrixXd sq = submatrix(full_sq, rows);
  double sigma;
  if (config.sigma) {
    sigma = resolve_sigma(sq, config);
  } else if (global_sigma) {
    sigma = *global_sigma;
  } else {
    sigma = median_heuristic_sigma(sq);
  }
  const KernelMatrices km = build_kernel_from_sq_dists(sq, sigma, config.alpha);
  return {dse(eigenvalues_symmetric(km.symmetric), t).value, sigma, rows.size()};
}

}  // namespace

MIReport dsmi(const PointCloud& cloud, const KernelConfig& config, const DsmiOptions& options) {
  cloud.validate();
  if (!cloud.has_labels()) throw InvalidInput("dsmi requires labels");
  if (options.repeats < 1) throw InvalidInput("dsmi: repeats must be at least 1");
  if (!(options.t > 0.0)) throw InvalidInput("diffusion time t must be positive");
  check_point_cap(cloud.size(), config);

  const int num_classes = cloud.num_classes();
  auto members = class_members(*cloud.labels, num_classes);
  for (std::size_t c = 0; c < members.size(); ++c) {
    if (members[c].size() < 2) {
      throw InvalidInput("dsmi: class " + std::to_string(c) + " has " +
                         std::to_string(members[c].size()) + " points; at least 2 are required");
    }
  }
  // Classes are processed in order of their first member, which does not
  // depend on the label values, so relabeling cannot change the result.
  std::vector<std::size_t> order(members.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return members[a].front() < members[b].front(); });

  const Eigen::MatrixXd full_sq = pairwise_sq_dists(cloud.points);
  std::optional<double> global_sigma;
  if (!config.sigma && options.sigma_policy == SigmaPolicy::Global) {
    global_sigma = median_heuristic_sigma(full_sq);
  }

  const std::size_t classes = members.size();
  const std::size_t per_class = 1 + options.repeats;
  std::vector<SubsetEntropy> results(classes * per_class);
  parallel_for(0, results.size(), [&](std::size_t task) {
    const std::size_t slot = task / per_class;
    const std::size_t which = task % per_class;
    const auto& rows = members[order[slot]];
    if (which == 0) {
      results[task] = subset_dse(full_sq, rows, config, global_sigma, options.t);
      return;
    }
    // Streams keyed by the class's first member and the repeat index.
    Rng rng = derived_rng(options.seed, {0xd5e1, rows.front(), which});
    std::vector<std::size_t> sample = sample_without_replacement(rng, cloud.size(), rows.size());
    std::sort(sample.begin(), sample.end());
    results[task] = subset_dse(full_sq, sample, config, global_sigma, options.t);
  });

  MIReport r;
  r.method = "DSMI";
  r.n = cloud.size();
  r.dim = cloud.dim();
  r.t = options.t;
  r.sigma_policy = options.sigma_policy;
  r.sigma_explicit = config.sigma.has_value();
  r.sigma = config.sigma ? config.sigma : global_sigma;
  r.repeats = options.repeats;
  r.seed = options.seed;
  r.conditional_entropies.resize(classes);
  r.unconditional_entropies.resize(classes);
  r.class_sizes.resize(classes);
  r.sigmas.resize(classes);
  r.subsample_sizes.resize(classes);

  double value = 0.0;
  for (std::size_t slot = 0; slot < classes; ++slot) {
    const std::size_t c = order[slot];
    const SubsetEntropy* base = results.data() + slot * per_class;
    double unconditional = 0.0;
    for (std::size_t rep = 1; rep < per_class; ++rep) {
      unconditional += base[rep].value;
      r.subsample_sizes[c].push_back(base[rep].size);
    }
    unconditional /= static_cast<double>(options.repeats);
    r.conditional_entropies[c] = base[0].value;
    r.unconditional_entropies[c] = unconditional;
    r.class_sizes[c] = members[c].size();
    r.sigmas[c] = base[0].sigma;
    const double weight = static_cast<double>(members[c].size()) / static_cast<double>(cloud.size());
    value += weight * (unconditional - base[0].value);
  }
  r.value = value;
  if (value < kNegativeMiFloor) {
    std::ostringstream msg;
    msg << "DSMI " << value << " is below the sanity floor " << kNegativeMiFloor;
    r.warnings.push_back(msg.str());
  }
  return r;
}

namespace {

// Moves points into clusters with fewer than two members, taking the points
// nearest (in the clustered space) to the deficient cluster from clusters
// that can spare them.
std::vector<std::string> repair_small_clusters(const Matrix& points, Labels& ids, std::size_t k) {
  std::vector<std::string> warnings;
  const auto n = static_cast<std::size_t>(points.rows());
  std::vector<std::size_t> sizes(k, 0);
  for (int id : ids) ++sizes[static_cast<std::size_t>(id)];

  for (std::size_t c = 0; c < k; ++c) {
    if (sizes[c] >= 2) continue;
    std::ostringstream msg;
    msg << "cluster " << c << " had " << sizes[c] << " member(s); reassigned nearest points";
    warnings.push_back(msg.str());
    Eigen::RowVectorXd anchor;
    if (sizes[c] == 1) {
      const auto it = std::find(ids.begin(), ids.end(), static_cast<int>(c));
      anchor = points.row(static_cast<Eigen::Index>(it - ids.begin()));
    } else {
      // Empty: seed from the point farthest from the global centroid among
      // clusters that can spare one.
      const Eigen::RowVectorXd centroid = points.colwise().mean();
      double far = -1.0;
      std::size_t pick = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (sizes[static_cast<std::size_t>(ids[i])] <= 2) continue;
        const double d = (points.row(static_cast<Eigen::Index>(i)) - centroid).squaredNorm();
        if (d > far) {
          far = d;
          pick = i;
        }
      }
      anchor = points.row(static_cast<Eigen::Index>(pick));
    }
    while (sizes[c] < 2) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t pick = n;
      for (std::size_t i = 0; i < n; ++i) {
        const auto owner = static_cast<std::size_t>(ids[i]);
        if (owner == c || sizes[owner] <= 2) continue;
        const double d = (points.row(static_cast<Eigen::Index>(i)) - anchor).squaredNorm();
        if (d < best) {
          best = d;
          pick = i;
        }
      }
      if (pick == n) throw InvalidInput("cannot give every cluster two members");
      --sizes[static_cast<std::size_t>(ids[pick])];
      ids[pick] = static_cast<int>(c);
      ++sizes[c];
    }
  }
  return warnings;
}

}  // namespace

MIReport dsmi_with_input(const PointCloud& representation, const PointCloud& input,
                         std::size_t num_clusters, const KernelConfig& config,
                         const DsmiOptions& options) {
  representation.validate();
  input.validate();
  if (representation.size() != input.size()) {
    throw InvalidInput("representation has " + std::to_string(representation.size()) +
                       " rows but input has " + std::to_string(input.size()));
  }
  if (num_clusters < 2) throw InvalidInput("num_clusters must be at least 2");
  if (input.size() < 2 * num_clusters) {
    throw InvalidInput("need at least two points per cluster");
  }
  KernelConfig cluster_config = KernelConfig::median();
  cluster_config.max_points = config.max_points;
  ClusterAssignment assignment = spectral_cluster(input, num_clusters, options.seed, cluster_config);
  std::vector<std::string> warnings = repair_small_clusters(input.points, assignment.ids, num_clusters);

  PointCloud labeled(representation.points, assignment.ids);
  MIReport r = dsmi(labeled, config, options);
  r.labels_derived = true;
  r.warnings.insert(r.warnings.begin(), warnings.begin(), warnings.end());
  return r;
}

}  // namespace diffspec
