#include "diffspec/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <numeric>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "diffspec/ablation.hpp"
#include "diffspec/classic.hpp"
#include "diffspec/clustering.hpp"
#include "diffspec/dsmi.hpp"
#include "diffspec/error.hpp"
#include "diffspec/io.hpp"
#include "diffspec/kernel.hpp"
#include "diffspec/rng.hpp"
#include "diffspec/spectrum.hpp"
#include "diffspec/sweep.hpp"
#include "diffspec/synth.hpp"

namespace diffspec {
namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t sub_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
  Rng rng = derived_rng(seed, tags);
  return rng();
}

ClaimCheck claim(std::string id, std::string anchor) {
  ClaimCheck c;
  c.claim_id = std::move(id);
  c.anchor = std::move(anchor);
  return c;
}

std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ' ';
    out += num(values[i]);
  }
  return out;
}

double range_of(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

synth::ManifoldOptions manifold(synth::Distribution dist, double noise, bool rotate = true) {
  synth::ManifoldOptions o;
  o.dist = dist;
  o.noise_level = noise;
  o.rotate = rotate;
  return o;
}

Eigen::MatrixXd block_diagonal(const Eigen::MatrixXd& block, std::size_t copies) {
  const Eigen::Index m = block.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m * static_cast<Eigen::Index>(copies),
                                              m * static_cast<Eigen::Index>(copies));
  for (std::size_t c = 0; c < copies; ++c) {
    out.block(m * static_cast<Eigen::Index>(c), m * static_cast<Eigen::Index>(c), m, m) = block;
  }
  return out;
}

const std::vector<std::size_t> kIntrinsicDims{2, 4, 8, 16, 32};

// ---- claims ---------------------------------------------------------------

ClaimCheck blobs_logk(std::uint64_t seed) {
  ClaimCheck c = claim("blobs_logk", "k well-separated clusters give DSE near log2 k at large t; one blob gives 0");
  const auto kc = KernelConfig::fixed(10.0);
  const double three =
      dse_of_cloud(synth::gen_blobs(600, 3, 3, 50.0, 1.0, sub_seed(seed, {1, 3})), kc, 100.0).value;
  const double one =
      dse_of_cloud(synth::gen_blobs(600, 1, 3, 50.0, 1.0, sub_seed(seed, {1, 1})), kc, 100.0).value;
  c.measured = three;
  c.tolerance = 0.05;
  c.passed = std::abs(three - std::log2(3.0)) <= 0.05 && one < 0.1;
  c.detail = "3 blobs " + num(three) + " (target " + num(std::log2(3.0)) + "), 1 blob " + num(one) +
             " (< 0.1); n=600 sigma=10 t=100";
  return c;
}

ClaimCheck connected_zero(std::uint64_t seed) {
  ClaimCheck c = claim("connected_zero", "DSE of connected data tends to 0 as t grows");
  const PointCloud blob = synth::gen_blobs(600, 1, 3, 50.0, 1.0, sub_seed(seed, {2}));
  c.measured = dse_of_cloud(blob, KernelConfig::median(), 1e4).value;
  c.tolerance = 0.05;
  c.passed = c.measured < 0.05;
  c.detail = "single blob n=600, median sigma, t=1e4";
  return c;
}

ClaimCheck identity_logn(std::uint64_t) {
  ClaimCheck c = claim("identity_logn", "identity transition matrix gives DSE of exactly log2 n");
  double worst = 0.0;
  for (std::size_t n : {4, 500}) {
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                                               static_cast<Eigen::Index>(n));
    for (double t : {1.0, 100.0}) {
      const double v = dse(eigenvalues_symmetric(identity), t).value;
      worst = std::max(worst, std::abs(v - std::log2(static_cast<double>(n))));
    }
  }
  c.measured = worst;
  c.tolerance = 1e-9;
  c.passed = worst <= 1e-9;
  c.detail = "max |DSE - log2 n| over n in {4, 500}, t in {1, 100}";
  return c;
}

ClaimCheck dsmi_logk(std::uint64_t seed) {
  ClaimCheck c = claim("dsmi_logk", "DSMI of k well-separated labeled clusters equals log2 k");
  DsmiOptions o;
  o.t = 100.0;
  o.seed = seed;
  const auto kc = KernelConfig::fixed(10.0);
  const double three =
      dsmi(synth::gen_blobs(600, 3, 3, 50.0, 1.0, sub_seed(seed, {4, 3})), kc, o).value;
  const double five =
      dsmi(synth::gen_blobs(600, 5, 5, 50.0, 1.0, sub_seed(seed, {4, 5})), kc, o).value;
  const double err = std::max(std::abs(three - std::log2(3.0)), std::abs(five - std::log2(5.0)));
  c.measured = err;
  c.tolerance = 0.1;
  c.passed = err <= 0.1;
  c.detail = "k=3: " + num(three) + ", k=5: " + num(five) + "; n=600 sigma=10 t=100";
  return c;
}

ClaimCheck intrinsic_dim(std::uint64_t seed) {
  ClaimCheck c = claim("intrinsic_dim", "DSE increases with intrinsic dimension while CSE saturates at log2 n");
  constexpr std::size_t seeds = 5;
  std::vector<double> dims, values, means;
  double cse_err = 0.0;
  for (std::size_t d : kIntrinsicDims) {
    double total = 0.0;
    for (std::size_t s = 0; s < seeds; ++s) {
      const PointCloud cloud =
          synth::gen_manifold(500, d, 2048, manifold(synth::Distribution::Uniform, 0.0),
                              sub_seed(seed, {5, d, s}));
      const double v = dse_of_cloud(cloud, KernelConfig::median(), 1.0).value;
      dims.push_back(static_cast<double>(d));
      values.push_back(v);
      total += v;
      if (d >= 4) cse_err = std::max(cse_err, std::abs(cse(cloud).value - std::log2(500.0)));
    }
    means.push_back(total / seeds);
  }
  bool strictly = true;
  for (std::size_t i = 1; i < means.size(); ++i) strictly = strictly && means[i] > means[i - 1];
  const double rho = spearman(dims, values);
  c.measured = rho;
  c.tolerance = 0.9;
  c.passed = strictly && rho > 0.9 && cse_err <= 1e-6;
  c.detail = "mean DSE by d: " + join(means) + "; spearman " + num(rho) +
             "; max |CSE - log2 500| for d>=4: " + num(cse_err);
  return c;
}

ClaimCheck label_corruption(std::uint64_t seed) {
  ClaimCheck c = claim("label_corruption", "DSMI decays to zero under full label corruption and CSMI does not");
  const std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
  constexpr std::size_t seeds = 3;
  std::vector<double> dsmi_curve(grid.size(), 0.0), csmi_curve(grid.size(), 0.0);
  for (std::size_t s = 0; s < seeds; ++s) {
    const PointCloud tree = synth::gen_tree(500, 5, 20, 0.05, sub_seed(seed, {6, s}));
    for (std::size_t g = 0; g < grid.size(); ++g) {
      PointCloud cloud = tree;
      cloud.labels = synth::corrupt_labels(*tree.labels, grid[g], 5, sub_seed(seed, {6, s, g}));
      DsmiOptions o;
      o.t = 2.0;
      o.seed = sub_seed(seed, {6, s, g, 1});
      dsmi_curve[g] += dsmi(cloud, KernelConfig::median(), o).value / seeds;
      csmi_curve[g] += csmi(cloud).value / seeds;
    }
  }
  const bool dsmi_ok = decreases_to_zero(dsmi_curve, 0.05, 0.1);
  const bool csmi_ok = decreases_to_zero(csmi_curve, 0.05, 0.1);
  c.measured = dsmi_curve.back();
  c.tolerance = 0.1;
  c.passed = dsmi_ok && !csmi_ok;
  c.detail = "DSMI " + join(dsmi_curve) + "; CSMI " + join(csmi_curve) +
             "; tree n=500 5 branches d=20 noise 0.05 t=2";
  return c;
}

ClaimCheck expected_bound(std::uint64_t seed) {
  ClaimCheck c = claim("expected_bound", "mean DSE of Gaussian data stays below the kernel-moment bound");
  constexpr std::size_t n = 200, draws = 20;
  double worst = -std::numeric_limits<double>::infinity();
  std::string detail;
  for (std::size_t d : {50, 200}) {
    const double sigma = static_cast<double>(d);
    double total = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
      const PointCloud cloud = synth::gen_manifold(
          n, d, d, manifold(synth::Distribution::Gaussian, 0.0, false), sub_seed(seed, {7, d, i}));
      total += dse_of_cloud(cloud, KernelConfig::fixed(sigma), 1.0).value;
    }
    const double mean = total / draws;
    const double bound = dse_upper_bound(n, d, sigma);
    worst = std::max(worst, mean - bound);
    detail += "d=" + std::to_string(d) + ": mean " + num(mean) + " bound " + num(bound) + "; ";
  }
  c.measured = worst;
  c.tolerance = 0.1;
  c.passed = worst <= 0.1;
  c.detail = detail + "measured is max(mean - bound)";
  return c;
}

ClaimCheck block_additivity(std::uint64_t seed) {
  ClaimCheck c = claim("block_additivity", "k identical diagonal blocks add exactly log2 k bits");
  const PointCloud cloud = synth::gen_manifold(
      40, 2, 3, manifold(synth::Distribution::Uniform, 0.1), sub_seed(seed, {8}));
  const Eigen::MatrixXd block = build_kernel(cloud.points, KernelConfig::median()).symmetric;
  const Spectrum single = eigenvalues_symmetric(block);
  double worst = 0.0;
  for (std::size_t k : {2, 3, 5}) {
    const Spectrum joined = eigenvalues_symmetric(block_diagonal(block, k));
    for (double t : {1.0, 10.0}) {
      const double gap = dse(joined, t).value - dse(single, t).value;
      worst = std::max(worst, std::abs(gap - std::log2(static_cast<double>(k))));
    }
  }
  c.measured = worst;
  c.tolerance = 1e-9;
  c.passed = worst <= 1e-9;
  c.detail = "40-point block, k in {2,3,5}, t in {1,10}";
  return c;
}

ClaimCheck cse_saturation(std::uint64_t seed) {
  ClaimCheck c = claim("cse_saturation", "CSE of n generic high-dimensional points equals log2 n");
  const PointCloud cloud = synth::gen_manifold(
      10000, 64, 64, manifold(synth::Distribution::Gaussian, 0.0, false), sub_seed(seed, {9}));
  c.measured = cse(cloud, {2}).value;
  c.tolerance = 1e-6;
  c.passed = std::abs(c.measured - std::log2(10000.0)) <= 1e-6;
  c.detail = "10000 Gaussian points in 64 dims, 2 bins per dim, target " + num(std::log2(10000.0));
  return c;
}

ClaimCheck runtime_scaling(std::uint64_t seed) {
  ClaimCheck c = claim("runtime_scaling", "DSMI cost grows linearly in the ambient dimension");
  SweepConfig sweep;
  sweep.family = "blobs";
  sweep.vary = "D";
  sweep.grid = {256, 512, 1024, 2048, 4096};
  sweep.methods = {"dsmi"};
  sweep.seeds = {sub_seed(seed, {10, 0}), sub_seed(seed, {10, 1}), sub_seed(seed, {10, 2})};
  sweep.numeric = {{"n", 1000}, {"k", 20}};
  const auto rows = run_sweep(sweep);
  std::vector<double> log_d, log_ms;
  for (double g : sweep.grid) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : rows) {
      if (r.grid_value == g) best = std::min(best, r.runtime_ms);
    }
    log_d.push_back(std::log(g));
    log_ms.push_back(std::log(best));
  }
  const LinearFit fit = least_squares(log_d, log_ms);

  const PointCloud big = synth::gen_manifold(
      1000, 16, 4096, manifold(synth::Distribution::Gaussian, 0.0), sub_seed(seed, {10, 9}));
  const auto start = Clock::now();
  dse_of_cloud(big, KernelConfig::median(), 1.0);
  const double dse_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();

  c.measured = fit.slope;
  c.tolerance = 0.3;
  c.passed = std::abs(fit.slope - 1.0) <= 0.3 && fit.r_squared > 0.9 && dse_ms < 60000.0;
  c.detail = "DSMI n=1000 k=20, D 256..4096: slope " + num(fit.slope) + " R2 " + num(fit.r_squared) +
             "; DSE n=1000 D=4096 took " + num(dse_ms) + " ms";
  return c;
}

ClaimCheck subsample_robustness(std::uint64_t seed) {
  ClaimCheck c = claim("subsample_robustness", "DSE is stable under 10% subsampling");
  constexpr std::size_t n = 2000, m = 200, seeds = 5;
  double worst = 0.0;
  std::size_t eligible = 0;
  std::vector<double> deltas;
  for (std::size_t s = 0; s < seeds; ++s) {
    const PointCloud tree = synth::gen_tree(n, 5, 20, 0.05, sub_seed(seed, {11, s}));
    const double full = dse_of_cloud(tree, KernelConfig::median(), 2.0).value;
    if (!(std::log2(static_cast<double>(m)) > full)) continue;
    ++eligible;
    Rng rng = derived_rng(seed, {11, s, 1});
    auto rows = sample_without_replacement(rng, n, m);
    std::sort(rows.begin(), rows.end());
    const double part = dse_of_cloud(tree.subset(rows), KernelConfig::median(), 2.0).value;
    deltas.push_back(part - full);
    worst = std::max(worst, std::abs(part - full));
  }
  c.measured = worst;
  c.tolerance = 0.3;
  c.passed = eligible > 0 && worst <= 0.3;
  c.detail = std::to_string(eligible) + " of 5 seeds eligible; deltas " + join(deltas) +
             "; tree n=2000 noise 0.05 t=2";
  return c;
}

ClaimCheck ablation_variants(std::uint64_t seed) {
  ClaimCheck c = claim("ablation_variants", "DMEE falls with intrinsic dimension; the Gaussian-adjacency variant stays flat under noise "
               "while DSE keeps the ordering");
  constexpr std::size_t seeds = 3;
  std::vector<double> dims, dmee, gauss, dse100;
  for (std::size_t d : kIntrinsicDims) {
    for (std::size_t s = 0; s < seeds; ++s) {
      const PointCloud clean = synth::gen_manifold(
          500, d, 2048, manifold(synth::Distribution::Uniform, 0.0), sub_seed(seed, {12, d, s}));
      dmee.push_back(diffusion_entry_entropy(build_kernel(clean.points, KernelConfig::fixed(10.0))));

      const PointCloud noisy = synth::gen_manifold(
          500, d, 2048, manifold(synth::Distribution::Uniform, 0.5), sub_seed(seed, {12, d, s, 1}));
      const KernelMatrices km = build_kernel(noisy.points, KernelConfig::fixed(0.2));
      gauss.push_back(unclamped_spectral_entropy(km.gaussian, 1.0));
      dse100.push_back(dse(eigenvalues_symmetric(km.symmetric), 100.0).value);
      dims.push_back(static_cast<double>(d));
    }
  }
  const double rho_dmee = spearman(dims, dmee);
  const double rho_dse = spearman(dims, dse100);
  const bool flat = range_of(gauss) <= 0.1 * range_of(dse100);
  c.measured = rho_dmee;
  c.tolerance = 0.8;
  c.passed = rho_dmee < -0.8 && flat && rho_dse > 0.8;
  c.detail = "DMEE spearman " + num(rho_dmee) + " (sigma=10); 50% noise, sigma=0.2: Gaussian range " +
             num(range_of(gauss)) + " vs DSE(t=100) range " + num(range_of(dse100)) +
             ", DSE spearman " + num(rho_dse);
  return c;
}

ClaimCheck property_suite(const HarnessOptions& options, const std::vector<ClaimCheck>& earlier) {
  ClaimCheck c = claim("property_suite", "module invariants hold under three seeds");
  std::vector<PropertyCheck> props = builtin_properties();
  props.insert(props.end(), options.extra_properties.begin(), options.extra_properties.end());
  std::size_t runs = 0;
  std::vector<std::string> failures;
  for (const auto& p : props) {
    for (std::uint64_t s = options.seed; s < options.seed + 3; ++s) {
      ++runs;
      std::string why;
      try {
        why = p.run(s);
      } catch (const std::exception& e) {
        why = std::string("threw: ") + e.what();
      }
      if (!why.empty()) failures.push_back(p.name + " [seed " + std::to_string(s) + "]: " + why);
    }
  }
  // The subsampling invariant is the subsample claim itself (five seeds).
  for (const auto& e : earlier) {
    if (e.claim_id == "subsample_robustness") {
      ++runs;
      if (!e.passed) failures.push_back("dsmi.subsample_robustness: " + e.detail);
    }
  }
  c.measured = static_cast<double>(failures.size());
  c.tolerance = 0.0;
  c.passed = failures.empty();
  if (failures.empty()) {
    c.detail = std::to_string(runs) + " checks passed";
  } else {
    for (std::size_t i = 0; i < failures.size(); ++i) c.detail += (i ? " | " : "") + failures[i];
  }
  return c;
}

using ClaimFn = ClaimCheck (*)(std::uint64_t);

const std::vector<ClaimFn>& claim_functions() {
  static const std::vector<ClaimFn> fns{
      blobs_logk,     connected_zero,  identity_logn,         dsmi_logk,
      intrinsic_dim,  label_corruption, expected_bound,       block_additivity,
      cse_saturation, runtime_scaling, subsample_robustness, ablation_variants,
  };
  return fns;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

// ---- property helpers -------------------------------------------------------

PointCloud small_cloud(std::uint64_t seed, std::size_t n = 60) {
  return synth::gen_manifold(n, 3, 6, manifold(synth::Distribution::Gaussian, 0.2), seed);
}

std::vector<std::size_t> random_permutation(std::size_t n, std::uint64_t seed) {
  Rng rng = derived_rng(seed, {0x9e37});
  return sample_without_replacement(rng, n, n);
}

bool same_bits(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

bool same_cloud(const PointCloud& a, const PointCloud& b) {
  return same_bits(a.points, b.points) && a.labels == b.labels;
}

std::string check_sizes_balanced(const Labels& labels, int k) {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
  for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
  const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
  if (*hi - *lo > 1) return "class sizes differ by " + std::to_string(*hi - *lo);
  return "";
}

}  // namespace

// ---- statistics -------------------------------------------------------------

namespace {
std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}
}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidInput("spearman needs two equal series of length >= 2");
  return pearson(average_ranks(x), average_ranks(y));
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidInput("least_squares needs two equal series of length >= 2");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidInput("least_squares: x is constant");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

bool decreases_to_zero(std::span<const double> curve, double jitter, double endpoint_tol) {
  if (curve.empty()) return false;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (curve[i] > curve[i - 1] + jitter) return false;
  }
  return std::abs(curve.back()) <= endpoint_tol;
}

// ---- properties -------------------------------------------------------------

std::vector<PropertyCheck> builtin_properties() {
  std::vector<PropertyCheck> p;

  p.push_back({"kernel.eigenvalue_range", [](std::uint64_t seed) -> std::string {
                 for (std::size_t which = 0; which < 3; ++which) {
                   const PointCloud cloud =
                       which == 0 ? small_cloud(seed)
                                  : synth::gen_blobs(80, 2 + which, 4, 6.0, 1.0, sub_seed(seed, {which}));
                   const Spectrum s = eigenvalues_symmetric(build_kernel(cloud.points, {}).symmetric);
                   for (double l : s.eigenvalues) {
                     if (l < 0.0 || l > 1.0 + kEigenClamp) return "eigenvalue " + num(l) + " out of range";
                   }
                   if (std::abs(s.eigenvalues.front() - 1.0) > 1e-8) {
                     return "top eigenvalue " + num(s.eigenvalues.front());
                   }
                 }
                 return "";
               }});

  p.push_back({"kernel.similar_to_markov_matrix", [](std::uint64_t seed) -> std::string {
                 const PointCloud cloud = small_cloud(seed, 20);
                 const KernelMatrices km = build_kernel(cloud.points, {});
                 Eigen::EigenSolver<Eigen::MatrixXd> solver(km.diffusion_operator(), false);
                 std::vector<double> general;
                 for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
                   if (std::abs(solver.eigenvalues()[i].imag()) > 1e-8) return "complex eigenvalue of P";
                   general.push_back(solver.eigenvalues()[i].real());
                 }
                 std::sort(general.rbegin(), general.rend());
                 const Spectrum s = eigenvalues_symmetric(km.symmetric);
                 for (std::size_t i = 0; i < general.size(); ++i) {
                   if (std::abs(general[i] - s.eigenvalues[i]) > 1e-8) {
                     return "eigenvalue " + std::to_string(i) + " differs: " + num(general[i]) + " vs " +
                            num(s.eigenvalues[i]);
                   }
                 }
                 return "";
               }});

  p.push_back({"kernel.permutation_equivariance", [](std::uint64_t seed) -> std::string {
                 const PointCloud cloud = small_cloud(seed);
                 const auto perm = random_permutation(cloud.size(), seed);
                 const KernelMatrices a = build_kernel(cloud.points, {});
                 const KernelMatrices b = build_kernel(cloud.subset(perm).points, {});
                 for (std::size_t i = 0; i < perm.size(); ++i) {
                   for (std::size_t j = 0; j < perm.size(); ++j) {
                     const auto pi = static_cast<Eigen::Index>(perm[i]);
                     const auto pj = static_cast<Eigen::Index>(perm[j]);
                     const auto ii = static_cast<Eigen::Index>(i);
                     const auto jj = static_cast<Eigen::Index>(j);
                     if (std::abs(a.symmetric(pi, pj) - b.symmetric(ii, jj)) > 1e-12 ||
                         std::abs(a.gaussian(pi, pj) - b.gaussian(ii, jj)) > 1e-12) {
                       return "matrices are not permuted copies";
                     }
                   }
                 }
                 const Spectrum sa = eigenvalues_symmetric(a.symmetric);
                 const Spectrum sb = eigenvalues_symmetric(b.symmetric);
                 for (std::size_t i = 0; i < sa.size(); ++i) {
                   if (std::abs(sa.eigenvalues[i] - sb.eigenvalues[i]) > 1e-10) return "spectra differ";
                 }
                 return "";
               }});

  p.push_back({"spectrum.nonincreasing_in_t", [](std::uint64_t seed) -> std::string {
                 Rng rng = derived_rng(seed, {0x51});
                 std::uniform_real_distribution<double> unit(0.0, 1.0);
                 for (int trial = 0; trial < 20; ++trial) {
                   std::vector<double> eig(50);
                   eig[0] = 1.0;
                   for (std::size_t i = 1; i < eig.size(); ++i) eig[i] = unit(rng);
                   double prev = std::numeric_limits<double>::infinity();
                   for (double t : {0.5, 1.0, 2.0, 5.0, 10.0, 49.0, 51.0, 100.0, 1000.0}) {
                     const double v = spectral_entropy_bits(eig, t);
                     if (v > prev + 1e-12) return "entropy rose at t=" + num(t);
                     prev = v;
                   }
                 }
                 return "";
               }});

  p.push_back({"spectrum.scale_invariance", [](std::uint64_t seed) -> std::string {
                 const PointCloud cloud = small_cloud(seed);
                 const double scale = 3.7;
                 PointCloud scaled = cloud;
                 scaled.points *= scale;
                 const double sigma = 2.5;
                 for (double t : {1.0, 10.0}) {
                   const double a = dse_of_cloud(cloud, KernelConfig::fixed(sigma), t).value;
                   const double b = dse_of_cloud(scaled, KernelConfig::fixed(sigma * scale * scale), t).value;
                   if (std::abs(a - b) > 1e-10) return "DSE changed by " + num(a - b);
                 }
                 return "";
               }});

  p.push_back({"spectrum.block_additivity", [](std::uint64_t seed) -> std::string {
                 const ClaimCheck c = block_additivity(seed);
                 return c.passed ? "" : c.detail + ", error " + num(c.measured);
               }});

  p.push_back({"spectrum.expected_bound", [](std::uint64_t seed) -> std::string {
                 const ClaimCheck c = expected_bound(seed);
                 return c.passed ? "" : c.detail;
               }});

  p.push_back({"spectrum.telescoping", [](std::uint64_t seed) -> std::string {
                 for (std::size_t which = 0; which < 3; ++which) {
                   const PointCloud cloud = small_cloud(sub_seed(seed, {which}), 40);
                   const Spectrum s = eigenvalues_symmetric(build_kernel(cloud.points, {}).symmetric);
                   const double full = dse(s, 1.0).value;
                   double prev = std::numeric_limits<double>::infinity();
                   for (std::size_t m = 2; m <= s.size(); ++m) {
                     const double phi = telescoping_entropy(s.eigenvalues, m);
                     if (phi > prev + 1e-12) return "chain rose at m=" + std::to_string(m);
                     if (phi < full - 1e-12) return "phi_" + std::to_string(m) + " below DSE";
                     prev = phi;
                   }
                 }
                 return "";
               }});

  p.push_back({"dsmi.label_permutation", [](std::uint64_t seed) -> std::string {
                 const PointCloud tree = synth::gen_tree(200, 4, 5, 0.05, seed);
                 PointCloud relabeled = tree;
                 const std::vector<int> map{2, 0, 3, 1};
                 for (int& l : *relabeled.labels) l = map[static_cast<std::size_t>(l)];
                 DsmiOptions o;
                 o.seed = seed;
                 const double a = dsmi(tree, {}, o).value;
                 const double b = dsmi(relabeled, {}, o).value;
                 return std::abs(a - b) <= 1e-12 ? "" : "DSMI changed by " + num(a - b);
               }});

  p.push_back({"dsmi.deterministic_report", [](std::uint64_t seed) -> std::string {
                 const PointCloud tree = synth::gen_tree(150, 3, 5, 0.05, seed);
                 DsmiOptions o;
                 o.seed = seed;
                 const std::string a = io::mi_report_json(dsmi(tree, {}, o)).dump();
                 const std::string b = io::mi_report_json(dsmi(tree, {}, o)).dump();
                 const std::string c = io::entropy_report_json(dse_of_cloud(tree, {}, 1.0), seed).dump();
                 const std::string d = io::entropy_report_json(dse_of_cloud(tree, {}, 1.0), seed).dump();
                 return a == b && c == d ? "" : "reports differ between identical runs";
               }});

  p.push_back({"dsmi.matched_subsample_sizes", [](std::uint64_t seed) -> std::string {
                 const PointCloud tree = synth::gen_tree(157, 4, 5, 0.05, seed);
                 DsmiOptions o;
                 o.seed = seed;
                 o.repeats = 3;
                 const MIReport r = dsmi(tree, {}, o);
                 for (std::size_t c = 0; c < r.class_sizes.size(); ++c) {
                   if (r.subsample_sizes[c].size() != o.repeats) return "wrong repeat count";
                   for (std::size_t s : r.subsample_sizes[c]) {
                     if (s != r.class_sizes[c]) return "subsample of " + std::to_string(s) + " for class of " +
                                                       std::to_string(r.class_sizes[c]);
                   }
                 }
                 return "";
               }});

  p.push_back({"classic.cse_bound", [](std::uint64_t seed) -> std::string {
                 for (std::size_t D : {1, 2, 3, 8}) {
                   for (std::size_t bins : {2, 3, 10}) {
                     const PointCloud cloud = synth::gen_manifold(
                         100, D, D, manifold(synth::Distribution::Gaussian, 0.0, false), sub_seed(seed, {D, bins}));
                     const double cap = std::min(std::log2(100.0), static_cast<double>(D) * std::log2(static_cast<double>(bins)));
                     const double v = cse(cloud, {bins}).value;
                     if (v > cap + 1e-12) return "CSE " + num(v) + " above " + num(cap);
                   }
                 }
                 return "";
               }});

  p.push_back({"classic.affine_invariance", [](std::uint64_t seed) -> std::string {
                 const PointCloud cloud = small_cloud(seed, 200);
                 PointCloud mapped = cloud;
                 Rng rng = derived_rng(seed, {0xaf});
                 std::uniform_real_distribution<double> scale(0.1, 10.0), shift(-5.0, 5.0);
                 for (Eigen::Index j = 0; j < mapped.points.cols(); ++j) {
                   const double a = scale(rng), b = shift(rng);
                   mapped.points.col(j) = (mapped.points.col(j).array() * a + b).matrix();
                 }
                 for (std::size_t bins : {2, 4}) {
                   const double x = cse(cloud, {bins}).value, y = cse(mapped, {bins}).value;
                   if (std::abs(x - y) > 1e-12) return "CSE changed by " + num(x - y);
                 }
                 return "";
               }});

  p.push_back({"classic.histogram_oracle", [](std::uint64_t seed) -> std::string {
                 Rng rng = derived_rng(seed, {0xb1});
                 std::normal_distribution<double> normal;
                 PointCloud cloud;
                 cloud.points.resize(300, 1);
                 for (Eigen::Index i = 0; i < 300; ++i) cloud.points(i, 0) = normal(rng);
                 const double lo = cloud.points.minCoeff(), hi = cloud.points.maxCoeff();
                 for (std::size_t bins : {2, 5, 7}) {
                   std::vector<double> counts(bins, 0.0);
                   const double width = (hi - lo) / static_cast<double>(bins);
                   for (Eigen::Index i = 0; i < 300; ++i) {
                     std::size_t b = 0;
                     while (b + 1 < bins && cloud.points(i, 0) >= lo + width * static_cast<double>(b + 1)) ++b;
                     counts[b] += 1.0;
                   }
                   double h = 0.0;
                   for (double c : counts) {
                     if (c > 0.0) h -= c / 300.0 * std::log2(c / 300.0);
                   }
                   const double v = cse(cloud, {bins}).value;
                   if (std::abs(v - h) > 1e-12) return "histogram " + num(h) + " vs CSE " + num(v);
                 }
                 return "";
               }});

  p.push_back({"clustering.deterministic_and_equivariant", [](std::uint64_t seed) -> std::string {
                 const PointCloud blobs = synth::gen_blobs(90, 3, 3, 8.0, 1.0, seed);
                 const auto a = spectral_cluster(blobs, 3, seed);
                 const auto b = spectral_cluster(blobs, 3, seed);
                 if (a.ids != b.ids) return "assignments differ between identical runs";
                 const auto perm = random_permutation(blobs.size(), seed);
                 const auto c = spectral_cluster(blobs.subset(perm), 3, seed);
                 Labels back(blobs.size());
                 for (std::size_t i = 0; i < perm.size(); ++i) back[perm[i]] = c.ids[i];
                 const double ari = adjusted_rand_index(a.ids, back);
                 return ari == 1.0 ? "" : "ARI after reordering " + num(ari);
               }});

  p.push_back({"clustering.kmeans_inertia_decreases", [](std::uint64_t seed) -> std::string {
                 const PointCloud cloud = synth::gen_blobs(300, 5, 4, 3.0, 1.0, seed);
                 const KMeansOptions opts;
                 const auto r = kmeans(cloud.points, 5, seed, opts);
                 const auto& tr = r.inertia_trace;
                 if (tr.empty() || tr.size() > opts.max_iterations) return "iteration count " + std::to_string(tr.size());
                 for (std::size_t i = 1; i < tr.size(); ++i) {
                   const bool last = i + 1 == tr.size();
                   if (last ? tr[i] > tr[i - 1] : !(tr[i] < tr[i - 1])) {
                     return "inertia did not decrease at iteration " + std::to_string(i);
                   }
                 }
                 if (tr.size() < opts.max_iterations && tr.size() >= 2) {
                   const double prev = tr[tr.size() - 2], last = tr.back();
                   if (prev - last > opts.relative_tolerance * prev) return "stopped before converging";
                 }
                 return "";
               }});

  p.push_back({"synth.reproducible", [](std::uint64_t seed) -> std::string {
                 synth::ManifoldOptions gm = manifold(synth::Distribution::Gaussian, 0.3);
                 if (!same_cloud(synth::gen_blobs(101, 3, 4, 5.0, 1.0, seed), synth::gen_blobs(101, 3, 4, 5.0, 1.0, seed)) ||
                     !same_cloud(synth::gen_tree(103, 4, 6, 0.1, seed), synth::gen_tree(103, 4, 6, 0.1, seed)) ||
                     !same_cloud(synth::gen_manifold(50, 3, 9, gm, seed), synth::gen_manifold(50, 3, 9, gm, seed))) {
                   return "generator output differs between identical calls";
                 }
                 const Labels base(100, 1);
                 if (synth::corrupt_labels(base, 0.5, 4, seed) != synth::corrupt_labels(base, 0.5, 4, seed)) {
                   return "corrupt_labels differs between identical calls";
                 }
                 const Eigen::MatrixXd m1 = synth::gen_psd_identity_mix(30, 0.4, seed);
                 const Eigen::MatrixXd m2 = synth::gen_psd_identity_mix(30, 0.4, seed);
                 if (std::memcmp(m1.data(), m2.data(), sizeof(double) * 900) != 0) return "psd mix differs";
                 return "";
               }});

  p.push_back({"synth.label_balance", [](std::uint64_t seed) -> std::string {
                 for (std::size_t n : {100, 101, 103}) {
                   if (auto why = check_sizes_balanced(*synth::gen_blobs(n, 3, 4, 5.0, 1.0, seed).labels, 3);
                       !why.empty()) {
                     return "blobs: " + why;
                   }
                   if (auto why = check_sizes_balanced(*synth::gen_tree(n, 4, 6, 0.1, seed).labels, 4); !why.empty()) {
                     return "tree: " + why;
                   }
                 }
                 return "";
               }});

  return p;
}

// ---- driver -----------------------------------------------------------------

std::vector<std::string> claim_ids() {
  return {"blobs_logk",      "connected_zero",  "identity_logn",       "dsmi_logk",
          "intrinsic_dim",   "label_corruption", "expected_bound",     "block_additivity",
          "cse_saturation",  "runtime_scaling", "subsample_robustness", "ablation_variants",
          "property_suite"};
}

std::vector<ClaimCheck> run_all_claims(const HarnessOptions& options) {
  std::vector<ClaimCheck> out;
  auto timed = [&](auto&& fn) {
    const auto start = Clock::now();
    ClaimCheck c;
    try {
      c = fn();
    } catch (const std::exception& e) {
      c.passed = false;
      c.detail = std::string("error: ") + e.what();
    }
    c.runtime_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return c;
  };
  const auto ids = claim_ids();
  const auto& fns = claim_functions();
  for (std::size_t i = 0; i < fns.size(); ++i) {
    ClaimCheck c = timed([&] { return fns[i](options.seed); });
    if (c.claim_id.empty()) c.claim_id = ids[i];
    out.push_back(c);
    if (options.on_claim) options.on_claim(out.back());
  }
  ClaimCheck props = timed([&] { return property_suite(options, out); });
  if (props.claim_id.empty()) props.claim_id = ids.back();
  out.push_back(props);
  if (options.on_claim) options.on_claim(out.back());
  return out;
}

std::vector<ClaimCheck> run_all_claims(std::uint64_t seed) {
  HarnessOptions options;
  options.seed = seed;
  return run_all_claims(options);
}

void write_claims_csv(std::ostream& out, const std::vector<ClaimCheck>& claims) {
  out << "claim_id,anchor,measured,tolerance,pass,ms\n";
  for (const auto& c : claims) {
    out << c.claim_id << ',' << csv_field(c.anchor) << ',' << io::format_double(c.measured) << ','
        << io::format_double(c.tolerance) << ',' << (c.passed ? "true" : "false") << ','
        << io::format_double(std::round(c.runtime_ms)) << '\n';
  }
}

}  // namespace diffspec
