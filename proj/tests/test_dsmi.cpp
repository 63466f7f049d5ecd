#include <cmath>

#include <gtest/gtest.h>

#include "diffspec/dsmi.hpp"
#include "diffspec/error.hpp"
#include "diffspec/io.hpp"
#include "diffspec/rng.hpp"
#include "diffspec/spectrum.hpp"
#include "diffspec/synth.hpp"

using namespace diffspec;

namespace {

DsmiOptions options(double t, std::uint64_t seed = 0, std::size_t repeats = kDefaultRepeats) {
  DsmiOptions o;
  o.t = t;
  o.seed = seed;
  o.repeats = repeats;
  return o;
}

}  // namespace

TEST(Dsmi, SeparatedBlobsGiveLogK) {
  for (std::size_t k : {3, 5}) {
    const PointCloud c = synth::gen_blobs(300, k, k, 50.0, 1.0, k);
    const MIReport r = dsmi(c, KernelConfig::fixed(10.0), options(100.0));
    EXPECT_NEAR(r.value, std::log2(static_cast<double>(k)), 0.1) << k;
    EXPECT_TRUE(r.warnings.empty());
  }
}

TEST(Dsmi, RandomLabelsOnOneBlobGiveZero) {
  PointCloud c = synth::gen_blobs(300, 1, 3, 0.0, 1.0, 1);
  c.labels = synth::corrupt_labels(Labels(300, 0), 1.0, 3, 2);
  EXPECT_LT(std::abs(dsmi(c, {}, options(1.0)).value), 0.1);
}

TEST(Dsmi, ConditionalEntropyIsClassDse) {
  const PointCloud c = synth::gen_tree(200, 4, 5, 0.05, 3);
  const auto kc = KernelConfig::fixed(0.3);
  const MIReport r = dsmi(c, kc, options(2.0));
  const auto members = class_members(*c.labels, 4);
  for (std::size_t cls = 0; cls < 4; ++cls) {
    const double want = dse_of_cloud(c.subset(members[cls]), kc, 2.0).value;
    EXPECT_NEAR(r.conditional_entropies[cls], want, 1e-12);
  }
  double combined = 0.0;
  for (std::size_t cls = 0; cls < 4; ++cls) {
    combined += 50.0 / 200.0 * (r.unconditional_entropies[cls] - r.conditional_entropies[cls]);
  }
  EXPECT_NEAR(r.value, combined, 1e-12);
}

TEST(Dsmi, UnconditionalEntropyIsMeanOfMatchedSubsamples) {
  const PointCloud c = synth::gen_tree(120, 3, 4, 0.05, 4);
  const auto kc = KernelConfig::fixed(0.3);
  const MIReport r = dsmi(c, kc, options(1.0, 9, 3));
  for (std::size_t cls = 0; cls < 3; ++cls) {
    ASSERT_EQ(r.subsample_sizes[cls].size(), 3u);
    for (std::size_t s : r.subsample_sizes[cls]) EXPECT_EQ(s, r.class_sizes[cls]);
    // Each subsample entropy is bounded by log2 of its size.
    EXPECT_LE(r.unconditional_entropies[cls], std::log2(static_cast<double>(r.class_sizes[cls])) + 1e-12);
  }
}

TEST(Dsmi, GlobalPolicyReusesFullCloudMedian) {
  const PointCloud c = synth::gen_tree(150, 3, 5, 0.05, 5);
  const MIReport r = dsmi(c, {}, options(1.0));
  const double want = median_heuristic_sigma(pairwise_sq_dists(c.points));
  ASSERT_TRUE(r.sigma.has_value());
  EXPECT_EQ(*r.sigma, want);
  EXPECT_FALSE(r.sigma_explicit);
  for (double s : r.sigmas) EXPECT_EQ(s, want);
}

TEST(Dsmi, SubsetPolicyResolvesPerClass) {
  const PointCloud c = synth::gen_tree(150, 3, 5, 0.05, 5);
  DsmiOptions o = options(1.0);
  o.sigma_policy = SigmaPolicy::PerSubset;
  const MIReport r = dsmi(c, {}, o);
  EXPECT_FALSE(r.sigma.has_value());
  const auto members = class_members(*c.labels, 3);
  for (std::size_t cls = 0; cls < 3; ++cls) {
    const double want = median_heuristic_sigma(pairwise_sq_dists(c.subset(members[cls]).points));
    EXPECT_EQ(r.sigmas[cls], want);
  }
}

TEST(Dsmi, InvariantToLabelPermutation) {
  const PointCloud c = synth::gen_tree(200, 4, 5, 0.05, 6);
  PointCloud relabeled = c;
  const int map[] = {3, 1, 0, 2};
  for (int& l : *relabeled.labels) l = map[l];
  const double a = dsmi(c, {}, options(2.0, 4)).value;
  const double b = dsmi(relabeled, {}, options(2.0, 4)).value;
  EXPECT_NEAR(a, b, 1e-12);
}

TEST(Dsmi, ReportIsBitwiseDeterministic) {
  const PointCloud c = synth::gen_tree(150, 3, 5, 0.05, 7);
  const std::string a = io::mi_report_json(dsmi(c, {}, options(1.0, 17))).dump();
  const std::string b = io::mi_report_json(dsmi(c, {}, options(1.0, 17))).dump();
  EXPECT_EQ(a, b);
}

TEST(Dsmi, FewRepeatsStayClose) {
  const PointCloud c = synth::gen_tree(300, 5, 20, 0.05, 8);
  const double one = dsmi(c, {}, options(2.0, 0, 1)).value;
  const double five = dsmi(c, {}, options(2.0, 0, 5)).value;
  EXPECT_LE(std::abs(one - five), 0.15);
}

TEST(Dsmi, Errors) {
  const PointCloud unlabeled = synth::gen_manifold(20, 2, 3, {}, 1);
  EXPECT_THROW(dsmi(unlabeled, {}, options(1.0)), InvalidInput);
  PointCloud singleton = synth::gen_blobs(20, 2, 2, 5.0, 1.0, 1);
  (*singleton.labels)[0] = 2;
  EXPECT_THROW(dsmi(singleton, {}, options(1.0)), InvalidInput);
  const PointCloud ok = synth::gen_blobs(20, 2, 2, 5.0, 1.0, 1);
  EXPECT_THROW(dsmi(ok, {}, options(1.0, 0, 0)), InvalidInput);
  EXPECT_THROW(dsmi(ok, {}, options(0.0)), InvalidInput);
}

TEST(DsmiWithInput, ClustersOfSeparatedInputRecoverLogK) {
  const PointCloud c = synth::gen_blobs(300, 3, 3, 50.0, 1.0, 9);
  const MIReport r = dsmi_with_input(c, c, 3, KernelConfig::fixed(10.0), options(100.0));
  EXPECT_TRUE(r.labels_derived);
  EXPECT_NEAR(r.value, std::log2(3.0), 0.1);
}

TEST(DsmiWithInput, RepairsTinyClusters) {
  // One far outlier forms its own spectral cluster and must be topped up.
  PointCloud c = synth::gen_blobs(60, 1, 2, 0.0, 1.0, 10);
  c.points(0, 0) = 1e3;
  c.labels.reset();
  const MIReport r = dsmi_with_input(c, c, 2, {}, options(1.0));
  for (std::size_t s : r.class_sizes) EXPECT_GE(s, 2u);
  EXPECT_FALSE(r.warnings.empty());
}

TEST(DsmiWithInput, Errors) {
  const PointCloud a = synth::gen_blobs(30, 2, 2, 5.0, 1.0, 1);
  const PointCloud b = synth::gen_blobs(40, 2, 2, 5.0, 1.0, 1);
  EXPECT_THROW(dsmi_with_input(a, b, 2, {}, options(1.0)), InvalidInput);
  EXPECT_THROW(dsmi_with_input(a, a, 1, {}, options(1.0)), InvalidInput);
  EXPECT_THROW(dsmi_with_input(a, a, 16, {}, options(1.0)), InvalidInput);
}
