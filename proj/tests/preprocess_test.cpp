#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mbgdt/error.hpp"
#include "mbgdt/preprocess.hpp"
#include "oracles.hpp"
#include "properties.hpp"

namespace mbgdt {
namespace {

KernelConfig square_kernels(double width, double stride, double threshold, bool strict = false) {
  KernelConfig c;
  c.kernel_width_x = c.kernel_width_y = width;
  c.stride_x = c.stride_y = stride;
  c.threshold_fraction = threshold;
  c.strict_mode = strict;
  return c;
}

Dataset five_and_one() {
  return Dataset({{0.0, 0.0}, {0.01, 0.0}, {0.0, 0.01}, {0.01, 0.01}, {0.005, 0.005}, {1.0, 1.0}});
}

TEST(KernelPreprocess, CombinesDenseKernel) {
  const Dataset d = five_and_one();
  const KernelConfig cfg = square_kernels(0.1, 0.05, 0.5);
  const Dataset out = kernel_preprocess(d, cfg);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0], (Sample{1.0, 1.0}));
  EXPECT_NEAR(out[1].x, 0.005, 1e-15);
  EXPECT_NEAR(out[1].y, 0.005, 1e-15);

  const auto ref = oracle::kernel_reference(
      std::vector<Sample>(d.samples().begin(), d.samples().end()), 0.1, 0.1, 0.05, 0.05, 0.5, false);
  ASSERT_EQ(ref.samples.size(), 2u);
  EXPECT_EQ(ref.samples[0], out[0]);
  EXPECT_EQ(ref.samples[1], out[1]);
}

TEST(KernelPreprocess, StrictModeKeepsOnlyCombined) {
  const Dataset out = kernel_preprocess(five_and_one(), square_kernels(0.1, 0.05, 0.5, true));
  ASSERT_EQ(out.size(), 1u);
  EXPECT_NEAR(out[0].x, 0.005, 1e-15);
}

TEST(KernelPreprocess, UnreachableThresholdIsIdentity) {
  const Dataset d = five_and_one();
  EXPECT_EQ(kernel_preprocess(d, square_kernels(0.1, 0.05, 1.0)), d);
  EXPECT_EQ(kernel_preprocess(d, square_kernels(5.0, 5.0, 1.0)), d);
}

TEST(KernelPreprocess, EmptyInEmptyOut) {
  EXPECT_TRUE(kernel_preprocess(Dataset(), square_kernels(0.1, 0.05, 0.1)).empty());
}

TEST(KernelPreprocess, ThresholdIsStrict) {
  // 4 of 8 samples share a kernel: 4 > 0.5 * 8 is false.
  Dataset d({{0, 0}, {0, 0}, {0, 0}, {0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}});
  EXPECT_EQ(kernel_preprocess(d, square_kernels(0.5, 0.5, 0.5)), d);
  d.add({0, 0});
  EXPECT_EQ(kernel_preprocess(d, square_kernels(0.5, 0.5, 0.5)).size(), 5u);
}

TEST(KernelPreprocess, CombinedSampleCarriesContamination) {
  Dataset d;
  for (int i = 0; i < 5; ++i) d.add({0.001 * i, 0.0}, i == 2);
  d.add({1.0, 1.0}, false);
  const Dataset out = kernel_preprocess(d, square_kernels(0.1, 0.05, 0.5));
  ASSERT_EQ(out.size(), 2u);
  EXPECT_FALSE(out.is_contaminated(0));
  EXPECT_TRUE(out.is_contaminated(1));
}

TEST(KernelPreprocess, EachSampleJoinsOneKernel) {
  // Overlapping kernels: every sample is in several, but is averaged once.
  Dataset d;
  for (int i = 0; i < 30; ++i) d.add({0.01 * i, 0.01 * (i % 3)});
  const Dataset out = kernel_preprocess(d, square_kernels(0.1, 0.02, 0.05, true));
  double total_x = 0.0;
  for (const Sample& s : d.samples()) total_x += s.x;
  // In strict mode the combined means, weighted by group sizes, recover the
  // total; check the weaker size bound plus agreement with the oracle.
  EXPECT_LE(out.size(), d.size());
  const auto ref = oracle::kernel_reference(std::vector<Sample>(d.samples().begin(), d.samples().end()),
                                            0.1, 0.1, 0.02, 0.02, 0.05, true);
  std::size_t assigned = 0;
  double weighted = 0.0;
  for (std::size_t g = 0; g < ref.groups.size(); ++g) {
    assigned += ref.groups[g].size();
    weighted += ref.samples[g].x * static_cast<double>(ref.groups[g].size());
  }
  EXPECT_EQ(assigned, d.size());
  EXPECT_NEAR(weighted, total_x, 1e-12);
  ASSERT_EQ(ref.samples.size(), out.size());
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(ref.samples[i], out[i]);
}

TEST(KernelPreprocess, RejectsBadConfig) {
  const Dataset d = five_and_one();
  EXPECT_THROW(kernel_preprocess(d, square_kernels(0.1, 0.2, 0.5)), InvalidInput);
  EXPECT_THROW(kernel_preprocess(d, square_kernels(0.0, 0.0, 0.5)), InvalidInput);
  EXPECT_THROW(kernel_preprocess(d, square_kernels(0.1, 0.05, 0.0)), InvalidInput);
  EXPECT_THROW(kernel_preprocess(d, square_kernels(0.1, 0.05, 1.5)), InvalidInput);
}

TEST(KernelPreprocess, AgreesWithEnumeration) {
  const auto r = props::kernel_equivalence(40, 17);
  EXPECT_TRUE(r.ok()) << r.first_failure;
}

TEST(KernelConfigFor, ScalesWithDataRange) {
  const Dataset d({{0, 0}, {10, 2}});
  const KernelConfig c = kernel_config_for(d, 0.1, 0.1, 0.5, 0.2, true);
  EXPECT_DOUBLE_EQ(c.kernel_width_x, 1.0);
  EXPECT_DOUBLE_EQ(c.kernel_width_y, 0.2);
  EXPECT_DOUBLE_EQ(c.stride_x, 0.5);
  EXPECT_DOUBLE_EQ(c.stride_y, 0.1);
  EXPECT_EQ(c.threshold_fraction, 0.2);
  EXPECT_TRUE(c.strict_mode);
}

TEST(RegionQuery, HandDistanceCheck) {
  const Dataset d({{0.0, 0.0}, {0.1, 0.0}, {0.9, 0.0}});
  EXPECT_EQ(region_query(d, 1, 0.15), (std::vector<std::size_t>{0, 1}));
}

TEST(RegionQuery, DiameterBound) {
  std::mt19937_64 rng(1);
  const Dataset d(props::mixed_cloud(rng, 50));
  std::vector<std::size_t> all(d.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  EXPECT_EQ(region_query(d, 7, std::sqrt(2.0)), all);
}

TEST(RegionQuery, SingletonIncludesItself) {
  EXPECT_EQ(region_query(Dataset({{3, 4}}), 0, 1e-9), std::vector<std::size_t>{0});
}

TEST(RegionQuery, InvalidIndexThrows) {
  EXPECT_THROW(region_query(Dataset({{3, 4}}), 1, 0.1), InvalidInput);
}

TEST(RegionQuery, Symmetric) {
  std::mt19937_64 rng(2);
  const Dataset d(props::mixed_cloud(rng, 80));
  std::vector<std::vector<std::size_t>> n(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) n[i] = region_query(d, i, 0.08);
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j : n[i]) {
      EXPECT_TRUE(std::binary_search(n[j].begin(), n[j].end(), i)) << i << " " << j;
    }
  }
}

Dataset blob_and_spread() {
  Dataset d;
  for (int k = 0; k < 20; ++k) d.add({0.025 * k, 0.0});  // spread chain
  for (int i = 0; i < 20; ++i) d.add({0.9 + 0.001 * (i % 5), 0.9 + 0.001 * (i / 5)}, true);
  return d;
}

TEST(DbscanTrim, RemovesTheDenserCluster) {
  const Dataset d = blob_and_spread();
  DbscanConfig cfg;
  cfg.radius = 0.06;
  cfg.min_samples = 3;
  const DbscanClustering c = dbscan_cluster(d, cfg);
  EXPECT_EQ(c.cluster_count, 2u);
  const Dataset out = dbscan_trim(d, cfg);
  ASSERT_EQ(out.size(), 20u);
  for (std::size_t i = 0; i < 20; ++i) EXPECT_EQ(out[i], d[i]);
  EXPECT_EQ(out.contaminated_count(), 0u);

  const auto ref = oracle::dbscan_reference(
      std::vector<Sample>(d.samples().begin(), d.samples().end()), cfg.radius, cfg.min_samples);
  EXPECT_EQ(ref.labels, c.labels);
  EXPECT_EQ(ref.removed, c.densest);
}

TEST(DbscanTrim, SingleClusterUnchanged) {
  Dataset d;
  for (int k = 0; k < 30; ++k) d.add({0.01 * k, 0.0});
  DbscanConfig cfg;
  cfg.radius = 0.1;
  cfg.min_samples = 3;
  EXPECT_EQ(dbscan_cluster(d, cfg).cluster_count, 1u);
  EXPECT_EQ(dbscan_trim(d, cfg), d);
}

TEST(DbscanTrim, AllNoiseUnchanged) {
  Dataset d;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) d.add({static_cast<double>(i), static_cast<double>(j)});
  }
  DbscanConfig cfg;  // radius 0.05 in unit box, grid spacing 1/3
  EXPECT_EQ(dbscan_cluster(d, cfg).cluster_count, 0u);
  EXPECT_EQ(dbscan_trim(d, cfg), d);
}

TEST(DbscanTrim, ErrorsAndValidation) {
  EXPECT_THROW(dbscan_trim(Dataset(), DbscanConfig{}), InvalidInput);
  DbscanConfig bad;
  bad.min_samples = 1;
  EXPECT_THROW(dbscan_trim(blob_and_spread(), bad), InvalidInput);
  bad = {};
  bad.radius = 0.0;
  EXPECT_THROW(dbscan_trim(blob_and_spread(), bad), InvalidInput);
}

TEST(DbscanTrim, EqualClustersBreakTieOnFirstMember) {
  // Two identical-density blobs of equal size: the one holding index 0 goes.
  Dataset d;
  for (int i = 0; i < 10; ++i) d.add({0.0, 0.0});
  for (int i = 0; i < 10; ++i) d.add({1.0, 1.0});
  DbscanConfig cfg;
  cfg.min_samples = 5;
  const DbscanClustering c = dbscan_cluster(d, cfg);
  ASSERT_EQ(c.cluster_count, 2u);
  EXPECT_EQ(c.densest, c.labels[0]);
  // Listing the second blob first flips the choice.
  Dataset swapped;
  for (int i = 0; i < 10; ++i) swapped.add({1.0, 1.0});
  for (int i = 0; i < 10; ++i) swapped.add({0.0, 0.0});
  const DbscanClustering c2 = dbscan_cluster(swapped, cfg);
  EXPECT_EQ(c2.densest, c2.labels[0]);
  EXPECT_EQ(dbscan_trim(swapped, cfg).size(), 10u);
  EXPECT_EQ(dbscan_trim(swapped, cfg)[0], (Sample{0.0, 0.0}));
}

TEST(DbscanTrim, OutputIsSubsetInOriginalOrder) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const Dataset d(props::mixed_cloud(rng, 120));
    const Dataset out = dbscan_trim(d, DbscanConfig{});
    std::size_t j = 0;
    for (std::size_t i = 0; i < d.size() && j < out.size(); ++i) {
      if (d[i] == out[j]) ++j;
    }
    EXPECT_EQ(j, out.size());
  }
}

TEST(DbscanTrim, AgreesWithBruteForce) {
  const auto r = props::dbscan_equivalence(40, 23);
  EXPECT_TRUE(r.ok()) << r.first_failure;
}

}  // namespace
}  // namespace mbgdt
