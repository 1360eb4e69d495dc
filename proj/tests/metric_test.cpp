#include "kcenter/metric.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "kcenter/io.hpp"
#include "kcenter/rng.hpp"
#include "test_util.hpp"

using namespace kcenter;

namespace {

MetricSpace small_euclid() {
  PointSet ps;
  ps.dim = 2;
  ps.coords = {0.0, 0.0, 3.0, 4.0, 0.0, 1.0};
  return MetricSpace::euclidean(std::move(ps));
}

TEST(Metric, EuclideanDistances) {
  MetricSpace s = small_euclid();
  EXPECT_DOUBLE_EQ(s.distance(0, 1), 5.0);
  EXPECT_DOUBLE_EQ(s.distance(1, 0), 5.0);
  EXPECT_DOUBLE_EQ(s.distance(0, 2), 1.0);
  EXPECT_DOUBLE_EQ(s.distance(2, 2), 0.0);
  EXPECT_THROW(s.distance(0, 3), UsageError);
}

TEST(Metric, MatrixLookup) {
  MetricSpace s = MetricSpace::from_matrix({0.0, 2.0, 2.0, 0.0}, 2);
  EXPECT_DOUBLE_EQ(s.distance(0, 1), 2.0);
  EXPECT_DOUBLE_EQ(s.distance(1, 1), 0.0);
}

TEST(Metric, MatrixValidationRejectsBadInput) {
  EXPECT_THROW(MetricSpace::from_matrix({0.0, 1.0, 2.0, 0.0}, 2), UsageError);   // asymmetric
  EXPECT_THROW(MetricSpace::from_matrix({0.0, -1.0, -1.0, 0.0}, 2), UsageError); // negative
  EXPECT_THROW(MetricSpace::from_matrix({1.0, 1.0, 1.0, 0.0}, 2), UsageError);   // diagonal
  EXPECT_THROW(MetricSpace::from_matrix({0.0, 1.0, 1.0}, 2), UsageError);        // shape
}

TEST(Metric, TriangleValidationFindsWitness) {
  MetricSpace bad = MetricSpace::from_matrix({0, 5, 1, 5, 0, 1, 1, 1, 0}, 3);
  MetricValidation v = validate_metric(bad);
  EXPECT_TRUE(v.checked);
  EXPECT_FALSE(v.ok);
  EXPECT_EQ(v.wi, 0u);
  EXPECT_EQ(v.wvia, 2u);
  EXPECT_EQ(v.wj, 1u);

  MetricSpace good = MetricSpace::from_matrix({0, 1, 1, 1, 0, 1, 1, 1, 0}, 3);
  MetricValidation g = validate_metric(good);
  EXPECT_TRUE(g.checked);
  EXPECT_TRUE(g.ok);
}

TEST(Metric, TriangleValidationSkipsLargeUnlessForced) {
  const std::size_t n = 201;
  std::vector<double> m(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 0.0;
  MetricSpace s = MetricSpace::from_matrix(std::move(m), n);
  EXPECT_FALSE(validate_metric(s).checked);
  MetricValidation forced = validate_metric(s, true);
  EXPECT_TRUE(forced.checked);
  EXPECT_TRUE(forced.ok);
}

TEST(Metric, EuclideanSkipsTriangleScan) {
  MetricSpace s = small_euclid();
  EXPECT_FALSE(validate_metric(s).checked);
}

TEST(Metric, SubspacePreservesDistances) {
  MetricSpace s = small_euclid();
  std::vector<std::size_t> ids{0, 2};
  MetricSpace sub = subspace(s, ids);
  ASSERT_EQ(sub.size(), 2u);
  EXPECT_DOUBLE_EQ(sub.distance(0, 1), s.distance(0, 2));

  MetricSpace m = MetricSpace::from_matrix({0, 2, 3, 2, 0, 4, 3, 4, 0}, 3);
  MetricSpace msub = subspace(m, std::vector<std::size_t>{1, 2});
  EXPECT_DOUBLE_EQ(msub.distance(0, 1), 4.0);
}

TEST(Metric, DistanceMeterCounts) {
  MetricSpace s = small_euclid();
  DistanceMeter meter(s);
  EXPECT_EQ(meter.evals(), 0u);
  meter(0, 1);
  meter(1, 2);
  EXPECT_EQ(meter.evals(), 2u);
}

TEST(Metric, DistinctRepresentatives) {
  PointSet ps;
  ps.dim = 1;
  ps.coords = {1.0, 1.0, 2.0, 1.0, 2.0};
  MetricSpace s = MetricSpace::euclidean(std::move(ps));
  std::vector<std::size_t> reps = distinct_representatives(s);
  EXPECT_EQ(reps, (std::vector<std::size_t>{0, 2}));
}

TEST(Generators, LinePointsAreExact) {
  GeneratorSpec spec = parse_generator_spec("line:5:0.5", 1);
  MetricSpace s = MetricSpace::euclidean(generate(spec));
  ASSERT_EQ(s.size(), 5u);
  ASSERT_EQ(s.points().dim, 1u);
  for (std::size_t i = 0; i < 5; ++i)
    EXPECT_DOUBLE_EQ(s.points().coords[i], 0.5 * static_cast<double>(i));
}

TEST(Generators, BoxRangeAndDeterminism) {
  GeneratorSpec spec = parse_generator_spec("box:64:3", 42);
  MetricSpace a = MetricSpace::euclidean(generate(spec));
  MetricSpace b = MetricSpace::euclidean(generate(spec));
  ASSERT_EQ(a.size(), 64u);
  ASSERT_EQ(a.points().dim, 3u);
  EXPECT_EQ(a.points().coords, b.points().coords);
  for (double v : a.points().coords) {
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
  GeneratorSpec other = parse_generator_spec("box:64:3", 43);
  EXPECT_NE(generate(other).coords, a.points().coords);
}

TEST(Generators, GaussClustersDeterminism) {
  GeneratorSpec spec = parse_generator_spec("gauss:40:2:4:0.05", 7);
  MetricSpace a = MetricSpace::euclidean(generate(spec));
  MetricSpace b = MetricSpace::euclidean(generate(spec));
  ASSERT_EQ(a.size(), 40u);
  EXPECT_EQ(a.points().coords, b.points().coords);
}

TEST(Generators, RejectsJunkSpecs) {
  // Syntax errors surface at parse time, bad values at generation time.
  EXPECT_THROW(parse_generator_spec("box", 1), UsageError);
  EXPECT_THROW(parse_generator_spec("box:ten", 1), UsageError);
  EXPECT_THROW(parse_generator_spec("wedge:5", 1), UsageError);
  EXPECT_THROW(generate(parse_generator_spec("box:0", 1)), UsageError);
  EXPECT_THROW(generate(parse_generator_spec("gauss:10:2:0", 1)), UsageError);
  EXPECT_THROW(generate(parse_generator_spec("cover:9", 1)), UsageError);
  EXPECT_THROW(generate(parse_generator_spec("line:4:0", 1)), UsageError);
}

TEST(Generators, CoverHierarchyShape) {
  MetricSpace t0 = MetricSpace::euclidean(generate(parse_generator_spec("cover:0", 1)));
  ASSERT_EQ(t0.size(), 1u);
  EXPECT_DOUBLE_EQ(t0.points().coords[0], 0.0);
  EXPECT_DOUBLE_EQ(t0.points().coords[1], 0.0);

  MetricSpace t2 = MetricSpace::euclidean(generate(parse_generator_spec("cover:2", 1)));
  ASSERT_EQ(t2.size(), 49u);
  // Hub-first indexing: index 0 is the root, 1..7 lead their own sub-stars.
  EXPECT_DOUBLE_EQ(t2.points().coords[0], 0.0);
  EXPECT_DOUBLE_EQ(t2.points().coords[1], 0.0);
  // Seed independence: the hierarchy is a fixed shape.
  MetricSpace again = MetricSpace::euclidean(generate(parse_generator_spec("cover:2", 99)));
  EXPECT_EQ(t2.points().coords, again.points().coords);

  double min_sep = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t2.size(); ++i)
    for (std::size_t j = i + 1; j < t2.size(); ++j)
      min_sep = std::min(min_sep, t2.distance(i, j));
  EXPECT_GT(min_sep, 0.08);  // all 49 points distinct with real clearance

  double max_r = 0.0;
  for (std::size_t i = 0; i < t2.size(); ++i)
    max_r = std::max(max_r, t2.distance(0, i));
  EXPECT_LE(max_r, 0.74);  // below 1/2 + 1/4: the level twists misalign the offsets
}

TEST(Io, CsvRoundTrip) {
  MetricSpace s = MetricSpace::euclidean(generate(parse_generator_spec("gauss:25:3", 5)));
  std::ostringstream out;
  write_points_csv(out, s.points());
  std::istringstream in(out.str());
  PointSet back = read_points_csv(in);
  EXPECT_EQ(back.dim, s.points().dim);
  EXPECT_EQ(back.coords, s.points().coords);  // shortest round-trip formatting
}

TEST(Io, CsvHeaderDetectionAndErrors) {
  std::istringstream with_header("x,y\n0,0\n1.5,2\n");
  PointSet ps = read_points_csv(with_header);
  ASSERT_EQ(ps.size(), 2u);
  EXPECT_DOUBLE_EQ(ps.point(1)[0], 1.5);

  std::istringstream ragged("1,2\n3\n");
  EXPECT_THROW(read_points_csv(ragged), UsageError);
  std::istringstream empty("");
  EXPECT_THROW(read_points_csv(empty), UsageError);
  std::istringstream blanks("1,2\n\n3,4\n");
  EXPECT_EQ(read_points_csv(blanks).size(), 2u);
}

TEST(Io, MatrixFileReader) {
  std::string path = ::testing::TempDir() + "kc_matrix_test.txt";
  {
    std::ofstream f(path);
    f << "0 1 2\n1 0 1\n2 1 0\n";
  }
  MetricSpace s = read_matrix_file(path);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_DOUBLE_EQ(s.distance(0, 2), 2.0);

  std::string bad = ::testing::TempDir() + "kc_matrix_bad.txt";
  {
    std::ofstream f(bad);
    f << "0 1\n1 0 3\n";
  }
  EXPECT_THROW(read_matrix_file(bad), UsageError);
}

TEST(Rng, StreamsAreStableAndDisjoint) {
  Rng a = Rng::stream(11, "order");
  Rng b = Rng::stream(11, "order");
  Rng c = Rng::stream(11, "partition");
  double va = a.uniform01(), vb = b.uniform01(), vc = c.uniform01();
  EXPECT_DOUBLE_EQ(va, vb);
  EXPECT_NE(va, vc);
  for (int i = 0; i < 1000; ++i) {
    double u = a.uniform01();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Rng, ShuffleIsAPermutation) {
  Rng r = Rng::stream(3, "order");
  std::vector<std::size_t> v(50);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
  std::vector<std::size_t> orig = v;
  r.shuffle(v);
  EXPECT_NE(v, orig);
  std::sort(v.begin(), v.end());
  EXPECT_EQ(v, orig);
}

}  // namespace
