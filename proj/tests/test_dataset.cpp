#include <doctest.h>

#include <set>

#include "cct/dataset.hpp"

using namespace cct;

TEST_CASE("libsvm: dense expansion and label mapping") {
  Dataset ds = parse_libsvm("+1 1:0.5 3:2.0\n", Task::Classification);
  REQUIRE(ds.size() == 1);
  CHECK(ds.feature_count == 3);
  CHECK(ds.samples[0].features == std::vector<double>{0.5, 0.0, 2.0});
  CHECK(ds.samples[0].target == 1.0);
}

TEST_CASE("libsvm: feature count is max index over the file") {
  Dataset ds = parse_libsvm("-1 2:1\n+1 1:1\n", Task::Classification);
  CHECK(ds.feature_count == 2);
  CHECK(ds.samples[0].target == -1.0);
  CHECK(ds.samples[1].target == +1.0);
  CHECK(ds.samples[0].features == std::vector<double>{0.0, 1.0});
}

TEST_CASE("libsvm: arbitrary two-label files map by sorted order") {
  Dataset ds = parse_libsvm("3 1:1\n7 1:2\n3 1:3\n", Task::Classification);
  CHECK(ds.samples[0].target == -1.0);
  CHECK(ds.samples[1].target == +1.0);
  REQUIRE(ds.label_map.has_value());
  CHECK(ds.label_map->raw_negative == 3.0);
  CHECK(ds.label_map->raw_positive == 7.0);
}

TEST_CASE("libsvm: error paths") {
  CHECK_THROWS_AS(parse_libsvm("", Task::Classification), ParseError);
  CHECK_THROWS_AS(parse_libsvm("+1 3:1 2:1\n", Task::Classification), ParseError);
  CHECK_THROWS_AS(parse_libsvm("+1 0:1\n", Task::Classification), ParseError);
  CHECK_THROWS_AS(parse_libsvm("+1 1:abc\n", Task::Classification), ParseError);
  CHECK_THROWS_AS(parse_libsvm("1 1:1\n2 1:1\n3 1:1\n", Task::Classification),
                  ParseError);  // three labels
  CHECK_THROWS_AS(parse_libsvm("+1 1:inf\n", Task::Regression), ParseError);
}

TEST_CASE("libsvm: parse o serialize is identity") {
  Rng rng(42);
  Dataset ds;
  ds.task = Task::Regression;
  ds.feature_count = 5;
  for (int i = 0; i < 40; ++i) {
    Sample s;
    for (int j = 0; j < 5; ++j)
      s.features.push_back(rng.uniform() < 0.3 ? 0.0 : rng.normal());
    // keep at least one nonzero in the last column so the width survives
    if (i == 0) s.features[4] = 1.25;
    s.target = rng.normal();
    ds.samples.push_back(s);
  }
  Dataset back = parse_libsvm(serialize_libsvm(ds), Task::Regression);
  REQUIRE(back.size() == ds.size());
  REQUIRE(back.feature_count == ds.feature_count);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    CHECK(back.samples[i].features == ds.samples[i].features);
    CHECK(back.samples[i].target == ds.samples[i].target);
  }
}

TEST_CASE("csv: header, target extraction, minimal cases") {
  Dataset ds = parse_csv("x1,x2,y\n1,2,-1\n3,4,1\n", "y", Task::Classification);
  REQUIRE(ds.size() == 2);
  CHECK(ds.feature_count == 2);
  CHECK(ds.samples[0].features == std::vector<double>{1.0, 2.0});
  CHECK(ds.samples[1].target == 1.0);

  CHECK_THROWS_AS(parse_csv("a,b\n1,2\n", "missing", Task::Regression), ParseError);
  Dataset one = parse_csv("1,2,0.5\n", "2", Task::Regression);
  REQUIRE(one.size() == 1);
  CHECK(one.samples[0].target == 0.5);
}

TEST_CASE("csv: ragged and non-numeric cells are rejected with location") {
  CHECK_THROWS_AS(parse_csv("x,y\n1,2\n3\n", "y", Task::Regression), ParseError);
  try {
    parse_csv("x,y\n1,oops\n", "y", Task::Regression);
    FAIL("expected ParseError");
  } catch (const ParseError &e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("split: 64/16/20 with floor arithmetic") {
  Dataset ds;
  ds.task = Task::Regression;
  ds.feature_count = 1;
  auto sized = [&](std::size_t n) {
    ds.samples.assign(n, Sample{{0.0}, 0.0});
    return split_dataset(ds, 9);
  };
  auto s = sized(1000);
  CHECK(s.train.size() == 640);
  CHECK(s.validation.size() == 160);
  CHECK(s.test.size() == 200);
  auto t = sized(10);
  CHECK(t.train.size() == 6);
  CHECK(t.validation.size() == 1);
  CHECK(t.test.size() == 3);
  CHECK_THROWS(sized(4));
}

TEST_CASE("split: deterministic and a partition") {
  Dataset ds;
  ds.task = Task::Classification;
  ds.feature_count = 1;
  ds.samples.assign(137, Sample{{0.0}, 1.0});
  auto a = split_dataset(ds, 123);
  auto b = split_dataset(ds, 123);
  CHECK(a.train == b.train);
  CHECK(a.validation == b.validation);
  CHECK(a.test == b.test);

  std::set<std::size_t> seen;
  for (const auto *part : {&a.train, &a.validation, &a.test})
    for (auto i : *part) CHECK(seen.insert(i).second);
  CHECK(seen.size() == 137);
}

TEST_CASE("standardize: zero-variance columns and exact small case") {
  Dataset ds;
  ds.task = Task::Regression;
  ds.feature_count = 2;
  ds.samples = {Sample{{0.0, 5.0}, 0.0}, Sample{{2.0, 5.0}, 0.0}};
  std::vector<std::size_t> idx{0, 1};
  FeatureStats st = compute_stats(ds, idx);
  CHECK(st.mean[0] == 1.0);
  CHECK(st.std_dev[0] == 1.0);  // population std of {0,2}
  CHECK(st.std_dev[1] == 1.0);  // zero variance treated as 1
  Dataset z = standardize(ds, st);
  CHECK(z.samples[0].features[0] == -1.0);
  CHECK(z.samples[1].features[0] == +1.0);
  CHECK(z.samples[0].features[1] == 0.0);  // constant column centered only
}

TEST_CASE("standardize: training split means vanish") {
  Rng rng(5);
  Dataset ds;
  ds.task = Task::Regression;
  ds.feature_count = 4;
  for (int i = 0; i < 60; ++i) {
    Sample s;
    for (int j = 0; j < 4; ++j) s.features.push_back(3.0 * rng.normal() + j);
    ds.samples.push_back(s);
  }
  std::vector<std::size_t> idx(ds.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  FeatureStats st = compute_stats(ds, idx);
  Dataset z = standardize(ds, st);
  FeatureStats zst = compute_stats(z, idx);
  for (double m : zst.mean) CHECK(std::fabs(m) < 1e-9);
  // re-applying with the returned stats keeps the mean at 0
  FeatureStats zst2 = compute_stats(standardize(z, zst), idx);
  for (double m : zst2.mean) CHECK(std::fabs(m) < 1e-9);
}
