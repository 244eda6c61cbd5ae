#include <gtest/gtest.h>
#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>

#include "cachelab/error.hpp"
#include "cachelab/kv_config.hpp"
#include "cachelab/synthetic.hpp"
#include "cachelab/trace.hpp"
#include "cachelab/trace_io.hpp"
#include "cachelab/training_set.hpp"

using namespace cachelab;

namespace {

Trace parse(const std::string& text) {
  std::istringstream in(text);
  return read_trace(in);
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("cachelab_test_" + name);
}

}  // namespace

TEST(TraceParse, LineMapsToRequest) {
  const auto t = parse("1 A 1048576\n");
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].timestamp, 1);
  EXPECT_EQ(t.key_name(t[0].id), "A");
  EXPECT_EQ(t[0].size, 1048576u);
}

TEST(TraceParse, EmptyInputIsEmptyTrace) {
  EXPECT_TRUE(parse("").empty());
  EXPECT_TRUE(parse("\n# comment only\n\n").empty());
}

TEST(TraceParse, NonPositiveSizeReportsLine) {
  try {
    parse("5 B -3\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_NE(std::string(e.what()).find("non-positive size"), std::string::npos);
  }
  EXPECT_THROW(parse("5 B 0\n"), ParseError);
}

TEST(TraceParse, MalformedLinesCarryLineNumber) {
  try {
    parse("1 A 10\n2 B\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse("x A 10\n"), ParseError);
  EXPECT_THROW(parse("1 A ten\n"), ParseError);
  EXPECT_THROW(parse("5 A 1\n4 B 1\n"), ParseError);
}

TEST(TraceParse, ExtraColumnsIgnored) {
  const auto t = parse("3 key 7 extra stuff\n");
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].size, 7u);
}

TEST(TraceParse, ConflictingSizeLatestWins) {
  std::istringstream in("1 A 10\n2 B 5\n3 A 20\n");
  TraceReadStats stats;
  const auto t = read_trace(in, &stats);
  EXPECT_EQ(stats.size_conflicts, 1u);
  EXPECT_EQ(t[0].size, 20u);
  EXPECT_EQ(t[2].size, 20u);
  EXPECT_EQ(t[1].size, 5u);
}

TEST(TraceParse, StreamingReaderYieldsInOrder) {
  std::istringstream in("1 A 10\n\n2 B 5\n");
  TraceReader reader(in);
  auto a = reader.next();
  auto b = reader.next();
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->key, "A");
  EXPECT_EQ(b->key, "B");
  EXPECT_EQ(reader.line(), 3u);
  EXPECT_FALSE(reader.next());
}

TEST(TraceParse, RoundTripIsExact) {
  SyntheticConfig c;
  c.object_count = 500;
  c.requests_per_day = 3000;
  c.seed = 9;
  const auto t = generate_synthetic(c);
  std::ostringstream first;
  write_trace(t, first);
  const auto again = parse(first.str());
  std::ostringstream second;
  write_trace(again, second);
  EXPECT_EQ(first.str(), second.str());
  EXPECT_EQ(again, t);
}

TEST(TraceParse, GzipDetectedByMagic) {
  const auto path = temp_path("trace.gz");
  const std::string text = "1 A 10\n2 B 20\n3 A 10\n";
  gzFile f = gzopen(path.c_str(), "wb");
  ASSERT_NE(f, nullptr);
  gzwrite(f, text.data(), static_cast<unsigned>(text.size()));
  gzclose(f);
  const auto t = read_trace_file(path);
  EXPECT_EQ(t, parse(text));
  std::filesystem::remove(path);
}

TEST(TraceParse, PlainFileRoundTrip) {
  const auto path = temp_path("trace.txt");
  const auto t = parse("1 A 10\n2 B 20\n");
  write_trace_file(t, path);
  EXPECT_EQ(read_trace_file(path), t);
  std::filesystem::remove(path);
}

TEST(Synthetic, SameSeedSameTrace) {
  SyntheticConfig c;
  c.object_count = 1000;
  c.requests_per_day = 20000;
  c.diurnal_amplitude = 0.4;
  c.seed = 42;
  std::ostringstream a, b;
  write_trace(generate_synthetic(c), a);
  write_trace(generate_synthetic(c), b);
  EXPECT_EQ(a.str(), b.str());
  c.seed = 43;
  std::ostringstream d;
  write_trace(generate_synthetic(c), d);
  EXPECT_NE(a.str(), d.str());
}

TEST(Synthetic, LengthAndInvariantsAcrossConfigs) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    SyntheticConfig c;
    c.object_count = 50 + seed * 37;
    c.zipf_exponent = 0.3 + 0.1 * static_cast<double>(seed);
    c.requests_per_day = 500 + seed * 101;
    c.days = 1 + seed % 3;
    c.diurnal_amplitude = 0.07 * static_cast<double>(seed % 10);
    if (seed % 2 == 0) c.size_model = TwoClassSizes{100, 5000, 0.2};
    c.seed = seed;
    const auto t = generate_synthetic(c);
    ASSERT_EQ(t.size(), c.requests_per_day * c.days);
    std::map<ObjectId, std::uint64_t> sizes;
    for (std::size_t i = 0; i < t.size(); ++i) {
      EXPECT_GE(t[i].size, 1u);
      if (i > 0) { EXPECT_GE(t[i].timestamp, t[i - 1].timestamp); }
      EXPECT_LT(t[i].timestamp, static_cast<std::int64_t>(c.days) * 86400);
      auto [it, fresh] = sizes.emplace(t[i].id, t[i].size);
      if (!fresh) { EXPECT_EQ(it->second, t[i].size); }
    }
    EXPECT_LE(t.unique_objects(), c.object_count);
  }
}

TEST(Synthetic, ZipfRankFrequencySlope) {
  SyntheticConfig c;
  c.object_count = 10000;
  c.zipf_exponent = 0.8;
  c.requests_per_day = 1000000;
  c.seed = 5;
  const auto t = generate_synthetic(c);
  std::vector<double> counts(t.id_space(), 0.0);
  for (const auto& r : t.requests()) counts[r.id] += 1.0;
  std::sort(counts.begin(), counts.end(), std::greater<>());
  // Least-squares slope of log(count) on log(rank), ranks 1..1000.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = 1000;
  for (int r = 1; r <= n; ++r) {
    const double x = std::log(r), y = std::log(counts[r - 1]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  EXPECT_NEAR(slope, -0.8, 0.05);
}

TEST(Synthetic, FlatProfileIsUniformOverHours) {
  SyntheticConfig c;
  c.object_count = 1000;
  c.requests_per_day = 240000;
  c.diurnal_amplitude = 0.0;
  c.seed = 11;
  const auto t = generate_synthetic(c);
  std::vector<double> hours(24, 0.0);
  for (const auto& r : t.requests()) hours[static_cast<std::size_t>((r.timestamp % 86400) / 3600)] += 1.0;
  const double n = static_cast<double>(t.size());
  const double expected = n / 24.0;
  const double sigma = std::sqrt(n * (1.0 / 24.0) * (23.0 / 24.0));
  double chi2 = 0.0;
  // 4 sigma per bin keeps the family-wise false alarm over 24 bins near 0.15%.
  for (const double h : hours) {
    EXPECT_LT(std::abs(h - expected), 4.0 * sigma);
    chi2 += (h - expected) * (h - expected) / expected;
  }
  // 23 degrees of freedom; 99.9th percentile is about 49.7.
  EXPECT_LT(chi2, 49.7);
}

TEST(Synthetic, DiurnalPeakAndTrough) {
  SyntheticConfig c;
  c.object_count = 1000;
  c.requests_per_day = 240000;
  c.diurnal_amplitude = 0.5;
  c.seed = 12;
  const auto t = generate_synthetic(c);
  std::vector<double> hours(24, 0.0);
  for (const auto& r : t.requests()) hours[static_cast<std::size_t>(r.timestamp / 3600)] += 1.0;
  const auto profile = diurnal_profile(0.5);
  for (int h = 0; h < 24; ++h) {
    const double expected = static_cast<double>(t.size()) * profile[h] / 24.0;
    EXPECT_NEAR(hours[h], expected, 5.0 * std::sqrt(expected));
  }
  EXPECT_GT(hours[kDiurnalPeakHour], 2.5 * hours[(kDiurnalPeakHour + 12) % 24]);
}

TEST(Synthetic, RejectsBadConfig) {
  SyntheticConfig c;
  c.zipf_exponent = 0.0;
  EXPECT_THROW(generate_synthetic(c), ConfigError);
  c = SyntheticConfig{};
  c.object_count = 0;
  EXPECT_THROW(generate_synthetic(c), ConfigError);
  c = SyntheticConfig{};
  c.diurnal_amplitude = 1.0;
  EXPECT_THROW(generate_synthetic(c), ConfigError);
}

TEST(Synthetic, FromKeyValueConfig) {
  const auto kv = KeyValueConfig::parse_string(
      "object_count = 77\nzipf_exponent = 1.1\nsize_model = two_class\nsmall_bytes = 10\nlarge_bytes = 99\n"
      "requests_per_day = 500\ndays = 2\nseed = 3\n");
  const auto c = SyntheticConfig::from_config(kv);
  EXPECT_EQ(c.object_count, 77u);
  EXPECT_DOUBLE_EQ(c.zipf_exponent, 1.1);
  ASSERT_TRUE(std::holds_alternative<TwoClassSizes>(c.size_model));
  EXPECT_EQ(std::get<TwoClassSizes>(c.size_model).large_bytes, 99u);
  EXPECT_EQ(generate_synthetic(c).size(), 1000u);
}

TEST(Splice, ShiftsAndNamespaces) {
  const auto a = parse("90 X 1\n100 Y 2\n");
  const auto b = parse("5 X 3\n9 Z 4\n");
  const auto s = splice_traces(a, b);
  ASSERT_EQ(s.size(), a.size() + b.size());
  EXPECT_EQ(s[2].timestamp, 101);
  EXPECT_EQ(s[3].timestamp, 105);
  EXPECT_EQ(s.key_name(s[0].id), "a/X");
  EXPECT_EQ(s.key_name(s[2].id), "b/X");
  EXPECT_NE(s[0].id, s[2].id);
  EXPECT_EQ(s[2].size, 3u);
  EXPECT_THROW(splice_traces(Trace{}, b), ConfigError);
}

TEST(TrainingSet, FullRateIsWholeTrace) {
  SyntheticConfig c;
  c.object_count = 300;
  c.requests_per_day = 5000;
  const auto t = generate_synthetic(c);
  TrainingSetOptions o;
  o.sampling_rate = 1.0;
  const auto s = extract_training_set(t, o);
  EXPECT_EQ(s.records.size(), t.size());
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_EQ(s.records[i], t[i]);
  EXPECT_EQ(s.sampled_ids.size(), t.unique_objects());
}

TEST(TrainingSet, ReservoirSizeIsExact) {
  Trace t;
  for (int i = 0; i < 1000000; ++i) t.push(i, std::to_string(i), 100);
  TrainingSetOptions o;
  o.sampling_rate = 0.01;
  o.max_attempts = 1;
  const auto s = extract_training_set(t, o);
  EXPECT_EQ(s.sampled_ids.size(), 10000u);
  EXPECT_EQ(s.records.size(), 10000u);
}

TEST(TrainingSet, DeterministicAndOrderPreserving) {
  SyntheticConfig c;
  c.object_count = 5000;
  c.requests_per_day = 50000;
  c.seed = 4;
  const auto t = generate_synthetic(c);
  TrainingSetOptions o;
  o.sampling_rate = 0.05;
  o.seed = 77;
  const auto a = extract_training_set(t, o);
  const auto b = extract_training_set(t, o);
  EXPECT_EQ(a.sampled_ids, b.sampled_ids);
  EXPECT_EQ(a.records, b.records);
  // Records are exactly the sampled keys' requests, in trace order.
  std::vector<Request> expected;
  for (const auto& r : t.requests()) {
    if (std::binary_search(a.sampled_ids.begin(), a.sampled_ids.end(), r.id)) expected.push_back(r);
  }
  ASSERT_EQ(a.records.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_EQ(a.records[i], expected[i]);
}

TEST(TrainingSet, SizeDistributionControlled) {
  SyntheticConfig c;
  c.object_count = 20000;
  c.requests_per_day = 200000;
  c.seed = 8;
  const auto t = generate_synthetic(c);
  TrainingSetOptions o;
  o.sampling_rate = 0.05;
  const auto s = extract_training_set(t, o);
  EXPECT_TRUE(s.within_tolerance);
  EXPECT_LE(s.ks_distance, 0.05);
  // Independent recomputation of the KS statistic.
  std::vector<std::uint64_t> full, part;
  for (const auto& r : t.requests()) full.push_back(r.size);
  for (const auto& r : s.records.requests()) part.push_back(r.size);
  std::sort(full.begin(), full.end());
  std::sort(part.begin(), part.end());
  double d = 0.0;
  for (const auto x : full) {
    const double fa = static_cast<double>(std::upper_bound(full.begin(), full.end(), x) - full.begin()) / full.size();
    const double fb = static_cast<double>(std::upper_bound(part.begin(), part.end(), x) - part.begin()) / part.size();
    d = std::max(d, std::abs(fa - fb));
  }
  for (const auto x : part) {
    const double fa = static_cast<double>(std::upper_bound(full.begin(), full.end(), x) - full.begin()) / full.size();
    const double fb = static_cast<double>(std::upper_bound(part.begin(), part.end(), x) - part.begin()) / part.size();
    d = std::max(d, std::abs(fa - fb));
  }
  EXPECT_NEAR(d, s.ks_distance, 1e-12);
}

TEST(KeyValue, SectionsListsAndBytes) {
  const auto kv = KeyValueConfig::parse_string("a = 1 # note\n[s]\nlist = x, y ,z\nflag = true\n; comment\n");
  EXPECT_EQ(kv.get_int("a", 0), 1);
  EXPECT_EQ(kv.get_list("s.list"), (std::vector<std::string>{"x", "y", "z"}));
  EXPECT_TRUE(kv.get_bool("s.flag", false));
  EXPECT_EQ(kv.section("s.").get_string("list", ""), "x, y ,z");
  EXPECT_EQ(parse_byte_count("64K"), 65536u);
  EXPECT_EQ(parse_byte_count("2G"), 2ull << 30);
  EXPECT_THROW(parse_byte_count("12Q"), ConfigError);
  EXPECT_THROW(kv.get_int("s.list", 0), ConfigError);
}
