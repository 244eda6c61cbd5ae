#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "cachelab/error.hpp"
#include "cachelab/policies.hpp"
#include "cachelab/simulator.hpp"

using namespace cachelab;

namespace {

struct Keyed {
  Trace trace;
  ObjectId id(const std::string& k) const { return trace.keys().find(k); }
};

Keyed sized(const std::vector<std::pair<std::string, std::uint64_t>>& seq) {
  Keyed out;
  std::int64_t ts = 0;
  for (const auto& [k, s] : seq) out.trace.push(ts++, k, s);
  return out;
}

Keyed unit(const std::string& seq) {
  std::vector<std::pair<std::string, std::uint64_t>> v;
  for (char c : seq) v.emplace_back(std::string(1, c), 1);
  return sized(v);
}

Trace random_trace(std::uint64_t seed, std::size_t length, int key_count, std::uint64_t max_size) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> sizes(static_cast<std::size_t>(key_count));
  for (auto& s : sizes) s = std::uniform_int_distribution<std::uint64_t>(1, max_size)(rng);
  Trace t;
  for (std::size_t i = 0; i < length; ++i) {
    const auto k = std::uniform_int_distribution<int>(0, key_count - 1)(rng);
    t.push(static_cast<std::int64_t>(i), "k" + std::to_string(k), sizes[static_cast<std::size_t>(k)]);
  }
  return t;
}

std::vector<PolicyPtr> all_policies(std::uint64_t cap) {
  std::vector<PolicyPtr> v;
  v.push_back(make_lru(cap));
  v.push_back(make_fifo(cap));
  v.push_back(make_s4lru(cap));
  v.push_back(make_lfuda(cap));
  v.push_back(make_lruk(cap, 2));
  v.push_back(make_gdsf(cap));
  v.push_back(make_thlru(cap, std::max<std::uint64_t>(1, cap / 3)));
  return v;
}

// Vector LRU: front = most recent.
std::vector<bool> naive_lru_hits(const Trace& t, std::uint64_t cap) {
  std::vector<Request> q;
  std::uint64_t bytes = 0;
  std::vector<bool> hits;
  for (const auto& r : t.requests()) {
    auto it = std::find_if(q.begin(), q.end(), [&](const Request& x) { return x.id == r.id; });
    if (it != q.end()) {
      const auto x = *it;
      q.erase(it);
      q.insert(q.begin(), x);
      hits.push_back(true);
      continue;
    }
    hits.push_back(false);
    if (r.size > cap) continue;
    while (bytes + r.size > cap) {
      bytes -= q.back().size;
      q.pop_back();
    }
    q.insert(q.begin(), r);
    bytes += r.size;
  }
  return hits;
}

}  // namespace

TEST(Lru, ReuseWithinCapacityHits) {
  const auto k = unit("ABA");
  LruPolicy lru(2);
  EXPECT_FALSE(lru.access(k.trace[0]).hit);
  EXPECT_FALSE(lru.access(k.trace[1]).hit);
  EXPECT_TRUE(lru.access(k.trace[2]).hit);
}

TEST(Lru, EvictsTailAfterPromotion) {
  const auto k = unit("ABACB");
  LruPolicy lru(2);
  for (int i = 0; i < 3; ++i) lru.access(k.trace[static_cast<std::size_t>(i)]);
  const auto out = lru.access(k.trace[3]);  // C evicts B, the tail after A's promotion
  EXPECT_EQ(out.evicted, std::vector<ObjectId>{k.id("B")});
  EXPECT_FALSE(lru.access(k.trace[4]).hit);
}

TEST(Lru, OversizedObjectIsBypassed) {
  const auto k = sized({{"A", 3}, {"B", 11}, {"A", 3}});
  LruPolicy lru(10);
  lru.access(k.trace[0]);
  const auto out = lru.access(k.trace[1]);
  EXPECT_FALSE(out.admitted);
  EXPECT_TRUE(out.evicted.empty());
  EXPECT_TRUE(lru.access(k.trace[2]).hit);
}

TEST(Lru, MatchesNaiveReplay) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto t = random_trace(seed, 400, 25, seed % 3 == 0 ? 1 : 9);
    const std::uint64_t cap = 5 + seed % 30;
    LruPolicy lru(cap);
    const auto expected = naive_lru_hits(t, cap);
    for (std::size_t i = 0; i < t.size(); ++i) ASSERT_EQ(lru.access(t[i]).hit, expected[i]) << seed << ":" << i;
  }
}

TEST(Fifo, HitsDoNotReorder) {
  const auto k = unit("ABACB");
  FifoPolicy fifo(2);
  for (int i = 0; i < 3; ++i) fifo.access(k.trace[static_cast<std::size_t>(i)]);
  EXPECT_EQ(fifo.access(k.trace[3]).evicted, std::vector<ObjectId>{k.id("A")});
  EXPECT_TRUE(fifo.access(k.trace[4]).hit);
}

TEST(Fifo, EqualsLruWithoutReuse) {
  Trace t;
  for (int i = 0; i < 500; ++i) t.push(i, std::to_string(i), 1 + static_cast<std::uint64_t>(i % 7));
  auto a = make_fifo(20), b = make_lru(20);
  EXPECT_EQ(simulate(*a, t).eviction_log, simulate(*b, t).eviction_log);
}

TEST(ThresholdLru, NeverAdmitsLargeObjects) {
  const auto k = sized({{"A", 6}, {"A", 6}, {"B", 5}, {"B", 5}});
  ThresholdLruPolicy p(100, 5);
  EXPECT_FALSE(p.access(k.trace[0]).admitted);
  EXPECT_FALSE(p.access(k.trace[1]).hit);
  EXPECT_TRUE(p.access(k.trace[2]).admitted);
  EXPECT_TRUE(p.access(k.trace[3]).hit);
  EXPECT_THROW(ThresholdLruPolicy(10, 0), ConfigError);
}

TEST(SegmentedLru, PromotionAndDemotion) {
  const auto k = unit("AABBC");
  SegmentedLruPolicy p(4, 4);  // one unit per segment
  p.access(k.trace[0]);
  EXPECT_EQ(p.segment_of(k.id("A")), 0);
  EXPECT_TRUE(p.access(k.trace[1]).hit);
  EXPECT_EQ(p.segment_of(k.id("A")), 1);
  p.access(k.trace[2]);
  p.access(k.trace[3]);  // B moves up and pushes A back down
  EXPECT_EQ(p.segment_of(k.id("B")), 1);
  EXPECT_EQ(p.segment_of(k.id("A")), 0);
  EXPECT_EQ(p.access(k.trace[4]).evicted, std::vector<ObjectId>{k.id("A")});
}

TEST(SegmentedLru, TopSegmentIsSticky) {
  const auto k = unit("AAAAA");
  SegmentedLruPolicy p(8, 4);
  for (const auto& r : k.trace.requests()) p.access(r);
  EXPECT_EQ(p.segment_of(k.id("A")), 3);
}

TEST(SegmentedLru, BudgetsSplitCapacity) {
  SegmentedLruPolicy p(10, 4);
  EXPECT_EQ(p.segment_capacity(0), 4u);
  EXPECT_EQ(p.segment_capacity(3), 2u);
  EXPECT_EQ(p.name(), "s4lru");
  EXPECT_THROW(SegmentedLruPolicy(10, 0), ConfigError);
}

TEST(SegmentedLru, SingleSegmentIsLru) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto t = random_trace(seed, 600, 40, 5);
    auto a = make_s4lru(30, 1), b = make_lru(30);
    EXPECT_EQ(simulate(*a, t).eviction_log, simulate(*b, t).eviction_log);
  }
}

TEST(Gdsf, HandPriorities) {
  const auto k = sized({{"A", 2}, {"B", 5}, {"C", 4}, {"A", 2}, {"D", 5}});
  GdsfPolicy p(10);
  p.access(k.trace[0]);
  p.access(k.trace[1]);
  EXPECT_DOUBLE_EQ(p.priority_of(k.id("A")), 0.5);
  EXPECT_DOUBLE_EQ(p.priority_of(k.id("B")), 0.2);
  EXPECT_EQ(p.access(k.trace[2]).evicted, std::vector<ObjectId>{k.id("B")});
  EXPECT_DOUBLE_EQ(p.clock(), 0.2);
  EXPECT_DOUBLE_EQ(p.priority_of(k.id("C")), 0.45);
  EXPECT_TRUE(p.access(k.trace[3]).hit);
  EXPECT_DOUBLE_EQ(p.priority_of(k.id("A")), 1.2);
  EXPECT_EQ(p.access(k.trace[4]).evicted, std::vector<ObjectId>{k.id("C")});
  EXPECT_DOUBLE_EQ(p.priority_of(k.id("D")), 0.45 + 0.2);
}

TEST(Lfuda, AgingAndRecencyTieBreak) {
  const auto k = unit("AABCD");
  LfudaPolicy p(2);
  p.access(k.trace[0]);
  p.access(k.trace[1]);
  p.access(k.trace[2]);
  EXPECT_EQ(p.access(k.trace[3]).evicted, std::vector<ObjectId>{k.id("B")});
  EXPECT_DOUBLE_EQ(p.age(), 1.0);
  EXPECT_DOUBLE_EQ(p.priority_of(k.id("C")), 2.0);
  // A and C tie at 2; A was used less recently.
  EXPECT_EQ(p.access(k.trace[4]).evicted, std::vector<ObjectId>{k.id("A")});
}

TEST(LruK, SingleAccessObjectsGoFirst) {
  const auto k = unit("AABCD");
  LruKPolicy p(2, 2);
  for (int i = 0; i < 3; ++i) p.access(k.trace[static_cast<std::size_t>(i)]);
  EXPECT_EQ(p.access(k.trace[3]).evicted, std::vector<ObjectId>{k.id("B")});
  EXPECT_EQ(p.access(k.trace[4]).evicted, std::vector<ObjectId>{k.id("C")});
  EXPECT_THROW(LruKPolicy(2, 0), ConfigError);
}

TEST(LruK, KOneIsLru) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto t = random_trace(seed, 600, 40, 5);
    auto a = make_lruk(30, 1), b = make_lru(30);
    EXPECT_EQ(simulate(*a, t).eviction_log, simulate(*b, t).eviction_log);
  }
}

TEST(AllPolicies, ConservationAndConsistency) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const auto t = random_trace(seed, 800, 30, seed % 2 ? 1 : 12);
    const std::uint64_t cap = 10 + seed * 3;
    for (auto& p : all_policies(cap)) {
      std::set<ObjectId> cached;
      std::uint64_t first_seen = 0, misses = 0;
      std::set<ObjectId> seen;
      for (const auto& r : t.requests()) {
        const bool was = p->contains(r.id);
        const auto out = p->access(r);
        ASSERT_EQ(out.hit, was) << p->name();
        if (!out.hit) ++misses;
        if (seen.insert(r.id).second) ++first_seen;
        for (const auto v : out.evicted) {
          ASSERT_TRUE(cached.count(v) || (out.admitted && v == r.id)) << p->name();
          cached.erase(v);
          ASSERT_FALSE(p->contains(v)) << p->name();
        }
        if (out.admitted && p->contains(r.id)) cached.insert(r.id);
        ASSERT_LE(p->occupancy(), cap) << p->name();
        const auto contents = p->contents();
        std::uint64_t bytes = 0;
        for (const auto& c : contents) bytes += c.size;
        ASSERT_EQ(bytes, p->occupancy()) << p->name();
        ASSERT_EQ(contents.size(), p->object_count()) << p->name();
        ASSERT_EQ(contents.size(), cached.size()) << p->name();
      }
      EXPECT_GE(misses, first_seen) << p->name();
    }
  }
}

TEST(Simulator, CompulsoryMissesAndWarmup) {
  const auto k = unit("ABCABC");
  auto p = make_lru(3);
  const auto rep = simulate(*p, k.trace);
  EXPECT_EQ(rep.counters.misses(), 3u);
  EXPECT_EQ(rep.counters.requests, 6u);
  auto q = make_lru(3);
  SimulationOptions o;
  o.warmup = 3;
  EXPECT_EQ(simulate(*q, k.trace, o).counters.misses(), 0u);
}

TEST(Simulator, OversizedWithoutBypassIsConfigError) {
  const auto k = sized({{"A", 20}});
  auto p = make_lru(10);
  SimulationOptions o;
  o.bypass_oversized = false;
  EXPECT_THROW(simulate(*p, k.trace, o), ConfigError);
}

TEST(Simulator, WindowsPartitionCounters) {
  const auto t = random_trace(9, 1003, 50, 7);
  auto p = make_gdsf(60);
  SimulationOptions o;
  o.window = 100;
  const auto rep = simulate(*p, t, o);
  ASSERT_EQ(rep.windows.size(), 11u);
  Counters sum;
  for (const auto& w : rep.windows) sum += w;
  EXPECT_EQ(sum, rep.counters);
}
