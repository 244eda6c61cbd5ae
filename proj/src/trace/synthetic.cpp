#include "cachelab/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "cachelab/error.hpp"

namespace cachelab {

void SyntheticConfig::validate() const {
  if (object_count == 0) throw ConfigError("synthetic: object_count must be positive");
  if (!(zipf_exponent > 0.0)) throw ConfigError("synthetic: zipf_exponent must be > 0");
  if (!(diurnal_amplitude >= 0.0 && diurnal_amplitude < 1.0)) {
    throw ConfigError("synthetic: diurnal_amplitude must lie in [0, 1)");
  }
  if (days == 0) throw ConfigError("synthetic: days must be positive");
  if (const auto* ln = std::get_if<LogNormalSizes>(&size_model); ln != nullptr && !(ln->sigma >= 0.0)) {
    throw ConfigError("synthetic: size_sigma must be >= 0");
  }
  if (const auto* tc = std::get_if<TwoClassSizes>(&size_model); tc != nullptr) {
    if (tc->small_bytes == 0 || tc->large_bytes == 0) throw ConfigError("synthetic: class sizes must be positive");
    if (!(tc->large_fraction >= 0.0 && tc->large_fraction <= 1.0)) {
      throw ConfigError("synthetic: large_fraction must lie in [0, 1]");
    }
  }
}

SyntheticConfig SyntheticConfig::from_config(const KeyValueConfig& kv) {
  SyntheticConfig c;
  c.object_count = kv.get_uint("object_count", c.object_count);
  c.zipf_exponent = kv.get_double("zipf_exponent", c.zipf_exponent);
  const auto model = kv.get_string("size_model", "lognormal");
  if (model == "lognormal") {
    LogNormalSizes ln;
    ln.mu = kv.get_double("size_mu", ln.mu);
    ln.sigma = kv.get_double("size_sigma", ln.sigma);
    c.size_model = ln;
  } else if (model == "two_class") {
    TwoClassSizes tc;
    tc.small_bytes = kv.get_uint("small_bytes", tc.small_bytes);
    tc.large_bytes = kv.get_uint("large_bytes", tc.large_bytes);
    tc.large_fraction = kv.get_double("large_fraction", tc.large_fraction);
    c.size_model = tc;
  } else {
    throw ConfigError("synthetic: unknown size_model '" + model + "'");
  }
  c.requests_per_day = kv.get_uint("requests_per_day", c.requests_per_day);
  c.days = kv.get_uint("days", c.days);
  c.diurnal_amplitude = kv.get_double("diurnal_amplitude", c.diurnal_amplitude);
  c.seed = kv.get_uint("seed", c.seed);
  c.validate();
  return c;
}

SyntheticConfig SyntheticConfig::load(const std::filesystem::path& path) {
  return from_config(KeyValueConfig::load(path));
}

std::array<double, 24> diurnal_profile(double amplitude) {
  std::array<double, 24> w{};
  for (int h = 0; h < 24; ++h) {
    w[h] = 1.0 + amplitude * std::cos(2.0 * std::numbers::pi * (h - kDiurnalPeakHour) / 24.0);
  }
  return w;
}

Trace generate_synthetic(const SyntheticConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);

  const auto n = config.object_count;
  std::vector<std::uint64_t> sizes(n);
  std::visit(
      [&](const auto& model) {
        using M = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<M, LogNormalSizes>) {
          std::lognormal_distribution<double> dist(model.mu, model.sigma);
          for (auto& s : sizes) s = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(dist(rng))));
        } else {
          std::bernoulli_distribution large(model.large_fraction);
          for (auto& s : sizes) s = large(rng) ? model.large_bytes : model.small_bytes;
        }
      },
      config.size_model);

  // Inverse-CDF sampling of popularity ranks.
  std::vector<double> cdf(n);
  double acc = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    acc += std::pow(static_cast<double>(i + 1), -config.zipf_exponent);
    cdf[i] = acc;
  }
  for (auto& c : cdf) c /= acc;

  const auto profile = diurnal_profile(config.diurnal_amplitude);
  std::discrete_distribution<int> hour_dist(profile.begin(), profile.end());
  std::uniform_int_distribution<int> second_dist(0, 3599);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const std::uint64_t total = config.requests_per_day * config.days;
  std::vector<std::int64_t> stamps;
  stamps.reserve(total);
  for (std::uint64_t d = 0; d < config.days; ++d) {
    for (std::uint64_t i = 0; i < config.requests_per_day; ++i) {
      const int hour = hour_dist(rng);
      stamps.push_back(static_cast<std::int64_t>(d) * 86400 + hour * 3600 + second_dist(rng));
    }
  }
  std::sort(stamps.begin(), stamps.end());

  Trace trace;
  std::vector<ObjectId> id_of_rank(n, kNoObject);
  auto& out = trace.mutable_requests();
  out.reserve(total);
  for (auto t : stamps) {
    auto rank = static_cast<std::uint64_t>(std::lower_bound(cdf.begin(), cdf.end(), unit(rng)) - cdf.begin());
    rank = std::min(rank, n - 1);
    if (id_of_rank[rank] == kNoObject) id_of_rank[rank] = trace.keys().intern(std::to_string(rank));
    out.push_back(Request{t, id_of_rank[rank], sizes[rank]});
  }
  return trace;
}

}  // namespace cachelab
