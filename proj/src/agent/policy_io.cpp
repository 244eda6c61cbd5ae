#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "cachelab/agent/qnetwork.hpp"
#include "cachelab/error.hpp"

namespace cachelab::agent {

namespace {

constexpr char kMagic[4] = {'C', 'L', 'Q', 'P'};
// Refuse absurd headers before allocating.
constexpr std::uint64_t kMaxDimension = 1u << 20;

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char bytes[4];
  for (int i = 0; i < 4; ++i) bytes[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

void read_exact(std::istream& in, unsigned char* dst, std::size_t n, const char* what) {
  in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    throw FormatError(std::string("policy file truncated while reading ") + what);
  }
}

std::uint64_t get_u64(std::istream& in, const char* what) {
  unsigned char bytes[8];
  read_exact(in, bytes, 8, what);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

std::uint32_t get_u32(std::istream& in, const char* what) {
  unsigned char bytes[4];
  read_exact(in, bytes, 4, what);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in, const char* what) { return std::bit_cast<double>(get_u64(in, what)); }

template <typename Matrix>
void put_block(std::ostream& out, const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) put_f64(out, m(r, c));
}

template <typename Matrix>
void get_block(std::istream& in, Matrix& m, const char* what) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = get_f64(in, what);
}

}  // namespace

void save_policy(const QPolicy& policy, std::ostream& out) {
  out.write(kMagic, 4);
  put_u32(out, kPolicyFormatVersion);
  put_u64(out, policy.rear_n);
  put_u64(out, policy.hidden);
  put_u32(out, static_cast<std::uint32_t>(kFeaturesPerRow));
  put_u64(out, policy.generation);
  for (const double v : policy.scaling.lo) put_f64(out, v);
  for (const double v : policy.scaling.hi) put_f64(out, v);
  put_block(out, policy.w1);
  put_block(out, policy.b1);
  put_block(out, policy.w2);
  put_block(out, policy.b2);
  if (!out) throw Error("failed to write policy");
}

QPolicy load_policy(std::istream& in) {
  unsigned char magic[4];
  read_exact(in, magic, 4, "magic");
  if (std::memcmp(magic, kMagic, 4) != 0) throw FormatError("not a policy file (bad magic)");
  const auto version = get_u32(in, "version");
  if (version != kPolicyFormatVersion) {
    throw FormatError("incompatible policy format version " + std::to_string(version) + ", expected " +
                      std::to_string(kPolicyFormatVersion));
  }
  const auto rear_n = get_u64(in, "N");
  const auto hidden = get_u64(in, "hidden width");
  const auto features = get_u32(in, "features per row");
  if (features != kFeaturesPerRow) {
    throw FormatError("policy has " + std::to_string(features) + " features per row, expected " +
                      std::to_string(kFeaturesPerRow));
  }
  if (rear_n == 0 || hidden == 0 || rear_n > kMaxDimension || hidden > kMaxDimension) {
    throw FormatError("policy dimensions out of range");
  }
  QPolicy p = QPolicy::zeros(rear_n, hidden);
  p.generation = get_u64(in, "generation");
  for (auto& v : p.scaling.lo) v = get_f64(in, "scaling");
  for (auto& v : p.scaling.hi) v = get_f64(in, "scaling");
  get_block(in, p.w1, "w1");
  get_block(in, p.b1, "b1");
  get_block(in, p.w2, "w2");
  get_block(in, p.b2, "b2");
  return p;
}

void save_policy_file(const QPolicy& policy, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  save_policy(policy, out);
}

QPolicy load_policy_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return load_policy(in);
}

}  // namespace cachelab::agent
