#include "cachelab/trace_io.hpp"

#include <zlib.h>

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "cachelab/error.hpp"
#include "cachelab/log.hpp"

namespace cachelab {
namespace {

class StreamLineSource final : public LineSource {
 public:
  explicit StreamLineSource(std::istream& in) : in_(in) {}
  bool getline(std::string& line) override { return static_cast<bool>(std::getline(in_, line)); }

 private:
  std::istream& in_;
};

class FileLineSource final : public LineSource {
 public:
  explicit FileLineSource(const std::filesystem::path& path) : in_(path) {
    if (!in_) throw Error("cannot open trace file " + path.string());
  }
  bool getline(std::string& line) override { return static_cast<bool>(std::getline(in_, line)); }

 private:
  std::ifstream in_;
};

class GzipLineSource final : public LineSource {
 public:
  explicit GzipLineSource(const std::filesystem::path& path) : file_(gzopen(path.c_str(), "rb")) {
    if (file_ == nullptr) throw Error("cannot open gzip trace " + path.string());
    gzbuffer(file_, 1 << 17);
  }
  ~GzipLineSource() override { gzclose(file_); }
  GzipLineSource(const GzipLineSource&) = delete;
  GzipLineSource& operator=(const GzipLineSource&) = delete;

  bool getline(std::string& line) override {
    line.clear();
    std::array<char, 4096> chunk{};
    while (gzgets(file_, chunk.data(), static_cast<int>(chunk.size())) != nullptr) {
      std::string_view piece(chunk.data());
      if (!piece.empty() && piece.back() == '\n') {
        piece.remove_suffix(1);
        line.append(piece);
        return true;
      }
      line.append(piece);
    }
    int err = 0;
    gzerror(file_, &err);
    if (err != Z_OK && err != Z_STREAM_END) throw Error("gzip decode failure");
    return !line.empty();
  }

 private:
  gzFile file_;
};

template <typename Int>
bool parse_int(std::string_view token, Int& out) {
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

// Splits off the next whitespace-delimited token.
std::string_view next_token(std::string_view& rest) {
  std::size_t b = 0;
  while (b < rest.size() && (rest[b] == ' ' || rest[b] == '\t' || rest[b] == '\r')) ++b;
  std::size_t e = b;
  while (e < rest.size() && rest[e] != ' ' && rest[e] != '\t' && rest[e] != '\r') ++e;
  auto tok = rest.substr(b, e - b);
  rest.remove_prefix(e);
  return tok;
}

}  // namespace

TraceReader::TraceReader(std::istream& in) : source_(std::make_unique<StreamLineSource>(in)) {}
TraceReader::TraceReader(std::unique_ptr<LineSource> source) : source_(std::move(source)) {}
TraceReader::~TraceReader() = default;
TraceReader::TraceReader(TraceReader&&) noexcept = default;
TraceReader& TraceReader::operator=(TraceReader&&) noexcept = default;

std::optional<TraceRecord> TraceReader::next() {
  while (source_->getline(buffer_)) {
    ++line_;
    std::string_view rest(buffer_);
    auto first = next_token(rest);
    if (first.empty() || first.front() == '#') continue;
    auto key = next_token(rest);
    auto size_tok = next_token(rest);
    if (size_tok.empty()) throw ParseError(line_, "expected `timestamp key size`");
    TraceRecord rec;
    if (!parse_int(first, rec.timestamp)) throw ParseError(line_, "bad timestamp '" + std::string(first) + "'");
    std::int64_t size = 0;
    if (!parse_int(size_tok, size)) throw ParseError(line_, "bad size '" + std::string(size_tok) + "'");
    if (size <= 0) throw ParseError(line_, "non-positive size " + std::string(size_tok));
    if (last_timestamp_ && rec.timestamp < *last_timestamp_) throw ParseError(line_, "timestamp decreases");
    last_timestamp_ = rec.timestamp;
    rec.key.assign(key);
    rec.size = static_cast<std::uint64_t>(size);
    return rec;
  }
  return std::nullopt;
}

TraceReader open_trace_file(const std::filesystem::path& path) {
  std::array<unsigned char, 2> magic{};
  {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw Error("cannot open trace file " + path.string());
    probe.read(reinterpret_cast<char*>(magic.data()), magic.size());
    if (probe.gcount() < 2) magic = {0, 0};
  }
  if (magic[0] == 0x1f && magic[1] == 0x8b) return TraceReader(std::make_unique<GzipLineSource>(path));
  return TraceReader(std::make_unique<FileLineSource>(path));
}

Trace read_trace(TraceReader& reader, TraceReadStats* stats) {
  Trace trace;
  std::vector<std::uint64_t> size_of;
  std::vector<bool> conflicted;
  TraceReadStats local;
  while (auto rec = reader.next()) {
    trace.push(rec->timestamp, rec->key, rec->size);
    const auto id = trace.requests().back().id;
    if (id >= size_of.size()) {
      size_of.resize(id + 1, 0);
      conflicted.resize(id + 1, false);
    }
    if (size_of[id] != 0 && size_of[id] != rec->size && !conflicted[id]) {
      conflicted[id] = true;
      ++local.size_conflicts;
    }
    size_of[id] = rec->size;
    ++local.records;
  }
  if (local.size_conflicts > 0) {
    for (auto& r : trace.mutable_requests()) r.size = size_of[r.id];
    log::warning(std::to_string(local.size_conflicts) + " keys changed size; latest size kept");
  }
  if (stats != nullptr) *stats = local;
  return trace;
}

Trace read_trace(std::istream& in, TraceReadStats* stats) {
  TraceReader reader(in);
  return read_trace(reader, stats);
}

Trace read_trace_file(const std::filesystem::path& path, TraceReadStats* stats) {
  auto reader = open_trace_file(path);
  return read_trace(reader, stats);
}

void write_trace(const Trace& trace, std::ostream& out) {
  for (const auto& r : trace.requests()) {
    out << r.timestamp << ' ' << trace.key_name(r.id) << ' ' << r.size << '\n';
  }
}

void write_trace_file(const Trace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write trace file " + path.string());
  write_trace(trace, out);
}

}  // namespace cachelab
