#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

#include "cachelab/trace.hpp"

namespace cachelab {

// A record as it appears in the text, before key interning.
struct TraceRecord {
  std::int64_t timestamp = 0;
  std::string key;
  std::uint64_t size = 0;
};

// Yields text lines from some byte source.
class LineSource {
 public:
  virtual ~LineSource() = default;
  virtual bool getline(std::string& line) = 0;
};

// Streaming reader for the `timestamp key size [ignored...]` text format.
// Blank lines and lines starting with '#' are skipped. Memory use does not
// grow with the number of records read.
class TraceReader {
 public:
  explicit TraceReader(std::istream& in);
  explicit TraceReader(std::unique_ptr<LineSource> source);
  ~TraceReader();
  TraceReader(TraceReader&&) noexcept;
  TraceReader& operator=(TraceReader&&) noexcept;

  // Throws ParseError on a malformed line, a non-positive size or a
  // decreasing timestamp.
  std::optional<TraceRecord> next();

  // 1-based number of the last line consumed.
  std::size_t line() const { return line_; }

 private:
  std::unique_ptr<LineSource> source_;
  std::string buffer_;
  std::size_t line_ = 0;
  std::optional<std::int64_t> last_timestamp_;
};

// Opens a trace file; gzip input is detected from its magic bytes.
TraceReader open_trace_file(const std::filesystem::path& path);

struct TraceReadStats {
  std::size_t records = 0;
  // Keys that appeared with more than one size; each was rewritten to the
  // last size seen for it.
  std::size_t size_conflicts = 0;
};

Trace read_trace(TraceReader& reader, TraceReadStats* stats = nullptr);
Trace read_trace(std::istream& in, TraceReadStats* stats = nullptr);
Trace read_trace_file(const std::filesystem::path& path, TraceReadStats* stats = nullptr);

void write_trace(const Trace& trace, std::ostream& out);
void write_trace_file(const Trace& trace, const std::filesystem::path& path);

}  // namespace cachelab
