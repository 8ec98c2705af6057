#include "nre/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "nre/error.hpp"

namespace nre {

namespace {

constexpr std::string_view kTimes = "\xC3\x97";  // U+00D7

}  // namespace

std::string_view trace_format_name(TraceFormat format) {
  return format == TraceFormat::TextBits ? "text-bits" : "run-length";
}

TraceFormat parse_trace_format(std::string_view name) {
  if (name == "text-bits") return TraceFormat::TextBits;
  if (name == "run-length") return TraceFormat::RunLength;
  throw Error(ErrorKind::InvalidArgument, "unknown trace format '" + std::string(name) + "'");
}

std::string encode_trace(const Bits& trace, TraceFormat format, std::size_t line_width) {
  std::string out;
  if (format == TraceFormat::TextBits) {
    if (line_width == 0) throw Error(ErrorKind::InvalidArgument, "line width must be positive");
    out.reserve(trace.size() + trace.size() / line_width + 1);
    for (std::size_t t = 0; t < trace.size(); ++t) {
      out.push_back(trace[t] ? '1' : '0');
      if ((t + 1) % line_width == 0) out.push_back('\n');
    }
    if (trace.size() % line_width != 0) out.push_back('\n');
    return out;
  }
  for (std::size_t t = 0; t < trace.size();) {
    std::size_t run = 1;
    while (t + run < trace.size() && trace[t + run] == trace[t]) ++run;
    out += trace[t] ? '1' : '0';
    out += kTimes;
    out += std::to_string(run);
    out += '\n';
    t += run;
  }
  return out;
}

Bits decode_trace(std::string_view text, TraceFormat format) {
  Bits out;
  if (format == TraceFormat::TextBits) {
    for (char c : text) {
      if (c == '0' || c == '1') {
        out.push_back(static_cast<std::uint8_t>(c - '0'));
      } else if (c != '\n' && c != '\r') {
        throw Error(ErrorKind::InvalidArgument, std::string("unexpected character '") + c + "' in text-bits trace");
      }
    }
    return out;
  }
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto bad = [&] {
      return Error(ErrorKind::InvalidArgument, "malformed run-length line " + std::to_string(line_no));
    };
    if (line.size() < 1 + kTimes.size() + 1 || (line[0] != '0' && line[0] != '1') ||
        line.substr(1, kTimes.size()) != kTimes) {
      throw bad();
    }
    const std::string_view digits = line.substr(1 + kTimes.size());
    std::size_t count = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), count);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || count == 0) throw bad();
    out.insert(out.end(), count, static_cast<std::uint8_t>(line[0] - '0'));
  }
  return out;
}

void export_trace(const Bits& trace, const std::filesystem::path& path, TraceFormat format,
                  std::size_t line_width) {
  if (trace.empty()) throw Error(ErrorKind::InvalidArgument, "refusing to export an empty trace to " + path.string());
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  file << encode_trace(trace, format, line_width);
  if (!file) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

Bits import_trace(const std::filesystem::path& path, TraceFormat format) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for reading");
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return decode_trace(buffer.str(), format);
}

}  // namespace nre
