#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "nre/numeric.hpp"

namespace nre {

enum class TraceFormat { TextBits, RunLength };

std::string_view trace_format_name(TraceFormat format);
/// Accepts "text-bits" and "run-length".
TraceFormat parse_trace_format(std::string_view name);

/// text-bits: one '0'/'1' per step, a newline after every `line_width`
/// symbols and after a final partial line.
/// run-length: one "value×count" line per maximal run.
std::string encode_trace(const Bits& trace, TraceFormat format, std::size_t line_width);
Bits decode_trace(std::string_view text, TraceFormat format);

/// Throws Io with the path in the message.
void export_trace(const Bits& trace, const std::filesystem::path& path, TraceFormat format,
                  std::size_t line_width);
Bits import_trace(const std::filesystem::path& path, TraceFormat format);

}  // namespace nre
