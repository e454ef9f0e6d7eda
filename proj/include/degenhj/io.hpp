#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace degenhj {

/// 17 significant digits: enough to round-trip any double.
[[nodiscard]] std::string format_double(double v);

/// 64-bit FNV-1a, used to tag output files with the configuration they came from.
[[nodiscard]] std::uint64_t fnv1a64(std::string_view bytes) noexcept;

[[nodiscard]] std::string hex64(std::uint64_t v);

/// "# config_hash=<hex>" line that starts every CSV artifact.
[[nodiscard]] std::string csv_header_comment(std::string_view config_hash);

}  // namespace degenhj
