#pragma once

#include <json.hpp>

#include <string>
#include <string_view>

namespace kmcg::report {

inline constexpr const char* kToolVersion = "0.1.0";

// FNV-1a, 64-bit, rendered as 16 hex digits; used to echo input identity.
std::string fnv1a64_hex(std::string_view bytes);

// Reads a whole file; throws InputError when unreadable.
std::string slurp(const std::string& path);

// Common report envelope with stable key order.  Reports carry no wall-clock
// fields; timing is diagnostic output and goes to stderr so repeated runs
// stay byte-identical.
nlohmann::ordered_json envelope(const std::string& command);

}  // namespace kmcg::report
