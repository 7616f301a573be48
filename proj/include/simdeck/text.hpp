#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Locale-independent number <-> text helpers shared by the parser, the store
// and the wire protocol.
namespace simdeck::text {

std::string_view trim(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char sep);

/// Accepts "3", "-1", ".5", "1e-3", "+2". Rejects trailing garbage.
std::optional<double> parse_double(std::string_view s);

/// Accepts integer literals only ("3", "-1", "+7").
std::optional<std::int64_t> parse_int(std::string_view s);

/// Shortest representation that reparses to the same double.
std::string format_double(double v);

std::string format_int(std::int64_t v);

}  // namespace simdeck::text
