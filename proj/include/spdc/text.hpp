#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Small text helpers shared by the fixture, config and CSV readers/writers.
namespace spdc::text {

std::string_view trim(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);

/// Strict full-string parse; returns false on trailing garbage or overflow.
bool parse_double(std::string_view s, double& out);
bool parse_int(std::string_view s, int& out);

/// Shortest representation that round-trips.
std::string exact(double x);

/// `digits` significant digits, printf %g style.
std::string sig(double x, int digits);

/// 64-bit FNV-1a as 16 lowercase hex characters.
std::string fnv1a_hex(std::string_view data);

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Digest over `key=value\n` lines in the given order.
std::string digest_of(const KeyValues& kv);

} // namespace spdc::text
