#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace polarlens {

// ─── Errors ───────────────────────────────────────────────────
// Every failure the library reports derives from Error so callers
// (CLI, bindings) can map them to exit codes in one place.

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class NotFound : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

// ─── Time ─────────────────────────────────────────────────────

using Timestamp = std::chrono::sys_seconds;
using Date = std::chrono::sys_days;

/// Parses "YYYY-MM-DDTHH:MM:SSZ" (optionally with fractional seconds,
/// which are truncated). Returns nullopt on any malformed input.
std::optional<Timestamp> parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

/// Parses "YYYY-MM-DD".
std::optional<Date> parse_date(std::string_view text);
std::string format_date(Date day);

inline Date day_of(Timestamp ts) { return std::chrono::floor<std::chrono::days>(ts); }

// ─── Stance ───────────────────────────────────────────────────

enum class Stance { pro, anti, undecided };

std::string_view to_string(Stance s);
std::optional<Stance> parse_stance(std::string_view text);

/// Ordered stance pair: interactions authored by `source` towards `target`.
struct Direction {
    Stance source = Stance::pro;
    Stance target = Stance::anti;

    friend bool operator==(const Direction&, const Direction&) = default;
};

std::string to_string(Direction d);
/// Accepts "pro->anti" style tokens.
std::optional<Direction> parse_direction(std::string_view text);

/// Shortest representation that round-trips through strtod.
std::string format_double(double value);

} // namespace polarlens
