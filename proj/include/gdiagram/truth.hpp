#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace gdiag {

/// Three-valued truth. The numeric order False < Unknown < True makes the
/// strong Kleene connectives plain min/max.
enum class Truth3 : unsigned char { False = 0, Unknown = 1, True = 2 };

constexpr Truth3 kleene_not(Truth3 a) {
  switch (a) {
    case Truth3::True: return Truth3::False;
    case Truth3::False: return Truth3::True;
    default: return Truth3::Unknown;
  }
}

constexpr Truth3 kleene_and(Truth3 a, Truth3 b) { return a < b ? a : b; }
constexpr Truth3 kleene_or(Truth3 a, Truth3 b) { return a < b ? b : a; }
constexpr Truth3 kleene_implies(Truth3 a, Truth3 b) { return kleene_or(kleene_not(a), b); }

constexpr bool is_definite(Truth3 a) { return a != Truth3::Unknown; }

constexpr Truth3 from_bool(bool b) { return b ? Truth3::True : Truth3::False; }

inline std::string_view to_string(Truth3 a) {
  switch (a) {
    case Truth3::True: return "true";
    case Truth3::False: return "false";
    default: return "unknown";
  }
}

inline std::optional<Truth3> parse_truth(std::string_view s) {
  if (s == "true" || s == "T") return Truth3::True;
  if (s == "false" || s == "F") return Truth3::False;
  if (s == "unknown" || s == "?") return Truth3::Unknown;
  return std::nullopt;
}

}  // namespace gdiag
