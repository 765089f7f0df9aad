#pragma once

// Byte-stable JSON output: floats are always written with a fixed number of
// significant digits so two runs with equal inputs produce identical files.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace projhull {

using nlohmann::json;

inline std::string format_double(double x, int digits) {
  if (!std::isfinite(x)) return "null";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

namespace detail {

inline void dump_fixed_rec(const json& j, std::ostringstream& os, int indent, int depth, int digits) {
  const auto pad = [&](int d) {
    if (indent > 0) os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        first = false;
        pad(depth + 1);
        os << json(it.key()).dump() << (indent > 0 ? ": " : ":");
        dump_fixed_rec(it.value(), os, indent, depth + 1, digits);
      }
      pad(depth);
      os << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars stay on one line; they dominate curve files.
      bool scalars = true;
      for (const auto& e : j) scalars = scalars && !e.is_structured();
      os << '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) os << (scalars ? ", " : ",");
        first = false;
        if (!scalars) pad(depth + 1);
        dump_fixed_rec(e, os, indent, depth + 1, digits);
      }
      if (!scalars) pad(depth);
      os << ']';
      return;
    }
    case json::value_t::number_float:
      os << format_double(j.get<double>(), digits);
      return;
    default:
      os << j.dump();
      return;
  }
}

}  // namespace detail

inline std::string dump_fixed(const json& j, int indent = 2, int digits = 17) {
  std::ostringstream os;
  detail::dump_fixed_rec(j, os, indent, 0, digits);
  os << '\n';
  return os.str();
}

}  // namespace projhull
