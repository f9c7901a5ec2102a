// CLI report: echoed inputs, computed outputs, and tolerance checks,
// serialized as JSON with alphabetically sorted keys and 17-significant-digit
// floats. The serializer is hand-rolled because byte-stable fixed-precision
// output is the point; generic writers use shortest-round-trip floats.

#pragma once

#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "pbn/io.hpp"

namespace pbn {

struct Check {
  std::string name;
  double expected;
  double got;
  double tolerance;

  bool pass() const { return std::abs(expected - got) <= tolerance; }
};

using ReportValue =
    std::variant<double, long long, std::string, std::vector<double>>;

struct Report {
  std::string command;
  long long seed = 42;
  std::map<std::string, ReportValue> inputs;
  std::map<std::string, ReportValue> outputs;
  std::vector<Check> checks;

  void add_check(const std::string& name, double expected, double got,
                 double tolerance) {
    checks.push_back({name, expected, got, tolerance});
  }

  bool all_pass() const {
    for (const auto& c : checks) {
      if (!c.pass()) return false;
    }
    return true;
  }

  void write(std::ostream& out) const;
};

namespace detail {

inline void write_value(std::ostream& out, const ReportValue& v) {
  if (const auto* d = std::get_if<double>(&v)) {
    out << format_double(*d);
  } else if (const auto* i = std::get_if<long long>(&v)) {
    out << *i;
  } else if (const auto* s = std::get_if<std::string>(&v)) {
    out << nlohmann::json(*s).dump();
  } else {
    const auto& vec = std::get<std::vector<double>>(v);
    out << '[';
    for (std::size_t k = 0; k < vec.size(); ++k) {
      if (k > 0) out << ", ";
      out << format_double(vec[k]);
    }
    out << ']';
  }
}

inline void write_map(std::ostream& out,
                      const std::map<std::string, ReportValue>& m) {
  out << '{';
  bool first = true;
  for (const auto& [key, value] : m) {
    if (!first) out << ", ";
    first = false;
    out << nlohmann::json(key).dump() << ": ";
    write_value(out, value);
  }
  out << '}';
}

}  // namespace detail

inline void Report::write(std::ostream& out) const {
  out << "{\"checks\": [";
  for (std::size_t i = 0; i < checks.size(); ++i) {
    if (i > 0) out << ", ";
    const auto& c = checks[i];
    out << "{\"expected\": " << format_double(c.expected)
        << ", \"got\": " << format_double(c.got)
        << ", \"name\": " << nlohmann::json(c.name).dump()
        << ", \"pass\": " << (c.pass() ? "true" : "false")
        << ", \"tolerance\": " << format_double(c.tolerance) << '}';
  }
  out << "], \"command\": " << nlohmann::json(command).dump()
      << ", \"inputs\": ";
  detail::write_map(out, inputs);
  out << ", \"outputs\": ";
  detail::write_map(out, outputs);
  out << ", \"seed\": " << seed << "}\n";
}

}  // namespace pbn
