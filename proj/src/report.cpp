#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "grassmann/error.hpp"
#include "grassmann/verifier.hpp"

namespace grassmann {

namespace {

// Hand-rolled writer: keys are emitted in sorted order and doubles round-trip
// at 17 significant digits; non-finite values become strings.
std::string number(double x) {
  if (std::isnan(x)) return "\"nan\"";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string check_json(const CheckResult& r) {
  std::ostringstream os;
  os << "{\"max_abs_error\": " << number(r.max_abs_error) << ", \"name\": " << quoted(r.name)
     << ", \"pass\": " << (r.pass ? "true" : "false") << ", \"tolerance\": " << number(r.tolerance)
     << ", \"trials\": " << r.trials;
  if (r.worst_seed) os << ", \"worst_seed\": " << *r.worst_seed;
  os << "}";
  return os.str();
}

double read_number(const nlohmann::json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
    throw Error(ErrorKind::parse_error, "bad number '" + s + "'");
  }
  return j.get<double>();
}

}  // namespace

std::string emit_report(std::span<const CheckResult> results, ReportFormat format,
                        const SuiteConfig* cfg) {
  std::ostringstream os;
  if (format == ReportFormat::text) {
    for (const auto& r : results) {
      char line[256];
      std::snprintf(line, sizeof line, "%s  %-45s trials=%-5d max_err=%-12.4g tol=%.3g",
                    r.pass ? "PASS" : "FAIL", r.name.c_str(), r.trials, r.max_abs_error,
                    r.tolerance);
      os << line;
      if (!r.pass && r.worst_seed) os << "  worst_seed=" << *r.worst_seed;
      os << "\n";
    }
    return os.str();
  }

  os << "{\n  \"checks\": [";
  for (std::size_t i = 0; i < results.size(); ++i)
    os << (i ? ",\n    " : "\n    ") << check_json(results[i]);
  os << (results.empty() ? "]" : "\n  ]");
  if (cfg) {
    os << ",\n  \"dims\": [";
    for (std::size_t i = 0; i < cfg->dims.size(); ++i) os << (i ? ", " : "") << cfg->dims[i];
    os << "],\n  \"seed\": " << cfg->seed << ",\n  \"suite\": " << quoted(to_string(cfg->suite));
  }
  os << "\n}\n";
  return os.str();
}

std::vector<CheckResult> parse_report(const std::string& json_text) {
  std::vector<CheckResult> out;
  try {
    const auto doc = nlohmann::json::parse(json_text);
    for (const auto& c : doc.at("checks")) {
      CheckResult r;
      r.name = c.at("name").get<std::string>();
      r.trials = c.at("trials").get<int>();
      r.max_abs_error = read_number(c.at("max_abs_error"));
      r.tolerance = read_number(c.at("tolerance"));
      r.pass = c.at("pass").get<bool>();
      if (c.contains("worst_seed")) r.worst_seed = c.at("worst_seed").get<std::uint64_t>();
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse_error, e.what());
  }
  return out;
}

}  // namespace grassmann
