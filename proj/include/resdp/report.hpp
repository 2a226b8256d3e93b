#pragma once

// Verification reports and their JSON form.
//
// Keys: check, n, m, sign, samples, seed, tolerance, max_defect, pass,
// details[], timestamp. Floats are written with 17 significant digits;
// non-finite values are written as null and read back as NaN.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"
#include "resdp/io.hpp"
#include "resdp/resonance_maps.hpp"

namespace resdp {

struct ReportDetail {
  std::string label;
  double max_defect = 0.0;
  double tolerance = 0.0;
  bool pass = false;

  bool operator==(const ReportDetail&) const = default;
};

struct VerificationReport {
  std::string check;
  int n = 1;
  int m = 1;
  FormSign sign = FormSign::plus;
  std::size_t samples = 0;
  std::uint64_t seed = 42;
  double tolerance = 0.0;
  double max_defect = 0.0;
  bool pass = false;
  std::vector<ReportDetail> details;
  /// ISO 8601 UTC; the only field that varies between identical runs.
  std::string timestamp;

  /// Folds a detail into the headline numbers; pass iff max_defect <= tolerance.
  void add(std::string label, double defect, double detail_tolerance) {
    const bool ok = defect <= detail_tolerance;
    details.push_back({std::move(label), defect, detail_tolerance, ok});
    if (std::isnan(defect) || defect > max_defect || std::isnan(max_defect)) max_defect = defect;
    pass = max_defect <= tolerance;
  }

  /// Records a failure that stopped the check early.
  void fail(std::string label) { add(std::move(label), std::numeric_limits<double>::infinity(), tolerance); }
};

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace detail {

inline std::string json_number(double x) { return std::isfinite(x) ? format_g17(x) : "null"; }

inline std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

inline void append_report(std::string& out, const VerificationReport& r, const std::string& indent) {
  const std::string in = indent + "  ";
  out += "{\n";
  out += in + "\"check\": " + json_string(r.check) + ",\n";
  out += in + "\"n\": " + std::to_string(r.n) + ",\n";
  out += in + "\"m\": " + std::to_string(r.m) + ",\n";
  out += in + "\"sign\": " + json_string(std::string(to_string(r.sign))) + ",\n";
  out += in + "\"samples\": " + std::to_string(r.samples) + ",\n";
  out += in + "\"seed\": " + std::to_string(r.seed) + ",\n";
  out += in + "\"tolerance\": " + json_number(r.tolerance) + ",\n";
  out += in + "\"max_defect\": " + json_number(r.max_defect) + ",\n";
  out += in + "\"pass\": " + (r.pass ? "true" : "false") + ",\n";
  out += in + "\"details\": [";
  for (std::size_t i = 0; i < r.details.size(); ++i) {
    const auto& d = r.details[i];
    out += i ? ",\n" : "\n";
    out += in + "  {\"label\": " + json_string(d.label) + ", \"max_defect\": " + json_number(d.max_defect) +
           ", \"tolerance\": " + json_number(d.tolerance) + ", \"pass\": " + (d.pass ? "true" : "false") + "}";
  }
  out += r.details.empty() ? "],\n" : "\n" + in + "],\n";
  out += in + "\"timestamp\": " + json_string(r.timestamp) + "\n";
  out += indent + "}";
}

inline double json_double(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

inline FormSign parse_sign(const std::string& s) {
  if (s == "plus") return FormSign::plus;
  if (s == "minus") return FormSign::minus;
  throw Error(ErrorKind::BadParams, "sign must be plus or minus, got '" + s + "'");
}

}  // namespace detail

inline std::string to_json(const VerificationReport& r) {
  std::string out;
  detail::append_report(out, r, "");
  return out + "\n";
}

/// Several reports under one object with an aggregate pass flag.
inline std::string to_json(const std::vector<VerificationReport>& reports, std::uint64_t seed,
                           const std::string& timestamp) {
  bool all = true;
  std::size_t failed = 0;
  for (const auto& r : reports) {
    all = all && r.pass;
    failed += r.pass ? 0 : 1;
  }
  std::string out = "{\n  \"check\": \"all\",\n  \"seed\": " + std::to_string(seed) +
                    ",\n  \"count\": " + std::to_string(reports.size()) + ",\n  \"failed\": " + std::to_string(failed) +
                    ",\n  \"pass\": " + (all ? "true" : "false") + ",\n  \"reports\": [";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    out += i ? ",\n    " : "\n    ";
    detail::append_report(out, reports[i], "    ");
  }
  out += reports.empty() ? "],\n" : "\n  ],\n";
  out += "  \"timestamp\": " + detail::json_string(timestamp) + "\n}\n";
  return out;
}

inline VerificationReport report_from_json(const nlohmann::json& j) {
  VerificationReport r;
  r.check = j.at("check").get<std::string>();
  r.n = j.at("n").get<int>();
  r.m = j.at("m").get<int>();
  r.sign = detail::parse_sign(j.at("sign").get<std::string>());
  r.samples = j.at("samples").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.tolerance = detail::json_double(j.at("tolerance"));
  r.max_defect = detail::json_double(j.at("max_defect"));
  r.pass = j.at("pass").get<bool>();
  for (const auto& d : j.at("details"))
    r.details.push_back({d.at("label").get<std::string>(), detail::json_double(d.at("max_defect")),
                         detail::json_double(d.at("tolerance")), d.at("pass").get<bool>()});
  r.timestamp = j.value("timestamp", "");
  return r;
}

inline VerificationReport report_from_json(const std::string& text) {
  try {
    return report_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::BadParams, std::string("malformed report: ") + e.what());
  }
}

inline std::vector<VerificationReport> reports_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    std::vector<VerificationReport> out;
    if (j.contains("reports"))
      for (const auto& r : j.at("reports")) out.push_back(report_from_json(r));
    else
      out.push_back(report_from_json(j));
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::BadParams, std::string("malformed report: ") + e.what());
  }
}

}  // namespace resdp
