#include "fracheat/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

namespace fracheat {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path.string());
  }
}

std::string entries_csv(const std::vector<MatrixEntry>& entries) {
  std::string out = "t,s,value\n";
  for (const auto& e : entries) {
    out += format_double(e.t) + ',' + format_double(e.s) + ',' + format_double(e.value) + '\n';
  }
  return out;
}

nlohmann::json entries_json(const std::vector<MatrixEntry>& entries) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& e : entries) rows.push_back({{"t", e.t}, {"s", e.s}, {"value", e.value}});
  return rows;
}

std::string reports_csv(const std::vector<VerificationReport>& reports) {
  std::string out = "check,H,d,worst_abs,worst_rel,t,s,pass\n";
  for (const auto& r : reports) {
    out += r.check + ',' + format_double(r.hurst) + ',' + std::to_string(r.dim) + ',' +
           format_double(r.worst_abs) + ',' + format_double(r.worst_rel) + ',' +
           format_double(r.t) + ',' + format_double(r.s) + ',' + (r.pass ? "true" : "false") +
           '\n';
  }
  return out;
}

nlohmann::json to_json(const VerificationReport& r) {
  return {{"check", r.check},         {"H", r.hurst},
          {"d", r.dim},               {"worst_abs", r.worst_abs},
          {"worst_rel", r.worst_rel}, {"t", r.t},
          {"s", r.s},                 {"pass", r.pass},
          {"tolerance", r.tolerance}, {"metric", r.relative ? "relative" : "absolute"},
          {"notes", r.notes}};
}

namespace {

double number_or_nan(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
}

}  // namespace

VerificationReport report_from_json(const nlohmann::json& j) {
  VerificationReport r;
  r.check = j.at("check").get<std::string>();
  r.hurst = number_or_nan(j, "H");
  r.dim = j.at("d").get<int>();
  r.worst_abs = number_or_nan(j, "worst_abs");
  r.worst_rel = number_or_nan(j, "worst_rel");
  r.t = number_or_nan(j, "t");
  r.s = number_or_nan(j, "s");
  r.pass = j.at("pass").get<bool>();
  r.tolerance = number_or_nan(j, "tolerance");
  r.relative = j.at("metric").get<std::string>() == "relative";
  r.notes = j.at("notes").get<std::vector<std::string>>();
  return r;
}

nlohmann::json reports_json(const std::vector<VerificationReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return arr;
}

std::string reports_table(const std::vector<VerificationReport>& reports) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-44s %6s %2s %12s %12s %10s  %s\n", "check", "H", "d",
                "worst_abs", "worst_rel", "tol", "result");
  out << line;
  for (const auto& r : reports) {
    std::snprintf(line, sizeof line, "%-44s %6.4g %2d %12.4e %12.4e %10.3g  %s\n",
                  r.check.c_str(), r.hurst, r.dim, r.worst_abs, r.worst_rel, r.tolerance,
                  r.pass ? "pass" : "FAIL");
    out << line;
    for (const auto& n : r.notes) out << "    " << n << '\n';
  }
  return out.str();
}

std::string mc_csv(const MCReport& r) {
  std::string out = "t,s,estimate,std_err,n\n";
  for (const McRow& row : r.rows()) {
    out += format_double(row.t) + ',' + format_double(row.s) + ',' + format_double(row.estimate) +
           ',' + format_double(row.std_err) + ',' + std::to_string(row.n) + '\n';
  }
  return out;
}

nlohmann::json mc_json(const MCReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const McRow& row : r.rows()) {
    rows.push_back({{"t", row.t},
                    {"s", row.s},
                    {"estimate", row.estimate},
                    {"std_err", row.std_err},
                    {"n", row.n}});
  }
  return {{"config", to_json(r.config)},
          {"x", r.x},
          {"rows", rows},
          {"times", r.times},
          {"skewness", r.skewness},
          {"excess_kurtosis", r.excess_kurtosis},
          {"skewness_se", r.skewness_se},
          {"kurtosis_se", r.kurtosis_se}};
}

std::string ensemble_csv(const PathEnsemble& e) {
  std::string out = "path,t,value\n";
  for (Eigen::Index p = 0; p < e.paths.rows(); ++p) {
    for (std::size_t i = 0; i < e.times.size(); ++i) {
      out += std::to_string(p) + ',' + format_double(e.times[i]) + ',' +
             format_double(e.paths(p, static_cast<Eigen::Index>(i))) + '\n';
    }
  }
  return out;
}

nlohmann::json ensemble_json(const PathEnsemble& e) {
  nlohmann::json paths = nlohmann::json::array();
  for (Eigen::Index p = 0; p < e.paths.rows(); ++p) {
    std::vector<double> row(e.paths.cols());
    for (Eigen::Index i = 0; i < e.paths.cols(); ++i) row[i] = e.paths(p, i);
    paths.push_back(row);
  }
  return {{"kernel", e.kernel_id}, {"seed", e.seed}, {"jitter", e.jitter},
          {"times", e.times},      {"paths", paths}};
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + '\n'; }

}  // namespace fracheat
