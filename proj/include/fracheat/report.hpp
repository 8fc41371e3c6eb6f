// CSV / JSON serialization of matrices, verification reports and Monte Carlo
// estimates. Floating point values are printed with 17 significant digits so
// they round-trip exactly.
#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "fracheat/props.hpp"
#include "fracheat/spde.hpp"

namespace fracheat {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_double(double x);

/// Writes to a temporary sibling file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

struct MatrixEntry {
  double t;
  double s;
  double value;
};

/// Header `t,s,value`.
std::string entries_csv(const std::vector<MatrixEntry>& entries);
nlohmann::json entries_json(const std::vector<MatrixEntry>& entries);

/// Header `check,H,d,worst_abs,worst_rel,t,s,pass`.
std::string reports_csv(const std::vector<VerificationReport>& reports);
nlohmann::json to_json(const VerificationReport& r);
VerificationReport report_from_json(const nlohmann::json& j);
nlohmann::json reports_json(const std::vector<VerificationReport>& reports);

/// Fixed-width table for terminals.
std::string reports_table(const std::vector<VerificationReport>& reports);

/// Header `t,s,estimate,std_err,n`.
std::string mc_csv(const MCReport& r);
nlohmann::json mc_json(const MCReport& r);

/// Header `path,t,value`, one row per path and time.
std::string ensemble_csv(const PathEnsemble& e);
nlohmann::json ensemble_json(const PathEnsemble& e);

/// Dump with the 17-digit number format used by the CSV writers, plus a
/// trailing newline.
std::string dump_json(const nlohmann::json& j);

}  // namespace fracheat
