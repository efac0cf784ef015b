#pragma once

// Command-line front end. Every command returns a Report; `run` parses the
// arguments, writes the report and maps it to an exit code.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "steckin/params.hpp"
#include "steckin/rng.hpp"
#include "steckin/scan.hpp"

namespace steckin::cli {

enum class Format { csv, json };

struct RunConfig {
  std::string command;
  Params params;
  /// Unset means the per-command default (10^4, or 200 for the oracle).
  std::optional<std::size_t> N;
  bool r_set = false;
  bool a_set = false;
  GridSpec grid{0.0, 1.0, 2001, 3};
  std::uint64_t seed = kDefaultSeed;
  int restarts = 8;
  unsigned jobs = 1;
  std::string output_path;
  Format format = Format::csv;

  std::string family;
  std::string target = "p-star";
  std::string construction = "main";
  std::string generator = "cesaro";
  std::string check = "norm";
  std::string sign = "plus";
  bool counterexample = false;
  std::optional<double> extremal_eps;
  std::optional<double> L;
  std::size_t budget = 100000;
  int iters = 2000;
  int samples = 100;
  double tol = 1e-9;
  bool summary_only = false;
  bool per_n_rows = false;
};

struct ReportRow {
  std::string check_id;
  Params params;
  std::size_t N = 0;
  std::uint64_t seed = 0;
  double value = 0.0;
  double constant = 0.0;
  double margin = 0.0;
  bool pass = true;
  long long runtime_ms = 0;
};

struct Report {
  std::vector<ReportRow> rows;
  /// Overall verdict; per-cell rows do not affect it.
  bool pass = true;
  /// Ratio certificate (oracle) as a JSON document.
  std::string certificate;
  /// Chain CSV (construct) written after the report when present.
  std::string chain_csv;
};

inline constexpr const char* kCsvHeader =
    "check_id,p,r,alpha,beta,a,N,seed,value,constant,margin,pass,runtime_ms";

Report cmd_criteria(const RunConfig& cfg);
Report cmd_threshold(const RunConfig& cfg);
Report cmd_construct(const RunConfig& cfg);
Report cmd_oracle(const RunConfig& cfg);
Report cmd_matnorm(const RunConfig& cfg);

void write_csv(std::ostream& os, const Report& report);
void write_json(std::ostream& os, const Report& report);

/// Exit codes: 0 every check passed, 1 a check failed, 2 usage or
/// parameter error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace steckin::cli
