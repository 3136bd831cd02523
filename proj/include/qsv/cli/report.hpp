#pragma once

// Machine-readable (CSV, JSON) and human-readable report writers.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qsv/oracle.hpp"
#include "qsv/security.hpp"

namespace qsv::cli {

inline constexpr int kReportVersion = 1;

struct ReportRow {
  double n;  // N, or E[n] for variable-round runs
  double eps_h;
  double eps_d;
  double eps_sum;
  double bound_loose;
  double bound_tight;
  double slack;
  std::string attack;
  std::optional<double> alpha;
  std::string definition;
  std::string note;        // table only (e.g. the round distribution)
  double wall_time = 0.0;  // seconds; table only, never serialized
};

ReportRow make_row(const SecurityReport& report, std::string attack, std::optional<double> alpha);

/// Shortest round-trip representation.
std::string format_number(double x);

/// CSV with a versioned comment line, then N,eps_h,eps_d,eps_sum,bound_loose,
/// bound_tight,slack,attack,alpha,definition.
void write_csv(std::ostream& out, const std::vector<ReportRow>& rows, const std::string& command);
void write_json(std::ostream& out, const std::vector<ReportRow>& rows, const std::string& command);
void write_table(std::ostream& out, const std::vector<ReportRow>& rows);

/// Two-column data blocks: N vs eps_sum and N vs bound_tight, per definition.
void write_plot(std::ostream& out, const std::vector<ReportRow>& rows);

void write_checks_json(std::ostream& out, const std::vector<CheckResult>& results, std::uint64_t seed);
void write_checks_csv(std::ostream& out, const std::vector<CheckResult>& results);
void write_checks_table(std::ostream& out, const std::vector<CheckResult>& results);

void write_crossover_csv(std::ostream& out, const std::vector<CrossoverRow>& rows);
void write_crossover_json(std::ostream& out, const std::vector<CrossoverRow>& rows);
void write_crossover_table(std::ostream& out, const std::vector<CrossoverRow>& rows);

}  // namespace qsv::cli
