#include "qsv/cli/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace qsv::cli {
namespace {

using json = nlohmann::ordered_json;

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string fixed(double x, int width, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%*.*g", width, precision, x);
  return buf;
}

std::string padded(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

ReportRow make_row(const SecurityReport& report, std::string attack, std::optional<double> alpha) {
  ReportRow row;
  row.n = report.n_verify;
  row.eps_h = report.eps_h;
  row.eps_d = report.eps_d;
  row.eps_sum = report.eps_sum();
  row.bound_loose = report.bound_loose;
  row.bound_tight = report.bound;
  row.slack = report.slack;
  row.attack = std::move(attack);
  row.alpha = alpha;
  row.definition = std::string(to_string(report.definition));
  return row;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const std::vector<ReportRow>& rows, const std::string& command) {
  out << "# qsvlab report v" << kReportVersion << " command=" << command << '\n';
  out << "N,eps_h,eps_d,eps_sum,bound_loose,bound_tight,slack,attack,alpha,definition\n";
  for (const auto& r : rows) {
    out << format_number(r.n) << ',' << format_number(r.eps_h) << ',' << format_number(r.eps_d) << ','
        << format_number(r.eps_sum) << ',' << format_number(r.bound_loose) << ',' << format_number(r.bound_tight)
        << ',' << format_number(r.slack) << ',' << r.attack << ',' << (r.alpha ? format_number(*r.alpha) : "")
        << ',' << r.definition << '\n';
  }
}

void write_json(std::ostream& out, const std::vector<ReportRow>& rows, const std::string& command) {
  json doc;
  doc["version"] = kReportVersion;
  doc["command"] = command;
  json list = json::array();
  for (const auto& r : rows) {
    json row;
    row["N"] = r.n;
    row["eps_h"] = r.eps_h;
    row["eps_d"] = r.eps_d;
    row["eps_sum"] = r.eps_sum;
    row["bound_loose"] = r.bound_loose;
    row["bound_tight"] = r.bound_tight;
    row["slack"] = r.slack;
    row["attack"] = r.attack;
    row["alpha"] = r.alpha ? json(*r.alpha) : json(nullptr);
    row["definition"] = r.definition;
    list.push_back(std::move(row));
  }
  doc["rows"] = std::move(list);
  out << doc.dump(2) << '\n';
}

void write_table(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << padded("N", 8) << padded("definition", 12) << padded("attack", 16) << padded("eps_h", 13)
      << padded("eps_d", 13) << padded("eps_sum", 13) << padded("bound", 13) << padded("slack", 13) << "time[s]\n";
  for (const auto& r : rows) {
    out << padded(format_number(r.n), 8) << padded(r.definition, 12) << padded(r.attack, 16)
        << padded(fixed(r.eps_h, 11, 5), 13) << padded(fixed(r.eps_d, 11, 5), 13)
        << padded(fixed(r.eps_sum, 11, 5), 13) << padded(fixed(r.bound_tight, 11, 5), 13)
        << padded(fixed(r.slack, 11, 3), 13) << fixed(r.wall_time, 8, 2);
    if (!r.note.empty()) out << "  " << r.note;
    out << '\n';
  }
}

void write_plot(std::ostream& out, const std::vector<ReportRow>& rows) {
  for (const char* def : {"standalone", "composable"}) {
    bool any = false;
    for (const auto& r : rows) any = any || r.definition == def;
    if (!any) continue;
    out << "# " << def << ": N eps_sum\n";
    for (const auto& r : rows) {
      if (r.definition == def) out << format_number(r.n) << ' ' << format_number(r.eps_sum) << '\n';
    }
    out << "\n\n# " << def << ": N bound\n";
    for (const auto& r : rows) {
      if (r.definition == def) out << format_number(r.n) << ' ' << format_number(r.bound_tight) << '\n';
    }
    out << "\n\n";
  }
}

void write_checks_json(std::ostream& out, const std::vector<CheckResult>& results, std::uint64_t seed) {
  json doc;
  doc["version"] = kReportVersion;
  doc["seed"] = seed;
  bool all = true;
  json list = json::array();
  for (const auto& r : results) {
    all = all && r.passed;
    json item;
    item["name"] = r.name;
    item["passed"] = r.passed;
    item["worst_violation"] = number_or_null(r.worst_violation);
    item["tolerance"] = r.tolerance;
    item["samples"] = r.samples;
    item["witness"] = r.witness;
    list.push_back(std::move(item));
  }
  doc["passed"] = all;
  doc["checks"] = std::move(list);
  out << doc.dump(2) << '\n';
}

void write_checks_csv(std::ostream& out, const std::vector<CheckResult>& results) {
  out << "# qsvlab checks v" << kReportVersion << '\n';
  out << "name,passed,worst_violation,tolerance,samples\n";
  for (const auto& r : results) {
    out << r.name << ',' << (r.passed ? "true" : "false") << ',' << format_number(r.worst_violation) << ','
        << format_number(r.tolerance) << ',' << r.samples << '\n';
  }
}

void write_checks_table(std::ostream& out, const std::vector<CheckResult>& results) {
  int passed = 0;
  for (const auto& r : results) {
    passed += r.passed ? 1 : 0;
    out << (r.passed ? "PASS  " : "FAIL  ") << padded(r.name, 36) << "worst " << fixed(r.worst_violation, 10, 3)
        << "  tol " << fixed(r.tolerance, 7, 1) << "  n=" << r.samples;
    if (!r.passed) out << "  [" << r.witness << "]";
    out << '\n';
  }
  out << passed << '/' << results.size() << " checks passed\n";
}

void write_crossover_csv(std::ostream& out, const std::vector<CrossoverRow>& rows) {
  out << "# qsvlab crossover v" << kReportVersion << '\n';
  out << "N,naive_sum,iid_sum,composable_bound,iid_exceeds_naive\n";
  for (const auto& r : rows) {
    out << r.n << ',' << format_number(r.naive_sum) << ',' << format_number(r.iid_sum) << ','
        << format_number(r.composable_bound) << ',' << (r.iid_exceeds_naive ? "true" : "false") << '\n';
  }
}

void write_crossover_json(std::ostream& out, const std::vector<CrossoverRow>& rows) {
  json doc;
  doc["version"] = kReportVersion;
  json list = json::array();
  for (const auto& r : rows) {
    json item;
    item["N"] = r.n;
    item["naive_sum"] = r.naive_sum;
    item["iid_sum"] = r.iid_sum;
    item["composable_bound"] = r.composable_bound;
    item["iid_exceeds_naive"] = r.iid_exceeds_naive;
    list.push_back(std::move(item));
  }
  doc["rows"] = std::move(list);
  out << doc.dump(2) << '\n';
}

void write_crossover_table(std::ostream& out, const std::vector<CrossoverRow>& rows) {
  out << padded("N", 6) << padded("naive", 13) << padded("iid", 13) << padded("1/(4 sqrt N)", 14) << "iid > naive\n";
  for (const auto& r : rows) {
    out << padded(std::to_string(r.n), 6) << padded(fixed(r.naive_sum, 11, 5), 13)
        << padded(fixed(r.iid_sum, 11, 5), 13) << padded(fixed(r.composable_bound, 11, 5), 14)
        << (r.iid_exceeds_naive ? "yes" : "no") << '\n';
  }
}

}  // namespace qsv::cli
