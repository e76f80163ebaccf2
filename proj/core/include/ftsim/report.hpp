#pragma once

#include "ftsim/energy.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace ftsim {

struct ReportRow {
  NodeId node = -1;
  std::string compute_action;
  double t_comp_min = 0.0;
  std::string wait_action;
  double t_wait_min = 0.0;
  double tt_min = 0.0;
  Joules save_j = 0.0;
  double save_rate_j_s = 0.0;
  double save_pct = 0.0;
};

struct SavingsReport {
  std::vector<NodePlan> plans;
  std::vector<ReportRow> rows;
  Joules total_j = 0.0;
};

enum class ReportFormat { Csv, Text };

/// Rows in node order with the labels used in the tables: "No action",
/// "2.1 GHz", "sleep".
SavingsReport make_report(std::span<const NodePlan> plans, const SystemProfile& profile);

/// Two-decimal half-up rounding used for every printed number.
double round2(double v);

std::string format_report(const SavingsReport& report, ReportFormat format);

/// Throws IoError.
void write_report(const SavingsReport& report, const std::filesystem::path& path, ReportFormat format);

}  // namespace ftsim
