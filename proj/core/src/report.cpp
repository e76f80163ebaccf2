#include "ftsim/report.hpp"

#include "ftsim/trace.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>

namespace ftsim {

namespace {

std::string ghz_label(const FrequencyLevel& f) { return format_ghz(f.ghz) + " GHz"; }

std::string fixed2(double v) { return fmt::format("{:.2f}", round2(v)); }

}  // namespace

double round2(double v) {
  const double r = std::floor(v * 100.0 + 0.5) / 100.0;
  return r == 0.0 ? 0.0 : r;
}

SavingsReport make_report(std::span<const NodePlan> plans, const SystemProfile& profile) {
  SavingsReport report;
  report.plans.assign(plans.begin(), plans.end());
  std::stable_sort(report.plans.begin(), report.plans.end(),
                   [](const NodePlan& a, const NodePlan& b) { return a.node < b.node; });
  for (const auto& p : report.plans) {
    ReportRow row;
    row.node = p.node;
    row.compute_action = p.compute_changed(profile) ? ghz_label(p.compute) : "No action";
    switch (p.wait_action) {
      case WaitAction::None: row.wait_action = "No action"; break;
      case WaitAction::MinFreq: row.wait_action = ghz_label(profile.fmin()); break;
      case WaitAction::Sleep: row.wait_action = "sleep"; break;
    }
    row.t_comp_min = p.t_comp / 60.0;
    row.t_wait_min = p.t_wait / 60.0;
    row.tt_min = p.tt / 60.0;
    row.save_j = p.saving_j;
    row.save_rate_j_s = p.rate_j_s;
    row.save_pct = p.saving_pct;
    report.rows.push_back(row);
  }
  report.total_j = total_saving(report.plans);
  return report;
}

std::string format_report(const SavingsReport& report, ReportFormat format) {
  static constexpr std::array<const char*, 9> header{
      "node", "compute_action", "t_comp_min", "wait_action", "t_wait_min", "tt_min", "save_j", "save_rate_j_s", "save_pct"};

  std::vector<std::array<std::string, 9>> table;
  for (const auto& r : report.rows) {
    table.push_back({std::to_string(r.node), r.compute_action, fixed2(r.t_comp_min), r.wait_action, fixed2(r.t_wait_min),
                     fixed2(r.tt_min), fixed2(r.save_j), fixed2(r.save_rate_j_s), fixed2(r.save_pct)});
  }
  std::array<std::string, 9> total{"TOTAL", "", "", "", "", "", fixed2(report.total_j), "", ""};

  std::string out;
  if (format == ReportFormat::Csv) {
    auto emit = [&](const auto& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    emit(header);
    for (const auto& row : table) emit(row);
    emit(total);
    return out;
  }

  std::array<std::size_t, 9> width{};
  for (std::size_t i = 0; i < 9; ++i) {
    width[i] = std::string_view(header[i]).size();
    for (const auto& row : table) width[i] = std::max(width[i], row[i].size());
    width[i] = std::max(width[i], total[i].size());
  }
  // Text columns left-aligned, numbers right-aligned.
  auto numeric = [](std::size_t i) { return i != 1 && i != 3 && i != 0; };
  auto emit = [&](const auto& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) line += "  ";
      const std::string cell = cells[i];
      line += numeric(i) ? fmt::format("{:>{}}", cell, width[i]) : fmt::format("{:<{}}", cell, width[i]);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line;
    out += '\n';
  };
  emit(header);
  for (const auto& row : table) emit(row);
  emit(total);
  return out;
}

void write_report(const SavingsReport& report, const std::filesystem::path& path, ReportFormat format) {
  write_file_atomic(path, format_report(report, format));
}

}  // namespace ftsim
