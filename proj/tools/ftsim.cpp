// Command-line front end: run a scenario file, write the report and trace.

#include "ftsim/driver.hpp"
#include "ftsim/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kIo = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-aware failure recovery simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Simulate a scenario and report per-node savings");
  std::string scenario_path;
  std::string trace_path;
  std::string report_path;
  std::string format = "csv";
  std::string depth;
  bool no_strategies = false;
  std::optional<double> horizon;

  run->add_option("scenario", scenario_path, "Scenario file")->required();
  run->add_option("--trace", trace_path, "Write the execution trace here");
  run->add_option("--report", report_path, "Write the savings report here (default: stdout)");
  run->add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "text"}));
  run->add_option("--depth", depth, "Communications examined per process pair, or 'auto'");
  run->add_flag("--no-strategies", no_strategies, "Reference run without any intervention");
  run->add_option("--horizon", horizon, "Application work per process, in seconds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    ftsim::Scenario s = ftsim::load_scenario(scenario_path);
    if (!depth.empty()) {
      if (depth == "auto") {
        s.depth_auto = true;
      } else {
        std::size_t used = 0;
        int d = 0;
        try {
          d = std::stoi(depth, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != depth.size() || d < 1) {
          std::cerr << "ftsim: --depth expects a positive integer or 'auto'\n";
          return kInvalid;
        }
        s.depth_auto = false;
        s.depth.depth = d;
      }
    }
    if (horizon) s.horizon = *horizon;
    if (no_strategies) s.strategies_enabled = false;
    ftsim::finalize(s);

    const auto out = ftsim::run_simulation(s);
    const auto fmt = format == "text" ? ftsim::ReportFormat::Text : ftsim::ReportFormat::Csv;
    if (report_path.empty()) {
      std::cout << ftsim::format_report(out.report, fmt);
    } else {
      ftsim::write_report(out.report, report_path, fmt);
    }
    if (!trace_path.empty()) ftsim::write_trace(out.trace, trace_path);
    if (out.fallback != ftsim::Fallback::None) {
      std::cerr << "ftsim: selected strategy would delay completion; "
                << (out.fallback == ftsim::Fallback::Dropped ? "no strategy applied\n"
                                                             : "compute kept at maximum frequency\n");
    }
  } catch (const ftsim::IoError& e) {
    std::cerr << "ftsim: " << e.what() << '\n';
    return kIo;
  } catch (const ftsim::Error& e) {
    std::cerr << "ftsim: " << e.what() << '\n';
    return kInvalid;
  }
  return kOk;
}
