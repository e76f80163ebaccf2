// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on failure.

#include "ftsim/cascade.hpp"
#include "ftsim/driver.hpp"
#include "ftsim/report.hpp"
#include "ftsim/trace.hpp"

#include "oracle.hpp"
#include "support.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace ftsim;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

struct Expected {
  const char* compute;
  const char* wait;
  double save_j;
  double save_pct;
};

Scenario fixture(const std::string& name) { return load_scenario(support::fixture(name)); }

SimulationOutput run(const std::string& name) { return run_simulation(fixture(name)); }

SimulationOutput run_at_depth(const std::string& name, int depth) {
  auto s = fixture(name);
  s.depth_auto = false;
  s.depth = {depth};
  finalize(s);
  return run_simulation(s);
}

bool within_rel(double got, double want, double rel) { return std::abs(got - want) <= rel * std::abs(want); }

void check_rows(Outcome& o, const std::string& name, const SimulationOutput& out, const std::vector<Expected>& want,
                double pct_tol, double j_rel) {
  const auto& rows = out.report.rows;
  o.require(rows.size() == want.size(), fmt::format("{}: {} rows, expected {}", name, rows.size(), want.size()));
  for (std::size_t i = 0; i < std::min(rows.size(), want.size()); ++i) {
    const auto& r = rows[i];
    const auto& w = want[i];
    o.require(r.compute_action == w.compute && r.wait_action == w.wait,
              fmt::format("{} node {}: ({}, {}) expected ({}, {})", name, r.node, r.compute_action, r.wait_action,
                          w.compute, w.wait));
    o.require(std::abs(r.save_pct - w.save_pct) <= pct_tol,
              fmt::format("{} node {}: {:.2f}% vs {:.2f}%", name, r.node, r.save_pct, w.save_pct));
    if (j_rel > 0.0) {
      o.require(within_rel(r.save_j, w.save_j, j_rel),
                fmt::format("{} node {}: {:.2f} J vs {:.2f} J", name, r.node, r.save_j, w.save_j));
    }
  }
}

std::string summary(const SimulationOutput& out) {
  std::string s;
  for (const auto& r : out.report.rows) s += fmt::format(" n{}={:.2f}%", r.node, r.save_pct);
  return s;
}

Outcome scenario1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto short_run = run("scenario1_short");
  const auto long_run = run("scenario1_long");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  check_rows(o, "short", short_run,
             {{"2.1 GHz", "1.2 GHz", 18704.5, 14.03},
              {"2.1 GHz", "1.2 GHz", 18705.56, 14.02},
              {"2.1 GHz", "1.2 GHz", 18706.06, 14.02}},
             1.0, 0.02);
  check_rows(o, "long", long_run,
             {{"No action", "sleep", 516084.73, 85.82},
              {"No action", "sleep", 516085.34, 85.82},
              {"No action", "sleep", 516084.69, 85.82}},
             1.0, 0.02);
  o.require(secs < 5.0, fmt::format("took {:.2f} s", secs));
  if (o.pass) o.detail = fmt::format("short{} long{} in {:.3f} s", summary(short_run), summary(long_run), secs);
  return o;
}

Outcome scenario2() {
  Outcome o;
  const auto blocking = run("scenario2_blocking");
  const auto nonblocking = run("scenario2_nonblocking");
  check_rows(o, "blocking", blocking, {{"No action", "sleep", 0.0, 72.06}}, 1.5, 0.0);
  check_rows(o, "non-blocking", nonblocking, {{"2.1 GHz", "1.2 GHz", 0.0, 27.29}}, 1.5, 0.0);
  if (o.pass) o.detail = fmt::format("blocking{} non-blocking{}", summary(blocking), summary(nonblocking));
  return o;
}

Outcome scenario3() {
  Outcome o;
  const auto active = run("scenario3_active");
  const auto idle = run("scenario3_idle");
  o.require(active.report.rows.size() == 3, "active: expected 3 rows");
  for (const auto& r : active.report.rows) {
    o.require(std::abs(r.save_pct - 36.6) <= 1.0, fmt::format("active node {}: {:.2f}%", r.node, r.save_pct));
  }
  o.require(idle.report.rows.size() == 3, "idle: expected 3 rows");
  for (const auto& p : idle.report.plans) {
    o.require(p.saving_pct <= 0.5, fmt::format("idle node {}: {:.3f}%", p.node, p.saving_pct));
    o.require(p.wait_action == WaitAction::None, fmt::format("idle node {}: wait {}", p.node, to_string(p.wait_action)));
  }
  if (o.pass) o.detail = fmt::format("active{} idle{}", summary(active), summary(idle));
  return o;
}

Outcome scenario4() {
  Outcome o;
  const auto unbuffered = run("scenario4_unbuffered");
  const auto buffered = run("scenario4_buffered");
  check_rows(o, "unbuffered", unbuffered,
             {{"No action", "sleep", 0.0, 32.7}, {"No action", "sleep", 0.0, 32.7}, {"No action", "sleep", 0.0, 32.7}},
             1.5, 0.0);
  o.require(buffered.report.rows.empty(), fmt::format("buffered: {} nodes intervened", buffered.report.rows.size()));
  o.require(buffered.report.total_j == 0.0, fmt::format("buffered: total {} J", buffered.report.total_j));
  if (o.pass) o.detail = fmt::format("unbuffered{} buffered total 0 J", summary(unbuffered));
  return o;
}

Outcome scenario5() {
  Outcome o;
  const auto shallow = run_at_depth("scenario5", 1);
  const auto deep = run_at_depth("scenario5", 5);
  o.require(shallow.report.rows.size() == 1 && shallow.report.rows[0].node == 1,
            fmt::format("depth 1: {} nodes intervened", shallow.report.rows.size()));
  o.require(within_rel(shallow.report.total_j, 32517.7, 0.05),
            fmt::format("depth 1: total {:.2f} J", shallow.report.total_j));
  o.require(deep.report.rows.size() == 3, fmt::format("depth 5: {} nodes intervened", deep.report.rows.size()));
  o.require(within_rel(deep.report.total_j, 79889.0, 0.05), fmt::format("depth 5: total {:.2f} J", deep.report.total_j));
  bool node3 = false;
  for (const auto& r : deep.report.rows) {
    if (r.node == 3) node3 = r.compute_action == "No action" && r.wait_action == "1.2 GHz";
  }
  o.require(node3, "depth 5: node 3 is not (No action, 1.2 GHz)");
  if (o.pass) {
    o.detail = fmt::format("depth 1 total {:.2f} J, depth 5 total {:.2f} J", shallow.report.total_j, deep.report.total_j);
  }
  return o;
}

Outcome scenario6() {
  Outcome o;
  const auto on = run("scenario6_anticipation_on");
  const auto off = run("scenario6_anticipation_off");
  for (const auto& [name, out, wait, pct] : {std::tuple{"on", &on, 54.00, 83.0}, std::tuple{"off", &off, 56.00, 85.8}}) {
    o.require(out->report.rows.size() == 3, fmt::format("{}: expected 3 rows", name));
    for (const auto& r : out->report.rows) {
      o.require(round2(r.t_wait_min) == wait, fmt::format("{} node {}: wait {:.2f} min", name, r.node, r.t_wait_min));
      o.require(std::abs(r.save_pct - pct) <= 1.0, fmt::format("{} node {}: {:.2f}%", name, r.node, r.save_pct));
    }
  }
  if (o.pass) o.detail = fmt::format("on{} off{}", summary(on), summary(off));
  return o;
}

Outcome scenario7() {
  Outcome o;
  const auto lng = run("scenario7_long_blocking");
  const auto sb = run("scenario7_short_blocking");
  const auto snb = run("scenario7_short_nonblocking");
  check_rows(o, "long", lng,
             {{"No action", "sleep", 0.0, 91.39}, {"No action", "sleep", 0.0, 91.39}, {"No action", "sleep", 0.0, 91.39}},
             1.0, 0.0);
  o.require(sb.report.rows.size() == 3 && snb.report.rows.size() == 3, "short: expected 3 rows each");
  for (const auto& r : sb.report.rows) {
    o.require(std::abs(r.save_pct - 42.6) <= 1.5, fmt::format("short blocking node {}: {:.2f}%", r.node, r.save_pct));
  }
  for (const auto& r : snb.report.rows) {
    o.require(std::abs(r.save_pct - 40.9) <= 1.5, fmt::format("short non-blocking node {}: {:.2f}%", r.node, r.save_pct));
  }
  for (std::size_t i = 0; i < std::min(sb.report.plans.size(), snb.report.plans.size()); ++i) {
    o.require(snb.report.plans[i].t_comp > sb.report.plans[i].t_comp,
              fmt::format("node {}: non-blocking compute {:.2f} s not longer than blocking {:.2f} s",
                          snb.report.plans[i].node, snb.report.plans[i].t_comp, sb.report.plans[i].t_comp));
  }
  if (o.pass) o.detail = fmt::format("long{} short-b{} short-nb{}", summary(lng), summary(sb), summary(snb));
  return o;
}

Outcome oracle() {
  Outcome o;
  std::mt19937_64 rng(8);
  const int trials = 5000;
  int mismatches = 0;
  for (int i = 0; i < trials; ++i) {
    const auto p = support::random_profile(rng);
    const auto mode = support::pick(rng, 0, 1) ? WaitMode::Idle : WaitMode::Active;
    PhaseEstimate e;
    e.node = 1;
    e.t_comp_fmax = support::uniform(rng, 0.0, 2000.0);
    e.n_ckpt = support::pick(rng, 0, 2);
    e.window = e.busy_time(p.fmax(), p) + support::uniform(rng, 0.0, 4000.0);
    const auto want = support::brute_force(e, p, mode);
    const auto got = node_best_plan(e, p, mode);
    if (got.compute.ghz != want.ghz || got.wait_action != want.action ||
        std::abs(got.ei_j - want.ei) > 1e-9 * std::max(1.0, want.ei)) {
      ++mismatches;
    }
  }
  o.require(mismatches == 0, fmt::format("{} mismatches", mismatches));
  o.detail = fmt::format("{} random estimates, {} mismatches", trials, mismatches);
  return o;
}

Outcome deadline() {
  Outcome o;
  std::vector<std::pair<std::string, Scenario>> cases;
  for (const auto& path : support::fixtures()) cases.emplace_back(path.stem().string(), load_scenario(path));
  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) cases.emplace_back(fmt::format("random#{}", i), support::random_scenario(rng));
  int retries = 0, dropped = 0;
  for (auto& [name, s] : cases) {
    const auto with = run_simulation(s);
    s.strategies_enabled = false;
    const auto without = run_simulation(s);
    o.require(with.makespan <= without.makespan,
              fmt::format("{}: {:.3f} s > {:.3f} s", name, with.makespan, without.makespan));
    retries += with.fallback == Fallback::ComputeAtFmax;
    dropped += with.fallback == Fallback::Dropped;
  }
  if (o.pass) {
    o.detail = fmt::format("{} scenarios, fallbacks: {} compute reset, {} dropped", cases.size(), retries, dropped);
  }
  return o;
}

Outcome soundness() {
  Outcome o;
  int checked = 0;
  for (const auto& path : support::fixtures()) {
    const auto s = load_scenario(path);
    const auto out = run_simulation(s);
    for (const auto& b : out.blocks) {
      Seconds first = kNever;
      for (const auto& r : out.reference.trace) {
        if (r.kind == 'S' && r.node == b.process && r.t0 >= s.failure.time &&
            (r.state == TraceState::WaitActive || r.state == TraceState::WaitIdle)) {
          first = std::min(first, r.t0);
        }
      }
      const auto& rec = out.reference.ops[static_cast<std::size_t>(b.process)][static_cast<std::size_t>(b.op)];
      ++checked;
      // An anticipated checkpoint at the call pushes the wait back by its duration.
      const bool waited = first == b.block_time || first == b.block_time + s.ckpt.duration;
      o.require(rec.call == b.block_time && waited,
                fmt::format("{} node {}: predicted {:.3f}, called at {:.3f}, waited at {:.3f}", path.stem().string(),
                            b.process, b.block_time, rec.call, first));
    }
  }

  PatternSpec spec;
  spec.interval = 100.0;
  spec.edges = {{0, 1, 10.0}, {1, 2, 20.0}, {0, 2, 30.0}};
  const auto blocks = estimate_block_times(expand_pattern(spec, 3, 100.0), 0, 5.0, {1});
  const bool example = blocks.size() == 2 && blocks[0].process == 1 && blocks[0].block_time == 10.0 &&
                       blocks[1].process == 2 && blocks[1].block_time == 20.0;
  o.require(example, "three-process example did not converge to {(1,10);(2,20)}");
  if (o.pass) o.detail = fmt::format("{} fixture estimates exact; sibling example converges", checked);
  return o;
}

Outcome identities() {
  Outcome o;
  const double e300 = sleep_wait_energy(300.0, reference_profile());
  o.require(within_rel(e300, 4970.0, 1e-6), fmt::format("300 s sleep costs {} J", e300));
  for (const auto& path : support::fixtures()) {
    const auto out = run_simulation(load_scenario(path));
    double sum = 0.0;
    for (const auto& p : out.report.plans) {
      o.require(p.saving_j == p.eni_j - p.ei_j, fmt::format("{} node {}: saving mismatch", path.stem().string(), p.node));
      sum += p.saving_j;
    }
    o.require(out.report.total_j == sum, fmt::format("{}: total mismatch", path.stem().string()));
  }
  if (o.pass) o.detail = fmt::format("300 s sleep = {} J; savings and totals exact", e300);
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / "ftsim_acceptance";
  std::filesystem::create_directories(dir);
  int files = 0;
  for (const auto& path : support::fixtures()) {
    std::string bytes[2][2];
    for (int k = 0; k < 2; ++k) {
      const auto out = run_simulation(load_scenario(path));
      const auto trace = dir / fmt::format("{}.{}.trace", path.stem().string(), k);
      const auto report = dir / fmt::format("{}.{}.csv", path.stem().string(), k);
      write_trace(out.trace, trace);
      write_report(out.report, report, ReportFormat::Csv);
      bytes[k][0] = slurp(trace);
      bytes[k][1] = slurp(report);
    }
    o.require(bytes[0][0] == bytes[1][0], path.stem().string() + ": traces differ");
    o.require(bytes[0][1] == bytes[1][1], path.stem().string() + ": reports differ");
    files += 2;
  }
  if (o.pass) o.detail = fmt::format("{} file pairs byte-identical", files);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"scenario 1 short and long re-execution", scenario1},
      {"scenario 2 blocking and non-blocking", scenario2},
      {"scenario 3 active and idle waits", scenario3},
      {"scenario 4 unbuffered and buffered", scenario4},
      {"scenario 5 cascade depth", scenario5},
      {"scenario 6 checkpoint anticipation", scenario6},
      {"scenario 7 re-execution length and op mode", scenario7},
      {"best plan equals exhaustive search", oracle},
      {"strategies never extend completion", deadline},
      {"cascade estimates are exact", soundness},
      {"energy identities", identities},
      {"byte-identical reruns", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    fmt::print("{} {:>2} {}: {}\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail);
  }
  return failed == 0 ? 0 : 1;
}
