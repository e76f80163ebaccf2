#include "ftsim/scenario.hpp"

#include "ftsim/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace ftsim {

void finalize(Scenario& s) {
  if (s.nodes < 1) throw ValidationError("scenario: nodes must be >= 1");
  if (s.failure.node < 0 || s.failure.node >= s.nodes) {
    throw ValidationError(fmt::format("scenario: failure.node {} must be below nodes ({})", s.failure.node, s.nodes));
  }
  if (s.failure.time < 0.0) throw ValidationError("scenario: failure.time must be >= 0");
  if (s.failure.restart_duration < 0.0) throw ValidationError("scenario: failure.restart must be >= 0");
  if (!(s.horizon > s.failure.time)) throw ValidationError("scenario: horizon must exceed failure.time");
  if (s.ckpt.phase_offsets.size() > static_cast<std::size_t>(s.nodes)) {
    throw ValidationError("scenario: more checkpoint offsets than nodes");
  }
  s.ckpt.validate();
  s.profile.t_ckpt = s.ckpt.duration;
  s.profile.validate();
  s.pattern = expand_pattern(s.pattern_spec, s.nodes, s.horizon);
  if (s.depth_auto) {
    s.depth.depth = pattern_depth(s.pattern);
  } else if (s.depth.depth < 1) {
    throw ValidationError("scenario: depth must be >= 1");
  }
}

namespace {

std::string trim(std::string_view v) {
  const auto b = v.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = v.find_last_not_of(" \t\r");
  return std::string(v.substr(b, e - b + 1));
}

std::optional<double> to_number(std::string_view v) {
  double out = 0.0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  return out;
}

std::optional<Seconds> to_duration(std::string_view text) {
  const std::string v = trim(text);
  std::size_t i = 0;
  while (i < v.size() && (std::isdigit(static_cast<unsigned char>(v[i])) || v[i] == '.' || v[i] == '-' ||
                          v[i] == '+' || v[i] == 'e' || v[i] == 'E')) {
    ++i;
  }
  const auto number = to_number(std::string_view(v).substr(0, i));
  if (!number) return std::nullopt;
  const std::string unit = trim(std::string_view(v).substr(i));
  if (unit.empty() || unit == "s" || unit == "sec") return *number;
  if (unit == "min") return *number * 60.0;
  if (unit == "h") return *number * 3600.0;
  return std::nullopt;
}

std::vector<std::string> split(const std::string& v, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

class Parser {
public:
  Parser(std::string source) : source_(std::move(source)) {}

  Scenario parse(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    std::string section;
    while (std::getline(in, raw)) {
      ++line_;
      if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      const std::string l = trim(raw);
      if (l.empty()) continue;
      if (l.front() == '[') {
        if (l.back() != ']') fail("unterminated section header", l);
        section = trim(std::string_view(l).substr(1, l.size() - 2));
        static const std::set<std::string> known{"system", "pattern", "checkpoint", "failure", "run"};
        if (!known.count(section)) fail("unknown section", section);
        continue;
      }
      const auto eq = l.find('=');
      if (eq == std::string::npos) fail("expected key = value", l);
      const std::string key = trim(std::string_view(l).substr(0, eq));
      const std::string value = trim(std::string_view(l).substr(eq + 1));
      field_ = section.empty() ? key : section + "." + key;
      if (key.empty()) fail("missing key", l);
      if (field_ != "pattern.edge" && !seen_.insert(field_).second) fail("duplicate key", field_);
      assign(section, key, value);
    }
    return finish();
  }

private:
  [[noreturn]] void fail(const std::string& what, const std::string& detail) const {
    throw ParseError(fmt::format("{}:{}: {}: {} ({})", source_, line_, field_.empty() ? "-" : field_, what, detail),
                     line_, field_);
  }

  double number(const std::string& v) const {
    auto n = to_number(v);
    if (!n) fail("expected a number", v);
    return *n;
  }

  int integer(const std::string& v) const {
    const double n = number(v);
    if (n != static_cast<double>(static_cast<long>(n))) fail("expected an integer", v);
    return static_cast<int>(n);
  }

  Seconds duration(const std::string& v) const {
    auto d = to_duration(v);
    if (!d) fail("expected a duration such as 90s or 1.5 min", v);
    return *d;
  }

  bool boolean(const std::string& v) const {
    if (v == "true" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "no" || v == "off") return false;
    fail("expected true or false", v);
  }

  std::vector<double> numbers(const std::string& v) const {
    std::vector<double> out;
    for (const auto& item : split(v, ',')) out.push_back(number(item));
    return out;
  }

  void assign(const std::string& section, const std::string& key, const std::string& v) {
    auto& s = s_;
    if (section.empty()) {
      if (key == "name") s.name = v;
      else if (key == "nodes") s.nodes = integer(v);
      else fail("unknown key", key);
    } else if (section == "system") {
      auto& p = s.profile;
      if (key == "frequencies" || key == "p_comp" || key == "beta" || key == "p_ckpt" || key == "gamma" ||
          key == "p_active_wait") {
        columns_[key] = {numbers(v), line_};
      } else if (key == "t_go_sleep") p.t_go_sleep = duration(v);
      else if (key == "t_wakeup") p.t_wakeup = duration(v);
      else if (key == "p_go_sleep") p.p_go_sleep = number(v);
      else if (key == "p_wakeup") p.p_wakeup = number(v);
      else if (key == "p_sleep") p.p_sleep = number(v);
      else if (key == "p_idle_wait") p.p_idle_wait = number(v);
      else if (key == "mu1") p.mu1 = number(v);
      else if (key == "mu2") p.mu2 = number(v);
      else fail("unknown key", key);
    } else if (section == "pattern") {
      auto& ps = s.pattern_spec;
      if (key == "interval") ps.interval = duration(v);
      else if (key == "operations") {
        if (v == "blocking") ps.mode = OpMode::Blocking;
        else if (v == "nonblocking") ps.mode = OpMode::Nonblocking;
        else fail("expected blocking or nonblocking", v);
      } else if (key == "buffered") ps.buffered = boolean(v);
      else if (key == "wait_mode") {
        if (v == "active") ps.wait_mode = WaitMode::Active;
        else if (v == "idle") ps.wait_mode = WaitMode::Idle;
        else fail("expected active or idle", v);
      } else if (key == "message_size") ps.message_size = static_cast<std::size_t>(integer(v));
      else if (key == "wait_lag") ps.wait_lag = duration(v);
      else if (key == "edge") ps.edges.push_back(edge(v));
      else fail("unknown key", key);
    } else if (section == "checkpoint") {
      auto& c = s.ckpt;
      if (key == "interval") c.interval = duration(v);
      else if (key == "duration") c.duration = duration(v);
      else if (key == "anticipation") c.anticipation_enabled = boolean(v);
      else if (key == "alpha") c.alpha = number(v);
      else if (key == "offsets") {
        for (const auto& item : split(v, ',')) c.phase_offsets.push_back(duration(item));
      } else fail("unknown key", key);
    } else if (section == "failure") {
      if (key == "node") s.failure.node = integer(v);
      else if (key == "time") s.failure.time = duration(v);
      else if (key == "restart") s.failure.restart_duration = duration(v);
      else fail("unknown key", key);
    } else if (section == "run") {
      if (key == "horizon") s.horizon = duration(v);
      else if (key == "depth") {
        if (v == "auto") {
          s.depth_auto = true;
        } else {
          s.depth_auto = false;
          s.depth.depth = integer(v);
        }
      } else if (key == "strategies") s.strategies_enabled = boolean(v);
      else fail("unknown key", key);
    }
  }

  // <src> -> <dst> [at <t>] [every <t>] [lag <t>]
  EdgeSpec edge(const std::string& v) const {
    std::vector<std::string> tok;
    std::istringstream in(v);
    for (std::string t; in >> t;) {
      if (!tok.empty() && (t == "s" || t == "sec" || t == "min" || t == "h")) {
        tok.back() += t;
      } else {
        tok.push_back(t);
      }
    }
    if (tok.size() < 3 || tok[1] != "->") fail("expected <src> -> <dst>", v);
    EdgeSpec e;
    e.src = integer(tok[0]);
    e.dst = integer(tok[2]);
    std::set<std::string> used;
    for (std::size_t i = 3; i < tok.size(); i += 2) {
      if (i + 1 >= tok.size()) fail("missing value after", tok[i]);
      if (!used.insert(tok[i]).second) fail("repeated edge attribute", tok[i]);
      const Seconds d = duration(tok[i + 1]);
      if (tok[i] == "at") e.offset = d;
      else if (tok[i] == "every") e.period = d;
      else if (tok[i] == "lag") e.wait_lag = d;
      else fail("unknown edge attribute", tok[i]);
    }
    return e;
  }

  Scenario finish() {
    field_.clear();
    auto require = [&](const char* f) {
      if (!seen_.count(f)) throw ParseError(fmt::format("{}: {}: missing required key", source_, f), 0, f);
    };
    for (const char* f : {"nodes", "system.frequencies", "system.p_comp", "system.beta", "system.p_ckpt",
                          "system.gamma", "pattern.interval", "failure.time", "run.horizon"}) {
      require(f);
    }
    const auto& ghz = columns_.at("frequencies").values;
    auto column = [&](const std::string& name) -> std::vector<double> {
      auto it = columns_.find(name);
      if (it == columns_.end()) return {};
      if (it->second.values.size() != ghz.size()) {
        throw ParseError(fmt::format("{}:{}: system.{}: has {} values for {} frequencies", source_, it->second.line,
                                     name, it->second.values.size(), ghz.size()),
                         it->second.line, "system." + name);
      }
      return it->second.values;
    };
    const auto p_comp = column("p_comp");
    const auto beta = column("beta");
    const auto p_ckpt = column("p_ckpt");
    const auto gamma = column("gamma");
    const auto p_aw = column("p_active_wait");
    s_.profile.freqs.clear();
    for (std::size_t i = 0; i < ghz.size(); ++i) {
      s_.profile.freqs.push_back({ghz[i], p_comp[i], beta[i], p_ckpt[i], gamma[i], p_aw.empty() ? p_comp[i] : p_aw[i]});
    }
    finalize(s_);
    return s_;
  }

  struct Column {
    std::vector<double> values;
    int line = 0;
  };

  std::string source_;
  int line_ = 0;
  std::string field_;
  std::set<std::string> seen_;
  std::map<std::string, Column> columns_;
  Scenario s_;
};

std::string num(double v) { return fmt::format("{}", v); }
std::string dur(Seconds v) { return fmt::format("{}s", v); }

template <typename F>
std::string join(const std::vector<FrequencyLevel>& freqs, F field) {
  std::string out;
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    if (i) out += ", ";
    out += num(field(freqs[i]));
  }
  return out;
}

}  // namespace

Seconds parse_duration(const std::string& text) {
  auto d = to_duration(text);
  if (!d) throw ParseError(fmt::format("not a duration: '{}'", text), 0, "");
  return *d;
}

Scenario parse_scenario(const std::string& text, const std::string& source) {
  return Parser(source).parse(text);
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read scenario {}", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string());
}

std::string write_scenario(const Scenario& s) {
  const auto& p = s.profile;
  const auto& ps = s.pattern_spec;
  std::string o;
  auto line = [&](const std::string& k, const std::string& v) { o += fmt::format("{} = {}\n", k, v); };

  line("name", s.name);
  line("nodes", std::to_string(s.nodes));

  o += "\n[system]\n";
  line("frequencies", join(p.freqs, [](const auto& f) { return f.ghz; }));
  line("p_comp", join(p.freqs, [](const auto& f) { return f.p_comp; }));
  line("beta", join(p.freqs, [](const auto& f) { return f.beta; }));
  line("p_ckpt", join(p.freqs, [](const auto& f) { return f.p_ckpt; }));
  line("gamma", join(p.freqs, [](const auto& f) { return f.gamma; }));
  line("p_active_wait", join(p.freqs, [](const auto& f) { return f.p_active_wait; }));
  line("t_go_sleep", dur(p.t_go_sleep));
  line("t_wakeup", dur(p.t_wakeup));
  line("p_go_sleep", num(p.p_go_sleep));
  line("p_wakeup", num(p.p_wakeup));
  line("p_sleep", num(p.p_sleep));
  line("p_idle_wait", num(p.p_idle_wait));
  line("mu1", num(p.mu1));
  line("mu2", num(p.mu2));

  o += "\n[pattern]\n";
  line("interval", dur(ps.interval));
  line("operations", ps.mode == OpMode::Blocking ? "blocking" : "nonblocking");
  line("buffered", ps.buffered ? "true" : "false");
  line("wait_mode", std::string(to_string(ps.wait_mode)));
  line("message_size", std::to_string(ps.message_size));
  line("wait_lag", dur(ps.wait_lag));
  for (const auto& e : ps.edges) {
    std::string v = fmt::format("{} -> {} at {}", e.src, e.dst, dur(e.offset));
    if (e.period > 0.0) v += " every " + dur(e.period);
    if (e.wait_lag >= 0.0) v += " lag " + dur(e.wait_lag);
    line("edge", v);
  }

  o += "\n[checkpoint]\n";
  line("interval", dur(s.ckpt.interval));
  line("duration", dur(s.ckpt.duration));
  line("anticipation", s.ckpt.anticipation_enabled ? "true" : "false");
  line("alpha", num(s.ckpt.alpha));
  if (!s.ckpt.phase_offsets.empty()) {
    std::string v;
    for (std::size_t i = 0; i < s.ckpt.phase_offsets.size(); ++i) {
      if (i) v += ", ";
      v += dur(s.ckpt.phase_offsets[i]);
    }
    line("offsets", v);
  }

  o += "\n[failure]\n";
  line("node", std::to_string(s.failure.node));
  line("time", dur(s.failure.time));
  line("restart", dur(s.failure.restart_duration));

  o += "\n[run]\n";
  line("horizon", dur(s.horizon));
  line("depth", s.depth_auto ? "auto" : std::to_string(s.depth.depth));
  line("strategies", s.strategies_enabled ? "true" : "false");
  return o;
}

}  // namespace ftsim
