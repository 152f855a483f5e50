// Copyright 2026 The softland Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "softland/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <optional>
#include <set>
#include <sstream>

namespace softland {

namespace {

constexpr std::string_view kWhitespace = " \t\r\n";

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(kWhitespace);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(kWhitespace);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  for (;;) {
    const auto pos = s.find(sep);
    out.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) return out;
    s.remove_prefix(pos + 1);
  }
}

std::optional<double> to_double(std::string_view text) {
  text = trim(text);
  if (text == "unbounded") return kUnbounded;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    return std::nullopt;
  }
  return v;
}

const std::set<std::string, std::less<>> kDimensionlessKeys{"r_m", "s", "u_max", "l0", "v0"};
const std::set<std::string, std::less<>> kPhysicalKeys{"m_b", "m_f", "k_g", "g",
                                                       "S",   "U_max", "V0"};
const std::set<std::string, std::less<>> kOtherKeys{
    "mode",      "controller", "k_p",        "k_d",        "saturate",   "u",
    "switch_times", "kp_min",  "kp_max",     "kp_count",   "kd_min",     "kd_max",
    "kd_count",  "rel_tol",    "abs_tol",    "event_tol",  "tau_max",    "settle_vel",
    "record_dt", "objective",  "r_m_list",   "s_list",     "stroke_shrink", "refine",
    "n_switches", "out",       "workers"};

bool known_key(std::string_view key) {
  return kDimensionlessKeys.count(key) > 0 || kPhysicalKeys.count(key) > 0 ||
         kOtherKeys.count(key) > 0;
}

// Typed access to the effective entries with origin-tagged errors.
class Reader {
 public:
  explicit Reader(const std::vector<ConfigEntry>& entries) : entries_(entries) {}

  const ConfigEntry* find(std::string_view key) const {
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
      if (it->key == key) return &*it;
    }
    return nullptr;
  }
  bool has(std::string_view key) const { return find(key) != nullptr; }

  [[noreturn]] void fail(const ConfigEntry& e, const std::string& msg) const {
    throw ConfigError(e.where + ": " + e.key + ": " + msg);
  }

  double number(std::string_view key, double fallback) const {
    const ConfigEntry* e = find(key);
    if (e == nullptr) return fallback;
    const auto v = to_double(e->value);
    if (!v || std::isnan(*v)) fail(*e, "expected a number, got '" + e->value + "'");
    return *v;
  }
  double finite(std::string_view key, double fallback) const {
    const double v = number(key, fallback);
    if (!std::isfinite(v)) fail(*find(key), "must be finite");
    return v;
  }
  double positive(std::string_view key, double fallback) const {
    const double v = finite(key, fallback);
    if (!(v > 0.0) && has(key)) fail(*find(key), "must be > 0");
    return v;
  }
  double nonnegative(std::string_view key, double fallback) const {
    const double v = finite(key, fallback);
    if (!(v >= 0.0) && has(key)) fail(*find(key), "must be >= 0");
    return v;
  }
  int integer(std::string_view key, int fallback, int min) const {
    const ConfigEntry* e = find(key);
    if (e == nullptr) return fallback;
    const std::string_view t = trim(e->value);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
      fail(*e, "expected an integer, got '" + e->value + "'");
    }
    if (v < min) fail(*e, "must be >= " + std::to_string(min));
    return v;
  }
  bool boolean(std::string_view key, bool fallback) const {
    const ConfigEntry* e = find(key);
    if (e == nullptr) return fallback;
    const std::string_view t = trim(e->value);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    fail(*e, "expected true or false, got '" + e->value + "'");
  }
  std::string text(std::string_view key, std::string fallback) const {
    const ConfigEntry* e = find(key);
    return e == nullptr ? fallback : std::string(trim(e->value));
  }
  std::vector<double> list(std::string_view key, std::vector<double> fallback) const {
    const ConfigEntry* e = find(key);
    if (e == nullptr) return fallback;
    try {
      return parse_number_list(e->value);
    } catch (const ConfigError& err) {
      fail(*e, err.what());
    }
  }

 private:
  const std::vector<ConfigEntry>& entries_;
};

std::vector<double> default_v0(Mode mode) {
  switch (mode) {
    case Mode::Simulate:
      return {0.0};
    case Mode::Sweep:
      return {-1.0};
    case Mode::BangBang:
      return {-3.0};
    case Mode::Curves:
    case Mode::Compare:
    case Mode::Cot:
      return parse_number_list("-0.5:-10:20");
  }
  return {};
}

}  // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::Simulate:
      return "simulate";
    case Mode::Sweep:
      return "sweep";
    case Mode::Curves:
      return "curves";
    case Mode::BangBang:
      return "bangbang";
    case Mode::Compare:
      return "compare";
    case Mode::Cot:
      return "cot";
  }
  return "?";
}

Mode mode_from_string(std::string_view text) {
  for (Mode m : {Mode::Simulate, Mode::Sweep, Mode::Curves, Mode::BangBang, Mode::Compare,
                 Mode::Cot}) {
    if (to_string(m) == text) return m;
  }
  throw ConfigError("unknown mode '" + std::string(text) +
                    "' (expected simulate, sweep, curves, bangbang, compare or cot)");
}

std::vector<double> parse_number_list(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ConfigError("empty number list");
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ConfigError("range must be start:stop:count");
    const auto a = to_double(parts[0]);
    const auto b = to_double(parts[1]);
    int n = 0;
    const auto [ptr, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), n);
    if (!a || !b || !std::isfinite(*a) || !std::isfinite(*b)) {
      throw ConfigError("range endpoints must be finite numbers");
    }
    if (ec != std::errc() || ptr != parts[2].data() + parts[2].size() || n < 1) {
      throw ConfigError("range count must be an integer >= 1");
    }
    if (n == 1) {
      if (*a != *b) throw ConfigError("a one-point range needs start == stop");
      return {*a};
    }
    std::vector<double> out(n);
    for (int k = 0; k < n; ++k) out[k] = *a + (*b - *a) * k / static_cast<double>(n - 1);
    out.back() = *b;
    return out;
  }
  std::vector<double> out;
  for (std::string_view item : split(text, ',')) {
    const auto v = to_double(item);
    if (!v || std::isnan(*v)) throw ConfigError("'" + std::string(item) + "' is not a number");
    out.push_back(*v);
  }
  return out;
}

ConfigEntry parse_assignment(std::string_view text, std::string_view where) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError(std::string(where) + ": expected key=value, got '" + std::string(text) +
                      "'");
  }
  ConfigEntry e{std::string(trim(text.substr(0, eq))), std::string(trim(text.substr(eq + 1))),
                std::string(where)};
  if (e.key.empty()) throw ConfigError(std::string(where) + ": missing key");
  if (!known_key(e.key)) throw ConfigError(std::string(where) + ": unknown key '" + e.key + "'");
  return e;
}

std::vector<ConfigEntry> read_entries(std::string_view text, std::string_view origin) {
  std::vector<ConfigEntry> out;
  int line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    out.push_back(
        parse_assignment(line, std::string(origin) + ":" + std::to_string(line_no)));
  }
  return out;
}

RunConfig build_config(const std::vector<ConfigEntry>& entries) {
  RunConfig c;
  for (const auto& e : entries) {
    if (!known_key(e.key)) throw ConfigError(e.where + ": unknown key '" + e.key + "'");
    auto it = std::find_if(c.entries.begin(), c.entries.end(),
                           [&](const ConfigEntry& x) { return x.key == e.key; });
    if (it == c.entries.end()) {
      c.entries.push_back(e);
    } else {
      *it = e;
    }
  }
  const Reader r(c.entries);

  if (const ConfigEntry* e = r.find("mode")) {
    try {
      c.mode = mode_from_string(trim(e->value));
    } catch (const ConfigError& err) {
      r.fail(*e, err.what());
    }
  }

  const ConfigEntry* dimensionless_key = nullptr;
  const ConfigEntry* physical_key = nullptr;
  for (const auto& e : c.entries) {
    if (kDimensionlessKeys.count(e.key) && dimensionless_key == nullptr) dimensionless_key = &e;
    if (kPhysicalKeys.count(e.key) && physical_key == nullptr) physical_key = &e;
  }
  if (dimensionless_key != nullptr && physical_key != nullptr) {
    throw ConfigError("conflicting parameter blocks: dimensionless '" + dimensionless_key->key +
                      "' (" + dimensionless_key->where + ") and physical '" +
                      physical_key->key + "' (" + physical_key->where + ")");
  }
  c.physical = physical_key != nullptr;

  if (c.physical) {
    PhysicalParams& p = c.physical_params;
    p.m_b = r.positive("m_b", p.m_b);
    p.m_f = r.positive("m_f", p.m_f);
    p.k_g = r.positive("k_g", p.k_g);
    p.g = r.positive("g", p.g);
    p.S = r.positive("S", p.S);
    p.U_max = r.number("U_max", p.U_max);
    if (!(p.U_max > 0.0)) r.fail(*r.find("U_max"), "must be > 0 or unbounded");
    c.V0 = r.list("V0", {p.V0});
    for (double V : c.V0) {
      if (!std::isfinite(V) || V > 0.0) r.fail(*r.find("V0"), "velocities must be finite and <= 0");
    }
    p.V0 = c.V0.front();
    c.u_max_given = r.has("U_max");
    for (double V : c.V0) {
      PhysicalParams q = p;
      q.V0 = V;
      const Dimensionless d = to_dimensionless(q);
      c.v0.push_back(d.v0);
      c.params = d.params;
      c.scales = d.scales;
    }
  } else {
    c.params.r_m = r.positive("r_m", 5.0);
    c.params.s = r.positive("s", 20.0);
    c.params.u_max = r.number("u_max", kUnbounded);
    if (!(c.params.u_max > 0.0)) r.fail(*r.find("u_max"), "must be > 0 or unbounded");
    c.params.l0 = r.finite("l0", c.params.s / 2.0);
    c.u_max_given = r.has("u_max");
    c.v0 = r.list("v0", default_v0(c.mode));
    for (double v : c.v0) {
      if (!std::isfinite(v) || v > 0.0) r.fail(*r.find("v0"), "velocities must be finite and <= 0");
    }
  }

  const std::string controller = r.text("controller", "rigid");
  const double k_p = r.nonnegative("k_p", 0.2);
  const double k_d = r.nonnegative("k_d", 0.18);
  if (controller == "rigid") {
    c.controller = Rigid{};
  } else if (controller == "impedance") {
    c.controller = Impedance{k_p, k_d, r.boolean("saturate", false)};
  } else if (controller == "bangbang") {
    std::vector<double> times = r.list("switch_times", {});
    for (double t : times) {
      if (!std::isfinite(t) || t < 0.0) r.fail(*r.find("switch_times"), "must be finite and >= 0");
    }
    if (!std::is_sorted(times.begin(), times.end())) {
      r.fail(*r.find("switch_times"), "must be ascending");
    }
    if (c.mode == Mode::Simulate && !std::isfinite(c.params.u_max)) {
      throw ConfigError("controller=bangbang needs a finite u_max (or U_max)");
    }
    c.controller = BangBang{c.params.u_max, times};
  } else if (controller == "constant") {
    c.controller = ConstantForce{r.finite("u", 0.0)};
  } else {
    r.fail(*r.find("controller"), "expected rigid, impedance, bangbang or constant");
  }

  c.grid.kp_min = r.nonnegative("kp_min", c.grid.kp_min);
  c.grid.kp_max = r.finite("kp_max", c.grid.kp_max);
  c.grid.kp_count = r.integer("kp_count", c.grid.kp_count, 2);
  c.grid.kd_min = r.nonnegative("kd_min", c.grid.kd_min);
  c.grid.kd_max = r.finite("kd_max", c.grid.kd_max);
  c.grid.kd_count = r.integer("kd_count", c.grid.kd_count, 2);
  try {
    c.grid.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }

  c.sim.rel_tol = r.positive("rel_tol", c.sim.rel_tol);
  c.sim.abs_tol = r.positive("abs_tol", c.sim.abs_tol);
  c.sim.event_tol = r.positive("event_tol", c.sim.event_tol);
  c.sim.tau_max = r.positive("tau_max", c.sim.tau_max);
  c.sim.settle_vel = r.positive("settle_vel", c.sim.settle_vel);
  c.sim.record_dt = r.nonnegative("record_dt", c.sim.record_dt);

  if (const ConfigEntry* e = r.find("objective")) {
    try {
      c.objective = objective_from_string(trim(e->value));
    } catch (const std::invalid_argument& err) {
      r.fail(*e, err.what());
    }
  }
  c.r_m_list = r.list("r_m_list", {c.params.r_m});
  c.s_list = r.list("s_list", {c.params.s});
  for (double v : c.r_m_list) {
    if (!(v > 0.0) || !std::isfinite(v)) r.fail(*r.find("r_m_list"), "values must be > 0");
  }
  for (double v : c.s_list) {
    if (!(v > 0.0) || !std::isfinite(v)) r.fail(*r.find("s_list"), "values must be > 0");
  }
  c.stroke_shrink = r.positive("stroke_shrink", 1.0);
  if (c.stroke_shrink > 1.0) r.fail(*r.find("stroke_shrink"), "must be <= 1");
  c.refine = r.boolean("refine", true);
  c.n_switches = r.integer("n_switches", 1, 1);
  c.out_dir = r.text("out", "out");
  if (c.out_dir.empty()) r.fail(*r.find("out"), "must not be empty");
  c.workers = static_cast<unsigned>(r.integer("workers", 0, 0));

  if ((c.mode == Mode::Simulate || c.mode == Mode::Sweep) && c.v0.size() != 1) {
    throw ConfigError(std::string(to_string(c.mode)) + " takes a single impact velocity, got " +
                      std::to_string(c.v0.size()));
  }
  return c;
}

RunConfig parse_config(std::string_view text, std::string_view origin) {
  return build_config(read_entries(text, origin));
}

std::string to_config_text(const RunConfig& config) {
  std::ostringstream out;
  bool has_mode = false;
  for (const auto& e : config.entries) has_mode |= e.key == "mode";
  if (!has_mode) out << "mode = " << to_string(config.mode) << "\n";
  for (const auto& e : config.entries) out << e.key << " = " << e.value << "\n";
  return out.str();
}

}  // namespace softland
