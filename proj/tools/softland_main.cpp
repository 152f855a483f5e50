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

// softland <mode> [--config FILE] [--set key=value]... [--out DIR] [--workers N]

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "softland/app.hpp"
#include "softland/config.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw softland::ConfigError("cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Soft landing simulation and optimisation on yielding ground"};
  std::string mode;
  std::string config_path;
  std::vector<std::string> sets;
  std::string out_dir;
  int workers = -1;
  app.add_option("mode", mode, "simulate, sweep, curves, bangbang, compare or cot")
      ->required();
  app.add_option("--config", config_path, "key=value configuration file");
  app.add_option("--set", sets, "override one key, e.g. --set v0=-3");
  app.add_option("--out", out_dir, "output directory (default: out)");
  app.add_option("--workers", workers, "worker threads, 0 = all cores")
      ->check(CLI::NonNegativeNumber);
  app.set_version_flag("--version", std::string(softland::kVersion));
  CLI11_PARSE(app, argc, argv);

  std::string fallback_dir = out_dir.empty() ? "out" : out_dir;
  try {
    std::vector<softland::ConfigEntry> entries;
    if (!config_path.empty()) entries = softland::read_entries(read_file(config_path), config_path);
    entries.push_back({"mode", mode, "command line"});
    for (const auto& s : sets) entries.push_back(softland::parse_assignment(s, "--set " + s));
    if (!out_dir.empty()) entries.push_back({"out", out_dir, "--out"});
    if (workers >= 0) {
      entries.push_back({"workers", std::to_string(workers), "--workers"});
    } else if (const char* env = std::getenv("SOFTLAND_WORKERS")) {
      bool configured = false;
      for (const auto& e : entries) configured |= e.key == "workers";
      if (!configured) entries.push_back({"workers", env, "SOFTLAND_WORKERS"});
    }
    const softland::RunConfig config = softland::build_config(entries);
    return softland::run(config, std::cerr);
  } catch (const softland::ConfigError& e) {
    softland::write_error_record(fallback_dir, "config", e.what());
    std::cerr << "softland: config error: " << e.what() << "\n";
    return softland::kExitConfig;
  }
}
