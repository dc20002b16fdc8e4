#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "metrics/report.hpp"
#include "scenario/json_io.hpp"
#include "scenario/presets.hpp"
#include "scenario/runner.hpp"

namespace {

using botsim::ParseResult;
using botsim::RunOptions;
using botsim::ScenarioSpec;

int load_spec(const std::string& preset_name, const std::string& file,
              ScenarioSpec& out) {
  if (!preset_name.empty()) {
    try {
      out = botsim::preset(preset_name);
    } catch (const std::exception& err) {
      std::cerr << err.what() << "\n";
      return 2;
    }
    return 0;
  }
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    std::cerr << "cannot read scenario file: " << file << "\n";
    return 1;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  ParseResult parsed = botsim::parse_scenario(buffer.str());
  if (!parsed.ok()) {
    std::cerr << "scenario validation failed (" << parsed.errors.size()
              << " error" << (parsed.errors.size() == 1 ? "" : "s") << "):\n";
    for (const auto& err : parsed.errors) {
      std::cerr << "  " << err.render() << "\n";
    }
    return 2;
  }
  out = std::move(*parsed.spec);
  return 0;
}

// Walks a dotted path through the serialized scenario; array hops match the
// element whose "name" or "id" equals the segment.
nlohmann::json* navigate(nlohmann::json& doc,
                         const std::vector<std::string>& segments) {
  nlohmann::json* at = &doc;
  for (const std::string& seg : segments) {
    if (at->is_array()) {
      nlohmann::json* match = nullptr;
      for (auto& item : *at) {
        if (item.is_object() &&
            ((item.contains("name") && item["name"] == seg) ||
             (item.contains("id") && item["id"] == seg))) {
          match = &item;
          break;
        }
      }
      if (match == nullptr) return nullptr;
      at = match;
    } else if (at->is_object() && at->contains(seg)) {
      at = &(*at)[seg];
    } else {
      return nullptr;
    }
  }
  return at;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string part;
  for (char c : text) {
    if (c == sep) {
      out.push_back(part);
      part.clear();
    } else {
      part.push_back(c);
    }
  }
  out.push_back(part);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic desk-scale simulator of IoT botnet formation "
               "and DDoS campaigns"};
  app.require_subcommand(1);

  std::string preset_name, scenario_file, out_dir, format = "csv";
  std::uint64_t seed = 0;
  bool seed_set = false;
  double until = 0.0;
  bool until_set = false;

  auto add_common = [&](CLI::App* cmd, bool need_source) {
    auto* p = cmd->add_option("--preset", preset_name, "named preset scenario");
    auto* s = cmd->add_option("--scenario", scenario_file,
                              "scenario file (json)");
    if (need_source) {
      p->excludes(s);
    }
    cmd->add_option("--seed", seed, "master seed override")
        ->each([&](const std::string&) { seed_set = true; });
    cmd->add_option("--until", until, "horizon override in simulated seconds")
        ->each([&](const std::string&) { until_set = true; });
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "structured"}));
  };

  CLI::App* run_cmd = app.add_subcommand("run", "execute one scenario");
  add_common(run_cmd, true);

  CLI::App* preset_cmd = app.add_subcommand("preset", "inspect presets");
  CLI::App* preset_list = preset_cmd->add_subcommand("list",
                                                     "list preset names");
  std::string show_name;
  CLI::App* preset_show =
      preset_cmd->add_subcommand("show", "print a preset as a scenario file");
  preset_show->add_option("name", show_name, "preset name")->required();

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "run a scenario across parameter values");
  add_common(sweep_cmd, true);
  std::string param;
  std::string values_csv;
  sweep_cmd->add_option("--param", param,
                        "dotted config path, e.g. malware.mirai.scan_rate_pps")
      ->required();
  sweep_cmd->add_option("--values", values_csv, "comma-separated numbers")
      ->required();

  CLI11_PARSE(app, argc, argv);

  auto make_options = [&]() {
    RunOptions opts;
    if (seed_set) opts.seed = seed;
    if (until_set) opts.until = until;
    opts.out_dir = out_dir;
    opts.format = format == "structured" ? RunOptions::Format::Structured
                                         : RunOptions::Format::Csv;
    return opts;
  };

  try {
    if (preset_list->parsed()) {
      for (const std::string& name : botsim::preset_names()) {
        std::cout << name << "\n";
      }
      return 0;
    }
    if (preset_show->parsed()) {
      std::cout << botsim::serialize_scenario(botsim::preset(show_name));
      return 0;
    }

    if (run_cmd->parsed()) {
      if (preset_name.empty() && scenario_file.empty()) {
        std::cerr << "run needs --preset or --scenario\n";
        return 2;
      }
      ScenarioSpec spec;
      if (int rc = load_spec(preset_name, scenario_file, spec); rc != 0) {
        return rc;
      }
      botsim::RunResult result = botsim::run_scenario(spec, make_options());
      std::cout << botsim::render_summary(result.summary);
      std::cout << "events-processed: " << result.events_processed << "\n";
      return 0;
    }

    if (sweep_cmd->parsed()) {
      if (preset_name.empty() && scenario_file.empty()) {
        std::cerr << "sweep needs --preset or --scenario\n";
        return 2;
      }
      ScenarioSpec base;
      if (int rc = load_spec(preset_name, scenario_file, base); rc != 0) {
        return rc;
      }
      auto segments = split(param, '.');
      for (const std::string& value_text : split(values_csv, ',')) {
        nlohmann::json doc =
            nlohmann::json::parse(botsim::serialize_scenario(base));
        nlohmann::json* slot = navigate(doc, segments);
        if (slot == nullptr) {
          std::cerr << "no such parameter path: " << param << "\n";
          return 2;
        }
        *slot = std::stod(value_text);
        ParseResult reparsed = botsim::parse_scenario(doc.dump());
        if (!reparsed.ok()) {
          std::cerr << "sweep value " << value_text << " invalidates the "
                    << "scenario:\n";
          for (const auto& err : reparsed.errors) {
            std::cerr << "  " << err.render() << "\n";
          }
          return 2;
        }
        RunOptions opts = make_options();
        if (!opts.out_dir.empty()) {
          opts.out_dir += "/" + botsim::csv_safe_name(param) + "=" + value_text;
        }
        botsim::RunResult result = botsim::run_scenario(*reparsed.spec, opts);
        std::cout << "=== " << param << " = " << value_text << " ===\n";
        std::cout << botsim::render_summary(result.summary);
      }
      return 0;
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
