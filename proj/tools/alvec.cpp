// alvec: run presets, compare report directories, emit phase portraits.

#include <alvec/experiment.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kOk = 0;
constexpr int kRuntime = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "1,2,3" or "1..5".
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  try {
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
      const auto lo = std::stoull(text.substr(0, dots));
      const auto hi = std::stoull(text.substr(dots + 2));
      if (hi < lo) throw UsageError("empty seed range: " + text);
      for (auto s = lo; s <= hi; ++s) out.push_back(s);
      return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
  } catch (const std::logic_error&) {
    throw UsageError("bad seed list: " + text);
  }
  if (out.empty()) throw UsageError("no seeds given");
  return out;
}

alvec::PopulationState parse_start(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError("start must be P,Q: " + text);
  try {
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1)), 0.0};
  } catch (const std::logic_error&) {
    throw UsageError("start must be P,Q: " + text);
  }
}

std::filesystem::path out_dir(const std::string& flag) {
  if (const char* env = std::getenv("ALVEC_OUT"); env && *env) return env;
  return flag;
}

alvec::Preset load_preset(const std::string& name, const std::string& config_path) {
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw UsageError("cannot read config " + config_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(std::string("config is not valid JSON: ") + e.what());
    }
    return alvec::preset_from_json(j);
  }
  if (name.empty()) throw UsageError("run needs a preset or --config");
  return alvec::make_preset(name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LV-driven cloud elasticity experiments"};
  app.require_subcommand(1);

  std::string preset, config_path, seeds_text = "1..5", policy, out = "alvec_out";
  auto* run = app.add_subcommand("run", "run a preset or config file");
  run->add_option("preset", preset, "preset id");
  run->add_option("--config", config_path, "flat JSON config");
  run->add_option("--seeds", seeds_text, "a,b,c or lo..hi");
  run->add_option("--policy", policy, "dispatch policy override");
  run->add_option("--out", out, "output directory");

  std::string cmp_dir;
  auto* cmp = app.add_subcommand("compare", "summarize paired reports in a directory");
  cmp->add_option("dir", cmp_dir, "directory with *_report.json")->required();

  alvec::LVParams k;
  std::vector<std::string> starts;
  double t_end = 2.0, step = 0.01;
  std::string portrait_out = "alvec_out";
  auto* por = app.add_subcommand("portrait", "phase-portrait data");
  por->add_option("--alpha", k.alpha)->required();
  por->add_option("--beta", k.beta)->required();
  por->add_option("--gamma", k.gamma)->required();
  por->add_option("--delta", k.delta)->required();
  por->add_option("--start", starts, "P,Q (repeatable)")->required();
  por->add_option("--t-end", t_end);
  por->add_option("--step", step);
  por->add_option("--out", portrait_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*run) {
      alvec::Preset p;
      std::vector<std::uint64_t> seeds;
      try {
        p = load_preset(preset, config_path);
        seeds = parse_seeds(seeds_text);
        if (!policy.empty()) {
          alvec::make_dispatch_policy(policy, 100.0, 0);
          p.dispatch = policy;
        }
      } catch (const alvec::ConfigError& e) {
        throw UsageError(e.what());
      }
      const auto dir = out_dir(out);
      const auto r = alvec::run_preset(p, seeds, dir);
      for (const auto& f : r.files) std::cout << f << "\n";
      if (!p.trajectory) alvec::write_summary(std::cout, r.summary);
      return kOk;
    }
    if (*cmp) {
      alvec::ComparisonSummary s;
      try {
        s = alvec::compare_directory(cmp_dir);
      } catch (const alvec::ConfigError& e) {
        throw UsageError(e.what());
      }
      alvec::write_summary(std::cout, s);
      return kOk;
    }
    if (*por) {
      std::vector<alvec::PopulationState> st;
      for (const auto& s : starts) st.push_back(parse_start(s));
      if (!k.valid()) throw UsageError("coefficients must be finite and positive");
      const auto dir = out_dir(portrait_out);
      std::filesystem::create_directories(dir);
      const auto path = dir / "portrait.csv";
      std::ofstream f(path, std::ios::binary);
      if (!f) throw alvec::Error("cannot write " + path.string());
      nlohmann::json cfg{{"alpha", k.alpha}, {"beta", k.beta}, {"gamma", k.gamma},
                         {"delta", k.delta}, {"starts", starts}, {"t_end", t_end},
                         {"step", step}};
      char hash[17];
      std::snprintf(hash, sizeof hash, "%016llx",
                    static_cast<unsigned long long>(alvec::fnv1a64(cfg.dump())));
      const bool ok = alvec::write_phase_portrait(f, k, st, t_end, step, {},
                                                  std::string("alvec config_hash=") + hash);
      std::cout << path.string() << "\n";
      if (!ok) {
        std::cerr << "alvec: some orbits failed to integrate; see warning rows\n";
        return kRuntime;
      }
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "alvec: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "alvec: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}
