#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "levitsim/errors.hpp"
#include "levitsim/scenario.hpp"

namespace fs = std::filesystem;
using levitsim::io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::mutex io_mutex;

struct Failure {
  int code;
  json record;
};

Failure classify(const std::string& source) {
  auto make = [&](int code, const char* type, const char* category, const std::string& msg) {
    return Failure{code, json{{"error",
                               {{"type", type},
                                {"category", category},
                                {"message", msg},
                                {"source", source},
                                {"exit_code", code}}}}};
  };
  try {
    throw;
  } catch (const levitsim::ConfigError& e) {
    return make(kExitConfig, "ConfigError", "config", e.what());
  } catch (const levitsim::DomainError& e) {
    return make(kExitConfig, "DomainError", "config", e.what());
  } catch (const levitsim::TruncationError& e) {
    return make(kExitNumerical, "TruncationError", "numerical", e.what());
  } catch (const levitsim::InstabilityError& e) {
    return make(kExitNumerical, "InstabilityError", "numerical", e.what());
  } catch (const levitsim::ValidityError& e) {
    return make(kExitNumerical, "ValidityError", "numerical", e.what());
  } catch (const levitsim::FitError& e) {
    return make(kExitNumerical, "FitError", "numerical", e.what());
  } catch (const levitsim::StepSizeError& e) {
    return make(kExitNumerical, "StepSizeError", "numerical", e.what());
  } catch (const levitsim::NumericalError& e) {
    return make(kExitNumerical, "NumericalError", "numerical", e.what());
  } catch (const std::exception& e) {
    return make(kExitInternal, "InternalError", "internal", e.what());
  }
}

void report(const Failure& f) {
  std::lock_guard lock(io_mutex);
  std::cerr << f.record.dump() << '\n';
}

int run_one(const std::string& path, const levitsim::RunOptions& options, bool quiet) {
  try {
    const auto scenario = levitsim::parse_scenario(fs::path(path));
    const auto m = levitsim::run_scenario(scenario, options);
    std::lock_guard lock(io_mutex);
    for (const auto& w : m.warnings) {
      std::cerr << json{{"warning", {{"scenario", m.scenario}, {"message", w}}}}.dump() << '\n';
    }
    if (!quiet) {
      std::cout << json{{"scenario", m.scenario},
                        {"status", "ok"},
                        {"directory", m.directory.string()},
                        {"files", m.files.size() + 1}}
                       .dump()
                << '\n';
    }
    return kExitOk;
  } catch (...) {
    const auto f = classify(path);
    report(f);
    return f.code;
  }
}

fs::path scenario_dir(const std::string& option) {
  if (!option.empty()) return option;
  if (const char* env = std::getenv("LEVITSIM_SCENARIOS"); env && *env) return env;
  if (fs::is_directory("scenarios")) return "scenarios";
  return LEVITSIM_SCENARIO_DIR;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"levitsim: levitated optomechanics simulation toolkit"};
  app.set_version_flag("--version", levitsim::toolkit_version());
  app.require_subcommand(1);

  std::vector<std::string> run_files;
  std::uint64_t seed = 0;
  std::string out_dir, format = "csv";
  unsigned jobs = 1;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Run one or more scenarios");
  run->add_option("scenarios", run_files, "Scenario JSON files")->required()->check(CLI::ExistingFile);
  auto* seed_opt = run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--out", out_dir, "Output root (default $LEVITSIM_OUT or ./levitsim-out)");
  run->add_option("--jobs,-j", jobs, "Scenarios to run concurrently")->check(CLI::PositiveNumber);
  run->add_option("--format", format, "Data file format")->check(CLI::IsMember({"csv", "json"}));
  run->add_flag("--quiet,-q", quiet, "Suppress per-scenario status lines");

  std::vector<std::string> validate_files;
  bool print_resolved = false;
  auto* validate = app.add_subcommand("validate", "Parse and check scenarios without running");
  validate->add_option("scenarios", validate_files, "Scenario JSON files")->required();
  validate->add_flag("--print", print_resolved, "Print the resolved SI parameters");

  std::string list_dir;
  auto* list = app.add_subcommand("list-scenarios", "List shipped scenarios");
  list->add_option("--dir", list_dir, "Scenario directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*run) {
    levitsim::RunOptions options;
    if (*seed_opt) options.seed = seed;
    options.out_root = out_dir;
    options.format = levitsim::output_format_from_string(format);
    std::vector<int> codes(run_files.size(), kExitOk);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < run_files.size(); i = next++) {
        codes[i] = run_one(run_files[i], options, quiet);
      }
    };
    const unsigned n = std::min<unsigned>(jobs, static_cast<unsigned>(run_files.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return *std::max_element(codes.begin(), codes.end());
  }

  if (*validate) {
    int worst = kExitOk;
    for (const auto& path : validate_files) {
      try {
        const auto s = levitsim::parse_scenario(fs::path(path));
        json out{{"scenario", s.name}, {"kind", to_string(s.kind)}, {"status", "ok"}};
        if (print_resolved) out["resolved_parameters"] = s.resolved;
        std::cout << (print_resolved ? out.dump(2) : out.dump()) << '\n';
      } catch (...) {
        const auto f = classify(path);
        report(f);
        worst = std::max(worst, f.code);
      }
    }
    return worst;
  }

  if (*list) {
    const fs::path dir = scenario_dir(list_dir);
    if (!fs::is_directory(dir)) {
      std::cerr << json{{"error", {{"type", "ConfigError"}, {"category", "config"},
                                   {"message", "no scenario directory at '" + dir.string() + "'"},
                                   {"exit_code", kExitConfig}}}}.dump()
                << '\n';
      return kExitConfig;
    }
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    int worst = kExitOk;
    for (const auto& f : files) {
      try {
        const auto s = levitsim::parse_scenario(f);
        std::cout << f.filename().string() << "\t" << to_string(s.kind) << "\t" << s.description
                  << '\n';
      } catch (...) {
        const auto fail = classify(f.string());
        report(fail);
        worst = std::max(worst, fail.code);
      }
    }
    return worst;
  }
  return kExitOk;
}
