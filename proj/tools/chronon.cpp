#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "chronon/runner.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

}  // namespace

int main(int argc, char** argv) {
  using namespace chronon::cli;
  std::vector<std::string> args(argv + 1, argv + argc);
  ScenarioConfig cfg;
  try {
    cfg = parse_config(args);
  } catch (const HelpRequested& help) {
    std::cout << help.what();
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "chronon: usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    const auto rows = run_scenario(cfg);
    emit(rows, cfg.format, cfg.out_path, config_record(cfg));
  } catch (const std::exception& e) {
    std::cerr << "chronon: error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
