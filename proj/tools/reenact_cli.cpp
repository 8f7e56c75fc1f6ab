#include <iostream>

#include <CLI11.hpp>

#include "reenact/pipeline.hpp"

namespace {

constexpr int kExitStageFailure = 1;
constexpr int kExitUsage = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Face reenactment: match, transfer and composite a source face into target footage"};
  std::string config_path;
  int workers = 0;
  bool dump = false;
  bool validate = false;
  app.add_option("--config", config_path, "key=value run configuration")->required();
  app.add_option("--workers", workers, "worker threads (default: available parallelism)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--dump-diagnostics", dump, "write cluster and candidate tables after the run");
  app.add_flag("--validate-self", validate, "matching-only self-reenactment validation");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  using namespace reenact;
  try {
    RunConfig config;
    try {
      config = load_run_config(config_path);
    } catch (const Error& e) {
      throw pipeline::StageError("media_io", e.kind(), e.what());
    }
    const pipeline::RunOptions options{workers};
    const auto report = validate ? pipeline::cmd_validate_self(config, options)
                                 : pipeline::cmd_reenact(config, options);
    if (dump) {
      for (const auto& file : pipeline::cmd_dump_diagnostics(config, options)) {
        std::cout << "wrote " << file.string() << '\n';
      }
    }
    std::cout << "clusters: " << report.cluster_count() << '\n';
    if (report.mismatches) {
      std::cout << "mismatches: " << *report.mismatches << " (rate " << report.mismatch_rate()
                << ")\n";
    } else {
      std::cout << "frames written: " << report.frames.size() << " to "
                << config.output_dir.string() << '\n';
    }
    return 0;
  } catch (const pipeline::StageError& e) {
    std::cerr << "error " << e.what() << " (" << to_string(e.kind()) << ")\n";
    return kExitStageFailure;
  } catch (const std::exception& e) {
    std::cerr << "error [pipeline_cli] " << e.what() << '\n';
    return kExitStageFailure;
  }
}
