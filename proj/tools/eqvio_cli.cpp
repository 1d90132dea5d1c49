#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "eqvio/eqf/filter.hpp"
#include "eqvio/eqf/pipeline.hpp"
#include "eqvio/io/commands.hpp"

namespace {

namespace fs = std::filesystem;
using namespace eqvio;

constexpr int kExitParse = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitConfig = 4;

struct CommonOptions {
  std::string config;
  std::string output = ".";
  std::optional<std::uint64_t> seed;
};

void addCommon(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config, "key = value configuration file");
  cmd->add_option("--output", opts.output, "output directory");
  cmd->add_option("--seed", opts.seed, "random seed override");
}

io::RunConfig loadConfig(const CommonOptions& opts) {
  io::RunConfig config = opts.config.empty() ? io::RunConfig{} : io::parseConfig(io::readFile(opts.config), opts.config);
  if (opts.seed) {
    config.world.noise.seed = *opts.seed;
    config.dist.particles.seed = *opts.seed;
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equivariant visual-inertial odometry tools"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::string dataset;
  std::string estimate;
  std::string truth;

  auto* simulate = app.add_subcommand("simulate", "write a synthetic dataset");
  auto* filter = app.add_subcommand("filter", "run the filter on a dataset");
  auto* evaluate = app.add_subcommand("evaluate", "compare an estimate with the truth");
  auto* linerr = app.add_subcommand("linerr", "landmark linearisation-error grids");
  auto* distcompare = app.add_subcommand("distcompare", "navigation error distribution comparison");
  for (auto* cmd : {simulate, filter, evaluate, linerr, distcompare}) addCommon(cmd, opts);
  filter->add_option("--dataset", dataset, "dataset directory (default: config dataset, else output)");
  evaluate->add_option("--estimate", estimate, "estimate CSV (default: OUTPUT/estimate.csv)");
  evaluate->add_option("--truth", truth, "truth CSV (default: OUTPUT/truth.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    const io::RunConfig config = loadConfig(opts);
    const fs::path out(opts.output);
    std::string report;
    if (*simulate) {
      report = io::cmdSimulate(config, out);
    } else if (*filter) {
      const fs::path dir = !dataset.empty() ? fs::path(dataset) : !config.dataset.empty() ? fs::path(config.dataset) : out;
      report = io::cmdFilter(config, dir, out);
    } else if (*evaluate) {
      report = io::cmdEvaluate(config, estimate.empty() ? out / io::kEstimateFile : fs::path(estimate),
                               truth.empty() ? out / io::kTruthFile : fs::path(truth));
    } else if (*linerr) {
      report = io::cmdLinerr(config, out);
    } else if (*distcompare) {
      report = io::cmdDistcompare(config, out);
    }
    std::cout << report;
    return 0;
  } catch (const io::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const eqf::StreamGapError& e) {
    std::cerr << "stream error: " << e.what() << '\n';
    return kExitParse;
  } catch (const io::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const eqf::FilterDivergence& e) {
    std::cerr << "filter divergence: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
