#include <cstdio>
#include <thread>

#include "CLI11.hpp"
#include "commands.hpp"
#include "pointhop/error.hpp"

namespace {

using namespace pointhop;
using namespace pointhop::cli;

// 0 success, 1 usage, 2 data error, 3 numeric failure
int exit_code_for(errc code) {
  switch (code) {
    case errc::bad_config:
    case errc::channel_out_of_range:
      return 1;
    case errc::malformed_header:
    case errc::index_out_of_range:
    case errc::truncated_file:
    case errc::degenerate_mesh:
    case errc::unknown_magic:
    case errc::length_mismatch:
    case errc::empty_dataset:
    case errc::unknown_class_name:
    case errc::version_mismatch:
    case errc::checksum_failure:
    case errc::io_failure:
      return 2;
    default:
      return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pointhop: explainable point-cloud classification"};
  app.require_subcommand(1);
  const int default_threads = int(std::max(1u, std::thread::hardware_concurrency()));

  ConvertOptions convert;
  auto* cmd_conv = app.add_subcommand("convert", "sample OFF meshes into packed point sets");
  cmd_conv->add_option("--in", convert.in_root, "raw dataset root (class/split/*.off)")->required();
  cmd_conv->add_option("--out", convert.out_root, "converted dataset root")->required();
  cmd_conv->add_option("--points", convert.points, "points per cloud (default 2048)");
  cmd_conv->add_option("--seed", convert.seed, "sampling seed")->required();
  cmd_conv->add_option("--splits", convert.splits, "splits to convert (default train test)");

  FitOptions fit;
  auto* cmd_f = app.add_subcommand("fit", "fit the feature pipeline and classifier");
  cmd_f->add_option("--config", fit.config_path, "experiment config file");
  cmd_f->add_option("--data", fit.data_root, "converted dataset root")->required();
  cmd_f->add_option("--out", fit.out_bundle, "output bundle path")->required();
  cmd_f->add_option("--seed", fit.seed, "master seed")->required();
  cmd_f->add_option("--threads", fit.threads, "worker threads (default: hardware)")
      ->default_val(default_threads);

  FitOptions efit;
  efit.ensemble = true;
  auto* cmd_ef = app.add_subcommand("ensemble-fit", "fit an ensemble of pipelines");
  cmd_ef->add_option("--config", efit.config_path, "config with ensemble.branch lines")->required();
  cmd_ef->add_option("--data", efit.data_root, "converted dataset root")->required();
  cmd_ef->add_option("--out", efit.out_bundle, "output bundle path")->required();
  cmd_ef->add_option("--seed", efit.seed, "master seed")->required();
  cmd_ef->add_option("--threads", efit.threads, "worker threads")->default_val(default_threads);

  EvalOptions eval;
  auto* cmd_e = app.add_subcommand("eval", "evaluate a bundle on a split");
  cmd_e->add_option("--bundle", eval.bundle_path, "bundle from fit/ensemble-fit")->required();
  cmd_e->add_option("--data", eval.data_root, "converted dataset root")->required();
  cmd_e->add_option("--split", eval.split, "split name (default test)");
  int test_points = 0;
  cmd_e->add_option("--test-points", test_points,
                    "evaluate at a different input density than training");
  cmd_e->add_option("--report", eval.report_out, "write the full report to a file");
  cmd_e->add_option("--confusion", eval.confusion_out, "write the confusion matrix (TSV)");

  AblateOptions ablate;
  auto* cmd_a = app.add_subcommand("ablate", "accuracy grid over pipeline variants");
  cmd_a->add_option("--config", ablate.config_path, "base experiment config");
  cmd_a->add_option("--data", ablate.data_root, "converted dataset root")->required();
  cmd_a->add_option("--seed", ablate.seed, "master seed")->required();
  cmd_a->add_option("--threads", ablate.threads, "worker threads")->default_val(default_threads);
  cmd_a->add_option("--axes", ablate.axes,
                    "axes allowed to vary: features fps pooling classifier reduction");

  InspectOptions inspect;
  auto* cmd_i = app.add_subcommand("inspect", "dump per-point channel responses");
  cmd_i->add_option("--bundle", inspect.bundle_path, "bundle from fit")->required();
  cmd_i->add_option("--cloud", inspect.cloud_path, "point set file (packed or xyz)")->required();
  cmd_i->add_option("--unit", inspect.unit, "unit 1..4")->required();
  cmd_i->add_option("--channel", inspect.channel, "channel index")->required();
  cmd_i->add_option("--out", inspect.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // collapse CLI11's fine-grained codes onto the documented usage code
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*cmd_conv) return cmd_convert(convert);
    if (*cmd_f) return cmd_fit(fit);
    if (*cmd_ef) return cmd_fit(efit);
    if (*cmd_e) {
      if (cmd_e->count("--test-points")) eval.test_points = test_points;
      return cmd_eval(eval);
    }
    if (*cmd_a) return cmd_ablate(ablate);
    if (*cmd_i) return cmd_inspect(inspect);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 1;
}
