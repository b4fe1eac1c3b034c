#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "filterlab/bounds.hpp"
#include "filterlab/error_model.hpp"
#include "filterlab/format.hpp"
#include "filterlab/montecarlo.hpp"

namespace fl = filterlab;

namespace {

struct Common {
  std::optional<std::uint64_t> seed;
  int workers = 0;
  std::string format = "csv";
  std::string output;
};

// Writes to --output if given; otherwise stdout, plus a copy under
// $FILTERLAB_OUTPUT_DIR when that is set.
void emit(const Common& common, const std::string& name, const std::string& text) {
  if (!common.output.empty()) {
    std::ofstream out(common.output);
    if (!out) throw std::runtime_error("cannot write " + common.output);
    out << text;
    return;
  }
  std::cout << text;
  if (const char* dir = std::getenv("FILTERLAB_OUTPUT_DIR"); dir && *dir) {
    std::filesystem::create_directories(dir);
    const auto path = std::filesystem::path(dir) / (name + "." + common.format);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
  }
}

std::string render(const Common& common, const std::vector<fl::EstimateRow>& rows) {
  return common.format == "json" ? fl::rows_to_json(rows) : fl::rows_to_csv(rows);
}

int cmd_constants(int delta_min, int delta_max, const Common& common) {
  std::vector<fl::BoundTable> rows;
  for (int d = delta_min; d <= delta_max; ++d) rows.push_back(fl::bound_table(d));
  if (delta_max > 8) std::cerr << "note: epsilon, rho and ops columns are left empty for delta > 8\n";
  emit(common, "constants", common.format == "json" ? fl::constants_to_json(rows) : fl::constants_to_csv(rows));
  return 0;
}

int cmd_epsilon(int delta, int bits, const std::string& predicate, const Common& common) {
  const auto kind = fl::parse_predicate_kind(predicate);
  const fl::ThresholdRow row = fl::threshold_row(delta, fl::PrecisionConfig(bits), kind);
  if (common.format == "text") {
    std::cout << "predicate            " << fl::to_string(kind) << "\n"
              << "delta                " << delta << "\n"
              << "bits                 " << bits << "\n"
              << "G                    " << row.magnitude.to_string() << "\n"
              << "epsilon              " << row.coefficient.to_string() << " * 2^-" << bits << "\n"
              << "epsilon (decimal)    " << fl::format_significant(row.epsilon.to_double()) << "\n"
              << "ops                  " << row.ops << "\n";
    if (kind == fl::PredicateKind::Insphere)
      std::cout << "note: insphere threshold is derived by the same calculus; there is no reference table for it\n";
    return 0;
  }
  if (kind == fl::PredicateKind::Insphere)
    std::cerr << "note: insphere threshold is derived by the same calculus; there is no reference table for it\n";
  emit(common, "epsilon", common.format == "json" ? fl::thresholds_to_json({row}) : fl::thresholds_to_csv({row}));
  return 0;
}

fl::ExperimentConfig load(const std::string& path, const Common& common) {
  fl::ExperimentConfig cfg = fl::load_config(path);
  if (common.seed) cfg.seed = *common.seed;
  return cfg;
}

int cmd_simulate(const std::string& config, const Common& common) {
  const fl::ExperimentConfig cfg = load(config, common);
  const auto rows = fl::estimate_cdf(cfg, common.workers);
  emit(common, "simulate", render(common, rows));
  return 0;
}

int cmd_failure(const std::string& config, std::optional<int> bits, const Common& common) {
  fl::ExperimentConfig cfg = load(config, common);
  if (bits) cfg.bits = *bits;
  cfg.validate();
  const auto row = fl::estimate_failure_rate(cfg, fl::PrecisionConfig(cfg.precision_bits()), common.workers);
  emit(common, "failure", render(common, {row}));
  return 0;
}

int cmd_verify(const std::string& suite, bool quick, const Common& common) {
  const auto configs = fl::verify_suite(suite, quick, common.seed.value_or(20240601));
  std::vector<fl::EstimateRow> rows;
  for (const auto& cfg : configs) {
    auto part = fl::estimate_cdf(cfg, common.workers);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  const fl::DominanceReport report = fl::dominance_report(rows);
  emit(common, "verify", render(common, rows));
  std::cerr << suite << ": " << report.summary << "\n";
  return report.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Arithmetic filter laboratory: error thresholds, failure bounds and Monte Carlo checks"};
  app.require_subcommand(1);
  Common common;

  auto add_common = [&](CLI::App* sub, bool sampling) {
    if (sampling) {
      sub->add_option("--seed", common.seed, "Override the RNG seed");
      sub->add_option("--workers", common.workers, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    }
    sub->add_option("--output", common.output, "Write the report to this file instead of stdout");
  };

  int delta_min = 1;
  int delta_max = 6;
  auto* constants = app.add_subcommand("constants", "Per-dimension constants table");
  constants->add_option("--delta-min", delta_min)->check(CLI::Range(1, 60));
  constants->add_option("--delta-max", delta_max)->check(CLI::Range(1, 60));
  constants->add_option("--format", common.format)->check(CLI::IsMember({"csv", "json"}));
  add_common(constants, false);

  int delta = 0;
  int bits = 53;
  std::string predicate = "whichside";
  auto* epsilon = app.add_subcommand("epsilon", "Certification threshold of the rounded evaluation");
  epsilon->add_option("--delta", delta)->required();
  epsilon->add_option("--bits", bits)->required()->check(CLI::Range(2, 1 << 20));
  epsilon->add_option("--predicate", predicate)->check(CLI::IsMember({"whichside", "insphere"}));
  epsilon->add_option("--format", common.format)->check(CLI::IsMember({"text", "csv", "json"}));
  add_common(epsilon, false);

  std::string config;
  auto* simulate = app.add_subcommand("simulate", "Estimate determinant CDFs and check bound dominance");
  simulate->add_option("--config", config)->required()->check(CLI::ExistingFile);
  simulate->add_option("--format", common.format)->check(CLI::IsMember({"csv", "json"}));
  add_common(simulate, true);

  std::optional<int> failure_bits;
  auto* failure = app.add_subcommand("failure", "Estimate the filter failure rate on a grid");
  failure->add_option("--config", config)->required()->check(CLI::ExistingFile);
  failure->add_option("--bits", failure_bits, "Mantissa bits of the rounded filter")->check(CLI::Range(2, 53));
  failure->add_option("--format", common.format)->check(CLI::IsMember({"csv", "json"}));
  add_common(failure, true);

  std::string suite;
  bool quick = false;
  auto* verify = app.add_subcommand("verify", "Run a canned dominance suite; exit 1 on any violation");
  verify->add_option("suite", suite)->required()->check(CLI::IsMember(fl::verify_suite_names()));
  verify->add_flag("--quick", quick, "10^5 trials per experiment instead of 10^6");
  verify->add_option("--format", common.format)->check(CLI::IsMember({"csv", "json"}));
  add_common(verify, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*constants) {
      if (delta_min > delta_max) throw std::invalid_argument("--delta-min must not exceed --delta-max");
      return cmd_constants(delta_min, delta_max, common);
    }
    if (*epsilon) return cmd_epsilon(delta, bits, predicate, common);
    if (*simulate) return cmd_simulate(config, common);
    if (*failure) return cmd_failure(config, failure_bits, common);
    if (*verify) return cmd_verify(suite, quick, common);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
