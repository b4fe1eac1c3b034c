#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "filterlab/dyadic.hpp"
#include "filterlab/error_model.hpp"
#include "filterlab/predicates.hpp"

namespace filterlab {

enum class DomainKind { Ball, Cube, Grid };

std::string to_string(DomainKind kind);
DomainKind parse_domain_kind(const std::string& text);

struct SampleDomain {
  DomainKind kind = DomainKind::Cube;
  int delta = 2;
  // Grid only: pitch 2^(1 - eta_bits), i.e. eta_bits - 1 fractional bits.
  int eta_bits = 0;

  double eta() const;
  void validate() const;
};

struct ExperimentConfig {
  SampleDomain domain;
  PredicateKind predicate = PredicateKind::WhichSide;
  std::int64_t n_trials = 0;
  std::uint64_t seed = 0;
  std::vector<double> thresholds;
  // Mantissa bits of the rounded filter in failure runs; defaults to eta_bits.
  std::optional<int> bits;

  // Throws ConfigError on an invalid combination.
  void validate() const;
  int precision_bits() const;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message, std::string key = {});
  int line() const { return line_; }
  const std::string& key() const { return key_; }
  std::string message() const { return message_; }

 private:
  int line_;
  std::string key_;
  std::string message_;
};

// Flat "key = value" text, '#' starts a comment. Keys: domain, delta, eta_bits,
// predicate, n_trials, seed, thresholds (comma or space separated), bits.
// Text whose first non-blank character is '{' is read as a JSON object with the
// same keys. The result is validated.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Generator for one chunk of trials; chunk streams are independent of how
// chunks are distributed over workers.
class ChunkRng {
 public:
  ChunkRng(std::uint64_t seed, std::uint64_t chunk);

  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  double normal();
  std::uint64_t below(std::uint64_t n);  // uniform in [0, n)

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_;
};

inline constexpr std::int64_t chunk_size = 1 << 14;

std::vector<double> sample_ball(int delta, ChunkRng& rng);
std::vector<double> sample_cube(int delta, ChunkRng& rng);
GridPoint sample_grid(int delta, int eta_bits, ChunkRng& rng);

// Exact |determinant| of the sample. which-side takes delta points of dimension
// delta; insphere takes delta + 1 points and uses the lifted matrix.
Dyadic measure_whichside(const std::vector<std::vector<double>>& points);
Dyadic measure_insphere(const std::vector<std::vector<double>>& points);

struct EstimateRow {
  int delta = 0;
  DomainKind domain = DomainKind::Cube;
  PredicateKind predicate = PredicateKind::WhichSide;
  double v = 0.0;
  std::int64_t n = 0;
  std::int64_t hits = 0;
  double p_hat = 0.0;
  double std_error = 0.0;
  double bound = 0.0;
  bool pass = true;  // bound >= p_hat - 3 stderr
};

EstimateRow make_row(const ExperimentConfig& cfg, double v, std::int64_t hits, double bound);

// Bound attached to a CDF row: sigma V (ball), psi V (cube), the grid bound
// (grid); the insphere bounds for insphere on cube or grid.
double cdf_bound(const ExperimentConfig& cfg, double v);

// workers = 0 uses the hardware concurrency.
std::vector<EstimateRow> estimate_cdf(const ExperimentConfig& cfg, int workers = 0);
// Grid only; throws std::invalid_argument otherwise. v of the row is the
// filter threshold, hits the number of uncertain verdicts.
EstimateRow estimate_failure_rate(const ExperimentConfig& cfg, const PrecisionConfig& precision, int workers = 0);

struct DominanceReport {
  bool pass = true;
  std::vector<EstimateRow> violations;
  std::string summary;
};

// Throws std::invalid_argument on an empty row list.
DominanceReport dominance_report(const std::vector<EstimateRow>& rows);

// Canned dominance suites over a 10-point V grid: whichside-2d,
// whichside-ball (delta <= 4), whichside-cube (delta <= 4), whichside-grid
// (delta <= 3), insphere (delta = 1, 2, 3 on the cube), all. N is 10^6, or
// 10^5 when quick. Throws std::invalid_argument for an unknown name.
std::vector<ExperimentConfig> verify_suite(const std::string& name, bool quick, std::uint64_t seed);
const std::vector<std::string>& verify_suite_names();

// Columns: delta,domain,predicate,V,N,hits,p_hat,stderr,bound,pass
std::string rows_to_csv(const std::vector<EstimateRow>& rows);
std::string rows_to_json(const std::vector<EstimateRow>& rows);

}  // namespace filterlab
