#include "filterlab/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "filterlab/bounds.hpp"
#include "filterlab/exact_core.hpp"
#include "filterlab/format.hpp"

namespace filterlab {

std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::Ball:
      return "ball";
    case DomainKind::Cube:
      return "cube";
    case DomainKind::Grid:
      return "grid";
  }
  return "?";
}

DomainKind parse_domain_kind(const std::string& text) {
  if (text == "ball") return DomainKind::Ball;
  if (text == "cube") return DomainKind::Cube;
  if (text == "grid") return DomainKind::Grid;
  throw std::invalid_argument("unknown domain '" + text + "' (expected ball|cube|grid)");
}

double SampleDomain::eta() const { return kind == DomainKind::Grid ? std::ldexp(1.0, 1 - eta_bits) : 0.0; }

void SampleDomain::validate() const {
  if (delta < 1 || delta > 8) throw std::invalid_argument("domain: delta must be in 1..8");
  if (kind == DomainKind::Grid && (eta_bits < 2 || eta_bits > 53))
    throw std::invalid_argument("domain: grid needs eta_bits in 2..53");
}

ConfigError::ConfigError(int line, const std::string& message, std::string key)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line),
      key_(std::move(key)),
      message_(message) {}

int ExperimentConfig::precision_bits() const {
  if (bits) return *bits;
  if (domain.kind == DomainKind::Grid) return domain.eta_bits;
  return 53;
}

void ExperimentConfig::validate() const {
  if (domain.delta < 1 || domain.delta > 8) throw ConfigError(0, "delta must be in 1..8", "delta");
  if (domain.kind == DomainKind::Grid && (domain.eta_bits < 2 || domain.eta_bits > 53))
    throw ConfigError(0, "grid domain needs eta_bits in 2..53", "eta_bits");
  if (n_trials < 1) throw ConfigError(0, "n_trials must be >= 1", "n_trials");
  if (predicate == PredicateKind::Insphere) {
    if (domain.delta > 7) throw ConfigError(0, "insphere: delta must be in 1..7", "delta");
    if (domain.kind == DomainKind::Ball)
      throw ConfigError(0, "insphere experiments use the cube or grid domain", "domain");
  }
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const double v = thresholds[i];
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(0, "thresholds must be finite and >= 0", "thresholds");
    if (i > 0 && v < thresholds[i - 1]) throw ConfigError(0, "thresholds must be sorted ascending", "thresholds");
    if (predicate == PredicateKind::Insphere && domain.delta == 1 && v > 2.0)
      throw ConfigError(0, "insphere delta=1 thresholds must be <= 2", "thresholds");
  }
  if (bits) {
    if (*bits < 2 || *bits > 53) throw ConfigError(0, "bits must be in 2..53", "bits");
    if (domain.kind == DomainKind::Grid && *bits < domain.eta_bits)
      throw ConfigError(0, "bits must be >= eta_bits so grid coordinates are representable", "bits");
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& text, int line, const std::string& key) {
  T value{};
  std::istringstream in(text);
  in.imbue(std::locale::classic());
  in >> value;
  if (in.fail() || !(in >> std::ws).eof()) throw ConfigError(line, "bad value for " + key + ": '" + text + "'");
  return value;
}

std::vector<double> parse_list(std::string text, int line) {
  std::replace(text.begin(), text.end(), ',', ' ');
  std::vector<double> out;
  std::istringstream in(text);
  in.imbue(std::locale::classic());
  std::string item;
  while (in >> item) out.push_back(parse_number<double>(item, line, "thresholds"));
  return out;
}

void apply(ExperimentConfig& cfg, const std::string& key, const std::string& value, int line) {
  try {
    if (key == "domain")
      cfg.domain.kind = parse_domain_kind(value);
    else if (key == "delta")
      cfg.domain.delta = parse_number<int>(value, line, key);
    else if (key == "eta_bits")
      cfg.domain.eta_bits = parse_number<int>(value, line, key);
    else if (key == "predicate")
      cfg.predicate = parse_predicate_kind(value);
    else if (key == "n_trials")
      cfg.n_trials = parse_number<std::int64_t>(value, line, key);
    else if (key == "seed")
      cfg.seed = parse_number<std::uint64_t>(value, line, key);
    else if (key == "thresholds")
      cfg.thresholds = parse_list(value, line);
    else if (key == "bits")
      cfg.bits = parse_number<int>(value, line, key);
    else
      throw ConfigError(line, "unknown key '" + key + "'");
  } catch (const std::invalid_argument& e) {
    throw ConfigError(line, e.what());
  }
}

ExperimentConfig parse_json_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto upto = text.substr(0, std::min(text.size(), static_cast<std::size_t>(e.byte)));
    throw ConfigError(1 + static_cast<int>(std::count(upto.begin(), upto.end(), '\n')), e.what());
  }
  if (!j.is_object()) throw ConfigError(1, "config must be a JSON object");
  ExperimentConfig cfg;
  for (const auto& [key, value] : j.items()) {
    std::string s;
    if (key == "thresholds") {
      if (!value.is_array()) throw ConfigError(0, "thresholds must be an array");
      cfg.thresholds.clear();
      for (const auto& v : value) {
        if (!v.is_number()) throw ConfigError(0, "thresholds must be numbers");
        cfg.thresholds.push_back(v.get<double>());
      }
      continue;
    }
    if (value.is_string())
      s = value.get<std::string>();
    else if (value.is_number_integer() || value.is_number_unsigned())
      s = value.dump();
    else
      throw ConfigError(0, "bad value for " + key);
    apply(cfg, key, s, 0);
  }
  return cfg;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  const std::string first = trim(text);
  ExperimentConfig cfg;
  std::map<std::string, int> key_lines;
  if (!first.empty() && first.front() == '{') {
    cfg = parse_json_config(text);
  } else {
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
      ++line;
      if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      const std::string content = trim(raw);
      if (content.empty()) continue;
      const auto eq = content.find('=');
      if (eq == std::string::npos) throw ConfigError(line, "expected key = value");
      const std::string key = trim(content.substr(0, eq));
      const std::string value = trim(content.substr(eq + 1));
      if (key.empty()) throw ConfigError(line, "missing key");
      apply(cfg, key, value, line);
      key_lines[key] = line;
    }
  }
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    const auto it = key_lines.find(e.key());
    if (it == key_lines.end()) throw;
    throw ConfigError(it->second, e.message(), e.key());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

// Sampling -------------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

ChunkRng::ChunkRng(std::uint64_t seed, std::uint64_t chunk) : gen_(splitmix64(splitmix64(seed) ^ chunk)) {}

double ChunkRng::uniform() { return std::ldexp(static_cast<double>(gen_() >> 11), -53); }

double ChunkRng::normal() { return normal_(gen_); }

std::uint64_t ChunkRng::below(std::uint64_t n) {
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(gen_);
}

std::vector<double> sample_ball(int delta, ChunkRng& rng) {
  std::vector<double> p(static_cast<std::size_t>(delta));
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& x : p) {
      x = rng.normal();
      norm2 += x * x;
    }
  } while (norm2 == 0.0);
  const double r = std::pow(rng.uniform(), 1.0 / delta) / std::sqrt(norm2);
  for (double& x : p) x *= r;
  return p;
}

std::vector<double> sample_cube(int delta, ChunkRng& rng) {
  std::vector<double> p(static_cast<std::size_t>(delta));
  for (double& x : p) x = 2.0 * rng.uniform() - 1.0;
  return p;
}

GridPoint sample_grid(int delta, int eta_bits, ChunkRng& rng) {
  const std::uint64_t span = (std::uint64_t{1} << eta_bits) + 1;
  const std::int64_t half = std::int64_t{1} << (eta_bits - 1);
  GridPoint p;
  p.frac_bits = eta_bits - 1;
  p.ticks.resize(static_cast<std::size_t>(delta));
  for (auto& t : p.ticks) t = static_cast<std::int64_t>(rng.below(span)) - half;
  return p;
}

// Exact statistics -----------------------------------------------------------

namespace {

struct ScaledEntries {
  std::vector<std::vector<mpz_class>> rows;
  long exponent = 0;  // entries are rows * 2^exponent
};

ScaledEntries to_common_scale(const std::vector<std::vector<double>>& points) {
  std::vector<std::vector<Dyadic>> exact;
  long emin = 0;
  bool any = false;
  for (const auto& p : points) {
    std::vector<Dyadic> row;
    for (double x : p) {
      row.push_back(Dyadic::from_double(x));
      if (!row.back().is_zero()) {
        emin = any ? std::min(emin, row.back().exponent()) : row.back().exponent();
        any = true;
      }
    }
    exact.push_back(std::move(row));
  }
  ScaledEntries out;
  out.exponent = emin;
  for (const auto& row : exact) {
    std::vector<mpz_class> r;
    for (const Dyadic& d : row) {
      mpz_class m = d.mantissa();
      if (!d.is_zero()) m <<= static_cast<mp_bitcnt_t>(d.exponent() - emin);
      r.push_back(std::move(m));
    }
    out.rows.push_back(std::move(r));
  }
  return out;
}

}  // namespace

Dyadic measure_whichside(const std::vector<std::vector<double>>& points) {
  const int delta = static_cast<int>(points.size());
  const ScaledEntries s = to_common_scale(points);
  IntMatrix m(delta);
  for (int r = 0; r < delta; ++r) {
    if (static_cast<int>(points[static_cast<std::size_t>(r)].size()) != delta)
      throw std::invalid_argument("measure_whichside: expected delta points of dimension delta");
    for (int c = 0; c < delta; ++c) m.at(r, c) = s.rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  }
  return Dyadic(exact_det_value(m), s.exponent * delta).abs();
}

Dyadic measure_insphere(const std::vector<std::vector<double>>& points) {
  const int rows = static_cast<int>(points.size());
  const int delta = rows - 1;
  if (delta < 1) throw std::invalid_argument("measure_insphere: need at least two points");
  const ScaledEntries s = to_common_scale(points);
  IntMatrix m(rows);
  for (int r = 0; r < rows; ++r) {
    const auto& row = s.rows[static_cast<std::size_t>(r)];
    if (static_cast<int>(row.size()) != delta)
      throw std::invalid_argument("measure_insphere: expected delta + 1 points of dimension delta");
    mpz_class norm = 0;
    for (int c = 0; c < delta; ++c) {
      m.at(r, c) = row[static_cast<std::size_t>(c)];
      norm += row[static_cast<std::size_t>(c)] * row[static_cast<std::size_t>(c)];
    }
    m.at(r, delta) = norm;
  }
  return Dyadic(exact_det_value(m), s.exponent * (delta + 2)).abs();
}

// Estimation -----------------------------------------------------------------

EstimateRow make_row(const ExperimentConfig& cfg, double v, std::int64_t hits, double bound) {
  EstimateRow row;
  row.delta = cfg.domain.delta;
  row.domain = cfg.domain.kind;
  row.predicate = cfg.predicate;
  row.v = v;
  row.n = cfg.n_trials;
  row.hits = hits;
  row.p_hat = static_cast<double>(hits) / static_cast<double>(cfg.n_trials);
  row.std_error = std::sqrt(row.p_hat * (1.0 - row.p_hat) / static_cast<double>(cfg.n_trials));
  row.bound = bound;
  row.pass = bound >= row.p_hat - 3.0 * row.std_error;
  return row;
}

double cdf_bound(const ExperimentConfig& cfg, double v) {
  const int d = cfg.domain.delta;
  if (cfg.predicate == PredicateKind::Insphere) return insphere_grid_bound(d, v, cfg.domain.eta()).value;
  switch (cfg.domain.kind) {
    case DomainKind::Ball:
      return whichside_ball_bound(d, v).value;
    case DomainKind::Cube:
      return whichside_cube_bound(d, v).value;
    case DomainKind::Grid:
      return whichside_grid_bound(d, v, cfg.domain.eta()).value;
  }
  return 0.0;
}

namespace {

// Runs fn(rng, count, acc) over fixed-size chunks; per-chunk results are
// merged in chunk order.
template <typename Acc, typename Fn>
Acc run_chunks(std::int64_t n_trials, std::uint64_t seed, int workers, const Acc& zero, Fn fn) {
  const std::int64_t chunks = (n_trials + chunk_size - 1) / chunk_size;
  std::vector<Acc> results(static_cast<std::size_t>(chunks), zero);
  std::atomic<std::int64_t> next{0};
  auto work = [&] {
    for (std::int64_t c = next++; c < chunks; c = next++) {
      ChunkRng rng(seed, static_cast<std::uint64_t>(c));
      const std::int64_t count = std::min(chunk_size, n_trials - c * chunk_size);
      fn(rng, count, results[static_cast<std::size_t>(c)]);
    }
  };
  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = static_cast<int>(std::min<std::int64_t>(workers, chunks));
  std::vector<std::jthread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int w = 1; w < workers; ++w) {
    pool.emplace_back([&] {
      try {
        work();
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = chunks;
      }
    });
  }
  try {
    work();
  } catch (...) {
    std::lock_guard lock(error_mutex);
    if (!error) error = std::current_exception();
    next = chunks;
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
  Acc total = zero;
  for (const Acc& r : results) total.merge(r);
  return total;
}

std::vector<std::vector<double>> sample_points(const ExperimentConfig& cfg, ChunkRng& rng) {
  const int d = cfg.domain.delta;
  const int count = cfg.predicate == PredicateKind::WhichSide ? d : d + 1;
  std::vector<std::vector<double>> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    switch (cfg.domain.kind) {
      case DomainKind::Ball:
        pts.push_back(sample_ball(d, rng));
        break;
      case DomainKind::Cube:
        pts.push_back(sample_cube(d, rng));
        break;
      case DomainKind::Grid: {
        const GridPoint g = sample_grid(d, cfg.domain.eta_bits, rng);
        std::vector<double> p(static_cast<std::size_t>(d));
        for (int c = 0; c < d; ++c) p[static_cast<std::size_t>(c)] = g.coord(c);
        pts.push_back(std::move(p));
        break;
      }
    }
  }
  return pts;
}

struct HitCounts {
  std::vector<std::int64_t> first_hit;  // bucket k: smallest threshold index with stat <= V_k

  void merge(const HitCounts& o) {
    for (std::size_t i = 0; i < first_hit.size(); ++i) first_hit[i] += o.first_hit[i];
  }
};

struct FailureCount {
  std::int64_t uncertain = 0;
  void merge(const FailureCount& o) { uncertain += o.uncertain; }
};

}  // namespace

std::vector<EstimateRow> estimate_cdf(const ExperimentConfig& cfg, int workers) {
  cfg.validate();
  if (cfg.thresholds.empty()) throw std::invalid_argument("estimate_cdf: no thresholds given");
  const std::size_t k = cfg.thresholds.size();
  std::vector<Dyadic> exact_v;
  for (double v : cfg.thresholds) exact_v.push_back(Dyadic::from_double(v));
  // Hardware evaluation of the expansion is within epsilon(53) of the exact
  // value; the exact statistic is only needed near a threshold.
  const EvalScheme& scheme = canonical_scheme(cfg.predicate, cfg.domain.delta);
  const PrecisionConfig native(53);
  const double margin = 2.0 * filter_threshold(cfg.predicate, cfg.domain.delta, native).to_double();
  HitCounts zero{std::vector<std::int64_t>(k + 1, 0)};
  const HitCounts total = run_chunks(cfg.n_trials, cfg.seed, workers, zero, [&](ChunkRng& rng, std::int64_t count, HitCounts& acc) {
    std::vector<double> slots;
    for (std::int64_t t = 0; t < count; ++t) {
      const auto pts = sample_points(cfg, rng);
      slots.clear();
      for (const auto& p : pts) slots.insert(slots.end(), p.begin(), p.end());
      const double approx = std::fabs(eval_rounded(scheme, slots, native));
      std::optional<Dyadic> stat;
      std::size_t first = k;
      for (std::size_t i = 0; i < k; ++i) {
        const double v = cfg.thresholds[i];
        if (approx - margin > v) continue;
        if (approx + margin < v) {
          first = i;
          break;
        }
        if (!stat) stat = cfg.predicate == PredicateKind::WhichSide ? measure_whichside(pts) : measure_insphere(pts);
        if (*stat <= exact_v[i]) {
          first = i;
          break;
        }
      }
      ++acc.first_hit[first];
    }
  });
  std::vector<EstimateRow> rows;
  std::int64_t cumulative = 0;
  for (std::size_t i = 0; i < k; ++i) {
    cumulative += total.first_hit[i];
    const double v = cfg.thresholds[i];
    rows.push_back(make_row(cfg, v, cumulative, cdf_bound(cfg, v)));
  }
  return rows;
}

EstimateRow estimate_failure_rate(const ExperimentConfig& cfg, const PrecisionConfig& precision, int workers) {
  cfg.validate();
  if (cfg.domain.kind != DomainKind::Grid)
    throw std::invalid_argument("estimate_failure_rate: failure rates are measured on the grid domain");
  if (precision.bits < cfg.domain.eta_bits || precision.bits > 53)
    throw std::invalid_argument("estimate_failure_rate: precision must have eta_bits..53 bits");
  const int d = cfg.domain.delta;
  const Dyadic threshold = filter_threshold(cfg.predicate, d, precision);
  const int count = cfg.predicate == PredicateKind::WhichSide ? d : d + 1;
  const FailureCount total =
      run_chunks(cfg.n_trials, cfg.seed, workers, FailureCount{}, [&](ChunkRng& rng, std::int64_t n, FailureCount& acc) {
        PredicateInstance inst{cfg.predicate, d, {}};
        for (std::int64_t t = 0; t < n; ++t) {
          inst.points.clear();
          for (int i = 0; i < count; ++i) inst.points.push_back(sample_grid(d, cfg.domain.eta_bits, rng));
          if (!is_certified(certify(eval_rounded(inst, precision), threshold))) ++acc.uncertain;
        }
      });
  const double eta = cfg.domain.eta();
  const double bound = cfg.predicate == PredicateKind::WhichSide ? rho(d, precision.bits, eta)
                                                                 : insphere_rho(d, precision.bits, eta);
  return make_row(cfg, threshold.to_double(), total.uncertain, bound);
}

DominanceReport dominance_report(const std::vector<EstimateRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("dominance_report: no rows");
  DominanceReport report;
  for (const EstimateRow& r : rows) {
    if (!(r.bound >= r.p_hat - 3.0 * r.std_error)) {
      report.pass = false;
      report.violations.push_back(r);
    }
  }
  std::ostringstream out;
  out << (rows.size() - report.violations.size()) << "/" << rows.size() << " rows dominated";
  for (const EstimateRow& r : report.violations) {
    out << "\n  violation: delta=" << r.delta << " " << to_string(r.domain) << " " << to_string(r.predicate)
        << " V=" << format_double(r.v) << " p_hat=" << format_double(r.p_hat) << " bound=" << format_double(r.bound);
  }
  report.summary = out.str();
  return report;
}

namespace {

ExperimentConfig suite_config(DomainKind kind, PredicateKind predicate, int delta, bool quick, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.domain.kind = kind;
  cfg.domain.delta = delta;
  if (kind == DomainKind::Grid) cfg.domain.eta_bits = 8;
  cfg.predicate = predicate;
  cfg.n_trials = quick ? 100000 : 1000000;
  cfg.seed = seed + static_cast<std::uint64_t>(delta) * 1000 + static_cast<std::uint64_t>(kind) * 100 +
             static_cast<std::uint64_t>(predicate) * 10;
  cfg.thresholds = {1e-4, 3e-4, 1e-3, 3e-3, 0.01, 0.03, 0.1, 0.3, 0.5, 1.0};
  cfg.validate();
  return cfg;
}

}  // namespace

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = {"whichside-2d", "whichside-ball", "whichside-cube",
                                                 "whichside-grid", "insphere", "all"};
  return names;
}

std::vector<ExperimentConfig> verify_suite(const std::string& name, bool quick, std::uint64_t seed) {
  using enum DomainKind;
  const auto ws = PredicateKind::WhichSide;
  std::vector<ExperimentConfig> out;
  auto add_range = [&](DomainKind kind, PredicateKind pred, int lo, int hi) {
    for (int d = lo; d <= hi; ++d) out.push_back(suite_config(kind, pred, d, quick, seed));
  };
  if (name == "whichside-2d") {
    add_range(Ball, ws, 2, 2);
    add_range(Cube, ws, 2, 2);
    add_range(Grid, ws, 2, 2);
  } else if (name == "whichside-ball") {
    add_range(Ball, ws, 1, 4);
  } else if (name == "whichside-cube") {
    add_range(Cube, ws, 1, 4);
  } else if (name == "whichside-grid") {
    add_range(Grid, ws, 1, 3);
  } else if (name == "insphere") {
    add_range(Cube, PredicateKind::Insphere, 1, 3);
  } else if (name == "all") {
    for (const char* part : {"whichside-ball", "whichside-cube", "whichside-grid", "insphere"}) {
      auto more = verify_suite(part, quick, seed);
      out.insert(out.end(), more.begin(), more.end());
    }
  } else {
    throw std::invalid_argument("unknown suite '" + name + "'");
  }
  return out;
}

std::string rows_to_csv(const std::vector<EstimateRow>& rows) {
  std::ostringstream out;
  out << "delta,domain,predicate,V,N,hits,p_hat,stderr,bound,pass\n";
  for (const EstimateRow& r : rows) {
    out << r.delta << ',' << to_string(r.domain) << ',' << to_string(r.predicate) << ',' << format_double(r.v) << ','
        << r.n << ',' << r.hits << ',' << format_double(r.p_hat) << ',' << format_double(r.std_error) << ','
        << format_double(r.bound) << ',' << (r.pass ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string rows_to_json(const std::vector<EstimateRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const EstimateRow& r : rows) {
    arr.push_back({{"delta", r.delta},
                   {"domain", to_string(r.domain)},
                   {"predicate", to_string(r.predicate)},
                   {"V", r.v},
                   {"N", r.n},
                   {"hits", r.hits},
                   {"p_hat", r.p_hat},
                   {"stderr", r.std_error},
                   {"bound", r.bound},
                   {"pass", r.pass}});
  }
  return arr.dump(2) + "\n";
}

}  // namespace filterlab
