#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cgw/ensembles.hpp"
#include "cgw/matrix.hpp"

namespace cgw::experiments {

enum class Rhs { FirstBasisVector, RandomUnit };

std::string_view rhs_name(Rhs r);

struct ExperimentConfig {
  ensembles::EnsembleSpec ensemble;
  int samples = 2000;
  int kmax = 10;
  std::vector<int> ell_list = {1, 2};
  std::vector<double> eps_list;
  Rhs rhs = Rhs::FirstBasisVector;
  std::string output_path;
  int workers = 0;  // 0: CG_WISHART_WORKERS env or hardware concurrency

  void validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

// Error raised by a worker, tagged with the failing sample index.
class ExperimentError : public std::runtime_error {
 public:
  ExperimentError(int sample, bool breakdown, const std::string& what);
  int sample;
  bool breakdown;
};

struct PerKStats {
  double mean = 0.0;
  double variance = 0.0;
  double q_low = 0.0;   // 0.05th percentile
  double q_high = 0.0;  // 99.95th percentile
};

struct SeriesStats {
  std::string name;
  std::vector<PerKStats> per_k;
  // full per-sample values, [k][sample]; retained so partial summaries
  // merge into bit-identical statistics regardless of worker count
  std::vector<Vec> values;
};

struct TheoryCurve {
  std::string name;
  Vec values;
};

struct HaltingHistogram {
  int ell = 2;
  double eps = 0.0;
  int predicted = -1;
  bool near_exceptional = false;
  std::vector<std::pair<int, long>> counts;  // sorted by halting time
  long overflow = 0;                         // not reached within kmax
  double frac_predicted = 0.0;
  double frac_predicted_plus_1 = 0.0;
};

struct FluctuationStats {
  std::vector<int> k_list;
  Vec mean;
  Vec variance;
  Vec ks_normal;                // KS of normalized samples vs standard normal
  std::vector<Vec> normalized;  // [k][sample], g_k / rms(g_k)
};

struct MonteCarloSummary {
  std::string experiment;
  ExperimentConfig config;
  std::vector<SeriesStats> series;
  std::vector<TheoryCurve> theory;
  std::vector<HaltingHistogram> halting;
  std::optional<FluctuationStats> fluctuations;
  Vec ks_samples;
  Vec eigenvalues;  // spectrum: eigenvalues of the first sample
  Vec mp_grid;
  Vec mp_density;
  std::string rhs_note;
  double wall_time_s = 0.0;  // metadata only; never serialized
  int workers_used = 1;
};

// Raw per-sample measurements; the unit that workers produce.
struct SampleRecord {
  std::vector<Vec> norms;    // per tracked ell
  Vec residual;
  std::vector<int> halting;  // per (ell, eps) pair, -1 = not reached
  Vec g;                     // ||r_k||^2 - d^k for k = 1..kmax
  double ks = 0.0;
  bool has_ks = false;
  Vec sample_eigenvalues;    // only kept for sample 0 of spectrum runs
};

// Per-worker partial result over a subset of sample indices.
struct PartialSummary {
  std::string experiment;
  ExperimentConfig config;
  std::vector<std::pair<int, SampleRecord>> records;
};

// Merge worker partials into the final summary. The merge is keyed on the
// sample index, so any partition of [0, samples) yields the same result
// as a single-threaded run.
MonteCarloSummary aggregate(const std::vector<PartialSummary>& partials);

MonteCarloSummary run_error_concentration(const ExperimentConfig& config);
MonteCarloSummary run_halting_histogram(const ExperimentConfig& config);
MonteCarloSummary run_clt_fluctuations(const ExperimentConfig& config);
MonteCarloSummary run_spectrum_vs_mp(const ExperimentConfig& config);
MonteCarloSummary run_weighted_vs_unweighted_ks(const ExperimentConfig& config);

int resolve_workers(int requested);

}  // namespace cgw::experiments
