#include "cgw/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <thread>

#include "cgw/krylov.hpp"
#include "cgw/simd/kernels.hpp"
#include "cgw/spectral.hpp"
#include "cgw/theory.hpp"

namespace cgw::experiments {

using ensembles::EnsembleSpec;
using ensembles::Kind;
using krylov::SystemMatrix;

std::string_view rhs_name(Rhs r) {
  return r == Rhs::FirstBasisVector ? "first-basis-vector" : "random-unit";
}

ExperimentError::ExperimentError(int s, bool br, const std::string& what)
    : std::runtime_error("sample " + std::to_string(s) + ": " + what),
      sample(s),
      breakdown(br) {}

void ExperimentConfig::validate() const {
  ensemble.validate();
  if (samples < 1) throw std::invalid_argument("config: samples must be >= 1");
  if (kmax < 1) throw std::invalid_argument("config: kmax must be >= 1");
  for (double e : eps_list)
    if (!(e > 0.0)) throw std::invalid_argument("config: eps values must be positive");
  if (workers < 0) throw std::invalid_argument("config: workers must be >= 0");
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CG_WISHART_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

constexpr double kNan = 0.0;

struct RealSystem {
  SystemMatrix w;
  Vec b;
};

struct ComplexSystem {
  CMatrix w;
  CVec b;
};

// Draw order is fixed (matrix first, then right-hand side) so every
// sample is a pure function of (seed, index).
RealSystem build_real_system(const EnsembleSpec& spec, Rhs rhs, bool need_solve,
                             rng::Xoshiro256pp& g) {
  RealSystem sys;
  if (spec.kind == Kind::ChiBidiagonal) {
    sys.w = SystemMatrix::tridiagonal(ensembles::sample_bidiagonal_chi(spec, g).jacobi());
  } else {
    ensembles::WishartFactor f = ensembles::sample_wishart_factor(spec, g);
    if (need_solve) {
      Matrix w(spec.n, spec.n);
      simd::syrk(f.x.data(), spec.n, f.x.cols(), f.scale, w.data(), spec.n);
      sys.w = SystemMatrix::dense(std::move(w));
    } else {
      sys.w = SystemMatrix::factored(std::move(f.x), f.scale);
    }
  }
  if (rhs == Rhs::FirstBasisVector) {
    sys.b.assign(spec.n, 0.0);
    sys.b[0] = 1.0;
  } else {
    sys.b = ensembles::sample_unit_vector(spec.n, g);
  }
  return sys;
}

ComplexSystem build_complex_system(const EnsembleSpec& spec, Rhs rhs,
                                   rng::Xoshiro256pp& g) {
  ComplexSystem sys;
  sys.w = ensembles::sample_dense_wishart(spec, g).cplx;
  if (rhs == Rhs::FirstBasisVector) {
    sys.b.assign(spec.n, std::complex<double>{});
    sys.b[0] = 1.0;
  } else {
    sys.b = ensembles::sample_unit_vector_complex(spec.n, g);
  }
  return sys;
}

std::string rhs_note_for(const ExperimentConfig& cfg) {
  std::string note{rhs_name(cfg.rhs)};
  if (cfg.rhs == Rhs::RandomUnit)
    note += " (Haar-uniform unit vector from normalized iid Gaussians)";
  return note;
}

template <typename Fn>
std::vector<PartialSummary> run_partials(const std::string& experiment,
                                         const ExperimentConfig& cfg, int& workers_used,
                                         Fn per_sample) {
  const int n_samples = cfg.samples;
  int w = std::min(resolve_workers(cfg.workers), n_samples);
  if (w < 1) w = 1;
  workers_used = w;

  std::vector<PartialSummary> partials(w);
  struct WorkerError {
    int sample = -1;
    bool breakdown = false;
    std::string message;
  };
  std::vector<WorkerError> errors(w);

  const int chunk = (n_samples + w - 1) / w;
  std::vector<std::thread> threads;
  threads.reserve(w);
  for (int t = 0; t < w; ++t) {
    const int lo = t * chunk;
    const int hi = std::min(n_samples, lo + chunk);
    partials[t].experiment = experiment;
    partials[t].config = cfg;
    threads.emplace_back([&, t, lo, hi]() {
      for (int s = lo; s < hi; ++s) {
        try {
          partials[t].records.emplace_back(s, per_sample(s));
        } catch (const krylov::CgBreakdown& e) {
          errors[t] = {s, true, e.what()};
          return;
        } catch (const std::exception& e) {
          errors[t] = {s, false, e.what()};
          return;
        }
      }
    });
  }
  for (auto& th : threads) th.join();
  for (const auto& err : errors)
    if (err.sample >= 0) throw ExperimentError(err.sample, err.breakdown, err.message);
  return partials;
}

double quantile_type7(const Vec& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = p * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + (sorted[lo + 1] - sorted[lo]) * frac;
}

SeriesStats make_series(std::string name, std::vector<Vec> values_per_k) {
  SeriesStats s;
  s.name = std::move(name);
  s.values = std::move(values_per_k);
  s.per_k.resize(s.values.size());
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    const Vec& v = s.values[k];
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var = v.size() > 1 ? var / (n - 1.0) : 0.0;
    Vec sorted = v;
    std::sort(sorted.begin(), sorted.end());
    s.per_k[k] = {mean, var, quantile_type7(sorted, 0.0005),
                  quantile_type7(sorted, 0.9995)};
  }
  return s;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Per-sample trajectory record shared by the error and halting runs.
// `value_at` pads a trajectory that terminated early (exact convergence or
// the round-off floor) with its final value.
double value_at(const Vec& v, int k) {
  if (v.empty()) return 0.0;
  return k < static_cast<int>(v.size()) ? v[k] : v.back();
}

SampleRecord error_record(const ExperimentConfig& cfg, int s) {
  auto g = rng::stream_for_sample(cfg.ensemble.seed, static_cast<std::uint64_t>(s));
  krylov::ErrorTrajectory traj;
  if (cfg.ensemble.beta == 2 && cfg.ensemble.kind != Kind::ChiBidiagonal) {
    ComplexSystem sys = build_complex_system(cfg.ensemble, cfg.rhs, g);
    traj = krylov::cg_error_trajectory(sys.w, sys.b, cfg.kmax, cfg.ell_list,
                                       cfg.ensemble.d);
  } else {
    RealSystem sys = build_real_system(cfg.ensemble, cfg.rhs, true, g);
    traj = krylov::cg_error_trajectory(sys.w, sys.b, cfg.kmax, cfg.ell_list,
                                       cfg.ensemble.d);
  }
  SampleRecord rec;
  rec.norms.resize(cfg.ell_list.size());
  for (std::size_t li = 0; li < cfg.ell_list.size(); ++li) {
    rec.norms[li].resize(cfg.kmax + 1);
    for (int k = 0; k <= cfg.kmax; ++k) rec.norms[li][k] = value_at(traj.norms[li], k);
  }
  rec.residual.resize(cfg.kmax + 1);
  for (int k = 0; k <= cfg.kmax; ++k) rec.residual[k] = value_at(traj.residual_norms, k);
  return rec;
}

Vec residual_only_record(const ExperimentConfig& cfg, rng::Xoshiro256pp& g) {
  Vec residual(cfg.kmax + 1);
  if (cfg.ensemble.beta == 2 && cfg.ensemble.kind != Kind::ChiBidiagonal) {
    ComplexSystem sys = build_complex_system(cfg.ensemble, cfg.rhs, g);
    krylov::CgOptions opts;
    opts.kmax = cfg.kmax;
    const auto states = conjugate_gradient(sys.w, sys.b, opts);
    Vec norms(states.size());
    for (std::size_t k = 0; k < states.size(); ++k) {
      double rr = 0.0;
      for (const auto& z : states[k].r) rr += std::norm(z);
      norms[k] = std::sqrt(rr);
    }
    for (int k = 0; k <= cfg.kmax; ++k) residual[k] = value_at(norms, k);
  } else {
    RealSystem sys = build_real_system(cfg.ensemble, cfg.rhs, false, g);
    krylov::CgOptions opts;
    opts.kmax = cfg.kmax;
    const auto states = conjugate_gradient(sys.w, sys.b, opts);
    Vec norms(states.size());
    for (std::size_t k = 0; k < states.size(); ++k)
      norms[k] = std::sqrt(simd::dot(states[k].r.data(), states[k].r.data(),
                                     states[k].r.size()));
    for (int k = 0; k <= cfg.kmax; ++k) residual[k] = value_at(norms, k);
  }
  return residual;
}

std::vector<std::pair<int, double>> halting_pairs(const ExperimentConfig& cfg) {
  std::vector<std::pair<int, double>> pairs;
  for (int ell : cfg.ell_list)
    for (double eps : cfg.eps_list) pairs.emplace_back(ell, eps);
  return pairs;
}

int scan_halting(const Vec& norms, double eps) {
  for (std::size_t k = 0; k < norms.size(); ++k)
    if (norms[k] < eps) return static_cast<int>(k);
  return -1;
}

}  // namespace

MonteCarloSummary aggregate(const std::vector<PartialSummary>& partials) {
  if (partials.empty()) throw std::invalid_argument("aggregate: no partial summaries");
  const ExperimentConfig& cfg = partials.front().config;
  const std::string& experiment = partials.front().experiment;
  for (const auto& p : partials)
    if (!(p.config == cfg) || p.experiment != experiment)
      throw std::invalid_argument("aggregate: partial summaries have mismatched configs");

  std::vector<const SampleRecord*> records(cfg.samples, nullptr);
  for (const auto& p : partials)
    for (const auto& [idx, rec] : p.records) {
      if (idx < 0 || idx >= cfg.samples)
        throw std::invalid_argument("aggregate: sample index out of range");
      if (records[idx]) throw std::invalid_argument("aggregate: duplicate sample index");
      records[idx] = &rec;
    }
  for (int s = 0; s < cfg.samples; ++s)
    if (!records[s]) throw std::invalid_argument("aggregate: missing sample index");

  MonteCarloSummary out;
  out.experiment = experiment;
  out.config = cfg;
  out.rhs_note = rhs_note_for(cfg);
  const double d = cfg.ensemble.d;

  if (experiment == "errors") {
    for (std::size_t li = 0; li < cfg.ell_list.size(); ++li) {
      std::vector<Vec> per_k(cfg.kmax + 1, Vec(cfg.samples));
      for (int s = 0; s < cfg.samples; ++s)
        for (int k = 0; k <= cfg.kmax; ++k) per_k[k][s] = records[s]->norms[li][k];
      out.series.push_back(
          make_series("e_W" + std::to_string(cfg.ell_list[li]), std::move(per_k)));
    }
    std::vector<Vec> per_k(cfg.kmax + 1, Vec(cfg.samples));
    for (int s = 0; s < cfg.samples; ++s)
      for (int k = 0; k <= cfg.kmax; ++k) per_k[k][s] = records[s]->residual[k];
    out.series.push_back(make_series("r", std::move(per_k)));

    for (int ell : cfg.ell_list) {
      TheoryCurve c;
      c.name = "theory_e_W" + std::to_string(ell);
      for (int k = 0; k <= cfg.kmax; ++k)
        c.values.push_back(theory::limit_error(ell, k, d));
      out.theory.push_back(std::move(c));
    }
    TheoryCurve c;
    c.name = "theory_r";
    for (int k = 0; k <= cfg.kmax; ++k) c.values.push_back(std::pow(d, 0.5 * k));
    out.theory.push_back(std::move(c));
  } else if (experiment == "halting") {
    const auto pairs = halting_pairs(cfg);
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
      HaltingHistogram h;
      h.ell = pairs[pi].first;
      h.eps = pairs[pi].second;
      if (d < 1.0) {
        const auto pred = theory::predict_halting(h.ell, h.eps, d);
        h.predicted = pred.k;
        h.near_exceptional = pred.near_exceptional;
      }
      std::map<int, long> counts;
      for (int s = 0; s < cfg.samples; ++s) {
        const int t = records[s]->halting[pi];
        if (t < 0)
          ++h.overflow;
        else
          ++counts[t];
      }
      h.counts.assign(counts.begin(), counts.end());
      if (h.predicted >= 0) {
        long at = counts.count(h.predicted) ? counts.at(h.predicted) : 0;
        long at1 = counts.count(h.predicted + 1) ? counts.at(h.predicted + 1) : 0;
        h.frac_predicted = static_cast<double>(at) / cfg.samples;
        h.frac_predicted_plus_1 = static_cast<double>(at1) / cfg.samples;
      }
      out.halting.push_back(std::move(h));
    }
  } else if (experiment == "clt") {
    FluctuationStats f;
    for (int k = 1; k <= cfg.kmax; ++k) f.k_list.push_back(k);
    f.mean.resize(cfg.kmax);
    f.variance.resize(cfg.kmax);
    f.ks_normal.resize(cfg.kmax);
    f.normalized.assign(cfg.kmax, Vec(cfg.samples));
    for (int ki = 0; ki < cfg.kmax; ++ki) {
      double mean = 0.0, msq = 0.0;
      for (int s = 0; s < cfg.samples; ++s) {
        const double g = records[s]->g[ki];
        mean += g;
        msq += g * g;
      }
      mean /= cfg.samples;
      msq /= cfg.samples;
      double var = 0.0;
      for (int s = 0; s < cfg.samples; ++s) {
        const double g = records[s]->g[ki];
        var += (g - mean) * (g - mean);
      }
      f.mean[ki] = mean;
      f.variance[ki] = cfg.samples > 1 ? var / (cfg.samples - 1.0) : 0.0;
      const double rms = std::sqrt(msq);
      for (int s = 0; s < cfg.samples; ++s)
        f.normalized[ki][s] = rms > 0.0 ? records[s]->g[ki] / rms : 0.0;
      auto esm = spectral::SpectralMeasure::uniform(f.normalized[ki]);
      f.ks_normal[ki] = spectral::ks_distance(normal_cdf, esm);
    }
    out.fluctuations = std::move(f);
  } else if (experiment == "spectrum" || experiment == "ks") {
    out.ks_samples.resize(cfg.samples);
    for (int s = 0; s < cfg.samples; ++s) out.ks_samples[s] = records[s]->ks;
    if (experiment == "spectrum") {
      out.eigenvalues = records[0]->sample_eigenvalues;
      const theory::MpLaw law(d);
      const double span = law.d_plus - law.d_minus;
      const int grid = 257;
      for (int i = 0; i < grid; ++i) {
        const double x = std::max(0.0, law.d_minus - 0.05 * span) +
                         (law.d_plus + 0.05 * span - std::max(0.0, law.d_minus - 0.05 * span)) *
                             i / (grid - 1.0);
        out.mp_grid.push_back(x);
        out.mp_density.push_back(law.density(x));
      }
    }
  } else {
    throw std::invalid_argument("aggregate: unknown experiment '" + experiment + "'");
  }
  return out;
}

MonteCarloSummary run_error_concentration(const ExperimentConfig& config) {
  config.validate();
  for (int ell : config.ell_list)
    if (ell < 2 && config.ensemble.d == 1.0)
      throw std::invalid_argument("errors: ell < 2 requires d < 1");
  const auto t0 = std::chrono::steady_clock::now();
  int workers_used = 1;
  auto partials = run_partials("errors", config, workers_used,
                               [&](int s) { return error_record(config, s); });
  MonteCarloSummary out = aggregate(partials);
  out.workers_used = workers_used;
  out.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

MonteCarloSummary run_halting_histogram(const ExperimentConfig& config) {
  config.validate();
  if (config.eps_list.empty())
    throw std::invalid_argument("halting: eps_list must not be empty");
  for (int ell : config.ell_list) {
    if (ell != 1 && ell != 2)
      throw std::invalid_argument("halting: ell must be 1 or 2");
    if (ell == 1 && config.ensemble.d == 1.0)
      throw std::invalid_argument("halting: ell = 1 requires d < 1");
  }
  // admissibility of every (ell, eps) pair up front
  for (int ell : config.ell_list)
    for (double eps : config.eps_list) {
      if (config.ensemble.d < 1.0) {
        theory::predict_halting(ell, eps, config.ensemble.d);
      } else if (!(eps < 1.0)) {
        throw std::invalid_argument("halting: ell = 2 requires eps < 1");
      }
    }

  const bool need_error = std::find(config.ell_list.begin(), config.ell_list.end(), 1) !=
                          config.ell_list.end();
  const auto pairs = halting_pairs(config);
  const auto t0 = std::chrono::steady_clock::now();
  int workers_used = 1;
  auto partials = run_partials("halting", config, workers_used, [&](int s) {
    SampleRecord rec;
    rec.halting.resize(pairs.size());
    if (need_error) {
      SampleRecord err = error_record(config, s);
      for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
        const auto [ell, eps] = pairs[pi];
        if (ell == 2) {
          rec.halting[pi] = scan_halting(err.residual, eps);
        } else {
          const auto it =
              std::find(config.ell_list.begin(), config.ell_list.end(), ell);
          rec.halting[pi] =
              scan_halting(err.norms[it - config.ell_list.begin()], eps);
        }
      }
    } else {
      auto g = rng::stream_for_sample(config.ensemble.seed, static_cast<std::uint64_t>(s));
      const Vec residual = residual_only_record(config, g);
      for (std::size_t pi = 0; pi < pairs.size(); ++pi)
        rec.halting[pi] = scan_halting(residual, pairs[pi].second);
    }
    return rec;
  });
  MonteCarloSummary out = aggregate(partials);
  out.workers_used = workers_used;
  out.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

MonteCarloSummary run_clt_fluctuations(const ExperimentConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  int workers_used = 1;
  const double d = config.ensemble.d;
  auto partials = run_partials("clt", config, workers_used, [&](int s) {
    auto g = rng::stream_for_sample(config.ensemble.seed, static_cast<std::uint64_t>(s));
    const Vec residual = residual_only_record(config, g);
    SampleRecord rec;
    rec.g.resize(config.kmax);
    for (int k = 1; k <= config.kmax; ++k)
      rec.g[k - 1] = residual[k] * residual[k] - std::pow(d, k);
    return rec;
  });
  MonteCarloSummary out = aggregate(partials);
  out.workers_used = workers_used;
  out.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

MonteCarloSummary run_spectrum_vs_mp(const ExperimentConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  int workers_used = 1;
  const theory::MpLaw law(config.ensemble.d);
  auto mp_cdf = [&law](double x) { return law.cdf(x); };
  auto partials = run_partials("spectrum", config, workers_used, [&](int s) {
    auto g = rng::stream_for_sample(config.ensemble.seed, static_cast<std::uint64_t>(s));
    Vec eigs;
    if (config.ensemble.kind == Kind::ChiBidiagonal) {
      const auto h = ensembles::sample_bidiagonal_chi(config.ensemble, g);
      eigs = spectral::eigen_tridiagonal(h.jacobi()).eigenvalues;
    } else if (config.ensemble.beta == 2) {
      const auto w = ensembles::sample_dense_wishart(config.ensemble, g);
      eigs = spectral::eigen_dense(w.cplx).eigenvalues;
    } else {
      const auto w = ensembles::sample_dense_wishart(config.ensemble, g);
      eigs = spectral::eigen_dense(w.real).eigenvalues;
    }
    SampleRecord rec;
    rec.ks = spectral::ks_distance(mp_cdf, spectral::SpectralMeasure::uniform(eigs));
    rec.has_ks = true;
    if (s == 0) rec.sample_eigenvalues = std::move(eigs);
    return rec;
  });
  MonteCarloSummary out = aggregate(partials);
  out.workers_used = workers_used;
  out.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

MonteCarloSummary run_weighted_vs_unweighted_ks(const ExperimentConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  int workers_used = 1;
  auto partials = run_partials("ks", config, workers_used, [&](int s) {
    auto g = rng::stream_for_sample(config.ensemble.seed, static_cast<std::uint64_t>(s));
    Vec atoms;
    if (config.ensemble.kind == Kind::ChiBidiagonal) {
      const auto h = ensembles::sample_bidiagonal_chi(config.ensemble, g);
      atoms = spectral::eigen_tridiagonal(h.jacobi()).eigenvalues;
    } else if (config.ensemble.beta == 2) {
      const auto w = ensembles::sample_dense_wishart(config.ensemble, g);
      atoms = spectral::eigen_dense(w.cplx).eigenvalues;
    } else {
      const auto w = ensembles::sample_dense_wishart(config.ensemble, g);
      atoms = spectral::eigen_dense(w.real).eigenvalues;
    }
    const auto weights =
        ensembles::sample_spectral_weights(config.ensemble.n, config.ensemble.beta, g);
    SampleRecord rec;
    rec.ks = spectral::ks_distance(
        spectral::SpectralMeasure::from_atoms(atoms, weights.omega),
        spectral::SpectralMeasure::uniform(atoms));
    rec.has_ks = true;
    return rec;
  });
  MonteCarloSummary out = aggregate(partials);
  out.workers_used = workers_used;
  out.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace cgw::experiments
