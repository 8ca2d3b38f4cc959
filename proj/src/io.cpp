#include "cgw/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cgw/version.hpp"

namespace cgw::io {

namespace {

using experiments::MonteCarloSummary;

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

void append_double_array(std::string& o, const Vec& v) {
  o += '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) o += ',';
    o += format_double(v[i]);
  }
  o += ']';
}

void append_int_array(std::string& o, const std::vector<int>& v) {
  o += '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) o += ',';
    o += std::to_string(v[i]);
  }
  o += ']';
}

void append_config(std::string& o, const experiments::ExperimentConfig& c) {
  o += "{\"n\":" + std::to_string(c.ensemble.n);
  o += ",\"d\":" + format_double(c.ensemble.d);
  o += ",\"beta\":" + std::to_string(c.ensemble.beta);
  o += ",\"ensemble\":\"" + std::string(ensembles::kind_name(c.ensemble.kind)) + '"';
  o += ",\"seed\":" + std::to_string(c.ensemble.seed);
  o += ",\"samples\":" + std::to_string(c.samples);
  o += ",\"kmax\":" + std::to_string(c.kmax);
  o += ",\"ell_list\":";
  append_int_array(o, c.ell_list);
  o += ",\"eps_list\":";
  append_double_array(o, c.eps_list);
  o += ",\"rhs\":\"" + std::string(experiments::rhs_name(c.rhs)) + '"';
  o += ",\"workers\":" + std::to_string(c.workers);
  o += ",\"output_path\":\"" + json_escape(c.output_path) + "\"}";
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string summary_to_json(const MonteCarloSummary& s) {
  std::string o;
  o.reserve(1 << 16);
  o += "{\"artifact\":{\"name\":\"";
  o += kArtifactName;
  o += "\",\"version\":\"";
  o += kVersion;
  o += "\"},\"experiment\":\"" + s.experiment + "\",\"config\":";
  append_config(o, s.config);
  o += ",\"rhs_note\":\"" + json_escape(s.rhs_note) + '"';

  if (!s.series.empty()) {
    o += ",\"series\":[";
    for (std::size_t i = 0; i < s.series.size(); ++i) {
      if (i) o += ',';
      const auto& sr = s.series[i];
      o += "{\"name\":\"" + sr.name + "\",\"per_k\":[";
      for (std::size_t k = 0; k < sr.per_k.size(); ++k) {
        if (k) o += ',';
        const auto& st = sr.per_k[k];
        o += "{\"k\":" + std::to_string(k);
        o += ",\"mean\":" + format_double(st.mean);
        o += ",\"variance\":" + format_double(st.variance);
        o += ",\"q_low\":" + format_double(st.q_low);
        o += ",\"q_high\":" + format_double(st.q_high) + '}';
      }
      o += "]}";
    }
    o += ']';
  }
  if (!s.theory.empty()) {
    o += ",\"theory\":[";
    for (std::size_t i = 0; i < s.theory.size(); ++i) {
      if (i) o += ',';
      o += "{\"name\":\"" + s.theory[i].name + "\",\"values\":";
      append_double_array(o, s.theory[i].values);
      o += '}';
    }
    o += ']';
  }
  if (!s.halting.empty()) {
    o += ",\"halting\":[";
    for (std::size_t i = 0; i < s.halting.size(); ++i) {
      if (i) o += ',';
      const auto& h = s.halting[i];
      o += "{\"ell\":" + std::to_string(h.ell);
      o += ",\"eps\":" + format_double(h.eps);
      o += ",\"predicted\":" + std::to_string(h.predicted);
      o += ",\"near_exceptional\":" + std::string(h.near_exceptional ? "true" : "false");
      o += ",\"counts\":[";
      for (std::size_t j = 0; j < h.counts.size(); ++j) {
        if (j) o += ',';
        o += '[' + std::to_string(h.counts[j].first) + ',' +
             std::to_string(h.counts[j].second) + ']';
      }
      o += "],\"overflow\":" + std::to_string(h.overflow);
      o += ",\"frac_predicted\":" + format_double(h.frac_predicted);
      o += ",\"frac_predicted_plus_1\":" + format_double(h.frac_predicted_plus_1) + '}';
    }
    o += ']';
  }
  if (s.fluctuations) {
    const auto& f = *s.fluctuations;
    o += ",\"fluctuations\":{\"k_list\":";
    append_int_array(o, f.k_list);
    o += ",\"mean\":";
    append_double_array(o, f.mean);
    o += ",\"variance\":";
    append_double_array(o, f.variance);
    o += ",\"ks_normal\":";
    append_double_array(o, f.ks_normal);
    o += ",\"normalized\":[";
    for (std::size_t k = 0; k < f.normalized.size(); ++k) {
      if (k) o += ',';
      append_double_array(o, f.normalized[k]);
    }
    o += "]}";
  }
  if (!s.ks_samples.empty()) {
    o += ",\"ks_samples\":";
    append_double_array(o, s.ks_samples);
  }
  if (!s.eigenvalues.empty()) {
    o += ",\"eigenvalues\":";
    append_double_array(o, s.eigenvalues);
    o += ",\"mp_grid\":";
    append_double_array(o, s.mp_grid);
    o += ",\"mp_density\":";
    append_double_array(o, s.mp_density);
  }
  o += '}';
  return o;
}

std::string summary_to_csv(const MonteCarloSummary& s) {
  std::string o = "experiment,n,d,beta,ensemble,k,statistic,value\n";
  const auto& c = s.config;
  const std::string prefix = s.experiment + ',' + std::to_string(c.ensemble.n) + ',' +
                             format_double(c.ensemble.d) + ',' +
                             std::to_string(c.ensemble.beta) + ',' +
                             std::string(ensembles::kind_name(c.ensemble.kind)) + ',';
  auto row = [&](long k, const std::string& stat, double value) {
    o += prefix + std::to_string(k) + ',' + stat + ',' + format_double(value) + '\n';
  };

  for (const auto& sr : s.series)
    for (std::size_t k = 0; k < sr.per_k.size(); ++k) {
      row(k, sr.name + "_mean", sr.per_k[k].mean);
      row(k, sr.name + "_variance", sr.per_k[k].variance);
      row(k, sr.name + "_qlow", sr.per_k[k].q_low);
      row(k, sr.name + "_qhigh", sr.per_k[k].q_high);
    }
  for (const auto& t : s.theory)
    for (std::size_t k = 0; k < t.values.size(); ++k) row(k, t.name, t.values[k]);
  for (std::size_t i = 0; i < s.halting.size(); ++i) {
    const auto& h = s.halting[i];
    const std::string tag = "halting_ell" + std::to_string(h.ell) + "_eps" + std::to_string(i);
    row(-1, tag + "_eps", h.eps);
    row(-1, tag + "_predicted", h.predicted);
    row(-1, tag + "_overflow", static_cast<double>(h.overflow));
    for (const auto& [t, count] : h.counts)
      row(t, tag + "_count", static_cast<double>(count));
  }
  if (s.fluctuations) {
    const auto& f = *s.fluctuations;
    for (std::size_t i = 0; i < f.k_list.size(); ++i) {
      row(f.k_list[i], "g_mean", f.mean[i]);
      row(f.k_list[i], "g_variance", f.variance[i]);
      row(f.k_list[i], "g_ks_normal", f.ks_normal[i]);
    }
  }
  for (std::size_t i = 0; i < s.ks_samples.size(); ++i)
    row(i, "ks_distance", s.ks_samples[i]);
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
    row(i, "eigenvalue", s.eigenvalues[i]);
  for (std::size_t i = 0; i < s.mp_grid.size(); ++i) {
    row(i, "mp_x", s.mp_grid[i]);
    row(i, "mp_density", s.mp_density[i]);
  }
  return o;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << contents;
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace cgw::io
