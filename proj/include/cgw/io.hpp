#pragma once

#include <string>

#include "cgw/experiments.hpp"

namespace cgw::io {

// Formats a double with 17 significant digits (round-trip exact).
std::string format_double(double v);

// Machine-readable outputs. Both serializations are deterministic byte
// streams: fixed key order, fixed float formatting, no timestamps.
std::string summary_to_json(const experiments::MonteCarloSummary& summary);
std::string summary_to_csv(const experiments::MonteCarloSummary& summary);

void write_file(const std::string& path, const std::string& contents);

}  // namespace cgw::io
