#pragma once

#include <string>
#include <vector>

#include "acaf/dynamics.hpp"
#include "acaf/series.hpp"

namespace acaf {

/// Formats a double with 15 significant digits (the numeric format of every
/// tabular output).
std::string format_g15(double x);

/// observations table: header "t,Q" (plus a trailing label column when the
/// series carries labels), one row per observation, t starting at 1.
void write_observations(const std::string& path, const MaximaSeries& series);
MaximaSeries read_observations(const std::string& path);

/// latent table: header "t,sigma,alpha1,alpha2".
void write_latent(const std::string& path, const std::vector<LatentState>& states);
std::vector<LatentState> read_latent(const std::string& path);

/// generic numeric column table with header; used for risk paths and
/// factor-lab outputs.
void write_table(const std::string& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& columns);

}  // namespace acaf
