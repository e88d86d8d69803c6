#pragma once

#include <map>
#include <string>
#include <vector>

#include "mwsn/engine.hpp"

namespace mwsn {

// Numeric cells use '.' decimals; absent values are empty cells.
std::string trial_csv_header();
std::string trial_csv_row(const TrialResult& t);

std::string sweep_raw_csv(const std::vector<TrialResult>& trials);
std::string sweep_agg_csv(const std::vector<SweepAggRow>& agg);

// Plot-ready tables, one per comparison figure: the x axis column followed
// by one mean-value column per protocol. Keyed by file name.
// Tables over node counts fix the speed closest to 5 m/s; tables over
// speeds fix the node count closest to 100.
std::map<std::string, std::string> figure_csvs(const SweepResult& sweep);

}  // namespace mwsn
