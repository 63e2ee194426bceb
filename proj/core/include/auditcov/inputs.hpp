#pragma once

// Readers for the CSV input layouts (headers mandatory, '.' decimals):
//
//   prices.csv           period,group,index                      one row per cell
//   weights.csv          source,group,weight                     one row per (source, group)
//   ces_micro.csv        household_id,group,expenditure[,stratum]
//   weight_estimate.csv  source,entry,row_group,col_group,value  entry = weight | cov | n
//
// Group and period order follow first appearance in prices.csv. Every other
// file is matched to those group labels.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "auditcov/csv.hpp"
#include "auditcov/index_core.hpp"
#include "auditcov/survey_estimation.hpp"

namespace auditcov {

/// Stratum key used for households without a stratum, and for the pooled
/// estimate over all households.
inline constexpr const char* kPooledStratum = "all";

PriceSeries prices_from_csv(const CsvTable& table);

/// Weight sets keyed by source. Appends a warning for every set whose raw
/// weights did not sum to one.
std::map<std::string, WeightVector> weights_from_csv(const CsvTable& table,
                                                     const PriceSeries& prices,
                                                     std::vector<std::string>& warnings);

std::vector<HouseholdRecord> micro_from_csv(const CsvTable& table, const PriceSeries& prices);

std::map<std::string, WeightEstimate> weight_estimates_from_csv(const CsvTable& table,
                                                                const PriceSeries& prices);

/// Survey weight estimates per stratum plus the pooled "all" estimate.
/// Appends warnings for dropped zero-expenditure households.
std::map<std::string, WeightEstimate> estimate_by_stratum(
    const std::vector<HouseholdRecord>& records, std::vector<std::string>& warnings);

/// Serializes household records as ces_micro.csv, one row per (household, group).
std::string micro_to_csv(const std::vector<HouseholdRecord>& records,
                         const std::vector<std::string>& group_labels);

}  // namespace auditcov
