#include "auditcov/inputs.hpp"

#include <cstdio>
#include <set>
#include <unordered_map>
#include <utility>

#include "auditcov/error.hpp"

namespace auditcov {

namespace {

std::string number_text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::size_t group_of(const CsvTable& table, const CsvRow& row, std::size_t col,
                     const PriceSeries& prices) {
  const std::string& label = table.text(row, col);
  const auto& labels = prices.group_labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return i;
  }
  throw Error(ErrorCode::unknown_label,
              table.where(row, col) + ": unknown group '" + label + "' (not in prices)");
}

}  // namespace

PriceSeries prices_from_csv(const CsvTable& table) {
  const std::size_t c_period = table.column("period");
  const std::size_t c_group = table.column("group");
  const std::size_t c_index = table.column("index");
  if (table.rows.empty()) {
    throw Error(ErrorCode::schema_violation, table.source + ": no data rows");
  }

  std::vector<std::string> periods;
  std::vector<std::string> groups;
  std::unordered_map<std::string, std::size_t> period_pos;
  std::unordered_map<std::string, std::size_t> group_pos;
  for (const auto& row : table.rows) {
    const auto& p = table.text(row, c_period);
    const auto& g = table.text(row, c_group);
    if (p.empty()) throw Error(ErrorCode::schema_violation, table.where(row, c_period) + ": empty period");
    if (g.empty()) throw Error(ErrorCode::schema_violation, table.where(row, c_group) + ": empty group");
    if (period_pos.emplace(p, periods.size()).second) periods.push_back(p);
    if (group_pos.emplace(g, groups.size()).second) groups.push_back(g);
  }

  const auto m = static_cast<Eigen::Index>(groups.size());
  const auto T = static_cast<Eigen::Index>(periods.size());
  Matrix values = Matrix::Constant(m, T, std::numeric_limits<double>::quiet_NaN());
  for (const auto& row : table.rows) {
    const auto i = static_cast<Eigen::Index>(group_pos.at(table.text(row, c_group)));
    const auto t = static_cast<Eigen::Index>(period_pos.at(table.text(row, c_period)));
    const double v = table.number(row, c_index);
    if (v <= 0.0) {
      throw Error(ErrorCode::schema_violation,
                  table.where(row, c_index) + ": price index must be positive, got " +
                      table.text(row, c_index) + " (period " + periods[static_cast<std::size_t>(t)] +
                      ", group " + groups[static_cast<std::size_t>(i)] + ")");
    }
    if (!std::isnan(values(i, t))) {
      throw Error(ErrorCode::schema_violation,
                  table.where(row, c_period) + ": duplicate cell (period " +
                      periods[static_cast<std::size_t>(t)] + ", group " +
                      groups[static_cast<std::size_t>(i)] + ")");
    }
    values(i, t) = v;
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index t = 0; t < T; ++t) {
      if (std::isnan(values(i, t))) {
        throw Error(ErrorCode::schema_violation,
                    table.source + ": missing cell (period " + periods[static_cast<std::size_t>(t)] +
                        ", group " + groups[static_cast<std::size_t>(i)] + ")");
      }
    }
  }
  return PriceSeries::create(std::move(values), std::move(groups), std::move(periods));
}

std::map<std::string, WeightVector> weights_from_csv(const CsvTable& table,
                                                     const PriceSeries& prices,
                                                     std::vector<std::string>& warnings) {
  const std::size_t c_source = table.column("source");
  const std::size_t c_group = table.column("group");
  const std::size_t c_weight = table.column("weight");
  const auto m = static_cast<Eigen::Index>(prices.groups());

  std::map<std::string, std::pair<Vector, std::vector<bool>>> raw;
  for (const auto& row : table.rows) {
    const auto& source = table.text(row, c_source);
    if (source.empty()) {
      throw Error(ErrorCode::schema_violation, table.where(row, c_source) + ": empty source");
    }
    const std::size_t i = group_of(table, row, c_group, prices);
    const double w = table.number(row, c_weight);
    if (w < 0.0) {
      throw Error(ErrorCode::schema_violation,
                  table.where(row, c_weight) + ": weight must be non-negative");
    }
    auto [it, inserted] = raw.try_emplace(source, Vector::Zero(m),
                                          std::vector<bool>(static_cast<std::size_t>(m), false));
    if (it->second.second[i]) {
      throw Error(ErrorCode::schema_violation, table.where(row, c_group) +
                                                   ": duplicate weight for source '" + source +
                                                   "', group '" + prices.group_labels()[i] + "'");
    }
    it->second.second[i] = true;
    it->second.first(static_cast<Eigen::Index>(i)) = w;
  }
  if (raw.empty()) {
    throw Error(ErrorCode::schema_violation, table.source + ": no data rows");
  }
  std::map<std::string, WeightVector> out;
  for (auto& [source, entry] : raw) {
    for (std::size_t i = 0; i < entry.second.size(); ++i) {
      if (!entry.second[i]) {
        throw Error(ErrorCode::schema_violation, table.source + ": source '" + source +
                                                     "' has no weight for group '" +
                                                     prices.group_labels()[i] + "'");
      }
    }
    WeightVector w = WeightVector::create(std::move(entry.first), source);
    if (w.renormalized()) {
      warnings.push_back("weights of source '" + source + "' summed to " +
                         number_text(w.raw_sum()) + "; renormalized to 1");
    }
    out.emplace(source, std::move(w));
  }
  return out;
}

std::vector<HouseholdRecord> micro_from_csv(const CsvTable& table, const PriceSeries& prices) {
  const std::size_t c_id = table.column("household_id");
  const std::size_t c_group = table.column("group");
  const std::size_t c_exp = table.column("expenditure");
  const std::size_t c_stratum = table.find_column("stratum");
  const auto m = static_cast<Eigen::Index>(prices.groups());

  std::vector<HouseholdRecord> records;
  std::unordered_map<std::string, std::size_t> pos;
  std::vector<std::vector<bool>> seen;
  for (const auto& row : table.rows) {
    const auto& id = table.text(row, c_id);
    if (id.empty()) {
      throw Error(ErrorCode::schema_violation, table.where(row, c_id) + ": empty household_id");
    }
    const std::size_t i = group_of(table, row, c_group, prices);
    const double x = table.number(row, c_exp);
    if (x < 0.0) {
      throw Error(ErrorCode::schema_violation,
                  table.where(row, c_exp) + ": expenditure must be non-negative");
    }
    std::optional<std::string> stratum;
    if (c_stratum != CsvTable::npos && !table.text(row, c_stratum).empty()) {
      stratum = table.text(row, c_stratum);
    }
    auto [it, inserted] = pos.try_emplace(id, records.size());
    if (inserted) {
      records.push_back({id, Vector::Zero(m), stratum});
      seen.emplace_back(static_cast<std::size_t>(m), false);
    }
    auto& rec = records[it->second];
    if (rec.stratum != stratum) {
      throw Error(ErrorCode::schema_violation,
                  table.where(row, c_stratum == CsvTable::npos ? c_id : c_stratum) +
                      ": household '" + id + "' appears with different strata");
    }
    if (seen[it->second][i]) {
      throw Error(ErrorCode::schema_violation, table.where(row, c_group) + ": household '" + id +
                                                   "' lists group '" +
                                                   prices.group_labels()[i] + "' twice");
    }
    seen[it->second][i] = true;
    rec.expenditures(static_cast<Eigen::Index>(i)) = x;
  }
  if (records.empty()) {
    throw Error(ErrorCode::schema_violation, table.source + ": no data rows");
  }
  return records;
}

std::map<std::string, WeightEstimate> weight_estimates_from_csv(const CsvTable& table,
                                                                const PriceSeries& prices) {
  const std::size_t c_source = table.column("source");
  const std::size_t c_entry = table.column("entry");
  const std::size_t c_row = table.column("row_group");
  const std::size_t c_col = table.column("col_group");
  const std::size_t c_value = table.column("value");
  const auto m = static_cast<Eigen::Index>(prices.groups());

  struct Partial {
    Vector point;
    std::vector<bool> point_seen;
    Matrix cov;
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> cov_seen;
    std::size_t n = 0;
  };
  std::map<std::string, Partial> parts;
  for (const auto& row : table.rows) {
    const auto& source = table.text(row, c_source);
    if (source.empty()) {
      throw Error(ErrorCode::schema_violation, table.where(row, c_source) + ": empty source");
    }
    auto [it, inserted] = parts.try_emplace(source);
    Partial& p = it->second;
    if (inserted) {
      p.point = Vector::Zero(m);
      p.point_seen.assign(static_cast<std::size_t>(m), false);
      p.cov = Matrix::Zero(m, m);
      p.cov_seen = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(m, m, false);
    }
    const auto& entry = table.text(row, c_entry);
    const double value = table.number(row, c_value);
    if (entry == "weight") {
      const std::size_t i = group_of(table, row, c_row, prices);
      if (value < 0.0) {
        throw Error(ErrorCode::schema_violation,
                    table.where(row, c_value) + ": weight must be non-negative");
      }
      if (p.point_seen[i]) {
        throw Error(ErrorCode::schema_violation, table.where(row, c_row) + ": duplicate weight");
      }
      p.point_seen[i] = true;
      p.point(static_cast<Eigen::Index>(i)) = value;
    } else if (entry == "cov") {
      const auto i = static_cast<Eigen::Index>(group_of(table, row, c_row, prices));
      const auto j = static_cast<Eigen::Index>(group_of(table, row, c_col, prices));
      if (p.cov_seen(i, j)) {
        throw Error(ErrorCode::schema_violation,
                    table.where(row, c_row) + ": duplicate covariance entry");
      }
      p.cov_seen(i, j) = true;
      p.cov(i, j) = value;
    } else if (entry == "n") {
      if (value < 0.0 || value != std::floor(value)) {
        throw Error(ErrorCode::schema_violation,
                    table.where(row, c_value) + ": household count must be a whole number");
      }
      p.n = static_cast<std::size_t>(value);
    } else {
      throw Error(ErrorCode::schema_violation, table.where(row, c_entry) + ": unknown entry '" +
                                                   entry + "' (expected weight, cov or n)");
    }
  }
  if (parts.empty()) {
    throw Error(ErrorCode::schema_violation, table.source + ": no data rows");
  }
  std::map<std::string, WeightEstimate> out;
  for (auto& [source, p] : parts) {
    for (std::size_t i = 0; i < p.point_seen.size(); ++i) {
      if (!p.point_seen[i]) {
        throw Error(ErrorCode::schema_violation, table.source + ": source '" + source +
                                                     "' has no weight for group '" +
                                                     prices.group_labels()[i] + "'");
      }
    }
    // Entries given on one side of the diagonal only are mirrored.
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        if (!p.cov_seen(i, j) && p.cov_seen(j, i)) p.cov(i, j) = p.cov(j, i);
      }
    }
    try {
      out.emplace(source, make_weight_estimate(WeightVector::create(p.point, source), p.cov, p.n));
    } catch (const Error& e) {
      throw Error(ErrorCode::schema_violation,
                  table.source + ": source '" + source + "': " + e.what());
    }
  }
  return out;
}

std::map<std::string, WeightEstimate> estimate_by_stratum(
    const std::vector<HouseholdRecord>& records, std::vector<std::string>& warnings) {
  std::map<std::string, std::vector<HouseholdRecord>> by;
  for (const auto& r : records) {
    if (r.stratum && *r.stratum != kPooledStratum) by[*r.stratum].push_back(r);
  }
  std::map<std::string, WeightEstimate> out;
  auto add = [&](const std::string& key, std::span<const HouseholdRecord> recs) {
    WeightEstimate est = estimate_weights(recs, key);
    if (est.dropped_households > 0) {
      warnings.push_back("stratum '" + key + "': dropped " +
                         std::to_string(est.dropped_households) +
                         " household(s) with zero total expenditure");
    }
    out.emplace(key, std::move(est));
  };
  for (const auto& [key, recs] : by) add(key, recs);
  add(kPooledStratum, records);
  return out;
}

std::string micro_to_csv(const std::vector<HouseholdRecord>& records,
                         const std::vector<std::string>& group_labels) {
  std::string out = "household_id,group,expenditure,stratum\n";
  for (const auto& r : records) {
    if (static_cast<std::size_t>(r.expenditures.size()) != group_labels.size()) {
      throw Error(ErrorCode::dimension_mismatch,
                  "household '" + r.household_id + "' does not match the group labels");
    }
    for (std::size_t i = 0; i < group_labels.size(); ++i) {
      out += csv_escape(r.household_id);
      out += ',';
      out += csv_escape(group_labels[i]);
      out += ',';
      out += number_text(r.expenditures(static_cast<Eigen::Index>(i)));
      out += ',';
      out += csv_escape(r.stratum.value_or(""));
      out += '\n';
    }
  }
  return out;
}

}  // namespace auditcov
