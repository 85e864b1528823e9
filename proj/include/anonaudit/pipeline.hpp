#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "anonaudit/anonymizer.hpp"
#include "anonaudit/attack.hpp"
#include "anonaudit/fpso.hpp"
#include "anonaudit/io.hpp"
#include "anonaudit/metrics.hpp"
#include "anonaudit/parallel.hpp"
#include "anonaudit/report.hpp"

namespace anonaudit {

// ---------------------------------------------------------------------------
// FPSO driver
// ---------------------------------------------------------------------------

/// Recover the true class memberships by replaying the recoding on the raw
/// dataset, then validate each class's enumerated assignments against them.
/// Classes whose enumeration was cut short are skipped (their entry is empty).
/// The replay must reproduce the reported class segments and sizes exactly;
/// anything else means the raw dataset does not belong to this release.
inline std::vector<std::optional<FpsoClassResult>> run_fpso(
    const AttackReportData& report, const Dataset& original) {
  const AnonymizedDataset replay =
      local_recode(original, report.k, report.hierarchies);
  const SegmentGrid grid(report.hierarchies);

  std::map<Segment, const EquivalenceClass*> by_segment;
  for (const auto& eq : replay.classes) by_segment[eq.segment] = &eq;
  if (by_segment.size() != report.classes.size()) {
    throw DataError("replaying the recoding yields " +
                    std::to_string(by_segment.size()) + " classes, report has " +
                    std::to_string(report.classes.size()) +
                    "; the original dataset does not match this release");
  }

  std::vector<std::optional<FpsoClassResult>> results(report.classes.size());
  for (std::size_t ci = 0; ci < report.classes.size(); ++ci) {
    const auto& entry = report.classes[ci];
    const auto it = by_segment.find(entry.segment);
    if (it == by_segment.end() || it->second->size() != entry.size) {
      throw DataError("report class " + std::to_string(ci) +
                      " does not match the replayed recoding; the original "
                      "dataset does not match this release");
    }
    if (!entry.exhausted) continue;
    const Assignment valid =
        find_valid(entry.solutions, original, it->second->member_ids, grid);
    FpsoClassResult r = single_out(valid, grid, original, it->second->member_ids);
    r.class_index = ci;
    results[ci] = std::move(r);
  }
  return results;
}

// ---------------------------------------------------------------------------
// Evaluation sweep
// ---------------------------------------------------------------------------

/// A sweep over seeds x k values x attribute subsets, one pipeline run per
/// cell, aggregated into the report tables.
struct RunManifest {
  DatasetConfig config;
  std::string dataset_label = "synthetic";
  std::vector<std::uint64_t> seeds;
  std::vector<int> ks;
  std::vector<std::vector<std::string>> attribute_subsets;  // empty: all
  EnumerationLimits limits;
  std::filesystem::path out_dir = "anonaudit-out";
};

inline RunManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }

  RunManifest m;
  try {
    const std::string config_path = j.at("config").get<std::string>();
    const auto base = std::filesystem::path(path).parent_path();
    m.config = load_config((base / config_path).string());
    m.dataset_label = j.value("dataset_label", std::string("synthetic"));
    m.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    m.ks = j.at("ks").get<std::vector<int>>();
    if (j.contains("attribute_subsets")) {
      m.attribute_subsets =
          j.at("attribute_subsets").get<std::vector<std::vector<std::string>>>();
    }
    if (j.contains("max_solutions")) {
      m.limits.max_solutions = j.at("max_solutions").get<std::size_t>();
    }
    if (j.contains("time_budget_seconds")) {
      m.limits.time_budget =
          std::chrono::duration<double>(j.at("time_budget_seconds").get<double>());
    }
    if (j.contains("out_dir")) {
      m.out_dir = base / j.at("out_dir").get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }

  for (const auto& subset : m.attribute_subsets) {
    for (const auto& name : subset) {
      const bool known = std::any_of(
          m.config.attributes.begin(), m.config.attributes.end(),
          [&](const AttributeConfig& a) { return a.name == name; });
      if (!known) {
        throw ParseError("manifest subset references unknown attribute '" +
                         name + "'");
      }
    }
  }
  return m;
}

/// Keep only the named columns, in the given order.
inline Dataset project_columns(const Dataset& data,
                               const std::vector<std::string>& names) {
  std::vector<std::size_t> cols;
  cols.reserve(names.size());
  for (const auto& name : names) {
    const auto it = std::find(data.attribute_names.begin(),
                              data.attribute_names.end(), name);
    if (it == data.attribute_names.end()) {
      throw DataError("unknown attribute '" + name + "'");
    }
    cols.push_back(static_cast<std::size_t>(it - data.attribute_names.begin()));
  }
  Dataset out;
  out.attribute_names = names;
  out.row_ids = data.row_ids;
  out.records.reserve(data.size());
  for (const auto& rec : data.records) {
    Record r;
    r.reserve(cols.size());
    for (std::size_t c : cols) r.push_back(rec[c]);
    out.records.push_back(std::move(r));
  }
  return out;
}

/// One pipeline cell: sample, recode, attack, fold into per-target stats.
inline RunRecord evaluate_cell(const DatasetConfig& config,
                               const std::vector<std::string>& subset,
                               std::uint64_t seed, int k,
                               const EnumerationLimits& limits,
                               const std::string& label,
                               SyntheticDistribution dist =
                                   SyntheticDistribution::uniform) {
  // sampling is per full config so a record keeps its values across subsets
  const Dataset full = generate_synthetic(config, seed, dist);
  const Dataset data = subset.empty() ? full : project_columns(full, subset);

  DatasetConfig sub_config;
  sub_config.n = config.n;
  for (const auto& name : data.attribute_names) {
    for (const auto& a : config.attributes) {
      if (a.name == name) sub_config.attributes.push_back(a);
    }
  }
  const Hierarchies hs = hierarchies_from(sub_config);
  const SegmentGrid grid(hs);

  const AnonymizedDataset anon = local_recode(data, k, hs);
  const AttackRun run = attack_all(anon, grid, k, limits);

  RunRecord record;
  record.dataset = label;
  record.num_qis = hs.size();
  record.k = k;
  record.seed = seed;
  for (const auto& outcome : run.class_outcomes) {
    record.classes.push_back(make_target_stats(outcome, anon, grid));
  }
  if (run.outlier_outcome) {
    record.outliers = make_target_stats(*run.outlier_outcome, anon, grid);
  }
  return record;
}

struct SweepResult {
  RefinementReport report;
  std::vector<std::string> failures;  // one line per failed cell
};

/// Run the whole manifest. Cells execute on the worker pool; a failing cell
/// is recorded and the sweep continues. Results are aggregated in manifest
/// order regardless of scheduling.
inline SweepResult run_evaluate(const RunManifest& manifest) {
  struct Cell {
    std::vector<std::string> subset;
    std::uint64_t seed = 0;
    int k = 0;
  };
  std::vector<Cell> cells;
  const std::vector<std::vector<std::string>> subsets =
      manifest.attribute_subsets.empty()
          ? std::vector<std::vector<std::string>>{{}}
          : manifest.attribute_subsets;
  for (const auto& subset : subsets) {
    for (std::uint64_t seed : manifest.seeds) {
      for (int k : manifest.ks) {
        cells.push_back(Cell{subset, seed, k});
      }
    }
  }

  std::vector<std::optional<RunRecord>> records(cells.size());
  std::vector<std::optional<std::string>> errors(cells.size());
  parallel_for_indexed(cells.size(), [&](std::size_t i) {
    try {
      records[i] = evaluate_cell(manifest.config, cells[i].subset,
                                 cells[i].seed, cells[i].k, manifest.limits,
                                 manifest.dataset_label);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  SweepResult result;
  std::vector<RunRecord> runs;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (records[i]) {
      runs.push_back(std::move(*records[i]));
    } else {
      result.failures.push_back(
          "cell seed=" + std::to_string(cells[i].seed) +
          " k=" + std::to_string(cells[i].k) + ": " +
          errors[i].value_or("unknown failure"));
    }
  }
  result.report = aggregate_report(std::move(runs));
  return result;
}

}  // namespace anonaudit
