#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "anonaudit/attack.hpp"
#include "anonaudit/fpso.hpp"
#include "anonaudit/io.hpp"
#include "anonaudit/metrics.hpp"

namespace anonaudit {

/// Fold one attack outcome into the exact counting metrics. For classes the
/// baseline volume is the class segment, for outliers the whole grid.
inline TargetStats make_target_stats(const AttackOutcome& outcome,
                                     const AnonymizedDataset& anon,
                                     const SegmentGrid& grid) {
  TargetStats st;
  st.runtime_seconds = outcome.runtime_seconds;
  st.exhausted = outcome.enumeration.exhausted && !outcome.error;
  st.solution_count = outcome.enumeration.count();

  if (outcome.instance.target.is_outliers()) {
    st.lr = lr_solutions(volume(grid, grid.top_segment()),
                         anon.outlier_ids.size());
  } else {
    const auto& eq = anon.classes[outcome.instance.target.class_index];
    st.class_index = outcome.instance.target.class_index;
    st.basic_segment = grid.is_basic(eq.segment);
    st.lr = lr_solutions(volume(grid, eq.segment), eq.size());
  }
  if (st.exhausted) {
    st.cra = cra_solutions(outcome.enumeration, grid);
    st.ratio = cra_ratio(st.lr, st.cra);
  }
  return st;
}

namespace detail {

inline nlohmann::json hierarchies_json(const Hierarchies& hs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& h : hs) {
    arr.push_back({{"name", h.name()},
                   {"lo", h.domain().lo},
                   {"hi", h.domain().hi},
                   {"height", h.height()}});
  }
  return arr;
}

inline nlohmann::json solutions_json(const std::vector<Assignment>& solutions) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& a : solutions) arr.push_back(a.z);
  return arr;
}

inline void fill_count_fields(nlohmann::json& j, const TargetStats& st) {
  j["exhausted"] = st.exhausted;
  j["solution_count"] = st.solution_count;
  j["lr_solutions"] = st.lr.str();
  j["lr_solutions_decimal"] = st.lr.convert_to<double>();
  if (st.exhausted) {
    j["cra_solutions"] = st.cra.str();
    j["cra_solutions_decimal"] = st.cra.convert_to<double>();
    j["cra_ratio"] = decimal_string(*st.ratio);
    j["cra_ratio_decimal"] = to_double(*st.ratio);
  }
}

}  // namespace detail

/// The attacker-facing result document: per-class systems' solutions and the
/// exact/decimal counts. Wall-clock numbers are grouped under "runtimes" so
/// that the rest of the document is reproducible byte for byte.
inline nlohmann::json attack_report_json(const AnonymizedDataset& anon,
                                         const AttackRun& run,
                                         const SegmentGrid& grid, int k) {
  nlohmann::json report;
  report["version"] = 1;
  report["k"] = k;
  report["hierarchies"] = detail::hierarchies_json(anon.hierarchies);

  nlohmann::json classes = nlohmann::json::array();
  nlohmann::json class_runtimes = nlohmann::json::array();
  for (std::size_t ci = 0; ci < anon.classes.size(); ++ci) {
    const auto& eq = anon.classes[ci];
    const auto& outcome = run.class_outcomes[ci];
    nlohmann::json jc;
    jc["index"] = ci;
    jc["rank"] = outcome.instance.ordering_rank;
    jc["tie_group"] = run.ordering.group_of[ci];
    jc["state"] = eq.state.layers;
    jc["intervals"] = nlohmann::json::array();
    for (const auto& iv : grid.intervals_of(eq.segment)) {
      jc["intervals"].push_back(to_string(iv));
    }
    jc["size"] = eq.size();
    const auto keys = detail::attacker_keys(eq.state, anon.hierarchies);
    jc["loss"] = eq.loss.value();
    jc["c1"] = std::get<1>(keys);
    jc["c2"] = to_double(std::get<2>(keys));
    jc["basic_segment"] = grid.is_basic(eq.segment);
    if (outcome.error) {
      jc["error"] = *outcome.error;
      jc["exhausted"] = false;
      jc["solution_count"] = 0;
    } else {
      const TargetStats st = make_target_stats(outcome, anon, grid);
      detail::fill_count_fields(jc, st);
      jc["solutions"] = detail::solutions_json(outcome.enumeration.solutions);
    }
    classes.push_back(std::move(jc));
    class_runtimes.push_back(outcome.runtime_seconds);
  }
  report["classes"] = std::move(classes);

  nlohmann::json runtimes;
  runtimes["classes"] = std::move(class_runtimes);
  if (run.outlier_outcome) {
    const auto& outcome = *run.outlier_outcome;
    nlohmann::json jo;
    jo["count"] = anon.outlier_ids.size();
    if (outcome.error) {
      jo["error"] = *outcome.error;
      jo["exhausted"] = false;
      jo["solution_count"] = 0;
    } else {
      const TargetStats st = make_target_stats(outcome, anon, grid);
      detail::fill_count_fields(jo, st);
      jo["solutions"] = detail::solutions_json(outcome.enumeration.solutions);
    }
    report["outliers"] = std::move(jo);
    runtimes["outliers"] = outcome.runtime_seconds;
  }
  report["runtimes"] = std::move(runtimes);
  return report;
}

/// The slice of an attack report the FPSO stage consumes.
struct AttackReportData {
  int k = 0;
  Hierarchies hierarchies;
  struct ClassEntry {
    Segment segment;
    std::size_t size = 0;
    bool exhausted = false;
    std::vector<Assignment> solutions;
  };
  std::vector<ClassEntry> classes;
};

inline AttackReportData load_attack_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open report " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }

  AttackReportData data;
  try {
    data.k = j.at("k").get<int>();
    for (const auto& h : j.at("hierarchies")) {
      data.hierarchies.push_back(build_hierarchy(
          h.at("name").get<std::string>(), h.at("lo").get<Value>(),
          h.at("hi").get<Value>(), h.at("height").get<int>()));
    }
    for (const auto& jc : j.at("classes")) {
      AttackReportData::ClassEntry entry;
      std::size_t d = 0;
      for (const auto& cell : jc.at("intervals")) {
        const IntervalI iv =
            detail::parse_interval_cell(cell.get<std::string>());
        int layer = 0;
        Value rank = 0;
        if (!data.hierarchies[d].find_node(iv, layer, rank)) {
          throw UnknownInterval(path + ": " + to_string(iv) +
                                " is not a node of '" +
                                data.hierarchies[d].name() + "'");
        }
        entry.segment.nodes.push_back(SegmentNode{layer, rank});
        ++d;
      }
      entry.size = jc.at("size").get<std::size_t>();
      entry.exhausted = jc.value("exhausted", false);
      if (jc.contains("solutions")) {
        for (const auto& sol : jc.at("solutions")) {
          entry.solutions.push_back(Assignment{sol.get<std::vector<long long>>()});
        }
      }
      data.classes.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return data;
}

inline nlohmann::json fpso_report_json(
    const std::vector<std::optional<FpsoClassResult>>& results, int k) {
  nlohmann::json report;
  report["version"] = 1;
  report["k"] = k;
  nlohmann::json classes = nlohmann::json::array();
  std::size_t failed = 0, single_1 = 0, single_many = 0, skipped = 0;
  for (std::size_t ci = 0; ci < results.size(); ++ci) {
    nlohmann::json jc;
    jc["index"] = ci;
    if (!results[ci]) {
      jc["skipped"] = true;  // enumeration was not exhaustive
      ++skipped;
      classes.push_back(std::move(jc));
      continue;
    }
    const FpsoClassResult& r = *results[ci];
    jc["category"] = to_string(r.category);
    jc["valid_assignment"] = r.valid_assignment.z;
    nlohmann::json singled = nlohmann::json::array();
    for (const auto& s : r.singled_out) {
      nlohmann::json js;
      js["basic_index"] = s.basic_index;
      js["matched_row"] = s.matched_row;
      nlohmann::json pred;
      for (std::size_t d = 0; d < s.predicate.terms.size(); ++d) {
        pred[s.predicate.attribute_names[d]] = to_string(s.predicate.terms[d]);
      }
      js["predicate"] = std::move(pred);
      singled.push_back(std::move(js));
    }
    jc["singled_out"] = std::move(singled);
    switch (r.category) {
      case FpsoCategory::failed: ++failed; break;
      case FpsoCategory::single_1: ++single_1; break;
      case FpsoCategory::single_many: ++single_many; break;
    }
    classes.push_back(std::move(jc));
  }
  report["classes"] = std::move(classes);

  const std::size_t evaluated = failed + single_1 + single_many;
  nlohmann::json summary;
  summary["classes"] = results.size();
  summary["evaluated"] = evaluated;
  summary["skipped"] = skipped;
  summary["failed"] = failed;
  summary["single_1"] = single_1;
  summary["single_many"] = single_many;
  if (evaluated > 0) {
    summary["failed_share"] = double(failed) / double(evaluated);
    summary["single_1_share"] = double(single_1) / double(evaluated);
    summary["single_many_share"] = double(single_many) / double(evaluated);
  }
  report["summary"] = std::move(summary);
  return report;
}

// ---------------------------------------------------------------------------
// Aggregate CSV tables
// ---------------------------------------------------------------------------

namespace detail {

inline std::ofstream open_table(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

}  // namespace detail

/// Emit the sweep aggregates: per-class and outlier CRA tables, solution
/// counts, runtimes, and the basic-vs-compound class share series.
inline void write_aggregate_tables(const RefinementReport& report,
                                   const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);

  auto classes_csv = detail::open_table(out_dir / "aggregate.csv");
  classes_csv << "dataset,num_qis,k,lr_solutions_mean,cra_solutions_mean,"
                 "cra_ratio_mean\n";
  for (const auto& c : report.cells) {
    classes_csv << c.dataset << "," << c.num_qis << "," << c.k << ","
                << decimal_string(c.lr_solutions_mean) << ","
                << decimal_string(c.cra_solutions_mean) << ","
                << decimal_string(c.cra_ratio_mean) << "\n";
  }

  auto outliers_csv = detail::open_table(out_dir / "outliers.csv");
  outliers_csv << "dataset,num_qis,k,lr_solutions_mean,cra_solutions_mean,"
                  "cra_ratio_mean\n";
  for (const auto& c : report.cells) {
    if (c.outlier_runs == 0) continue;
    outliers_csv << c.dataset << "," << c.num_qis << "," << c.k << ","
                 << decimal_string(c.outlier_lr_mean) << ","
                 << decimal_string(c.outlier_cra_mean) << ","
                 << decimal_string(c.outlier_ratio_mean) << "\n";
  }

  auto solutions_csv = detail::open_table(out_dir / "solutions.csv");
  solutions_csv << "dataset,num_qis,k,solutions_mean\n";
  for (const auto& c : report.cells) {
    solutions_csv << c.dataset << "," << c.num_qis << "," << c.k << ","
                  << decimal_string(c.solutions_mean) << "\n";
  }

  auto runtimes_csv = detail::open_table(out_dir / "runtimes.csv");
  runtimes_csv << "dataset,num_qis,k,runtime_mean_seconds\n";
  for (const auto& c : report.cells) {
    runtimes_csv << c.dataset << "," << c.num_qis << "," << c.k << ","
                 << c.runtime_mean_seconds << "\n";
  }

  auto shares_csv = detail::open_table(out_dir / "segment_shares.csv");
  shares_csv << "dataset,num_qis,k,basic_share_mean,compound_share_mean\n";
  for (const auto& c : report.cells) {
    if (c.share_runs == 0) continue;
    shares_csv << c.dataset << "," << c.num_qis << "," << c.k << ","
               << decimal_string(c.basic_share_mean) << ","
               << decimal_string(1 - c.basic_share_mean) << "\n";
  }
}

}  // namespace anonaudit
