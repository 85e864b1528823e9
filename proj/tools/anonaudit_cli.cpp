// anonaudit: k-anonymize numeric microdata by greedy local recoding, then
// audit the release by enumerating every raw-data placement consistent with
// the recoder's greedy choices.

#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "anonaudit/anonymizer.hpp"
#include "anonaudit/attack.hpp"
#include "anonaudit/errors.hpp"
#include "anonaudit/io.hpp"
#include "anonaudit/pipeline.hpp"
#include "anonaudit/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitSoundness = 3;

void write_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw anonaudit::IoError("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  using namespace anonaudit;

  CLI::App app{"k-anonymization by local recoding, and the audit that "
               "unravels it"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Sample a synthetic raw dataset");
  std::string gen_config, gen_out;
  std::optional<std::uint64_t> gen_seed;
  gen->add_option("--config", gen_config, "dataset config JSON")->required();
  gen->add_option("--seed", gen_seed, "seed override");
  gen->add_option("--out", gen_out, "output CSV path")->required();

  // anonymize
  auto* anonym = app.add_subcommand("anonymize", "Locally recode a raw CSV");
  std::string an_data, an_config, an_prefix;
  int an_k = 0;
  bool an_jitter = false;
  anonym->add_option("--data", an_data, "raw CSV")->required();
  anonym->add_option("--config", an_config, "dataset config JSON")->required();
  anonym->add_option("--k", an_k, "anonymity parameter")->required();
  anonym->add_option("--out", an_prefix,
                     "output prefix (<prefix>.csv, <prefix>.meta.json)")
      ->required();
  anonym->add_flag("--jitter", an_jitter,
                   "resolve duplicate attribute values deterministically");

  // attack
  auto* attack = app.add_subcommand(
      "attack", "Enumerate all raw-data placements consistent with a release");
  std::string at_prefix, at_config, at_out;
  int at_k = 0;
  std::optional<std::size_t> at_max_solutions;
  std::optional<double> at_time_budget;
  attack->add_option("--anon", at_prefix, "release prefix (reads <prefix>.csv)")
      ->required();
  attack->add_option("--config", at_config, "dataset config JSON (hierarchies)")
      ->required();
  attack->add_option("--k", at_k, "anonymity parameter")->required();
  attack->add_option("--max-solutions", at_max_solutions,
                     "per-target solution cap");
  attack->add_option("--time-budget", at_time_budget,
                     "per-target time budget in seconds");
  attack->add_option("--out", at_out, "report JSON path")->required();

  // fpso
  auto* fpso_cmd = app.add_subcommand(
      "fpso", "Single out records by validating an attack report against the "
              "raw dataset");
  std::string fp_report, fp_original, fp_out;
  fpso_cmd->add_option("--report", fp_report, "attack report JSON")->required();
  fpso_cmd->add_option("--original", fp_original, "raw CSV")->required();
  fpso_cmd->add_option("--out", fp_out, "output JSON path")->required();

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "Run a full sweep manifest");
  std::string ev_manifest;
  eval->add_option("--manifest", ev_manifest, "manifest JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) {
      const DatasetConfig config = load_config(gen_config);
      const Dataset data = generate_synthetic(config, gen_seed);
      write_csv(data, gen_out);
    } else if (*anonym) {
      const DatasetConfig config = load_config(an_config);
      const Dataset data = load_csv(an_data, config, an_jitter);
      const Hierarchies hs = hierarchies_from(config);
      const AnonymizedDataset anon = local_recode(data, an_k, hs);
      write_anonymized(anon, an_prefix + ".csv", an_prefix + ".meta.json");
      std::cerr << "anonymize: " << anon.classes.size() << " classes, "
                << anon.outlier_ids.size() << " outliers\n";
    } else if (*attack) {
      const DatasetConfig config = load_config(at_config);
      const Hierarchies hs = hierarchies_from(config);
      // the attack consumes only the data CSV, k, and the hierarchies
      const AnonymizedDataset anon =
          read_anonymized(at_prefix + ".csv", "", hs);
      const SegmentGrid grid(hs);
      EnumerationLimits limits;
      if (at_max_solutions) limits.max_solutions = *at_max_solutions;
      if (at_time_budget) {
        limits.time_budget = std::chrono::duration<double>(*at_time_budget);
      }
      const AttackRun run = attack_all(anon, grid, at_k, limits);
      write_json(attack_report_json(anon, run, grid, at_k), at_out);
      std::size_t partial = 0;
      for (const auto& o : run.class_outcomes) {
        if (!o.enumeration.exhausted || o.error) ++partial;
      }
      std::cerr << "attack: " << anon.classes.size() << " classes, "
                << (run.outlier_outcome ? 1 : 0) << " outlier target, "
                << partial << " partial\n";
    } else if (*fpso_cmd) {
      const AttackReportData report = load_attack_report(fp_report);
      DatasetConfig config;
      for (const auto& h : report.hierarchies) {
        config.attributes.push_back(AttributeConfig{
            h.name(), h.domain().lo, h.domain().hi, h.height()});
      }
      const Dataset original = load_csv(fp_original, config);
      const auto results = run_fpso(report, original);
      write_json(fpso_report_json(results, report.k), fp_out);
    } else if (*eval) {
      const RunManifest manifest = load_manifest(ev_manifest);
      const SweepResult result = run_evaluate(manifest);
      write_aggregate_tables(result.report, manifest.out_dir);
      for (const auto& f : result.failures) {
        std::cerr << "evaluate: " << f << "\n";
      }
      std::cerr << "evaluate: " << result.report.runs.size() << " runs, "
                << result.failures.size() << " failed cells, tables in "
                << manifest.out_dir.string() << "\n";
    }
  } catch (const SoundnessError& e) {
    std::cerr << "soundness alarm: " << e.what() << "\n";
    return kExitSoundness;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitSoundness;
  }
  return kExitOk;
}
