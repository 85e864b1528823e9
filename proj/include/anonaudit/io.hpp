#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "anonaudit/anonymizer.hpp"
#include "anonaudit/dataset.hpp"
#include "anonaudit/errors.hpp"
#include "anonaudit/hierarchy.hpp"
#include "anonaudit/metrics.hpp"
#include "anonaudit/segment.hpp"

namespace anonaudit {

struct AttributeConfig {
  std::string name;
  Value lo = 0;
  Value hi = 0;
  int height = 1;
};

struct DatasetConfig {
  std::vector<AttributeConfig> attributes;
  std::size_t n = 0;
  int k = 3;
  std::uint64_t seed = 0;
};

inline Hierarchies hierarchies_from(const DatasetConfig& config) {
  Hierarchies hs;
  hs.reserve(config.attributes.size());
  for (const auto& a : config.attributes) {
    hs.push_back(build_hierarchy(a.name, a.lo, a.hi, a.height));
  }
  return hs;
}

inline DatasetConfig config_from_json(const nlohmann::json& j) {
  DatasetConfig c;
  try {
    for (const auto& a : j.at("attributes")) {
      c.attributes.push_back(AttributeConfig{
          a.at("name").get<std::string>(), a.at("lo").get<Value>(),
          a.at("hi").get<Value>(), a.at("height").get<int>()});
    }
    c.n = j.value("n", std::size_t{0});
    c.k = j.value("k", 3);
    c.seed = j.value("seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad config: ") + e.what());
  }
  return c;
}

inline DatasetConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("config " + path + ": " + e.what());
  }
  return config_from_json(j);
}

// ---------------------------------------------------------------------------
// Raw CSV
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  // commas inside [..] belong to interval cells, not to the row structure
  std::vector<std::string> cells;
  std::string cell;
  int depth = 0;
  for (char ch : line) {
    if (ch == '[') ++depth;
    if (ch == ']') --depth;
    if (ch == ',' && depth == 0) {
      cells.push_back(cell);
      cell.clear();
    } else {
      cell += ch;
    }
  }
  cells.push_back(cell);
  return cells;
}

inline std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline Value parse_value(const std::string& cell, std::size_t line_no,
                         std::size_t col) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) + ", column " +
                     std::to_string(col + 1) + ": '" + cell +
                     "' is not an integer");
  }
}

/// Deterministic duplicate resolution: probe the nearest free value,
/// preferring the upward neighbour on ties.
inline void jitter_duplicates(Dataset& data, const Hierarchies& hs) {
  for (std::size_t d = 0; d < data.dims(); ++d) {
    const IntervalI dom = hs[d].domain();
    std::unordered_set<Value> used;
    used.reserve(data.size());
    for (auto& rec : data.records) {
      Value v = rec[d];
      if (used.insert(v).second) continue;
      bool placed = false;
      for (Value delta = 1; delta <= dom.length(); ++delta) {
        for (Value cand : {v + delta, v - delta}) {
          if (dom.contains(cand) && used.insert(cand).second) {
            rec[d] = cand;
            placed = true;
            break;
          }
        }
        if (placed) break;
      }
      if (!placed) {
        throw DomainTooSmall("attribute '" + data.attribute_names[d] +
                             "' cannot hold " + std::to_string(data.size()) +
                             " distinct values");
      }
    }
  }
}

}  // namespace detail

inline Dataset load_csv(const std::string& path, const DatasetConfig& config,
                        bool jitter = false) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open data file " + path);

  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": missing header row");
  const auto header = detail::split_csv_line(detail::strip(line));
  if (header.size() != config.attributes.size()) {
    throw ParseError(path + ": header has " + std::to_string(header.size()) +
                     " columns, config has " +
                     std::to_string(config.attributes.size()));
  }
  for (std::size_t d = 0; d < header.size(); ++d) {
    if (detail::strip(header[d]) != config.attributes[d].name) {
      throw ParseError(path + ": header column " + std::to_string(d + 1) +
                       " is '" + detail::strip(header[d]) + "', expected '" +
                       config.attributes[d].name + "'");
    }
  }

  Dataset data;
  for (const auto& a : config.attributes) data.attribute_names.push_back(a.name);

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = detail::strip(line);
    if (stripped.empty()) continue;
    const auto cells = detail::split_csv_line(stripped);
    if (cells.size() != config.attributes.size()) {
      throw ParseError(path + ": line " + std::to_string(line_no) + " has " +
                       std::to_string(cells.size()) + " cells");
    }
    Record rec(cells.size());
    for (std::size_t d = 0; d < cells.size(); ++d) {
      rec[d] = detail::parse_value(detail::strip(cells[d]), line_no, d);
    }
    data.records.push_back(std::move(rec));
  }
  data.row_ids.resize(data.records.size());
  for (std::size_t i = 0; i < data.row_ids.size(); ++i) data.row_ids[i] = i;

  const Hierarchies hs = hierarchies_from(config);
  check_in_domain(data, hs);
  if (jitter) {
    detail::jitter_duplicates(data, hs);
  }
  check_distinct_values(data);
  return data;
}

inline void write_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  for (std::size_t d = 0; d < data.dims(); ++d) {
    out << (d ? "," : "") << data.attribute_names[d];
  }
  out << "\n";
  for (const auto& rec : data.records) {
    for (std::size_t d = 0; d < rec.size(); ++d) {
      out << (d ? "," : "") << rec[d];
    }
    out << "\n";
  }
}

// ---------------------------------------------------------------------------
// Synthetic data
// ---------------------------------------------------------------------------

enum class SyntheticDistribution {
  uniform,  // uniform over the domain
  // squared-uniform rank mapping: a uniform draw x becomes rank x^2/L, piling
  // mass near the domain start; collisions probe upward to the next free rank
  // (the squared map alone has fewer distinct ranks than the domain)
  squared,
};

namespace detail {

inline std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
  // rejection below the largest multiple of bound keeps the draw unbiased and
  // reproducible across standard libraries
  const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace detail

/// Sample n records, each attribute an independent distinct sample from its
/// domain. Identical (config, seed, distribution) inputs give identical
/// datasets on every platform.
inline Dataset generate_synthetic(
    const DatasetConfig& config,
    std::optional<std::uint64_t> seed_override = std::nullopt,
    SyntheticDistribution dist = SyntheticDistribution::uniform) {
  const std::uint64_t seed = seed_override.value_or(config.seed);
  Dataset data;
  data.records.assign(config.n, Record(config.attributes.size()));

  for (std::size_t d = 0; d < config.attributes.size(); ++d) {
    const auto& a = config.attributes[d];
    data.attribute_names.push_back(a.name);
    const IntervalI dom{a.lo, a.hi};
    const std::uint64_t domain_size = static_cast<std::uint64_t>(dom.length());
    if (domain_size < config.n) {
      throw DomainTooSmall("attribute '" + a.name + "' has " +
                           std::to_string(domain_size) + " values, need " +
                           std::to_string(config.n) + " distinct");
    }
    std::seed_seq seq{seed, static_cast<std::uint64_t>(d),
                      static_cast<std::uint64_t>(dist)};
    std::mt19937_64 rng(seq);
    std::unordered_set<Value> used;
    used.reserve(config.n);
    for (std::size_t i = 0; i < config.n; ++i) {
      std::uint64_t idx = detail::bounded_draw(rng, domain_size);
      if (dist == SyntheticDistribution::squared) {
        idx = (idx * idx) / domain_size;
        while (!used.insert(dom.lo + static_cast<Value>(idx)).second) {
          idx = (idx + 1) % domain_size;
        }
      } else {
        while (!used.insert(dom.lo + static_cast<Value>(idx)).second) {
          idx = detail::bounded_draw(rng, domain_size);
        }
      }
      data.records[i][d] = dom.lo + static_cast<Value>(idx);
    }
  }
  data.row_ids.resize(config.n);
  for (std::size_t i = 0; i < config.n; ++i) data.row_ids[i] = i;
  return data;
}

// ---------------------------------------------------------------------------
// Anonymized release
// ---------------------------------------------------------------------------

inline constexpr const char* kSuppressedCell = "*";

/// Write the release: a data CSV a publisher would share (one row per record,
/// interval cells, "*" for suppressed values) plus a bookkeeping JSON with
/// formation order, losses and memberships. Only the CSV is input to the
/// attack; the JSON exists for experiments and ground-truth validation.
inline void write_anonymized(const AnonymizedDataset& anon,
                             const std::string& data_path,
                             const std::string& meta_path) {
  std::ofstream out(data_path, std::ios::binary);
  if (!out) throw IoError("cannot write " + data_path);

  const SegmentGrid grid(anon.hierarchies);
  for (std::size_t d = 0; d < anon.hierarchies.size(); ++d) {
    out << (d ? "," : "") << anon.hierarchies[d].name();
  }
  out << "\n";
  for (const auto& eq : anon.classes) {
    std::string row;
    const auto intervals = grid.intervals_of(eq.segment);
    for (std::size_t d = 0; d < intervals.size(); ++d) {
      row += (d ? "," : "") + to_string(intervals[d]);
    }
    for (std::size_t i = 0; i < eq.size(); ++i) out << row << "\n";
  }
  for (std::size_t i = 0; i < anon.outlier_ids.size(); ++i) {
    for (std::size_t d = 0; d < anon.hierarchies.size(); ++d) {
      out << (d ? "," : "") << kSuppressedCell;
    }
    out << "\n";
  }
  out.close();

  nlohmann::json meta;
  meta["version"] = 1;
  meta["k"] = anon.k;
  meta["hierarchies"] = nlohmann::json::array();
  for (const auto& h : anon.hierarchies) {
    meta["hierarchies"].push_back({{"name", h.name()},
                                   {"lo", h.domain().lo},
                                   {"hi", h.domain().hi},
                                   {"height", h.height()}});
  }
  meta["classes"] = nlohmann::json::array();
  for (const auto& eq : anon.classes) {
    nlohmann::json jc;
    jc["state"] = eq.state.layers;
    jc["intervals"] = nlohmann::json::array();
    for (const auto& iv : grid.intervals_of(eq.segment)) {
      jc["intervals"].push_back(to_string(iv));
    }
    jc["size"] = eq.size();
    jc["loss"] = eq.loss.value();
    if (eq.criteria) {
      jc["c1"] = eq.criteria->c1;
      jc["c2"] = to_double(eq.criteria->c2);
    }
    jc["formation_iteration"] = eq.formation_iteration;
    jc["member_row_indices"] = eq.member_ids;
    meta["classes"].push_back(std::move(jc));
  }
  meta["outlier_row_indices"] = anon.outlier_ids;

  std::ofstream mout(meta_path, std::ios::binary);
  if (!mout) throw IoError("cannot write " + meta_path);
  mout << meta.dump(2) << "\n";
}

namespace detail {

inline IntervalI parse_interval_cell(const std::string& cell) {
  if (cell.size() < 5 || cell.front() != '[' || cell.back() != ']') {
    throw MalformedRow("cell '" + cell + "' is not an interval");
  }
  const std::size_t comma = cell.find(',');
  if (comma == std::string::npos) {
    throw MalformedRow("cell '" + cell + "' is not an interval");
  }
  try {
    const Value lo = std::stoll(cell.substr(1, comma - 1));
    const Value hi = std::stoll(cell.substr(comma + 1, cell.size() - comma - 2));
    return IntervalI{lo, hi};
  } catch (const std::exception&) {
    throw MalformedRow("cell '" + cell + "' is not an interval");
  }
}

}  // namespace detail

/// Reconstruct a release from the data CSV alone: identical generalized rows
/// form a class, all-suppressed rows are outliers. Member ids are file row
/// indices. The metadata path may be empty; when present it only supplies k.
/// Formation order, losses and memberships in the metadata are deliberately
/// not consumed: the attack must work from what a publisher actually shares.
inline AnonymizedDataset read_anonymized(const std::string& data_path,
                                         const std::string& meta_path,
                                         const Hierarchies& hierarchies) {
  std::ifstream in(data_path);
  if (!in) throw IoError("cannot open " + data_path);

  AnonymizedDataset anon;
  anon.hierarchies = hierarchies;
  const SegmentGrid grid(hierarchies);

  std::string line;
  if (!std::getline(in, line)) throw ParseError(data_path + ": missing header");

  std::map<Segment, std::size_t> class_of_segment;
  std::size_t row = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = detail::strip(line);
    if (stripped.empty()) continue;
    const auto cells = detail::split_csv_line(stripped);
    if (cells.size() != hierarchies.size()) {
      throw MalformedRow(data_path + ": line " + std::to_string(line_no) +
                         " has " + std::to_string(cells.size()) + " cells, " +
                         "expected " + std::to_string(hierarchies.size()));
    }
    std::size_t suppressed = 0;
    for (const auto& c : cells) {
      if (detail::strip(c) == kSuppressedCell) ++suppressed;
    }
    if (suppressed == cells.size()) {
      anon.outlier_ids.push_back(row++);
      continue;
    }
    if (suppressed != 0) {
      throw MalformedRow(data_path + ": line " + std::to_string(line_no) +
                         " mixes suppressed and interval cells");
    }
    Segment seg;
    seg.nodes.reserve(cells.size());
    for (std::size_t d = 0; d < cells.size(); ++d) {
      const IntervalI iv = detail::parse_interval_cell(detail::strip(cells[d]));
      int layer = 0;
      Value rank = 0;
      if (!hierarchies[d].find_node(iv, layer, rank)) {
        throw UnknownInterval(data_path + ": line " + std::to_string(line_no) +
                              ": " + to_string(iv) + " is not a node of '" +
                              hierarchies[d].name() + "'");
      }
      seg.nodes.push_back(SegmentNode{layer, rank});
    }
    auto [it, inserted] = class_of_segment.try_emplace(seg, anon.classes.size());
    if (inserted) {
      EquivalenceClass eq;
      eq.segment = seg;
      eq.state.layers.reserve(seg.nodes.size());
      for (const auto& n : seg.nodes) eq.state.layers.push_back(n.layer);
      eq.loss = state_loss(eq.state, hierarchies);
      anon.classes.push_back(std::move(eq));
    }
    anon.classes[it->second].member_ids.push_back(row++);
  }

  if (!meta_path.empty()) {
    std::ifstream min(meta_path);
    if (min) {
      try {
        nlohmann::json meta;
        min >> meta;
        anon.k = meta.value("k", 0);
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(meta_path + ": " + e.what());
      }
    }
  }
  return anon;
}

}  // namespace anonaudit
