#pragma once

#include <cstddef>
#include <string>
#include <unordered_set>
#include <vector>

#include "anonaudit/errors.hpp"
#include "anonaudit/hierarchy.hpp"

namespace anonaudit {

using Record = std::vector<Value>;

/// Raw microdata. Row ids track positions in the originally ingested file so
/// that class membership stays meaningful after records are peeled off during
/// recoding. Values must be distinct within each attribute; identical values
/// would allow "grouping" without any generalization.
struct Dataset {
  std::vector<std::string> attribute_names;
  std::vector<Record> records;
  std::vector<std::size_t> row_ids;

  std::size_t size() const { return records.size(); }
  std::size_t dims() const { return attribute_names.size(); }

  static Dataset from_records(std::vector<std::string> names,
                              std::vector<Record> recs) {
    Dataset d;
    d.attribute_names = std::move(names);
    d.records = std::move(recs);
    d.row_ids.resize(d.records.size());
    for (std::size_t i = 0; i < d.row_ids.size(); ++i) d.row_ids[i] = i;
    return d;
  }

  Dataset subset(const std::vector<std::size_t>& positions) const {
    Dataset d;
    d.attribute_names = attribute_names;
    d.records.reserve(positions.size());
    d.row_ids.reserve(positions.size());
    for (std::size_t p : positions) {
      d.records.push_back(records[p]);
      d.row_ids.push_back(row_ids[p]);
    }
    return d;
  }
};

/// Enforce the per-attribute distinctness invariant.
inline void check_distinct_values(const Dataset& data) {
  for (std::size_t d = 0; d < data.dims(); ++d) {
    std::unordered_set<Value> seen;
    seen.reserve(data.size());
    for (const auto& rec : data.records) {
      if (!seen.insert(rec[d]).second) {
        throw DuplicateValues("attribute '" + data.attribute_names[d] +
                              "' contains the value " +
                              std::to_string(rec[d]) + " more than once");
      }
    }
  }
}

inline void check_in_domain(const Dataset& data, const Hierarchies& hs) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t d = 0; d < data.dims(); ++d) {
      if (!hs[d].domain().contains(data.records[i][d])) {
        throw OutOfDomain("record " + std::to_string(data.row_ids[i]) +
                          ", attribute '" + data.attribute_names[d] +
                          "': value " + std::to_string(data.records[i][d]) +
                          " outside " + to_string(hs[d].domain()));
      }
    }
  }
}

}  // namespace anonaudit
