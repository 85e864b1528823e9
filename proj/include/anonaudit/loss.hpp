#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <compare>
#include <cstddef>
#include <unordered_set>
#include <vector>

#include "anonaudit/dataset.hpp"
#include "anonaudit/errors.hpp"
#include "anonaudit/hierarchy.hpp"
#include "anonaudit/lattice.hpp"

namespace anonaudit {

using Rational = boost::multiprecision::cpp_rational;

/// Normalized information loss of one attribute at a layer:
/// (len(layer) - 1) / (L - 1) with len(0) = 1 and L the domain length.
/// This is the normalized interval-length loss with the dataset-size factor
/// cancelled; it is 0 at layer 0 and 1 at the root.
inline Rational qi_loss_normalized(const GeneralizationHierarchy& hier,
                                   int layer) {
  if (layer < 0 || layer > hier.height()) {
    throw InvalidLayer("loss layer " + std::to_string(layer) + " outside [0," +
                       std::to_string(hier.height()) + "]");
  }
  const Value domain_len = hier.domain().length();
  if (domain_len == 1) return Rational(0);  // degenerate single-value domain
  const Value len = layer == 0 ? 1 : hier.leaf_width() << (layer - 1);
  return Rational(len - 1, domain_len - 1);
}

/// Total information loss of a state: the geometric mean of (q_i + 1) minus 1.
/// Comparisons use the exact rational product of the (q_i + 1) terms, which
/// orders identically to the m-th root; the decimal value is only for
/// reporting.
struct LossValue {
  Rational product{1};  // prod_i (q_i + 1)
  std::size_t dims = 1;

  double value() const {
    return std::pow(product.convert_to<double>(), 1.0 / double(dims)) - 1.0;
  }

  /// Exact test that the loss equals a given rational r: (r+1)^m == product.
  bool equals(const Rational& r) const {
    Rational p{1};
    for (std::size_t i = 0; i < dims; ++i) p *= (r + 1);
    return p == product;
  }

  friend bool operator==(const LossValue& a, const LossValue& b) {
    return a.product == b.product;
  }
  friend std::strong_ordering operator<=>(const LossValue& a,
                                          const LossValue& b) {
    if (a.product < b.product) return std::strong_ordering::less;
    if (a.product > b.product) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
};

inline LossValue state_loss(const GeneralizationState& state,
                            const Hierarchies& hs) {
  LossValue loss;
  loss.dims = hs.size();
  for (std::size_t d = 0; d < hs.size(); ++d) {
    loss.product *= qi_loss_normalized(hs[d], state.layers[d]) + 1;
  }
  return loss;
}

/// Tie-breaking criteria, evaluated in sequence c1, c2, c3.
struct CriteriaTuple {
  long long c1 = 0;   // sum of layers
  Rational c2{0};     // mean layer/height
  Rational c3{0};     // 1 - mean distinct-interval ratio

  friend bool operator==(const CriteriaTuple&, const CriteriaTuple&) = default;
};

inline CriteriaTuple criteria(const GeneralizationState& state,
                              const Dataset& data, const Hierarchies& hs) {
  if (data.size() == 0) throw EmptyDataset("criteria on an empty dataset");
  CriteriaTuple c;
  const std::size_t m = hs.size();
  Rational dst_ratio_sum{0};
  for (std::size_t d = 0; d < m; ++d) {
    const int layer = state.layers[d];
    c.c1 += layer;
    c.c2 += Rational(layer, hs[d].height());
    // distinct generalized intervals vs distinct raw values, both over the
    // current dataset
    std::unordered_set<Value> raw, gen;
    for (const auto& rec : data.records) {
      raw.insert(rec[d]);
      gen.insert(layer == 0 ? rec[d] : hs[d].rank_of(layer, rec[d]));
    }
    dst_ratio_sum += Rational(gen.size(), raw.size());
  }
  c.c2 /= m;
  c.c3 = 1 - dst_ratio_sum / m;
  return c;
}

}  // namespace anonaudit
