// Finite-sample-space probability algebra: sample spaces with nonnegative
// masses summing to one, events as label subsets, conditional probabilities
// P(A|B) = P(A∩B)/P(B), expectations, and independent product spaces.
//
// All types are immutable values after construction and every operation is a
// pure function of its inputs; sharing across threads is safe.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pbn/errors.hpp"

namespace pbn {

// Input weights may carry rounding noise; accept them when their sum is
// within this tolerance of 1 and renormalize, reject otherwise.
inline constexpr double kMassSumTolerance = 1e-9;

class SampleSpace {
 public:
  SampleSpace(std::vector<std::string> labels, std::vector<double> masses)
      : labels_(std::move(labels)), masses_(std::move(masses)) {
    if (labels_.size() != masses_.size()) {
      throw DimensionError("SampleSpace: " + std::to_string(labels_.size()) +
                           " labels vs " + std::to_string(masses_.size()) +
                           " masses");
    }
    if (labels_.empty()) {
      throw DimensionError("SampleSpace: empty outcome set");
    }
    double sum = 0.0;
    for (double m : masses_) {
      if (!(m >= 0.0)) {
        throw NormalizationError("SampleSpace: negative mass " +
                                 std::to_string(m));
      }
      sum += m;
    }
    if (std::abs(sum - 1.0) > kMassSumTolerance) {
      throw NormalizationError("SampleSpace: masses sum to " +
                               std::to_string(sum) + ", expected 1");
    }
    for (double& m : masses_) m /= sum;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (!index_.emplace(labels_[i], i).second) {
        throw DimensionError("SampleSpace: duplicate label '" + labels_[i] +
                             "'");
      }
    }
  }

  static SampleSpace uniform(std::vector<std::string> labels) {
    std::vector<double> masses(labels.size(),
                               1.0 / static_cast<double>(labels.size()));
    return SampleSpace(std::move(labels), std::move(masses));
  }

  // The six-sided fair die used throughout the worked examples.
  static SampleSpace fair_die() {
    return uniform({"1", "2", "3", "4", "5", "6"});
  }

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& masses() const { return masses_; }
  double mass(std::size_t i) const { return masses_.at(i); }

  bool contains(const std::string& label) const {
    return index_.count(label) > 0;
  }

  std::size_t index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) {
      throw DimensionError("SampleSpace: unknown outcome '" + label + "'");
    }
    return it->second;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<double> masses_;
  std::unordered_map<std::string, std::size_t> index_;
};

// An event is a set of outcome labels, not an index mask, so it survives
// reordering of the space it is evaluated against. May be empty.
class Event {
 public:
  Event() = default;
  Event(std::initializer_list<std::string> members) : members_(members) {}
  explicit Event(std::set<std::string> members)
      : members_(std::move(members)) {}

  static Event whole(const SampleSpace& space) {
    return Event(std::set<std::string>(space.labels().begin(),
                                       space.labels().end()));
  }

  const std::set<std::string>& members() const { return members_; }
  bool empty() const { return members_.empty(); }
  bool contains(const std::string& label) const {
    return members_.count(label) > 0;
  }

  Event intersect(const Event& other) const {
    std::set<std::string> out;
    std::set_intersection(members_.begin(), members_.end(),
                          other.members_.begin(), other.members_.end(),
                          std::inserter(out, out.begin()));
    return Event(std::move(out));
  }

  bool superset_of(const Event& other) const {
    return std::includes(members_.begin(), members_.end(),
                         other.members_.begin(), other.members_.end());
  }

 private:
  std::set<std::string> members_;
};

// P(A|Omega): total mass of an event. Every member must belong to the space.
inline double event_mass(const Event& a, const SampleSpace& space) {
  double sum = 0.0;
  for (const auto& label : a.members()) {
    sum += space.mass(space.index_of(label));
  }
  return sum;
}

// P(A|B) = P(A∩B)/P(B). Equals 1 when A ⊇ B and 0 when A∩B is empty.
inline double p_bracket(const Event& a, const Event& b,
                        const SampleSpace& space) {
  const double pb = event_mass(b, space);
  if (!(pb > 0.0)) {
    throw ConditioningError("p_bracket: conditioning event has zero mass");
  }
  return event_mass(a.intersect(b), space) / pb;
}

// New space restricted to B's members with masses P(x|B); preserves the
// original outcome order.
inline SampleSpace condition(const SampleSpace& space, const Event& b) {
  const double pb = event_mass(b, space);
  if (!(pb > 0.0)) {
    throw ConditioningError("condition: conditioning event has zero mass");
  }
  std::vector<std::string> labels;
  std::vector<double> masses;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (b.contains(space.labels()[i])) {
      labels.push_back(space.labels()[i]);
      masses.push_back(space.mass(i) / pb);
    }
  }
  return SampleSpace(std::move(labels), std::move(masses));
}

// Bayes route P(B|A)·P(A|Omega)/P(B|Omega); agrees with p_bracket by algebra.
inline double bayes(const Event& a, const Event& b, const SampleSpace& space) {
  const double pa = event_mass(a, space);
  const double pb = event_mass(b, space);
  if (!(pa > 0.0) || !(pb > 0.0)) {
    throw ConditioningError("bayes: both events need positive mass");
  }
  return p_bracket(b, a, space) * pa / pb;
}

// Real value per outcome of one specific space, stored in outcome order.
class Observable {
 public:
  explicit Observable(std::vector<double> values) : values_(std::move(values)) {}

  // Sample f over the space's labels (e.g. face value from the label text).
  static Observable from(const SampleSpace& space,
                         const std::function<double(const std::string&)>& f) {
    std::vector<double> values;
    values.reserve(space.size());
    for (const auto& label : space.labels()) values.push_back(f(label));
    return Observable(std::move(values));
  }

  static Observable constant(const SampleSpace& space, double c) {
    return Observable(std::vector<double>(space.size(), c));
  }

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<double> values_;
};

// E[f] = sum f(x) m(x).
inline double expectation(const Observable& f, const SampleSpace& space) {
  if (f.size() != space.size()) {
    throw DimensionError("expectation: observable has " +
                         std::to_string(f.size()) + " values for a " +
                         std::to_string(space.size()) + "-outcome space");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    sum += f.values()[i] * space.mass(i);
  }
  return sum;
}

// E[f|H] = sum f(x) P(x|H) over the members of H.
inline double conditional_expectation(const Observable& f, const Event& h,
                                      const SampleSpace& space) {
  if (f.size() != space.size()) {
    throw DimensionError("conditional_expectation: observable/space mismatch");
  }
  const double ph = event_mass(h, space);
  if (!(ph > 0.0)) {
    throw ConditioningError(
        "conditional_expectation: conditioning event has zero mass");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (h.contains(space.labels()[i])) {
      sum += f.values()[i] * space.mass(i) / ph;
    }
  }
  return sum;
}

// Ordered list of independent factors. The joint mass of an outcome tuple is
// the product of the factor masses.
class ProductSpace {
 public:
  explicit ProductSpace(std::vector<SampleSpace> factors)
      : factors_(std::move(factors)) {
    if (factors_.empty()) {
      throw DimensionError("ProductSpace: no factors");
    }
  }

  const std::vector<SampleSpace>& factors() const { return factors_; }
  std::size_t arity() const { return factors_.size(); }

  // Joint space over outcome tuples; labels are factor labels joined by sep.
  SampleSpace flatten(const std::string& sep = ",") const {
    std::vector<std::string> labels{""};
    std::vector<double> masses{1.0};
    bool first = true;
    for (const auto& factor : factors_) {
      std::vector<std::string> next_labels;
      std::vector<double> next_masses;
      next_labels.reserve(labels.size() * factor.size());
      next_masses.reserve(labels.size() * factor.size());
      for (std::size_t i = 0; i < labels.size(); ++i) {
        for (std::size_t j = 0; j < factor.size(); ++j) {
          next_labels.push_back(first ? factor.labels()[j]
                                      : labels[i] + sep + factor.labels()[j]);
          next_masses.push_back(masses[i] * factor.mass(j));
        }
      }
      labels = std::move(next_labels);
      masses = std::move(next_masses);
      first = false;
    }
    return SampleSpace(std::move(labels), std::move(masses));
  }

  // Lift an event on one factor to the joint space (all tuples whose k-th
  // coordinate is in the event).
  Event cylinder(std::size_t factor_index, const Event& a,
                 const std::string& sep = ",") const {
    if (factor_index >= factors_.size()) {
      throw DimensionError("ProductSpace: factor index out of range");
    }
    std::set<std::string> members;
    collect_tuples(0, factor_index, a, "", sep, members);
    return Event(std::move(members));
  }

 private:
  void collect_tuples(std::size_t depth, std::size_t factor_index,
                      const Event& a, const std::string& prefix,
                      const std::string& sep,
                      std::set<std::string>& out) const {
    if (depth == factors_.size()) {
      out.insert(prefix);
      return;
    }
    for (const auto& label : factors_[depth].labels()) {
      if (depth == factor_index && !a.contains(label)) continue;
      collect_tuples(depth + 1, factor_index, a,
                     depth == 0 ? label : prefix + sep + label, sep, out);
    }
  }

  std::vector<SampleSpace> factors_;
};

// E[X1 X2 ... Xn] for independent factors: the product of per-factor
// expectations (one observable per factor).
inline double joint_expectation(const std::vector<Observable>& fs,
                                const ProductSpace& ps) {
  if (fs.size() != ps.arity()) {
    throw DimensionError("joint_expectation: " + std::to_string(fs.size()) +
                         " observables for " + std::to_string(ps.arity()) +
                         " factors");
  }
  double prod = 1.0;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    prod *= expectation(fs[i], ps.factors()[i]);
  }
  return prod;
}

// One mode of a truncated occupation-number basis: outcomes "0".."n_max" with
// the given weight sequence, renormalized. lost_mass reports the truncated
// tail (meaningful when the weights form a probability sequence over all n).
struct TruncatedSpace {
  SampleSpace space;
  double lost_mass;
};

inline TruncatedSpace truncated_occupation_space(
    const std::function<double(int)>& weight, int n_max) {
  if (n_max < 0) {
    throw DimensionError("truncated_occupation_space: n_max < 0");
  }
  std::vector<std::string> labels;
  std::vector<double> weights;
  double kept = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    labels.push_back(std::to_string(n));
    const double w = weight(n);
    if (!(w >= 0.0)) {
      throw NormalizationError("truncated_occupation_space: negative weight");
    }
    weights.push_back(w);
    kept += w;
  }
  if (!(kept > 0.0)) {
    throw NormalizationError("truncated_occupation_space: zero total weight");
  }
  for (double& w : weights) w /= kept;
  return TruncatedSpace{SampleSpace(std::move(labels), std::move(weights)),
                        1.0 - kept};
}

}  // namespace pbn
