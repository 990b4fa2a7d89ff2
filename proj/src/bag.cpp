#include "c2aug/bag.hpp"

#include <algorithm>

namespace c2aug {

void Bag::validate() const {
  if (size() == 0) throw Error("bag must contain at least one instance");
  if (!instances.all_finite()) throw Error("bag contains non-finite values");
  if (provenance.size() != size()) throw Error("provenance length mismatch");
  if (!instance_labels.empty()) {
    if (instance_labels.size() != size()) throw Error("instance label length mismatch");
    bool any_positive = false;
    for (std::uint8_t l : instance_labels) any_positive = any_positive || l != 0;
    if (label == 1 && !any_positive)
      throw Error("positive bag without a positive instance");
    if (label == 0 && any_positive)
      throw Error("negative bag with a positive instance");
  }
}

void assign_provenance(Bag& bag) {
  bag.provenance.resize(bag.size());
  for (std::size_t j = 0; j < bag.size(); ++j)
    bag.provenance[j] = make_provenance(bag.id, j);
}

ClassPool build_class_pool(const std::vector<Bag>& training) {
  if (training.empty()) throw Error("build_class_pool: empty training set");
  std::size_t num_classes = 0;
  for (const Bag& b : training)
    num_classes = std::max<std::size_t>(num_classes, b.label + 1);
  ClassPool pool;
  pool.per_class.resize(num_classes);
  for (const Bag& b : training) {
    pool.n_max = std::max(pool.n_max, b.size());
    auto& entries = pool.per_class[b.label];
    for (std::size_t j = 0; j < b.size(); ++j)
      entries.push_back(PoolEntry{b.id, static_cast<std::uint32_t>(j), b.provenance[j]});
  }
  return pool;
}

RatioGroup ratio_group_of(double ratio) {
  if (ratio <= 0.0) return RatioGroup::normal;
  if (ratio < 0.01) return RatioGroup::below_1pct;
  if (ratio < 0.10) return RatioGroup::pct_1_to_10;
  return RatioGroup::above_10pct;
}

std::array<std::vector<std::size_t>, 4> stratify_by_tumor_ratio(
    const std::vector<Bag>& bags) {
  std::array<std::vector<std::size_t>, 4> groups;
  for (std::size_t i = 0; i < bags.size(); ++i) {
    if (!bags[i].has_instance_labels())
      throw Error("stratification requires instance labels");
    groups[static_cast<int>(ratio_group_of(bags[i].tumor_ratio()))].push_back(i);
  }
  return groups;
}

}  // namespace c2aug
