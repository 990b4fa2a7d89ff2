#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "c2aug/tensor.hpp"

namespace c2aug {

// Provenance ids are globally unique per instance: bag id in the high bits,
// instance index in the low 24. Desk-scale bounds, validated on construction.
inline std::uint64_t make_provenance(std::uint64_t bag_id, std::uint64_t index) {
  if (bag_id >= (1ull << 40)) throw Error("bag id too large for provenance encoding");
  if (index >= (1ull << 24)) throw Error("instance index too large for provenance encoding");
  return (bag_id << 24) | index;
}
inline std::uint64_t provenance_bag(std::uint64_t prov) { return prov >> 24; }

// A bag of instances with one label. instance_labels are the per-instance
// 0/1 tags of synthetic data; absent (empty) for real-world style bags.
struct Bag {
  std::uint64_t id = 0;
  std::uint8_t label = 0;
  Tensor instances;                           // n x d
  std::vector<std::uint8_t> instance_labels;  // empty or length n
  std::vector<std::uint64_t> provenance;      // length n

  std::size_t size() const { return instances.rows(); }
  std::size_t dim() const { return instances.cols(); }
  bool has_instance_labels() const { return !instance_labels.empty(); }

  double tumor_ratio() const {
    if (!has_instance_labels()) throw Error("tumor_ratio requires instance labels");
    std::size_t c = 0;
    for (std::uint8_t l : instance_labels) c += l;
    return static_cast<double>(c) / static_cast<double>(size());
  }

  // Bag-label consistency: positive iff at least one positive instance.
  void validate() const;
};

// Assigns provenance ids derived from (bag id, index) to every instance.
void assign_provenance(Bag& bag);

struct Dataset {
  std::vector<Bag> bags;

  const Bag& by_id(std::uint64_t id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw Error("unknown bag id");
    return bags[it->second];
  }
  void reindex() {
    index_.clear();
    for (std::size_t i = 0; i < bags.size(); ++i) {
      if (index_.count(bags[i].id)) throw Error("duplicate bag id");
      index_[bags[i].id] = i;
    }
  }

 private:
  std::map<std::uint64_t, std::size_t> index_;
};

// Per-class index over all training instances, used for same-label
// cross-bag sampling. n_max is the maximum bag size in the training split.
struct PoolEntry {
  std::uint64_t bag_id;
  std::uint32_t index;
  std::uint64_t provenance;
};

struct ClassPool {
  std::vector<std::vector<PoolEntry>> per_class;
  std::size_t n_max = 0;

  std::size_t total() const {
    std::size_t s = 0;
    for (const auto& c : per_class) s += c.size();
    return s;
  }
  const std::vector<PoolEntry>& of_class(std::size_t label) const {
    static const std::vector<PoolEntry> empty;
    return label < per_class.size() ? per_class[label] : empty;
  }
};

ClassPool build_class_pool(const std::vector<Bag>& training);

// Tumor-ratio strata. Boundaries closed on the left: ratio 0 is "normal",
// (0, 1%) , [1%, 10%), [10%, 1].
enum class RatioGroup : int { normal = 0, below_1pct = 1, pct_1_to_10 = 2, above_10pct = 3 };

constexpr const char* ratio_group_name(RatioGroup g) {
  switch (g) {
    case RatioGroup::normal: return "normal";
    case RatioGroup::below_1pct: return "<1%";
    case RatioGroup::pct_1_to_10: return "1-10%";
    case RatioGroup::above_10pct: return ">=10%";
  }
  return "?";
}

RatioGroup ratio_group_of(double ratio);

// Partition of bag indices into the four groups; throws when any bag lacks
// instance labels.
std::array<std::vector<std::size_t>, 4> stratify_by_tumor_ratio(const std::vector<Bag>& bags);

}  // namespace c2aug
