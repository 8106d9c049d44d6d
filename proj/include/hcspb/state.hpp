#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hcspb/errors.hpp"

namespace hcspb {

// Total valuation of the model's variables plus the clock "now".
// Immutable: updates return copies. The name table is shared between the
// states of a run, so a copy is one double vector.
class State {
 public:
  State();

  static State make(std::vector<std::pair<std::string, double>> vars, double now_value = 0.0);

  double now() const { return vals_[now_slot_]; }
  bool contains(std::string_view name) const { return slot(name) >= 0; }
  double get(std::string_view name) const;
  std::optional<double> find(std::string_view name) const;

  State with(std::string_view name, double value) const;  // adds the name if absent
  State with_now(double now_value) const;
  State advanced(double d) const { return with_now(now() + d); }

  int slot(std::string_view name) const;  // -1 when absent
  double at_slot(int slot) const { return vals_[static_cast<size_t>(slot)]; }
  State with_slot(int slot, double value) const;

  const std::vector<std::string>& names() const { return *names_; }  // sorted, includes "now"
  size_t size() const { return vals_.size(); }
  bool same_layout(const State& other) const { return names_ == other.names_; }

  friend bool operator==(const State& a, const State& b);

 private:
  State(std::shared_ptr<const std::vector<std::string>> names, std::vector<double> vals);
  void locate_now();

  std::shared_ptr<const std::vector<std::string>> names_;
  std::vector<double> vals_;
  size_t now_slot_ = 0;
};

// Pointwise union of disjoint states (domains may only share "now").
State state_union(const State& a, const State& b, double eps = 1e-9);

}  // namespace hcspb
