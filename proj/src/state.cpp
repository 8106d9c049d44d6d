#include "hcspb/state.hpp"

#include <algorithm>
#include <cmath>

namespace hcspb {

State::State() {
  auto names = std::make_shared<std::vector<std::string>>();
  names->push_back("now");
  names_ = std::move(names);
  vals_.push_back(0.0);
  now_slot_ = 0;
}

State::State(std::shared_ptr<const std::vector<std::string>> names, std::vector<double> vals)
    : names_(std::move(names)), vals_(std::move(vals)) {
  locate_now();
}

void State::locate_now() {
  auto it = std::lower_bound(names_->begin(), names_->end(), "now");
  if (it == names_->end() || *it != "now") fail(Errc::scope, "state is missing the clock 'now'");
  now_slot_ = static_cast<size_t>(it - names_->begin());
}

State State::make(std::vector<std::pair<std::string, double>> vars, double now_value) {
  bool has_now = false;
  for (auto& [name, value] : vars)
    if (name == "now") has_now = true;
  if (!has_now) vars.emplace_back("now", now_value);
  std::sort(vars.begin(), vars.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (size_t i = 1; i < vars.size(); ++i)
    if (vars[i].first == vars[i - 1].first)
      fail(Errc::scope, "duplicate variable '" + vars[i].first + "' in state");
  auto names = std::make_shared<std::vector<std::string>>();
  std::vector<double> vals;
  names->reserve(vars.size());
  vals.reserve(vars.size());
  for (auto& [name, value] : vars) {
    names->push_back(name);
    vals.push_back(value);
  }
  return State(std::move(names), std::move(vals));
}

int State::slot(std::string_view name) const {
  auto it = std::lower_bound(names_->begin(), names_->end(), name);
  if (it == names_->end() || *it != name) return -1;
  return static_cast<int>(it - names_->begin());
}

double State::get(std::string_view name) const {
  int s = slot(name);
  if (s < 0) fail(Errc::unbound_variable, "unbound variable '" + std::string(name) + "'");
  return vals_[static_cast<size_t>(s)];
}

std::optional<double> State::find(std::string_view name) const {
  int s = slot(name);
  if (s < 0) return std::nullopt;
  return vals_[static_cast<size_t>(s)];
}

State State::with(std::string_view name, double value) const {
  int s = slot(name);
  if (s >= 0) return with_slot(s, value);
  std::vector<std::pair<std::string, double>> vars;
  vars.reserve(vals_.size() + 1);
  for (size_t i = 0; i < vals_.size(); ++i) vars.emplace_back((*names_)[i], vals_[i]);
  vars.emplace_back(std::string(name), value);
  return make(std::move(vars), now());
}

State State::with_slot(int slot, double value) const {
  State out = *this;
  out.vals_[static_cast<size_t>(slot)] = value;
  return out;
}

State State::with_now(double now_value) const {
  return with_slot(static_cast<int>(now_slot_), now_value);
}

bool operator==(const State& a, const State& b) {
  if (a.names_ != b.names_ && *a.names_ != *b.names_) return false;
  return a.vals_ == b.vals_;
}

State state_union(const State& a, const State& b, double eps) {
  if (std::fabs(a.now() - b.now()) > eps)
    fail(Errc::clock_skew, "states disagree on 'now' in union");
  std::vector<std::pair<std::string, double>> vars;
  for (size_t i = 0; i < a.size(); ++i)
    if (a.names()[i] != "now") vars.emplace_back(a.names()[i], a.at_slot(static_cast<int>(i)));
  for (size_t i = 0; i < b.size(); ++i) {
    const auto& name = b.names()[i];
    if (name == "now") continue;
    if (a.contains(name))
      fail(Errc::not_disjoint, "states share variable '" + name + "' in union");
    vars.emplace_back(name, b.at_slot(static_cast<int>(i)));
  }
  return State::make(std::move(vars), a.now());
}

}  // namespace hcspb
