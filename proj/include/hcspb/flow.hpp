#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "hcspb/state.hpp"

namespace hcspb {

// Events labelling transitions.
struct Tau {};
struct ExtIn {
  std::string chan;
  double value;
};
struct ExtOut {
  std::string chan;
  double value;
};
struct InternalComm {
  std::string chan;
  double value;
};
struct Delay {
  double duration;  // > 0
};

using Event = std::variant<Tau, ExtIn, ExtOut, InternalComm, Delay>;

std::string event_to_string(const Event& e);
bool is_comm_event(const Event& e);
bool is_delay_event(const Event& e);

struct FlowSample {
  double t;
  State state;  // state.now() == t
};

// One maximal stretch produced by a single transition. Point segments
// (t0 == t1) carry exactly one sample.
struct FlowSegment {
  double t0 = 0;
  double t1 = 0;
  std::vector<FlowSample> samples;
};

// Piecewise trajectory over a closed interval. Segments tile the domain;
// several point segments may sit at the same instant (discrete steps).
class Flow {
 public:
  Flow() = default;
  static Flow point(const State& s);
  static Flow from_samples(std::vector<FlowSample> samples);  // one segment

  bool empty() const { return segments_.empty(); }
  double start() const;
  double end() const;
  const std::vector<FlowSegment>& segments() const { return segments_; }

  // Value at t: the latest sample at or before t, from the rightmost segment
  // covering t. Flows are piecewise sampled; no interpolation.
  const State& at(double t) const;

  size_t sample_count() const;
  void for_each_sample(const std::function<void(const FlowSample&)>& fn) const;

  friend Flow flow_concat(const Flow& h1, const Flow& h2);
  friend Flow flow_union(const Flow& h1, const Flow& h2);
  void append_segment(FlowSegment seg);  // validates adjacency

 private:
  std::vector<FlowSegment> segments_;
};

// Concatenation: h1 on [r1, r2), h2 at and after r2. Domains must be adjacent.
Flow flow_concat(const Flow& h1, const Flow& h2);

// Pointwise disjoint union of flows over the same domain and sample grid.
Flow flow_union(const Flow& h1, const Flow& h2);

}  // namespace hcspb
