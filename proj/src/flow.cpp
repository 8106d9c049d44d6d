#include "hcspb/flow.hpp"

#include <cmath>
#include <functional>
#include <sstream>

namespace hcspb {

namespace {
constexpr double kJoinTol = 1e-9;

std::string fmt_double(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}
}  // namespace

std::string event_to_string(const Event& e) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Tau>) return "tau";
        else if constexpr (std::is_same_v<T, ExtIn>) return x.chan + "?" + fmt_double(x.value);
        else if constexpr (std::is_same_v<T, ExtOut>) return x.chan + "!" + fmt_double(x.value);
        else if constexpr (std::is_same_v<T, InternalComm>)
          return x.chan + "#" + fmt_double(x.value);
        else return "delay " + fmt_double(x.duration);
      },
      e);
}

bool is_comm_event(const Event& e) {
  return std::holds_alternative<ExtIn>(e) || std::holds_alternative<ExtOut>(e) ||
         std::holds_alternative<InternalComm>(e);
}

bool is_delay_event(const Event& e) { return std::holds_alternative<Delay>(e); }

Flow Flow::point(const State& s) {
  FlowSegment seg;
  seg.t0 = seg.t1 = s.now();
  seg.samples.push_back({s.now(), s});
  Flow f;
  f.segments_.push_back(std::move(seg));
  return f;
}

Flow Flow::from_samples(std::vector<FlowSample> samples) {
  if (samples.empty()) fail(Errc::domain_mismatch, "flow segment needs at least one sample");
  FlowSegment seg;
  seg.t0 = samples.front().t;
  seg.t1 = samples.back().t;
  for (size_t i = 1; i < samples.size(); ++i)
    if (samples[i].t <= samples[i - 1].t)
      fail(Errc::domain_mismatch, "segment sample times must be strictly increasing");
  seg.samples = std::move(samples);
  Flow f;
  f.segments_.push_back(std::move(seg));
  return f;
}

double Flow::start() const {
  if (empty()) fail(Errc::domain_mismatch, "empty flow has no domain");
  return segments_.front().t0;
}

double Flow::end() const {
  if (empty()) fail(Errc::domain_mismatch, "empty flow has no domain");
  return segments_.back().t1;
}

const State& Flow::at(double t) const {
  if (empty() || t < start() - kJoinTol || t > end() + kJoinTol)
    fail(Errc::interval_out_of_domain, "time outside flow domain");
  // Rightmost segment whose interval contains t.
  const FlowSegment* seg = nullptr;
  for (const auto& s : segments_) {
    if (s.t0 - kJoinTol <= t && t <= s.t1 + kJoinTol) seg = &s;
    if (s.t0 > t + kJoinTol) break;
  }
  if (!seg) fail(Errc::interval_out_of_domain, "time not covered by any segment");
  const State* best = &seg->samples.front().state;
  for (const auto& sample : seg->samples) {
    if (sample.t <= t + kJoinTol) best = &sample.state;
    else break;
  }
  return *best;
}

size_t Flow::sample_count() const {
  size_t n = 0;
  for (const auto& s : segments_) n += s.samples.size();
  return n;
}

void Flow::for_each_sample(const std::function<void(const FlowSample&)>& fn) const {
  for (const auto& s : segments_)
    for (const auto& sample : s.samples) fn(sample);
}

void Flow::append_segment(FlowSegment seg) {
  if (!segments_.empty() && std::fabs(segments_.back().t1 - seg.t0) > kJoinTol)
    fail(Errc::domain_mismatch, "flow segments do not tile the domain");
  segments_.push_back(std::move(seg));
}

Flow flow_concat(const Flow& h1, const Flow& h2) {
  if (h1.empty()) return h2;
  if (h2.empty()) return h1;
  if (std::fabs(h1.end() - h2.start()) > kJoinTol)
    fail(Errc::domain_mismatch, "flow domains are not adjacent");
  Flow out = h1;
  for (const auto& seg : h2.segments_) out.segments_.push_back(seg);
  return out;
}

Flow flow_union(const Flow& h1, const Flow& h2) {
  if (h1.empty() || h2.empty()) fail(Errc::domain_mismatch, "cannot unite empty flows");
  if (std::fabs(h1.start() - h2.start()) > kJoinTol || std::fabs(h1.end() - h2.end()) > kJoinTol)
    fail(Errc::domain_mismatch, "flow domains differ in union");
  if (h1.segments_.size() != h2.segments_.size())
    fail(Errc::domain_mismatch, "flow segmentations differ in union");
  Flow out;
  for (size_t i = 0; i < h1.segments_.size(); ++i) {
    const auto& a = h1.segments_[i];
    const auto& b = h2.segments_[i];
    if (a.samples.size() != b.samples.size())
      fail(Errc::domain_mismatch, "flow sample grids differ in union");
    FlowSegment seg;
    seg.t0 = a.t0;
    seg.t1 = a.t1;
    for (size_t k = 0; k < a.samples.size(); ++k) {
      if (std::fabs(a.samples[k].t - b.samples[k].t) > kJoinTol)
        fail(Errc::domain_mismatch, "flow sample grids differ in union");
      seg.samples.push_back({a.samples[k].t, state_union(a.samples[k].state, b.samples[k].state)});
    }
    out.segments_.push_back(std::move(seg));
  }
  return out;
}

}  // namespace hcspb
