#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace etcsim {

enum class ChannelKind { self_state, neighbor_state, input };
const char* channel_kind_name(ChannelKind kind);

struct ChannelLabel {
  std::size_t agent = 0;                        // 1-based, as reported
  ChannelKind kind = ChannelKind::self_state;
  std::size_t level = 0;                        // 1..n for states, 0 for input
};

// Zero-order-hold transmission channel. Fires when the monitored signal
// drifts strictly beyond `threshold` from the held value; the first
// evaluation always fires so every consumer has an initial value.
struct TriggerChannel {
  double threshold = 0.0;
  double held_value = 0.0;
  bool primed = false;
  std::vector<double> event_times;
  std::vector<double> event_values;
  ChannelLabel label;
};

// Returns (transmitted value, fired).
std::pair<double, bool> check_and_update(TriggerChannel& ch, double current,
                                         double t);

struct InterEventStats {
  std::size_t count = 0;
  double min_gap = 0.0;   // +inf when fewer than two events in the horizon
  double mean_gap = 0.0;  // +inf when fewer than two events in the horizon
};

InterEventStats inter_event_stats(const TriggerChannel& ch, double t_start,
                                  double t_end);

// Theoretical minimum inter-event time threshold / rate_bound. Any observed
// gap below this indicates the rate bound was underestimated, never a true
// continuous-time violation.
double zeno_certificate(const TriggerChannel& ch, double rate_bound);

}  // namespace etcsim
