#include "etcsim/trigger.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "etcsim/error.hpp"

namespace etcsim {

const char* channel_kind_name(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::self_state: return "self_state";
    case ChannelKind::neighbor_state: return "neighbor_state";
    case ChannelKind::input: return "input";
  }
  return "unknown";
}

std::pair<double, bool> check_and_update(TriggerChannel& ch, double current,
                                         double t) {
  if (!(ch.threshold > 0.0))
    raise(ErrorCode::invalid_argument, "trigger threshold must be positive");
  if (!ch.event_times.empty() && t < ch.event_times.back())
    raise(ErrorCode::time_regression,
          "trigger evaluated at t=" + std::to_string(t) +
              " before last event at t=" + std::to_string(ch.event_times.back()));

  const bool fire = !ch.primed || std::abs(current - ch.held_value) > ch.threshold;
  if (!fire) return {ch.held_value, false};

  if (!ch.event_times.empty() && t == ch.event_times.back())
    raise(ErrorCode::time_regression,
          "trigger fired twice at t=" + std::to_string(t));
  ch.primed = true;
  ch.held_value = current;
  ch.event_times.push_back(t);
  ch.event_values.push_back(current);
  return {current, true};
}

InterEventStats inter_event_stats(const TriggerChannel& ch, double t_start,
                                  double t_end) {
  if (!(t_start <= t_end))
    raise(ErrorCode::invalid_argument, "inter_event_stats: empty horizon");

  InterEventStats stats;
  double prev = 0.0;
  bool have_prev = false;
  double gap_sum = 0.0;
  double gap_min = std::numeric_limits<double>::infinity();
  std::size_t gap_count = 0;
  for (double t : ch.event_times) {
    if (t < t_start || t > t_end) continue;
    ++stats.count;
    if (have_prev) {
      const double gap = t - prev;
      gap_sum += gap;
      gap_min = std::min(gap_min, gap);
      ++gap_count;
    }
    prev = t;
    have_prev = true;
  }
  if (gap_count == 0) {
    stats.min_gap = std::numeric_limits<double>::infinity();
    stats.mean_gap = std::numeric_limits<double>::infinity();
  } else {
    stats.min_gap = gap_min;
    stats.mean_gap = gap_sum / static_cast<double>(gap_count);
  }
  return stats;
}

double zeno_certificate(const TriggerChannel& ch, double rate_bound) {
  if (!(rate_bound > 0.0))
    raise(ErrorCode::zero_rate_bound,
          "zeno_certificate: rate bound must be positive");
  return ch.threshold / rate_bound;
}

}  // namespace etcsim
