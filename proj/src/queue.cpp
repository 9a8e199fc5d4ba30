#include "odlat/queue.hpp"

#include <algorithm>

namespace odlat {

std::string to_string(QueueCase c) {
  switch (c) {
    case QueueCase::kCase1:
      return "case1";
    case QueueCase::kCase2:
      return "case2";
    case QueueCase::kCase3:
      return "case3";
  }
  return "?";
}

QueueCase classify(const DelayDist &arrivals, const DelayDist &services) {
  if (arrivals.min() > services.max()) return QueueCase::kCase1;
  if (arrivals.max() < services.min()) return QueueCase::kCase2;
  return QueueCase::kCase3;
}

QueueDelayBounds queue_delay_bounds(QueueCase queue_case, int queue_size, Millis s_min,
                                    Millis s_max, Millis d_tran_min, Millis d_tran_max,
                                    Millis cycle_time, Millis urb_period) {
  if (queue_size < 0) throw Error("queue size must be >= 0");
  if (queue_size == 0 || queue_case == QueueCase::kCase1) return {queue_case, 0.0, 0.0};

  const double q = static_cast<double>(queue_size);
  // A frame entering the tail waits Q fetches; the frame cannot arrive
  // sooner than d_tran_min - MU after the cycle start that freed its slot.
  const Millis worst = std::max(0.0, q * s_max - (d_tran_min - urb_period));
  if (queue_case == QueueCase::kCase3) return {queue_case, 0.0, worst};

  const Millis best = std::max(0.0, q * s_min - (d_tran_max + cycle_time));
  return {queue_case, best, std::max(best, worst)};
}

}  // namespace odlat
