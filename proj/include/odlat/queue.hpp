#ifndef ODLAT_QUEUE_HPP_
#define ODLAT_QUEUE_HPP_

#include <string>

#include "odlat/dist.hpp"

namespace odlat {

// Queue regime between camera arrivals A and detector service intervals S.
//   Case1: min(A) > max(S), the detector always waits for frames.
//   Case2: max(A) < min(S), the queue is always full.
//   Case3: anything else, including ties.
enum class QueueCase { kCase1, kCase2, kCase3 };

std::string to_string(QueueCase c);

struct QueueDelayBounds {
  QueueCase queue_case;
  Millis d_queue_min;
  Millis d_queue_max;
};

QueueCase classify(const DelayDist &arrivals, const DelayDist &services);

// Q = 0 means no queue (on-demand capture) and yields [0, 0].
QueueDelayBounds queue_delay_bounds(QueueCase queue_case, int queue_size, Millis s_min,
                                    Millis s_max, Millis d_tran_min, Millis d_tran_max,
                                    Millis cycle_time, Millis urb_period);

}  // namespace odlat

#endif  // ODLAT_QUEUE_HPP_
