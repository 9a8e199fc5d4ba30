#include "doctest.h"
#include "odlat/queue.hpp"

using namespace odlat;

TEST_CASE("queue case classification") {
  CHECK(classify(DelayDist::constant(48), DelayDist::constant(40)) == QueueCase::kCase1);
  CHECK(classify(DelayDist({{32, 0.5}, {36, 0.5}}), DelayDist({{150, 0.5}, {170, 0.5}})) ==
        QueueCase::kCase2);
  CHECK(classify(DelayDist::constant(33), DelayDist::constant(33)) == QueueCase::kCase3);
  CHECK(classify(DelayDist({{32, 0.5}, {36, 0.5}}), DelayDist::constant(36)) == QueueCase::kCase3);
  CHECK(classify(DelayDist({{32, 0.5}, {36, 0.5}}), DelayDist({{20, 0.5}, {34, 0.5}})) ==
        QueueCase::kCase3);
  CHECK(to_string(QueueCase::kCase2) == "case2");
}

TEST_CASE("queue delay bounds") {
  const double c = 100.0 / 3;
  QueueDelayBounds q = queue_delay_bounds(QueueCase::kCase2, 4, 150, 163, 28.875, 32.875, c, 4);
  CHECK(q.d_queue_max == doctest::Approx(627.125));
  CHECK(q.d_queue_min == doctest::Approx(533.79).epsilon(1e-4));

  q = queue_delay_bounds(QueueCase::kCase1, 4, 150, 163, 28.875, 32.875, c, 4);
  CHECK(q.d_queue_min == 0.0);
  CHECK(q.d_queue_max == 0.0);

  q = queue_delay_bounds(QueueCase::kCase3, 4, 150, 163, 28.875, 32.875, c, 4);
  CHECK(q.d_queue_min == 0.0);
  CHECK(q.d_queue_max == doctest::Approx(627.125));

  // Small Q: the lower bound clamps at zero.
  q = queue_delay_bounds(QueueCase::kCase2, 1, 40, 45, 28.875, 32.875, c, 4);
  CHECK(q.d_queue_min == 0.0);

  for (QueueCase k : {QueueCase::kCase1, QueueCase::kCase2, QueueCase::kCase3}) {
    q = queue_delay_bounds(k, 0, 150, 163, 28.875, 32.875, c, 4);
    CHECK(q.d_queue_min == 0.0);
    CHECK(q.d_queue_max == 0.0);
  }
  CHECK_THROWS_AS(queue_delay_bounds(QueueCase::kCase2, -1, 1, 1, 1, 1, 1, 1), Error);
}

TEST_CASE("case2 bounds grow linearly in Q") {
  const double c = 100.0 / 3;
  for (int q = 1; q < 10; ++q) {
    const auto a = queue_delay_bounds(QueueCase::kCase2, q, 150, 163, 28.875, 32.875, c, 4);
    const auto b = queue_delay_bounds(QueueCase::kCase2, q + 1, 150, 163, 28.875, 32.875, c, 4);
    CHECK(b.d_queue_max - a.d_queue_max == doctest::Approx(163));
    CHECK(b.d_queue_min - a.d_queue_min == doctest::Approx(150));
    CHECK(a.d_queue_min <= a.d_queue_max);
  }
}
