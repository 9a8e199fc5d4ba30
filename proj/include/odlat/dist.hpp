#ifndef ODLAT_DIST_HPP_
#define ODLAT_DIST_HPP_

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace odlat {

// All delays in this library are milliseconds held in a double.
using Millis = double;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Values closer than this are the same support point.
inline constexpr double kValueTolerance = 1e-9;
// Probability mass drift that is silently renormalized vs. rejected.
inline constexpr double kRenormalizeDrift = 1e-12;
inline constexpr double kRejectDrift = 1e-6;

struct DistPoint {
  Millis value;
  double prob;

  friend bool operator==(const DistPoint &, const DistPoint &) = default;
};

// Seeded generator used by every stochastic component. Draws are produced
// from the raw 64-bit engine output so sequences do not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

// Derives independent stream seeds from a master seed (splitmix64 step).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

// A finite discrete probability distribution over non-negative delays.
//
// Support values are strictly increasing and probabilities sum to one. The
// constructor accepts unsorted points with duplicates and normalizes them;
// anything that cannot be repaired by merging and rounding-level
// renormalization is rejected with odlat::Error.
class DelayDist {
 public:
  explicit DelayDist(std::vector<DistPoint> points);

  static DelayDist constant(Millis value);
  // Equal mass on lo, lo + step, ... up to and including hi.
  static DelayDist uniform_grid(Millis lo, Millis hi, Millis step);

  const std::vector<DistPoint> &points() const { return points_; }
  std::size_t size() const { return points_.size(); }

  Millis min() const { return points_.front().value; }
  Millis max() const { return points_.back().value; }
  Millis mean() const;
  // Smallest support value whose cumulative probability reaches q.
  Millis quantile(double q) const;
  double cdf(Millis x) const;

  bool approx_equal(const DelayDist &other, double tol = 1e-9) const;

 private:
  friend Millis sample(const DelayDist &d, Rng &rng);

  std::vector<DistPoint> points_;
  std::vector<double> cumulative_;
};

struct DistSummary {
  Millis min;
  Millis max;
  Millis mean;
  Millis p50;
  Millis p99;
};

// Bins every sample to floor(v / bin_width) * bin_width and counts.
DelayDist from_samples(std::span<const double> samples, Millis bin_width = 1.0);

// Distribution of the sum of independent draws.
DelayDist convolve(const DelayDist &a, const DelayDist &b);

// Distribution of the maximum of one independent draw from each input.
DelayDist max_combine(std::span<const DelayDist> dists);

DelayDist shift(const DelayDist &d, Millis offset);

DistSummary summarize(const DelayDist &d);

Millis sample(const DelayDist &d, Rng &rng);

// "v:p, v:p, ..." as written in scenario files.
DelayDist parse_dist_literal(std::string_view text);
std::string format_dist_literal(const DelayDist &d);

// One delay sample (ms) per line; blank lines and '#' comments are skipped.
std::vector<double> load_samples_csv(const std::filesystem::path &path);

}  // namespace odlat

#endif  // ODLAT_DIST_HPP_
