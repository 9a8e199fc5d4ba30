#include "odlat/dist.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace odlat {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

bool parse_double(std::string_view text, double &out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char *begin = t.data();
  const char *end = t.data() + t.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

// Sorts by value and folds points that are within kValueTolerance of the
// first value of their run.
std::vector<DistPoint> merge_sorted(std::vector<DistPoint> pts) {
  std::sort(pts.begin(), pts.end(),
            [](const DistPoint &a, const DistPoint &b) { return a.value < b.value; });
  std::vector<DistPoint> out;
  out.reserve(pts.size());
  for (const auto &p : pts) {
    if (!out.empty() && p.value - out.back().value <= kValueTolerance) {
      out.back().prob += p.prob;
    } else {
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw Error("Rng::below: empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x < limit) return x % n;
  }
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

DelayDist::DelayDist(std::vector<DistPoint> points) {
  if (points.empty()) throw Error("distribution has no support points");
  for (const auto &p : points) {
    if (!std::isfinite(p.value)) throw Error("distribution value is not finite");
    if (p.value < -kValueTolerance)
      throw Error("negative delay value " + fmt_double(p.value) + " ms in distribution");
    if (!std::isfinite(p.prob) || p.prob <= 0.0 || p.prob > 1.0 + kRejectDrift)
      throw Error("probability " + fmt_double(p.prob) + " outside (0, 1]");
  }
  points_ = merge_sorted(std::move(points));
  for (auto &p : points_) p.value = std::max(p.value, 0.0);

  double total = 0.0;
  for (const auto &p : points_) total += p.prob;
  const double drift = std::abs(total - 1.0);
  if (drift > kRejectDrift)
    throw Error("probabilities sum to " + fmt_double(total) + ", expected 1");
  if (drift > kRenormalizeDrift) {
    for (auto &p : points_) p.prob /= total;
  }

  cumulative_.reserve(points_.size());
  double acc = 0.0;
  for (const auto &p : points_) {
    acc += p.prob;
    cumulative_.push_back(acc);
  }
  cumulative_.back() = 1.0;
}

DelayDist DelayDist::constant(Millis value) { return DelayDist({{value, 1.0}}); }

DelayDist DelayDist::uniform_grid(Millis lo, Millis hi, Millis step) {
  if (!(step > 0.0)) throw Error("uniform_grid: step must be positive");
  if (hi < lo) throw Error("uniform_grid: hi < lo");
  std::vector<Millis> values;
  for (Millis v = lo; v < hi - kValueTolerance; v = lo + step * static_cast<double>(values.size()))
    values.push_back(v);
  values.push_back(hi);
  const double p = 1.0 / static_cast<double>(values.size());
  std::vector<DistPoint> pts;
  pts.reserve(values.size());
  for (Millis v : values) pts.push_back({v, p});
  return DelayDist(std::move(pts));
}

Millis DelayDist::mean() const {
  double m = 0.0;
  for (const auto &p : points_) m += p.value * p.prob;
  return m;
}

Millis DelayDist::quantile(double q) const {
  if (!(q >= 0.0 && q <= 1.0)) throw Error("quantile level must lie in [0, 1]");
  const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), q - 1e-12);
  const auto idx = static_cast<std::size_t>(std::distance(cumulative_.begin(), it));
  return points_[std::min(idx, points_.size() - 1)].value;
}

double DelayDist::cdf(Millis x) const {
  const auto it = std::upper_bound(
      points_.begin(), points_.end(), x + kValueTolerance,
      [](double v, const DistPoint &p) { return v < p.value; });
  if (it == points_.begin()) return 0.0;
  return cumulative_[static_cast<std::size_t>(std::distance(points_.begin(), it)) - 1];
}

bool DelayDist::approx_equal(const DelayDist &other, double tol) const {
  if (points_.size() != other.points_.size()) return false;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (std::abs(points_[i].value - other.points_[i].value) > tol) return false;
    if (std::abs(points_[i].prob - other.points_[i].prob) > tol) return false;
  }
  return true;
}

DelayDist from_samples(std::span<const double> samples, Millis bin_width) {
  if (samples.empty()) throw Error("from_samples: no samples");
  if (!(bin_width > 0.0) || !std::isfinite(bin_width))
    throw Error("from_samples: bin width must be positive");
  std::map<long long, std::size_t> counts;
  for (double v : samples) {
    if (!std::isfinite(v)) throw Error("from_samples: non-finite sample");
    if (v < 0.0) throw Error("from_samples: negative sample " + fmt_double(v));
    counts[static_cast<long long>(std::floor(v / bin_width))]++;
  }
  std::vector<DistPoint> pts;
  pts.reserve(counts.size());
  const double n = static_cast<double>(samples.size());
  for (const auto &[bin, count] : counts)
    pts.push_back({static_cast<double>(bin) * bin_width, static_cast<double>(count) / n});
  return DelayDist(std::move(pts));
}

DelayDist convolve(const DelayDist &a, const DelayDist &b) {
  std::vector<DistPoint> pts;
  pts.reserve(a.size() * b.size());
  for (const auto &x : a.points())
    for (const auto &y : b.points()) pts.push_back({x.value + y.value, x.prob * y.prob});
  return DelayDist(merge_sorted(std::move(pts)));
}

DelayDist max_combine(std::span<const DelayDist> dists) {
  if (dists.empty()) throw Error("max_combine: empty input list");
  if (dists.size() == 1) return dists.front();

  std::vector<DistPoint> support;
  for (const auto &d : dists)
    for (const auto &p : d.points()) support.push_back({p.value, 0.0});
  support = merge_sorted(std::move(support));

  // P(max <= v) is the product of the marginal CDFs.
  std::vector<DistPoint> pts;
  double prev = 0.0;
  for (const auto &s : support) {
    double joint = 1.0;
    for (const auto &d : dists) joint *= d.cdf(s.value);
    const double mass = joint - prev;
    if (mass > 0.0) pts.push_back({s.value, mass});
    prev = joint;
  }
  return DelayDist(std::move(pts));
}

DelayDist shift(const DelayDist &d, Millis offset) {
  if (d.min() + offset < -kValueTolerance)
    throw Error("shift by " + fmt_double(offset) + " ms would produce a negative delay");
  std::vector<DistPoint> pts = d.points();
  for (auto &p : pts) p.value += offset;
  return DelayDist(std::move(pts));
}

DistSummary summarize(const DelayDist &d) {
  return {d.min(), d.max(), d.mean(), d.quantile(0.5), d.quantile(0.99)};
}

Millis sample(const DelayDist &d, Rng &rng) {
  if (d.points_.size() == 1) return d.points_.front().value;
  const double u = rng.uniform01();
  const auto it = std::upper_bound(d.cumulative_.begin(), d.cumulative_.end(), u);
  const auto idx = static_cast<std::size_t>(std::distance(d.cumulative_.begin(), it));
  return d.points_[std::min(idx, d.points_.size() - 1)].value;
}

DelayDist parse_dist_literal(std::string_view text) {
  std::vector<DistPoint> pts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                         : comma - start);
    const std::string entry = trim(item);
    if (entry.empty()) throw Error("empty entry in distribution literal '" + std::string(text) + "'");
    const auto colon = entry.find(':');
    double value = 0.0;
    double prob = 1.0;
    if (colon == std::string::npos) {
      if (!parse_double(entry, value)) throw Error("bad distribution entry '" + entry + "'");
    } else if (!parse_double(std::string_view(entry).substr(0, colon), value) ||
               !parse_double(std::string_view(entry).substr(colon + 1), prob)) {
      throw Error("bad distribution entry '" + entry + "' (expected value:probability)");
    }
    pts.push_back({value, prob});
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return DelayDist(std::move(pts));
}

std::string format_dist_literal(const DelayDist &d) {
  std::string out;
  for (const auto &p : d.points()) {
    if (!out.empty()) out += ", ";
    out += fmt_double(p.value) + ":" + fmt_double(p.prob);
  }
  return out;
}

std::vector<double> load_samples_csv(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open profile file '" + path.string() + "'");
  std::vector<double> samples;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto comma = t.find(',');
    if (comma != std::string::npos) t = trim(std::string_view(t).substr(0, comma));
    double v = 0.0;
    if (!parse_double(t, v)) {
      if (samples.empty() && lineno == 1) continue;  // header row
      throw Error(path.string() + ":" + std::to_string(lineno) + ": not a number: '" + t + "'");
    }
    samples.push_back(v);
  }
  if (samples.empty()) throw Error("profile file '" + path.string() + "' holds no samples");
  return samples;
}

}  // namespace odlat
