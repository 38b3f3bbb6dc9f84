#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ecoprobe/domain.hpp"
#include "ecoprobe/trace_io.hpp"

namespace ecoprobe::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    const auto base = std::filesystem::temp_directory_path();
    for (;;) {
      path_ = base / ("ecoprobe-test-" + std::to_string(rd()) + std::to_string(rd()));
      if (std::filesystem::create_directory(path_)) break;
    }
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
}

// Exact two-sided signed-rank p by enumerating all 2^n sign assignments of the ranks
// 1..n. Independent of the library: no DP, no tail helpers. Requires untied, nonzero
// differences.
inline double brute_force_wilcoxon_p(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> d;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != y[i]) d.push_back(x[i] - y[i]);
  }
  const std::size_t n = d.size();
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::fabs(d[a]) < std::fabs(d[b]);
  });
  long observed = 0;
  for (std::size_t r = 0; r < n; ++r) {
    if (d[idx[r]] > 0) observed += static_cast<long>(r + 1);
  }
  const long total = static_cast<long>(n * (n + 1) / 2);
  const long mirrored = total - observed;
  const long lo = std::min(observed, mirrored);
  const long hi = std::max(observed, mirrored);
  std::uint64_t extreme = 0;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    long w = 0;
    for (std::size_t r = 0; r < n; ++r) {
      if (mask & (std::uint64_t{1} << r)) w += static_cast<long>(r + 1);
    }
    if (w <= lo || w >= hi) ++extreme;
  }
  return std::min(1.0, static_cast<double>(extreme) / static_cast<double>(count));
}

// Random paired sample whose differences are nonzero and have distinct magnitudes.
inline void untied_pairs(std::mt19937_64& rng, std::size_t n, std::vector<double>& x,
                         std::vector<double>& y) {
  std::vector<int> mags(40);
  for (int i = 0; i < 40; ++i) mags[i] = i + 1;
  std::shuffle(mags.begin(), mags.end(), rng);
  std::bernoulli_distribution sign(0.5);
  std::uniform_int_distribution<int> base(0, 100);
  x.clear();
  y.clear();
  for (std::size_t i = 0; i < n; ++i) {
    const double b = base(rng);
    const double diff = (sign(rng) ? 1.0 : -1.0) * (mags[i] * 0.25);
    x.push_back(b + diff);
    y.push_back(b);
  }
}

inline Trip make_trip(const std::string& id, UnixMs start, double miles,
                      TravelMode mode = TravelMode::automotive) {
  Trip t;
  t.id = id;
  t.start_ts = start;
  t.end_ts = start + 600'000;
  t.origin = GeoPoint::make(37.0, -122.0);
  t.destination = GeoPoint::make(37.0, -122.0);
  t.distance_miles = miles;
  t.mode = mode;
  return t;
}

}  // namespace ecoprobe::testing
