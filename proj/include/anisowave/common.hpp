#pragma once

#include <complex>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace anisowave {

using cplx = std::complex<double>;

// Error taxonomy. Every failure mode surfaced by the library maps onto one
// of these; the CLI translates them into exit code 2 (config) or 1 (check).
struct SingularMatrix : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct LogarithmUnavailable : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConvergenceFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ZeroVector : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GridMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CoverageGap : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ProfileDegenerate : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AliasWarning : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyBallRange : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonConvergent : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidParams : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline int max_threads() {
  if (const char* env = std::getenv("ANISOWAVE_THREADS")) {
    int t = std::atoi(env);
    if (t >= 1) return t;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Parallel map over [0, count). Work items must write to disjoint slots;
// any reduction happens serially afterwards so results do not depend on
// the thread count.
inline void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& body) {
  const int threads = max_threads();
  if (threads <= 1 || count < 2) {
    for (std::int64_t i = 0; i < count; ++i) body(i);
    return;
  }
  const int used = static_cast<int>(std::min<std::int64_t>(threads, count));
  std::vector<std::thread> pool;
  pool.reserve(used);
  for (int t = 0; t < used; ++t) {
    pool.emplace_back([&, t]() {
      for (std::int64_t i = t; i < count; i += used) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

struct FitLine {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Least-squares line through (x_i, y_i).
inline FitLine fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  FitLine out;
  const std::size_t n = xs.size();
  if (n < 2 || ys.size() != n) return out;
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx <= 0) return out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  out.r2 = (syy > 0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  return out;
}

inline double relative_drift(double a, double b) {
  const double denom = std::max(std::abs(a), std::abs(b));
  return denom == 0 ? 0.0 : std::abs(a - b) / denom;
}

}  // namespace anisowave
