#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace wlsapprox {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      c_ += (sum_ - t) + v;
    else
      c_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

struct SampleMoments {
  double mean = 0.0;
  double std_dev = 0.0;  ///< unbiased sample standard deviation
  double std_err = 0.0;  ///< std_dev / sqrt(count)
  std::size_t count = 0;
};

/// Two-pass compensated mean and standard error; independent of evaluation order
/// only through the fixed order of `values`.
inline SampleMoments moments(std::span<const double> values) noexcept {
  SampleMoments out;
  out.count = values.size();
  if (values.empty()) return out;
  CompensatedSum s;
  for (double v : values) s.add(v);
  out.mean = s.value() / static_cast<double>(values.size());
  if (values.size() > 1) {
    CompensatedSum ss;
    for (double v : values) ss.add((v - out.mean) * (v - out.mean));
    out.std_dev = std::sqrt(ss.value() / static_cast<double>(values.size() - 1));
    out.std_err = out.std_dev / std::sqrt(static_cast<double>(values.size()));
  }
  return out;
}

}  // namespace wlsapprox
