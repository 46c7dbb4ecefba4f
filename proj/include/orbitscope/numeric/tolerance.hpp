#pragma once

#include <cmath>
#include <stdexcept>

namespace orbitscope {

// Decision threshold theta = relative * scale + absolute. Values inside
// (theta / band, theta * band] are reported as ambiguous instead of decided.
struct TolerancePolicy {
  double relative = 1e-9;
  double absolute = 1e-12;
  double band = 10.0;

  double threshold(double scale) const { return relative * scale + absolute; }

  bool in_band(double value, double theta) const {
    double v = std::abs(value);
    return v > theta / band && v <= theta * band;
  }

  void validate() const {
    if (!(relative > 0) || !(absolute > 0) || !std::isfinite(relative) || !std::isfinite(absolute))
      throw std::invalid_argument("tolerance: relative and absolute must be positive and finite");
    if (!(band >= 1) || !std::isfinite(band))
      throw std::invalid_argument("tolerance: band factor must be >= 1");
  }
};

}  // namespace orbitscope
