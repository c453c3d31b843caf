#pragma once

#include <cmath>
#include <sstream>

#include "effsens/error.hpp"

namespace effsens {

/// Closed interval [lo, hi] with lo < hi.
class Interval {
 public:
  Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
      std::ostringstream os;
      os << "invalid interval [" << lo << ", " << hi << "]";
      throw ArgumentError(os.str());
    }
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double width() const { return hi_ - lo_; }
  double mid() const { return 0.5 * (lo_ + hi_); }
  bool contains(double x) const { return x >= lo_ && x <= hi_; }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_;
  double hi_;
};

/// The rectangle [a,b] x [c,d] carrying densities, bases and quadrature.
struct Domain {
  Interval x;
  Interval y;

  double area() const { return x.width() * y.width(); }
  bool contains(double px, double py) const { return x.contains(px) && y.contains(py); }
  friend bool operator==(const Domain&, const Domain&) = default;
};

}  // namespace effsens
