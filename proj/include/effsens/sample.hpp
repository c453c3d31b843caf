#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "effsens/error.hpp"

namespace effsens {

/// Non-owning view of paired observations (x_i, y_i).
class SampleView {
 public:
  SampleView() = default;
  SampleView(std::span<const double> x, std::span<const double> y) : x_(x), y_(y) {
    if (x.size() != y.size()) throw ArgumentError("sample columns differ in length");
  }

  std::size_t size() const { return x_.size(); }
  bool empty() const { return x_.empty(); }
  std::span<const double> x() const { return x_; }
  std::span<const double> y() const { return y_; }
  double x(std::size_t i) const { return x_[i]; }
  double y(std::size_t i) const { return y_[i]; }

  SampleView subview(std::size_t offset, std::size_t count) const {
    return {x_.subspan(offset, count), y_.subspan(offset, count)};
  }

 private:
  std::span<const double> x_;
  std::span<const double> y_;
};

/// Owning i.i.d. sample of (X, Y) pairs.
struct SampleSet {
  std::vector<double> x;
  std::vector<double> y;

  std::size_t size() const { return x.size(); }
  SampleView view() const { return {x, y}; }
};

}  // namespace effsens
