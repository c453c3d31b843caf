#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <unistd.h>

#include "effsens/orthobasis.hpp"
#include "effsens/quadfunc.hpp"
#include "effsens/rng.hpp"
#include "effsens/sample.hpp"

namespace testing_support {

using namespace effsens;

/// Rejection sampler on a rectangle for a density bounded by f_max.
inline SampleSet rejection_sample(const std::function<double(double, double)>& f, double f_max,
                                  const Domain& d, std::size_t n, std::uint64_t seed) {
  PhiloxStream rng(seed, streams::kRejection);
  SampleSet s;
  s.x.reserve(n);
  s.y.reserve(n);
  while (s.x.size() < n) {
    const double x = d.x.lo() + d.x.width() * rng.next_uniform();
    const double y = d.y.lo() + d.y.width() * rng.next_uniform();
    if (f_max * rng.next_uniform() <= f(x, y)) {
      s.x.push_back(x);
      s.y.push_back(y);
    }
  }
  return s;
}

/// Literal double loop over ordered pairs j != k, with s_j and t_k built
/// directly from the basis and a plain Gauss rule in u.
inline double brute_force_theta(SampleView main, const SymmetricKernel& eta,
                                const QuadFuncContext& ctx, const SquareMatrix& c) {
  const std::size_t n = main.size();
  const std::size_t m = ctx.m();
  const auto& pairs = ctx.index_set.pairs();
  const QuadratureRule1D u_rule = gauss_rule(48, ctx.domain.y);
  std::vector<std::vector<double>> s(n, std::vector<double>(m)), t(n, std::vector<double>(m));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      s[j][i] = tensor_eval(ctx.bx, ctx.by, pairs[i], main.x(j), main.y(j));
      double acc = 0.0;
      for (std::size_t g = 0; g < u_rule.size(); ++g)
        acc += u_rule.weights[g] * tensor_eval(ctx.bx, ctx.by, pairs[i], main.x(j), u_rule.nodes[g]) *
               eta(main.x(j), u_rule.nodes[g], main.y(j));
      t[j][i] = acc;
    }
  }
  double lin = 0.0, bil = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      if (j == k) continue;
      for (std::size_t i = 0; i < m; ++i) {
        lin += s[j][i] * t[k][i];
        for (std::size_t i2 = 0; i2 < m; ++i2) bil += s[j][i] * s[k][i2] * c(i, i2);
      }
    }
  const double nn = static_cast<double>(n) * static_cast<double>(n - 1);
  return 2.0 * lin / nn - bil / nn;
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("effsens_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    const std::string p = file(name);
    std::ofstream(p) << text;
    return p;
  }

 private:
  std::filesystem::path path_;
};

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace testing_support
