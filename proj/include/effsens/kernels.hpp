#pragma once

// Data-parallel inner loops of the estimator. Every kernel exists twice: a
// plain serial reference and an OpenMP version. Both compute each output
// element with the same arithmetic in the same order, so their results are
// bit-identical for any thread count; tests hold them to that.

#include <span>
#include <vector>

#include "effsens/density.hpp"
#include "effsens/quadfunc.hpp"

namespace effsens::kernels {

namespace serial {

void conditional_moments(const DensityEstimate& de, const ScalarFn& phi, PhiBounds bounds,
                         std::span<const double> xs, double tol,
                         std::span<ConditionalMoments> out);

void pair_vectors(SampleView main, std::span<const KernelSection> sections,
                  const QuadFuncContext& ctx, PairVectors& out);

/// g(a, b) = sum_j rows(j, a) * rows(j, b), rows row-major n x m.
void gram(std::span<const double> rows, std::size_t n, std::size_t m, SquareMatrix& g);

}  // namespace serial

namespace omp {

void conditional_moments(const DensityEstimate& de, const ScalarFn& phi, PhiBounds bounds,
                         std::span<const double> xs, double tol,
                         std::span<ConditionalMoments> out);

void pair_vectors(SampleView main, std::span<const KernelSection> sections,
                  const QuadFuncContext& ctx, PairVectors& out);

void gram(std::span<const double> rows, std::size_t n, std::size_t m, SquareMatrix& g);

}  // namespace omp

namespace detail {

// Shared per-element bodies.
void pair_vectors_row(SampleView main, std::size_t j, const KernelSection& section,
                      const QuadFuncContext& ctx, std::span<double> ax, std::span<double> ay,
                      std::span<double> r, PairVectors& out);
double gram_entry(std::span<const double> cols, std::size_t n, std::size_t a, std::size_t b);
std::vector<double> transpose(std::span<const double> rows, std::size_t n, std::size_t m);
void check_pair_inputs(SampleView main, std::span<const KernelSection> sections,
                       const QuadFuncContext& ctx, PairVectors& out);

}  // namespace detail

}  // namespace effsens::kernels
