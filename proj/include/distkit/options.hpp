#pragma once

#include <cstdint>

#include "distkit/error.hpp"

namespace distkit {

/// Numeric knobs shared by every operation that approximates.
///
/// `trunc_quantile` is the total tail mass discarded when an unbounded
/// support is cut to a finite interval (half on each side). Grids built by
/// the FFT convolution use `2^grid_exponent` cells.
struct Options {
  double trunc_quantile = 1e-5;
  int grid_exponent = 12;
  std::uint64_t rng_seed = 20240611;
  double tv_rel_tol = 1e-8;
  std::size_t kolm_grid_size = 100000;

  void validate() const {
    if (!(trunc_quantile > 0.0 && trunc_quantile < 0.5)) {
      throw DomainError("trunc_quantile must lie in (0, 0.5)");
    }
    if (grid_exponent < 5 || grid_exponent > 26) {
      throw DomainError("grid_exponent must lie in [5, 26]");
    }
    if (!(tv_rel_tol > 0.0)) {
      throw DomainError("tv_rel_tol must be positive");
    }
    if (kolm_grid_size < 2) {
      throw DomainError("kolm_grid_size must be at least 2");
    }
  }

  std::size_t grid_cells() const { return std::size_t{1} << grid_exponent; }
};

}  // namespace distkit
