#pragma once

#include <cstddef>

namespace nematic {

// Uniform n x n collocation grid on the periodic unit square (0,1)^2.
// Point (i, j) sits at x1 = i/n, x2 = j/n and is stored row-major at i*n + j.
class Grid {
 public:
  // Throws std::invalid_argument unless n is even and n >= 8.
  explicit Grid(int n);

  int n() const noexcept { return n_; }
  double dx() const noexcept { return 1.0 / n_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_) * n_; }
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * n_ + j;
  }
  double coordinate(int i) const noexcept { return i * dx(); }

  // Largest wavenumber magnitude kept by the 2/3 rule: max(|k1|,|k2|) <= n/3.
  int dealias_cutoff() const noexcept { return n_ / 3; }

  bool operator==(const Grid&) const = default;

 private:
  int n_;
};

// Throws std::invalid_argument naming `what` when the grids differ.
void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace nematic
