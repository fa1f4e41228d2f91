#include "nematic/grid.hpp"

#include <stdexcept>
#include <string>

namespace nematic {

Grid::Grid(int n) : n_(n) {
  if (n < 8 || n % 2 != 0) {
    throw std::invalid_argument("grid size must be even and >= 8, got " + std::to_string(n));
  }
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": grid size mismatch (" +
                                std::to_string(a.n()) + " vs " + std::to_string(b.n()) + ")");
  }
}

}  // namespace nematic
