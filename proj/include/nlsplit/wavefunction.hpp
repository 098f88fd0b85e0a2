#pragma once

#include <span>
#include <vector>

#include "nlsplit/grid.hpp"

namespace nlsplit {

/// Multi-component complex field sampled on a Grid. Component c occupies the
/// contiguous slice [c*total, (c+1)*total) of the value buffer.
class WaveFunction {
  public:
    WaveFunction(Grid grid, int components);

    const Grid& grid() const { return grid_; }
    int components() const { return components_; }
    std::int64_t points() const { return grid_.total; }

    std::span<Complex> component(int c);
    std::span<const Complex> component(int c) const;

    std::vector<Complex>& values() { return values_; }
    const std::vector<Complex>& values() const { return values_; }

  private:
    Grid grid_;
    int components_;
    std::vector<Complex> values_;
};

/// sqrt( sum_{c,points} |psi|^2 * dV )
double norm(const WaveFunction& psi);

/// Per-component norms; total norm squared is the sum of their squares.
std::vector<double> component_norms(const WaveFunction& psi);

bool all_finite(const WaveFunction& psi);

double max_abs(const WaveFunction& psi);

}  // namespace nlsplit
