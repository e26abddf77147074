#pragma once

#include <functional>

namespace ellband {

// Relative Schroedinger residual max |-psi'' + (V - E) psi| / max |psi| over
// a uniform grid of one period, with the second derivative taken by the
// fourth-order five-point stencil at spacing h = period / 4096.
double schrodinger_residual(const std::function<double(double)>& potential,
                            const std::function<double(double)>& psi,
                            double energy, double period, int grid_points = 1000);

}  // namespace ellband
