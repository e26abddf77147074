#include "ellband/residual.hpp"

#include <algorithm>
#include <cmath>

namespace ellband {

double schrodinger_residual(const std::function<double(double)>& potential,
                            const std::function<double(double)>& psi,
                            double energy, double period, int grid_points) {
  const double h = period / 4096.0;
  double worst = 0.0;
  double peak = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double x = period * i / grid_points;
    const double p0 = psi(x);
    const double second =
        (-psi(x - 2.0 * h) + 16.0 * psi(x - h) - 30.0 * p0 + 16.0 * psi(x + h) -
         psi(x + 2.0 * h)) /
        (12.0 * h * h);
    worst = std::max(worst, std::abs(-second + (potential(x) - energy) * p0));
    peak = std::max(peak, std::abs(p0));
  }
  return worst / peak;
}

}  // namespace ellband
