#include "nlshear/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nlshear {

Grid2D::Grid2D(int nx, int ny, double lx, double ly) : nx_(nx), ny_(ny), lx_(lx), ly_(ly) {
    if (nx < 4 || ny < 4 || nx % 2 != 0 || ny % 2 != 0)
        throw std::invalid_argument("grid: nx and ny must be even and >= 4 (got " + std::to_string(nx) + "x" +
                                    std::to_string(ny) + ")");
    if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly))
        throw std::invalid_argument("grid: lx and ly must be positive and finite");
}

} // namespace nlshear
