#include "mcf/grid.hpp"

#include <algorithm>

namespace mcf {

namespace {

double wall(const Grid& g, int i) {
    double x = g.x(i);
    return std::min(x, g.L - x);
}

} // namespace

bool FrameMask::in_frame(const Grid& g, int ix, int iy) const {
    return (frame_x > 0 && wall(g, ix) < frame_x) || (frame_y > 0 && wall(g, iy) < frame_y);
}

bool FrameMask::in_mask(const Grid& g, int ix, int iy) const {
    return !(mask_x > 0 && wall(g, ix) < mask_x) && !(mask_y > 0 && wall(g, iy) < mask_y);
}

} // namespace mcf
