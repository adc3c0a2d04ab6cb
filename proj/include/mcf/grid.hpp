#pragma once

#include <cstdint>
#include <vector>

namespace mcf {

// Uniform n x n cell-centered grid on the periodic box [0,L)^2.
struct Grid {
    int n = 0;
    double L = 1.0;
    double h() const { return L / n; }
    double x(int i) const { return (i + 0.5) * L / n; }
    size_t size() const { return static_cast<size_t>(n) * n; }
    size_t idx(int ix, int iy) const { return static_cast<size_t>(iy) * n + ix; }
};

// channel-major storage: u[c * n*n + iy * n + ix]
struct GridField {
    Grid grid;
    int channels = 2;
    double eps = 0.0;
    double t = 0.0;
    std::vector<double> u;
    std::vector<std::uint8_t> region; // optional provenance tags (initial data)

    GridField() = default;
    GridField(const Grid& g, int ch, double e) : grid(g), channels(ch), eps(e), u(g.size() * ch, 0.0) {}
    double* channel(int c) { return u.data() + c * grid.size(); }
    const double* channel(int c) const { return u.data() + c * grid.size(); }
    void get(size_t k, double* out) const {
        for (int c = 0; c < channels; ++c) out[c] = u[c * grid.size() + k];
    }
    void set(size_t k, const double* v) {
        for (int c = 0; c < channels; ++c) u[c * grid.size() + k] = v[c];
    }
};

// Points of the box whose value is held fixed / excluded from integrals (periodic wrap artifacts).
struct FrameMask {
    double frame_x = 0.0, frame_y = 0.0; // reset width from the box boundary
    double mask_x = 0.0, mask_y = 0.0;   // diagnostics exclude this band
    bool in_frame(const Grid& g, int ix, int iy) const;
    bool in_mask(const Grid& g, int ix, int iy) const;
    bool active() const { return frame_x > 0 || frame_y > 0; }
};

} // namespace mcf
