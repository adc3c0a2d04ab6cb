#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace mcf {

using Point = std::vector<double>;

struct SimplexGeometry {
    int n_phases = 3;
    std::vector<Point> vertices;
    double r_u = 0.25;
    double beta_n = 0.0;

    int dim() const { return n_phases - 1; }
    Point barycenter() const;
    // Largest admissible sector angle pi/(6(N-2)); zero for N = 2.
    double beta_max() const;
};

// T_{i,j} sector with the nearer endpoint (T^near_far), plus U_i / N_{i,j} membership.
// Indices are zero-based; edge is stored with i < j.
struct RegionLabel {
    int i = 0, j = 1;
    int near = 0, far = 1;
    std::optional<int> ball;
    std::optional<std::pair<int, int>> tube;
};

double default_beta_n(int n_phases);

SimplexGeometry build_simplex(int n_phases, double r_u, double beta_n);
SimplexGeometry build_simplex(int n_phases);

// Barycentric coordinates w.r.t. the vertices (sum to one).
std::vector<double> barycentric(const SimplexGeometry& g, const Point& u);
bool in_simplex(const SimplexGeometry& g, const Point& u, double tol = 1e-9);

// Distance to segment [alpha_i, alpha_j] and the arclength parameter of the foot.
double dist_edge(const SimplexGeometry& g, const Point& u, int i, int j, double* foot_r = nullptr);

RegionLabel classify(const SimplexGeometry& g, const Point& u);
Point project_edge(const SimplexGeometry& g, const Point& u, int i, int j);
Point project_radial(const SimplexGeometry& g, const Point& u, int i, int j, bool* clamped = nullptr);
double angle_beta(const SimplexGeometry& g, const Point& u, int i, int j);

} // namespace mcf
