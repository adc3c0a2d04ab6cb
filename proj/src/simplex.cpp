#include "mcf/simplex.hpp"

#include "mcf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace mcf {

namespace {

constexpr double kTieTol = 1e-9;

double dot(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

double dist(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(s);
}

} // namespace

double default_beta_n(int n_phases) {
    return n_phases >= 3 ? std::numbers::pi / (12.0 * (n_phases - 2)) : 0.0;
}

Point SimplexGeometry::barycenter() const {
    Point c(dim(), 0.0);
    for (const auto& a : vertices)
        for (int k = 0; k < dim(); ++k) c[k] += a[k];
    for (auto& x : c) x /= n_phases;
    return c;
}

double SimplexGeometry::beta_max() const {
    return n_phases >= 3 ? std::numbers::pi / (6.0 * (n_phases - 2)) : 0.0;
}

SimplexGeometry build_simplex(int n_phases, double r_u, double beta_n) {
    if (n_phases < 2) throw ConfigError("n_phases must be >= 2");
    if (!(r_u > 0.0 && r_u <= 0.25)) throw ConfigError("r_U must lie in (0, 1/4], got " + std::to_string(r_u));
    if (n_phases >= 3) {
        double bmax = std::numbers::pi / (12.0 * (n_phases - 2));
        if (!(beta_n > 0.0 && beta_n <= bmax * (1.0 + 1e-12)))
            throw ConfigError("beta_N must lie in (0, pi/(12(N-2))], got " + std::to_string(beta_n));
    }
    SimplexGeometry g;
    g.n_phases = n_phases;
    g.r_u = r_u;
    g.beta_n = n_phases >= 3 ? beta_n : 0.0;
    const int d = n_phases - 1;
    g.vertices.assign(n_phases, Point(d, 0.0));
    if (d >= 1) g.vertices[1][0] = 1.0;
    // Vertex k sits above the centroid of the previous ones, on the next axis.
    for (int k = 2; k < n_phases; ++k) {
        Point c(d, 0.0);
        for (int m = 0; m < k; ++m)
            for (int a = 0; a < d; ++a) c[a] += g.vertices[m][a] / k;
        double r2 = 0.0;
        for (int a = 0; a < d; ++a) r2 += (c[a] - g.vertices[0][a]) * (c[a] - g.vertices[0][a]);
        c[k - 1] = std::sqrt(1.0 - r2);
        g.vertices[k] = c;
    }
    return g;
}

SimplexGeometry build_simplex(int n_phases) {
    return build_simplex(n_phases, 0.25, default_beta_n(n_phases));
}

std::vector<double> barycentric(const SimplexGeometry& g, const Point& u) {
    // alpha_1 = 0 and alpha_{k+1} has support in the first k axes: back-substitute.
    const int d = g.dim();
    std::vector<double> lam(g.n_phases, 0.0);
    for (int k = d; k >= 1; --k) {
        double rhs = u[k - 1];
        for (int m = k + 1; m <= d; ++m) rhs -= lam[m] * g.vertices[m][k - 1];
        lam[k] = rhs / g.vertices[k][k - 1];
    }
    double s = 0.0;
    for (int k = 1; k < g.n_phases; ++k) s += lam[k];
    lam[0] = 1.0 - s;
    return lam;
}

bool in_simplex(const SimplexGeometry& g, const Point& u, double tol) {
    for (double l : barycentric(g, u))
        if (l < -tol) return false;
    return true;
}

double dist_edge(const SimplexGeometry& g, const Point& u, int i, int j, double* foot_r) {
    const Point& a = g.vertices[i];
    const Point& b = g.vertices[j];
    double t = 0.0;
    for (int k = 0; k < g.dim(); ++k) t += (u[k] - a[k]) * (b[k] - a[k]);
    t = std::clamp(t, 0.0, 1.0);
    double s = 0.0;
    for (int k = 0; k < g.dim(); ++k) {
        double p = a[k] + t * (b[k] - a[k]);
        s += (u[k] - p) * (u[k] - p);
    }
    if (foot_r) *foot_r = t;
    return std::sqrt(s);
}

RegionLabel classify(const SimplexGeometry& g, const Point& u) {
    if (static_cast<int>(u.size()) != g.dim()) throw DomainError("phase vector has wrong dimension");
    if (!in_simplex(g, u, kTieTol)) throw DomainError("point outside the inflated simplex");
    RegionLabel lab;
    double best = INFINITY;
    for (int i = 0; i < g.n_phases; ++i)
        for (int j = i + 1; j < g.n_phases; ++j) {
            double dij = dist_edge(g, u, i, j);
            if (dij < best - kTieTol) {
                best = dij;
                lab.i = i;
                lab.j = j;
            }
        }
    double di = dist(u, g.vertices[lab.i]);
    double dj = dist(u, g.vertices[lab.j]);
    if (dj < di - kTieTol) {
        lab.near = lab.j;
        lab.far = lab.i;
    } else {
        lab.near = lab.i;
        lab.far = lab.j;
    }
    for (int k = 0; k < g.n_phases; ++k)
        if (dist(u, g.vertices[k]) <= g.r_u) lab.ball = k;
    if (best <= g.r_u * std::sin(g.beta_n) + kTieTol) lab.tube = std::make_pair(lab.i, lab.j);
    return lab;
}

Point project_edge(const SimplexGeometry& g, const Point& u, int i, int j) {
    double t = 0.0;
    dist_edge(g, u, i, j, &t);
    Point p(g.dim());
    for (int k = 0; k < g.dim(); ++k) p[k] = g.vertices[i][k] + t * (g.vertices[j][k] - g.vertices[i][k]);
    return p;
}

Point project_radial(const SimplexGeometry& g, const Point& u, int i, int j, bool* clamped) {
    double r = dist(u, g.vertices[i]);
    if (clamped) *clamped = r > 1.0;
    r = std::min(r, 1.0);
    Point p(g.dim());
    for (int k = 0; k < g.dim(); ++k) p[k] = g.vertices[i][k] + r * (g.vertices[j][k] - g.vertices[i][k]);
    return p;
}

double angle_beta(const SimplexGeometry& g, const Point& u, int i, int j) {
    Point v(g.dim()), e(g.dim());
    for (int k = 0; k < g.dim(); ++k) {
        v[k] = u[k] - g.vertices[i][k];
        e[k] = g.vertices[j][k] - g.vertices[i][k];
    }
    double nv = std::sqrt(dot(v, v));
    if (nv == 0.0) throw DomainError("angle undefined at the vertex");
    double c = std::clamp(dot(v, e) / nv, -1.0, 1.0);
    // atan2 keeps accuracy for tiny angles where acos loses half the digits.
    double cr = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
        double w = v[a] - dot(v, e) * e[a];
        cr += w * w;
    }
    return std::atan2(std::sqrt(cr), c * nv);
}

} // namespace mcf
