#include "mcf/potential.hpp"

#include "mcf/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/random/sobol.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace mcf {

std::vector<Point> simplex_samples(const SimplexGeometry& g, int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double sx = uni(rng), sy = uni(rng);
    boost::random::sobol qrng(2);
    std::vector<Point> out;
    out.reserve(n);
    const double scale = 1.0 / (static_cast<double>(qrng.max()) + 1.0);
    for (int k = 0; k < n; ++k) {
        double a = std::fmod(qrng() * scale + sx, 1.0);
        double b = std::fmod(qrng() * scale + sy, 1.0);
        if (g.n_phases == 2) {
            out.push_back(Point{a});
            continue;
        }
        if (a + b > 1.0) {
            a = 1.0 - a;
            b = 1.0 - b;
        }
        Point u(2);
        for (int c = 0; c < 2; ++c) u[c] = a * g.vertices[1][c] + b * g.vertices[2][c];
        out.push_back(u);
    }
    return out;
}

namespace {

void track(AssumptionReport& rep, const std::string& key, double m, const Point& w) {
    auto it = rep.margins.find(key);
    if (it == rep.margins.end() || m < it->second.value) rep.margins[key] = Margin{m, w};
}

Point edge_point(const SimplexGeometry& g, int i, int j, double r) {
    Point p(g.dim());
    for (int k = 0; k < g.dim(); ++k) p[k] = g.vertices[i][k] + r * (g.vertices[j][k] - g.vertices[i][k]);
    return p;
}

double norm(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(s);
}

} // namespace

AssumptionReport verify_assumptions(const PotentialSpec& spec, int n_samples, unsigned seed,
                                    AssumptionCheckOverrides over) {
    if (n_samples < 10000) throw ConfigError("verify_assumptions needs at least 1e4 samples");
    const auto& g = spec.geom;
    const int n = g.n_phases;
    AssumptionReport rep;
    const double c_n = spec.c_n * over.c_n_factor;
    const double edge_max = 9.0 / 8.0;
    double a1_lo = INFINITY, a1_hi = 0.0;
    Point a1_w;

    for (const auto& u : simplex_samples(g, n_samples, seed)) {
        const double w = eval_W(spec, u.data());
        RegionLabel lab = classify(g, u);
        if (lab.ball) {
            int k = *lab.ball;
            double r = norm(u, g.vertices[k]);
            if (r > 1e-6) {
                double ratio = w / (r * r);
                if (ratio < a1_lo) {
                    a1_lo = ratio;
                    a1_w = u;
                }
                a1_hi = std::max(a1_hi, ratio);
                if (n >= 3) {
                    int other = lab.near == k ? lab.far : lab.near;
                    double beta = angle_beta(g, u, k, other);
                    Point pr = project_radial(g, u, k, other);
                    double lower = (1.0 + omega_fn(spec, beta)) * eval_W(spec, pr.data());
                    track(rep, "def6.1(3)_radial_growth", w - lower, u);
                }
            }
        } else if (lab.tube || n == 2) {
            double d = dist_edge(g, u, lab.i, lab.j);
            Point p = project_edge(g, u, lab.i, lab.j);
            track(rep, "(6.5)_tube_growth", w - (1.0 + c_n * d * d) * eval_W(spec, p.data()), u);
        } else {
            track(rep, "(6.6)_interior_floor", w - spec.c_int * edge_max, u);
        }
    }
    track(rep, "(A1)_quadratic_lower", a1_lo - 1e-3, a1_w);
    rep.constants["A1_c"] = a1_lo;
    rep.constants["A1_C"] = a1_hi;

    const int ne = 2000;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double prev_s = 0.0;
            Point prev;
            for (int k = 0; k <= ne; ++k) {
                double r = static_cast<double>(k) / ne;
                Point p = edge_point(g, i, j, r);
                double w = eval_W(spec, p.data());
                double base = r * r * (1.0 - r) * (1.0 - r);
                track(rep, "(6.4a)_edge_lower", w - spec.c_gamma * base, p);
                track(rep, "(6.4a)_edge_upper", spec.C_gamma * base - w, p);
                double s = std::sqrt(2.0 * w);
                if (k > 0) track(rep, "(6.4b)_edge_lipschitz", spec.L_gamma * norm(p, prev) - std::abs(s - prev_s), p);
                prev_s = s;
                prev = p;
            }
            auto f = [&](double r) {
                Point p = edge_point(g, i, j, r);
                return std::sqrt(2.0 * eval_W(spec, p.data()));
            };
            double act = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-14);
            track(rep, "(A3)_edge_action", 1e-8 - std::abs(act - 1.0), edge_point(g, i, j, 0.5));
            rep.constants["edge_action_" + std::to_string(i + 1) + std::to_string(j + 1)] = act;
        }

    // (A2): just outside the simplex the gradient has an outward component, so -dW points inward.
    std::vector<double> grad(g.dim());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = 0; k <= 100; ++k) {
                Point p = edge_point(g, i, j, k / 100.0);
                Point out_dir(g.dim(), 0.0);
                if (n == 2) {
                    if (k != 0 && k != 100) continue;
                    out_dir[0] = k == 0 ? -1.0 : 1.0;
                } else {
                    // outward normal of edge (i,j): away from the opposite vertex
                    int o = 3 - i - j;
                    Point c = edge_point(g, i, j, 0.5);
                    double nx = g.vertices[j][1] - g.vertices[i][1], ny = -(g.vertices[j][0] - g.vertices[i][0]);
                    if ((g.vertices[o][0] - c[0]) * nx + (g.vertices[o][1] - c[1]) * ny > 0) {
                        nx = -nx;
                        ny = -ny;
                    }
                    out_dir = {nx, ny};
                }
                for (double tau : {1e-4, 1e-2}) {
                    Point u = p;
                    for (int c = 0; c < g.dim(); ++c) u[c] += tau * out_dir[c];
                    eval_dW(spec, u.data(), grad.data());
                    double comp = 0.0;
                    for (int c = 0; c < g.dim(); ++c) comp += grad[c] * out_dir[c];
                    track(rep, "(A2)_inward_gradient", comp, u);
                }
            }

    rep.constants["C_omega"] = spec.c_omega;
    rep.constants["C_N"] = c_n;
    rep.constants["C_int"] = spec.c_int;
    rep.constants["c_gamma"] = spec.c_gamma;
    rep.constants["C_gamma"] = spec.C_gamma;
    rep.constants["L_gamma"] = spec.L_gamma;
    rep.pass = true;
    for (const auto& [k, m] : rep.margins)
        if (m.value < -1e-10 && rep.pass) {
            rep.pass = false;
            rep.first_failure = k;
        }
    return rep;
}

} // namespace mcf
