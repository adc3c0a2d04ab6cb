#include "mcf/diagnostics.hpp"

#include "mcf/errors.hpp"
#include "mcf/initdata.hpp"
#include "mcf/kernels.hpp"
#include "mcf/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace mcf {

namespace K = kernels;

namespace {

struct Kahan {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c, t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

enum Coer {
    kMm,
    kTiltPsi,
    kDistPsi,
    kDistEnergy,
    kTangential,
    kPsi0Sq,
    kPsi0Cross,
    kPsi0Grad,
    kTiltGrad,
    kLength,
    kGradient,
    kAlign,
    kCoerCount
};

double sq(double x) { return x * x; }

bool at_vertex(const SimplexGeometry& g, const double* u) {
    for (const auto& v : g.vertices)
        if (u[0] == v[0] && u[1] == v[1]) return true;
    return false;
}

} // namespace

const std::vector<std::string>& coercivity_names() {
    static const std::vector<std::string> names{
        "mm_defect",  "tilt_psi",  "dist_psi",      "dist_energy",     "tangential",  "psi0_sq",
        "psi0_cross", "psi0_grad", "tilt_grad",     "length_defect",   "gradient_defect", "xi_alignment"};
    return names;
}

double DiagnosticsRecord::max_L1() const {
    return L1_err.empty() ? 0.0 : *std::max_element(L1_err.begin(), L1_err.end());
}

double DiagnosticsRecord::max_weighted() const {
    return weighted_err.empty() ? 0.0 : *std::max_element(weighted_err.begin(), weighted_err.end());
}

Diagnostics::Diagnostics(const PotentialSpec& spec, const IndicatorSet& ind, const CalibrationField* calib,
                         const FrameMask& mask)
    : spec_(spec), ind_(ind), calib_(calib), mask_(mask) {
    if (spec.geom.n_phases != 3) throw ConfigError("diagnostics: three phases expected");
}

DiagnosticsRecord Diagnostics::evaluate(const GridField& f) const {
    if (f.channels != 2) throw ConfigError("diagnostics: two channels expected");
    if (!(f.eps > 0.0)) throw ConfigError("diagnostics: field has no eps");
    const Grid& g = f.grid;
    const int n = g.n;
    const size_t m = g.size();
    const double h = g.h(), h2 = h * h, eps = f.eps, t = f.t;
    const double se = std::sqrt(eps);
    const double thr = vacuum / h;
    const auto& geom = spec_.geom;

    std::vector<double> gx(2 * m), gy(2 * m), lap(2 * m), fwd(m, 0.0);
    for (int c = 0; c < 2; ++c) {
        K::grad_centered(f.channel(c), gx.data() + c * m, gy.data() + c * m, n, h);
        K::laplacian5(f.channel(c), lap.data() + c * m, n, h);
        K::add_grad_sq_forward(f.channel(c), fwd.data(), n, h);
    }

    DiagnosticsRecord r;
    r.t = t;
    Kahan E, Erel, Hn, d_curv, d_gap, d_div;
    Kahan coer[kCoerCount];
    Kahan l1[3], wl1[3];
    double min_dens = 0.0, resid = 0.0;

    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            if (!mask_.in_mask(g, ix, iy)) continue;
            const size_t k = g.idx(ix, iy);
            const double u[2] = {f.u[k], f.u[m + k]};
            const Vec2 x{g.x(ix), g.x(iy)};
            const double G[2][2] = {{gx[k], gy[k]}, {gx[m + k], gy[m + k]}}; // G[c][d] = d_d u_c
            const bool trivial = at_vertex(geom, u) && G[0][0] == 0 && G[0][1] == 0 && G[1][0] == 0 &&
                                 G[1][1] == 0 && lap[k] == 0 && lap[m + k] == 0;

            double psi[4], jac[8];
            if (trivial) {
                for (int i = 0; i < 3; ++i) psi[i] = (u[0] == geom.vertices[i][0] && u[1] == geom.vertices[i][1]);
                psi[3] = 0.0;
                E.add(0.5 * eps * fwd[k] * h2);
            } else {
                psi_dpsi(ind_, u, psi, jac);
                E.add((0.5 * eps * fwd[k] + eval_W(spec_, u) / eps) * h2);
            }

            if (calib_) {
                const auto& sol = calib_->sol;
                const int ph = sol.phase(x, t);
                for (int i = 0; i < 3; ++i) {
                    double e = std::abs(psi[i] - (ph == i ? 1.0 : 0.0));
                    if (e == 0.0) continue;
                    l1[i].add(e * h2);
                    wl1[i].add(e * std::min(sol.phase_boundary_dist(x, t, i), 1.0) * h2);
                }
            }
            if (trivial) continue;

            const double W = eval_W(spec_, u);
            double dW[2];
            eval_dW(spec_, u, dW);
            const double G2 = sq(G[0][0]) + sq(G[0][1]) + sq(G[1][0]) + sq(G[1][1]);
            const double Gn = std::sqrt(G2);
            const double dens_e = 0.5 * eps * G2 + W / eps;

            // chain rule: D(psi_r o u)[d] = sum_c dpsi_r[c] G[c][d]
            double Dpsi[4][2];
            for (int q = 0; q < 4; ++q)
                for (int d = 0; d < 2; ++d) Dpsi[q][d] = jac[2 * q] * G[0][d] + jac[2 * q + 1] * G[1][d];

            // H_eps and the Cauchy-Schwarz gap, both from v = Lap u - dW / eps^2
            const double v[2] = {lap[k] - dW[0] / (eps * eps), lap[m + k] - dW[1] / (eps * eps)};
            double H[2] = {0.0, 0.0}, gap;
            if (Gn >= thr) {
                for (int d = 0; d < 2; ++d) H[d] = -eps * (v[0] * G[0][d] + v[1] * G[1][d]) / Gn;
                // |v|^2 |G|^2 - |G^T v|^2 = sum_d (v x g_d)^2, exactly nonnegative
                double cr = 0.0;
                for (int d = 0; d < 2; ++d) cr += sq(v[0] * G[1][d] - v[1] * G[0][d]);
                gap = eps * eps * cr / G2;
            } else {
                gap = eps * eps * (sq(v[0]) + sq(v[1]));
            }
            const double H2 = sq(H[0]) + sq(H[1]);
            Hn.add(H2 / (2.0 * eps) * h2);
            d_gap.add(gap / (2.0 * eps) * h2);

            // calibration-free coercivity terms
            coer[kMm].add(sq(se * Gn - std::sqrt(2.0 * std::max(W, 0.0)) / se) * h2);

            if (!calib_) continue;
            const auto& cal = *calib_;
            Vec2 xi[3];
            cal.xi(x, t, xi);

            double dens = dens_e;
            for (int l = 0; l < 3; ++l) dens += xi[l][0] * Dpsi[l][0] + xi[l][1] * Dpsi[l][1];
            Erel.add(dens * h2);
            min_dens = std::min(min_dens, dens);

            double up[2];
            project_simplex(spec_, u, up);
            const auto lab = classify(geom, Point{up[0], up[1]});
            const int i = lab.i, j = lab.j, kk = 3 - i - j;
            const Vec2 xij{xi[i][0] - xi[j][0], xi[i][1] - xi[j][1]};
            const double Dij[2] = {Dpsi[j][0] - Dpsi[i][0], Dpsi[j][1] - Dpsi[i][1]};
            const double dij[2] = {jac[2 * j] - jac[2 * i], jac[2 * j + 1] - jac[2 * i + 1]};
            const double Dn = std::hypot(Dij[0], Dij[1]);
            const double dist = cal.sol.dist(x, t, i, j);
            const double wdist = std::isfinite(dist) ? std::min(dist * dist, 1.0) : 1.0;

            double tilt = 0.0; // |nu_ij - xi_ij|^2
            double nu[2] = {0.0, 0.0};
            if (Dn >= thr) {
                nu[0] = Dij[0] / Dn;
                nu[1] = Dij[1] / Dn;
                tilt = sq(nu[0] - xij[0]) + sq(nu[1] - xij[1]);
            }
            coer[kTiltPsi].add(tilt * Dn * h2);
            coer[kDistPsi].add(wdist * Dn * h2);
            coer[kDistEnergy].add(wdist * dens_e * h2);
            {
                // (Id - xi xi^T) applied to each column of Du^T, i.e. to the spatial rows G[c][.]
                double s = 0.0;
                for (int c = 0; c < 2; ++c) {
                    double p = xij[0] * G[c][0] + xij[1] * G[c][1];
                    s += sq(G[c][0] - p * xij[0]) + sq(G[c][1] - p * xij[1]);
                }
                coer[kTangential].add(eps * s * h2);
            }
            const double d0[2] = {jac[6], jac[7]};
            coer[kPsi0Sq].add((sq(d0[0]) + sq(d0[1])) / eps * h2);
            coer[kPsi0Cross].add(std::abs(dij[0] * d0[0] + dij[1] * d0[1]) / eps * h2);
            coer[kPsi0Grad].add(std::hypot(Dpsi[3][0], Dpsi[3][1]) * h2);
            coer[kTiltGrad].add(tilt * eps * G2 * h2);
            if (Gn >= thr) {
                coer[kLength].add(sq(Dn / (2.0 * se * Gn) - se * Gn) * h2);
                double s = 0.0;
                for (int c = 0; c < 2; ++c)
                    for (int d = 0; d < 2; ++d) s += sq(dij[c] * nu[d] / (2.0 * se) - se * G[c][d]);
                coer[kGradient].add(s * h2);
                // xi_ij xi_ij^T - G^T G / |G|^2, Frobenius
                double a = 0.0;
                for (int d = 0; d < 2; ++d)
                    for (int e = 0; e < 2; ++e) {
                        double gtg = G[0][d] * G[0][e] + G[1][d] * G[1][e];
                        a += sq(xij[d] * xij[e] - gtg / G2);
                    }
                coer[kAlign].add(a * eps * G2 * h2);
            } else {
                coer[kLength].add(sq(se * Gn) * h2);
                coer[kGradient].add(eps * G2 * h2);
            }

            // sum identity: sum_l xi_l (x) D psi_l against -1/2 xi_ij (x) D psi_ij + 1/2 sum_k xi_k (x) D psi_0
            {
                double res = 0.0;
                for (int a = 0; a < 2; ++a)
                    for (int d = 0; d < 2; ++d) {
                        double lhs = 0.0;
                        for (int l = 0; l < 3; ++l) lhs += xi[l][a] * Dpsi[l][d];
                        double rhs = -0.5 * xij[a] * Dij[d] + 0.5 * xi[kk][a] * Dpsi[3][d];
                        res += sq(lhs - rhs);
                    }
                resid = std::max(resid, std::sqrt(res));
            }

            // dissipation terms
            const Vec2 b = cal.B(x, t);
            const double bx = b[0] * xij[0] + b[1] * xij[1];
            d_curv.add((sq(H[0] - eps * bx * xij[0] * Gn) + sq(H[1] - eps * bx * xij[1] * Gn)) / (2.0 * eps) * h2);

            const double dx = 1e-6 * g.L;
            double div[3] = {0, 0, 0};
            Vec2 xp[3], xm[3];
            for (int d = 0; d < 2; ++d) {
                Vec2 a = x, c = x;
                a[d] += dx;
                c[d] -= dx;
                cal.xi(a, t, xp);
                cal.xi(c, t, xm);
                for (int l = 0; l < 3; ++l) div[l] += (xp[l][d] - xm[l][d]) / (2.0 * dx);
            }
            double w[2] = {eps * v[0], eps * v[1]};
            for (int l = 0; l < 3; ++l) {
                w[0] += div[l] * jac[2 * l];
                w[1] += div[l] * jac[2 * l + 1];
            }
            d_div.add((sq(w[0]) + sq(w[1])) / (4.0 * eps) * h2);
        }

    r.E = E.s;
    r.H_eps_norm = Hn.s;
    r.diss_gap = d_gap.s;
    const auto& names = coercivity_names();
    if (calib_) {
        r.E_rel = Erel.s;
        r.min_density = min_dens;
        r.sum_residual = resid;
        r.diss_curvature = d_curv.s;
        r.diss_div = d_div.s;
        for (int i = 0; i < 3; ++i) {
            r.L1_err.push_back(l1[i].s);
            r.weighted_err.push_back(wl1[i].s);
        }
        for (int q = 0; q < kCoerCount; ++q) r.coercivity[names[q]] = coer[q].s;
    } else {
        r.coercivity[names[kMm]] = coer[kMm].s;
    }
    for (const auto& [name, val] : r.coercivity)
        r.ratio[name] = r.E_rel > 0.0 ? val / r.E_rel : 0.0;
    return r;
}

std::string Diagnostics::csv_header(int n_phases) {
    std::ostringstream os;
    os << "# mcf-lab diagnostics v" << kCsvVersion << "\n";
    os << "t,E,E_rel";
    for (int i = 0; i < n_phases; ++i) os << ",L1_err_" << i;
    for (int i = 0; i < n_phases; ++i) os << ",weighted_err_" << i;
    for (const auto& c : coercivity_names()) os << "," << c;
    os << ",sum_residual,H_eps_norm,diss_curvature,diss_gap,diss_div";
    return os.str();
}

std::string Diagnostics::csv_row(const DiagnosticsRecord& r) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << r.t << "," << r.E << "," << r.E_rel;
    for (double v : r.L1_err) os << "," << v;
    for (double v : r.weighted_err) os << "," << v;
    for (const auto& c : coercivity_names()) {
        auto it = r.coercivity.find(c);
        os << "," << (it == r.coercivity.end() ? 0.0 : it->second);
    }
    os << "," << r.sum_residual << "," << r.H_eps_norm << "," << r.diss_curvature << "," << r.diss_gap << ","
       << r.diss_div;
    return os.str();
}

double energy(const GridField& f, const PotentialSpec& spec) {
    const Grid& g = f.grid;
    const size_t m = g.size();
    std::vector<double> acc(m, 0.0);
    for (int c = 0; c < f.channels; ++c) K::add_grad_sq_forward(f.channel(c), acc.data(), g.n, g.h());
    double u[2];
    for (size_t k = 0; k < m; ++k) {
        f.get(k, u);
        acc[k] = 0.5 * f.eps * acc[k] + (at_vertex(spec.geom, u) ? 0.0 : eval_W(spec, u) / f.eps);
    }
    return K::sum(acc.data(), m) * g.h() * g.h();
}

double relative_entropy(const GridField& f, const CalibrationField& calib, const PotentialSpec& spec,
                        const IndicatorSet& ind, const FrameMask& mask) {
    return Diagnostics(spec, ind, &calib, mask).evaluate(f).E_rel;
}

std::vector<double> h_epsilon(const GridField& f, const PotentialSpec& spec, double vacuum) {
    const Grid& g = f.grid;
    const size_t m = g.size();
    const double h = g.h(), eps = f.eps, thr = vacuum / h;
    std::vector<double> gx(2 * m), gy(2 * m), lap(2 * m), out(2 * m, 0.0);
    for (int c = 0; c < 2; ++c) {
        K::grad_centered(f.channel(c), gx.data() + c * m, gy.data() + c * m, g.n, h);
        K::laplacian5(f.channel(c), lap.data() + c * m, g.n, h);
    }
    for (size_t k = 0; k < m; ++k) {
        double u[2], dW[2];
        f.get(k, u);
        double Gn = std::sqrt(sq(gx[k]) + sq(gy[k]) + sq(gx[m + k]) + sq(gy[m + k]));
        if (Gn < thr) continue;
        eval_dW(spec, u, dW);
        double v0 = lap[k] - dW[0] / (eps * eps), v1 = lap[m + k] - dW[1] / (eps * eps);
        out[k] = -eps * (v0 * gx[k] + v1 * gx[m + k]) / Gn;
        out[m + k] = -eps * (v0 * gy[k] + v1 * gy[m + k]) / Gn;
    }
    return out;
}

std::map<std::string, double> coercivity_report(const GridField& f, const CalibrationField& calib,
                                                const PotentialSpec& spec, const IndicatorSet& ind,
                                                const FrameMask& mask) {
    auto r = Diagnostics(spec, ind, &calib, mask).evaluate(f);
    auto out = r.coercivity;
    for (const auto& [name, val] : r.ratio) out[name + "/E_rel"] = val;
    return out;
}

BulkErrors bulk_errors(const GridField& f, const CalibrationField& calib, const IndicatorSet& ind,
                       const FrameMask& mask) {
    auto r = Diagnostics(ind.spec, ind, &calib, mask).evaluate(f);
    return {r.L1_err, r.weighted_err};
}

double sum_identity_residual(const GridField& f, const CalibrationField& calib, const IndicatorSet& ind,
                             const FrameMask& mask) {
    return Diagnostics(ind.spec, ind, &calib, mask).evaluate(f).sum_residual;
}

double phase_radius(const GridField& f, const IndicatorSet& ind, int phase) {
    const size_t m = f.grid.size();
    std::vector<double> a(m);
    double u[2], v[4];
    for (size_t k = 0; k < m; ++k) {
        f.get(k, u);
        psi(ind, u, v);
        a[k] = v[phase];
    }
    const double h = f.grid.h();
    return std::sqrt(K::sum(a.data(), m) * h * h / std::numbers::pi);
}

Preparedness certify_preparedness(const GridField& field, const CalibrationField& calib, const IndicatorSet& ind,
                                  const FrameMask& mask) {
    auto r = Diagnostics(ind.spec, ind, &calib, mask).evaluate(field);
    if (r.min_density < -1e-10) {
        std::ostringstream os;
        os << "preparedness: negative relative-entropy density " << r.min_density;
        throw VerificationError(os.str());
    }
    Preparedness p;
    p.e_rel0 = r.E_rel;
    p.plain_l1 = r.L1_err;
    p.weighted_l1 = r.weighted_err;
    return p;
}

} // namespace mcf
