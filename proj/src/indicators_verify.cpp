#include "mcf/indicators.hpp"

#include "mcf/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mcf {

namespace {

bool same_label(const RegionLabel& a, const RegionLabel& b) {
    return a.i == b.i && a.j == b.j && a.near == b.near && a.ball == b.ball && a.tube == b.tube;
}

} // namespace

IndicatorReport verify_indicators(const IndicatorSet& ind, int n_samples, unsigned seed) {
    if (n_samples < 10000) throw ConfigError("verify_indicators needs at least 1e4 samples");
    const auto& g = ind.spec.geom;
    const int n = ind.n(), d = ind.dim();
    IndicatorReport rep;
    rep.a4_margin = INFINITY;
    rep.grad_margin = INFINITY;
    const double h = 1e-6, band = 10.0 * h;
    std::vector<double> v(n + 1), jac((n + 1) * d), vp(n + 1), vm(n + 1);
    for (const auto& u : simplex_samples(g, n_samples, seed)) {
        double gm = 0.0;
        double m = verify_a4(ind, u.data(), &gm);
        if (m < rep.a4_margin) {
            rep.a4_margin = m;
            rep.a4_witness = u;
        }
        rep.grad_margin = std::min(rep.grad_margin, gm);
        psi_dpsi(ind, u.data(), v.data(), jac.data());
        double w = eval_W(ind.spec, u.data());
        if (w > 1e-14)
            for (int r = 0; r < n; ++r) {
                double s = 0;
                for (int c = 0; c < d; ++c) s += jac[r * d + c] * jac[r * d + c];
                rep.grad_ratio_max = std::max(rep.grad_ratio_max, std::sqrt(s / (2.0 * w)));
            }
        double sum = 0.0;
        for (int r = 0; r <= n; ++r) {
            sum += v[r];
            rep.range_violation = std::max({rep.range_violation, -v[r], v[r] - 1.0});
        }
        rep.partition_error = std::max(rep.partition_error, std::abs(sum - 1.0));
        if (n == 3) {
            auto lab = classify(g, u);
            int k = 3 - lab.i - lab.j;
            rep.support_violation = std::max(rep.support_violation, std::abs(v[k]));
        }
        // central differences; relaxed tolerance where a region boundary is within 10 h
        bool near_boundary = false;
        if (n == 3) {
            auto lab = classify(g, u);
            for (double sx : {-band, band})
                for (double sy : {-band, band}) {
                    Point q{u[0] + sx, u[1] + sy};
                    if (!in_simplex(g, q, 0.0)) {
                        near_boundary = true;
                        continue;
                    }
                    if (!same_label(lab, classify(g, q))) near_boundary = true;
                }
        }
        for (int c = 0; c < d; ++c) {
            Point up = u, um = u;
            up[c] += h;
            um[c] -= h;
            if (n == 3 && (!in_simplex(g, up, 0.0) || !in_simplex(g, um, 0.0))) continue;
            psi(ind, up.data(), vp.data());
            psi(ind, um.data(), vm.data());
            for (int r = 0; r <= n; ++r) {
                double fd = (vp[r] - vm[r]) / (2.0 * h);
                double err = std::abs(fd - jac[r * d + c]) / std::max(1.0, std::abs(jac[r * d + c]));
                double& slot = near_boundary ? rep.fd_mismatch_boundary : rep.fd_mismatch_interior;
                slot = std::max(slot, err);
            }
        }
    }
    if (n >= 3) {
        for (int k = 0; k <= 10000; ++k) {
            double dl = 0.0;
            lambda_fn(ind, g.beta_max() * k / 10000.0, &dl);
            rep.lambda_slope = std::max(rep.lambda_slope, std::abs(dl));
        }
    }
    for (int k = 0; k <= 10000; ++k) {
        double de = 0.0;
        eta_fn(ind, k / 10000.0, &de);
        rep.eta_slope = std::max(rep.eta_slope, std::abs(de));
    }
    rep.pass = rep.a4_margin >= -1e-10 && rep.grad_margin >= -1e-10 && rep.fd_mismatch_interior <= 1e-4 &&
               rep.fd_mismatch_boundary <= 1e-2 && rep.partition_error <= 1e-14 && rep.range_violation <= 1e-14 &&
               rep.support_violation == 0.0 && rep.lambda_slope <= 4.0 * std::max(1, n - 2) && rep.eta_slope <= 2.5;
    return rep;
}

} // namespace mcf
