#include "mcf/profiles.hpp"

#include "mcf/errors.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <sstream>

namespace mcf {

namespace odeint = boost::numeric::odeint;

Point Profile1D::gamma(double sg) const {
    sg = std::clamp(sg, -1.0, 1.0);
    const auto& a = spec_.geom.vertices[i];
    const auto& b = spec_.geom.vertices[j];
    Point p(a.size());
    for (size_t c = 0; c < a.size(); ++c) p[c] = a[c] + 0.5 * (sg + 1.0) * (b[c] - a[c]);
    return p;
}

double Profile1D::gamma_speed() const {
    const auto& a = spec_.geom.vertices[i];
    const auto& b = spec_.geom.vertices[j];
    double s = 0;
    for (size_t c = 0; c < a.size(); ++c) s += (b[c] - a[c]) * (b[c] - a[c]);
    return 0.5 * std::sqrt(s);
}

double Profile1D::rhs(double th) const {
    th = std::clamp(th, -1.0, 1.0);
    auto p = gamma(th);
    double w = eval_W(spec_, p.data());
    return std::sqrt(2.0 * std::max(w, 0.0)) / gamma_speed();
}

double Profile1D::theta_tilde(double t) const {
    t -= s0;
    const double S = table_half_width();
    if (std::abs(t) >= S) {
        // linearized tail beyond the table
        double end = t > 0 ? tab_.back() : tab_.front();
        double sgn = t > 0 ? 1.0 : -1.0;
        return sgn * (1.0 - (1.0 - sgn * end) * std::exp(-tail_rate_ * (std::abs(t) - S)));
    }
    // monotone cubic (Fritsch-Carlson) on the uniform table
    double x = (t + S) / h_;
    size_t k = std::min(static_cast<size_t>(x), tab_.size() - 2);
    double f = x - static_cast<double>(k);
    auto slope = [&](size_t m) {
        if (m == 0 || m + 1 == tab_.size()) return dtab_[m] * h_;
        double dl = tab_[m] - tab_[m - 1], dr = tab_[m + 1] - tab_[m];
        if (dl * dr <= 0) return 0.0;
        double s = dtab_[m] * h_;
        return std::clamp(s, 0.0, 3.0 * std::min(dl, dr));
    };
    double y0 = tab_[k], y1 = tab_[k + 1], m0 = slope(k), m1 = slope(k + 1);
    double f2 = f * f, f3 = f2 * f;
    // increment form keeps the rounded result monotone near the wells
    double dy = (y1 - y0) * (3 * f2 - 2 * f3) + m0 * (f3 - 2 * f2 + f) + m1 * (f3 - f2);
    return std::clamp(y0 + dy, y0, y1);
}

double Profile1D::dtheta_tilde(double t) const { return rhs(theta_tilde(t)); }

double Profile1D::sigma(double s) const {
    if (s <= -rho) return -1.0;
    if (s >= rho) return 1.0;
    double th = theta_tilde(s);
    double v = th >= 0 ? th / theta_bar_plus : th / theta_bar_minus;
    return std::clamp(v, -1.0, 1.0);
}

double Profile1D::dsigma(double s) const {
    if (s <= -rho || s >= rho) return 0.0;
    double th = theta_tilde(s);
    return dtheta_tilde(s) / (th >= 0 ? theta_bar_plus : theta_bar_minus);
}

Point Profile1D::theta(double s) const {
    if (s <= -rho) return spec_.geom.vertices[i];
    if (s >= rho) return spec_.geom.vertices[j];
    return gamma(sigma(s));
}

double Profile1D::potential_at(double s) const {
    auto u = theta(s);
    return eval_W(spec_, u.data());
}

Point Profile1D::dtheta(double s) const {
    const auto& a = spec_.geom.vertices[i];
    const auto& b = spec_.geom.vertices[j];
    double ds = dsigma(s);
    Point p(a.size());
    for (size_t c = 0; c < a.size(); ++c) p[c] = 0.5 * ds * (b[c] - a[c]);
    return p;
}

Profile1D solve_profile(const PotentialSpec& spec, int i, int j, double rho) {
    if (!(rho > 0.0)) throw ConfigError("profile: rho must be positive");
    const int n = spec.geom.n_phases;
    if (i < 0 || j < 0 || i >= n || j >= n || i == j) throw ConfigError("profile: bad edge");
    Profile1D p;
    p.spec_ = spec;
    p.i = i;
    p.j = j;
    p.rho = rho;
    const double S = std::max(rho, 8.0);
    const size_t half = static_cast<size_t>(std::ceil(S / p.h_));
    const size_t m = 2 * half + 1;
    p.tab_.assign(m, 0.0);
    p.dtab_.assign(m, 0.0);

    auto run = [&](double dir) {
        using state = std::array<double, 1>;
        state x{0.0};
        auto sys = [&](const state& y, state& dy, double) { dy[0] = dir * p.rhs(y[0]); };
        auto stepper = odeint::make_controlled(1e-13, 1e-13, odeint::runge_kutta_dopri5<state>());
        std::vector<double> times(half + 1);
        for (size_t k = 0; k <= half; ++k) times[k] = static_cast<double>(k) * p.h_;
        size_t idx = 0;
        try {
            odeint::integrate_times(stepper, sys, x, times.begin(), times.end(), p.h_,
                                    [&](const state& y, double) {
                                        size_t at = dir > 0 ? half + idx : half - idx;
                                        p.tab_[at] = y[0];
                                        ++idx;
                                    });
        } catch (const std::exception& e) {
            std::ostringstream os;
            os << "profile ODE failed after " << idx << " output steps: " << e.what();
            throw NumericError(os.str());
        }
        if (idx != half + 1) throw NumericError("profile ODE stopped early");
    };
    run(1.0);
    run(-1.0);
    for (size_t k = 0; k < m; ++k) {
        if (!std::isfinite(p.tab_[k])) throw NumericError("profile ODE produced a non-finite value");
        p.tab_[k] = std::clamp(p.tab_[k], -1.0, 1.0);
        // roundoff near the wells can break monotonicity at the last ulp
        if (k > 0) p.tab_[k] = std::max(p.tab_[k], p.tab_[k - 1]);
    }
    for (size_t k = 0; k < m; ++k) p.dtab_[k] = p.rhs(p.tab_[k]);
    // tail rate from the linearization of the right-hand side at +1
    const double dt = 1e-6;
    p.tail_rate_ = std::max((p.rhs(1.0 - dt) - p.rhs(1.0)) / dt, 1e-3);
    p.theta_bar_plus = p.theta_tilde(rho);
    p.theta_bar_minus = -p.theta_tilde(-rho);
    if (!(p.theta_bar_plus > 0 && p.theta_bar_minus > 0)) throw NumericError("profile: degenerate truncation level");
    return p;
}

double profile_energy_check(const Profile1D& p, double eps) {
    if (!(eps > 0.0)) throw ConfigError("profile energy: eps must be positive");
    const double g = p.gamma_speed();
    auto density = [&](double s) {
        double z = s / eps;
        double ds = g * p.dsigma(z) / eps;
        return 0.5 * eps * ds * ds + p.potential_at(z) / eps;
    };
    using boost::math::quadrature::gauss_kronrod;
    const double a = -p.rho * eps, b = p.rho * eps;
    // split at the center to help the adaptive rule
    return gauss_kronrod<double, 61>::integrate(density, a, 0.0, 15, 1e-14) +
           gauss_kronrod<double, 61>::integrate(density, 0.0, b, 15, 1e-14);
}

} // namespace mcf
