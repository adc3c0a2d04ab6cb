#pragma once

#include "mcf/potential.hpp"

#include <memory>
#include <vector>

namespace mcf {

// Equilibrium profile across the edge (i,j): theta(s) = gamma(theta_tilde(s) / theta_bar) for |s| < rho,
// alpha_i below -rho, alpha_j above rho. gamma runs at constant speed from alpha_i (at -1) to alpha_j (at +1).
class Profile1D {
public:
    int i = 0, j = 1;
    double rho = 2.0;
    double s0 = 0.0;
    double theta_bar_plus = 1.0, theta_bar_minus = 1.0;

    // stretched variable
    double theta_tilde(double t) const;
    double dtheta_tilde(double t) const;
    // path parameter in [-1, 1] after truncation; constant outside [-rho, rho]
    double sigma(double s) const;
    double dsigma(double s) const;
    Point theta(double s) const;
    Point dtheta(double s) const;
    Point gamma(double sigma) const;
    double potential_at(double s) const;
    double gamma_speed() const;

    double table_step() const { return h_; }
    double table_half_width() const { return h_ * (static_cast<double>(tab_.size()) - 1) / 2; }
    double rhs(double th) const;

private:
    friend Profile1D solve_profile(const PotentialSpec& spec, int i, int j, double rho);
    PotentialSpec spec_;
    double h_ = 1e-3;
    std::vector<double> tab_; // theta_tilde on [-S, S]
    std::vector<double> dtab_;
    double tail_rate_ = 6.0;
};

Profile1D solve_profile(const PotentialSpec& spec, int i, int j, double rho = 2.0);

// int (eps/2)|d/ds theta(s/eps)|^2 + W(theta(s/eps))/eps ds
double profile_energy_check(const Profile1D& p, double eps);

} // namespace mcf
