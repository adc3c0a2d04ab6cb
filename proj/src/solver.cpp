#include "mcf/solver.hpp"

#include "mcf/errors.hpp"
#include "mcf/kernels.hpp"

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <numbers>
#include <sstream>

namespace mcf {

Scheme parse_scheme(const std::string& s) {
    if (s == "spectral" || s == "SemiImplicitSpectral") return Scheme::SemiImplicitSpectral;
    if (s == "explicit" || s == "ExplicitFD") return Scheme::ExplicitFD;
    throw ConfigError("unknown scheme '" + s + "'");
}

std::string scheme_name(Scheme s) { return s == Scheme::ExplicitFD ? "explicit" : "spectral"; }

double hessian_bound(const PotentialSpec& spec, int n_samples) {
    auto pts = simplex_samples(spec.geom, n_samples, 17);
    double m = 0.0, g[2], H[4];
    for (const auto& p : pts) {
        eval_W_hess(spec, p.data(), g, H);
        double tr = 0.5 * (H[0] + H[3]);
        double det = H[0] * H[3] - H[1] * H[2];
        double disc = std::sqrt(std::max(0.0, tr * tr - det));
        m = std::max({m, std::abs(tr + disc), std::abs(tr - disc)});
    }
    return m;
}

Solver::Solver(const Grid& grid, const PotentialSpec& spec, double eps, const SolverConfig& cfg)
    : grid_(grid), spec_(spec), eps_(eps), cfg_(cfg) {
    if (spec.geom.n_phases != 3) throw ConfigError("solver: three phases expected");
    if (!(eps > 0.0)) throw ConfigError("solver: eps must be positive");
    if (grid.n < 4) throw ConfigError("solver: grid too small");
    if (cfg.scheme == Scheme::ExplicitFD) {
        double lim = explicit_dt_limit();
        dt_ = cfg.dt > 0 ? cfg.dt : lim;
        if (dt_ > lim * (1 + 1e-12)) {
            std::ostringstream os;
            os << "explicit scheme: dt = " << dt_ << " exceeds the stability limit " << lim;
            throw ConfigError(os.str());
        }
    } else {
        dt_ = cfg.dt > 0 ? cfg.dt : cfg.dt_factor * eps * eps;
        if (!(dt_ > 0.0)) throw ConfigError("solver: dt must be positive");
    }
}

Solver::~Solver() = default;

double Solver::explicit_dt_limit() const {
    double lw = lw_ > 0 ? lw_ : hessian_bound(spec_);
    const double h = grid_.h();
    return cfg_.cfl_safety * std::min(h * h / 4.0, eps_ * eps_ / lw);
}

void Solver::set_frame(const FrameMask& frame, const GridField& data) {
    frame_ = frame;
    frame_idx_.clear();
    frame_val_.clear();
    fixed_.clear();
    frame_w_ = 0.0;
    if (!frame.active()) return;
    if (data.grid.n != grid_.n) throw ConfigError("frame data on a different grid");
    for (int iy = 0; iy < grid_.n; ++iy)
        for (int ix = 0; ix < grid_.n; ++ix)
            if (frame.in_frame(grid_, ix, iy)) frame_idx_.push_back(grid_.idx(ix, iy));
    for (int c = 0; c < data.channels; ++c)
        for (size_t k : frame_idx_) frame_val_.push_back(data.channel(c)[k]);
    fixed_.assign(grid_.size(), 0);
    std::vector<double> w;
    for (size_t k : frame_idx_) {
        fixed_[k] = 1;
        double u[2];
        data.get(k, u);
        w.push_back(eval_W(spec_, u));
    }
    frame_w_ = kernels::sum(w.data(), w.size());
}

void Solver::reset_frame(GridField& f) const {
    const size_t nf = frame_idx_.size();
    for (int c = 0; c < 2; ++c) {
        double* u = f.channel(c);
        for (size_t q = 0; q < nf; ++q) u[frame_idx_[q]] = frame_val_[c * nf + q];
    }
}

double Solver::grad_energy(const GridField& f) const {
    std::vector<double> acc(grid_.size(), 0.0);
    for (int c = 0; c < f.channels; ++c) kernels::add_grad_sq_forward(f.channel(c), acc.data(), grid_.n, grid_.h());
    return kernels::sum(acc.data(), acc.size());
}

double Solver::energy(const GridField& f) const {
    std::vector<double> w(grid_.size(), 0.0);
    const auto& V = spec_.geom.vertices;
    double u[2];
    for (size_t k = 0; k < grid_.size(); ++k) {
        f.get(k, u);
        bool at_well = false;
        for (const auto& a : V) at_well |= (u[0] == a[0] && u[1] == a[1]);
        if (!at_well) w[k] = eval_W(spec_, u);
    }
    const double h2 = grid_.h() * grid_.h();
    return h2 * (0.5 * eps_ * grad_energy(f) + kernels::sum(w.data(), w.size()) / eps_);
}

double Solver::excursion(const GridField& f) const {
    const double s3 = std::sqrt(3.0);
    double m = 0.0, u[2], p[2];
    for (size_t k = 0; k < grid_.size(); ++k) {
        f.get(k, u);
        if (u[1] >= 0.0 && s3 * u[0] - u[1] >= 0.0 && s3 * (1.0 - u[0]) - u[1] >= 0.0) continue;
        project_simplex(spec_, u, p);
        m = std::max(m, std::hypot(u[0] - p[0], u[1] - p[1]));
    }
    return m;
}

namespace {

// positive part of the symmetric 2x2 matrix [H0 H1; H2 H3], packed (p00, p01, p11); optionally a function of it
template <class F>
void sym_fn(const double* H, F fn, double* out) {
    double hs = 0.5 * (H[1] + H[2]);
    double tr = 0.5 * (H[0] + H[3]), df = 0.5 * (H[0] - H[3]);
    double rad = std::hypot(df, hs);
    double l1 = fn(tr + rad), l2 = fn(tr - rad);
    if (rad > 0.0) {
        // eigenvector of the larger eigenvalue at angle phi, cos 2phi = df/rad, sin 2phi = hs/rad
        double c2 = df / rad, s2 = hs / rad;
        double cc = 0.5 * (1 + c2), ss = 0.5 * (1 - c2), cs = 0.5 * s2;
        out[0] = l1 * cc + l2 * ss;
        out[1] = (l1 - l2) * cs;
        out[2] = l1 * ss + l2 * cc;
    } else {
        out[0] = out[2] = l1;
        out[1] = 0.0;
    }
}

} // namespace

void Solver::build_active(const GridField& f) {
    // unknowns: points off the wells plus one cell around them, minus the frame
    const int n = grid_.n;
    const size_t m = grid_.size();
    const double* u0 = f.channel(0);
    const double* u1 = f.channel(1);
    const auto& V = spec_.geom.vertices;
    live_.assign(m, 0);
    for (size_t k = 0; k < m; ++k) {
        bool at_well = false;
        for (const auto& a : V) at_well |= (u0[k] == a[0] && u1[k] == a[1]);
        live_[k] = !at_well;
    }
    act_.clear();
    for (int iy = 0; iy < n; ++iy) {
        const int yd = (iy + n - 1) % n, yu = (iy + 1) % n;
        for (int ix = 0; ix < n; ++ix) {
            const size_t k = grid_.idx(ix, iy);
            if (!fixed_.empty() && fixed_[k]) continue;
            if (live_[k] || live_[grid_.idx((ix + n - 1) % n, iy)] || live_[grid_.idx((ix + 1) % n, iy)] ||
                live_[grid_.idx(ix, yd)] || live_[grid_.idx(ix, yu)])
                act_.push_back(static_cast<uint32_t>(k));
        }
    }
    const size_t na = act_.size();
    pos_.assign(m, static_cast<uint32_t>(na)); // na: the zero slot
    for (size_t p = 0; p < na; ++p) pos_[act_[p]] = static_cast<uint32_t>(p);
    nb_.resize(4 * na);
    for (size_t p = 0; p < na; ++p) {
        const int ix = static_cast<int>(act_[p] % n), iy = static_cast<int>(act_[p] / n);
        nb_[4 * p] = pos_[grid_.idx((ix + n - 1) % n, iy)];
        nb_[4 * p + 1] = pos_[grid_.idx((ix + 1) % n, iy)];
        nb_[4 * p + 2] = pos_[grid_.idx(ix, (iy + n - 1) % n)];
        nb_[4 * p + 3] = pos_[grid_.idx(ix, (iy + 1) % n)];
    }
    info_.active_points = static_cast<long>(na);
}

double Solver::linearize(const GridField& f) {
    // rhs = dt Lap u - a dW(u) on the active set; stores the Hessians; returns sum of W there
    const size_t m = grid_.size(), na = act_.size(), s = na + 1;
    const double* u0 = f.channel(0);
    const double* u1 = f.channel(1);
    const double a = tau_ / (eps_ * eps_);
    const bool implicit = cfg_.scheme == Scheme::SemiImplicitSpectral;
    lap_.resize(2 * m);
    kernels::laplacian5(u0, lap_.data(), grid_.n, grid_.h());
    kernels::laplacian5(u1, lap_.data() + m, grid_.n, grid_.h());
    rhs_.assign(2 * s, 0.0);
    if (implicit) hess_.resize(3 * na);
    std::vector<double> w(na);
    for (size_t p = 0; p < na; ++p) {
        const size_t k = act_[p];
        double u[2] = {u0[k], u1[k]}, g[2], H[4];
        if (!std::isfinite(u[0]) || !std::isfinite(u[1])) {
            std::ostringstream os;
            os << "non-finite value at step " << info_.step << ", grid index " << k;
            throw NumericError(os.str());
        }
        if (!implicit) {
            w[p] = eval_W(spec_, u);
            eval_dW(spec_, u, g);
        } else {
            w[p] = eval_W_hess(spec_, u, g, H);
            hess_[3 * p] = H[0];
            hess_[3 * p + 1] = 0.5 * (H[1] + H[2]);
            hess_[3 * p + 2] = H[3];
        }
        rhs_[p] = tau_ * lap_[k] - a * g[0];
        rhs_[s + p] = tau_ * lap_[m + k] - a * g[1];
    }
    return kernels::sum(w.data(), na);
}

void Solver::build_blocks(bool convex) {
    const size_t na = act_.size();
    const double a = tau_ / (eps_ * eps_);
    const double jac = 4.0 * tau_ / (grid_.h() * grid_.h());
    const double cut = cfg_.concave_cut;
    blk_.resize(3 * na);
    pre_.resize(3 * na);
    for (size_t k = 0; k < na; ++k) {
        const double* h = hess_.data() + 3 * k;
        double H[4] = {h[0], h[1], h[1], h[2]};
        double* B = blk_.data() + 3 * k;
        auto mod = [&](double l) { return 1.0 + a * ((convex || l < -cut) ? std::abs(l) : l); };
        sym_fn(H, mod, B);
        double A00 = B[0] + jac, A01 = B[1], A11 = B[2] + jac;
        double det = A00 * A11 - A01 * A01;
        if (!(A00 > 0.1 && det > 0.01 * A00 * A00)) {
            // diagonal block of A not safely positive: convexify this point
            sym_fn(H, [a](double l) { return 1.0 + a * std::abs(l); }, B);
            A00 = B[0] + jac;
            A01 = B[1];
            A11 = B[2] + jac;
            det = A00 * A11 - A01 * A01;
        }
        double* P = pre_.data() + 3 * k;
        P[0] = A11 / det;
        P[1] = -A01 / det;
        P[2] = A00 / det;
    }
}

double Solver::apply_A(const double* x, double* y) {
    // y = A x on compact vectors (channel c at [c (na+1), ...), slot na of each channel is zero); returns x.y
    const size_t na = act_.size(), s = na + 1;
    const double ih2 = tau_ / (grid_.h() * grid_.h());
    const double* B = blk_.data();
    const uint32_t* nb = nb_.data();
    double acc[4] = {0, 0, 0, 0};
    for (size_t p = 0; p < na; ++p, B += 3, nb += 4) {
        const double x0 = x[p], x1 = x[s + p];
        const double l0 = x[nb[0]] + x[nb[1]] + x[nb[2]] + x[nb[3]] - 4.0 * x0;
        const double l1 = x[s + nb[0]] + x[s + nb[1]] + x[s + nb[2]] + x[s + nb[3]] - 4.0 * x1;
        const double y0 = B[0] * x0 + B[1] * x1 - ih2 * l0;
        const double y1 = B[1] * x0 + B[2] * x1 - ih2 * l1;
        y[p] = y0;
        y[s + p] = y1;
        acc[p & 3] += x0 * y0 + x1 * y1;
    }
    y[na] = y[s + na] = 0.0;
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

double Solver::precondition(const double* r, double* z) {
    // z = P r, returns r.z
    const size_t na = act_.size(), s = na + 1;
    const double* P = pre_.data();
    double acc[4] = {0, 0, 0, 0};
    for (size_t p = 0; p < na; ++p, P += 3) {
        double x0 = r[p], x1 = r[s + p];
        z[p] = P[0] * x0 + P[1] * x1;
        z[s + p] = P[1] * x0 + P[2] * x1;
        acc[p & 3] += x0 * z[p] + x1 * z[s + p];
    }
    z[na] = z[s + na] = 0.0;
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

bool Solver::cg(double* d) {
    // PCG on A d = rhs starting from the d passed in; false on breakdown (indefinite operator) or no
    // convergence. The tolerance is relative to |rhs| whatever the start.
    // Loops are fused; the partial sums have a fixed order, so results are reproducible.
    const size_t na = act_.size(), s = na + 1, m2 = 2 * s;
    auto& r = work_[0];
    auto& z = work_[1];
    auto& p = work_[2];
    auto& q = work_[3];
    z.resize(m2);
    q.resize(m2);
    const double b0 = std::sqrt(kernels::dot(rhs_.data(), rhs_.data(), m2));
    const double stop = cfg_.cg_tol * b0;
    r.resize(m2);
    d[na] = d[s + na] = 0.0;
    apply_A(d, q.data());
    for (size_t k = 0; k < m2; ++k) r[k] = rhs_[k] - q[k];
    double r0 = std::sqrt(kernels::dot(r.data(), r.data(), m2));
    if (!(r0 < b0)) {
        // the guess does not help
        std::fill(d, d + m2, 0.0);
        r = rhs_;
        r0 = b0;
    }
    double rz = precondition(r.data(), z.data());
    p = z;
    const double* P = pre_.data();
    int it = 0;
    bool ok = true;
    if (r0 > stop) {
        ok = false;
        for (; it < cfg_.cg_max_iter; ++it) {
            double pq = apply_A(p.data(), q.data());
            if (!(pq > 0.0)) break;
            const double al = rz / pq;
            double rr[4] = {0, 0, 0, 0}, rzs[4] = {0, 0, 0, 0};
            for (size_t k = 0; k < na; ++k) {
                const size_t k1 = s + k;
                d[k] += al * p[k];
                d[k1] += al * p[k1];
                const double r0k = r[k] - al * q[k], r1k = r[k1] - al * q[k1];
                r[k] = r0k;
                r[k1] = r1k;
                const double* Pk = P + 3 * k;
                const double z0 = Pk[0] * r0k + Pk[1] * r1k, z1 = Pk[1] * r0k + Pk[2] * r1k;
                z[k] = z0;
                z[k1] = z1;
                rr[k & 3] += r0k * r0k + r1k * r1k;
                rzs[k & 3] += r0k * z0 + r1k * z1;
            }
            const double rn = std::sqrt((rr[0] + rr[1]) + (rr[2] + rr[3]));
            if (rn <= stop) {
                ++it;
                ok = true;
                break;
            }
            const double rz2 = (rzs[0] + rzs[1]) + (rzs[2] + rzs[3]);
            const double be = rz2 / rz;
            rz = rz2;
            for (size_t k = 0; k < na; ++k) {
                p[k] = z[k] + be * p[k];
                p[s + k] = z[s + k] + be * p[s + k];
            }
        }
    }
    info_.cg_iterations = it;
    info_.max_cg_iterations = std::max(info_.max_cg_iterations, it);
    return ok;
}

bool Solver::local_step(size_t k, const GridField& f, double* v) const {
    // dv/dt = (sum of the four neighbours - 4v)/h^2 - eps^-2 dW(v) over [0, tau], neighbours frozen,
    // by linearly implicit substeps with step size control
    const int n = grid_.n;
    const int ix = static_cast<int>(k % n), iy = static_cast<int>(k / n);
    const size_t nb[4] = {grid_.idx((ix + n - 1) % n, iy), grid_.idx((ix + 1) % n, iy), grid_.idx(ix, (iy + n - 1) % n),
                          grid_.idx(ix, (iy + 1) % n)};
    double S[2];
    for (int c = 0; c < 2; ++c) {
        const double* u = f.channel(c);
        S[c] = u[nb[0]] + u[nb[1]] + u[nb[2]] + u[nb[3]];
    }
    const double ih2 = 1.0 / (grid_.h() * grid_.h()), ie2 = 1.0 / (eps_ * eps_);
    const double cut = cfg_.concave_cut;
    const double s3 = std::sqrt(3.0);
    double t = 0.0, sg = tau_;
    for (int count = 0; t < tau_; ++count) {
        if (count >= cfg_.local_max_substeps || sg < tau_ * 0x1p-40) return false;
        sg = std::min(sg, tau_ - t);
        double g[2], H[4], B[3];
        eval_W_hess(spec_, v, g, H);
        double r0 = sg * ((S[0] - 4.0 * v[0]) * ih2 - ie2 * g[0]);
        double r1 = sg * ((S[1] - 4.0 * v[1]) * ih2 - ie2 * g[1]);
        const double a = sg * ie2, dg = 1.0 + 4.0 * sg * ih2;
        sym_fn(H, [&](double l) { return dg + a * (l < -cut ? std::abs(l) : l); }, B);
        double det = B[0] * B[2] - B[1] * B[1];
        if (!(B[0] > 0.0 && det > 0.0)) {
            sym_fn(H, [&](double l) { return dg + a * std::abs(l); }, B);
            det = B[0] * B[2] - B[1] * B[1];
        }
        const double d0 = (B[2] * r0 - B[1] * r1) / det, d1 = (B[0] * r1 - B[1] * r0) / det;
        const double w0 = v[0] + d0, w1 = v[1] + d1;
        bool ok = std::isfinite(w0) && std::isfinite(w1) && std::abs(d0) <= cfg_.step_cap && std::abs(d1) <= cfg_.step_cap;
        if (ok && !(w1 >= 0.0 && s3 * w0 - w1 >= 0.0 && s3 * (1.0 - w0) - w1 >= 0.0)) {
            double uu[2] = {w0, w1}, pr[2];
            project_simplex(spec_, uu, pr);
            ok = std::hypot(w0 - pr[0], w1 - pr[1]) <= cfg_.accept_excursion;
        }
        if (ok) {
            v[0] = w0;
            v[1] = w1;
            t += sg;
            sg *= 2.0;
        } else {
            sg *= 0.5;
        }
    }
    return true;
}

bool Solver::solve(GridField& f) {
    // global linearized update; points where it is too large or leaves the simplex (W is steep between the
    // edge tubes and the interior floor, no linearization holds there) are integrated locally instead
    const size_t na = act_.size(), s = na + 1;
    std::vector<double> d(2 * s), nu(2 * na);
    double* u0 = f.channel(0);
    double* u1 = f.channel(1);
    const auto& V = spec_.geom.vertices;
    const double s3 = std::sqrt(3.0);
    if (cfg_.scheme == Scheme::ExplicitFD) {
        d = rhs_;
    } else {
        // warm start from the previous update, rescaled to the current step
        const size_t m = grid_.size();
        if (guess_.size() != 2 * m) guess_.assign(2 * m, 0.0);
        const double ratio = guess_tau_ > 0.0 ? tau_ / guess_tau_ : 0.0;
        auto start = [&] {
            for (size_t p = 0; p < na; ++p) {
                d[p] = ratio * guess_[act_[p]];
                d[s + p] = ratio * guess_[m + act_[p]];
            }
        };
        build_blocks(false);
        start();
        if (!cg(d.data())) {
            ++info_.convex_retries;
            build_blocks(true);
            start();
            if (!cg(d.data())) return false;
        }
        for (uint32_t k : guess_idx_) guess_[k] = guess_[m + k] = 0.0;
        for (size_t p = 0; p < na; ++p) {
            guess_[act_[p]] = d[p];
            guess_[m + act_[p]] = d[s + p];
        }
        guess_idx_ = act_;
        guess_tau_ = tau_;
    }
    for (size_t p = 0; p < na; ++p) {
        const size_t k = act_[p];
        double w[2] = {u0[k] + d[p], u1[k] + d[s + p]};
        bool ok = std::abs(d[p]) <= cfg_.step_cap && std::abs(d[s + p]) <= cfg_.step_cap;
        if (ok && !(w[1] >= 0.0 && s3 * w[0] - w[1] >= 0.0 && s3 * (1.0 - w[0]) - w[1] >= 0.0)) {
            double pr[2];
            project_simplex(spec_, w, pr);
            ok = std::hypot(w[0] - pr[0], w[1] - pr[1]) <= cfg_.accept_excursion;
        }
        if (!ok) {
            if (cfg_.scheme == Scheme::ExplicitFD) {
                left_simplex_ = true;
                return false;
            }
            w[0] = u0[k];
            w[1] = u1[k];
            ++info_.local_updates;
            if (!local_step(k, f, w)) {
                left_simplex_ = true;
                return false;
            }
        }
        // values within snap_tol of a well are put on it
        for (const auto& v : V)
            if (std::abs(w[0] - v[0]) <= cfg_.snap_tol && std::abs(w[1] - v[1]) <= cfg_.snap_tol) {
                w[0] = v[0];
                w[1] = v[1];
            }
        nu[2 * p] = w[0];
        nu[2 * p + 1] = w[1];
    }
    for (size_t p = 0; p < na; ++p) {
        u0[act_[p]] = nu[2 * p];
        u1[act_[p]] = nu[2 * p + 1];
    }
    return true;
}

void Solver::advance(GridField& f, double tau, int depth) {
    const double h2 = grid_.h() * grid_.h();
    tau_ = tau;
    build_active(f);
    const double ge = grad_energy(f);
    const double ws = linearize(f) + frame_w_;
    const double e = h2 * (0.5 * eps_ * ge + ws / eps_);
    if (e_prev_ > 0) info_.max_energy_rise = std::max(info_.max_energy_rise, (e - e_prev_) / e_prev_);
    e_prev_ = e;
    left_simplex_ = false;
    if (solve(f)) return;
    if (depth >= cfg_.max_halvings) {
        std::ostringstream os;
        os << "step " << info_.step << " (t = " << f.t << ") rejected after " << depth
           << " halvings: " << (left_simplex_ ? "the update left the simplex" : "linear solve failed");
        if (left_simplex_) throw MaxPrincipleError(os.str());
        throw NumericError(os.str());
    }
    ++info_.halvings;
    advance(f, 0.5 * tau, depth + 1);
    advance(f, 0.5 * tau, depth + 1);
}

void Solver::check_state(const GridField& f) {
    double ex = excursion(f);
    info_.excursion = ex;
    info_.max_excursion = std::max(info_.max_excursion, ex);
    if (ex > cfg_.simplex_tol) {
        std::ostringstream os;
        os << "maximum principle violated at step " << info_.step << " (t = " << f.t << "): excursion " << ex;
        throw MaxPrincipleError(os.str());
    }
}

void Solver::step(GridField& f) {
    if (f.grid.n != grid_.n || f.channels != 2) throw ConfigError("solver: field does not match the grid");
    advance(f, dt_, 0);
    f.t += dt_;
    ++info_.step;
    info_.t = f.t;
    info_.dt = dt_;
    check_state(f);
}

void Solver::run(GridField& f, double t_end, const Callback& cb) {
    info_ = StepInfo{};
    e_prev_ = -1.0;
    const double span = t_end - f.t;
    if (span < -1e-15) throw ConfigError("run: t_end before the current time");
    long steps = span <= 0 ? 0 : static_cast<long>(std::ceil(span / dt_ * (1 - 1e-12)));
    if (steps > cfg_.max_steps) throw ConfigError("run: step budget exceeded");
    const double t0 = f.t;
    if (steps > 0) dt_ = span / steps;
    info_.t = f.t;
    info_.dt = dt_;
    info_.energy = energy(f);
    check_state(f);
    if (cb) cb(f, info_);
    for (long s = 1; s <= steps; ++s) {
        step(f);
        f.t = t0 + s * dt_; // no drift from repeated addition
        info_.t = f.t;
        bool rec = s == steps || (cfg_.cadence > 0 && s % cfg_.cadence == 0);
        if (rec) {
            info_.energy = energy(f);
            if (e_prev_ > 0) info_.max_energy_rise = std::max(info_.max_energy_rise, (info_.energy - e_prev_) / e_prev_);
            if (cb) cb(f, info_);
        }
    }
}

} // namespace mcf
