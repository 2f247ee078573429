#pragma once

// Norms, L1 errors, the energy and one-sided-slope monitors, scheme-consistency
// checks, and piecewise space-time reconstructions of grid trajectories.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ch/grid.hpp"

namespace ch {

// sqrt(dx * sum_j [v_j^2 + (D_- v)_j^2])
template <class T>
T h1_norm(const VecX<T>& v, const GridSpec<T>& g) {
    return std::sqrt(g.dx * (v.squaredNorm() + d_minus(v, g.dx).squaredNorm()));
}
template <class T>
T h1_norm(const GridFn<T>& f, const GridSpec<T>& g) {
    return h1_norm(f.v, g);
}

template <class T>
T linf_norm(const VecX<T>& v) {
    return v.template lpNorm<Eigen::Infinity>();
}

// dx * sum_j |u_num_j - exact(t, x_j)| over the field's own node set
template <class T, class F>
T l1_error(const GridFn<T>& u_num, F&& exact, T t, const GridSpec<T>& g) {
    T acc = 0;
    for (Eigen::Index j = 0; j < g.nx; ++j) {
        const T x = u_num.site == Site::half_nodes ? g.x_half(j) : g.x_integer(j);
        acc += std::abs(u_num.v[j] - exact(t, x));
    }
    return g.dx * acc;
}

// per-step energy records against the bound e^{t dx^theta} ||u0||_{h1}^2
template <class T = double>
class EnergyLedger {
  public:
    struct Row {
        T t, value, bound, margin;
    };

    EnergyLedger(T theta, T dx, T e0_sq) : theta_(theta), dx_(dx), e0_sq_(e0_sq) {}

    void record(T t, T h1_sq) {
        const T bound = std::exp(t * std::pow(dx_, theta_)) * e0_sq_;
        rows_.push_back({t, h1_sq, bound, bound - h1_sq});
    }

    const std::vector<Row>& rows() const { return rows_; }
    T theta() const { return theta_; }
    T e0_sq() const { return e0_sq_; }

  private:
    T theta_, dx_, e0_sq_;
    std::vector<Row> rows_;
};

template <class T>
struct EnergyCheck {
    bool pass;
    T worst_margin;
};

template <class T>
EnergyCheck<T> check_energy(const EnergyLedger<T>& ledger) {
    bool pass = true;
    T worst = std::numeric_limits<T>::infinity();
    for (const auto& r : ledger.rows()) {
        worst = std::min(worst, r.margin);
        if (r.margin < -T(1e-9) * r.bound) pass = false;
    }
    return {pass, worst};
}

template <class T>
struct OleinikReport {
    T max_q;
    T margin;  // max_j q_j - 2/t
    T c_fit;   // margin / ||u0||_{h1}
};

template <class T>
OleinikReport<T> oleinik_monitor(const GridFn<T>& q, T t, T h1norm0) {
    if (!(t > T(0))) throw std::invalid_argument("oleinik_monitor: requires t > 0");
    const T mq = q.v.maxCoeff();
    const T margin = mq - T(2) / t;
    return {mq, margin, h1norm0 > T(0) ? margin / h1norm0 : T(0)};
}

// max_n max_j |(D_- u^n)_j - q^n_j| over lockstep trajectories
template <class T>
T q_consistency(const std::vector<VecX<T>>& u_traj, const std::vector<VecX<T>>& q_traj, T dx) {
    if (u_traj.size() != q_traj.size())
        throw std::invalid_argument("q_consistency: trajectory lengths differ");
    T worst = 0;
    for (size_t n = 0; n < u_traj.size(); ++n)
        worst = std::max(worst,
                         (d_minus(u_traj[n], dx) - q_traj[n]).template lpNorm<Eigen::Infinity>());
    return worst;
}

// One space-time slab [t^n, t^n+dt] x [a,b]. u is bilinear per cell with
// du/dx = q; q is piecewise constant in x; P is piecewise linear in x; all are
// linear in t between the two levels.
template <class T = double>
struct Reconstruction {
    VecX<T> un, qn, Pn;    // level n (u at half nodes, q and P at integer nodes)
    VecX<T> un1, qn1, Pn1; // level n+1
    T tn{}, dt{};
    GridSpec<T> g;
};

namespace detail {
template <class T>
T slab_fraction(const Reconstruction<T>& r, T t) {
    const T eps = T(1e-12) * (T(1) + std::abs(r.tn) + r.dt);
    if (t < r.tn - eps || t > r.tn + r.dt + eps)
        throw std::domain_error("reconstruction: time outside slab");
    if (r.dt == T(0)) return T(0);
    T s = (t - r.tn) / r.dt;
    return std::min(std::max(s, T(0)), T(1));
}
template <class T>
void check_x(const Reconstruction<T>& r, T x) {
    const T eps = T(1e-12) * (T(1) + std::abs(r.g.a) + std::abs(r.g.b));
    if (x < r.g.a - eps || x > r.g.b + eps)
        throw std::domain_error("reconstruction: x outside domain");
}
}  // namespace detail

template <class T>
T reconstruct_u(const Reconstruction<T>& r, T t, T x) {
    detail::check_x(r, x);
    const T s = detail::slab_fraction(r, t);
    const auto& g = r.g;
    // cell I_j = [x_{j-1/2}, x_{j+1/2}); offset measured from the left edge
    const T rr = (x - (g.a - T(0.5) * g.dx)) / g.dx;
    Eigen::Index j = Eigen::Index(std::floor(rr));
    const T off = (rr - T(j)) * g.dx;
    j %= g.nx;
    if (j < 0) j += g.nx;
    const Eigen::Index jl = (j + g.nx - 1) % g.nx;  // u_{j-1/2}
    const T ul = (T(1) - s) * r.un[jl] + s * r.un1[jl];
    const T qj = (T(1) - s) * r.qn[j] + s * r.qn1[j];
    return ul + off * qj;
}

template <class T>
T reconstruct_q(const Reconstruction<T>& r, T t, T x) {
    detail::check_x(r, x);
    const T s = detail::slab_fraction(r, t);
    Eigen::Index j = r.g.cell_of(x);
    return (T(1) - s) * r.qn[j] + s * r.qn1[j];
}

template <class T>
T reconstruct_P(const Reconstruction<T>& r, T t, T x) {
    detail::check_x(r, x);
    const T s = detail::slab_fraction(r, t);
    const auto& g = r.g;
    // P cells are [x_j, x_{j+1})
    const T rr = (x - g.a) / g.dx;
    Eigen::Index j = Eigen::Index(std::floor(rr));
    const T off = rr - T(j);
    j %= g.nx;
    if (j < 0) j += g.nx;
    const Eigen::Index jr = (j + 1) % g.nx;
    const T pl = (T(1) - s) * r.Pn[j] + s * r.Pn1[j];
    const T pr = (T(1) - s) * r.Pn[jr] + s * r.Pn1[jr];
    return pl + off * (pr - pl);
}

}  // namespace ch
