#pragma once

// First-order explicit upwind scheme on the staggered grid:
//   u^{n+1}_{j+1/2} = u_{j+1/2} - dt [ (u v 0) q_j + (u ^ 0) q_{j+1} + (D_+ P)_j ]
// with q = D_- u and P from the discrete Helmholtz solve of p_source. The
// companion q-scheme is the exact D_- image of the u-scheme. Two time-step
// controllers: the strict (energy-estimate) rule and the practical transport rule.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ch/diagnostics.hpp"
#include "ch/elliptic.hpp"
#include "ch/grid.hpp"

namespace ch {

enum class CflMode { strict, practical };

template <class T = double>
struct CflPolicy {
    CflMode mode = CflMode::practical;
    T theta = 1;    // strict mode exponent
    T bigC = 1;     // strict mode constant
    T nu = 0.9;     // practical mode safety factor, in (0, 1]
    T h1norm0 = 0;  // ||u^0||_{h1}, filled in by the runners for strict mode
};

template <class T>
T dt_strict(T dx, const CflPolicy<T>& p) {
    const T safety = T(0.9);
    return safety * std::log(T(1) + std::pow(dx, p.theta)) * dx * dx /
           (p.bigC * p.h1norm0 * p.h1norm0 * (T(1) + dx * dx));
}

template <class T>
T dt_practical(const VecX<T>& u, T dx, const CflPolicy<T>& p) {
    const T speed = std::max(T(1), u.template lpNorm<Eigen::Infinity>());
    return p.nu * dx / speed;
}
template <class T>
T dt_practical(const GridFn<T>& u, T dx, const CflPolicy<T>& p) {
    return dt_practical(u.v, dx, p);
}

class instability_error : public std::runtime_error {
  public:
    instability_error(long step, double t)
        : std::runtime_error("non-finite values at step " + std::to_string(step) + ", t = " +
                             std::to_string(t)),
          step(step),
          t(t) {}
    long step;
    double t;
};

template <class T = double>
struct StaggeredState {
    T t{};
    long n{};
    GridFn<T> u;                 // half-integer nodes
    std::optional<GridFn<T>> q;  // companion, integer nodes
    GridFn<T> P;                 // pressure used in the last accepted step
};

template <class T = double>
struct RunParams {
    T t_final = 0;
    CflPolicy<T> cfl;
    bool evolve_q = false;       // first-order runs only
    std::vector<T> event_times;  // sorted observer times; t_final is always added
    std::function<void(const StaggeredState<T>&)> on_step;  // first-order, every step
};

namespace detail {

// u-update given the level-n pressure; q_now must equal D_- u
template <class T>
VecX<T> u_update(const VecX<T>& u, const VecX<T>& q_now, const VecX<T>& P, T dt, T dx) {
    VecX<T> up = u.cwiseMax(T(0));
    VecX<T> un = u.cwiseMin(T(0));
    return u - dt * (up.cwiseProduct(q_now) + un.cwiseProduct(d_plus(u, dx)) + d_plus(P, dx));
}

// companion q-update, the D_- image of u_update:
//   q - dt [ (u_{j-1/2} v 0) D_-q + (u_{j+1/2} ^ 0) D_+q
//            + q^2/2 + P - (u_{j+1/2} v 0)^2 - (u_{j-1/2} ^ 0)^2 ]
template <class T>
VecX<T> q_update(const VecX<T>& u, const VecX<T>& q, const VecX<T>& P, T dt, T dx) {
    VecX<T> up = u.cwiseMax(T(0));
    VecX<T> un = u.cwiseMin(T(0));
    VecX<T> src = T(0.5) * q.array().square().matrix() + P - VecX<T>(up.array().square()) -
                  VecX<T>(rolled(un, 1).array().square());
    return q - dt * (rolled(up, 1).cwiseProduct(d_minus(q, dx)) +
                     un.cwiseProduct(d_plus(q, dx)) + src);
}

template <class T>
VecX<T> pressure_of(const VecX<T>& u, const GridSpec<T>& g, const HelmholtzSolver<T>& solver) {
    GridFn<T> uf{u, Site::half_nodes};
    GridFn<T> qf{d_minus(u, g.dx), Site::integer_nodes};
    return solver.solve(p_source(uf, qf, g).v);
}

// shared time loop: steps until t_final, clipping steps to land exactly on
// every event time and on t_final; fires observer at each event time
template <class State, class T, class DtFn, class StepFn, class Observer>
State run_loop(State s, T t_final, std::vector<T> events, DtFn&& dt_of, StepFn&& advance,
               Observer&& observe, const std::function<void(const State&)>& on_step) {
    events.push_back(t_final);
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());
    size_t ev = 0;
    auto fire_due = [&]() {
        while (ev < events.size() &&
               events[ev] <= s.t + T(1e-12) * (T(1) + std::abs(s.t)))
            observe(s), ++ev;
    };
    fire_due();
    while (s.t < t_final) {
        T target = ev < events.size() ? std::min(events[ev], t_final) : t_final;
        T dt = dt_of(s);
        bool lands = false;
        if (s.t + dt >= target) {
            dt = target - s.t;
            lands = true;
        }
        if (dt > T(0)) {
            s = advance(s, dt);
            if (lands) s.t = target;
            if (on_step) on_step(s);
        } else {
            s.t = target;
        }
        fire_due();
    }
    return s;
}

}  // namespace detail

template <class T>
StaggeredState<T> step_u(const StaggeredState<T>& s, T dt, const GridSpec<T>& g,
                         const HelmholtzSolver<T>& solver) {
    if (!(dt > T(0))) throw std::invalid_argument("step_u: requires dt > 0");
    VecX<T> q_now = d_minus(s.u.v, g.dx);
    VecX<T> P = detail::pressure_of(s.u.v, g, solver);
    VecX<T> unew = detail::u_update(s.u.v, q_now, P, dt, g.dx);
    if (!unew.allFinite()) throw instability_error(s.n + 1, double(s.t + dt));
    return {s.t + dt, s.n + 1, {std::move(unew), Site::half_nodes}, s.q,
            {std::move(P), Site::integer_nodes}};
}

// companion update from the same time level; pair with step_u using the same dt
template <class T>
GridFn<T> step_q(const StaggeredState<T>& s, T dt, const GridSpec<T>& g,
                 const HelmholtzSolver<T>& solver) {
    if (!s.q) throw std::invalid_argument("step_q: state has no companion q");
    VecX<T> P = detail::pressure_of(s.u.v, g, solver);
    VecX<T> qnew = detail::q_update(s.u.v, s.q->v, P, dt, g.dx);
    if (!qnew.allFinite()) throw instability_error(s.n + 1, double(s.t + dt));
    return {std::move(qnew), Site::integer_nodes};
}

template <class T, class Observer>
StaggeredState<T> run_first_order(const GridFn<T>& u0, const RunParams<T>& params,
                                  const GridSpec<T>& g, Observer&& observer) {
    if (params.t_final < T(0)) throw std::invalid_argument("run_first_order: t_final < 0");
    HelmholtzSolver<T> solver(g);

    CflPolicy<T> cfl = params.cfl;
    if (cfl.mode == CflMode::strict) cfl.h1norm0 = h1_norm(u0, g);

    StaggeredState<T> s{T(0), 0, u0, std::nullopt,
                        {VecX<T>::Zero(g.nx), Site::integer_nodes}};
    if (params.evolve_q) s.q = init_q(u0, g);

    auto dt_of = [&](const StaggeredState<T>& st) {
        return cfl.mode == CflMode::strict ? dt_strict(g.dx, cfl)
                                           : dt_practical(st.u, g.dx, cfl);
    };
    // one pressure solve per step, shared by the paired u and q updates
    auto advance = [&](const StaggeredState<T>& st, T dt) {
        VecX<T> q_now = d_minus(st.u.v, g.dx);
        GridFn<T> qf{q_now, Site::integer_nodes};
        VecX<T> P = solver.solve(p_source(st.u, qf, g).v);
        VecX<T> unew = detail::u_update(st.u.v, q_now, P, dt, g.dx);
        if (!unew.allFinite()) throw instability_error(st.n + 1, double(st.t + dt));
        StaggeredState<T> next{st.t + dt, st.n + 1, {std::move(unew), Site::half_nodes},
                               std::nullopt, {VecX<T>(), Site::integer_nodes}};
        if (st.q) {
            VecX<T> qnew = detail::q_update(st.u.v, st.q->v, P, dt, g.dx);
            if (!qnew.allFinite()) throw instability_error(st.n + 1, double(st.t + dt));
            next.q = GridFn<T>{std::move(qnew), Site::integer_nodes};
        }
        next.P = {std::move(P), Site::integer_nodes};
        return next;
    };
    return detail::run_loop(std::move(s), params.t_final, params.event_times, dt_of, advance,
                            observer, params.on_step);
}

template <class T>
StaggeredState<T> run_first_order(const GridFn<T>& u0, const RunParams<T>& params,
                                  const GridSpec<T>& g) {
    return run_first_order(u0, params, g, [](const StaggeredState<T>&) {});
}

}  // namespace ch
