#pragma once

// Closed-form reference solutions for the test problems: a single peakon, an
// interacting two-peakon pair (speeds 1 and 1/2), and peakon-antipeakon data.
// Also exact cell averages of these profiles for finite-volume initialization.

#include <cmath>

namespace ch {

// numerically stable log(cosh t)
inline double log_cosh(double t) {
    const double a = std::abs(t);
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

inline double single_peakon(double t, double x) { return std::exp(-std::abs(x - t)); }

namespace detail {
// two-peakon coefficients at time t; e = e^{(t-10)/2}.
// Exact solution of the two-peakon ODE system with asymptotic speeds {1, 1/2}:
// invariants m1+m2 = 3/2 and (m1^2+m2^2)/2 + m1 m2 e^{x1-x2} = 5/8 hold for all t.
struct TwoPeakon {
    double x1, x2, m1, m2;
};
inline TwoPeakon two_peakon_coeffs(double t) {
    const double e = std::exp((t - 10.0) / 2.0);
    return {std::log(60.0 * e * e / (e + 6.0)), std::log(40.0 * e * e + 60.0 * e),
            (e + 6.0) / (2.0 * e + 6.0), (2.0 * e + 3.0) / (2.0 * e + 6.0)};
}
}  // namespace detail

inline double two_peakon(double t, double x) {
    const auto c = detail::two_peakon_coeffs(t);
    return c.m1 * std::exp(-std::abs(x - c.x1)) + c.m2 * std::exp(-std::abs(x - c.x2));
}

// antipeakon on the left at -y(6), peakon on the right at +y(6): a separating pair
inline double antipeakon_initial(double x) {
    const double y6 = log_cosh(6.0);
    return -std::tanh(6.0) * (std::exp(-std::abs(x + y6)) - std::exp(-std::abs(x - y6)));
}

// peakon at -y(6) moving right into an antipeakon at +y(6); collides near t = 6
inline double colliding_pair_initial(double x) { return -antipeakon_initial(x); }

// conservative peakon-antipeakon solution: u(1, x) = 0, pair re-emerges for t > 1
inline double conservative_pair(double t, double x) {
    const double y = log_cosh(t - 1.0);
    return std::tanh(t - 1.0) * (std::exp(-std::abs(x - y)) - std::exp(-std::abs(x + y)));
}

// exact average of e^{-|x-c|} over the cell [xc - dx/2, xc + dx/2]
inline double exp_abs_cell_average(double c, double xc, double dx) {
    const double lo = xc - c - 0.5 * dx;
    const double hi = xc - c + 0.5 * dx;
    if (hi <= 0.0) return (std::exp(hi) - std::exp(lo)) / dx;
    if (lo >= 0.0) return (std::exp(-lo) - std::exp(-hi)) / dx;
    return (2.0 - std::exp(lo) - std::exp(-hi)) / dx;
}

inline double single_peakon_cell_average(double t, double xc, double dx) {
    return exp_abs_cell_average(t, xc, dx);
}

inline double two_peakon_cell_average(double t, double xc, double dx) {
    const auto c = detail::two_peakon_coeffs(t);
    return c.m1 * exp_abs_cell_average(c.x1, xc, dx) + c.m2 * exp_abs_cell_average(c.x2, xc, dx);
}

inline double colliding_pair_cell_average(double xc, double dx) {
    const double y6 = log_cosh(6.0);
    return std::tanh(6.0) *
           (exp_abs_cell_average(-y6, xc, dx) - exp_abs_cell_average(y6, xc, dx));
}

}  // namespace ch
