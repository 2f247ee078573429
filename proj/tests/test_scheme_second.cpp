#include <cmath>

#include "ch/diagnostics.hpp"
#include "ch/peakons.hpp"
#include "ch/scheme_second.hpp"
#include "doctest.h"

using namespace ch;

namespace {
GridFn<double> peakon_cells(const GridSpec<double>& g, double t = 0.0) {
    GridFn<double> u{VecX<double>(g.nx), Site::integer_nodes};
    for (Eigen::Index j = 0; j < g.nx; ++j)
        u.v[j] = single_peakon_cell_average(t, g.x_integer(j), g.dx);
    return u;
}
GridFn<double> two_peakon_cells(const GridSpec<double>& g, double t = 0.0) {
    GridFn<double> u{VecX<double>(g.nx), Site::integer_nodes};
    for (Eigen::Index j = 0; j < g.nx; ++j)
        u.v[j] = two_peakon_cell_average(t, g.x_integer(j), g.dx);
    return u;
}
}  // namespace

TEST_CASE("predictor preserves trivial states") {
    const auto g = make_grid(0.0, 8.0, 32);
    const HelmholtzSolver<double> solver(g);
    for (double c : {0.0, 1.3, -0.6}) {
        const GridFn<double> u{VecX<double>::Constant(32, c), Site::integer_nodes};
        const auto pred = predict_half_step(u, 0.05, g, solver);
        CHECK((pred.v.array() == c).all());
        CHECK(pred.site == Site::half_nodes);
    }
    const GridFn<double> u{VecX<double>::Zero(32), Site::integer_nodes};
    CHECK_THROWS_AS(predict_half_step(u, 0.0, g, solver), std::invalid_argument);
}

TEST_CASE("interface flux closed forms") {
    const auto g = make_grid(0.0, 8.0, 16);
    for (double c : {2.0, -2.0}) {
        const GridFn<double> u{VecX<double>::Constant(16, c), Site::half_nodes};
        const GridFn<double> P{VecX<double>::Constant(16, c * c), Site::integer_nodes};
        const auto F = interface_flux(u, P, g);
        CHECK((F.v.array() == 2 * c * c).all());
        CHECK(d_minus(F.v, g.dx).lpNorm<Eigen::Infinity>() == 0.0);
    }
    const GridFn<double> z{VecX<double>::Zero(16), Site::half_nodes};
    const GridFn<double> Pz{VecX<double>::Zero(16), Site::integer_nodes};
    CHECK(interface_flux(z, Pz, g).v.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("full step preserves trivial states bitwise") {
    const auto g = make_grid(0.0, 8.0, 32);
    const HelmholtzSolver<double> solver(g);
    for (double c : {0.0, 0.9, -0.35}) {
        CellState<double> s{0.0, 0, {VecX<double>::Constant(32, c), Site::integer_nodes}};
        const auto next = step_second(s, 0.04, g, solver);
        CHECK((next.u.v.array() == c).all());
        CHECK(next.n == 1);
    }
    CellState<double> s{0.0, 0, {VecX<double>::Zero(32), Site::integer_nodes}};
    CHECK_THROWS_AS(step_second(s, -0.1, g, solver), std::invalid_argument);
}

TEST_CASE("pressure refresh count changes the step only slightly") {
    const auto g = make_grid(-10.0, 30.0, 128);
    const HelmholtzSolver<double> solver(g);
    const CellState<double> s{0.0, 0, peakon_cells(g)};
    const auto two = step_second(s, 0.01, g, solver, 2);
    const auto one = step_second(s, 0.01, g, solver, 1);
    const double diff = (two.u.v - one.u.v).lpNorm<Eigen::Infinity>();
    CHECK(diff > 0.0);     // the choice is observable...
    CHECK(diff < 1e-3);    // ...but only at the size of the half-step pressure drift
}

TEST_CASE("run returns the initial state at t_final = 0") {
    const auto g = make_grid(-10.0, 30.0, 64);
    const auto u0 = peakon_cells(g);
    RunParams<double> params;
    params.t_final = 0.0;
    int fired = 0;
    const auto s = run_second_order(u0, params, g,
                                    [&](const CellState<double>&) { ++fired; });
    CHECK(fired == 1);
    CHECK(s.n == 0);
    CHECK((s.u.v.array() == u0.v.array()).all());
}

TEST_CASE("constant data survives a full run unchanged") {
    const auto g = make_grid(0.0, 8.0, 32);
    const GridFn<double> u0{VecX<double>::Constant(32, -0.8), Site::integer_nodes};
    RunParams<double> params;
    params.t_final = 1.0;
    const auto s = run_second_order(u0, params, g);
    CHECK(s.t == 1.0);
    CHECK((s.u.v.array() == -0.8).all());
}

TEST_CASE("single-peakon error level") {
    RunParams<double> params;
    params.t_final = 20.0;
    params.cfl.nu = 0.3;

    const auto g7 = make_grid(-10.0, 30.0, 128);
    const auto s7 = run_second_order(peakon_cells(g7), params, g7);
    const double e7 =
        l1_error(s7.u, [](double t, double x) { return single_peakon(t, x); }, 20.0, g7);
    CHECK(e7 == doctest::Approx(2.7348890832900969).epsilon(1e-12));  // regression pin

    const auto g9 = make_grid(-10.0, 30.0, 512);
    const auto s9 = run_second_order(peakon_cells(g9), params, g9);
    const double e9 =
        l1_error(s9.u, [](double t, double x) { return single_peakon(t, x); }, 20.0, g9);
    CHECK(e9 == doctest::Approx(0.60).epsilon(0.15));
}

TEST_CASE("two-peakon error level and first/second ordering") {
    RunParams<double> params;
    params.t_final = 25.0;
    params.cfl.nu = 0.3;
    const auto g10 = make_grid(-15.0, 25.0, 1024);
    const auto s10 = run_second_order(two_peakon_cells(g10), params, g10);
    const double e10 =
        l1_error(s10.u, [](double t, double x) { return two_peakon(t, x); }, 25.0, g10);
    CHECK(e10 == doctest::Approx(0.63).epsilon(0.15));
}
