#include <cmath>
#include <numbers>

#include "ch/elliptic.hpp"
#include "ch/diagnostics.hpp"
#include "ch/grid.hpp"
#include "doctest.h"
#include "fields.hpp"

using namespace ch;
using testing_fields::rough_field;

namespace {
VecX<double> helmholtz_residual(const VecX<double>& P, const VecX<double>& f, double dx) {
    return P - d_minus(d_plus(P, dx), dx) - f;
}
}  // namespace

TEST_CASE("kernel constants at dx = 1") {
    const auto k = kernel_constants(1.0);
    CHECK(k.kappa == doctest::Approx(std::log((3.0 + std::sqrt(5.0)) / 2.0)).epsilon(1e-15));
    CHECK(k.kappa == doctest::Approx(0.9624236501192069).epsilon(1e-15));
    CHECK(k.h == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-15));
    CHECK_THROWS_AS(kernel_constants(0.0), std::invalid_argument);
    CHECK_THROWS_AS(kernel_constants(-0.5), std::invalid_argument);
}

TEST_CASE("kernel constants small-dx behaviour") {
    for (double dx : {1e-1, 1e-2, 1e-3}) {
        const auto k = kernel_constants(dx);
        CHECK(std::abs(k.h / dx - 0.5) <= dx);
        CHECK(std::abs((std::exp(k.kappa) - 1.0) / dx - 1.0) <= dx);
        CHECK(k.h <= dx / 2 + 1e-16);
    }
}

TEST_CASE("constant and zero sources") {
    const auto g = make_grid(0.0, 64.0, 64);
    const HelmholtzSolver<double> solver(g);
    const GridFn<double> zero{VecX<double>::Zero(64), Site::integer_nodes};
    CHECK(solver.solve(zero).v.lpNorm<Eigen::Infinity>() == 0.0);

    const GridFn<double> cst{VecX<double>::Constant(64, 3.75), Site::integer_nodes};
    CHECK((solver.solve(cst).v.array() == 3.75).all());  // bitwise fixed point

    const auto kc = kernel_constants(g.dx);
    const auto Pk = solve_kernel(cst, kc);
    CHECK((Pk.v.array() - 3.75).abs().maxCoeff() < 1e-12);
}

TEST_CASE("impulse response matches the decay column") {
    const auto g = make_grid(0.0, 64.0, 64);
    const auto kc = kernel_constants(g.dx);
    GridFn<double> f{VecX<double>::Zero(64), Site::integer_nodes};
    f.v[0] = 1.0;
    const auto P = solve_direct(f, g);
    for (Eigen::Index j = 0; j < 64; ++j) {
        const double d = std::min<double>(double(j), double(64 - j));
        // absolute tolerance: near the antipode the wrapped tail (~2e-14)
        // dominates the minimal-image column
        CHECK(P.v[j] ==
              doctest::Approx(kc.h * std::exp(-kc.kappa * d)).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("decay column solves the impulse problem away from the wrap") {
    // apply (I - D_-D_+) to G_j = h e^{-kappa|j - j0|}; interior nodes give the
    // unit impulse exactly (the wrap spoils only the two seam nodes)
    const auto g = make_grid(0.0, 64.0, 64);
    const auto kc = kernel_constants(g.dx);
    const Eigen::Index j0 = 32;
    VecX<double> G(64);
    for (Eigen::Index j = 0; j < 64; ++j)
        G[j] = kc.h * std::exp(-kc.kappa * std::abs(double(j - j0)));
    const VecX<double> r = G - d_minus(d_plus(G, g.dx), g.dx);
    for (Eigen::Index j = 1; j < 63; ++j)
        CHECK(r[j] == doctest::Approx(j == j0 ? 1.0 : 0.0).epsilon(1e-13).scale(1.0));
}

TEST_CASE("kernel and direct solver agree") {
    const auto g = make_grid(0.0, 64.0, 64);
    const HelmholtzSolver<double> solver(g);
    const auto kc = kernel_constants(g.dx);
    for (unsigned seed = 1; seed <= 20; ++seed) {
        const GridFn<double> f{rough_field(64, seed), Site::integer_nodes};
        const auto Pd = solver.solve(f);
        const auto Pk = solve_kernel(f, kc);
        CHECK((Pd.v - Pk.v).lpNorm<Eigen::Infinity>() <=
              1e-8 * f.v.lpNorm<Eigen::Infinity>());
        CHECK(helmholtz_residual(Pd.v, f.v, g.dx).lpNorm<Eigen::Infinity>() <= 1e-12);
    }
}

TEST_CASE("positive sources give positive solutions") {
    const auto g = make_grid(0.0, 32.0, 32);
    const HelmholtzSolver<double> solver(g);
    const auto kc = kernel_constants(g.dx);
    for (unsigned seed = 50; seed < 55; ++seed) {
        const GridFn<double> f{rough_field(32, seed).cwiseAbs(), Site::integer_nodes};
        CHECK(solver.solve(f).v.minCoeff() >= -1e-14);
        CHECK(solve_kernel(f, kc).v.minCoeff() >= -1e-14);
    }
}

TEST_CASE("solution bounds in terms of the source") {
    // ||P||_inf <= (1/2)||f||_l1 and ||D_+P||_inf <= ||f||_l1 (dx-weighted l1);
    // ||P||_h1 <= C ||f||_l2 with one modest constant across resolutions
    double worst_h1_ratio = 0.0;
    for (Eigen::Index nx : {64, 256, 1024}) {
        const auto g = make_grid(0.0, 40.0, nx);
        const HelmholtzSolver<double> solver(g);
        for (unsigned seed = 7; seed < 12; ++seed) {
            const VecX<double> f = rough_field(nx, seed + unsigned(nx));
            const VecX<double> P = solver.solve(f);
            const double l1 = g.dx * f.cwiseAbs().sum();
            const double l2 = std::sqrt(g.dx * f.squaredNorm());
            CHECK(P.lpNorm<Eigen::Infinity>() <= 0.5 * l1 * (1 + 1e-12));
            CHECK(d_plus(P, g.dx).lpNorm<Eigen::Infinity>() <= l1 * (1 + 1e-12));
            worst_h1_ratio = std::max(worst_h1_ratio, h1_norm(P, g) / l2);
        }
    }
    CHECK(worst_h1_ratio <= 1.5);

    // for one fixed smooth source the ratio converges under refinement
    double lo = 1e300, hi = 0.0;
    for (Eigen::Index nx : {64, 256, 1024}) {
        const auto g = make_grid(0.0, 40.0, nx);
        const HelmholtzSolver<double> solver(g);
        VecX<double> f(nx);
        for (Eigen::Index j = 0; j < nx; ++j) {
            const double x = g.x_integer(j);
            f[j] = 1.0 + std::sin(2 * std::numbers::pi * x / 40.0) +
                   0.5 * std::cos(6 * std::numbers::pi * x / 40.0);
        }
        const VecX<double> P = solver.solve(f);
        const double ratio = h1_norm(P, g) / std::sqrt(g.dx * f.squaredNorm());
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    CHECK(hi <= 1.05 * lo);
}

TEST_CASE("p_source closed forms") {
    const auto g = make_grid(0.0, 8.0, 16);
    auto source_of = [&](double c) {
        const GridFn<double> u{VecX<double>::Constant(16, c), Site::half_nodes};
        const GridFn<double> q{VecX<double>::Zero(16), Site::integer_nodes};
        return p_source(u, q, g);
    };
    CHECK(source_of(0.0).v.lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((source_of(2.0).v.array() == 4.0).all());
    CHECK((source_of(-3.0).v.array() == 9.0).all());

    // general fields: source is nonnegative and dominates q^2/2
    const auto gw = make_grid(-10.0, 30.0, 128);
    const auto u = GridFn<double>{testing_fields::smooth_field(gw, 99), Site::half_nodes};
    const GridFn<double> q{d_minus(u.v, gw.dx), Site::integer_nodes};
    const auto f = p_source(u, q, gw);
    CHECK(f.v.minCoeff() >= 0.0);
    CHECK(((f.v - 0.5 * q.v.array().square().matrix()).array() >= -1e-15).all());
}
