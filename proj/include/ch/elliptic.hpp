#pragma once

// Discrete Helmholtz solve P - D_-D_+ P = f on the periodic lattice, two ways:
//  * solve_kernel: convolution with the lattice Green's function h e^{-kappa|j|}
//    (minimal-image distance, tail truncated at e^{-kappa d} < 1e-15)
//  * HelmholtzSolver / solve_direct: sparse Cholesky of the SPD cyclic
//    tridiagonal system, factored once per grid
// The two cross-validate each other; the direct solver is the one used inside
// time stepping.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ch/grid.hpp"

namespace ch {

template <class T = double>
struct EllipticKernel {
    T dx{};
    T kappa{};
    T h{};
};

template <class T>
EllipticKernel<T> kernel_constants(T dx) {
    if (!(dx > T(0))) throw std::invalid_argument("kernel_constants: requires dx > 0");
    const T kappa = std::log(T(1) + dx * dx / T(2) + (dx / T(2)) * std::sqrt(T(4) + dx * dx));
    const T h = T(1) / (T(1) + T(2) * (T(1) - std::exp(-kappa)) / (dx * dx));
    return {dx, kappa, h};
}
inline EllipticKernel<double> kernel_constants(double dx) { return kernel_constants<double>(dx); }

// P_j = h * sum_i e^{-kappa d(j,i)} f_i, d = minimal-image lattice distance
template <class T>
GridFn<T> solve_kernel(const GridFn<T>& f, const EllipticKernel<T>& k) {
    const Eigen::Index n = f.size();
    const Eigen::Index half = n / 2;
    // weights by distance, truncated where they stop mattering
    std::vector<T> w(static_cast<size_t>(half) + 1);
    Eigen::Index dmax = 0;
    for (Eigen::Index d = 0; d <= half; ++d) {
        w[static_cast<size_t>(d)] = std::exp(-k.kappa * T(d));
        if (w[static_cast<size_t>(d)] >= T(1e-15)) dmax = d;
    }
    GridFn<T> P{VecX<T>::Zero(n), Site::integer_nodes};
    for (Eigen::Index j = 0; j < n; ++j) {
        T acc = w[0] * f.v[j];
        for (Eigen::Index d = 1; d <= dmax; ++d) {
            Eigen::Index l = j - d;
            if (l < 0) l += n;
            Eigen::Index r = j + d;
            if (r >= n) r -= n;
            acc += w[static_cast<size_t>(d)] * (f.v[l] + f.v[r]);
        }
        P.v[j] = k.h * acc;
    }
    return P;
}

// I - D_-D_+ as a cyclic tridiagonal SPD matrix, Cholesky-factored once per grid.
// Solves run against the constant-shifted source so that f == const reproduces
// bitwise; one iterative-refinement pass pushes the residual to roundoff.
template <class T = double>
class HelmholtzSolver {
  public:
    explicit HelmholtzSolver(const GridSpec<T>& g) : n_(g.nx), dx_(g.dx) {
        const T k = T(1) / (dx_ * dx_);
        Eigen::SparseMatrix<T> A(n_, n_);
        std::vector<Eigen::Triplet<T>> trip;
        trip.reserve(static_cast<size_t>(3 * n_));
        for (Eigen::Index j = 0; j < n_; ++j) {
            trip.emplace_back(j, j, T(1) + T(2) * k);
            trip.emplace_back(j, (j + 1) % n_, -k);
            trip.emplace_back(j, (j + n_ - 1) % n_, -k);
        }
        A.setFromTriplets(trip.begin(), trip.end());
        A_ = A;
        llt_.compute(A_);
        if (llt_.info() != Eigen::Success)
            throw std::runtime_error("HelmholtzSolver: factorization failed");
    }

    VecX<T> solve(const VecX<T>& f) const {
        const T f0 = f[0];
        VecX<T> g = f.array() - f0;
        VecX<T> y = llt_.solve(g);
        y += llt_.solve(VecX<T>(g - A_ * y));
        return y.array() + f0;
    }

    GridFn<T> solve(const GridFn<T>& f) const { return {solve(f.v), Site::integer_nodes}; }

    Eigen::Index size() const { return n_; }
    T dx() const { return dx_; }

  private:
    Eigen::Index n_;
    T dx_;
    Eigen::SparseMatrix<T> A_;
    Eigen::SimplicialLLT<Eigen::SparseMatrix<T>> llt_;
};

template <class T>
GridFn<T> solve_direct(const GridFn<T>& f, const GridSpec<T>& g) {
    return HelmholtzSolver<T>(g).solve(f);
}

// f_j = (u_{j+1/2} v 0)^2 + (u_{j-1/2} ^ 0)^2 + q_j^2 / 2  (always >= 0)
template <class T>
GridFn<T> p_source(const GridFn<T>& u, const GridFn<T>& q, const GridSpec<T>& g) {
    (void)g;
    assert((q.v - d_minus(u.v, g.dx)).template lpNorm<Eigen::Infinity>() <=
           T(1e-9) * (T(1) + u.v.template lpNorm<Eigen::Infinity>() / g.dx));
    VecX<T> up = u.v.cwiseMax(T(0));
    VecX<T> un_left = rolled(VecX<T>(u.v.cwiseMin(T(0))), 1);
    GridFn<T> f{VecX<T>(up.array().square() + un_left.array().square() +
                        T(0.5) * q.v.array().square()),
                Site::integer_nodes};
    return f;
}

}  // namespace ch
