#pragma once

// Uniform staggered periodic grid on [a,b]: u lives at half-integer nodes
// x_{j+1/2} = a + (j+1/2)dx, companion fields (P, q) at integer nodes x_j = a + j dx.
// Array index j of a half-node field means x_{j+1/2}; of an integer-node field, x_j.
// All indexing wraps modulo nx.

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ch {

template <class T>
using VecX = Eigen::Matrix<T, Eigen::Dynamic, 1>;

enum class Site { integer_nodes, half_nodes };

template <class T = double>
struct GridSpec {
    T a{};
    T b{};
    Eigen::Index nx{};
    T dx{};

    T x_integer(Eigen::Index j) const { return a + T(j) * dx; }
    T x_half(Eigen::Index j) const { return a + (T(j) + T(0.5)) * dx; }

    VecX<T> integer_nodes() const {
        return VecX<T>::LinSpaced(nx, a, a + T(nx - 1) * dx);
    }
    VecX<T> half_nodes() const {
        return VecX<T>::LinSpaced(nx, a + T(0.5) * dx, a + (T(nx) - T(0.5)) * dx);
    }
    // cell index j with x in [x_{j-1/2}, x_{j+1/2}), wrapped
    Eigen::Index cell_of(T x) const {
        auto j = Eigen::Index(std::floor((x - (a - T(0.5) * dx)) / dx));
        j %= nx;
        return j < 0 ? j + nx : j;
    }
};

template <class T = double>
struct GridFn {
    VecX<T> v;
    Site site{Site::half_nodes};

    Eigen::Index size() const { return v.size(); }
    T& operator[](Eigen::Index j) { return v[j]; }
    const T& operator[](Eigen::Index j) const { return v[j]; }
};

template <class T>
GridSpec<T> make_grid(T a, T b, Eigen::Index nx) {
    if (!(b > a)) throw std::invalid_argument("make_grid: requires b > a");
    if (nx < 4) throw std::invalid_argument("make_grid: requires nx >= 4");
    return GridSpec<T>{a, b, nx, (b - a) / T(nx)};
}
inline GridSpec<double> make_grid(double a, double b, Eigen::Index nx) {
    return make_grid<double>(a, b, nx);
}

// circular shift: rolled(v, k)[j] = v[(j - k) mod n], so rolled(v, 1)[j] = v[j-1]
template <class Derived>
VecX<typename Derived::Scalar> rolled(const Eigen::MatrixBase<Derived>& v, Eigen::Index k) {
    const Eigen::Index n = v.size();
    k %= n;
    if (k < 0) k += n;
    VecX<typename Derived::Scalar> out(n);
    out.tail(n - k) = v.derived().head(n - k);
    out.head(k) = v.derived().tail(k);
    return out;
}

// (D_- v)_j = (v_j - v_{j-1})/dx. On half-node data the result is aligned with
// integer nodes (q_j from u_{j+1/2}, u_{j-1/2}); site tags toggle accordingly.
template <class T>
VecX<T> d_minus(const VecX<T>& v, T dx) {
    return (v - rolled(v, 1)) / dx;
}
template <class T>
VecX<T> d_plus(const VecX<T>& v, T dx) {
    return (rolled(v, -1) - v) / dx;
}
template <class T>
VecX<T> d_central(const VecX<T>& v, T dx) {
    return (rolled(v, -1) - rolled(v, 1)) / (T(2) * dx);
}

inline Site other_site(Site s) {
    return s == Site::half_nodes ? Site::integer_nodes : Site::half_nodes;
}

template <class T>
GridFn<T> d_minus(const GridFn<T>& f, const GridSpec<T>& g) {
    return {d_minus(f.v, g.dx), other_site(f.site)};
}
template <class T>
GridFn<T> d_plus(const GridFn<T>& f, const GridSpec<T>& g) {
    return {d_plus(f.v, g.dx), other_site(f.site)};
}
template <class T>
GridFn<T> d_central(const GridFn<T>& f, const GridSpec<T>& g) {
    return {d_central(f.v, g.dx), f.site};
}

template <class T, class F>
GridFn<T> sample_half_nodes(F&& f, const GridSpec<T>& g) {
    GridFn<T> out{VecX<T>(g.nx), Site::half_nodes};
    for (Eigen::Index j = 0; j < g.nx; ++j) {
        out.v[j] = f(g.x_half(j));
        if (!std::isfinite(out.v[j]))
            throw std::invalid_argument("sample_half_nodes: non-finite sample at node " +
                                        std::to_string(j));
    }
    return out;
}

template <class T, class F>
GridFn<T> sample_integer_nodes(F&& f, const GridSpec<T>& g) {
    GridFn<T> out{VecX<T>(g.nx), Site::integer_nodes};
    for (Eigen::Index j = 0; j < g.nx; ++j) {
        out.v[j] = f(g.x_integer(j));
        if (!std::isfinite(out.v[j]))
            throw std::invalid_argument("sample_integer_nodes: non-finite sample at node " +
                                        std::to_string(j));
    }
    return out;
}

// q^0 = D_- u^0: exact cell average of the derivative when u^0 is sampled pointwise
template <class T>
GridFn<T> init_q(const GridFn<T>& u0, const GridSpec<T>& g) {
    if (u0.site != Site::half_nodes)
        throw std::invalid_argument("init_q: u0 must live on half-integer nodes");
    return {d_minus(u0.v, g.dx), Site::integer_nodes};
}

}  // namespace ch
