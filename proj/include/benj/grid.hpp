#pragma once

#include <Eigen/Dense>
#include <stdexcept>

// Uniform periodic grid on [-L, L) with power-of-two resolution and the
// Fourier modes xi_k = pi*k/L stored in natural FFT order:
//   k = 0, 1, ..., n/2-1, -n/2, ..., -1.
// All pseudospectral operators in this library act on fields sampled on
// such a grid.

namespace benj {

using Real = double;
using Complex = std::complex<Real>;
using Vec = Eigen::ArrayXd;
using CVec = Eigen::VectorXcd;

struct Grid {
    int n = 0;             // number of nodes, power of two, >= 8
    Real half_length = 0;  // L
    Real dx = 0;           // 2L/n
    Vec x;                 // nodes x_j = -L + j*dx
    Vec xi;                // modes pi*k/L in natural FFT order

    int nyquist_index() const { return n / 2; }
};

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline Grid make_grid(int n, Real half_length) {
    if (n < 8 || !is_power_of_two(n))
        throw std::invalid_argument("make_grid: n must be a power of two >= 8");
    if (!(half_length > 0))
        throw std::invalid_argument("make_grid: half_length must be positive");
    Grid g;
    g.n = n;
    g.half_length = half_length;
    g.dx = 2.0 * half_length / n;
    g.x = Vec::LinSpaced(n, 0, n - 1) * g.dx - half_length;
    g.xi.resize(n);
    const Real dxi = EIGEN_PI / half_length;
    for (int k = 0; k < n / 2; ++k) g.xi[k] = dxi * k;
    for (int k = n / 2; k < n; ++k) g.xi[k] = dxi * (k - n);
    return g;
}

inline bool same_grid(const Grid& a, const Grid& b) {
    return a.n == b.n && a.half_length == b.half_length;
}

// Field on a grid. Values are real and finite; checked on construction.
struct Field {
    Grid grid;
    Vec values;

    Field() = default;
    Field(Grid g, Vec v) : grid(std::move(g)), values(std::move(v)) {
        if (values.size() != grid.n)
            throw std::invalid_argument("Field: value count does not match grid");
        if (!values.allFinite())
            throw std::invalid_argument("Field: values must be finite");
    }
};

inline Field zero_field(const Grid& g) { return Field(g, Vec::Zero(g.n)); }

// Trapezoid rule == spectral quadrature on a periodic grid.
inline Real integrate(const Field& f) { return f.values.sum() * f.grid.dx; }

inline Real inner(const Field& f, const Field& g) {
    if (!same_grid(f.grid, g.grid))
        throw std::invalid_argument("inner: grid mismatch");
    return (f.values * g.values).sum() * f.grid.dx;
}

inline Real norm_l2(const Field& f) { return std::sqrt(f.values.square().sum() * f.grid.dx); }

inline Real norm_sup(const Field& f) { return f.values.abs().maxCoeff(); }

// integral of |u|^p
inline Real lp_power_integral(const Field& f, Real p) {
    return f.values.abs().pow(p).sum() * f.grid.dx;
}

}  // namespace benj
