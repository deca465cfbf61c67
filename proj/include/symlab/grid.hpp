// Periodic grid functions on [-L, L)^dims (dims = 1 or 2) with FFT-based
// spectral calculus. Fourier convention: uhat(eta) = sum_y u(y) e^{-i eta y} dx
// on the frequency lattice eta = (pi/L) k, inverted with the (2pi)^{-d} d eta
// measure, so discrete sums approximate the continuous transforms.
#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "symlab/linalg.hpp"

namespace symlab {

struct GridFunction {
    int dims = 1;
    int n = 0;  // points per axis, power of two
    double L = M_PI;
    int ncomp = 1;
    std::vector<Complex> values;  // [comp][point], row-major per axis

    GridFunction() = default;
    GridFunction(int dims_, int n_, double L_, int ncomp_ = 1);

    std::size_t npts() const { return dims == 1 ? n : static_cast<std::size_t>(n) * n; }
    double dx() const { return 2.0 * L / n; }
    double deta() const { return M_PI / L; }
    double x_of(int i) const { return -L + i * dx(); }
    // FFT bin -> frequency, Nyquist mapped to +pi n / (2L)
    double freq_of(int k) const { return deta() * (k <= n / 2 ? k : k - n); }

    std::span<Complex> comp(int c) { return {values.data() + c * npts(), npts()}; }
    std::span<const Complex> comp(int c) const { return {values.data() + c * npts(), npts()}; }

    double norm() const;   // L2 with the dx^dims measure
    double norm2() const;  // squared

    GridFunction& operator+=(const GridFunction& o);
    GridFunction& operator-=(const GridFunction& o);
    GridFunction& operator*=(double s);
};

// Forward/backward transforms of one component; spectra are in FFT bin order
// and carry the dx / (2pi)^{-d} deta measures described above.
std::vector<Complex> spectrum(const GridFunction& u, int comp);
void from_spectrum(GridFunction& u, int comp, const std::vector<Complex>& spec);

// Applies a multiplier m(eta) in frequency space to every component.
void apply_multiplier(GridFunction& u, const std::function<Complex(const RVector&)>& m);

// d/dx_axis via the i*eta multiplier.
GridFunction derivative(const GridFunction& u, int axis);

// Component-wise pointwise matrix action: out(x) = M(x) u(x) with u the
// ncomp-vector at x.
GridFunction matrix_apply(const GridFunction& u,
                          const std::function<CMatrix(const RVector&)>& M);

RVector grid_point(const GridFunction& u, std::size_t flat);
RVector grid_freq(const GridFunction& u, std::size_t flat);

// Flat binary serialization (header + little-endian complex doubles) with a
// JSON sidecar; `times` attaches a trajectory time index.
void write_gridfunctions(const std::string& path, const std::vector<GridFunction>& snaps,
                         const std::vector<double>& times);
std::vector<GridFunction> read_gridfunctions(const std::string& path,
                                             std::vector<double>* times = nullptr);

}  // namespace symlab
