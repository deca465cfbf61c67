// Gaussian wave-packet transform W_{lambda,B}, dyadic Littlewood-Paley frame,
// localization probes, the scale-adapted phase-space energy and the discrete
// commutator machinery.
//
// W_lambda on the frequency side: W(., xi) has spectrum
// (pi lambda)^{-d/4} e^{-|eta - xi|^2 / (2 lambda)} uhat(eta), so transforms
// are one inverse FFT per xi-lattice node; norms need no FFT at all.
#pragma once

#include "symlab/grid.hpp"

namespace symlab {

struct DyadicFrame {
    int J = 0;  // top level; levels 0..J
    // window for level j evaluated at |eta| (theta_0 = phi_0, theta_J the
    // co-window 1 - phi_{J-1})
    double window(int j, double abs_eta) const;
    // l2-normalized variant tau_j = theta_j / sqrt(sum_k theta_k^2)
    double window_l2(int j, double abs_eta) const;

    static DyadicFrame for_grid(const GridFunction& u);
    static DyadicFrame levels(int J);
};

// theta_j * u by frequency multiplication; exact reconstruction sum_j = u.
GridFunction dyadic_piece(const GridFunction& u, const DyadicFrame& frame, int j);
std::vector<GridFunction> dyadic_decompose(const GridFunction& u, const DyadicFrame& frame);

struct XiLattice {
    double spacing = 0.0;
    std::vector<double> lo, hi;  // per axis
    std::vector<int> counts;     // derived
    static XiLattice box(int dims, double lambda, double radius);       // [-r, r]^d
    static XiLattice segment(double lambda, double lo, double hi);      // 1D interval
    std::size_t total() const;
    RVector node(std::size_t flat) const;
    double measure() const;  // spacing^dims
};

// Covers the numerically significant support of uhat plus a 4 sqrt(lambda)
// margin at spacing sqrt(lambda)/2.
XiLattice default_lattice(const GridFunction& u, double lambda);

struct WavePacketGrid {
    double lambda = 0.0;
    int dims = 1, ncomp = 1, n = 0;
    double L = 0.0;
    XiLattice lattice;
    // values[comp][xi_flat * npts + x_flat]
    std::vector<Complex> values;
    std::size_t npts() const { return dims == 1 ? n : static_cast<std::size_t>(n) * n; }
    Complex at(int comp, std::size_t xi_flat, std::size_t x_flat) const {
        return values[(comp * lattice.total() + xi_flat) * npts() + x_flat];
    }
    double norm2() const;  // with dx^d dxi^d measure
};

// Frequency-side fast path (B == Id). Checks the Gaussian periodization
// requirement lambda L^2 >= 55 and the lattice spacing <= sqrt(lambda).
WavePacketGrid wavepacket_transform(const GridFunction& u, double lambda,
                                    const XiLattice& lattice);
WavePacketGrid wavepacket_transform(const GridFunction& u, double lambda);

// Direct quadrature with a general kernel B(x, y) (componentwise scalar).
WavePacketGrid wavepacket_transform_kernel(
    const GridFunction& u, double lambda, const XiLattice& lattice,
    const std::function<Complex(const RVector&, const RVector&)>& B);

// ||W_lambda u||^2 over the lattice without forming W (spectral Parseval).
double wavepacket_norm2(const GridFunction& u, double lambda, const XiLattice& lattice);

// Localization ratio
//   || |xi|^m (1 - phi_{j+2}) W_{2^j} d^alpha Theta_j u || / (2^{-j n_decay} ||Theta_j u||)
// with the derivative applied spectrally; returns 0 with skipped=true when
// ||Theta_j u|| vanishes.
struct LocalizationResult {
    double ratio = 0.0;
    bool skipped = false;
    double piece_norm = 0.0;
};
LocalizationResult localization_probe(const GridFunction& u, const DyadicFrame& frame, int j,
                                      int n_decay, int m, const std::vector<int>& alpha);

// As above with the derivative inside the dyadic piece (the corollary form):
// || (1 - phi_{j+2}) W_{2^j} Theta_j d_k u || / || Theta_j u ||.
LocalizationResult localization_probe_derivative_inside(const GridFunction& u,
                                                        const DyadicFrame& frame, int j,
                                                        int axis);

using PhaseSpaceField = std::function<CMatrix(const RVector& x, const RVector& xi_unit)>;

struct EnergyResult {
    double E = 0.0;
    double ratio = 0.0;  // E / ||u||^2
    std::vector<double> per_level;
    double discarded_tail = 0.0;  // sum_j ||Theta_j u||^2 - (lattice-captured)
};

// E = sum_j <S(x, xi/|xi|) W_{2^j} T_j u, W_{2^j} T_j u> with the
// l2-normalized windows T_j, so S == Id gives exactly ||u||^2.
EnergyResult wavepacket_energy(const GridFunction& u, const PhaseSpaceField& S,
                               const DyadicFrame& frame);

// |Re (psi_lambda S W_lambda u, W_lambda Atilde u)| / ||u||^2 with
// Atilde = - sum_k A_k(x)^* d_k; psi_lambda = phi_0(xi / lambda).
double commutator_energy_probe(const GridFunction& u, const PhaseSpaceField& S,
                               const std::vector<std::function<CMatrix(const RVector&)>>& coeffs,
                               double lambda);

// g_j = A(x, d)(Theta_j u) - Theta_j (A(x, d) u).
GridFunction discrete_commutator(
    const std::vector<std::function<CMatrix(const RVector&)>>& coeffs, const GridFunction& u,
    const DyadicFrame& frame, int j);

}  // namespace symlab
