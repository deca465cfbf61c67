// Dense complex matrix algebra for small N: clustered eigendecomposition with
// semi-simplicity detection, spectral projectors (Schur path + contour-integral
// cross-check), resolvent/exponential probes, canonical symmetrizers,
// functional calculus, and the combinatorial projector-sum bound.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "symlab/linalg.hpp"

namespace symlab {

struct Cluster {
    Complex eigenvalue;  // cluster representative (mean of members)
    int multiplicity = 0;
    CMatrix projector;
    bool semisimple = false;
    // When the rank test passes: smallest singular value kept above the
    // threshold (distance to rank collapse). When it fails: largest singular
    // value in the group that should have vanished (size of the defect).
    double margin = 0.0;
};

struct SpectralData {
    int dim = 0;
    double cluster_tol = 0.0;  // effective tolerance actually used
    std::vector<Cluster> clusters;
    double projector_sum_defect = 0.0;   // ||sum Pi - Id||
    double orthogonality_defect = 0.0;   // max over j,k of ||Pi_j Pi_k - delta_jk Pi_j||

    double max_imag() const;
    double max_projector_norm() const;
    bool all_semisimple() const;
    bool all_real(double tol) const { return max_imag() <= tol; }
};

// Eigenvalues clustered at cluster_tol (0 selects eps*||A||*N), projectors per
// cluster via reordered Schur + triangular Sylvester, semi-simplicity via the
// numerical rank of A - lambda*Id.
SpectralData eigendecompose(const CMatrix& A, double cluster_tol = 0.0);

// Spectral projector by trapezoidal contour quadrature on circles of radius
// gap/2 around each (deduplicated) cluster eigenvalue. Throws "gap violated"
// when a circle fails to separate the cluster from the rest of the spectrum.
CMatrix spectral_projector(const CMatrix& A, const std::vector<Complex>& cluster, double gap,
                           int nodes = 64, double* idempotency_defect = nullptr);

struct ResolventProbe {
    double C3 = 0.0;          // sup over grid of |Im z| * ||(A - z)^-1||
    bool unbounded = false;   // a shifted matrix was numerically singular
    std::vector<double> re_grid, im_grid;
};
ResolventProbe resolvent_probe(const CMatrix& A, const std::vector<double>& re_grid,
                               const std::vector<double>& im_grid);

struct ExponentialProbe {
    double C1 = 0.0;          // sup over t of ||exp(itA)||
    bool overflow = false;    // saturated (defective A, large t)
    std::vector<double> t_grid;
};
ExponentialProbe exponential_probe(const CMatrix& A, const std::vector<double>& t_grid);

// Default probe grids used by the certificate; exposed so reports can echo them.
std::vector<double> default_t_grid();
std::vector<double> default_im_grid();
std::vector<double> default_re_grid(const SpectralData& spec);

// S = sum Pi_j^* Pi_j. Requires real semi-simple spectrum; guarantees
// S = S^*, S >= Id/N, ||S|| <= N * C2^2 and S*A hermitian.
CMatrix canonical_symmetrizer(const SpectralData& spec);

// sum f(lambda) Pi_lambda; scalar- and matrix-valued variants. Requires a
// semi-simple SpectralData.
CMatrix functional_calculus(const SpectralData& spec, const std::function<Complex(Complex)>& f);
CMatrix functional_calculus(const SpectralData& spec, const std::function<CMatrix(Complex)>& f);

// Hypotheses and bound of the projector-sum lemma:
//   |S_j - S_k| <= K1 |mu_j - mu_k|,
//   |sum_{j in J} p_j| <= K2 * eps / min-gap(J, J^c) for proper J,
//   sum_j p_j = 0
// imply |sum S_j p_j| <= (2^{m-1} - 1) K1 K2 eps.
struct SumBoundResult {
    bool hypotheses_ok = false;
    std::string violation;    // which inequality failed, empty if none
    double lhs = 0.0;         // ||sum S_j p_j||
    double rhs = 0.0;         // C_m K1 K2 eps
    double ratio = 0.0;       // lhs / rhs (0 when rhs == 0 and lhs == 0)
    bool bound_holds = false;
};
SumBoundResult sum_bound_check(const std::vector<CMatrix>& S_list,
                               const std::vector<CMatrix>& p_list,
                               const std::vector<double>& mu_list, double eps, double K1,
                               double K2);
double sum_bound_constant(int m);  // C_m = 1 + 2 C_{m-1}, C_1 = 0

struct InvertibilityMargin {
    double kappa = 0.0;       // ||A^-1||, +inf when singular
    double radius = 0.0;      // smallest singular value = 1/kappa
    CMatrix worst_B;          // rank-one, |B| = radius, A - B singular
    double det_residual = 0.0;  // |det(A - worst_B)|
};
InvertibilityMargin invertibility_margin(const CMatrix& A);

struct CertificateOptions {
    double cluster_tol = 0.0;              // 0 = auto
    double real_tol = 0.0;                 // 0 = auto: 1e-8 * max(1, ||A||)
    double consistency_slack = 0.10;       // slack on the cross-checked equivalences
    std::vector<double> t_grid;            // empty = default
    std::vector<double> re_grid, im_grid;  // empty = default
};

struct HypMatrixCertificate {
    double real_residual = 0.0;  // max |Im lambda|
    double C1 = 0.0;             // exponential probe
    double C2 = 0.0;             // max projector norm
    double C3 = 0.0;             // resolvent probe
    CMatrix S;                   // canonical symmetrizer (empty on failure)
    double c4 = 0.0, C4 = 0.0;   // min-eig(S), ||S||
    double sym_defect = 0.0;     // ||SA - (SA)*|| / (||S|| ||A||)
    bool pass = false;
    std::string reason;          // first failed condition ("defective", ...)
    SpectralData spectrum;
    ResolventProbe resolvent;
    ExponentialProbe exponential;
};

// Runs the full probe battery and cross-checks the equivalences
// (C1 <= N*C2, C3 <= C4/c4) within the configured slack.
HypMatrixCertificate strong_hyperbolicity_certificate(const CMatrix& A,
                                                      const CertificateOptions& opt = {});

}  // namespace symlab
