#include "symlab/matrix_core.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace symlab {

double SpectralData::max_imag() const {
    double m = 0.0;
    for (const auto& c : clusters) m = std::max(m, std::abs(c.eigenvalue.imag()));
    return m;
}

double SpectralData::max_projector_norm() const {
    double m = 0.0;
    for (const auto& c : clusters) m = std::max(m, op_norm(c.projector));
    return m;
}

bool SpectralData::all_semisimple() const {
    return std::all_of(clusters.begin(), clusters.end(),
                       [](const Cluster& c) { return c.semisimple; });
}

namespace {

// Swap the diagonal entries k, k+1 of the upper-triangular T by a unitary
// similarity, accumulating it into Q. Standard complex Schur reordering step.
void schur_swap(CMatrix& T, CMatrix& Q, int k) {
    Complex a = T(k, k), b = T(k, k + 1), c = T(k + 1, k + 1);
    // [b, c-a] spans the eigenvector of the 2x2 block for eigenvalue c.
    Complex x1 = b, x2 = c - a;
    double r = std::sqrt(std::norm(x1) + std::norm(x2));
    CMatrix G(2, 2);
    if (r < 1e-300) {
        G << 0, 1, 1, 0;  // equal diagonal, plain permutation
    } else {
        G << x1 / r, -std::conj(x2) / r, x2 / r, std::conj(x1) / r;
    }
    T.middleRows(k, 2) = G.adjoint() * T.middleRows(k, 2);
    T.middleCols(k, 2) = T.middleCols(k, 2) * G;
    T(k + 1, k) = 0.0;
    Q.middleCols(k, 2) = Q.middleCols(k, 2) * G;
}

// Move the positions listed in `sel` (sorted ascending) to the front of the
// Schur form by bubbling.
void schur_select(CMatrix& T, CMatrix& Q, std::vector<int> sel) {
    for (size_t i = 0; i < sel.size(); ++i) {
        for (int p = sel[i]; p > static_cast<int>(i); --p) schur_swap(T, Q, p - 1);
    }
}

// Solve T11 X - X T22 = -T12 with T11 (m x m) and T22 upper triangular.
CMatrix triangular_sylvester(const CMatrix& T11, const CMatrix& T22, const CMatrix& T12) {
    int m = static_cast<int>(T11.rows()), n = static_cast<int>(T22.rows());
    CMatrix X = CMatrix::Zero(m, n);
    for (int i = m - 1; i >= 0; --i) {
        for (int j = 0; j < n; ++j) {
            Complex acc = -T12(i, j);
            for (int k = i + 1; k < m; ++k) acc -= T11(i, k) * X(k, j);
            for (int k = 0; k < j; ++k) acc += X(i, k) * T22(k, j);
            X(i, j) = acc / (T11(i, i) - T22(j, j));
        }
    }
    return X;
}

struct ClusterIndex {
    Complex mean;
    std::vector<int> members;  // positions in the Schur diagonal
};

std::vector<ClusterIndex> cluster_eigenvalues(const CVector& ev, double tol) {
    int n = static_cast<int>(ev.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(ev(i) - ev(j)) <= tol) parent[find(i)] = find(j);
    std::vector<ClusterIndex> out;
    std::vector<int> root_slot(n, -1);
    for (int i = 0; i < n; ++i) {
        int r = find(i);
        if (root_slot[r] < 0) {
            root_slot[r] = static_cast<int>(out.size());
            out.push_back({});
        }
        out[root_slot[r]].members.push_back(i);
    }
    for (auto& c : out) {
        Complex s = 0.0;
        for (int i : c.members) s += ev(i);
        c.mean = s / static_cast<double>(c.members.size());
    }
    std::sort(out.begin(), out.end(), [](const ClusterIndex& a, const ClusterIndex& b) {
        if (a.mean.real() != b.mean.real()) return a.mean.real() < b.mean.real();
        return a.mean.imag() < b.mean.imag();
    });
    return out;
}

}  // namespace

SpectralData eigendecompose(const CMatrix& A, double cluster_tol) {
    const int n = static_cast<int>(A.rows());
    if (n < 1 || A.cols() != n) throw std::invalid_argument("eigendecompose: square matrix required");
    if (!is_finite(A)) throw std::invalid_argument("eigendecompose: non-finite entries");
    if (cluster_tol < 0) throw std::invalid_argument("eigendecompose: cluster_tol < 0");

    const double anorm = op_norm(A);
    const double eps = std::numeric_limits<double>::epsilon();
    const double tol = cluster_tol > 0 ? cluster_tol : std::max(eps * anorm * n, eps);

    Eigen::ComplexSchur<CMatrix> schur(A);
    if (schur.info() != Eigen::Success)
        throw std::runtime_error("eigendecompose: Schur iteration failed for matrix " +
                                 matrix_hash(A));
    const CMatrix T0 = schur.matrixT();
    const CMatrix Q0 = schur.matrixU();
    const CVector ev = T0.diagonal();

    auto groups = cluster_eigenvalues(ev, tol);

    SpectralData out;
    out.dim = n;
    out.cluster_tol = tol;
    out.clusters.resize(groups.size());

    CMatrix partial = CMatrix::Zero(n, n);
    for (size_t g = 0; g < groups.size(); ++g) {
        Cluster& cl = out.clusters[g];
        cl.eigenvalue = groups[g].mean;
        cl.multiplicity = static_cast<int>(groups[g].members.size());
        if (groups.size() == 1) {
            cl.projector = CMatrix::Identity(n, n);
        } else if (g + 1 == groups.size()) {
            cl.projector = CMatrix::Identity(n, n) - partial;  // exact partition
        } else {
            CMatrix T = T0, Q = Q0;
            schur_select(T, Q, groups[g].members);
            int m = cl.multiplicity;
            CMatrix X = triangular_sylvester(T.topLeftCorner(m, m),
                                             T.bottomRightCorner(n - m, n - m),
                                             T.topRightCorner(m, n - m));
            CMatrix P = CMatrix::Zero(n, n);
            P.topLeftCorner(m, m) = CMatrix::Identity(m, m);
            P.topRightCorner(m, n - m) = -X;
            cl.projector = Q * P * Q.adjoint();
            partial += cl.projector;
        }

        // Rank test for semi-simplicity: A - lambda*Id must drop rank by
        // exactly the multiplicity. The auto floor gets a fixed headroom
        // factor: the computed singular values themselves carry O(eps*||A||)
        // rounding that can exceed the bare eps*||A||*N threshold.
        const double rank_tol = std::max(tol, 64.0 * n * eps * std::max(anorm, 1e-300));
        Eigen::JacobiSVD<CMatrix> svd(A - cl.eigenvalue * CMatrix::Identity(n, n));
        const auto& s = svd.singularValues();
        int m = cl.multiplicity;
        double largest_dropped = s(n - 1);
        for (int i = n - m; i < n; ++i) largest_dropped = std::max(largest_dropped, s(i));
        cl.semisimple = largest_dropped <= rank_tol;
        cl.margin = cl.semisimple ? (m < n ? s(n - m - 1) : rank_tol) : largest_dropped;
    }

    CMatrix sum = CMatrix::Zero(n, n);
    for (const auto& c : out.clusters) sum += c.projector;
    out.projector_sum_defect = op_norm(CMatrix(sum - CMatrix::Identity(n, n)));
    double ortho = 0.0;
    for (size_t j = 0; j < out.clusters.size(); ++j)
        for (size_t k = 0; k < out.clusters.size(); ++k) {
            CMatrix prod = out.clusters[j].projector * out.clusters[k].projector;
            if (j == k) prod -= out.clusters[j].projector;
            ortho = std::max(ortho, op_norm(prod));
        }
    out.orthogonality_defect = ortho;
    return out;
}

CMatrix spectral_projector(const CMatrix& A, const std::vector<Complex>& cluster, double gap,
                           int nodes, double* idempotency_defect) {
    const int n = static_cast<int>(A.rows());
    if (cluster.empty()) throw std::invalid_argument("spectral_projector: empty cluster");
    if (gap <= 0) throw std::invalid_argument("spectral_projector: gap must be positive");

    // One circle per eigenvalue, deduplicated so overlapping circles never
    // double-count a cluster member.
    std::vector<Complex> centers;
    for (Complex z : cluster) {
        bool dup = false;
        for (Complex c : centers)
            if (std::abs(z - c) <= gap / 4) dup = true;
        if (!dup) centers.push_back(z);
    }
    const double radius = gap / 2;

    const CVector ev = Eigen::ComplexEigenSolver<CMatrix>(A, false).eigenvalues();
    for (Complex c : centers) {
        for (int i = 0; i < n; ++i) {
            double d = std::abs(ev(i) - c);
            bool in_cluster = false;
            for (Complex z : cluster)
                if (std::abs(ev(i) - z) <= gap / 4) in_cluster = true;
            if (!in_cluster && d <= radius + gap / 8)
                throw std::runtime_error("spectral_projector: gap violated");
            if (in_cluster && std::abs(d - radius) <= gap / 8 && d > gap / 4)
                throw std::runtime_error("spectral_projector: gap violated");
        }
    }

    CMatrix P = CMatrix::Zero(n, n);
    const CMatrix I = CMatrix::Identity(n, n);
    for (Complex c : centers) {
        for (int m = 0; m < nodes; ++m) {
            double th = 2.0 * M_PI * (m + 0.5) / nodes;
            Complex w = radius * std::polar(1.0, th);
            Complex z = c + w;
            // (1/2pi i) \oint (z-A)^{-1} dz, dz = i w dtheta
            P += (w / static_cast<double>(nodes)) * (z * I - A).partialPivLu().inverse();
        }
    }
    if (idempotency_defect) *idempotency_defect = op_norm(CMatrix(P * P - P));
    return P;
}

ResolventProbe resolvent_probe(const CMatrix& A, const std::vector<double>& re_grid,
                               const std::vector<double>& im_grid) {
    for (double g : im_grid)
        if (g == 0.0) throw std::invalid_argument("resolvent_probe: im_grid contains 0");
    const int n = static_cast<int>(A.rows());
    ResolventProbe out;
    out.re_grid = re_grid;
    out.im_grid = im_grid;
    const CMatrix I = CMatrix::Identity(n, n);
    for (double re : re_grid) {
        for (double im : im_grid) {
            Complex z(re, im);
            double smin = min_sv(CMatrix(A - z * I));
            if (smin <= 0 || !std::isfinite(smin)) {
                out.unbounded = true;
                out.C3 = std::numeric_limits<double>::infinity();
                continue;
            }
            out.C3 = std::max(out.C3, std::abs(im) / smin);
        }
    }
    return out;
}

ExponentialProbe exponential_probe(const CMatrix& A, const std::vector<double>& t_grid) {
    ExponentialProbe out;
    out.t_grid = t_grid;
    const Complex i_unit(0.0, 1.0);
    for (double t : t_grid) {
        CMatrix E = (i_unit * t * A).exp();
        if (!is_finite(E)) {
            out.overflow = true;
            out.C1 = std::numeric_limits<double>::infinity();
            continue;
        }
        out.C1 = std::max(out.C1, op_norm(E));
    }
    return out;
}

std::vector<double> default_t_grid() {
    std::vector<double> t{0.0};
    for (double v : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
        t.push_back(v);
        t.push_back(-v);
    }
    return t;
}

std::vector<double> default_im_grid() {
    std::vector<double> g;
    for (double v : {1e-3, 1e-2, 0.1, 0.3, 1.0, 3.0}) {
        g.push_back(v);
        g.push_back(-v);
    }
    return g;
}

std::vector<double> default_re_grid(const SpectralData& spec) {
    // Eigenvalue abscissae, midpoints and a margin; the sup is approached
    // directly above the spectrum.
    std::vector<double> re;
    for (const auto& c : spec.clusters) re.push_back(c.eigenvalue.real());
    std::sort(re.begin(), re.end());
    std::vector<double> out = re;
    for (size_t i = 0; i + 1 < re.size(); ++i) out.push_back(0.5 * (re[i] + re[i + 1]));
    if (!re.empty()) {
        out.push_back(re.front() - 1.0);
        out.push_back(re.back() + 1.0);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

CMatrix canonical_symmetrizer(const SpectralData& spec) {
    for (const auto& c : spec.clusters) {
        if (!c.semisimple) throw std::runtime_error("canonical_symmetrizer: not semi-simple");
        if (std::abs(c.eigenvalue.imag()) > std::max(10 * spec.cluster_tol, 1e-10))
            throw std::runtime_error("canonical_symmetrizer: not hyperbolic");
    }
    CMatrix S = CMatrix::Zero(spec.dim, spec.dim);
    for (const auto& c : spec.clusters) S += c.projector.adjoint() * c.projector;
    return S;
}

CMatrix functional_calculus(const SpectralData& spec, const std::function<Complex(Complex)>& f) {
    return functional_calculus(spec, [&](Complex z) -> CMatrix {
        return f(z) * CMatrix::Identity(spec.dim, spec.dim);
    });
}

CMatrix functional_calculus(const SpectralData& spec, const std::function<CMatrix(Complex)>& f) {
    if (!spec.all_semisimple())
        throw std::runtime_error("functional_calculus: defective spectrum");
    CMatrix out = CMatrix::Zero(spec.dim, spec.dim);
    for (const auto& c : spec.clusters) out += f(c.eigenvalue) * c.projector;
    return out;
}

double sum_bound_constant(int m) {
    // C_m = 1 + 2 C_{m-1}, C_1 = 0  =>  C_m = 2^{m-1} - 1
    return std::ldexp(1.0, m - 1) - 1.0;
}

SumBoundResult sum_bound_check(const std::vector<CMatrix>& S_list,
                               const std::vector<CMatrix>& p_list,
                               const std::vector<double>& mu_list, double eps, double K1,
                               double K2) {
    const size_t m = S_list.size();
    if (p_list.size() != m || mu_list.size() != m)
        throw std::invalid_argument("sum_bound_check: size mismatch");
    if (m == 0 || m > 25) throw std::invalid_argument("sum_bound_check: need 1 <= m <= 25");
    const int n = static_cast<int>(S_list[0].rows());

    SumBoundResult res;
    res.hypotheses_ok = true;
    const double slack = 1.0 + 1e-9;

    for (size_t j = 0; j < m && res.hypotheses_ok; ++j)
        for (size_t k = j + 1; k < m; ++k) {
            double lhs = op_norm(CMatrix(S_list[j] - S_list[k]));
            if (lhs > K1 * std::abs(mu_list[j] - mu_list[k]) * slack + 1e-14) {
                res.hypotheses_ok = false;
                res.violation = "variation |S_j - S_k| <= K1 |mu_j - mu_k| fails at (" +
                                std::to_string(j) + "," + std::to_string(k) + ")";
                break;
            }
        }

    CMatrix total = CMatrix::Zero(n, n);
    for (const auto& p : p_list) total += p;
    if (res.hypotheses_ok && op_norm(total) > 1e-10 * (1.0 + eps * K2)) {
        res.hypotheses_ok = false;
        res.violation = "total sum of p_j is not zero";
    }

    // Partial-sum bounds over every nonempty proper subset.
    if (res.hypotheses_ok && m >= 2) {
        for (unsigned mask = 1; mask + 1 < (1u << m); ++mask) {
            CMatrix P = CMatrix::Zero(n, n);
            double gap = std::numeric_limits<double>::infinity();
            for (size_t j = 0; j < m; ++j) {
                if (mask & (1u << j)) {
                    P += p_list[j];
                    for (size_t k = 0; k < m; ++k)
                        if (!(mask & (1u << k)))
                            gap = std::min(gap, std::abs(mu_list[j] - mu_list[k]));
                }
            }
            if (op_norm(P) > K2 * eps / gap * slack + 1e-14) {
                res.hypotheses_ok = false;
                res.violation = "partial-sum bound fails for subset mask " + std::to_string(mask);
                break;
            }
        }
    }

    CMatrix S = CMatrix::Zero(n, n);
    for (size_t j = 0; j < m; ++j) S += S_list[j] * p_list[j];
    res.lhs = op_norm(S);
    res.rhs = sum_bound_constant(static_cast<int>(m)) * K1 * K2 * eps;
    res.ratio = res.rhs > 0 ? res.lhs / res.rhs : (res.lhs > 1e-14 ? res.lhs / 1e-300 : 0.0);
    res.bound_holds = res.hypotheses_ok && res.lhs <= res.rhs * slack + 1e-12;
    return res;
}

InvertibilityMargin invertibility_margin(const CMatrix& A) {
    const int n = static_cast<int>(A.rows());
    InvertibilityMargin out;
    Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double smin = svd.singularValues()(n - 1);
    out.radius = smin;
    out.kappa = smin > 0 ? 1.0 / smin : std::numeric_limits<double>::infinity();
    // B u := <u_min, u> A u_min is rank one with |B| = |A u_min| = smin and
    // kills u_min in A - B (the lemma's worst case).
    CVector umin = svd.matrixV().col(n - 1);
    CVector Au = A * umin;
    out.worst_B = Au * umin.adjoint();
    out.det_residual = std::abs(CMatrix(A - out.worst_B).determinant());
    return out;
}

HypMatrixCertificate strong_hyperbolicity_certificate(const CMatrix& A,
                                                      const CertificateOptions& opt) {
    const int n = static_cast<int>(A.rows());
    const double anorm = op_norm(A);
    HypMatrixCertificate cert;

    cert.spectrum = eigendecompose(A, opt.cluster_tol);
    cert.real_residual = cert.spectrum.max_imag();
    cert.C2 = cert.spectrum.max_projector_norm();

    auto tg = opt.t_grid.empty() ? default_t_grid() : opt.t_grid;
    cert.exponential = exponential_probe(A, tg);
    cert.C1 = cert.exponential.C1;

    auto rg = opt.re_grid.empty() ? default_re_grid(cert.spectrum) : opt.re_grid;
    auto ig = opt.im_grid.empty() ? default_im_grid() : opt.im_grid;
    cert.resolvent = resolvent_probe(A, rg, ig);
    cert.C3 = cert.resolvent.C3;

    const double real_tol = opt.real_tol > 0 ? opt.real_tol : 1e-8 * std::max(1.0, anorm);
    const double slack = 1.0 + opt.consistency_slack;

    if (cert.real_residual > real_tol) {
        cert.reason = "complex spectrum";
        return cert;
    }
    if (!cert.spectrum.all_semisimple()) {
        cert.reason = "defective";
        return cert;
    }
    cert.S = canonical_symmetrizer(cert.spectrum);
    cert.c4 = min_eig_herm(cert.S);
    cert.C4 = op_norm(cert.S);
    cert.sym_defect =
        anorm > 0 ? herm_defect(CMatrix(cert.S * A)) / (cert.C4 * anorm) : 0.0;

    if (cert.c4 <= 0) {
        cert.reason = "symmetrizer not positive";
    } else if (cert.sym_defect > 1e-8) {
        cert.reason = "symmetrizer does not symmetrize";
    } else if (cert.c4 < 1.0 / n - 1e-8) {
        cert.reason = "symmetrizer lower bound below 1/N";
    } else if (cert.C4 > n * cert.C2 * cert.C2 * slack) {
        cert.reason = "symmetrizer upper bound above N*C2^2";
    } else if (cert.C1 > n * cert.C2 * slack) {
        cert.reason = "C1 <= N*C2 cross-check failed";
    } else if (cert.C3 > cert.C4 / cert.c4 * slack) {
        cert.reason = "C3 <= C4/c4 cross-check failed";
    } else {
        cert.pass = true;
    }
    return cert;
}

}  // namespace symlab
