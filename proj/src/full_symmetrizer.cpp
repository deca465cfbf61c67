#include "symlab/full_symmetrizer.hpp"

#include <cmath>

namespace symlab {

namespace {

double ker_tol_for(const CMatrix& L) { return 1e-8 * std::max(op_norm(L), 1e-30); }

// Quintic smoothstep: C^2, 0 -> 1 on [0, 1].
double smoothstep5(double t) {
    if (t <= 0) return 0.0;
    if (t >= 1) return 1.0;
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

}  // namespace

PositivityResult full_positivity_check(const FullSymmetrizerField& F, const SymbolFamily& fam,
                                       const Direction& nu, const SamplePlan& plan) {
    PositivityResult out;
    out.c = 1e300;
    auto as = fam.params.grid(plan.param_counts);
    RMatrix E = complement_basis(nu);
    auto sphere = sphere_samples(fam.d, plan.sphere_count);

    for (const auto& a : as) {
        CMatrix Lnu = eval_symbol(fam, a, nu.nu);
        for (const auto& s : sphere) {
            RVector xi = E * s;
            for (Complex root : char_roots(fam, a, xi, nu)) {
                RVector xt = xi + root.real() * nu.nu;  // characteristic frequency
                if (xt.norm() < 1e-12) continue;
                CMatrix L = eval_symbol(fam, a, xt);
                double kt = ker_tol_for(L);
                if (min_sv(L) > kt) continue;  // off the characteristic set
                CMatrix Q = kernel_basis(L, kt);
                if (Q.cols() == 0) continue;
                CMatrix SS = F.eval(a, RVector(xt / xt.norm()));
                CMatrix H = herm_part(CMatrix(SS * Lnu));
                double me = min_eig_herm(CMatrix(Q.adjoint() * H * Q));
                ++out.characteristic_samples;
                if (me < out.c) {
                    out.c = me;
                    out.worst_a = a;
                    out.worst_xi = xt;
                }
            }
        }
    }
    if (out.characteristic_samples == 0) {
        out.vacuous = true;
        out.c = 0.0;
    }
    return out;
}

FromFullResult symmetrizer_from_full(const FullSymmetrizerField& F, const SymbolFamily& fam,
                                     const RVector& a, const Direction& nu, const RVector& xi,
                                     double tol) {
    const int N = fam.N;
    CMatrix J = eval_symbol(fam, a, nu.nu);
    Eigen::PartialPivLU<CMatrix> lu(J);
    CMatrix AJ = lu.solve(eval_symbol(fam, a, xi));
    auto spec = eigendecompose(AJ);
    if (!spec.all_semisimple() || spec.max_imag() > 1e-8)
        throw std::runtime_error("symmetrizer_from_full: L(nu)^{-1} L(xi) not certified");

    FromFullResult out;
    out.SJ = CMatrix::Zero(N, N);
    const double Jnorm = op_norm(J);

    for (const auto& cl : spec.clusters) {
        double tau = cl.eigenvalue.real();
        RVector xt = xi - tau * nu.nu;  // ker L(xt) is the tau-eigenspace of AJ
        if (xt.norm() < 1e-12)
            throw std::runtime_error("symmetrizer_from_full: characteristic point at origin");
        CMatrix SS = F.eval(a, RVector(xt / xt.norm()));
        const CMatrix& Pi = cl.projector;
        CMatrix SJ = SS * J;
        out.SJ += Pi.adjoint() * SJ * Pi;

        double scale = std::max(op_norm(SJ), 1e-30);
        double d1 = op_norm(CMatrix(Pi.adjoint() * SJ * Pi - Pi.adjoint() * SJ)) / scale;
        out.eqPiSPi_defect = std::max(out.eqPiSPi_defect, d1);
        if (d1 > tol)
            throw std::runtime_error("symmetrizer_from_full: full symmetrizer inconsistent");

        // Kernel positivity at this root drives the projector bound.
        CMatrix L = eval_symbol(fam, a, xt);
        CMatrix Q = kernel_basis(L, ker_tol_for(L));
        if (Q.cols() > 0) {
            double c = min_eig_herm(CMatrix(Q.adjoint() * herm_part(SJ) * Q));
            if (c > 0) {
                out.normePi_slack =
                    std::max(out.normePi_slack, op_norm(Pi) * c / std::max(op_norm(SJ), 1e-30));
                // range characterization: S maps range(L) into (ker L)^perp
                Eigen::JacobiSVD<CMatrix> svd(L, Eigen::ComputeFullU);
                int rank = 0;
                for (int i = 0; i < svd.singularValues().size(); ++i)
                    if (svd.singularValues()(i) > ker_tol_for(L)) ++rank;
                CMatrix R = svd.matrixU().leftCols(rank);
                double dn = op_norm(CMatrix(Q.adjoint() * SS * R)) / std::max(op_norm(SS), 1e-30);
                Eigen::JacobiSVD<CMatrix> svd2(CMatrix(Q.adjoint() * SS));
                int rank2 = 0;
                for (int i = 0; i < svd2.singularValues().size(); ++i)
                    if (svd2.singularValues()(i) > 1e-8 * svd2.singularValues()(0)) ++rank2;
                if (rank2 != Q.cols()) dn = std::max(dn, 1.0);
                out.ortho_defect = std::max(out.ortho_defect, dn);
            }
        }
        (void)Jnorm;
    }
    out.SJ = herm_part(out.SJ);  // each term hermitian up to rounding
    out.c1 = min_eig_herm(out.SJ);
    out.S = out.SJ * lu.inverse();
    return out;
}

FullSymmetrizerField full_from_symmetrizer(
    const std::function<CMatrix(const RVector&, const RVector&)>& S_field,
    const SymbolFamily& fam, const Direction& nu, double cone_radius) {
    RVector nuu = nu.unit();
    // chi = 1 within half the support angle of the line R nu, 0 outside;
    // support = half the certified radius, chordal -> angle.
    double theta_supp = 2.0 * std::asin(std::min(1.0, cone_radius / 4.0));
    if (theta_supp <= 0)
        throw std::runtime_error("full_from_symmetrizer: empty cutoff support");

    const SymbolFamily* fp = &fam;
    RVector nuv = nu.nu;
    FullSymmetrizerField F;
    F.eval = [fp, nuu, nuv, theta_supp, S_field](const RVector& a,
                                                 const RVector& xt) -> CMatrix {
        double cosang = std::abs(nuu.dot(xt)) / xt.norm();
        double ang = std::acos(std::min(1.0, std::max(-1.0, cosang)));
        double chi = 1.0 - smoothstep5((ang - 0.5 * theta_supp) / (0.5 * theta_supp));
        double tau = nuv.dot(xt) / nuv.squaredNorm();
        RVector xi = xt - tau * nuv;  // E-component
        CMatrix out = CMatrix::Zero(fp->N, fp->N);
        if (chi > 0) {
            CMatrix L = eval_symbol(*fp, a, xt);
            if (min_sv(L) <= ker_tol_for(L))
                throw std::runtime_error("full_from_symmetrizer: cutoff too wide");
            out += chi * L.partialPivLu().inverse();
        }
        if (chi < 1.0) {
            if (xi.norm() < 1e-14)
                throw std::runtime_error("full_from_symmetrizer: cutoff too narrow at the axis");
            out += (1.0 - chi) * S_field(a, RVector(xi / xi.norm()));
        }
        return out;
    };
    return F;
}

// Overload resolving the cone radius from the gradient bound at the box
// midpoint (the lemma radius at nu).
FullSymmetrizerField full_from_symmetrizer(
    const std::function<CMatrix(const RVector&, const RVector&)>& S_field,
    const SymbolFamily& fam, const Direction& nu) {
    std::vector<int> mid(fam.params.dim(), 1);
    RVector a0 = fam.params.grid(mid).front();
    double K = gradient_bound(fam, a0);
    double pn = std::abs(eval_symbol(fam, a0, nu.unit()).determinant());
    return full_from_symmetrizer(S_field, fam, nu, pn / K);
}

HomotopyResult homotopy_positivity(const SymbolFamily& fam, const RVector& a, const RVector& xi,
                                   const CMatrix& J0, const CMatrix& J1,
                                   const FullSymmetrizerField& F,
                                   const std::vector<double>& t_grid, double tol) {
    CMatrix L = eval_symbol(fam, a, xi);
    CMatrix Q = kernel_basis(L, ker_tol_for(L));
    if (Q.cols() == 0)
        throw std::runtime_error("homotopy_positivity: xi is not characteristic");
    CMatrix SS = F.eval(a, RVector(xi / xi.norm()));

    HomotopyResult out;
    out.t_grid = t_grid;
    for (double t : t_grid) {
        CMatrix Jt = (1.0 - t) * J0 + t * J1;
        if (min_sv(Jt) <= 1e-12 * std::max(op_norm(Jt), 1e-30))
            throw std::runtime_error("homotopy_positivity: J_t singular at t = " +
                                     std::to_string(t));
        CMatrix AJt = Jt.partialPivLu().solve(L);
        auto spec = eigendecompose(AJt);
        bool zero_ok = true;
        for (const auto& cl : spec.clusters)
            if (std::abs(cl.eigenvalue) <= 10 * spec.cluster_tol + 1e-10 && !cl.semisimple)
                zero_ok = false;
        if (!zero_ok)
            throw std::runtime_error("homotopy_positivity: 0 not semi-simple at t = " +
                                     std::to_string(t));
        out.kernel_mineig.push_back(min_eig_herm(CMatrix(Q.adjoint() * SS * Jt * Q)));
    }
    out.c0 = out.kernel_mineig.empty() ? 0.0 : out.kernel_mineig.front();
    out.lower_bound_holds = true;
    for (size_t i = 0; i < t_grid.size(); ++i)
        if (out.kernel_mineig[i] < (1.0 - t_grid[i]) * out.c0 - tol)
            out.lower_bound_holds = false;
    return out;
}

ChangedFamily change_time_direction(const SymbolFamily& fam, const Direction& nu_prime,
                                    const SamplePlan& base_plan) {
    RVector e0 = RVector::Zero(fam.d + 1);
    e0(0) = 1.0;
    Direction nu(e0);

    ChangedFamily out;
    out.base_certificate = strong_hyperbolicity_in_direction(fam, nu, base_plan);
    if (!out.base_certificate.pass)
        throw std::runtime_error("change_time_direction: base direction not certified");

    // Cone membership of nu' (lemma-radius segment walk at the box midpoint).
    std::vector<int> mid(fam.params.dim(), 1);
    RVector a0 = fam.params.grid(mid).front();
    if (!cone_segment_walk(fam, a0, e0, nu_prime.unit(), gradient_bound(fam, a0)))
        throw std::runtime_error("change_time_direction: nu_prime outside certified cone");

    auto F = full_from_symmetrizer(out.base_certificate.symmetrizer, fam, nu);

    RMatrix Ep = complement_basis(nu_prime);
    out.frame = Ep;

    SymbolFamily red;
    red.N = fam.N;
    red.d = fam.d;  // E' has the same dimension as the space slot count
    red.params = fam.params;
    red.name = fam.name + "@direction-change";
    RVector nup = nu_prime.nu;
    const SymbolFamily base = fam;
    red.coeffs = [base, nup, Ep](const RVector& a) -> std::vector<CMatrix> {
        CMatrix Lnu = eval_symbol(base, a, nup);
        Eigen::PartialPivLU<CMatrix> lu(Lnu);
        std::vector<CMatrix> mats;
        mats.push_back(CMatrix::Identity(base.N, base.N));
        for (int j = 0; j < Ep.cols(); ++j)
            mats.push_back(lu.solve(eval_symbol(base, a, RVector(Ep.col(j)))));
        return mats;
    };
    out.reduced = red;

    const SymbolFamily basef = fam;
    Direction nud = nu_prime;
    out.symmetrizer = [F, basef, nud, Ep](const RVector& a, const RVector& w) -> CMatrix {
        RVector xi = Ep * w;
        return symmetrizer_from_full(F, basef, a, nud, xi).SJ;
    };
    return out;
}

DoubleRootSymmetrizer symmetrize_2x2(const std::vector<double>& phi,
                                     const std::vector<double>& psi, const CMatrix& A1,
                                     const CMatrix& A2, double tol) {
    if (A1.rows() != 2 || A2.rows() != 2)
        throw std::invalid_argument("symmetrize_2x2: 2x2 matrices required");
    if (phi.size() != psi.size())
        throw std::invalid_argument("symmetrize_2x2: phi/psi size mismatch");
    double scale = std::max(op_norm(A1), op_norm(A2));
    if (std::abs(A1.trace()) > tol * scale || std::abs(A2.trace()) > tol * scale)
        throw std::invalid_argument("symmetrize_2x2: matrices must be traceless");

    DoubleRootSymmetrizer out;

    // Case a): A2 proportional to A1, i.e. A = (phi + mu psi) A1 with A1
    // carrying distinct real eigenvalues -> canonical symmetrizer of A1.
    Complex mu = (A1.adjoint() * A2).trace() / (A1.adjoint() * A1).trace();
    if (op_norm(CMatrix(A2 - mu * A1)) <= 1e-12 * scale) {
        out.case_a = true;
        auto spec = eigendecompose(A1);
        if (spec.clusters.size() != 2 || spec.max_imag() > 1e-10)
            throw std::runtime_error("symmetrize_2x2: factored matrix not strictly hyperbolic");
        out.S = canonical_symmetrizer(spec);
    } else {
        // Conjugate A1 to diag(-1, 1); the eigenvalue scale is absorbed
        // into phi.
        auto spec = eigendecompose(A1);
        if (spec.clusters.size() != 2 || spec.max_imag() > 1e-10)
            throw std::runtime_error("symmetrize_2x2: A1 must have distinct real eigenvalues");
        Eigen::ComplexEigenSolver<CMatrix> es(A1);
        int neg = es.eigenvalues()(0).real() < es.eigenvalues()(1).real() ? 0 : 1;
        CMatrix P(2, 2);
        P.col(0) = es.eigenvectors().col(neg);
        P.col(1) = es.eigenvectors().col(1 - neg);
        double lam = es.eigenvalues()(1 - neg).real();  // A1 ~ diag(-lam, lam)

        CMatrix A2r = P.inverse() * A2 * P;
        Complex a2 = 0.5 * (A2r(1, 1) - A2r(0, 0));
        // Absorb the A1-component of A2 (phi' = lam*phi + Re(a2)*psi) and the
        // b2 phase (conjugation by diag(b2/|b2|, 1)).
        CMatrix D1(2, 2);
        D1 << -1, 0, 0, 1;
        CMatrix A2t = A2r - a2.real() * D1;
        Complex b2 = A2t(0, 1), c2 = A2t(1, 0);
        if (std::abs(b2) < 1e-14 * scale)
            throw std::runtime_error("symmetrize_2x2: not strongly hyperbolic at double point");
        Complex ph = b2 / std::abs(b2);
        CMatrix D = CMatrix::Identity(2, 2);
        D(0, 0) = ph;
        // after conjugation by D: b2 -> |b2|, c2 -> c2 * ph
        b2 = std::abs(b2);
        c2 = c2 * ph;
        double ima2 = a2.imag();

        for (size_t i = 0; i < phi.size(); ++i) {
            double phi_red = lam * phi[i] + a2.real() * psi[i];
            out.realdelta_defect = std::max(
                out.realdelta_defect, std::abs(2.0 * phi_red * ima2 + psi[i] * (b2 * c2).imag()));
        }
        if (out.realdelta_defect > tol * scale * 10)
            throw std::runtime_error("symmetrize_2x2: discriminant not real (realdelta fails)");
        if ((b2 * c2).real() <= ima2 * ima2 + tol)
            throw std::runtime_error("symmetrize_2x2: not strongly hyperbolic at double point");

        CMatrix Sred(2, 2);
        Sred << c2.real(), Complex(0, ima2), Complex(0, -ima2), b2.real();
        CMatrix Pt = P * D;
        CMatrix Pti = Pt.inverse();
        out.S = Pti.adjoint() * Sred * Pti;
    }

    out.S = herm_part(out.S);
    for (size_t i = 0; i < phi.size(); ++i) {
        CMatrix A = phi[i] * A1 + psi[i] * A2;
        out.sym_defect = std::max(out.sym_defect, herm_defect(CMatrix(out.S * A)));
    }
    return out;
}

PSPCheck check_psp_identities(const CMatrix& L, const CMatrix& S_full, const CMatrix& J,
                              double tol) {
    PSPCheck out;
    const int n = static_cast<int>(L.rows());
    CMatrix Q = kernel_basis(L, ker_tol_for(L));
    if (Q.cols() == 0) throw std::invalid_argument("check_psp_identities: L has trivial kernel");

    CMatrix SJ = S_full * J;
    out.c = min_eig_herm(CMatrix(Q.adjoint() * herm_part(SJ) * Q));
    if (out.c <= 0) throw std::invalid_argument("check_psp_identities: positivity hypothesis fails");

    CMatrix AJ = J.partialPivLu().solve(L);
    auto spec = eigendecompose(AJ);
    const Cluster* zero = nullptr;
    for (const auto& cl : spec.clusters)
        if (std::abs(cl.eigenvalue) <= std::max(10 * spec.cluster_tol, 1e-9))
            zero = &cl;
    if (!zero || !zero->semisimple) {
        out.pass = false;
        return out;
    }
    const CMatrix& Pi = zero->projector;
    double scale = std::max(op_norm(SJ), 1e-30);
    out.eqPiSPi_defect = op_norm(CMatrix(Pi.adjoint() * SJ * Pi - Pi.adjoint() * SJ)) / scale;
    out.normePi_slack = op_norm(Pi) * out.c / op_norm(SJ);

    Eigen::JacobiSVD<CMatrix> svd(L, Eigen::ComputeFullU);
    int rank = 0;
    for (int i = 0; i < n; ++i)
        if (svd.singularValues()(i) > ker_tol_for(L)) ++rank;
    CMatrix R = svd.matrixU().leftCols(rank);
    out.ortho_defect = op_norm(CMatrix(Q.adjoint() * S_full * R)) / std::max(op_norm(S_full), 1e-30);
    Eigen::JacobiSVD<CMatrix> svd2(CMatrix(Q.adjoint() * S_full));
    int rank2 = 0;
    for (int i = 0; i < svd2.singularValues().size(); ++i)
        if (svd2.singularValues()(i) > 1e-8 * svd2.singularValues()(0)) ++rank2;

    out.pass = out.eqPiSPi_defect <= tol && out.normePi_slack <= 1.01 &&
               out.ortho_defect <= tol && rank2 == Q.cols();
    return out;
}

}  // namespace symlab
