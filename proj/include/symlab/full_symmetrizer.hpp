// Full (space-time) symmetrizers: kernel positivity at characteristic points,
// the projector-compression construction recovering a direction symmetrizer
// from a full one, the cutoff construction going the other way, homotopy of
// positivity along segments of time directions, change of time direction, and
// the explicit 2x2 construction at generic double roots.
#pragma once

#include "symlab/symbol.hpp"

namespace symlab {

struct FullSymmetrizerField {
    // Evaluated at ambient space-time frequencies (used degree-0
    // homogeneously; callers pass unit vectors).
    std::function<CMatrix(const RVector& a, const RVector& xi_tilde)> eval;
    double c = 0.0;  // kernel positivity constant in the reference direction
};

struct PositivityResult {
    double c = 0.0;  // min over characteristic samples of the compressed min-eig
    RVector worst_a, worst_xi;
    int characteristic_samples = 0;
    bool vacuous = false;  // no characteristic samples found
};

// Sweeps (a, xi in E-sphere): the characteristic points along the nu-line are
// xi - tau_k nu for the roots tau_k; at each, compresses Herm(S L(nu)) to the
// kernel of L and takes the minimal eigenvalue.
PositivityResult full_positivity_check(const FullSymmetrizerField& F, const SymbolFamily& fam,
                                       const Direction& nu, const SamplePlan& plan = {});

struct FromFullResult {
    CMatrix S;   // direction symmetrizer: S L(nu) hermitian >= c1, S L(xi) hermitian
    CMatrix SJ;  // = S L(nu), the hermitian positive core
    double c1 = 0.0;
    double eqPiSPi_defect = 0.0;  // max over clusters of ||Pi* S J Pi - Pi* S J||
    double normePi_slack = 0.0;   // max of ||Pi|| c / ||S J||  (must stay <= 1 + slack)
    double ortho_defect = 0.0;    // range(L) vs {f : S f  perp  ker L} mismatch
};

// S = sum_tau Pi(tau)* 𝐒(xi - tau nu) L(nu) Pi(tau), with Pi the spectral
// projectors of L(nu)^{-1} L(xi). Verifies the projector identities at each
// characteristic root; throws "full symmetrizer inconsistent" past tol.
FromFullResult symmetrizer_from_full(const FullSymmetrizerField& F, const SymbolFamily& fam,
                                     const RVector& a, const Direction& nu, const RVector& xi,
                                     double tol = 1e-8);

// 𝐒(xi + tau nu) = (1 - chi) S(xi) + chi L(xi~)^{-1} with chi a smooth bump in
// the angle to the line R nu, supported where det L != 0 (support radius =
// half the certified cone radius at nu). S_field takes (a, xi in E) ambient.
FullSymmetrizerField full_from_symmetrizer(
    const std::function<CMatrix(const RVector&, const RVector&)>& S_field,
    const SymbolFamily& fam, const Direction& nu, double cone_radius);

// Resolves the cone radius from the gradient bound at the box midpoint.
FullSymmetrizerField full_from_symmetrizer(
    const std::function<CMatrix(const RVector&, const RVector&)>& S_field,
    const SymbolFamily& fam, const Direction& nu);

struct HomotopyResult {
    std::vector<double> t_grid;
    std::vector<double> kernel_mineig;  // per-t compressed min eigenvalue
    double c0 = 0.0;                    // value at t = 0
    bool lower_bound_holds = false;     // kernel_mineig[t] >= (1-t) c0 - tol
};

// Positivity along J_t = (1-t) J0 + t J1 on ker L(a, xi); J_t must stay
// invertible with 0 semi-simple for J_t^{-1} L.
HomotopyResult homotopy_positivity(const SymbolFamily& fam, const RVector& a, const RVector& xi,
                                   const CMatrix& J0, const CMatrix& J1,
                                   const FullSymmetrizerField& F,
                                   const std::vector<double>& t_grid, double tol = 1e-8);

struct ChangedFamily {
    SymbolFamily reduced;  // time coefficient Id, space coefficients L(nu')^{-1} L(e'_j)
    RMatrix frame;         // (1+d) x d basis of the nu'-complement E'
    // Symmetrizer for the reduced family in reduced coordinates w (xi' = frame * w):
    // hermitian, positive definite, symmetrizes every reduced coefficient.
    std::function<CMatrix(const RVector& a, const RVector& w)> symmetrizer;
    DirectionCertificate base_certificate;
};

// Re-expresses the family in the time direction nu' from the certified cone
// of e0, routing the base symmetrizer through full_from_symmetrizer ->
// symmetrizer_from_full.
ChangedFamily change_time_direction(const SymbolFamily& fam, const Direction& nu_prime,
                                    const SamplePlan& base_plan = {});

struct DoubleRootSymmetrizer {
    CMatrix S;  // hermitian positive definite, S(phi A1 + psi A2) hermitian
    bool case_a = false;          // factor-and-diagonalize path taken
    double realdelta_defect = 0;  // max |2 phi Im a2 + psi Im(b2 c2)| over samples
    double sym_defect = 0;        // max ||S A - (S A)*|| over samples
};

// The generic-double-eigenvalue construction for traceless A = phi A1 + psi A2:
// conjugate A1 to diag(-1,1), absorb Re a2 into phi, rotate b2 real, then
// S = [[Re c2, i Im a2], [-i Im a2, b2]] pulled back through the conjugations.
DoubleRootSymmetrizer symmetrize_2x2(const std::vector<double>& phi,
                                     const std::vector<double>& psi, const CMatrix& A1,
                                     const CMatrix& A2, double tol = 1e-9);

struct PSPCheck {
    double eqPiSPi_defect = 0.0;
    double normePi_slack = 0.0;  // ||Pi|| c / ||S J||
    double ortho_defect = 0.0;
    double c = 0.0;
    bool pass = false;
};

// The projector identities for one constructed instance (L, 𝐒, J) with
// 𝐒 L hermitian and Re(𝐒 J) positive on ker L.
PSPCheck check_psp_identities(const CMatrix& L, const CMatrix& S_full, const CMatrix& J,
                              double tol = 1e-8);

}  // namespace symlab
