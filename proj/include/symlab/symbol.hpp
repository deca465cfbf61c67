// Symbol families L(a, xi~) = sum xi~_j A_j(a): evaluation, characteristic
// roots, hyperbolicity and strong-hyperbolicity certificates in a direction,
// hyperbolicity-cone exploration and the direction-change constant.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "symlab/matrix_core.hpp"

namespace symlab {

struct ParamBox {
    std::vector<std::string> names;
    std::vector<double> lo, hi;
    std::vector<int> default_counts;

    int dim() const { return static_cast<int>(names.size()); }
    bool contains(const RVector& a, double slack = 1e-12) const;
    // Tensor grid; counts falls back to default_counts, a count of 1 samples
    // the box midpoint.
    std::vector<RVector> grid(std::vector<int> counts = {}) const;
};

struct SymbolFamily {
    int N = 0;  // matrix dimension
    int d = 0;  // space dimension; symbols take xi~ in R^{1+d}
    ParamBox params;
    std::string name;  // builtin identifier, or "inline"
    std::function<std::vector<CMatrix>(const RVector&)> coeffs;  // A_0 .. A_d

    // Inline families keep their coefficient expression strings so configs
    // round-trip bit-exactly; empty for builtins.
    std::vector<std::vector<std::vector<std::string>>> coeff_exprs;

    std::vector<CMatrix> eval_coeffs(const RVector& a) const;
};

struct Direction {
    RVector nu;
    explicit Direction(RVector v);
    double norm() const { return nu.norm(); }
    RVector unit() const { return nu / nu.norm(); }
};

// L(a, xi~) = sum_j xi~_j A_j(a)
CMatrix eval_symbol(const SymbolFamily& fam, const RVector& a, const RVector& xi_tilde);

// The N roots lambda of det L(a, xi~ + lambda nu) = 0, as eigenvalues of
// -L(nu)^{-1} L(xi~). Throws when nu is characteristic.
std::vector<Complex> char_roots(const SymbolFamily& fam, const RVector& a,
                                const RVector& xi_tilde, const Direction& nu);

// Deterministic unit-sphere sample sets: {+-1} for S^0, uniform angles for
// S^1, Fibonacci lattice for S^2.
std::vector<RVector> sphere_samples(int ambient_dim, int count);

// Orthonormal basis (columns) of the nu-complement E in R^{1+d}.
RMatrix complement_basis(const Direction& nu);

struct HyperbolicityResult {
    bool pass = false;
    double max_im = 0.0;
    int samples = 0;
};
HyperbolicityResult hyperbolicity_check(const SymbolFamily& fam, const RVector& a,
                                        const Direction& nu, int sphere_count = 256,
                                        double tol = 1e-9);

struct SamplePlan {
    std::vector<int> param_counts;  // empty = family defaults
    int sphere_count = 64;          // frequency samples on the unit sphere of E
};

struct SampleEvidence {
    RVector a;
    RVector xi;  // ambient coordinates, unit vector in E
    double real_residual = 0.0;
    double C1 = 0.0, C2 = 0.0, C3 = 0.0, c4 = 0.0, C4 = 0.0;
    double det_nu = 0.0;  // |det L(a, nu)|
    bool pass = false;
    std::string reason;
};

// Per-direction certificate with uniform constants over the sampled
// (a, xi)-set and the symmetrizer field S(a, xi) = S_A(a, xi) L(a, nu)^{-1}.
struct DirectionCertificate {
    bool pass = false;
    RVector nu;
    double C1 = 0.0, C2 = 0.0, C3 = 0.0;
    double c4 = 1e300, C4 = 0.0;  // extremes of the canonical symmetrizer bounds
    double real_residual = 0.0;
    double min_det_nu = 1e300;
    double sym_defect = 0.0;  // max over samples of ||S L(xi) - (S L(xi))*||/(||S|| ||L||)
    std::vector<SampleEvidence> samples;

    // S(a, xi) for xi in E (ambient coordinates; any nonzero xi, used
    // degree-0 homogeneously).
    std::function<CMatrix(const RVector& a, const RVector& xi)> symmetrizer;
};

DirectionCertificate strong_hyperbolicity_in_direction(const SymbolFamily& fam,
                                                       const Direction& nu,
                                                       const SamplePlan& plan = {},
                                                       int workers = 1);

// d/dxi~_j det L = trace(adj(L) A_j); K = max |grad det| over a sampled
// |xi~| <= 2 ball (attained on the boundary sphere by homogeneity).
CMatrix adjugate(const CMatrix& m);
RVector det_gradient(const SymbolFamily& fam, const RVector& a, const RVector& xi_tilde);
double gradient_bound(const SymbolFamily& fam, const RVector& a, int sphere_count = 512);

struct ConeChart {
    RVector base;  // unit base direction
    double K = 0.0;
    double c = 0.0;  // min |det L(a, nu)| over certified nodes
    struct Node {
        RVector nu;  // unit
        double detval = 0.0;
        double radius = 0.0;
    };
    std::vector<Node> certified;
    bool complete = true;

    bool contains(const RVector& dir) const;  // within a node's certified ball
};

struct ConeBudget {
    int sphere_count = 16384;
    int max_certified = 8192;
};

ConeChart cone_explore(const SymbolFamily& fam, const RVector& a, const Direction& nu,
                       const ConeBudget& budget = {});

// Certifies that the segment from `from` to `to` (normalized) stays inside
// the hyperbolicity cone, stepping by the lemma radius |p_N(x)|/K.
bool cone_segment_walk(const SymbolFamily& fam, const RVector& a, const RVector& from,
                       const RVector& to, double K);

// C1 = K C |nu| / (c |nu'|); verifies cone membership of nu' by the
// lemma-radius segment walk and |det L(a, nu')| >= c.
double direction_change_constant(const SymbolFamily& fam, const RVector& a, const Direction& nu,
                                 const Direction& nu_prime, double C, double c);

// sup over sphere samples xi~ and gamma of |gamma| ||(L(xi~) + i gamma L(nu))^{-1}||.
double necessary_condition_probe(const SymbolFamily& fam, const RVector& a, const Direction& nu,
                                 const std::vector<double>& gamma_grid, int sphere_count = 128);

}  // namespace symlab
