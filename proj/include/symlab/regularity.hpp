// Regularity measurement of matrix/scalar fields over parameter grids:
// Lipschitz constants by difference quotients across refinement levels,
// Hölder exponents by log-log oscillation fits, projector moduli against the
// resolvent-contour bound, and refinement-surviving discontinuity gaps.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "symlab/matrix_core.hpp"

namespace symlab {

// A matrix-valued map over a box in R^dims (dims = 1 or 2).
struct MatrixField {
    int dims = 1;
    std::vector<double> lo, hi;
    std::function<CMatrix(const RVector&)> eval;
};

struct FieldSamples {
    int dims = 1;
    std::vector<int> shape;
    std::vector<double> lo, hi;
    std::vector<CMatrix> values;  // lexicographic order, scalars as 1x1
    std::vector<char> valid;      // per-sample validity (empty = all valid)
    int invalid_count = 0;

    double spacing(int axis) const {
        return shape[axis] > 1 ? (hi[axis] - lo[axis]) / (shape[axis] - 1) : 0.0;
    }
    std::size_t flat(const std::vector<int>& idx) const;
    RVector point(const std::vector<int>& idx) const;
    bool is_valid(std::size_t i) const { return valid.empty() || valid[i]; }
};

FieldSamples sample_field(const MatrixField& f, const std::vector<int>& counts);

struct RegularityReport {
    double lipschitz_constant = 0.0;
    bool lipschitz_stable = false;       // last two levels agree within 20%
    std::vector<double> level_constants;  // coarse -> fine
    double holder_exponent = 0.0;
    double holder_r2 = 0.0;
    double discontinuity_gap = 0.0;
    std::optional<double> theory_bound;
    std::string flag;
};

// Sup of neighbor difference quotients per refinement level (levels obtained
// by striding the finest grid); the reported constant is the finest level.
RegularityReport lipschitz_estimate(const FieldSamples& f, int refinement_levels);

// Sorted real eigenvalue branches of A over the grid, one scalar field per
// branch index. Throws when an eigenvalue leaves the real axis beyond tol.
std::vector<FieldSamples> eigenvalue_field(const MatrixField& A, const std::vector<int>& counts,
                                           double imag_tol = 1e-8);

// Modulus of continuity of the spectral projector onto the clusters holding
// the selected sorted branches. theory_bound = 2 N^2 C2^2 K / delta from the
// delta/2-contour resolvent estimate.
struct ProjectorModulusOptions {
    std::vector<int> branches;  // sorted branch indices forming the cluster
    double gap_floor = 1e-8;
};
RegularityReport projector_modulus(const MatrixField& A, const ProjectorModulusOptions& sel,
                                   const std::vector<int>& counts);

// Canonical symmetrizer per sample; samples failing the certificate are
// marked invalid, excluded and counted.
FieldSamples symmetrizer_field_samples(const MatrixField& A, const std::vector<int>& counts);

struct HolderFit {
    double alpha = 0.0;
    double r2 = 0.0;
    bool constant_field = false;
    std::vector<double> radii, oscillation;
};

// Least-squares slope of log(oscillation over the ball of radius r) vs log r.
// Requires >= 5 radii spanning >= 1.5 decades.
HolderFit holder_fit(const FieldSamples& f, const RVector& center,
                     const std::vector<double>& radii);

// Jump between the two coordinate-path limits at the origin of a 2D field:
// F(delta, 0) vs F(0, delta) with delta halved per level. The gap "survives"
// when the last two levels agree within 10%.
struct PathLimitGap {
    double gap = 0.0;
    bool survives = false;
    std::vector<double> per_level;
};
PathLimitGap path_limit_gap(const MatrixField& F, double delta0, int levels);

// One-sided derivative mismatch of a 1D field at 0: ||D+ - D-|| with
// D+- = (F(+-h) - F(0)) / (+-h), h halved per level.
struct OneSidedMismatch {
    double mismatch = 0.0;
    bool survives = false;
    std::vector<double> per_level;
};
OneSidedMismatch one_sided_mismatch(const MatrixField& F, double h0, int levels);

// C1 obstruction witness at the origin of a 2D field. For a C1 field the
// radial one-sided derivatives D(w) = (F(r w) - F(0))/r combine additively
// over directions, so ||D(45deg) - (D(0) + D(90deg))/sqrt(2)|| must vanish;
// a refinement-surviving defect certifies a direction-dependent derivative.
struct DirectionalC1Defect {
    double defect = 0.0;
    bool survives = false;
    std::vector<double> per_level;
};
DirectionalC1Defect directional_c1_defect(const MatrixField& F, double r0, int levels);

}  // namespace symlab
