#include "symlab/regularity.hpp"

#include <algorithm>
#include <cmath>

namespace symlab {

std::size_t FieldSamples::flat(const std::vector<int>& idx) const {
    std::size_t f = 0;
    for (int ax = 0; ax < dims; ++ax) f = f * shape[ax] + idx[ax];
    return f;
}

RVector FieldSamples::point(const std::vector<int>& idx) const {
    RVector p(dims);
    for (int ax = 0; ax < dims; ++ax)
        p(ax) = shape[ax] > 1 ? lo[ax] + (hi[ax] - lo[ax]) * idx[ax] / (shape[ax] - 1.0)
                              : 0.5 * (lo[ax] + hi[ax]);
    return p;
}

namespace {

void for_each_index(const std::vector<int>& shape, const std::function<void(std::vector<int>&)>& f) {
    std::vector<int> idx(shape.size(), 0);
    for (;;) {
        std::vector<int> copy = idx;
        f(copy);
        int ax = static_cast<int>(shape.size()) - 1;
        while (ax >= 0 && ++idx[ax] == shape[ax]) idx[ax--] = 0;
        if (ax < 0) break;
    }
}

}  // namespace

FieldSamples sample_field(const MatrixField& f, const std::vector<int>& counts) {
    FieldSamples out;
    out.dims = f.dims;
    out.shape = counts;
    out.lo = f.lo;
    out.hi = f.hi;
    std::size_t total = 1;
    for (int c : counts) total *= c;
    out.values.resize(total);
    for_each_index(counts, [&](std::vector<int>& idx) {
        out.values[out.flat(idx)] = f.eval(out.point(idx));
    });
    return out;
}

RegularityReport lipschitz_estimate(const FieldSamples& f, int refinement_levels) {
    if (refinement_levels < 2)
        throw std::invalid_argument("lipschitz_estimate: need >= 2 refinement levels");
    RegularityReport rep;
    for (int lev = refinement_levels - 1; lev >= 0; --lev) {
        int stride = 1 << lev;
        double sup = 0.0;
        for_each_index(f.shape, [&](std::vector<int>& idx) {
            for (int ax = 0; ax < f.dims; ++ax) {
                bool on_sub = true;
                for (int k = 0; k < f.dims; ++k)
                    if (idx[k] % stride != 0) on_sub = false;
                if (!on_sub || idx[ax] + stride >= f.shape[ax]) continue;
                std::vector<int> nb = idx;
                nb[ax] += stride;
                std::size_t i = f.flat(idx), j = f.flat(nb);
                if (!f.is_valid(i) || !f.is_valid(j)) continue;
                double h = stride * f.spacing(ax);
                sup = std::max(sup, op_norm(CMatrix(f.values[j] - f.values[i])) / h);
            }
        });
        rep.level_constants.push_back(sup);
    }
    rep.lipschitz_constant = rep.level_constants.back();
    if (rep.level_constants.size() >= 2) {
        double a = rep.level_constants[rep.level_constants.size() - 2];
        double b = rep.level_constants.back();
        rep.lipschitz_stable = b > 0 ? std::abs(b - a) <= 0.2 * b : true;
    }
    return rep;
}

std::vector<FieldSamples> eigenvalue_field(const MatrixField& A, const std::vector<int>& counts,
                                           double imag_tol) {
    FieldSamples proto;
    proto.dims = A.dims;
    proto.shape = counts;
    proto.lo = A.lo;
    proto.hi = A.hi;
    std::size_t total = 1;
    for (int c : counts) total *= c;

    int N = -1;
    std::vector<FieldSamples> out;
    std::vector<std::vector<double>> branches;
    for_each_index(counts, [&](std::vector<int>& idx) {
        CMatrix M = A.eval(proto.point(idx));
        if (N < 0) {
            N = static_cast<int>(M.rows());
            branches.assign(N, std::vector<double>(total));
        }
        CVector ev = Eigen::ComplexEigenSolver<CMatrix>(M, false).eigenvalues();
        std::vector<double> re(N);
        for (int i = 0; i < N; ++i) {
            if (std::abs(ev(i).imag()) > imag_tol * std::max(1.0, op_norm(M)))
                throw std::runtime_error("eigenvalue_field: complex eigenvalue beyond tol");
            re[i] = ev(i).real();
        }
        std::sort(re.begin(), re.end());
        for (int i = 0; i < N; ++i) branches[i][proto.flat(idx)] = re[i];
    });
    for (int i = 0; i < N; ++i) {
        FieldSamples fs = proto;
        fs.values.resize(total);
        for (std::size_t k = 0; k < total; ++k) {
            CMatrix v(1, 1);
            v(0, 0) = branches[i][k];
            fs.values[k] = v;
        }
        out.push_back(std::move(fs));
    }
    return out;
}

RegularityReport projector_modulus(const MatrixField& A, const ProjectorModulusOptions& sel,
                                   const std::vector<int>& counts) {
    if (sel.branches.empty())
        throw std::invalid_argument("projector_modulus: empty branch selection");
    FieldSamples field;
    field.dims = A.dims;
    field.shape = counts;
    field.lo = A.lo;
    field.hi = A.hi;
    std::size_t total = 1;
    for (int c : counts) total *= c;
    field.values.resize(total);

    RegularityReport rep;
    double delta_min = 1e300;
    double C2 = 0.0, N_dim = 0.0;
    bool gap_collapse = false;
    RVector collapse_at;

    for_each_index(counts, [&](std::vector<int>& idx) {
        RVector p = field.point(idx);
        CMatrix M = A.eval(p);
        N_dim = static_cast<double>(M.rows());
        auto spec = eigendecompose(M);
        // sorted branch values with multiplicity
        std::vector<std::pair<double, int>> branch;  // (value, cluster index)
        for (size_t c = 0; c < spec.clusters.size(); ++c)
            for (int m = 0; m < spec.clusters[c].multiplicity; ++m)
                branch.push_back({spec.clusters[c].eigenvalue.real(), static_cast<int>(c)});
        std::sort(branch.begin(), branch.end());
        // clusters touched by the selection
        std::vector<char> in_sel(spec.clusters.size(), 0);
        for (int b : sel.branches) in_sel[branch.at(b).second] = 1;
        CMatrix Pi = CMatrix::Zero(M.rows(), M.cols());
        double gap = 1e300;
        for (size_t c = 0; c < spec.clusters.size(); ++c) {
            C2 = std::max(C2, op_norm(spec.clusters[c].projector));
            if (in_sel[c]) Pi += spec.clusters[c].projector;
            for (size_t o = 0; o < spec.clusters.size(); ++o)
                if (in_sel[c] && !in_sel[o])
                    gap = std::min(gap,
                                   std::abs(spec.clusters[c].eigenvalue - spec.clusters[o].eigenvalue));
        }
        field.values[field.flat(idx)] = Pi;
        if (gap < sel.gap_floor) {
            gap_collapse = true;
            collapse_at = p;
        }
        delta_min = std::min(delta_min, gap);
    });

    // Lipschitz constant of A itself on the same grid.
    FieldSamples asamp = sample_field(A, counts);
    double K = 0.0;
    for_each_index(counts, [&](std::vector<int>& idx) {
        for (int ax = 0; ax < field.dims; ++ax) {
            if (idx[ax] + 1 >= field.shape[ax]) continue;
            std::vector<int> nb = idx;
            nb[ax] += 1;
            double h = field.spacing(ax);
            K = std::max(K, op_norm(CMatrix(asamp.values[asamp.flat(nb)] -
                                            asamp.values[asamp.flat(idx)])) / h);
        }
    });

    double sup = 0.0;
    for_each_index(counts, [&](std::vector<int>& idx) {
        for (int ax = 0; ax < field.dims; ++ax) {
            if (idx[ax] + 1 >= field.shape[ax]) continue;
            std::vector<int> nb = idx;
            nb[ax] += 1;
            double h = field.spacing(ax);
            sup = std::max(sup, op_norm(CMatrix(field.values[field.flat(nb)] -
                                                field.values[field.flat(idx)])) / h);
        }
    });

    rep.lipschitz_constant = sup;
    rep.theory_bound = 2.0 * N_dim * N_dim * C2 * C2 * K / std::max(delta_min, 1e-300);
    if (gap_collapse) {
        rep.flag = "delta->0 region at [";
        for (int i = 0; i < collapse_at.size(); ++i)
            rep.flag += (i ? "," : "") + std::to_string(collapse_at(i));
        rep.flag += "]";
    }
    rep.level_constants = {delta_min, K, C2};  // evidence triple for reports
    return rep;
}

FieldSamples symmetrizer_field_samples(const MatrixField& A, const std::vector<int>& counts) {
    FieldSamples out;
    out.dims = A.dims;
    out.shape = counts;
    out.lo = A.lo;
    out.hi = A.hi;
    std::size_t total = 1;
    for (int c : counts) total *= c;
    out.values.resize(total);
    out.valid.assign(total, 1);
    for_each_index(counts, [&](std::vector<int>& idx) {
        std::size_t i = out.flat(idx);
        CMatrix M = A.eval(out.point(idx));
        auto spec = eigendecompose(M);
        if (!spec.all_semisimple() || spec.max_imag() > 1e-8 * std::max(1.0, op_norm(M))) {
            out.valid[i] = 0;
            ++out.invalid_count;
            out.values[i] = CMatrix::Zero(M.rows(), M.cols());
            return;
        }
        out.values[i] = canonical_symmetrizer(spec);
    });
    return out;
}

HolderFit holder_fit(const FieldSamples& f, const RVector& center,
                     const std::vector<double>& radii) {
    if (radii.size() < 5) throw std::invalid_argument("holder_fit: need >= 5 radii");
    double rmin = *std::min_element(radii.begin(), radii.end());
    double rmax = *std::max_element(radii.begin(), radii.end());
    if (std::log10(rmax / rmin) < 1.5)
        throw std::invalid_argument("holder_fit: radii must span >= 1.5 decades");

    // Oscillation measured about the ball center: within a factor 2 of the
    // sup-diameter, so the log-log slope is unchanged.
    std::vector<int> cidx(f.dims);
    for (int ax = 0; ax < f.dims; ++ax) {
        double t = f.shape[ax] > 1
                       ? (center(ax) - f.lo[ax]) / (f.hi[ax] - f.lo[ax]) * (f.shape[ax] - 1)
                       : 0.0;
        cidx[ax] = std::min(f.shape[ax] - 1, std::max(0, static_cast<int>(std::lround(t))));
    }
    const CMatrix fc = f.values[f.flat(cidx)];

    HolderFit fit;
    for (double r : radii) {
        double osc = 0.0;
        for_each_index(f.shape, [&](std::vector<int>& idx) {
            std::size_t i = f.flat(idx);
            if (!f.is_valid(i)) return;
            if ((f.point(idx) - center).norm() <= r)
                osc = std::max(osc, op_norm(CMatrix(f.values[i] - fc)));
        });
        fit.radii.push_back(r);
        fit.oscillation.push_back(osc);
    }
    double oscmax = *std::max_element(fit.oscillation.begin(), fit.oscillation.end());
    if (oscmax < 1e-14) {
        fit.constant_field = true;
        fit.alpha = 1.0;
        fit.r2 = 1.0;
        return fit;
    }

    // least squares on log-log
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    int n = 0;
    for (size_t i = 0; i < fit.radii.size(); ++i) {
        if (fit.oscillation[i] <= 0) continue;
        double x = std::log(fit.radii[i]), y = std::log(fit.oscillation[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
        ++n;
    }
    double denom = n * sxx - sx * sx;
    fit.alpha = (n * sxy - sx * sy) / denom;
    double ss_tot = syy - sy * sy / n;
    double b = (sy - fit.alpha * sx) / n;
    double ss_res = 0.0;
    for (size_t i = 0; i < fit.radii.size(); ++i) {
        if (fit.oscillation[i] <= 0) continue;
        double pred = fit.alpha * std::log(fit.radii[i]) + b;
        double err = std::log(fit.oscillation[i]) - pred;
        ss_res += err * err;
    }
    fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

PathLimitGap path_limit_gap(const MatrixField& F, double delta0, int levels) {
    PathLimitGap out;
    RVector p1(2), p2(2);
    for (int k = 0; k < levels; ++k) {
        double d = delta0 * std::pow(0.5, k);
        p1 << d, 0.0;
        p2 << 0.0, d;
        out.per_level.push_back(op_norm(CMatrix(F.eval(p1) - F.eval(p2))));
    }
    out.gap = out.per_level.back();
    if (levels >= 2) {
        double prev = out.per_level[levels - 2];
        out.survives = out.gap > 0 && std::abs(out.gap - prev) <= 0.1 * std::max(out.gap, 1e-300);
    }
    return out;
}

DirectionalC1Defect directional_c1_defect(const MatrixField& F, double r0, int levels) {
    DirectionalC1Defect out;
    RVector z(2), p(2);
    z << 0.0, 0.0;
    CMatrix F0 = F.eval(z);
    const double isq = 1.0 / std::sqrt(2.0);
    for (int k = 0; k < levels; ++k) {
        double r = r0 * std::pow(0.5, k);
        p << r, 0.0;
        CMatrix D0 = (F.eval(p) - F0) / r;
        p << 0.0, r;
        CMatrix D90 = (F.eval(p) - F0) / r;
        p << r * isq, r * isq;
        CMatrix D45 = (F.eval(p) - F0) / r;
        out.per_level.push_back(op_norm(CMatrix(D45 - isq * (D0 + D90))));
    }
    out.defect = out.per_level.back();
    if (levels >= 2) {
        double prev = out.per_level[levels - 2];
        out.survives =
            out.defect > 0 && std::abs(out.defect - prev) <= 0.1 * std::max(out.defect, 1e-300);
    }
    return out;
}

OneSidedMismatch one_sided_mismatch(const MatrixField& F, double h0, int levels) {
    OneSidedMismatch out;
    RVector z(1), p(1), m(1);
    z << 0.0;
    CMatrix F0 = F.eval(z);
    for (int k = 0; k < levels; ++k) {
        double h = h0 * std::pow(0.5, k);
        p << h;
        m << -h;
        CMatrix dp = (F.eval(p) - F0) / h;
        CMatrix dm = (F0 - F.eval(m)) / h;
        out.per_level.push_back(op_norm(CMatrix(dp - dm)));
    }
    out.mismatch = out.per_level.back();
    if (levels >= 2) {
        double prev = out.per_level[levels - 2];
        out.survives =
            out.mismatch > 0 && std::abs(out.mismatch - prev) <= 0.1 * std::max(out.mismatch, 1e-300);
    }
    return out;
}

}  // namespace symlab
