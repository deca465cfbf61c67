#include "symlab/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "symlab/parallel.hpp"

namespace symlab {

bool ParamBox::contains(const RVector& a, double slack) const {
    if (a.size() != dim()) return false;
    for (int i = 0; i < dim(); ++i)
        if (a(i) < lo[i] - slack || a(i) > hi[i] + slack) return false;
    return true;
}

std::vector<RVector> ParamBox::grid(std::vector<int> counts) const {
    if (counts.empty()) counts = default_counts;
    if (static_cast<int>(counts.size()) != dim())
        throw std::invalid_argument("ParamBox::grid: counts size mismatch");
    std::vector<RVector> out;
    RVector pt(dim());
    std::function<void(int)> rec = [&](int axis) {
        if (axis == dim()) {
            out.push_back(pt);
            return;
        }
        int n = counts[axis];
        for (int i = 0; i < n; ++i) {
            pt(axis) = n == 1 ? 0.5 * (lo[axis] + hi[axis])
                              : lo[axis] + (hi[axis] - lo[axis]) * i / (n - 1.0);
            rec(axis + 1);
        }
    };
    rec(0);
    return out;
}

std::vector<CMatrix> SymbolFamily::eval_coeffs(const RVector& a) const {
    if (!params.contains(a)) throw std::invalid_argument("symbol family: a outside domain");
    auto mats = coeffs(a);
    if (static_cast<int>(mats.size()) != d + 1)
        throw std::runtime_error("symbol family: coefficient count != d+1");
    for (const auto& m : mats)
        if (m.rows() != N || m.cols() != N || !is_finite(m))
            throw std::runtime_error("symbol family: bad coefficient matrix");
    return mats;
}

Direction::Direction(RVector v) : nu(std::move(v)) {
    if (nu.norm() <= 0) throw std::invalid_argument("Direction: zero vector");
}

CMatrix eval_symbol(const SymbolFamily& fam, const RVector& a, const RVector& xi_tilde) {
    if (xi_tilde.size() != fam.d + 1)
        throw std::invalid_argument("eval_symbol: xi~ must have 1+d entries");
    auto mats = fam.eval_coeffs(a);
    CMatrix L = CMatrix::Zero(fam.N, fam.N);
    for (int j = 0; j <= fam.d; ++j) L += xi_tilde(j) * mats[j];
    return L;
}

std::vector<Complex> char_roots(const SymbolFamily& fam, const RVector& a,
                                const RVector& xi_tilde, const Direction& nu) {
    CMatrix Lnu = eval_symbol(fam, a, nu.nu);
    Eigen::PartialPivLU<CMatrix> lu(Lnu);
    double dt = std::abs(lu.determinant());
    if (dt < 1e-12 * std::pow(std::max(op_norm(Lnu), 1e-30), fam.N))
        throw std::runtime_error("char_roots: nu not noncharacteristic");
    CMatrix A = lu.solve(eval_symbol(fam, a, xi_tilde));
    CVector ev = Eigen::ComplexEigenSolver<CMatrix>(CMatrix(-A), false).eigenvalues();
    std::vector<Complex> roots(ev.data(), ev.data() + ev.size());
    std::sort(roots.begin(), roots.end(), [](Complex x, Complex y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    return roots;
}

std::vector<RVector> sphere_samples(int ambient_dim, int count) {
    std::vector<RVector> pts;
    if (ambient_dim == 1) {
        RVector p(1), q(1);
        p << 1.0;
        q << -1.0;
        pts = {p, q};
    } else if (ambient_dim == 2) {
        pts.reserve(count);
        for (int i = 0; i < count; ++i) {
            double th = 2.0 * M_PI * i / count;
            RVector p(2);
            p << std::cos(th), std::sin(th);
            pts.push_back(p);
        }
    } else if (ambient_dim == 3) {
        // Fibonacci lattice
        pts.reserve(count);
        const double ga = M_PI * (3.0 - std::sqrt(5.0));
        for (int i = 0; i < count; ++i) {
            double z = 1.0 - (2.0 * i + 1.0) / count;
            double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            double th = ga * i;
            RVector p(3);
            p << r * std::cos(th), r * std::sin(th), z;
            pts.push_back(p);
        }
    } else {
        throw std::invalid_argument("sphere_samples: ambient dimension must be 1, 2 or 3");
    }
    return pts;
}

RMatrix complement_basis(const Direction& nu) {
    int n = static_cast<int>(nu.nu.size());
    RMatrix M(n, n);
    M.col(0) = nu.unit();
    M.rightCols(n - 1) = RMatrix::Identity(n, n).rightCols(n - 1);
    Eigen::HouseholderQR<RMatrix> qr(M);
    RMatrix Q = qr.householderQ();
    return Q.rightCols(n - 1);
}

HyperbolicityResult hyperbolicity_check(const SymbolFamily& fam, const RVector& a,
                                        const Direction& nu, int sphere_count, double tol) {
    HyperbolicityResult out;
    auto pts = sphere_samples(fam.d + 1, sphere_count);
    for (const auto& xi : pts) {
        auto roots = char_roots(fam, a, xi, nu);
        for (Complex r : roots) out.max_im = std::max(out.max_im, std::abs(r.imag()));
        ++out.samples;
    }
    out.pass = out.max_im <= tol;
    return out;
}

DirectionCertificate strong_hyperbolicity_in_direction(const SymbolFamily& fam,
                                                       const Direction& nu,
                                                       const SamplePlan& plan, int workers) {
    DirectionCertificate out;
    out.nu = nu.nu;

    auto as = fam.params.grid(plan.param_counts);
    RMatrix E = complement_basis(nu);
    auto sphere = sphere_samples(fam.d, plan.sphere_count);

    struct Task {
        RVector a, xi;
    };
    std::vector<Task> tasks;
    tasks.reserve(as.size() * sphere.size());
    for (const auto& a : as)
        for (const auto& s : sphere) tasks.push_back({a, E * s});

    out.samples.resize(tasks.size());
    parallel_for(
        tasks.size(),
        [&](size_t i) {
            const auto& t = tasks[i];
            SampleEvidence ev;
            ev.a = t.a;
            ev.xi = t.xi;
            CMatrix Lnu = eval_symbol(fam, t.a, nu.nu);
            Eigen::PartialPivLU<CMatrix> lu(Lnu);
            ev.det_nu = std::abs(lu.determinant());
            if (ev.det_nu < 1e-12) {
                std::string coords = "a = [";
                for (int k = 0; k < t.a.size(); ++k)
                    coords += (k ? "," : "") + std::to_string(t.a(k));
                throw std::runtime_error("strong_hyperbolicity_in_direction: L(nu) singular at " +
                                         coords + "]");
            }
            CMatrix A = lu.solve(eval_symbol(fam, t.a, t.xi));
            auto cert = strong_hyperbolicity_certificate(A);
            ev.real_residual = cert.real_residual;
            ev.C1 = cert.C1;
            ev.C2 = cert.C2;
            ev.C3 = cert.C3;
            ev.c4 = cert.c4;
            ev.C4 = cert.C4;
            ev.pass = cert.pass;
            ev.reason = cert.reason;
            out.samples[i] = std::move(ev);
        },
        workers);

    out.pass = true;
    for (const auto& ev : out.samples) {
        out.pass = out.pass && ev.pass;
        out.C1 = std::max(out.C1, ev.C1);
        out.C2 = std::max(out.C2, ev.C2);
        out.C3 = std::max(out.C3, ev.C3);
        out.C4 = std::max(out.C4, ev.C4);
        out.c4 = std::min(out.c4, ev.c4);
        out.real_residual = std::max(out.real_residual, ev.real_residual);
        out.min_det_nu = std::min(out.min_det_nu, ev.det_nu);
    }

    // Symmetrizer field S(a, xi) = S_A(a, xi) L(a, nu)^{-1}: S L(nu) = S_A is
    // hermitian >= c4 and S L(xi) = S_A A is hermitian.
    RVector nuv = nu.nu;
    const SymbolFamily* fp = &fam;
    out.symmetrizer = [fp, nuv](const RVector& a, const RVector& xi) -> CMatrix {
        CMatrix Lnu = eval_symbol(*fp, a, nuv);
        Eigen::PartialPivLU<CMatrix> lu(Lnu);
        CMatrix A = lu.solve(eval_symbol(*fp, a, xi));
        CMatrix SA = canonical_symmetrizer(eigendecompose(A));
        return SA * lu.inverse();
    };

    // Field defect on the sampled set.
    double defect = 0.0;
    for (const auto& a : as) {
        CMatrix Lnu = eval_symbol(fam, a, nu.nu);
        Eigen::PartialPivLU<CMatrix> lu(Lnu);
        for (const auto& s : sphere) {
            RVector xi = E * s;
            CMatrix L = eval_symbol(fam, a, xi);
            CMatrix A = lu.solve(L);
            auto spec = eigendecompose(A);
            if (!spec.all_semisimple()) continue;  // already recorded as failure
            CMatrix S = canonical_symmetrizer(spec) * lu.inverse();
            double den = std::max(op_norm(S) * op_norm(L), 1e-300);
            defect = std::max(defect, herm_defect(CMatrix(S * L)) / den);
        }
    }
    out.sym_defect = defect;
    return out;
}

CMatrix adjugate(const CMatrix& m) {
    const int n = static_cast<int>(m.rows());
    if (n == 1) return CMatrix::Identity(1, 1);
    CMatrix adj(n, n);
    CMatrix minor(n - 1, n - 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            for (int r = 0, rr = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 0, cc = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor(rr, cc) = m(r, c);
                    ++cc;
                }
                ++rr;
            }
            double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            adj(j, i) = sign * minor.determinant();  // transpose of cofactors
        }
    return adj;
}

RVector det_gradient(const SymbolFamily& fam, const RVector& a, const RVector& xi_tilde) {
    auto mats = fam.eval_coeffs(a);
    CMatrix L = CMatrix::Zero(fam.N, fam.N);
    for (int j = 0; j <= fam.d; ++j) L += xi_tilde(j) * mats[j];
    CMatrix adj = adjugate(L);
    RVector g(fam.d + 1);
    for (int j = 0; j <= fam.d; ++j) g(j) = (adj * mats[j]).trace().real();
    return g;
}

double gradient_bound(const SymbolFamily& fam, const RVector& a, int sphere_count) {
    // |grad det L| is homogeneous of degree N-1, so the max over |xi~| <= 2
    // sits on the boundary sphere; inner shells are sampled as well.
    double K = 0.0;
    auto sphere = sphere_samples(fam.d + 1, sphere_count);
    for (double r : {0.5, 1.0, 1.5, 2.0})
        for (const auto& p : sphere)
            K = std::max(K, det_gradient(fam, a, RVector(r * p)).norm());
    return 1.05 * K;  // sampling headroom
}

bool ConeChart::contains(const RVector& dir) const {
    RVector u = dir / dir.norm();
    for (const auto& n : certified)
        if ((u - n.nu).norm() <= n.radius) return true;
    return false;
}

ConeChart cone_explore(const SymbolFamily& fam, const RVector& a, const Direction& nu,
                       const ConeBudget& budget) {
    ConeChart chart;
    chart.base = nu.unit();

    auto hyp = hyperbolicity_check(fam, a, nu);
    if (!hyp.pass)
        throw std::runtime_error("cone_explore: base direction fails hyperbolicity check");

    chart.K = gradient_bound(fam, a);
    auto sphere = sphere_samples(fam.d + 1, budget.sphere_count);

    auto detval = [&](const RVector& dir) {
        return std::abs(eval_symbol(fam, a, dir).determinant());
    };
    auto node_radius = [&](const RVector& u, double dv) {
        // Euler: |p_N(u)| <= |grad p_N(u)|, so radius <= 1 for unit u.
        double Ku = std::max(chart.K, det_gradient(fam, a, u).norm());
        return dv / Ku;
    };

    std::vector<char> used(sphere.size(), 0);
    std::deque<size_t> queue;

    RVector base = chart.base;
    double dv = detval(base);
    chart.certified.push_back({base, dv, node_radius(base, dv)});
    chart.c = dv;

    // seed: sphere points inside the base ball
    for (size_t i = 0; i < sphere.size(); ++i)
        if ((sphere[i] - base).norm() <= chart.certified[0].radius) {
            used[i] = 1;
            queue.push_back(i);
        }

    while (!queue.empty()) {
        if (static_cast<int>(chart.certified.size()) >= budget.max_certified) {
            chart.complete = false;
            break;
        }
        size_t i = queue.front();
        queue.pop_front();
        const RVector& u = sphere[i];
        double dvi = detval(u);
        if (dvi <= 0) continue;  // cannot happen inside a certified ball
        double rad = node_radius(u, dvi);
        chart.certified.push_back({u, dvi, rad});
        chart.c = std::min(chart.c, dvi);
        for (size_t k = 0; k < sphere.size(); ++k)
            if (!used[k] && (sphere[k] - u).norm() <= rad) {
                used[k] = 1;
                queue.push_back(k);
            }
    }
    return chart;
}

bool cone_segment_walk(const SymbolFamily& fam, const RVector& a, const RVector& from,
                       const RVector& to, double K) {
    // Walk the normalized segment using the lemma radius eps = |p_N(x)|/K
    // at each unit point x; every step stays inside the cone by construction,
    // and the walk stalls at the boundary.
    auto point = [&](double t) -> RVector {
        RVector p = (1.0 - t) * from + t * to;
        double n = p.norm();
        if (n < 1e-12) return RVector::Zero(from.size());
        return p / n;
    };
    double t = 0.0;
    for (int iter = 0; iter < 100000 && t < 1.0; ++iter) {
        RVector x = point(t);
        if (x.norm() == 0.0) return false;
        double eps = std::abs(eval_symbol(fam, a, x).determinant()) / K;
        if (eps < 1e-10) return false;  // stalled at the cone boundary
        double dt = 1.0 - t;
        while (dt > 1e-14 && (point(t + dt) - x).norm() > 0.5 * eps) dt *= 0.5;
        if (dt <= 1e-14) return false;
        t += dt;
    }
    return t >= 1.0;
}

double direction_change_constant(const SymbolFamily& fam, const RVector& a, const Direction& nu,
                                 const Direction& nu_prime, double C, double c) {
    double K = gradient_bound(fam, a);
    if (!cone_segment_walk(fam, a, nu.unit(), nu_prime.unit(), K))
        throw std::runtime_error("direction_change_constant: nu_prime uncertified");
    if (std::abs(eval_symbol(fam, a, nu_prime.nu).determinant()) < c * (1.0 - 1e-12))
        throw std::runtime_error("direction_change_constant: nu_prime uncertified");
    return K * C * nu.norm() / (c * nu_prime.norm());
}

double necessary_condition_probe(const SymbolFamily& fam, const RVector& a, const Direction& nu,
                                 const std::vector<double>& gamma_grid, int sphere_count) {
    double sup = 0.0;
    CMatrix Lnu = eval_symbol(fam, a, nu.nu);
    const Complex i_unit(0.0, 1.0);
    for (const auto& xi : sphere_samples(fam.d + 1, sphere_count)) {
        CMatrix L = eval_symbol(fam, a, xi);
        for (double g : gamma_grid) {
            if (g == 0.0) continue;
            double smin = min_sv(CMatrix(L + i_unit * g * Lnu));
            if (smin <= 0) return std::numeric_limits<double>::infinity();
            sup = std::max(sup, std::abs(g) / smin);
        }
    }
    return sup;
}

}  // namespace symlab
