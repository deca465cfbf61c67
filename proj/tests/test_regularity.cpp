#include <doctest.h>

#include <cmath>

#include "symlab/builtins.hpp"
#include "symlab/regularity.hpp"

using namespace symlab;

namespace {

MatrixField scalar_field_1d(double lo, double hi, std::function<double(double)> f) {
    MatrixField F;
    F.dims = 1;
    F.lo = {lo};
    F.hi = {hi};
    F.eval = [f](const RVector& p) {
        CMatrix m(1, 1);
        m(0, 0) = f(p(0));
        return m;
    };
    return F;
}

// Reduced example-1 matrix over (x, xi) at fixed eta and a-slot mode.
MatrixField example1_xslice(const std::string& mode, double alpha, double a_const, double eta,
                            double lo, double hi) {
    MatrixField F;
    F.dims = 2;
    F.lo = {lo, lo};
    F.hi = {hi, hi};
    F.eval = [=](const RVector& p) -> CMatrix {
        double x = p(0), xi = p(1);
        double a = mode == "const" ? a_const
                   : mode == "linear" ? x
                                      : std::pow(std::abs(x), alpha);
        return example1_space_matrix(a, xi, x * eta);
    };
    return F;
}

}  // namespace

TEST_CASE("lipschitz_estimate") {
    SUBCASE("|a| has constant 1 and is stable") {
        auto F = scalar_field_1d(-1, 1, [](double a) { return std::abs(a); });
        auto s = sample_field(F, {1025});
        auto rep = lipschitz_estimate(s, 4);
        CHECK(rep.lipschitz_constant == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(rep.lipschitz_stable);
    }
    SUBCASE("sqrt|a| diverges like h^{-1/2} and is flagged") {
        auto F = scalar_field_1d(-1, 1, [](double a) { return std::sqrt(std::abs(a)); });
        auto s = sample_field(F, {1025});
        auto rep = lipschitz_estimate(s, 4);
        CHECK_FALSE(rep.lipschitz_stable);
        // finest level ~ h^{-1/2} = 32-ish at h = 2/1024
        CHECK(rep.lipschitz_constant > 10.0);
        CHECK(rep.level_constants.front() < rep.level_constants.back());
    }
    SUBCASE("constant field has zero constant") {
        auto F = scalar_field_1d(-1, 1, [](double) { return 2.5; });
        auto rep = lipschitz_estimate(sample_field(F, {129}), 3);
        CHECK(rep.lipschitz_constant == 0.0);
    }
    SUBCASE("monotone under coarsening on convex domains") {
        auto F = scalar_field_1d(-2, 1.3, [](double a) { return std::abs(a) + 0.3 * a; });
        auto s = sample_field(F, {513});
        auto rep = lipschitz_estimate(s, 5);
        for (size_t k = 0; k + 1 < rep.level_constants.size(); ++k)
            CHECK(rep.level_constants[k] <= rep.level_constants[k + 1] + 1e-12);
    }
}

TEST_CASE("eigenvalue_field") {
    SUBCASE("diag(a, -a) gives sorted branches -|a|, |a|") {
        MatrixField A;
        A.dims = 1;
        A.lo = {-1};
        A.hi = {1};
        A.eval = [](const RVector& p) {
            CMatrix m = CMatrix::Zero(2, 2);
            m(0, 0) = p(0);
            m(1, 1) = -p(0);
            return m;
        };
        auto branches = eigenvalue_field(A, {129});
        REQUIRE(branches.size() == 2);
        auto r0 = lipschitz_estimate(branches[0], 3);
        auto r1 = lipschitz_estimate(branches[1], 3);
        CHECK(r0.lipschitz_constant == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(r1.lipschitz_constant == doctest::Approx(1.0).epsilon(1e-6));
        // spot check the sort
        RVector p(1);
        p << 0.5;
        CHECK(branches[0].values[96](0, 0).real() <= branches[1].values[96](0, 0).real());
    }
    SUBCASE("constant matrix has zero Lipschitz constant") {
        MatrixField A;
        A.dims = 1;
        A.lo = {0};
        A.hi = {1};
        A.eval = [](const RVector&) { return example1_space_matrix(0.3, 0.4, 0.8); };
        auto branches = eigenvalue_field(A, {65});
        for (auto& b : branches)
            CHECK(lipschitz_estimate(b, 2).lipschitz_constant < 1e-10);
    }
    SUBCASE("example 2 branches stay bounded through the double point") {
        MatrixField A;
        A.dims = 1;
        A.lo = {-0.5};
        A.hi = {0.5};
        auto fam = example2_family();
        A.eval = [fam](const RVector& p) {
            RVector a(1), xt(3);
            a << p(0);
            xt << 0, 0.3, 1.0;  // fixed (xi, eta), x varies
            return eval_symbol(fam, a, xt);
        };
        auto branches = eigenvalue_field(A, {257});
        for (auto& b : branches) {
            auto rep = lipschitz_estimate(b, 3);
            CHECK(rep.lipschitz_constant < 10.0);
            CHECK(rep.lipschitz_stable);
        }
    }
    SUBCASE("complex spectrum is rejected") {
        MatrixField A;
        A.dims = 1;
        A.lo = {0};
        A.hi = {1};
        A.eval = [](const RVector&) {
            CMatrix m(2, 2);
            m << 0, 1, -1, 0;
            return m;
        };
        CHECK_THROWS_AS(eigenvalue_field(A, {9}), std::runtime_error);
    }
}

TEST_CASE("projector_modulus") {
    SUBCASE("constant matrix has modulus 0") {
        MatrixField A;
        A.dims = 1;
        A.lo = {0};
        A.hi = {1};
        A.eval = [](const RVector&) { return example1_space_matrix(0.3, 1.0, 0.5); };
        ProjectorModulusOptions sel;
        sel.branches = {0};
        auto rep = projector_modulus(A, sel, {65});
        CHECK(rep.lipschitz_constant < 1e-9);
    }
    SUBCASE("A(a) = [[0,1],[a,0]] near a = 1: quotient within the contour bound") {
        MatrixField A;
        A.dims = 1;
        A.lo = {0.5};
        A.hi = {1.5};
        A.eval = [](const RVector& p) {
            CMatrix m(2, 2);
            m << 0, 1, p(0), 0;
            return m;
        };
        ProjectorModulusOptions sel;
        sel.branches = {0};
        auto rep = projector_modulus(A, sel, {129});
        REQUIRE(rep.theory_bound.has_value());
        CHECK(rep.lipschitz_constant <= *rep.theory_bound);
        CHECK(rep.lipschitz_constant > 0.05);  // genuinely varying
        CHECK(rep.flag.empty());
    }
    SUBCASE("example 2: quotient grows like 1/delta approaching the double manifold") {
        auto fam = example2_family();
        // 2D windows at shrinking distance r from the double manifold; the
        // angular variation of the projector makes the quotient scale like
        // 1/delta with delta the spectral gap ~ r.
        std::vector<double> logq, logd;
        for (double r : {0.4, 0.2, 0.1, 0.05, 0.025}) {
            MatrixField A;
            A.dims = 2;
            A.lo = {r, -r / 2};
            A.hi = {2 * r, r / 2};
            A.eval = [fam](const RVector& p) {
                RVector a(1), xt(3);
                a << p(1);
                xt << 0, p(0), 1.0;  // (xi, s) window offset from the origin
                return eval_symbol(fam, a, xt);
            };
            ProjectorModulusOptions sel;
            sel.branches = {0};  // lowest branch: -2 sqrt(xi^2+s^2)
            auto rep = projector_modulus(A, sel, {17, 17});
            logq.push_back(std::log(rep.lipschitz_constant));
            logd.push_back(std::log(rep.level_constants[0]));  // measured delta_min
            // the product quotient * delta stays O(1)
            CHECK(rep.lipschitz_constant * rep.level_constants[0] < 50.0);
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = static_cast<int>(logq.size());
        for (int i = 0; i < n; ++i) {
            sx += logd[i];
            sy += logq[i];
            sxx += logd[i] * logd[i];
            sxy += logd[i] * logq[i];
        }
        double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        CHECK(slope == doctest::Approx(-1.0).epsilon(0.25));
    }
}

TEST_CASE("holder_fit calibration") {
    std::vector<double> radii;
    for (int k = 0; k < 7; ++k) radii.push_back(0.5 * std::pow(0.5, k));
    RVector center(1);
    center << 0.0;
    SUBCASE("|a|^beta recovers beta within 0.05") {
        for (double beta : {0.25, 0.5, 0.75, 1.0}) {
            auto F = scalar_field_1d(-1, 1,
                                     [beta](double a) { return std::pow(std::abs(a), beta); });
            auto s = sample_field(F, {4097});
            auto fit = holder_fit(s, center, radii);
            CHECK(std::abs(fit.alpha - beta) < 0.05);
            CHECK(fit.r2 > 0.98);
        }
    }
    SUBCASE("smooth field fits alpha >= 0.95") {
        auto F = scalar_field_1d(-1, 1, [](double a) { return a; });
        auto fit = holder_fit(sample_field(F, {4097}), center, radii);
        CHECK(fit.alpha >= 0.95);
    }
    SUBCASE("constant field is flagged") {
        auto F = scalar_field_1d(-1, 1, [](double) { return 1.0; });
        auto fit = holder_fit(sample_field(F, {513}), center, radii);
        CHECK(fit.constant_field);
        CHECK(fit.alpha == 1.0);
    }
    SUBCASE("input validation") {
        auto F = scalar_field_1d(-1, 1, [](double a) { return a; });
        auto s = sample_field(F, {65});
        CHECK_THROWS_AS(holder_fit(s, center, {0.5, 0.4, 0.3, 0.2}), std::invalid_argument);
        CHECK_THROWS_AS(holder_fit(s, center, {0.5, 0.45, 0.4, 0.35, 0.3}),
                        std::invalid_argument);
    }
}

TEST_CASE("canonical symmetrizer field of example 1") {
    SUBCASE("symmetric family: field is the identity") {
        MatrixField A;
        A.dims = 1;
        A.lo = {-1};
        A.hi = {1};
        A.eval = [](const RVector& p) {
            CMatrix m(2, 2);
            m << p(0), 0.3, 0.3, -p(0);
            return m;
        };
        auto s = symmetrizer_field_samples(A, {33});
        CHECK(s.invalid_count == 0);
        for (const auto& v : s.values)
            CHECK(op_norm(CMatrix(v - CMatrix::Identity(2, 2))) < 1e-10);
    }
    SUBCASE("holder a-slot: fitted exponent in [0.4, 0.6] near the origin") {
        // Window small enough that the sqrt(r) leading term dominates the
        // O(r) corrections; radii respect the 4h discretization floor.
        auto F = example1_xslice("holder", 0.5, 0.0, 1.0, -0.012, 0.012);
        MatrixField S;
        S.dims = 2;
        S.lo = F.lo;
        S.hi = F.hi;
        S.eval = [F](const RVector& p) {
            auto spec = eigendecompose(F.eval(p));
            return canonical_symmetrizer(spec);
        };
        auto samples = sample_field(S, {257, 257});
        std::vector<double> radii;
        for (int k = 0; k < 6; ++k) radii.push_back(0.01 * std::pow(0.5, k));
        RVector center(2);
        center << 0, 0;
        auto fit = holder_fit(samples, center, radii);
        CHECK(fit.alpha > 0.4);
        CHECK(fit.alpha < 0.6);
    }
    SUBCASE("constant a = 0.5: discontinuity gap survives refinement") {
        auto F = example1_xslice("const", 0.5, 0.5, 1.0, -0.5, 0.5);
        MatrixField S;
        S.dims = 2;
        S.lo = F.lo;
        S.hi = F.hi;
        S.eval = [F](const RVector& p) {
            return canonical_symmetrizer(eigendecompose(F.eval(p)));
        };
        auto gap = path_limit_gap(S, 0.25, 6);
        CHECK(gap.survives);
        CHECK(gap.gap > 0.1);
    }
}

TEST_CASE("example 2 canonical field: Lipschitz but not C1") {
    auto fam = example2_family();
    // field over (x, xi) at eta = 1; the double manifold is the origin
    MatrixField S;
    S.dims = 2;
    S.lo = {-0.1, -0.1};
    S.hi = {0.1, 0.1};
    S.eval = [fam](const RVector& p) {
        RVector a(1), xt(3);
        a << p(0);
        xt << 0, p(1), 1.0;
        return canonical_symmetrizer(eigendecompose(eval_symbol(fam, a, xt)));
    };
    SUBCASE("alpha ~ 1 (Lipschitz scaling at the double point)") {
        auto samples = sample_field(S, {257, 257});
        std::vector<double> radii;
        for (int k = 0; k < 6; ++k) radii.push_back(0.09 * std::pow(0.5, k));
        RVector center(2);
        center << 0.0, 0.0;
        auto fit = holder_fit(samples, center, radii);
        CHECK(fit.alpha > 0.85);
        CHECK(fit.alpha < 1.05);
    }
    SUBCASE("directional derivative defect at the origin survives refinement") {
        auto m = directional_c1_defect(S, 0.2, 6);
        CHECK(m.defect > 0.1);
        CHECK(m.survives);
    }
    SUBCASE("one-sided mismatch calibration on |a|") {
        auto F = scalar_field_1d(-1, 1, [](double a) { return std::abs(a); });
        auto m = one_sided_mismatch(F, 0.5, 5);
        CHECK(m.mismatch == doctest::Approx(2.0));
        CHECK(m.survives);
    }
}

TEST_CASE("example 2 Taylor obstruction: exact linear algebra at the origin") {
    // The symmetry-block equation Omega S12 - 2 S12 Omega = x^2 J0 S11 forces
    // S12's first-order Taylor coefficients to vanish (the Sylvester maps are
    // invertible since Omega and 2 Omega share no eigenvalue), while the x^2
    // term demands a nonzero right-hand side: no C1 symmetrizer can exist.
    CMatrix Om1(2, 2), Om2(2, 2), J0(2, 2);
    Om1 << 0, 1, 1, 0;   // x-part of Omega at eta = 1
    Om2 << 1, 0, 0, -1;  // xi-part
    J0 << 1, 0, 0, 0;

    auto sylvester_min_sv = [](const CMatrix& M) {
        // Sigma -> M Sigma - 2 Sigma M as a 4x4 Kronecker map
        CMatrix K = CMatrix::Zero(4, 4);
        CMatrix I = CMatrix::Identity(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l)
                        K(2 * i + j, 2 * k + l) =
                            M(i, k) * I(j, l).real() - 2.0 * I(i, k).real() * M(l, j);
        return min_sv(K);
    };
    CHECK(sylvester_min_sv(Om1) > 0.5);  // invertible: Sigma_0, Sigma_1 forced to 0
    CHECK(sylvester_min_sv(Om2) > 0.5);  // invertible: Sigma_2 forced to 0

    // S11(0,0) of the canonical field is the 2x2 identity: J0 S11 != 0.
    auto fam = example2_family();
    RVector a(1), xt(3);
    a << 0.0;
    xt << 0, 0, 1.0;
    CMatrix S0 = canonical_symmetrizer(eigendecompose(eval_symbol(fam, a, xt)));
    CMatrix S11 = S0.topLeftCorner(2, 2);
    CHECK(op_norm(CMatrix(J0 * S11)) > 0.5);
    CHECK(min_eig_herm(S11) > 0.5);  // definite positive as the proof requires
}
