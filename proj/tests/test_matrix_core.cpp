#include <doctest.h>

#include <random>

#include "symlab/matrix_core.hpp"

using namespace symlab;

namespace {

CMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
    CMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

// Random diagonalizable matrix with prescribed real spectrum and a
// well-conditioned eigenbasis (resampled until cond(V) is moderate).
CMatrix random_semisimple(std::mt19937_64& rng, int n, RVector* spectrum = nullptr,
                          double max_cond = 30.0) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        CMatrix V(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) V(i, j) = Complex(u(rng), u(rng));
        Eigen::JacobiSVD<CMatrix> svd(V);
        double cond = svd.singularValues()(0) / svd.singularValues()(n - 1);
        if (cond > max_cond) continue;
        RVector d(n);
        for (int i = 0; i < n; ++i) d(i) = 3.0 * u(rng);
        // keep eigenvalues separated so clusters stay simple
        std::sort(d.data(), d.data() + n);
        bool ok = true;
        for (int i = 0; i + 1 < n; ++i)
            if (d(i + 1) - d(i) < 0.05) ok = false;
        if (!ok) continue;
        if (spectrum) *spectrum = d;
        CMatrix D = d.cast<Complex>().asDiagonal();
        return V * D * V.inverse();
    }
}

CMatrix random_hermitian(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CMatrix M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = Complex(u(rng), u(rng));
    return herm_part(M);
}

}  // namespace

TEST_CASE("eigendecompose: identity is one semisimple cluster") {
    auto spec = eigendecompose(CMatrix::Identity(2, 2), 0.0);
    REQUIRE(spec.clusters.size() == 1);
    CHECK(spec.clusters[0].multiplicity == 2);
    CHECK(std::abs(spec.clusters[0].eigenvalue - Complex(1, 0)) < 1e-14);
    CHECK(spec.clusters[0].semisimple);
    CHECK(op_norm(CMatrix(spec.clusters[0].projector - CMatrix::Identity(2, 2))) < 1e-14);
}

TEST_CASE("eigendecompose: Jordan block is defective") {
    auto spec = eigendecompose(mat2(0, 1, 0, 0), 0.0);
    REQUIRE(spec.clusters.size() == 1);
    CHECK(spec.clusters[0].multiplicity == 2);
    CHECK_FALSE(spec.clusters[0].semisimple);
}

TEST_CASE("eigendecompose: diagonal case") {
    auto spec = eigendecompose(mat2(1, 0, 0, 2), 0.0);
    REQUIRE(spec.clusters.size() == 2);
    CHECK(op_norm(CMatrix(spec.clusters[0].projector - mat2(1, 0, 0, 0))) < 1e-12);
    CHECK(op_norm(CMatrix(spec.clusters[1].projector - mat2(0, 0, 0, 1))) < 1e-12);
}

TEST_CASE("eigendecompose: explicit diagonalization oracle") {
    // A = P diag(0,1) P^-1 with P = [[1,1],[0,1]] has Pi_0 = [[1,-1],[0,0]].
    CMatrix P = mat2(1, 1, 0, 1);
    CMatrix A = P * mat2(0, 0, 0, 1) * P.inverse();
    auto spec = eigendecompose(A, 0.0);
    REQUIRE(spec.clusters.size() == 2);
    CHECK(op_norm(CMatrix(spec.clusters[0].projector - mat2(1, -1, 0, 0))) < 1e-12);
    CHECK(op_norm(CMatrix(spec.clusters[1].projector - mat2(0, 1, 0, 1))) < 1e-12);
}

TEST_CASE("spectral data invariants on random semisimple matrices") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + static_cast<int>(rng() % 5);
        CMatrix A = random_semisimple(rng, n);
        auto spec = eigendecompose(A, 0.0);
        int mult = 0;
        for (const auto& c : spec.clusters) mult += c.multiplicity;
        CHECK(mult == n);
        CHECK(spec.projector_sum_defect <= 10 * spec.cluster_tol);
        CHECK(spec.orthogonality_defect <= 10 * spec.cluster_tol);
        CHECK(spec.all_semisimple());
    }
}

TEST_CASE("spectral_projector: contour quadrature") {
    SUBCASE("diagonal") {
        double defect = 1.0;
        CMatrix P = spectral_projector(mat2(0, 0, 0, 1), {Complex(0, 0)}, 1.0, 64, &defect);
        CHECK(op_norm(CMatrix(P - mat2(1, 0, 0, 0))) < 1e-10);
        CHECK(defect < 1e-10);
    }
    SUBCASE("hermitian gives hermitian projector") {
        std::mt19937_64 rng(3);
        CMatrix A = random_hermitian(rng, 4);
        auto spec = eigendecompose(A, 0.0);
        const auto& c0 = spec.clusters[0];
        double gap = 1e9;
        for (size_t k = 1; k < spec.clusters.size(); ++k)
            gap = std::min(gap, std::abs(spec.clusters[k].eigenvalue - c0.eigenvalue));
        CMatrix P = spectral_projector(A, {c0.eigenvalue}, 0.9 * gap);
        CHECK(herm_defect(P) < 1e-9);
    }
    SUBCASE("matches eigendecompose on random diagonalizable 4x4") {
        std::mt19937_64 rng(17);
        CMatrix A = random_semisimple(rng, 4);
        auto spec = eigendecompose(A, 0.0);
        for (const auto& c : spec.clusters) {
            double gap = 1e9;
            for (const auto& o : spec.clusters)
                if (&o != &c) gap = std::min(gap, std::abs(o.eigenvalue - c.eigenvalue));
            CMatrix P = spectral_projector(A, {c.eigenvalue}, 0.9 * gap);
            CHECK(op_norm(CMatrix(P - c.projector)) < 1e-10);
        }
    }
    SUBCASE("gap violation is detected") {
        CHECK_THROWS_WITH_AS(spectral_projector(mat2(0, 0, 0, 1), {Complex(0, 0)}, 2.5),
                             "spectral_projector: gap violated", std::runtime_error);
    }
}

TEST_CASE("resolvent_probe") {
    SUBCASE("normal matrix attains C3 = 1") {
        auto r = resolvent_probe(mat2(0, 0, 0, 1), {0.0, 0.5, 1.0}, {1e-3, -1e-3, 0.1, 1.0});
        CHECK(r.C3 == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("defective matrix diverges under refinement") {
        CMatrix J = mat2(0, 1, 0, 0);
        double prev = 0.0;
        for (double im : {1e-1, 1e-2, 1e-3, 1e-4}) {
            auto r = resolvent_probe(J, {0.0}, {im});
            CHECK(r.C3 > prev);
            prev = r.C3;
        }
        CHECK(prev > 1e3);  // ~ 1/|Im z|
    }
    SUBCASE("rejects zero on the imaginary grid") {
        CHECK_THROWS_AS(resolvent_probe(mat2(0, 0, 0, 1), {0.0}, {0.0}), std::invalid_argument);
    }
}

TEST_CASE("exponential_probe") {
    SUBCASE("hermitian: C1 = 1") {
        std::mt19937_64 rng(5);
        CMatrix A = random_hermitian(rng, 5);
        auto e = exponential_probe(A, default_t_grid());
        CHECK(e.C1 == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("nilpotent: sup over [-T,T] is sqrt(1+T^2)-order") {
        CMatrix J = mat2(0, 1, 0, 0);
        auto e = exponential_probe(J, {32.0});
        // exp(itJ) = [[1, it],[0,1]], norm ~ T for large T
        CHECK(e.C1 > 32.0);
        CHECK(e.C1 < 34.0);
    }
    SUBCASE("semi-simple: C1 <= N * max ||Pi||") {
        std::mt19937_64 rng(7);
        CMatrix A = random_semisimple(rng, 4);
        auto spec = eigendecompose(A, 0.0);
        auto e = exponential_probe(A, default_t_grid());
        CHECK(e.C1 <= 4 * spec.max_projector_norm() + 1e-9);
    }
}

TEST_CASE("canonical_symmetrizer") {
    SUBCASE("hermitian gives the identity") {
        std::mt19937_64 rng(23);
        CMatrix A = random_hermitian(rng, 4);
        CMatrix S = canonical_symmetrizer(eigendecompose(A, 0.0));
        CHECK(op_norm(CMatrix(S - CMatrix::Identity(4, 4))) < 1e-12);
    }
    SUBCASE("explicit 2x2 oracle") {
        CMatrix P = mat2(1, 1, 0, 1);
        CMatrix A = P * mat2(0, 0, 0, 1) * P.inverse();
        CMatrix S = canonical_symmetrizer(eigendecompose(A, 0.0));
        CMatrix Pi0 = mat2(1, -1, 0, 0), Pi1 = mat2(0, 1, 0, 1);
        CMatrix expected = Pi0.adjoint() * Pi0 + Pi1.adjoint() * Pi1;
        CHECK(op_norm(CMatrix(S - expected)) < 1e-12);
        CHECK(herm_defect(CMatrix(S * A)) < 1e-12);
    }
    SUBCASE("defective input is rejected") {
        auto spec = eigendecompose(mat2(0, 1, 0, 0), 0.0);
        CHECK_THROWS_WITH_AS(canonical_symmetrizer(spec), "canonical_symmetrizer: not semi-simple",
                             std::runtime_error);
    }
    SUBCASE("bounds on random semisimple matrices") {
        std::mt19937_64 rng(31);
        for (int trial = 0; trial < 100; ++trial) {
            int n = 2 + static_cast<int>(rng() % 5);
            CMatrix A = random_semisimple(rng, n);
            auto spec = eigendecompose(A, 0.0);
            CMatrix S = canonical_symmetrizer(spec);
            double C2 = spec.max_projector_norm();
            CHECK(herm_defect(S) < 1e-12);
            CHECK(min_eig_herm(S) >= 1.0 / n - 1e-8);
            CHECK(op_norm(S) <= n * C2 * C2 + 1e-8);
            CHECK(herm_defect(CMatrix(S * A)) <= 1e-8 * op_norm(S) * op_norm(A));
        }
    }
}

TEST_CASE("functional_calculus") {
    std::mt19937_64 rng(41);
    CMatrix A = random_semisimple(rng, 4);
    auto spec = eigendecompose(A, 0.0);
    SUBCASE("f == 1 gives identity") {
        CMatrix M = functional_calculus(spec, [](Complex) { return Complex(1.0); });
        CHECK(op_norm(CMatrix(M - CMatrix::Identity(4, 4))) < 1e-10);
    }
    SUBCASE("f(z) = z reproduces A") {
        CMatrix M = functional_calculus(spec, [](Complex z) { return z; });
        CHECK(op_norm(CMatrix(M - A)) < 1e-10);
    }
    SUBCASE("f(z) = z^2 equals A*A") {
        CMatrix M = functional_calculus(spec, [](Complex z) { return z * z; });
        CHECK(op_norm(CMatrix(M - A * A)) < 1e-10);
    }
    SUBCASE("multiplicativity for scalar f, g") {
        auto F = functional_calculus(spec, [](Complex z) { return std::sin(z.real()); });
        auto G = functional_calculus(spec, [](Complex z) { return std::exp(0.3 * z.real()); });
        auto FG = functional_calculus(
            spec, [](Complex z) { return std::sin(z.real()) * std::exp(0.3 * z.real()); });
        CHECK(op_norm(CMatrix(F * G - FG)) < 1e-9);
    }
}

TEST_CASE("sum_bound_check") {
    SUBCASE("m = 1 is void") {
        auto r = sum_bound_check({CMatrix::Identity(2, 2)}, {CMatrix::Zero(2, 2)}, {0.0}, 1.0,
                                 1.0, 1.0);
        CHECK(r.hypotheses_ok);
        CHECK(r.bound_holds);
        CHECK(r.lhs == 0.0);
    }
    SUBCASE("two-term cancellation sits exactly at the bound") {
        double mu1 = 0.0, mu2 = 2.0, eps = 0.5;
        CMatrix p = (eps / std::abs(mu1 - mu2)) * CMatrix::Identity(2, 2);
        CMatrix S1 = CMatrix::Zero(2, 2);
        CMatrix S2 = std::abs(mu1 - mu2) * CMatrix::Identity(2, 2);
        auto r = sum_bound_check({S1, S2}, {p, CMatrix(-p)}, {mu1, mu2}, eps, 1.0, 1.0);
        CHECK(r.hypotheses_ok);
        CHECK(r.bound_holds);
        CHECK(r.ratio == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("hypothesis violations are reported") {
        CMatrix big = 10.0 * CMatrix::Identity(2, 2);
        auto r = sum_bound_check({CMatrix::Zero(2, 2), big},
                                 {CMatrix::Identity(2, 2), CMatrix(-CMatrix::Identity(2, 2))},
                                 {0.0, 1.0}, 1.0, 1.0, 1.0);
        CHECK_FALSE(r.hypotheses_ok);
        CHECK(r.violation.find("variation") != std::string::npos);
    }
}

TEST_CASE("invertibility_margin") {
    SUBCASE("identity") {
        auto m = invertibility_margin(CMatrix::Identity(3, 3));
        CHECK(m.kappa == doctest::Approx(1.0));
        CHECK(m.radius == doctest::Approx(1.0));
    }
    SUBCASE("diag(1, 1e-3)") {
        auto m = invertibility_margin(mat2(1, 0, 0, 1e-3));
        CHECK(m.radius == doctest::Approx(1e-3));
        CHECK(m.radius == doctest::Approx(1.0 / m.kappa));
    }
    SUBCASE("worst-case rank-one B makes A - B singular") {
        std::mt19937_64 rng(55);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int trial = 0; trial < 50; ++trial) {
            int n = 2 + static_cast<int>(rng() % 4);
            CMatrix A(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) A(i, j) = Complex(u(rng), u(rng));
            auto m = invertibility_margin(A);
            CHECK(op_norm(m.worst_B) == doctest::Approx(m.radius).epsilon(1e-9));
            CHECK(m.det_residual < 1e-8 * std::pow(op_norm(A), n));
        }
    }
}

TEST_CASE("strong_hyperbolicity_certificate") {
    SUBCASE("hermitian passes with S = Id") {
        std::mt19937_64 rng(61);
        CMatrix A = random_hermitian(rng, 4);
        auto cert = strong_hyperbolicity_certificate(A);
        CHECK(cert.pass);
        CHECK(cert.C1 == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(op_norm(CMatrix(cert.S - CMatrix::Identity(4, 4))) < 1e-10);
    }
    SUBCASE("Jordan block fails as defective") {
        auto cert = strong_hyperbolicity_certificate(mat2(0, 1, 0, 0));
        CHECK_FALSE(cert.pass);
        CHECK(cert.reason == "defective");
    }
    SUBCASE("[[0,1],[eps,0]] passes with C2 ~ eps^{-1/2}") {
        double prev_C2 = 0.0;
        for (double e : {1e-2, 1e-4, 1e-6}) {
            auto cert = strong_hyperbolicity_certificate(mat2(0, 1, e, 0));
            CHECK(cert.pass);
            // explicit eigenvectors give ||Pi|| ~ (1/2) e^{-1/2}
            CHECK(cert.C2 == doctest::Approx(0.5 / std::sqrt(e)).epsilon(0.05));
            CHECK(cert.C2 > prev_C2);
            prev_C2 = cert.C2;
        }
    }
    SUBCASE("random semisimple real-spectrum matrices pass") {
        std::mt19937_64 rng(71);
        for (int trial = 0; trial < 50; ++trial) {
            int n = 2 + static_cast<int>(rng() % 5);
            auto cert = strong_hyperbolicity_certificate(random_semisimple(rng, n));
            CHECK(cert.pass);
        }
    }
    SUBCASE("rotation generator fails with complex spectrum") {
        auto cert = strong_hyperbolicity_certificate(mat2(0, 1, -1, 0));
        CHECK_FALSE(cert.pass);
        CHECK(cert.reason == "complex spectrum");
    }
}

TEST_CASE("perturbation strips: eigenvalues of rho*A + B stay within C3*|B|") {
    // iii) <=> v) of the equivalence list, probed by randomized B sampling.
    std::mt19937_64 rng(81);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 2 + static_cast<int>(rng() % 4);
        CMatrix A = random_semisimple(rng, n);
        auto cert = strong_hyperbolicity_certificate(A);
        REQUIRE(cert.pass);
        double C3 = cert.C4 / cert.c4;  // certified resolvent constant
        for (int b = 0; b < 20; ++b) {
            CMatrix B(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) B(i, j) = Complex(u(rng), u(rng));
            double rho = 5.0 * u(rng);
            CVector ev = Eigen::ComplexEigenSolver<CMatrix>(CMatrix(rho * A + B), false)
                             .eigenvalues();
            for (int i = 0; i < n; ++i)
                CHECK(std::abs(ev(i).imag()) <= C3 * op_norm(B) * (1.0 + 1e-9));
        }
    }
}
