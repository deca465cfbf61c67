#include "symlab/builtins.hpp"

#include <cmath>
#include <random>

namespace symlab {

CMatrix example1_space_matrix(double a, double xi, double m) {
    CMatrix M = CMatrix::Zero(3, 3);
    M(0, 1) = xi + a * m;
    M(0, 2) = m;
    M(1, 0) = xi - a * m;
    M(2, 0) = m * (1.0 + a * a);
    return M;
}

SymbolFamily example1_family(const std::string& a_mode, double alpha) {
    SymbolFamily fam;
    fam.N = 3;
    fam.d = 2;

    auto a_of = [a_mode, alpha](const RVector& p) -> double {
        if (a_mode == "const") return p(0);
        double s = p(0);
        if (a_mode == "linear") return s;
        if (a_mode == "holder") return std::pow(std::abs(s), alpha);
        throw std::invalid_argument("example1_family: unknown a_mode " + a_mode);
    };
    auto s_of = [a_mode](const RVector& p) -> double {
        return a_mode == "const" ? p(1) : p(0);
    };

    if (a_mode == "const") {
        fam.name = "example1-const-a";
        fam.params.names = {"a", "s"};
        fam.params.lo = {-0.5, -1.0};
        fam.params.hi = {0.5, 1.0};
        fam.params.default_counts = {5, 9};
    } else if (a_mode == "linear") {
        fam.name = "example1-linear-a";
        fam.params.names = {"s"};
        fam.params.lo = {-1.0};
        fam.params.hi = {1.0};
        fam.params.default_counts = {17};
    } else {
        fam.name = "example1-holder-a";
        fam.params.names = {"s"};
        fam.params.lo = {-1.0};
        fam.params.hi = {1.0};
        fam.params.default_counts = {17};
    }

    fam.coeffs = [a_of, s_of](const RVector& p) -> std::vector<CMatrix> {
        double a = a_of(p), s = s_of(p);
        CMatrix A0 = CMatrix::Identity(3, 3);
        CMatrix A1 = CMatrix::Zero(3, 3);
        A1(0, 1) = 1.0;
        A1(1, 0) = 1.0;
        // the eta coefficient carries the spatial slot: entries s, s*a, s*(1+a^2)
        CMatrix A2 = example1_space_matrix(a, 0.0, s);
        return {A0, A1, A2};
    };
    return fam;
}

SymbolFamily example2_family() {
    SymbolFamily fam;
    fam.N = 4;
    fam.d = 2;
    fam.name = "example2";
    fam.params.names = {"s"};
    fam.params.lo = {-1.0};
    fam.params.hi = {1.0};
    fam.params.default_counts = {17};

    fam.coeffs = [](const RVector& p) -> std::vector<CMatrix> {
        double s = p(0);
        double a = s;  // a(x) = x
        CMatrix A0 = CMatrix::Identity(4, 4);
        // Omega = xi*sigma3 + s*eta*sigma1 per block; upper-right coupling a*J
        // with J = diag(s*eta, 0).
        CMatrix A1 = CMatrix::Zero(4, 4);
        A1(0, 0) = 1.0;
        A1(1, 1) = -1.0;
        A1(2, 2) = 2.0;
        A1(3, 3) = -2.0;
        CMatrix A2 = CMatrix::Zero(4, 4);
        A2(0, 1) = s;
        A2(1, 0) = s;
        A2(2, 3) = 2.0 * s;
        A2(3, 2) = 2.0 * s;
        A2(0, 2) = a * s;
        return {A0, A1, A2};
    };
    return fam;
}

SymbolFamily friedrichs_random_family(int N, int d, std::uint64_t seed) {
    SymbolFamily fam;
    fam.N = N;
    fam.d = d;
    fam.name = "friedrichs-random";

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<CMatrix> mats;
    mats.push_back(CMatrix::Identity(N, N));
    for (int j = 0; j < d; ++j) {
        CMatrix M(N, N);
        for (int r = 0; r < N; ++r)
            for (int c = 0; c < N; ++c) M(r, c) = Complex(u(rng), u(rng));
        mats.push_back(herm_part(M));
    }
    fam.coeffs = [mats](const RVector&) { return mats; };
    return fam;
}

SymbolFamily constant_family(std::vector<CMatrix> mats) {
    if (mats.empty()) throw std::invalid_argument("constant_family: no matrices");
    SymbolFamily fam;
    fam.N = static_cast<int>(mats[0].rows());
    fam.d = static_cast<int>(mats.size()) - 1;
    fam.name = "inline-const";
    fam.coeffs = [mats](const RVector&) { return mats; };
    return fam;
}

bool is_builtin_family(const std::string& name) {
    return name == "example1-const-a" || name == "example1-linear-a" ||
           name == "example1-holder-a" || name == "example2" || name == "friedrichs-random";
}

SymbolFamily builtin_family(const std::string& name) {
    if (name == "example1-const-a") return example1_family("const");
    if (name == "example1-linear-a") return example1_family("linear");
    if (name == "example1-holder-a") return example1_family("holder");
    if (name == "example2") return example2_family();
    if (name == "friedrichs-random") return friedrichs_random_family(3, 2, 1);
    throw std::invalid_argument("unknown builtin family: " + name);
}

}  // namespace symlab
