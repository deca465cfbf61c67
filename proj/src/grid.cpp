#include "symlab/grid.hpp"

#include <fftw3.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace symlab {

namespace {

// Plan cache: planning is not thread-safe, execution via fftw_execute_dft is.
// FFTW_UNALIGNED keeps plans valid for arbitrary buffers.
std::mutex plan_mutex;

fftw_plan get_plan(int dims, int n, int sign) {
    static std::map<std::tuple<int, int, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_tuple(dims, n, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::size_t total = dims == 1 ? n : static_cast<std::size_t>(n) * n;
    std::vector<Complex> scratch(total);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = dims == 1
                         ? fftw_plan_dft_1d(n, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED)
                         : fftw_plan_dft_2d(n, n, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw std::runtime_error("fftw planning failed");
    cache.emplace(key, plan);
    return plan;
}

void execute(fftw_plan plan, Complex* data) {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan, p, p);
}

// (-1)^(sum of bin indices), the phase from the [-L, L) domain offset.
inline double offset_sign(int dims, int n, std::size_t flat) {
    if (dims == 1) return (flat & 1) ? -1.0 : 1.0;
    std::size_t kx = flat / n, ky = flat % n;
    return ((kx + ky) & 1) ? -1.0 : 1.0;
}

}  // namespace

GridFunction::GridFunction(int dims_, int n_, double L_, int ncomp_)
    : dims(dims_), n(n_), L(L_), ncomp(ncomp_) {
    if (dims < 1 || dims > 2) throw std::invalid_argument("GridFunction: dims must be 1 or 2");
    if (n < 2 || (n & (n - 1)) != 0)
        throw std::invalid_argument("GridFunction: n must be a power of two");
    values.assign(static_cast<std::size_t>(ncomp) * npts(), Complex(0, 0));
}

double GridFunction::norm2() const {
    double s = 0.0;
    for (const Complex& v : values) s += std::norm(v);
    double meas = dims == 1 ? dx() : dx() * dx();
    return s * meas;
}
double GridFunction::norm() const { return std::sqrt(norm2()); }

GridFunction& GridFunction::operator+=(const GridFunction& o) {
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
    return *this;
}
GridFunction& GridFunction::operator-=(const GridFunction& o) {
    for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
    return *this;
}
GridFunction& GridFunction::operator*=(double s) {
    for (auto& v : values) v *= s;
    return *this;
}

std::vector<Complex> spectrum(const GridFunction& u, int comp) {
    std::vector<Complex> spec(u.comp(comp).begin(), u.comp(comp).end());
    execute(get_plan(u.dims, u.n, FFTW_FORWARD), spec.data());
    double meas = u.dims == 1 ? u.dx() : u.dx() * u.dx();
    for (std::size_t k = 0; k < spec.size(); ++k)
        spec[k] *= meas * offset_sign(u.dims, u.n, k);
    return spec;
}

void from_spectrum(GridFunction& u, int comp, const std::vector<Complex>& spec) {
    std::vector<Complex> work(spec);
    double meas = (u.dims == 1 ? u.deta() : u.deta() * u.deta()) /
                  std::pow(2.0 * M_PI, u.dims);
    for (std::size_t k = 0; k < work.size(); ++k)
        work[k] *= meas * offset_sign(u.dims, u.n, k);
    execute(get_plan(u.dims, u.n, FFTW_BACKWARD), work.data());
    std::copy(work.begin(), work.end(), u.comp(comp).begin());
}

RVector grid_point(const GridFunction& u, std::size_t flat) {
    RVector p(u.dims);
    if (u.dims == 1) {
        p(0) = u.x_of(static_cast<int>(flat));
    } else {
        p(0) = u.x_of(static_cast<int>(flat / u.n));
        p(1) = u.x_of(static_cast<int>(flat % u.n));
    }
    return p;
}

RVector grid_freq(const GridFunction& u, std::size_t flat) {
    RVector p(u.dims);
    if (u.dims == 1) {
        p(0) = u.freq_of(static_cast<int>(flat));
    } else {
        p(0) = u.freq_of(static_cast<int>(flat / u.n));
        p(1) = u.freq_of(static_cast<int>(flat % u.n));
    }
    return p;
}

void apply_multiplier(GridFunction& u, const std::function<Complex(const RVector&)>& m) {
    std::vector<Complex> mult(u.npts());
    for (std::size_t k = 0; k < u.npts(); ++k) mult[k] = m(grid_freq(u, k));
    for (int c = 0; c < u.ncomp; ++c) {
        auto spec = spectrum(u, c);
        for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= mult[k];
        from_spectrum(u, c, spec);
    }
}

GridFunction derivative(const GridFunction& u, int axis) {
    GridFunction out = u;
    apply_multiplier(out, [axis](const RVector& eta) { return Complex(0, eta(axis)); });
    return out;
}

GridFunction matrix_apply(const GridFunction& u,
                          const std::function<CMatrix(const RVector&)>& M) {
    GridFunction out = u;
    CVector vec(u.ncomp);
    for (std::size_t p = 0; p < u.npts(); ++p) {
        CMatrix mat = M(grid_point(u, p));
        for (int c = 0; c < u.ncomp; ++c) vec(c) = u.values[c * u.npts() + p];
        CVector res = mat * vec;
        for (int c = 0; c < u.ncomp; ++c) out.values[c * u.npts() + p] = res(c);
    }
    return out;
}

void write_gridfunctions(const std::string& path, const std::vector<GridFunction>& snaps,
                         const std::vector<double>& times) {
    if (snaps.empty()) throw std::invalid_argument("write_gridfunctions: empty");
    const GridFunction& u0 = snaps.front();
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open " + path);
    const char magic[4] = {'S', 'L', 'G', 'F'};
    std::uint32_t v = 1, dims = u0.dims, n = u0.n, ncomp = u0.ncomp;
    std::uint64_t count = snaps.size();
    double L = u0.L;
    std::fwrite(magic, 1, 4, f);
    std::fwrite(&v, 4, 1, f);
    std::fwrite(&dims, 4, 1, f);
    std::fwrite(&n, 4, 1, f);
    std::fwrite(&ncomp, 4, 1, f);
    std::fwrite(&L, 8, 1, f);
    std::fwrite(&count, 8, 1, f);
    for (const auto& s : snaps)
        std::fwrite(s.values.data(), sizeof(Complex), s.values.size(), f);
    std::fclose(f);

    nlohmann::json side;
    side["schema_version"] = 1;
    side["dims"] = u0.dims;
    side["n"] = u0.n;
    side["L"] = u0.L;
    side["ncomp"] = u0.ncomp;
    side["count"] = snaps.size();
    side["times"] = times;
    std::FILE* j = std::fopen((path + ".json").c_str(), "wb");
    if (!j) throw std::runtime_error("cannot open " + path + ".json");
    std::string text = side.dump(2);
    text.push_back('\n');
    std::fwrite(text.data(), 1, text.size(), j);
    std::fclose(j);
}

std::vector<GridFunction> read_gridfunctions(const std::string& path,
                                             std::vector<double>* times) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("cannot open " + path);
    char magic[4];
    std::uint32_t v, dims, n, ncomp;
    std::uint64_t count;
    double L;
    if (std::fread(magic, 1, 4, f) != 4 || std::memcmp(magic, "SLGF", 4) != 0) {
        std::fclose(f);
        throw std::runtime_error("bad grid-function file " + path);
    }
    std::fread(&v, 4, 1, f);
    std::fread(&dims, 4, 1, f);
    std::fread(&n, 4, 1, f);
    std::fread(&ncomp, 4, 1, f);
    std::fread(&L, 8, 1, f);
    std::fread(&count, 8, 1, f);
    std::vector<GridFunction> out;
    for (std::uint64_t i = 0; i < count; ++i) {
        GridFunction u(static_cast<int>(dims), static_cast<int>(n), L,
                       static_cast<int>(ncomp));
        if (std::fread(u.values.data(), sizeof(Complex), u.values.size(), f) !=
            u.values.size()) {
            std::fclose(f);
            throw std::runtime_error("truncated grid-function file " + path);
        }
        out.push_back(std::move(u));
    }
    std::fclose(f);
    if (times) {
        std::ifstream side(path + ".json");
        if (side) {
            nlohmann::json js;
            side >> js;
            *times = js.value("times", std::vector<double>{});
        }
    }
    return out;
}

}  // namespace symlab
