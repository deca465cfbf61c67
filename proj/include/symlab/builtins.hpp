// Built-in symbol families: the two explicit example systems (3x3 in d=2 and
// the 4x4 block system) and seeded Friedrichs-symmetric randoms. The spatial
// coordinate enters through a dedicated parameter slot "s": the coefficient of
// the second space frequency carries the factor s, so one family probes
// (x, xi, eta) jointly.
#pragma once

#include <cstdint>

#include "symlab/symbol.hpp"

namespace symlab {

// 3x3 system, d = 2. a_mode selects the a-slot: "const" (extra parameter a),
// "linear" (a = s) or "holder" (a = |s|^alpha).
SymbolFamily example1_family(const std::string& a_mode, double alpha = 0.5);

// The strictly hyperbolic core matrix of the 3x3 example at eta-slot m:
// [[0, xi + a*m, m], [xi - a*m, 0, 0], [m*(1+a^2), 0, 0]].
CMatrix example1_space_matrix(double a, double xi, double m);

// 4x4 block system (Omega / 2 Omega with the a*J coupling), a(x) = x.
SymbolFamily example2_family();

// A0 = Id, A_1..A_d random hermitian, reproducible from the seed.
SymbolFamily friedrichs_random_family(int N, int d, std::uint64_t seed);

// Constant-coefficient family from explicit matrices A_0..A_d (empty
// parameter box).
SymbolFamily constant_family(std::vector<CMatrix> mats);

// Registry lookup: "example1-const-a", "example1-linear-a",
// "example1-holder-a", "example2", "friedrichs-random".
SymbolFamily builtin_family(const std::string& name);
bool is_builtin_family(const std::string& name);

}  // namespace symlab
