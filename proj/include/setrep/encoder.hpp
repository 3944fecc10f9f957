#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "setrep/powersum.hpp"
#include "setrep/weights.hpp"

namespace setrep {

// Everything needed to regenerate a weight set deterministically; weights
// themselves never travel.
struct WeightHeader {
    Arch arch = Arch::LP;
    int n = 0;
    int d = 0;
    BankMode bank_mode = BankMode::MomentCurve;
    std::uint64_t seed = 0;
};

// The pooled vector sum_i phi(x^(i)).
struct Embedding {
    Arch arch = Arch::LP;
    int n = 0;
    int d = 0;
    std::vector<double> values;
    WeightHeader header;
};

struct ComplexSetMatrix {
    int n = 0;
    int d = 0;
    std::vector<Complex> entries;  // row-major

    Complex operator()(int i, int j) const { return entries[static_cast<size_t>(i) * d + j]; }
};

// Documented safe input ranges; encoders warn (stderr) outside them and fail
// only on non-finite output.
inline constexpr double kLpSafeRange = 3.0;
inline constexpr double kLeSafeRange = 2.0;
inline constexpr double kLeExponentGuard = 60.0;

// LP: for each weight row w, the degree-N power sums of X w, blocks laid out
// in index_map order. X may have fewer than W.n rows (leave-one-out decode
// re-encodes an (N-1)-element set with the same weights).
Embedding encode_lp(const SetMatrix& x, const LPWeightSet& w);

// LE: entry (i,j,p,q) is sum_n exp(v_{i,j,p,q} . x^(n)).
Embedding encode_le(const SetMatrix& x, const LEExponentSet& e);

// Complex inputs split into [Re | Im] channels and encoded as a real (N, 2D)
// problem.
Embedding encode_complex(const ComplexSetMatrix& xc, Arch arch,
                         BankMode mode = BankMode::MomentCurve, std::uint64_t seed = 0);

struct EquivariantPair {
    std::vector<double> element;  // x^(j)
    Embedding context;            // z - phi(x^(j)): pooled embedding of the other N-1 rows
};

std::vector<EquivariantPair> equivariant_context(const SetMatrix& x, const LPWeightSet& w);
std::vector<EquivariantPair> equivariant_context(const SetMatrix& x, const LEExponentSet& e);

}  // namespace setrep
