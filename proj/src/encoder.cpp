#include "setrep/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace setrep {

namespace {

void warn_range(const SetMatrix& x, double safe, const char* arch) {
    double m = 0.0;
    for (double v : x.data()) m = std::max(m, std::abs(v));
    if (m > safe) {
        std::cerr << "setrep: warning: " << arch << " input magnitude " << m
                  << " exceeds the documented safe range " << safe
                  << "; expect conditioning loss\n";
    }
}

void check_finite(const std::vector<double>& values) {
    for (double v : values) {
        if (!std::isfinite(v)) throw RangeError("embedding overflowed to a non-finite value");
    }
}

Embedding subtract_element(const Embedding& z, const Embedding& phi) {
    Embedding out = z;
    for (size_t t = 0; t < out.values.size(); ++t) out.values[t] -= phi.values[t];
    return out;
}

std::vector<double> matrix_row(const SetMatrix& x, int i) {
    return {x.row(i).begin(), x.row(i).end()};
}

SetMatrix single_row(const SetMatrix& x, int i) {
    return SetMatrix(1, x.cols(), matrix_row(x, i));
}

}  // namespace

Embedding encode_lp(const SetMatrix& x, const LPWeightSet& w) {
    if (x.cols() != w.d) throw ShapeError("matrix width does not match weight set");
    if (x.rows() > w.n) throw ShapeError("matrix has more rows than the weight set supports");
    warn_range(x, kLpSafeRange, "LP");

    // Canonical row order makes the pooled sums bit-stable under permutation.
    SetMatrix xs = canonicalize(x);

    Embedding emb;
    emb.arch = Arch::LP;
    emb.n = w.n;
    emb.d = w.d;
    emb.header = {Arch::LP, w.n, w.d, w.bank.mode, w.bank.seed};
    emb.values.reserve(w.k() * w.n);
    for (const auto& row : w.rows) {
        std::vector<double> col = apply_functional(xs, row);
        PowerSums p = sum_of_power(std::span<const double>{col}, w.n);
        for (const Complex& v : p.values) emb.values.push_back(v.real());
    }
    check_finite(emb.values);
    return emb;
}

Embedding encode_le(const SetMatrix& x, const LEExponentSet& e) {
    if (x.cols() != e.d) throw ShapeError("matrix width does not match exponent set");
    if (x.rows() > e.n) throw ShapeError("matrix has more rows than the exponent set supports");
    warn_range(x, kLeSafeRange, "LE");

    SetMatrix xs = canonicalize(x);

    Embedding emb;
    emb.arch = Arch::LE;
    emb.n = e.n;
    emb.d = e.d;
    emb.header = {Arch::LE, e.n, e.d, e.bank.mode, e.bank.seed};
    emb.values.reserve(e.l());
    for (const auto& v : e.effective_weights) {
        KahanSum acc;
        for (int r = 0; r < xs.rows(); ++r) {
            double dot = 0.0;
            for (int c = 0; c < xs.cols(); ++c) dot += v[c] * xs(r, c);
            if (std::abs(dot) > kLeExponentGuard) {
                throw RangeError("LE exponent guard triggered: |v . x| > 60");
            }
            acc.add(std::exp(dot));
        }
        emb.values.push_back(acc.value());
    }
    check_finite(emb.values);
    return emb;
}

Embedding encode_complex(const ComplexSetMatrix& xc, Arch arch, BankMode mode,
                         std::uint64_t seed) {
    if (xc.n < 1 || xc.d < 1) throw ShapeError("complex matrix needs N >= 1 and D >= 1");
    SetMatrix split(xc.n, 2 * xc.d);
    for (int i = 0; i < xc.n; ++i) {
        for (int j = 0; j < xc.d; ++j) {
            split(i, j) = xc(i, j).real();
            split(i, xc.d + j) = xc(i, j).imag();
        }
    }
    if (arch == Arch::LP) {
        return encode_lp(split, assemble_lp_weights(xc.n, 2 * xc.d, mode, seed));
    }
    return encode_le(split, assemble_le_exponents(xc.n, 2 * xc.d, mode, seed));
}

std::vector<EquivariantPair> equivariant_context(const SetMatrix& x, const LPWeightSet& w) {
    if (x.rows() < 2) throw ShapeError("equivariant_context needs N >= 2");
    Embedding z = encode_lp(x, w);
    std::vector<EquivariantPair> out;
    out.reserve(x.rows());
    for (int i = 0; i < x.rows(); ++i) {
        out.push_back({matrix_row(x, i), subtract_element(z, encode_lp(single_row(x, i), w))});
    }
    return out;
}

std::vector<EquivariantPair> equivariant_context(const SetMatrix& x, const LEExponentSet& e) {
    if (x.rows() < 2) throw ShapeError("equivariant_context needs N >= 2");
    Embedding z = encode_le(x, e);
    std::vector<EquivariantPair> out;
    out.reserve(x.rows());
    for (int i = 0; i < x.rows(); ++i) {
        out.push_back({matrix_row(x, i), subtract_element(z, encode_le(single_row(x, i), e))});
    }
    return out;
}

}  // namespace setrep
