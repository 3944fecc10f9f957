#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "setrep/multiset.hpp"

namespace setrep {

enum class Arch { LP, LE };
enum class BankMode { MomentCurve, SeededRandom };

std::string to_string(Arch a);
std::string to_string(BankMode m);
Arch arch_from_string(const std::string& s);
BankMode bank_mode_from_string(const std::string& s);

inline long k1_count(int n, int d) { return static_cast<long>(n) * (n - 1) * (d - 1) / 2 + 1; }
inline long k2_count(int n) { return static_cast<long>(n) * (n - 1) + 1; }

// K1 candidate linear functionals; for every X at least one of X * row_j is
// an anchor of X. Every D-subset of rows is linearly independent.
struct AnchorBank {
    int n = 0;
    int d = 0;
    long k1 = 0;
    BankMode mode = BankMode::MomentCurve;
    std::uint64_t seed = 0;
    std::vector<std::vector<double>> rows;
};

// K2 distinct positive coupling coefficients; built from primes so that
// gamma_i / gamma_j != gamma_k / gamma_l for admissible 4-tuples.
struct GammaSet {
    long k2 = 0;
    std::vector<double> gammas;
};

struct WeightRole {
    enum Kind { Buffer, Anchor, Coupling } kind;
    int i = -1;  // channel, for Buffer and Coupling
    int j = -1;  // bank row, for Anchor and Coupling
    int k = -1;  // gamma index, for Coupling
};

// Full LP weight matrix: [e_1..e_D | bank rows | e_i - gamma_k * bank_j].
struct LPWeightSet {
    int n = 0;
    int d = 0;
    AnchorBank bank;
    GammaSet gammas;
    std::vector<std::vector<double>> rows;
    std::vector<WeightRole> index_map;

    long k() const { return static_cast<long>(rows.size()); }
    long l() const { return k() * n; }
    long coupling_flat(int i, int j, int k_idx) const {
        return d + bank.k1 + (static_cast<long>(i) * bank.k1 + j) * gammas.k2 + k_idx;
    }
};

struct LEIndex {
    int i = 0;  // channel
    int j = 0;  // bank row
    int p = 0;  // total monomial degree, 1..N
    int q = 0;  // 1..p+1; channel exponent q-1, anchor exponent p-q+1
};

// LE exponent assignment: entry (i,j,p,q) is sum_n exp(v . x^(n)) with
// v = (q-1) e_i + (p-q+1) bank_j.
struct LEExponentSet {
    int n = 0;
    int d = 0;
    AnchorBank bank;
    std::vector<LEIndex> index_map;
    std::vector<std::vector<double>> effective_weights;  // the v vectors, D-dim

    long l() const { return static_cast<long>(index_map.size()); }
    long flat(int i, int j, int p, int q) const {
        long per_pair = static_cast<long>(n) * (n + 3) / 2;
        long grid = static_cast<long>(p - 1) * p / 2 + (p - 1) + (q - 1);
        return (static_cast<long>(i) * bank.k1 + j) * per_pair + grid;
    }
};

struct DimensionReport {
    int n = 0;
    int d = 0;
    Arch arch = Arch::LP;
    long k1 = 0;
    long k2 = 0;  // LP only
    long k = 0;   // LP only
    long l = 0;
    long lower_bound = 0;
    long upper_bound = 0;
};

DimensionReport dims(int n, int d, Arch arch);

AnchorBank build_anchor_bank(int n, int d, BankMode mode, std::uint64_t seed = 0);
GammaSet build_gammas(long k2);
LPWeightSet assemble_lp_weights(int n, int d, BankMode mode = BankMode::MomentCurve,
                                std::uint64_t seed = 0);
LEExponentSet assemble_le_exponents(int n, int d, BankMode mode = BankMode::MomentCurve,
                                    std::uint64_t seed = 0);

std::vector<double> apply_functional(const SetMatrix& x, const std::vector<double>& w);

// Smallest j (0-based) with X * bank_j an anchor of X.
int find_anchor_index(const SetMatrix& x, const AnchorBank& bank,
                      const ToleranceConfig& tol = {});

}  // namespace setrep
