#include "setrep/weights.hpp"

#include "setrep/powersum.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace setrep {

namespace {

// Rank check via Gaussian elimination with partial pivoting.
bool linearly_independent(std::vector<std::vector<double>> m) {
    const int d = static_cast<int>(m.size());
    for (int col = 0; col < d; ++col) {
        int pivot = col;
        for (int r = col + 1; r < d; ++r) {
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        }
        if (std::abs(m[pivot][col]) < 1e-12) return false;
        std::swap(m[col], m[pivot]);
        for (int r = col + 1; r < d; ++r) {
            double f = m[r][col] / m[col][col];
            for (int c = col; c < d; ++c) m[r][c] -= f * m[col][c];
        }
    }
    return true;
}

bool subset_check(const AnchorBank& bank, const std::vector<int>& idx) {
    std::vector<std::vector<double>> sub;
    sub.reserve(idx.size());
    for (int i : idx) sub.push_back(bank.rows[i]);
    return linearly_independent(std::move(sub));
}

// Exhaustive over D-subsets when C(K1, D) is small, random spot checks
// otherwise.
bool bank_self_check(const AnchorBank& bank) {
    const long k1 = bank.k1;
    const int d = bank.d;
    if (k1 < d) return true;  // no D-subsets exist
    if (d == 1) {
        for (const auto& r : bank.rows) {
            if (std::abs(r[0]) < 1e-12) return false;
        }
        return true;
    }
    double combos = 1.0;
    for (int t = 0; t < d; ++t) combos *= static_cast<double>(k1 - t) / (t + 1);
    if (combos <= 5000.0) {
        std::vector<int> idx(d);
        for (int t = 0; t < d; ++t) idx[t] = t;
        while (true) {
            if (!subset_check(bank, idx)) return false;
            int t = d - 1;
            while (t >= 0 && idx[t] == k1 - d + t) --t;
            if (t < 0) break;
            ++idx[t];
            for (int u = t + 1; u < d; ++u) idx[u] = idx[u - 1] + 1;
        }
        return true;
    }
    std::mt19937_64 rng(0x5e7c0de);
    std::vector<int> all(k1);
    for (long i = 0; i < k1; ++i) all[i] = static_cast<int>(i);
    for (int trial = 0; trial < 1000; ++trial) {
        std::shuffle(all.begin(), all.end(), rng);
        std::vector<int> idx(all.begin(), all.begin() + d);
        if (!subset_check(bank, idx)) return false;
    }
    return true;
}

}  // namespace

std::string to_string(Arch a) { return a == Arch::LP ? "lp" : "le"; }
std::string to_string(BankMode m) {
    return m == BankMode::MomentCurve ? "moment-curve" : "seeded-random";
}

Arch arch_from_string(const std::string& s) {
    if (s == "lp") return Arch::LP;
    if (s == "le") return Arch::LE;
    throw ShapeError("unknown arch: " + s);
}

BankMode bank_mode_from_string(const std::string& s) {
    if (s == "moment-curve") return BankMode::MomentCurve;
    if (s == "seeded-random") return BankMode::SeededRandom;
    throw ShapeError("unknown bank mode: " + s);
}

DimensionReport dims(int n, int d, Arch arch) {
    if (n < 1 || d < 1) throw ShapeError("dims needs N >= 1 and D >= 1");
    DimensionReport r;
    r.n = n;
    r.d = d;
    r.arch = arch;
    r.k1 = k1_count(n, d);
    long n2 = static_cast<long>(n) * n;
    long n4 = n2 * n2;
    if (arch == Arch::LP) {
        r.k2 = k2_count(n);
        r.k = d + r.k1 + static_cast<long>(d) * r.k1 * r.k2;
        r.l = r.k * n;
        r.lower_bound = static_cast<long>(n) * (d + 1);
        r.upper_bound = n4 * n * d * d;
    } else {
        r.k2 = 0;
        r.k = 0;
        r.l = static_cast<long>(d) * r.k1 * n * (n + 3) / 2;
        r.lower_bound = static_cast<long>(n) * d;
        r.upper_bound = n4 * d * d;
    }
    return r;
}

AnchorBank build_anchor_bank(int n, int d, BankMode mode, std::uint64_t seed) {
    if (n < 1 || d < 1) throw ShapeError("build_anchor_bank needs N >= 1 and D >= 1");
    AnchorBank bank;
    bank.n = n;
    bank.d = d;
    bank.k1 = k1_count(n, d);
    bank.mode = mode;
    bank.seed = seed;

    if (mode == BankMode::MomentCurve) {
        // Rows (1, t, t^2, ..., t^{D-1}) with distinct t: any D of them form a
        // Vandermonde system, so independence is structural.
        bank.rows.resize(bank.k1);
        for (long j = 0; j < bank.k1; ++j) {
            double t = static_cast<double>(j + 1) / static_cast<double>(bank.k1);
            auto& row = bank.rows[j];
            row.resize(d);
            double pw = 1.0;
            for (int c = 0; c < d; ++c) {
                row[c] = pw;
                pw *= t;
            }
        }
        if (!bank_self_check(bank)) {
            throw ConvergenceError("moment-curve bank failed its independence self-check");
        }
        return bank;
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int attempt = 0; attempt < 3; ++attempt) {
        bank.rows.assign(bank.k1, std::vector<double>(d));
        for (auto& row : bank.rows) {
            for (double& v : row) v = gauss(rng);
        }
        if (bank_self_check(bank)) return bank;
    }
    throw ConvergenceError("seeded-random bank failed its independence self-check 3 times");
}

GammaSet build_gammas(long k2) {
    if (k2 < 1) throw ShapeError("build_gammas needs K2 >= 1");
    GammaSet g;
    g.k2 = k2;
    g.gammas.reserve(k2);
    long candidate = 2;
    while (static_cast<long>(g.gammas.size()) < k2) {
        bool prime = true;
        for (long f = 2; f * f <= candidate; ++f) {
            if (candidate % f == 0) {
                prime = false;
                break;
            }
        }
        if (prime) g.gammas.push_back(static_cast<double>(candidate));
        ++candidate;
    }
    return g;
}

LPWeightSet assemble_lp_weights(int n, int d, BankMode mode, std::uint64_t seed) {
    LPWeightSet w;
    w.n = n;
    w.d = d;
    w.bank = build_anchor_bank(n, d, mode, seed);
    w.gammas = build_gammas(k2_count(n));

    for (int i = 0; i < d; ++i) {
        std::vector<double> e(d, 0.0);
        e[i] = 1.0;
        w.rows.push_back(std::move(e));
        w.index_map.push_back({WeightRole::Buffer, i, -1, -1});
    }
    for (long j = 0; j < w.bank.k1; ++j) {
        w.rows.push_back(w.bank.rows[j]);
        w.index_map.push_back({WeightRole::Anchor, -1, static_cast<int>(j), -1});
    }
    for (int i = 0; i < d; ++i) {
        for (long j = 0; j < w.bank.k1; ++j) {
            for (long k = 0; k < w.gammas.k2; ++k) {
                std::vector<double> row(d, 0.0);
                row[i] = 1.0;
                for (int c = 0; c < d; ++c) row[c] -= w.gammas.gammas[k] * w.bank.rows[j][c];
                w.rows.push_back(std::move(row));
                w.index_map.push_back(
                    {WeightRole::Coupling, i, static_cast<int>(j), static_cast<int>(k)});
            }
        }
    }
    return w;
}

LEExponentSet assemble_le_exponents(int n, int d, BankMode mode, std::uint64_t seed) {
    LEExponentSet e;
    e.n = n;
    e.d = d;
    e.bank = build_anchor_bank(n, d, mode, seed);
    for (int i = 0; i < d; ++i) {
        for (long j = 0; j < e.bank.k1; ++j) {
            for (int p = 1; p <= n; ++p) {
                for (int q = 1; q <= p + 1; ++q) {
                    e.index_map.push_back({i, static_cast<int>(j), p, q});
                    std::vector<double> v(d, 0.0);
                    v[i] += static_cast<double>(q - 1);
                    for (int c = 0; c < d; ++c) {
                        v[c] += static_cast<double>(p - q + 1) * e.bank.rows[j][c];
                    }
                    e.effective_weights.push_back(std::move(v));
                }
            }
        }
    }
    return e;
}

std::vector<double> apply_functional(const SetMatrix& x, const std::vector<double>& w) {
    if (static_cast<int>(w.size()) != x.cols()) throw ShapeError("functional length != D");
    std::vector<double> out(x.rows());
    for (int i = 0; i < x.rows(); ++i) {
        KahanSum acc;
        for (int c = 0; c < x.cols(); ++c) acc.add(x(i, c) * w[c]);
        out[i] = acc.value();
    }
    return out;
}

int find_anchor_index(const SetMatrix& x, const AnchorBank& bank, const ToleranceConfig& tol) {
    if (x.cols() != bank.d) throw ShapeError("matrix width does not match bank");
    for (long j = 0; j < bank.k1; ++j) {
        std::vector<double> a = apply_functional(x, bank.rows[j]);
        double scale = 0.0;
        for (double v : a) scale = std::max(scale, std::abs(v));
        if (is_anchor(a, x, tol, 1e-9 * (1.0 + scale))) return static_cast<int>(j);
    }
    throw ConvergenceError(
        "no anchor candidate found; tolerance too tight or degenerate float collision");
}

}  // namespace setrep
