#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "setrep/weights.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <utility>
#include <vector>

using namespace setrep;

namespace {

// Independent 2x2 / general determinant oracle by cofactor expansion.
double det(const std::vector<std::vector<double>>& m) {
    int d = static_cast<int>(m.size());
    if (d == 1) return m[0][0];
    double acc = 0.0;
    double sign = 1.0;
    for (int c = 0; c < d; ++c) {
        std::vector<std::vector<double>> minor;
        for (int r = 1; r < d; ++r) {
            std::vector<double> row;
            for (int cc = 0; cc < d; ++cc) {
                if (cc != c) row.push_back(m[r][cc]);
            }
            minor.push_back(row);
        }
        acc += sign * m[0][c] * det(minor);
        sign = -sign;
    }
    return acc;
}

bool is_prime(long v) {
    if (v < 2) return false;
    for (long f = 2; f * f <= v; ++f) {
        if (v % f == 0) return false;
    }
    return true;
}

void for_each_subset(long k1, int d, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> idx(d);
    for (int t = 0; t < d; ++t) idx[t] = t;
    if (k1 < d) return;
    while (true) {
        fn(idx);
        int t = d - 1;
        while (t >= 0 && idx[t] == k1 - d + t) --t;
        if (t < 0) break;
        ++idx[t];
        for (int u = t + 1; u < d; ++u) idx[u] = idx[u - 1] + 1;
    }
}

}  // namespace

TEST_CASE("dims fixed examples") {
    DimensionReport a = dims(4, 3, Arch::LP);
    CHECK(a.k1 == 13);
    CHECK(a.k2 == 13);
    CHECK(a.k == 523);
    CHECK(a.l == 2092);

    DimensionReport b = dims(2, 2, Arch::LP);
    CHECK(b.k1 == 2);
    CHECK(b.k2 == 3);
    CHECK(b.k == 16);
    CHECK(b.l == 32);
    CHECK(b.lower_bound == 6);
    CHECK(b.upper_bound == 128);

    DimensionReport c = dims(2, 2, Arch::LE);
    CHECK(c.l == 20);
    CHECK(c.lower_bound == 4);
    CHECK(c.upper_bound == 64);
}

TEST_CASE("dims formulas hold across the desk-scale range") {
    for (int n = 1; n <= 8; ++n) {
        for (int d = 1; d <= 6; ++d) {
            long k1 = static_cast<long>(n) * (n - 1) * (d - 1) / 2 + 1;
            long k2 = static_cast<long>(n) * (n - 1) + 1;
            DimensionReport lp = dims(n, d, Arch::LP);
            CHECK(lp.k1 == k1);
            CHECK(lp.k2 == k2);
            CHECK(lp.k == d + k1 + d * k1 * k2);
            CHECK(lp.l == n * lp.k);
            DimensionReport le = dims(n, d, Arch::LE);
            CHECK(le.k1 == k1);
            CHECK(le.l == d * k1 * static_cast<long>(n) * (n + 3) / 2);
        }
    }
}

TEST_CASE("dims bounds hold for N >= 2") {
    // The N = 1 corner cases where the constructed widths leave the stated
    // intervals are exercised (and reported) by the acceptance suite.
    for (int n = 2; n <= 8; ++n) {
        for (int d = 1; d <= 6; ++d) {
            DimensionReport lp = dims(n, d, Arch::LP);
            CHECK(lp.lower_bound <= lp.l);
            CHECK(lp.l <= lp.upper_bound);
            CHECK(lp.lower_bound == static_cast<long>(n) * (d + 1));
            long n5 = 1;
            for (int t = 0; t < 5; ++t) n5 *= n;
            CHECK(lp.upper_bound == n5 * d * d);
            DimensionReport le = dims(n, d, Arch::LE);
            CHECK(le.lower_bound <= le.l);
            CHECK(le.l <= le.upper_bound);
            CHECK(le.lower_bound == static_cast<long>(n) * d);
            CHECK(le.upper_bound == (n5 / n) * d * d);
        }
    }
}

TEST_CASE("moment-curve bank fixed examples") {
    AnchorBank b22 = build_anchor_bank(2, 2, BankMode::MomentCurve);
    REQUIRE(b22.k1 == 2);
    CHECK(b22.rows[0] == std::vector<double>{1.0, 0.5});
    CHECK(b22.rows[1] == std::vector<double>{1.0, 1.0});
    CHECK(det(b22.rows) == doctest::Approx(0.5));

    AnchorBank d1 = build_anchor_bank(3, 1, BankMode::MomentCurve);
    REQUIRE(d1.k1 == 1);
    CHECK(d1.rows[0] == std::vector<double>{1.0});

    AnchorBank b32 = build_anchor_bank(3, 2, BankMode::MomentCurve);
    REQUIRE(b32.k1 == 4);
    for_each_subset(b32.k1, 2, [&](const std::vector<int>& idx) {
        CHECK(std::abs(det({b32.rows[idx[0]], b32.rows[idx[1]]})) > 1e-12);
    });
}

TEST_CASE("every D-subset of a moment-curve bank is independent (K1 <= 15)") {
    for (int n = 1; n <= 5; ++n) {
        for (int d = 1; d <= 4; ++d) {
            AnchorBank bank = build_anchor_bank(n, d, BankMode::MomentCurve);
            if (bank.k1 > 15) continue;
            for_each_subset(bank.k1, d, [&](const std::vector<int>& idx) {
                std::vector<std::vector<double>> sub;
                for (int i : idx) sub.push_back(bank.rows[i]);
                CHECK(std::abs(det(sub)) > 1e-12);
            });
        }
    }
}

TEST_CASE("seeded-random bank is deterministic and self-checked") {
    AnchorBank a = build_anchor_bank(3, 2, BankMode::SeededRandom, 42);
    AnchorBank b = build_anchor_bank(3, 2, BankMode::SeededRandom, 42);
    CHECK(a.rows == b.rows);
    AnchorBank c = build_anchor_bank(3, 2, BankMode::SeededRandom, 43);
    CHECK(a.rows != c.rows);
    for_each_subset(a.k1, 2, [&](const std::vector<int>& idx) {
        CHECK(std::abs(det({a.rows[idx[0]], a.rows[idx[1]]})) > 1e-12);
    });
}

TEST_CASE("build_gammas returns the first K2 primes") {
    CHECK(build_gammas(3).gammas == std::vector<double>{2, 3, 5});
    CHECK(build_gammas(1).gammas == std::vector<double>{2});
    GammaSet g13 = build_gammas(13);
    REQUIRE(g13.gammas.size() == 13);
    CHECK(g13.gammas.back() == 41.0);
    long prev = 1;
    for (double g : g13.gammas) {
        long v = static_cast<long>(g);
        CHECK(is_prime(v));
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("gamma four-tuple ratio condition holds exhaustively for K2 <= 13") {
    GammaSet g = build_gammas(13);
    const auto& v = g.gammas;
    int m = static_cast<int>(v.size());
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (j == i) continue;
            for (int k = 0; k < m; ++k) {
                if (k == i) continue;
                for (int l = 0; l < m; ++l) {
                    if (std::make_pair(i, j) == std::make_pair(k, l)) continue;
                    CHECK(std::abs(v[i] / v[j] - v[k] / v[l]) > 1e-12);
                }
            }
        }
    }
}

TEST_CASE("assemble_lp_weights block layout at N=2, D=2") {
    LPWeightSet w = assemble_lp_weights(2, 2);
    REQUIRE(w.k() == 16);
    CHECK(w.rows[0] == std::vector<double>{1, 0});
    CHECK(w.rows[1] == std::vector<double>{0, 1});
    CHECK(w.rows[2] == std::vector<double>{1, 0.5});
    CHECK(w.rows[3] == std::vector<double>{1, 1});
    // Coupling (i=0, j=0, k=0): e1 - 2 * (1, 1/2) = (-1, -1).
    long flat = w.coupling_flat(0, 0, 0);
    CHECK(flat == 4);
    CHECK(w.rows[flat] == std::vector<double>{-1, -1});
    for (int i = 0; i < w.d; ++i) {
        CHECK(w.index_map[i].kind == WeightRole::Buffer);
        int ones = 0;
        for (double v : w.rows[i]) {
            CHECK((v == 0.0 || v == 1.0));
            if (v == 1.0) ++ones;
        }
        CHECK(ones == 1);
    }
}

TEST_CASE("assemble_lp_weights index_map covers all roles consistently") {
    LPWeightSet w = assemble_lp_weights(3, 2);
    DimensionReport r = dims(3, 2, Arch::LP);
    REQUIRE(w.k() == r.k);
    REQUIRE(w.l() == r.l);
    for (int i = 0; i < w.d; ++i) {
        for (long j = 0; j < w.bank.k1; ++j) {
            for (long k = 0; k < w.gammas.k2; ++k) {
                long flat = w.coupling_flat(i, static_cast<int>(j), static_cast<int>(k));
                const WeightRole& role = w.index_map[flat];
                CHECK(role.kind == WeightRole::Coupling);
                CHECK(role.i == i);
                CHECK(role.j == j);
                CHECK(role.k == k);
                for (int c = 0; c < w.d; ++c) {
                    double want = (c == i ? 1.0 : 0.0) - w.gammas.gammas[k] * w.bank.rows[j][c];
                    CHECK(w.rows[flat][c] == doctest::Approx(want).epsilon(1e-15));
                }
            }
        }
    }
}

TEST_CASE("assemble_le_exponents enumerates the (p, q) grid") {
    LEExponentSet e = assemble_le_exponents(2, 2);
    DimensionReport r = dims(2, 2, Arch::LE);
    REQUIRE(e.l() == r.l);
    // Per (i, j) pair at N = 2: 5 entries with exponent pairs
    // (anchor, channel) = (1,0), (0,1), (2,0), (1,1), (0,2).
    std::vector<std::pair<int, int>> want = {{1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
    std::vector<std::pair<int, int>> got;
    for (int p = 1; p <= 2; ++p) {
        for (int q = 1; q <= p + 1; ++q) {
            long flat = e.flat(0, 0, p, q);
            const LEIndex& idx = e.index_map[flat];
            CHECK(idx.i == 0);
            CHECK(idx.j == 0);
            CHECK(idx.p == p);
            CHECK(idx.q == q);
            got.push_back({p - q + 1, q - 1});
        }
    }
    CHECK(got == want);
    // v for (i=0, j=0, p=1, q=2) = 1*e1 + 0*w = e1.
    CHECK(e.effective_weights[e.flat(0, 0, 1, 2)] == std::vector<double>{1, 0});
    // Every v = (q-1) e_i + (p-q+1) w_j entrywise.
    for (long f = 0; f < e.l(); ++f) {
        const LEIndex& idx = e.index_map[f];
        CHECK(idx.q - 1 >= 0);
        CHECK(idx.p - idx.q + 1 >= 0);
        CHECK((idx.q - 1) + (idx.p - idx.q + 1) <= e.n);
        for (int c = 0; c < e.d; ++c) {
            double want_v = (idx.q - 1) * (c == idx.i ? 1.0 : 0.0) +
                            (idx.p - idx.q + 1) * e.bank.rows[idx.j][c];
            CHECK(e.effective_weights[f][c] == doctest::Approx(want_v).epsilon(1e-15));
        }
    }
}

TEST_CASE("find_anchor_index fixed examples") {
    SetMatrix same = SetMatrix::from_rows({{1, 1}, {1, 1}, {1, 1}});
    AnchorBank bank = build_anchor_bank(3, 2, BankMode::MomentCurve);
    CHECK(find_anchor_index(same, bank) == 0);

    SetMatrix x = SetMatrix::from_rows({{1, 0}, {0, 1}, {1, 1}});
    int j = find_anchor_index(x, bank);
    std::vector<double> a = apply_functional(x, bank.rows[j]);
    CHECK(is_anchor(a, x));
    std::set<double> distinct(a.begin(), a.end());
    CHECK(distinct.size() == 3);

    SetMatrix single = SetMatrix::from_rows({{2, 3}});
    AnchorBank bank1 = build_anchor_bank(1, 2, BankMode::MomentCurve);
    CHECK(find_anchor_index(single, bank1) == 0);
}

TEST_CASE("find_anchor_index succeeds on 1000 random inputs") {
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int t = 0; t < 1000; ++t) {
        int n = 1 + static_cast<int>(rng() % 5);
        int d = 1 + static_cast<int>(rng() % 3);
        SetMatrix x(n, d);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < d; ++j) x(i, j) = dist(rng);
        }
        AnchorBank bank = build_anchor_bank(n, d, BankMode::MomentCurve);
        int j = find_anchor_index(x, bank);
        CHECK(j >= 0);
        CHECK(j < bank.k1);
        CHECK(is_anchor(apply_functional(x, bank.rows[j]), x));
    }
}
