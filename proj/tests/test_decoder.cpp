#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "setrep/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

using namespace setrep;

namespace {

SetMatrix rows(const std::vector<std::vector<double>>& r) { return SetMatrix::from_rows(r); }

SetMatrix random_matrix(std::mt19937_64& rng, int n, int d, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    SetMatrix x(n, d);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) x(i, j) = dist(rng);
    }
    return x;
}

double multiset_mismatch(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double worst = 0.0;
    for (size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

double inf_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

// Exhaustive oracle for pair_match: try all M! slot assignments and keep
// those reproducing every coupled multiset.
std::vector<std::vector<int>> brute_matchings(const std::vector<double>& x_vals,
                                              const std::vector<double>& anchor_ref,
                                              const std::vector<std::vector<double>>& coupled,
                                              const GammaSet& gammas, double tol) {
    int m = static_cast<int>(x_vals.size());
    std::vector<int> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<int>> hits;
    do {
        bool ok = true;
        for (size_t k = 0; k < coupled.size() && ok; ++k) {
            std::vector<double> produced(m);
            for (int slot = 0; slot < m; ++slot) {
                produced[slot] = x_vals[perm[slot]] - gammas.gammas[k] * anchor_ref[slot];
            }
            ok = multiset_mismatch(produced, coupled[k]) <= tol;
        }
        if (ok) hits.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return hits;
}

}  // namespace

TEST_CASE("decode_channel_multisets inverts every block") {
    LPWeightSet w = assemble_lp_weights(2, 1);
    Embedding e = encode_lp(rows({{1}, {2}}), w);
    auto blocks = decode_channel_multisets(e, w, 2);
    REQUIRE(static_cast<long>(blocks.size()) == w.k());
    CHECK(multiset_mismatch(blocks[0], {1, 2}) < 1e-8);  // buffer block [3, 5]

    Embedding zero = encode_lp(rows({{0}, {0}}), w);
    auto zblocks = decode_channel_multisets(zero, w, 2);
    for (const auto& b : zblocks) {
        for (double v : b) CHECK(std::abs(v) < 1e-9);
    }
}

TEST_CASE("channel multisets reproduce the input columns") {
    std::mt19937_64 rng(201);
    for (int t = 0; t < 20; ++t) {
        int n = 1 + static_cast<int>(rng() % 4);
        int d = 1 + static_cast<int>(rng() % 3);
        SetMatrix x = random_matrix(rng, n, d, -2.0, 2.0);
        LPWeightSet w = assemble_lp_weights(n, d);
        auto blocks = decode_channel_multisets(encode_lp(x, w), w, n);
        for (int i = 0; i < d; ++i) {
            CHECK(multiset_mismatch(blocks[i], x.column(i)) < 1e-6);
        }
    }
}

TEST_CASE("pair_match fixed cases") {
    GammaSet g = build_gammas(3);
    REQUIRE(g.gammas == std::vector<double>{2, 3, 5});

    // Constant channel: any assignment works; matcher must return one.
    std::vector<double> anchor = {1, 2};
    std::vector<double> cx = {4, 4};
    std::vector<std::vector<double>> coupled(3);
    for (int k = 0; k < 3; ++k) {
        coupled[k] = {cx[0] - g.gammas[k] * anchor[0], cx[1] - g.gammas[k] * anchor[1]};
    }
    PermutationVector triv = pair_match(cx, anchor, coupled, g);
    CHECK(triv.valid());

    // Intended pairing 10 <-> anchor 1, 20 <-> anchor 2.
    std::vector<double> x_vals = {20, 10};  // deliberately out of slot order
    std::vector<std::vector<double>> c2(3);
    for (int k = 0; k < 3; ++k) {
        c2[k] = {10 - g.gammas[k] * 1.0, 20 - g.gammas[k] * 2.0};
    }
    PermutationVector p = pair_match(x_vals, anchor, c2, g);
    REQUIRE(p.valid());
    CHECK(x_vals[p.mapping[0]] == 10.0);
    CHECK(x_vals[p.mapping[1]] == 20.0);

    // Adversarial coupled multisets admitting no matching.
    std::vector<std::vector<double>> bad = {{1e6, 2e6}, {1e6, 2e6}, {1e6, 2e6}};
    CHECK_THROWS_AS(pair_match(x_vals, anchor, bad, g), ConvergenceError);
}

TEST_CASE("pair_match agrees with the factorial oracle") {
    std::mt19937_64 rng(211);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int t = 0; t < 60; ++t) {
        int m = 1 + static_cast<int>(rng() % 5);
        GammaSet g = build_gammas(3 + static_cast<int>(rng() % 3));
        std::vector<double> anchor(m), truth(m);
        for (double& v : anchor) v = dist(rng);
        for (double& v : truth) v = dist(rng);
        if (m >= 2 && t % 3 == 0) {  // tied anchors force the grouping logic
            anchor[1] = anchor[0];
        }
        std::vector<std::vector<double>> coupled(g.gammas.size());
        for (size_t k = 0; k < coupled.size(); ++k) {
            for (int slot = 0; slot < m; ++slot) {
                coupled[k].push_back(truth[slot] - g.gammas[k] * anchor[slot]);
            }
        }
        std::vector<double> shuffled = truth;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        PermutationVector p = pair_match(shuffled, anchor, coupled, g);
        REQUIRE(p.valid());
        auto oracle = brute_matchings(shuffled, anchor, coupled, g, 1e-7);
        REQUIRE_FALSE(oracle.empty());
        // The returned matching must be among the oracle's valid ones.
        bool found = false;
        for (const auto& perm : oracle) found = found || perm == p.mapping;
        CHECK(found);
    }
}

TEST_CASE("decode_lp round trips") {
    std::mt19937_64 rng(223);
    for (int t = 0; t < 60; ++t) {
        int n = 1 + static_cast<int>(rng() % 5);
        int d = 1 + static_cast<int>(rng() % 3);
        SetMatrix x = random_matrix(rng, n, d, -2.0, 2.0);
        LPWeightSet w = assemble_lp_weights(n, d);
        Embedding e = encode_lp(x, w);
        DecodeReport r = decode_lp(e, w);
        CHECK(r.verified);
        CHECK(r.candidates_tried <= w.bank.k1);
        CHECK(r.recovered.rows() == n);
        CHECK(r.recovered.cols() == d);
        CHECK(set_distance(x, r.recovered) <= 1e-6);

        // Verification honesty: recompute the residual independently.
        Embedding back = encode_lp(r.recovered, w);
        double scale = 1.0;
        for (double v : e.values) scale = std::max(scale, std::abs(v));
        CHECK(inf_diff(back.values, e.values) <= 1e-6 * scale);
    }
}

TEST_CASE("decode_lp degenerate cases") {
    LPWeightSet w1 = assemble_lp_weights(1, 2);
    SetMatrix single = rows({{0.25, -1.5}});
    DecodeReport r1 = decode_lp(encode_lp(single, w1), w1);
    CHECK(r1.verified);
    CHECK(set_distance(single, r1.recovered) <= 1e-9);

    LPWeightSet w3 = assemble_lp_weights(3, 2);
    SetMatrix same = rows({{0.5, 1.0}, {0.5, 1.0}, {0.5, 1.0}});
    DecodeReport r3 = decode_lp(encode_lp(same, w3), w3);
    CHECK(r3.verified);
    CHECK(set_distance(same, r3.recovered) <= 1e-6);
}

TEST_CASE("decode_le round trips") {
    std::mt19937_64 rng(227);
    for (int t = 0; t < 60; ++t) {
        int n = 1 + static_cast<int>(rng() % 4);
        int d = 1 + static_cast<int>(rng() % 3);
        SetMatrix x = random_matrix(rng, n, d, -1.5, 1.5);
        LEExponentSet e = assemble_le_exponents(n, d);
        Embedding emb = encode_le(x, e);
        DecodeReport r = decode_le(emb, e);
        CHECK(r.verified);
        CHECK(set_distance(x, r.recovered) <= 1e-6);
        Embedding back = encode_le(r.recovered, e);
        for (size_t v = 0; v < back.values.size(); ++v) {
            CHECK(std::abs(back.values[v] - emb.values[v]) <=
                  1e-5 * (1.0 + std::abs(emb.values[v])));
        }
    }
}

TEST_CASE("decode_le degenerate cases") {
    LEExponentSet e1 = assemble_le_exponents(1, 2);
    SetMatrix single = rows({{0.3, -0.9}});
    DecodeReport r1 = decode_le(encode_le(single, e1), e1);
    CHECK(r1.verified);
    CHECK(set_distance(single, r1.recovered) <= 1e-9);

    LEExponentSet e3 = assemble_le_exponents(3, 2);
    SetMatrix zero = rows({{0, 0}, {0, 0}, {0, 0}});
    DecodeReport rz = decode_le(encode_le(zero, e3), e3);
    CHECK(rz.verified);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 2; ++j) CHECK(std::abs(rz.recovered(i, j)) <= 1e-8);
    }
}

TEST_CASE("roundtrip harness") {
    SetMatrix fixture = rows({{1.0, -0.5}, {0.25, 2.0}, {-1.75, 0.0}});
    auto [rep, dist] = roundtrip(fixture, Arch::LP);
    CHECK(rep.verified);
    CHECK(dist <= 1e-6);

    // X vs PX: identical numeric report.
    SetMatrix px = permute_rows(fixture, PermutationVector{{2, 0, 1}});
    auto [prep, pdist] = roundtrip(px, Arch::LP);
    CHECK(prep.verified);
    CHECK(prep.anchor_index == rep.anchor_index);
    CHECK(set_distance(prep.recovered, rep.recovered) <= 1e-9);
    CHECK(pdist <= 1e-6);

    auto [le_rep, le_dist] = roundtrip(fixture, Arch::LE);
    CHECK(le_rep.verified);
    CHECK(le_dist <= 1e-6);
}

TEST_CASE("out-of-range inputs fail loudly") {
    SetMatrix big(6, 1);
    for (int i = 0; i < 6; ++i) big(i, 0) = 100.0 + i;
    CHECK_THROWS_AS(roundtrip(big, Arch::LP), Error);
}

TEST_CASE("equivariant leave-one-out decodes the remaining rows") {
    std::mt19937_64 rng(229);
    for (int t = 0; t < 10; ++t) {
        int n = 2 + static_cast<int>(rng() % 3);
        int d = 1 + static_cast<int>(rng() % 2);
        SetMatrix x = random_matrix(rng, n, d, -1.5, 1.5);
        LPWeightSet w = assemble_lp_weights(n, d);
        auto pairs = equivariant_context(x, w);
        for (int j = 0; j < n; ++j) {
            DecodeReport r = decode_lp(pairs[j].context, w, {}, n - 1);
            CHECK(r.verified);
            std::vector<std::vector<double>> others;
            for (int i = 0; i < n; ++i) {
                if (i != j) others.push_back({x.row(i).begin(), x.row(i).end()});
            }
            CHECK(set_distance(SetMatrix::from_rows(others), r.recovered) <= 1e-6);
        }
    }
}
