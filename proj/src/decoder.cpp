#include "setrep/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace setrep {

namespace {

bool sorted_contains(const std::vector<double>& sorted, double target, double tol) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), target);
    if (it != sorted.end() && *it - target <= tol) return true;
    if (it != sorted.begin() && target - *(it - 1) <= tol) return true;
    return false;
}

double multiset_scale(const std::vector<double>& vals) {
    double s = 0.0;
    for (double v : vals) s = std::max(s, std::abs(v));
    return s;
}

// Kuhn's augmenting-path bipartite matching over a boolean feasibility
// matrix; returns slot -> value index or empty on failure.
std::vector<int> perfect_matching(const std::vector<std::vector<char>>& feasible) {
    const int m = static_cast<int>(feasible.size());
    std::vector<int> slot_of_value(m, -1);
    std::vector<int> value_of_slot(m, -1);
    for (int slot = 0; slot < m; ++slot) {
        std::vector<char> visited(m, 0);
        auto augment = [&](auto&& self, int s) -> bool {
            for (int v = 0; v < m; ++v) {
                if (!feasible[s][v] || visited[v]) continue;
                visited[v] = 1;
                if (slot_of_value[v] < 0 || self(self, slot_of_value[v])) {
                    slot_of_value[v] = s;
                    value_of_slot[s] = v;
                    return true;
                }
            }
            return false;
        };
        if (!augment(augment, slot)) return {};
    }
    return value_of_slot;
}

// Per-block relative deviation between a re-encoded embedding and the input,
// with block length chosen by architecture.
double embedding_residual(const std::vector<double>& got, const std::vector<double>& want,
                          int block_len) {
    double worst = 0.0;
    for (size_t base = 0; base < want.size(); base += block_len) {
        double num = 0.0;
        double den = 1.0;
        for (int t = 0; t < block_len && base + t < want.size(); ++t) {
            num = std::max(num, std::abs(got[base + t] - want[base + t]));
            den = std::max(den, 1.0 + std::abs(want[base + t]));
        }
        worst = std::max(worst, num / den);
    }
    return worst;
}

}  // namespace

std::vector<std::vector<double>> decode_channel_multisets(const Embedding& emb,
                                                          const LPWeightSet& w, int m,
                                                          const ToleranceConfig& cfg) {
    if (emb.arch != Arch::LP) throw ShapeError("decode_channel_multisets needs an LP embedding");
    const long k = w.k();
    const int n = w.n;
    if (static_cast<long>(emb.values.size()) != k * n) {
        throw ShapeError("embedding length does not match weight set");
    }
    if (m < 1 || m > n) throw ShapeError("set size M must be in [1, N]");

    std::vector<std::vector<double>> out(k);
    for (long b = 0; b < k; ++b) {
        PowerSums p;
        p.domain = Domain::Real;
        p.values.reserve(n);
        for (int l = 0; l < n; ++l) p.values.push_back({emb.values[b * n + l], 0.0});
        try {
            out[b] = invert_power_sums_real(p, m, cfg);
        } catch (const Error& err) {
            throw ConvergenceError("block " + std::to_string(b) +
                                   " inversion failed: " + err.what());
        }
    }
    return out;
}

PermutationVector pair_match(const std::vector<double>& x_vals,
                             const std::vector<double>& anchor_ref,
                             const std::vector<std::vector<double>>& coupled,
                             const GammaSet& gammas, const ToleranceConfig& cfg) {
    const int m = static_cast<int>(x_vals.size());
    if (static_cast<int>(anchor_ref.size()) != m) throw ShapeError("anchor_ref size mismatch");
    if (static_cast<long>(coupled.size()) != gammas.k2) {
        throw ShapeError("need one coupled multiset per gamma");
    }

    std::vector<std::vector<double>> sorted(coupled);
    std::vector<double> tol(coupled.size());
    for (size_t k = 0; k < sorted.size(); ++k) {
        std::sort(sorted[k].begin(), sorted[k].end());
        // Slack covers both membership noise and the centroid shift a cluster
        // merge can introduce in the inverted block.
        tol[k] = (cfg.match_rel + 2.0 * cfg.cluster_rel) * (1.0 + multiset_scale(sorted[k]));
    }

    std::vector<std::vector<char>> feasible(m, std::vector<char>(m, 1));
    for (int slot = 0; slot < m; ++slot) {
        for (int v = 0; v < m; ++v) {
            for (size_t k = 0; k < sorted.size(); ++k) {
                double target = x_vals[v] - gammas.gammas[k] * anchor_ref[slot];
                if (!sorted_contains(sorted[k], target, tol[k])) {
                    feasible[slot][v] = 0;
                    break;
                }
            }
        }
    }

    std::vector<int> assignment = perfect_matching(feasible);
    if (assignment.empty()) {
        throw ConvergenceError("pair_match: no perfect matching (wrong anchor candidate?)");
    }

    // Multiplicity bookkeeping: the matched layout must reproduce every
    // coupled multiset exactly, not just satisfy membership edge by edge.
    for (size_t k = 0; k < sorted.size(); ++k) {
        std::vector<double> produced(m);
        for (int slot = 0; slot < m; ++slot) {
            produced[slot] = x_vals[assignment[slot]] - gammas.gammas[k] * anchor_ref[slot];
        }
        std::sort(produced.begin(), produced.end());
        for (int t = 0; t < m; ++t) {
            if (std::abs(produced[t] - sorted[k][t]) > tol[k]) {
                throw ConvergenceError("pair_match: matching fails multiset consistency");
            }
        }
    }

    PermutationVector p;
    p.mapping = assignment;
    return p;
}

DecodeReport decode_lp(const Embedding& emb, const LPWeightSet& w, const ToleranceConfig& cfg,
                       int m) {
    if (m < 0) m = w.n;
    std::vector<std::vector<double>> blocks = decode_channel_multisets(emb, w, m, cfg);

    DecodeReport report;
    report.candidates_tried = 0;
    double best_residual = std::numeric_limits<double>::infinity();

    for (long j = 0; j < w.bank.k1; ++j) {
        ++report.candidates_tried;
        const std::vector<double>& anchor_ref = blocks[w.d + j];
        SetMatrix recovered(m, w.d);
        std::vector<PermutationVector> alignment;
        bool matched = true;
        for (int i = 0; i < w.d && matched; ++i) {
            std::vector<std::vector<double>> coupled(w.gammas.k2);
            for (long k = 0; k < w.gammas.k2; ++k) {
                coupled[k] = blocks[w.coupling_flat(i, static_cast<int>(j), static_cast<int>(k))];
            }
            try {
                PermutationVector sigma =
                    pair_match(blocks[i], anchor_ref, coupled, w.gammas, cfg);
                for (int slot = 0; slot < m; ++slot) {
                    recovered(slot, i) = blocks[i][sigma.mapping[slot]];
                }
                alignment.push_back(std::move(sigma));
            } catch (const Error&) {
                matched = false;
            }
        }
        if (!matched) continue;

        Embedding back = encode_lp(recovered, w);
        double residual = embedding_residual(back.values, emb.values, w.n);
        best_residual = std::min(best_residual, residual);
        if (residual <= cfg.verify_rel) {
            report.recovered = std::move(recovered);
            report.anchor_index = static_cast<int>(j);
            report.alignment = std::move(alignment);
            report.residual = residual;
            report.verified = true;
            return report;
        }
    }
    throw DecodeError("decode_lp: all " + std::to_string(w.bank.k1) +
                          " anchor candidates exhausted without verification; best residual " +
                          std::to_string(best_residual),
                      best_residual);
}

DecodeReport decode_le(const Embedding& emb, const LEExponentSet& e, const ToleranceConfig& cfg,
                       int m) {
    if (emb.arch != Arch::LE) throw ShapeError("decode_le needs an LE embedding");
    if (static_cast<long>(emb.values.size()) != e.l()) {
        throw ShapeError("embedding length does not match exponent set");
    }
    if (m < 0) m = e.n;
    if (m < 1 || m > e.n) throw ShapeError("set size M must be in [1, N]");

    DecodeReport report;
    report.candidates_tried = 0;
    double best_residual = std::numeric_limits<double>::infinity();

    for (long j = 0; j < e.bank.k1; ++j) {
        ++report.candidates_tried;
        // Per channel: complex power sums of {exp(Xw_j) + exp(x_i) i}; the
        // roots arrive as already-aligned (anchor, channel) pairs.
        std::vector<std::vector<std::pair<double, double>>> pairs(e.d);
        bool ok = true;
        for (int i = 0; i < e.d && ok; ++i) {
            std::map<std::pair<int, int>, double> s;
            for (int p = 1; p <= m; ++p) {
                for (int q = 1; q <= p + 1; ++q) {
                    s[{p - q + 1, q - 1}] =
                        emb.values[e.flat(i, static_cast<int>(j), p, q)];
                }
            }
            try {
                std::vector<Complex> roots = invert_power_sums(complex_pair_power_sums(s, m), m, cfg);
                for (const Complex& r : roots) {
                    if (r.real() <= 0.0 || r.imag() <= 0.0) {
                        throw ConvergenceError("non-positive recovered exp-value");
                    }
                    pairs[i].push_back({r.real(), r.imag()});
                }
                std::sort(pairs[i].begin(), pairs[i].end());
            } catch (const Error&) {
                ok = false;
            }
        }
        if (!ok) continue;

        // Union alignment: anchor values of the first channel fix the slot
        // order; every other channel must reproduce them.
        std::vector<double> anchor_ref(m);
        for (int slot = 0; slot < m; ++slot) anchor_ref[slot] = pairs[0][slot].first;
        SetMatrix recovered(m, e.d);
        for (int i = 0; i < e.d && ok; ++i) {
            for (int slot = 0; slot < m; ++slot) {
                double a = pairs[i][slot].first;
                if (std::abs(a - anchor_ref[slot]) >
                    cfg.cluster_rel * (1.0 + std::abs(anchor_ref[slot]))) {
                    ok = false;
                    break;
                }
                recovered(slot, i) = std::log(pairs[i][slot].second);
            }
        }
        if (!ok) continue;

        Embedding back = encode_le(recovered, e);
        double residual = embedding_residual(back.values, emb.values, 1);
        best_residual = std::min(best_residual, residual);
        if (residual <= cfg.verify_rel) {
            report.recovered = std::move(recovered);
            report.anchor_index = static_cast<int>(j);
            report.alignment.assign(e.d, PermutationVector::identity(m));
            report.residual = residual;
            report.verified = true;
            return report;
        }
    }
    throw DecodeError("decode_le: all " + std::to_string(e.bank.k1) +
                          " anchor candidates exhausted without verification; best residual " +
                          std::to_string(best_residual),
                      best_residual);
}

std::pair<DecodeReport, double> roundtrip(const SetMatrix& x, Arch arch, BankMode mode,
                                          std::uint64_t seed, const ToleranceConfig& cfg) {
    if (arch == Arch::LP) {
        LPWeightSet w = assemble_lp_weights(x.rows(), x.cols(), mode, seed);
        DecodeReport report = decode_lp(encode_lp(x, w), w, cfg);
        double dist = set_distance(x, report.recovered, cfg);
        return {std::move(report), dist};
    }
    LEExponentSet e = assemble_le_exponents(x.rows(), x.cols(), mode, seed);
    DecodeReport report = decode_le(encode_le(x, e), e, cfg);
    double dist = set_distance(x, report.recovered, cfg);
    return {std::move(report), dist};
}

}  // namespace setrep
