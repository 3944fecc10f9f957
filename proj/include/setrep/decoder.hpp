#pragma once

#include <utility>
#include <vector>

#include "setrep/encoder.hpp"

namespace setrep {

struct DecodeReport {
    SetMatrix recovered{1, 1};
    int anchor_index = -1;
    std::vector<PermutationVector> alignment;  // per-channel slot assignment
    double residual = 0.0;                     // worst per-block relative re-encoding error
    bool verified = false;
    int candidates_tried = 0;
};

// Inverts every length-N block of an LP embedding into an M-element real
// multiset (sorted). Indexed by flat weight row; W.index_map names the roles.
std::vector<std::vector<double>> decode_channel_multisets(const Embedding& emb,
                                                          const LPWeightSet& w, int m,
                                                          const ToleranceConfig& cfg = {});

// Assigns each channel value to an anchor slot: value u may sit at slot n iff
// u - gamma_k * anchor_ref[n] appears in coupled[k] for every k. Returns the
// assignment (mapping[n] = index into x_vals); throws if no perfect matching
// survives the full multiset consistency check.
PermutationVector pair_match(const std::vector<double>& x_vals,
                             const std::vector<double>& anchor_ref,
                             const std::vector<std::vector<double>>& coupled,
                             const GammaSet& gammas, const ToleranceConfig& cfg = {});

// Full inversion of the pooled LP embedding: channel-wise power-sum
// inversion, anchor-candidate loop with per-channel matching, union
// alignment, and mandatory verification by re-encoding. m < 0 means "the
// weight set's N".
DecodeReport decode_lp(const Embedding& emb, const LPWeightSet& w, const ToleranceConfig& cfg = {},
                       int m = -1);

// LE inversion: per (channel, anchor) pair the bivariate monomial sums become
// complex power sums whose roots are already aligned (exp(anchor), exp(x))
// pairs; columns are grouped by anchor value and verified by re-encoding.
DecodeReport decode_le(const Embedding& emb, const LEExponentSet& e,
                       const ToleranceConfig& cfg = {}, int m = -1);

std::pair<DecodeReport, double> roundtrip(const SetMatrix& x, Arch arch,
                                          BankMode mode = BankMode::MomentCurve,
                                          std::uint64_t seed = 0,
                                          const ToleranceConfig& cfg = {});

}  // namespace setrep
