#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "setrep/decoder.hpp"

namespace setrep {

struct ClaimReport {
    std::string claim_id;
    bool passed = false;
    nlohmann::json details;
};

// The 4x3 matrices whose column pairs are all pairwise equivalent while the
// full matrices are not.
std::pair<SetMatrix, SetMatrix> counterexample_matrices();

// Checks the three pairwise column equivalences (all true) and the global
// equivalence (false).
ClaimReport reproduce_counterexample();

// Searches grid-valued canonical matrix pairs for X !~ X' with X w_i ~ X' w_i
// for all i. K <= D required; empty result means the budget was exhausted
// (inconclusive), not a disproof.
std::optional<std::pair<SetMatrix, SetMatrix>> collision_search(
    int n, int d, const std::vector<std::vector<double>>& weights,
    const std::vector<double>& grid, long budget);

// Enumerates all equivalence classes over the grid, encodes each, and checks
// separation across classes plus equality within classes.
ClaimReport injectivity_sweep(int n, int d, const std::vector<double>& grid, Arch arch,
                              const ToleranceConfig& cfg = {});

using SetFunction = std::function<double(const SetMatrix&)>;

// f(X) == f(decode(encode(X))): the exact decomposable form with
// rho = f o Phi^{-1}.
ClaimReport exact_representation_check(const SetFunction& f, const SetMatrix& x, Arch arch,
                                       const ToleranceConfig& cfg = {});

// Report-only: perturbs the embedding at each epsilon, records decode success
// rates and distance statistics. Never asserts.
ClaimReport continuity_probe(const SetMatrix& x, Arch arch, const std::vector<double>& epsilons,
                             int trials, const ToleranceConfig& cfg = {});

// Empirical noise amplification of power-sum inversion per degree M; the
// documented justification for the degree cap.
ClaimReport conditioning_report(int max_n, const ToleranceConfig& cfg = {});

}  // namespace setrep
