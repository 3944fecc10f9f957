#pragma once

#include <optional>
#include <span>
#include <vector>

#include "setrep/errors.hpp"

namespace setrep {

// Numeric knobs shared across the library. abs_tol/rel_tol drive float
// comparisons, root_iters caps the root finder, perm_search_cap bounds the
// factorial permutation searches.
struct ToleranceConfig {
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    int root_iters = 200;
    int perm_search_cap = 8;
    double cluster_rel = 1e-6;  // root-cluster merge radius, relative to root scale
    double match_rel = 1e-7;    // multiset membership slack in pair matching
    double verify_rel = 1e-6;   // per-block re-encoding residual acceptance
    int max_degree = 12;        // power-sum inversion refuses higher degrees
};

inline bool close(double a, double b, const ToleranceConfig& tol) {
    double d = a > b ? a - b : b - a;
    double m = std::abs(a) > std::abs(b) ? std::abs(a) : std::abs(b);
    return d <= tol.abs_tol + tol.rel_tol * m;
}

// An N-element multiset of D-dimensional feature vectors, stored row-major.
// Two matrices represent the same multiset iff they differ by a row
// permutation.
class SetMatrix {
public:
    SetMatrix(int n_rows, int n_cols);
    SetMatrix(int n_rows, int n_cols, std::vector<double> entries);
    static SetMatrix from_rows(const std::vector<std::vector<double>>& rows);

    int rows() const { return n_; }
    int cols() const { return d_; }

    double operator()(int i, int j) const { return entries_[i * d_ + j]; }
    double& operator()(int i, int j) { return entries_[i * d_ + j]; }

    std::span<const double> row(int i) const {
        return {entries_.data() + static_cast<size_t>(i) * d_, static_cast<size_t>(d_)};
    }
    std::vector<double> column(int j) const;
    const std::vector<double>& data() const { return entries_; }

    bool operator==(const SetMatrix&) const = default;

private:
    int n_;
    int d_;
    std::vector<double> entries_;
};

// mapping[i] = source row index placed at position i.
struct PermutationVector {
    std::vector<int> mapping;

    bool valid() const;
    static PermutationVector identity(int n);
};

SetMatrix permute_rows(const SetMatrix& x, const PermutationVector& p);

// Finds P with ||PX - Y||_inf,inf within tolerance, if one exists.
std::optional<PermutationVector> equiv_check(const SetMatrix& x, const SetMatrix& y,
                                             const ToleranceConfig& tol = {});

// d_Pi: min over permutations P of the max-abs entry of PX - Y. Exact
// minimum by enumeration; requires N <= perm_search_cap.
double set_distance(const SetMatrix& x, const SetMatrix& y, const ToleranceConfig& tol = {});

// Rows sorted lexicographically; a permutation-invariant representative.
SetMatrix canonicalize(const SetMatrix& x);

// True iff a_i != a_j (beyond anchor tolerance) whenever rows i and j of X
// differ. anchor_abs_tol < 0 means "use tol.abs_tol".
bool is_anchor(std::span<const double> a, const SetMatrix& x, const ToleranceConfig& tol = {},
               double anchor_abs_tol = -1.0);

}  // namespace setrep
