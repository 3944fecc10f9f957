#include "setrep/multiset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace setrep {

namespace {

void check_finite(const std::vector<double>& entries) {
    for (double v : entries) {
        if (!std::isfinite(v)) throw ShapeError("SetMatrix entries must be finite");
    }
}

bool rows_close(const SetMatrix& x, int i, const SetMatrix& y, int j,
                const ToleranceConfig& tol) {
    for (int c = 0; c < x.cols(); ++c) {
        if (!close(x(i, c), y(j, c), tol)) return false;
    }
    return true;
}

bool lex_less(std::span<const double> a, std::span<const double> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void require_same_shape(const SetMatrix& x, const SetMatrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) {
        throw ShapeError("matrices have different shapes");
    }
}

}  // namespace

SetMatrix::SetMatrix(int n_rows, int n_cols) : n_(n_rows), d_(n_cols) {
    if (n_rows < 1 || n_cols < 1) throw ShapeError("SetMatrix needs N >= 1 and D >= 1");
    entries_.assign(static_cast<size_t>(n_rows) * n_cols, 0.0);
}

SetMatrix::SetMatrix(int n_rows, int n_cols, std::vector<double> entries)
    : n_(n_rows), d_(n_cols), entries_(std::move(entries)) {
    if (n_rows < 1 || n_cols < 1) throw ShapeError("SetMatrix needs N >= 1 and D >= 1");
    if (entries_.size() != static_cast<size_t>(n_rows) * n_cols) {
        throw ShapeError("entry count does not match N x D");
    }
    check_finite(entries_);
}

SetMatrix SetMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw ShapeError("SetMatrix needs at least one row");
    std::vector<double> flat;
    flat.reserve(rows.size() * rows[0].size());
    for (const auto& r : rows) {
        if (r.size() != rows[0].size()) throw ShapeError("ragged rows");
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return SetMatrix(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()),
                     std::move(flat));
}

std::vector<double> SetMatrix::column(int j) const {
    std::vector<double> col(n_);
    for (int i = 0; i < n_; ++i) col[i] = (*this)(i, j);
    return col;
}

bool PermutationVector::valid() const {
    std::vector<char> seen(mapping.size(), 0);
    for (int v : mapping) {
        if (v < 0 || v >= static_cast<int>(mapping.size()) || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

PermutationVector PermutationVector::identity(int n) {
    PermutationVector p;
    p.mapping.resize(n);
    std::iota(p.mapping.begin(), p.mapping.end(), 0);
    return p;
}

SetMatrix permute_rows(const SetMatrix& x, const PermutationVector& p) {
    if (static_cast<int>(p.mapping.size()) != x.rows() || !p.valid()) {
        throw ShapeError("invalid permutation for matrix");
    }
    SetMatrix out(x.rows(), x.cols());
    for (int i = 0; i < x.rows(); ++i) {
        for (int j = 0; j < x.cols(); ++j) out(i, j) = x(p.mapping[i], j);
    }
    return out;
}

std::optional<PermutationVector> equiv_check(const SetMatrix& x, const SetMatrix& y,
                                             const ToleranceConfig& tol) {
    require_same_shape(x, y);
    const int n = x.rows();
    if (n > tol.perm_search_cap) throw ShapeError("set size exceeds perm_search_cap");

    // Backtracking: place some unused row of X at each position of Y.
    std::vector<int> assign(n, -1);
    std::vector<char> used(n, 0);
    auto rec = [&](auto&& self, int pos) -> bool {
        if (pos == n) return true;
        for (int j = 0; j < n; ++j) {
            if (used[j] || !rows_close(x, j, y, pos, tol)) continue;
            used[j] = 1;
            assign[pos] = j;
            if (self(self, pos + 1)) return true;
            used[j] = 0;
        }
        return false;
    };
    if (!rec(rec, 0)) return std::nullopt;
    PermutationVector p;
    p.mapping = assign;
    return p;
}

double set_distance(const SetMatrix& x, const SetMatrix& y, const ToleranceConfig& tol) {
    require_same_shape(x, y);
    const int n = x.rows();
    if (n > tol.perm_search_cap) throw ShapeError("set size exceeds perm_search_cap");

    // Class id per X row so permutations of identical rows are enumerated once.
    std::vector<int> cls(n, -1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < i; ++j) {
            if (x.row(i).size() == x.row(j).size() &&
                std::equal(x.row(i).begin(), x.row(i).end(), x.row(j).begin())) {
                cls[i] = cls[j];
                break;
            }
        }
        if (cls[i] < 0) cls[i] = i;
    }

    auto row_diff = [&](int xi, int yi) {
        double m = 0.0;
        for (int c = 0; c < x.cols(); ++c) m = std::max(m, std::abs(x(xi, c) - y(yi, c)));
        return m;
    };

    double best = std::numeric_limits<double>::infinity();
    std::vector<char> used(n, 0);
    auto rec = [&](auto&& self, int pos, double cur) -> void {
        if (cur >= best) return;
        if (pos == n) {
            best = cur;
            return;
        }
        std::vector<char> tried(n, 0);
        for (int j = 0; j < n; ++j) {
            if (used[j] || tried[cls[j]]) continue;
            tried[cls[j]] = 1;
            used[j] = 1;
            self(self, pos + 1, std::max(cur, row_diff(j, pos)));
            used[j] = 0;
        }
    };
    rec(rec, 0, 0.0);
    return best;
}

SetMatrix canonicalize(const SetMatrix& x) {
    std::vector<int> order(x.rows());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return lex_less(x.row(a), x.row(b)); });
    PermutationVector p;
    p.mapping = order;
    return permute_rows(x, p);
}

bool is_anchor(std::span<const double> a, const SetMatrix& x, const ToleranceConfig& tol,
               double anchor_abs_tol) {
    if (static_cast<int>(a.size()) != x.rows()) {
        throw ShapeError("anchor length does not match row count");
    }
    const double atol = anchor_abs_tol >= 0 ? anchor_abs_tol : tol.abs_tol;
    for (int i = 0; i < x.rows(); ++i) {
        for (int j = i + 1; j < x.rows(); ++j) {
            if (rows_close(x, i, x, j, tol)) continue;
            if (std::abs(a[i] - a[j]) <= atol) return false;
        }
    }
    return true;
}

}  // namespace setrep
