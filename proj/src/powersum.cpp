#include "setrep/powersum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace setrep {

namespace {

class KahanComplexSum {
public:
    void add(Complex z) {
        re_.add(z.real());
        im_.add(z.imag());
    }
    Complex value() const { return {re_.value(), im_.value()}; }

private:
    KahanSum re_;
    KahanSum im_;
};

// i^k for k >= 0.
Complex imag_unit_pow(int k) {
    switch (k & 3) {
        case 0: return {1, 0};
        case 1: return {0, 1};
        case 2: return {-1, 0};
        default: return {0, -1};
    }
}

// Single-linkage clustering of near-coincident roots; each cluster collapses
// to its centroid repeated with multiplicity. The centroid cancels the
// first-order splat of a multiple root, so merged roots gain accuracy.
std::vector<Complex> merge_clusters(std::vector<Complex> roots, double radius) {
    const int m = static_cast<int>(roots.size());
    std::vector<int> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            if (std::abs(roots[i] - roots[j]) <= radius) parent[find(i)] = find(j);
        }
    }
    std::vector<Complex> sum(m, Complex{0, 0});
    std::vector<int> count(m, 0);
    for (int i = 0; i < m; ++i) {
        int r = find(i);
        sum[r] += roots[i];
        ++count[r];
    }
    std::vector<Complex> out;
    out.reserve(m);
    for (int r = 0; r < m; ++r) {
        if (count[r] == 0) continue;
        Complex centroid = sum[r] / static_cast<double>(count[r]);
        for (int c = 0; c < count[r]; ++c) out.push_back(centroid);
    }
    return out;
}

// Newton iteration on the distinct cluster centers y_i with multiplicities
// mu_i against the first r power sums: F_l(y) = sum_i mu_i y_i^l - p_l.
// The reduced system has simple-root conditioning, so centers recover full
// double precision even when the underlying polynomial root has high
// multiplicity (where any method evaluating the polynomial stalls at a
// noise ball of radius ~eps^(1/mu)). Returns false if the Jacobian goes
// singular; the caller then keeps the unrefined centroids.
bool refine_cluster_centers(std::vector<Complex>& y, const std::vector<int>& mu,
                            const PowerSums& p) {
    const int r = static_cast<int>(y.size());
    for (int iter = 0; iter < 40; ++iter) {
        std::vector<Complex> f(r);
        std::vector<std::vector<Complex>> jac(r, std::vector<Complex>(r));
        for (int l = 1; l <= r; ++l) {
            Complex acc{0, 0};
            for (int i = 0; i < r; ++i) {
                Complex pw{1, 0};
                for (int t = 1; t < l; ++t) pw *= y[i];
                jac[l - 1][i] = static_cast<double>(mu[i]) * static_cast<double>(l) * pw;
                acc += static_cast<double>(mu[i]) * pw * y[i];
            }
            f[l - 1] = acc - p.values[l - 1];
        }
        // Gaussian elimination with partial pivoting on the r x r system.
        std::vector<Complex> rhs = f;
        for (int col = 0; col < r; ++col) {
            int pivot = col;
            for (int row = col + 1; row < r; ++row) {
                if (std::abs(jac[row][col]) > std::abs(jac[pivot][col])) pivot = row;
            }
            if (std::abs(jac[pivot][col]) < 1e-300) return false;
            std::swap(jac[col], jac[pivot]);
            std::swap(rhs[col], rhs[pivot]);
            for (int row = col + 1; row < r; ++row) {
                Complex factor = jac[row][col] / jac[col][col];
                for (int c = col; c < r; ++c) jac[row][c] -= factor * jac[col][c];
                rhs[row] -= factor * rhs[col];
            }
        }
        std::vector<Complex> dz(r);
        for (int row = r - 1; row >= 0; --row) {
            Complex acc = rhs[row];
            for (int c = row + 1; c < r; ++c) acc -= jac[row][c] * dz[c];
            dz[row] = acc / jac[row][row];
        }
        double step = 0.0;
        double ymax = 0.0;
        for (int i = 0; i < r; ++i) {
            y[i] -= dz[i];
            step = std::max(step, std::abs(dz[i]));
            ymax = std::max(ymax, std::abs(y[i]));
        }
        if (step <= 1e-15 * (1.0 + ymax)) break;
    }
    return true;
}

}  // namespace

Complex MonicPolynomial::eval(Complex z) const {
    Complex acc{1, 0};
    double sign = -1.0;
    for (int t = 0; t < degree(); ++t) {
        acc = acc * z + sign * coeffs[t];
        sign = -sign;
    }
    return acc;
}

std::vector<Complex> power_map(Complex z, int k) {
    if (k < 1) throw ShapeError("power_map needs K >= 1");
    std::vector<Complex> out(k);
    Complex acc{1, 0};
    for (int l = 0; l < k; ++l) {
        acc *= z;
        out[l] = acc;
    }
    return out;
}

PowerSums sum_of_power(std::span<const double> xs, int k) {
    if (xs.empty()) throw ShapeError("sum_of_power needs a nonempty multiset");
    if (k < 1) throw ShapeError("sum_of_power needs K >= 1");
    PowerSums p;
    p.domain = Domain::Real;
    p.values.resize(k);
    std::vector<KahanSum> acc(k);
    for (double x : xs) {
        double pw = 1.0;
        for (int l = 0; l < k; ++l) {
            pw *= x;
            acc[l].add(pw);
        }
    }
    for (int l = 0; l < k; ++l) p.values[l] = {acc[l].value(), 0.0};
    return p;
}

PowerSums sum_of_power(std::span<const Complex> xs, int k) {
    if (xs.empty()) throw ShapeError("sum_of_power needs a nonempty multiset");
    if (k < 1) throw ShapeError("sum_of_power needs K >= 1");
    PowerSums p;
    p.domain = Domain::Complex;
    p.values.resize(k);
    std::vector<KahanComplexSum> acc(k);
    for (Complex x : xs) {
        Complex pw{1, 0};
        for (int l = 0; l < k; ++l) {
            pw *= x;
            acc[l].add(pw);
        }
    }
    for (int l = 0; l < k; ++l) p.values[l] = acc[l].value();
    return p;
}

MonicPolynomial newton_girard(const PowerSums& p, int m) {
    if (m < 0 || p.degree() < m) {
        throw ShapeError("newton_girard needs power sums of degree >= M");
    }
    std::vector<Complex> e(m + 1);
    e[0] = {1, 0};
    for (int n = 1; n <= m; ++n) {
        Complex acc{0, 0};
        double sign = 1.0;
        for (int k = 1; k <= n; ++k) {
            acc += sign * e[n - k] * p.values[k - 1];
            sign = -sign;
        }
        e[n] = acc / static_cast<double>(n);
    }
    MonicPolynomial poly;
    poly.coeffs.assign(e.begin() + 1, e.end());
    return poly;
}

std::vector<Complex> poly_roots(const MonicPolynomial& poly, const ToleranceConfig& cfg) {
    const int m = poly.degree();
    if (m < 1) throw ShapeError("poly_roots needs degree >= 1");
    double cmax = 0.0;
    for (const Complex& c : poly.coeffs) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw ShapeError("poly_roots needs finite coefficients");
        }
        cmax = std::max(cmax, std::abs(c));
    }

    // Initial guesses on a circle enclosing all roots, rotated off the axes
    // so symmetric root patterns do not trap the iteration.
    double radius = 1.0;
    for (int n = 1; n <= m; ++n) {
        radius = std::max(radius, 1.0 + std::pow(std::abs(poly.coeffs[n - 1]), 1.0 / n));
    }
    std::vector<Complex> z(m);
    for (int i = 0; i < m; ++i) {
        double theta = 2.0 * M_PI * i / m + 0.4;
        z[i] = radius * Complex{std::cos(theta), std::sin(theta)};
    }

    double zmax = radius;
    for (int iter = 0; iter < cfg.root_iters; ++iter) {
        double step = 0.0;
        for (int i = 0; i < m; ++i) {
            Complex denom{1, 0};
            for (int j = 0; j < m; ++j) {
                if (j == i) continue;
                Complex diff = z[i] - z[j];
                if (std::abs(diff) < 1e-300) diff = {1e-300, 0};
                denom *= diff;
            }
            Complex delta = poly.eval(z[i]) / denom;
            z[i] -= delta;
            step = std::max(step, std::abs(delta));
        }
        zmax = 0.0;
        for (const Complex& r : z) zmax = std::max(zmax, std::abs(r));
        if (step <= 1e-15 * (1.0 + zmax)) break;
    }

    double resid = 0.0;
    for (const Complex& r : z) resid = std::max(resid, std::abs(poly.eval(r)));
    double resid_tol = 1e-8 * (1.0 + cmax * std::pow(std::max(1.0, zmax), m));
    if (resid > resid_tol) {
        throw ConvergenceError("poly_roots did not converge: residual " + std::to_string(resid));
    }

    return merge_clusters(std::move(z), cfg.cluster_rel * (1.0 + zmax));
}

std::vector<Complex> invert_power_sums(const PowerSums& p, int m, const ToleranceConfig& cfg) {
    if (m < 1) throw ShapeError("invert_power_sums needs M >= 1");
    if (m > cfg.max_degree) {
        throw RangeError("invert_power_sums: degree " + std::to_string(m) +
                         " exceeds the configured cap (double precision is unusable there)");
    }
    std::vector<Complex> raw = poly_roots(newton_girard(p, m), cfg);

    double scale = 0.0;
    for (const Complex& r : raw) scale = std::max(scale, std::abs(r));
    const double s = 1.0 + scale;

    // A root of multiplicity mu comes back from the iteration splattered over
    // a disk of radius ~eps^(1/mu), far beyond the base merge radius for
    // mu >= 3. Build candidate multiplicity structures by merging at a range
    // of radii; for each candidate, Newton-refine the distinct centers against
    // the power sums (that reduced system has simple-root conditioning, so it
    // restores full precision) and keep the candidate if re-summation
    // reproduces the input.
    std::string last_error = "no candidate produced";
    auto attempt = [&](double level, double tol_scale, bool gate_spread) -> std::vector<Complex> {
        std::vector<Complex> roots = merge_clusters(raw, level * s);

        // merge_clusters emits a cluster's centroid bit-identically mu times,
        // so equal adjacent values recover the multiplicity structure.
        std::vector<Complex> centers;
        std::vector<int> mults;
        for (const Complex& r : roots) {
            if (!centers.empty() && centers.back() == r) {
                ++mults.back();
            } else {
                centers.push_back(r);
                mults.push_back(1);
            }
        }
        if (gate_spread) {
            // A genuine multiplicity-mu root splatters the iteration over a
            // disk of radius ~eps^(1/mu); genuinely distinct roots sit in
            // tight, well-separated spots. Reject a merge whose raw spread
            // is far beyond the splat scale for its claimed multiplicity.
            std::vector<double> spread(centers.size(), 0.0);
            for (const Complex& r0 : raw) {
                size_t best = 0;
                double best_d = std::abs(r0 - centers[0]);
                for (size_t i = 1; i < centers.size(); ++i) {
                    double d = std::abs(r0 - centers[i]);
                    if (d < best_d) { best_d = d; best = i; }
                }
                spread[best] = std::max(spread[best], best_d);
            }
            for (size_t i = 0; i < centers.size(); ++i) {
                if (mults[i] < 2) continue;
                double splat = 50.0 * std::pow(2.2e-16, 1.0 / mults[i]) * s;
                if (spread[i] > splat) {
                    last_error = "cluster spread inconsistent with claimed multiplicity";
                    return {};
                }
            }
        }
        if (refine_cluster_centers(centers, mults, p)) {
            roots.clear();
            for (size_t i = 0; i < centers.size(); ++i) {
                roots.insert(roots.end(), mults[i], centers[i]);
            }
        }

        if (p.domain == Domain::Real) {
            double imag_tol = cfg.cluster_rel * s;
            for (Complex& r : roots) {
                if (std::abs(r.imag()) > imag_tol) {
                    last_error = "imaginary residue " + std::to_string(r.imag()) +
                                 " exceeds tolerance; input is not a valid real power-sum vector";
                    return {};
                }
                r = {r.real(), 0.0};
            }
        }

        // Recovered multiset must reproduce the input power sums.
        PowerSums back = sum_of_power(std::span<const Complex>{roots}, m);
        double sp = 1.0;
        for (int l = 1; l <= m; ++l) {
            sp *= s;
            double tol = tol_scale * (1.0 + m * sp);
            if (std::abs(back.values[l - 1] - p.values[l - 1]) > tol) {
                last_error = "recovered multiset does not reproduce the input power sums "
                             "(degree " + std::to_string(l) + ")";
                return {};
            }
        }
        return roots;
    };

    // Pass 1, descending radius under a tight tolerance: prefers the
    // most-merged structure, so a multiple root is recovered as one refined
    // center instead of a splatter that happens to fit the sums. Merging
    // genuinely distinct roots leaves a residual ~separation^2 that the tight
    // tolerance rejects.
    for (double level = 1e-2; level >= 0.99 * cfg.cluster_rel; level /= 10.0) {
        std::vector<Complex> roots = attempt(level, 1e-12, true);
        if (!roots.empty()) return roots;
    }
    // Pass 2, ascending radius under the working tolerance: fallback for
    // inputs whose power sums carry more noise than pass 1 admits (e.g.
    // extracted through ill-conditioned linear solves).
    for (double level = cfg.cluster_rel; level <= 1.01e-2; level *= 10.0) {
        std::vector<Complex> roots = attempt(level, 1e-6, false);
        if (!roots.empty()) return roots;
    }
    throw ConvergenceError("invert_power_sums: " + last_error);
}

std::vector<double> invert_power_sums_real(const PowerSums& p, int m,
                                           const ToleranceConfig& cfg) {
    if (p.domain != Domain::Real) {
        throw ShapeError("invert_power_sums_real needs real-domain power sums");
    }
    std::vector<Complex> roots = invert_power_sums(p, m, cfg);
    std::vector<double> out(roots.size());
    for (size_t i = 0; i < roots.size(); ++i) out[i] = roots[i].real();
    std::sort(out.begin(), out.end());
    return out;
}

PowerSums complex_pair_power_sums(const std::map<std::pair<int, int>, double>& s, int m) {
    if (m < 1) throw ShapeError("complex_pair_power_sums needs M >= 1");
    PowerSums p;
    p.domain = Domain::Complex;
    p.values.resize(m);
    for (int l = 1; l <= m; ++l) {
        Complex acc{0, 0};
        double binom = 1.0;  // C(l, k), updated incrementally
        for (int k = 0; k <= l; ++k) {
            auto it = s.find({l - k, k});
            if (it == s.end()) {
                throw ShapeError("complex_pair_power_sums: missing entry S(" +
                                 std::to_string(l - k) + "," + std::to_string(k) + ")");
            }
            acc += binom * imag_unit_pow(k) * it->second;
            binom = binom * (l - k) / (k + 1);
        }
        p.values[l - 1] = acc;
    }
    return p;
}

}  // namespace setrep
