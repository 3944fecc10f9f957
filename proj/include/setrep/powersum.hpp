#pragma once

#include <complex>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "setrep/multiset.hpp"

namespace setrep {

using Complex = std::complex<double>;

enum class Domain { Real, Complex };

// Power sums p_l = sum_i x_i^l for l = 1..K. In the Real domain imaginary
// parts are exactly zero.
struct PowerSums {
    Domain domain = Domain::Real;
    std::vector<Complex> values;

    int degree() const { return static_cast<int>(values.size()); }
};

// z^M - a_1 z^{M-1} + a_2 z^{M-2} - ... + (-1)^M a_M, storing a_1..a_M
// (the elementary symmetric polynomials of the roots).
struct MonicPolynomial {
    std::vector<Complex> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()); }
    Complex eval(Complex z) const;
};

// Compensated (Kahan) accumulator; keeps summation order-insensitive to the
// level the permutation-invariance tests demand.
class KahanSum {
public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

// [z, z^2, ..., z^K]
std::vector<Complex> power_map(Complex z, int k);

PowerSums sum_of_power(std::span<const double> xs, int k);
PowerSums sum_of_power(std::span<const Complex> xs, int k);

// Power sums p_1..p_M -> elementary symmetric polynomials e_1..e_M via the
// Newton-Girard recurrence n e_n = sum_{k=1..n} (-1)^{k-1} e_{n-k} p_k.
MonicPolynomial newton_girard(const PowerSums& p, int m);

// All M roots with multiplicity, Durand-Kerner iteration. Clusters closer
// than cluster_rel * scale are merged to their centroid.
std::vector<Complex> poly_roots(const MonicPolynomial& poly, const ToleranceConfig& cfg = {});

// newton_girard + poly_roots, with the real-domain imaginary-residue check
// and a re-summation consistency check.
std::vector<Complex> invert_power_sums(const PowerSums& p, int m, const ToleranceConfig& cfg = {});
std::vector<double> invert_power_sums_real(const PowerSums& p, int m,
                                           const ToleranceConfig& cfg = {});

// Bivariate monomial sums S(a,b) = sum_n u_n^a v_n^b (keys are the exponent
// pairs, a + b in 1..M) -> complex power sums of {u_n + v_n i} via
// p_l = sum_{k=0..l} C(l,k) i^k S(l-k, k).
PowerSums complex_pair_power_sums(const std::map<std::pair<int, int>, double>& s, int m);

}  // namespace setrep
