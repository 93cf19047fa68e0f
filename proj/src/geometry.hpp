#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "util.hpp"

namespace msqg {

/// Exact rational with long-long numerator/denominator; enough headroom for
/// the fixed 3x3 systems of the direction construction.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d = 1);
    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;
    bool operator==(const Rational& o) const {
        return num == o.num && den == o.den;
    }
    double to_double() const { return double(num) / double(den); }
};

/// Symmetric 2x2 matrix as (r11, r12, r22).
struct Sym2 {
    double r11 = 0.0, r12 = 0.0, r22 = 0.0;
    static Sym2 identity() { return {1.0, 0.0, 1.0}; }
    /// entrywise sup distance (the ball norm used throughout)
    double dist_sup(const Sym2& o) const;
};

struct Direction {
    Rational x, y;  // unit vector with 5*(x,y) in Z^2
    double fx() const { return x.to_double(); }
    double fy() const { return y.to_double(); }
};

enum class SliceParity { Odd, Even };  // odd slice -> Gamma_1, even -> Gamma_2

// ---------------------------------------------------------------------------
// The constructive direction system: two disjoint six-element sets on the
// unit circle built from the 3-4-5 triangle, the affine coefficient maps
// c_k(R) obtained by inverting sum_pairs c_k (k_perp x k_perp) = R, and the
// verified positivity radius eps_gamma.
// ---------------------------------------------------------------------------
struct DirectionSystem {
    std::vector<Direction> gamma1, gamma2;  // full sets (pairs +-k)

    /// affine map coefficients: c_p(R) = dot(coef[p], (r11, r12, r22)),
    /// one row per +-pair, per set.
    std::array<std::array<Rational, 3>, 3> coef1{}, coef2{};

    double eps_gamma = 0.0;

    /// c_k at R for the three +-pairs of the requested set.
    std::array<double, 3> pair_coeffs(SliceParity parity, const Sym2& R) const;
    /// the same affine maps as double rows (d/dr11, d/dr12, d/dr22).
    std::array<std::array<double, 3>, 3> affine_rows(SliceParity parity) const;
    /// exact rational coefficients at R = Id.
    std::array<Rational, 3> pair_coeffs_identity(SliceParity parity) const;

    /// gamma_k(R) = sqrt(c_k(R)) for every k in the set (6 values, one per
    /// direction, equal on +-pairs). Throws OutsideBall if ||R - Id|| >
    /// eps_gamma.
    std::vector<double> gamma_coeffs(SliceParity parity, const Sym2& R) const;

    const std::vector<Direction>& directions(SliceParity parity) const {
        return parity == SliceParity::Odd ? gamma1 : gamma2;
    }

    /// sup over both sets and the full ball of gamma_k (affine maps attain
    /// extremes at box corners; closed form, cross-checked by sampling).
    double sup_gamma_norm() const;

    /// 1/2 sum_k gamma_k(R)^2 k_perp x k_perp, for reconstruction tests.
    Sym2 reconstruct(SliceParity parity, const Sym2& R) const;
};

DirectionSystem build_direction_system();

}  // namespace msqg
