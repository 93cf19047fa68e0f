#include "geometry.hpp"

#include <cmath>
#include <numeric>

namespace msqg {

Rational::Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw SingularSystem("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long long g = std::gcd(std::abs(num), den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Rational Rational::operator+(const Rational& o) const {
    return Rational(num * o.den + o.num * den, den * o.den);
}
Rational Rational::operator-(const Rational& o) const {
    return Rational(num * o.den - o.num * den, den * o.den);
}
Rational Rational::operator*(const Rational& o) const {
    return Rational(num * o.num, den * o.den);
}
Rational Rational::operator/(const Rational& o) const {
    if (o.num == 0) throw SingularSystem("rational division by zero");
    return Rational(num * o.den, den * o.num);
}

double Sym2::dist_sup(const Sym2& o) const {
    return std::max({std::abs(r11 - o.r11), std::abs(r12 - o.r12),
                     std::abs(r22 - o.r22)});
}

namespace {

using RMat3 = std::array<std::array<Rational, 3>, 3>;
using RVec3 = std::array<Rational, 3>;

Rational det3(const RMat3& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

/// Exact inverse of the map (c_1,c_2,c_3) -> sum c_p vec(k_p^perp x k_p^perp)
/// where vec(S) = (s11, s12, s22). Rows of the result express c_p as affine
/// functions of (r11, r12, r22).
RMat3 invert_pair_system(const std::array<Direction, 3>& reps) {
    // columns: vec(k_p^perp x k_p^perp); k = (x,y) -> k_perp = (-y, x)
    RMat3 m;
    for (int p = 0; p < 3; ++p) {
        const Rational px = Rational(0) - reps[p].y;
        const Rational py = reps[p].x;
        m[0][p] = px * px;
        m[1][p] = px * py;
        m[2][p] = py * py;
    }
    const Rational d = det3(m);
    if (d.num == 0)
        throw SingularSystem("direction tensors are linearly dependent");
    RMat3 inv;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            RMat3 minor{};
            int rr = 0;
            for (int r = 0; r < 3; ++r) {
                if (r == j) continue;
                int cc = 0;
                for (int c = 0; c < 3; ++c) {
                    if (c == i) continue;
                    minor[rr][cc] = m[r][c];
                    ++cc;
                }
                ++rr;
            }
            const Rational cof =
                minor[0][0] * minor[1][1] - minor[0][1] * minor[1][0];
            const Rational sgn((i + j) % 2 == 0 ? 1 : -1);
            inv[i][j] = sgn * cof / d;
        }
    }
    return inv;
}

double affine_eval(const std::array<Rational, 3>& row, const Sym2& R) {
    return row[0].to_double() * R.r11 + row[1].to_double() * R.r12 +
           row[2].to_double() * R.r22;
}

double l1_norm(const std::array<Rational, 3>& row) {
    return std::abs(row[0].to_double()) + std::abs(row[1].to_double()) +
           std::abs(row[2].to_double());
}

double value_at_identity(const std::array<Rational, 3>& row) {
    return row[0].to_double() + row[2].to_double();
}

}  // namespace

std::array<double, 3> DirectionSystem::pair_coeffs(SliceParity parity,
                                                   const Sym2& R) const {
    const auto& coef = parity == SliceParity::Odd ? coef1 : coef2;
    return {affine_eval(coef[0], R), affine_eval(coef[1], R),
            affine_eval(coef[2], R)};
}

std::array<std::array<double, 3>, 3> DirectionSystem::affine_rows(
    SliceParity parity) const {
    const auto& coef = parity == SliceParity::Odd ? coef1 : coef2;
    std::array<std::array<double, 3>, 3> out{};
    for (int p = 0; p < 3; ++p)
        for (int c = 0; c < 3; ++c) out[p][c] = coef[p][c].to_double();
    return out;
}

std::array<Rational, 3> DirectionSystem::pair_coeffs_identity(
    SliceParity parity) const {
    const auto& coef = parity == SliceParity::Odd ? coef1 : coef2;
    std::array<Rational, 3> out;
    for (int p = 0; p < 3; ++p) out[p] = coef[p][0] + coef[p][2];
    return out;
}

std::vector<double> DirectionSystem::gamma_coeffs(SliceParity parity,
                                                  const Sym2& R) const {
    if (gamma1.empty()) throw GeometryUnavailable("direction system not built");
    if (R.dist_sup(Sym2::identity()) > eps_gamma)
        throw OutsideBall("matrix outside B(Id, eps_gamma)");
    const auto c = pair_coeffs(parity, R);
    std::vector<double> out(6);
    for (int p = 0; p < 3; ++p) {
        const double g = std::sqrt(c[p]);
        out[2 * p] = g;      // +k
        out[2 * p + 1] = g;  // -k
    }
    return out;
}

double DirectionSystem::sup_gamma_norm() const {
    double best = 0.0;
    for (const auto* coef : {&coef1, &coef2})
        for (const auto& row : *coef)
            best = std::max(best,
                            value_at_identity(row) + eps_gamma * l1_norm(row));
    return std::sqrt(best);
}

Sym2 DirectionSystem::reconstruct(SliceParity parity, const Sym2& R) const {
    const auto c = pair_coeffs(parity, R);
    const auto& dirs = directions(parity);
    Sym2 acc;
    for (int p = 0; p < 3; ++p) {
        const double px = -dirs[2 * p].fy();
        const double py = dirs[2 * p].fx();
        acc.r11 += c[p] * px * px;
        acc.r12 += c[p] * px * py;
        acc.r22 += c[p] * py * py;
    }
    return acc;
}

DirectionSystem build_direction_system() {
    DirectionSystem sys;
    const Rational z(0), one(1);
    const Rational r35(3, 5), r45(4, 5);

    const std::array<Direction, 3> reps1 = {
        Direction{one, z}, Direction{r35, r45}, Direction{r35, z - r45}};
    const std::array<Direction, 3> reps2 = {
        Direction{z, one}, Direction{r45, r35}, Direction{z - r45, r35}};

    for (const auto& d : reps1) {
        sys.gamma1.push_back(d);
        sys.gamma1.push_back(Direction{z - d.x, z - d.y});
    }
    for (const auto& d : reps2) {
        sys.gamma2.push_back(d);
        sys.gamma2.push_back(Direction{z - d.x, z - d.y});
    }

    sys.coef1 = invert_pair_system(reps1);
    sys.coef2 = invert_pair_system(reps2);

    // Affine maps attain their box extremes at corners: the largest radius
    // keeping every c_k positive is min_k c_k(Id)/||grad c_k||_1, then a 5%
    // safety margin.
    double eps = HUGE_VAL;
    for (const auto* coef : {&sys.coef1, &sys.coef2})
        for (const auto& row : *coef)
            eps = std::min(eps, value_at_identity(row) / l1_norm(row));
    sys.eps_gamma = 0.95 * eps;
    return sys;
}

}  // namespace msqg
