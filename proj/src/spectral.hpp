#pragma once

#include <complex>
#include <vector>

#include "util.hpp"

namespace msqg {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Uniform periodic grid on [-pi,pi]^2 with N points per axis. Fourier modes
// live on {-N/2+1..N/2}^2; products are dealiased with the two-thirds rule
// (|m|_inf > dealias_radius zeroed).
// ---------------------------------------------------------------------------
struct PeriodicGrid {
    int n = 0;
    double dealias_radius = 0.0;

    static PeriodicGrid make(int n);

    double spacing() const { return 2.0 * M_PI / n; }
    std::size_t size() const { return std::size_t(n) * n; }
    int mode(int idx) const { return idx <= n / 2 ? idx : idx - n; }
    int index(int m) const { return m >= 0 ? m : m + n; }
    bool operator==(const PeriodicGrid& o) const { return n == o.n; }
};

// ---------------------------------------------------------------------------
// Band-limited periodic fields, canonical representation = Fourier
// coefficients f(x) = sum_m hat(m) e^{i m.x}, row-major over (iy, ix).
// Real-valued fields keep Hermitian symmetry hat(-m) = conj(hat(m)).
// ---------------------------------------------------------------------------
struct ScalarField {
    PeriodicGrid grid;
    std::vector<cplx> hat;

    ScalarField() = default;
    explicit ScalarField(const PeriodicGrid& g) : grid(g), hat(g.size()) {}

    cplx& at(int mx, int my) {
        return hat[std::size_t(grid.index(my)) * grid.n + grid.index(mx)];
    }
    cplx at(int mx, int my) const {
        return hat[std::size_t(grid.index(my)) * grid.n + grid.index(mx)];
    }
    cplx mean_mode() const { return hat.empty() ? cplx{} : hat[0]; }
};

struct VectorField {
    ScalarField c1, c2;

    VectorField() = default;
    explicit VectorField(const PeriodicGrid& g) : c1(g), c2(g) {}
    const PeriodicGrid& grid() const { return c1.grid; }
};

/// Symmetric trace-free 2x2 matrix field; stores the independent entries
/// (A11, A12); A22 = -A11 and A21 = A12 by construction.
struct SymTFField {
    ScalarField a11, a12;

    SymTFField() = default;
    explicit SymTFField(const PeriodicGrid& g) : a11(g), a12(g) {}
    const PeriodicGrid& grid() const { return a11.grid; }
};

// ---------------------------------------------------------------------------
// FFT engine (FFTW behind the scenes). Plans are created once per size with
// deterministic heuristics and cached per thread.
// ---------------------------------------------------------------------------
namespace fft {
/// hat -> physical samples (complex work array, imaginary part ~ 0 for
/// Hermitian input). Unnormalized exponential sum.
std::vector<cplx> synth(const ScalarField& f);
/// physical (complex) -> hat with 1/N^2 normalization.
ScalarField analyze(const PeriodicGrid& g, const std::vector<cplx>& phys);
/// physical real samples of a Hermitian field.
std::vector<double> real_samples(const ScalarField& f);
ScalarField from_real(const PeriodicGrid& g, const std::vector<double>& phys);
}  // namespace fft

// --------------------------- multiplier operators ---------------------------

/// Lambda^r = (-Delta)^{r/2}: multiply hat(m) by |m|^r. For r < 0 the input
/// must be mean-zero (NegativePowerOnMean otherwise); mode 0 passes through
/// for r >= 0.
ScalarField frac_laplacian(const ScalarField& f, double r);
VectorField frac_laplacian(const VectorField& f, double r);

/// Mean-zero projection P_{!=0}.
ScalarField mean_zero(const ScalarField& f);
VectorField mean_zero(const VectorField& f);

/// Leray projection onto divergence-free mean-zero fields.
VectorField leray(const VectorField& f);

ScalarField derivative(const ScalarField& f, int axis);
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& f);
/// div of a symmetric trace-free matrix field: (d1 A11 + d2 A12,
///                                              d1 A12 - d2 A11).
VectorField divergence(const SymTFField& r);
/// perp of a vector: v^perp = (-v2, v1).
VectorField perp(const VectorField& v);
/// perp-divergence (2d curl): d1 v2 - d2 v1.
ScalarField perp_divergence(const VectorField& v);

/// Inverse divergence (order -1): applies P P_{!=0} internally, returns the
/// symmetric trace-free matrix with div(B f) = P P_{!=0} f.
SymTFField inverse_divergence(const VectorField& f);

// ------------------------------ band projectors -----------------------------

/// Radial plateau profile of the unit bump: 1 on [0,1/16], smooth decay to 0
/// at 1/8, exactly 0 beyond.
double bump_symbol(double r);
/// Annulus symbol for lambda: supported on [lambda/4, 4 lambda], identically
/// 1 on [3 lambda/8, 3 lambda].
double annulus_symbol(double r, double lambda);

/// P_{q+1,k} = Leray o (symbol bump((xi - lambda k)/lambda)). Throws
/// BandExceedsGrid when 9 lambda/8 exceeds the dealias radius.
VectorField band_project(const VectorField& f, double kx, double ky,
                         double lambda);
ScalarField annulus_project(const ScalarField& f, double lambda);
VectorField annulus_project(const VectorField& f, double lambda);

// ------------------------------- nonlinearity -------------------------------

/// Dealiased pointwise product.
ScalarField product(const ScalarField& a, const ScalarField& b);

/// u^perp (perp_div v) with u = Lambda v; the momentum-form nonlinearity in
/// closed form. Requires v solenoidal (NotSolenoidal otherwise).
VectorField sqg_nonlinearity(const VectorField& v);

/// (Lambda a . grad) b  (advection of each component of b by Lambda a).
VectorField advect(const VectorField& lambda_a, const VectorField& b);
/// (grad b)^T . a : component i = sum_j (d_i b_j) a_j.
VectorField grad_transpose_dot(const VectorField& b, const VectorField& a);
/// Term-by-term momentum nonlinearity (u.grad)v - (grad v)^T u, u = Lambda v.
VectorField momentum_nonlinearity(const VectorField& v);
/// Generic closed-form bilinear u^perp(perp_div v) for distinct arguments,
/// with u = Lambda u_src.
VectorField perp_curl_form(const VectorField& u_src, const VectorField& v);

// --------------------------------- norms ------------------------------------

double norm_sup(const ScalarField& f);
double norm_sup(const VectorField& f);
/// Entrywise sup over the two independent entries.
double norm_sup(const SymTFField& f);
/// Homogeneous Sobolev norm (sum |m|^{2s} |hat|^2 * (2pi)^2)^{1/2}; matches
/// the integral of |Lambda^s f|^2 for real fields.
double norm_hs(const ScalarField& f, double s);
double norm_hs(const VectorField& f, double s);
/// sup |f| + sup |grad f| over the grid.
double norm_c1(const VectorField& f);

/// Discrete Hoelder seminorm of a scalar series on a uniform time grid,
/// restricted to dyadic gaps {dt, 2dt, 4dt, ...}.
double holder_seminorm(const std::vector<double>& values, double dt,
                       double exponent);

/// L2(T^2) energy via quadrature of physical samples (Parseval partner).
double energy_physical(const ScalarField& f);
double energy_fourier(const ScalarField& f);

// ------------------------------- diagnostics --------------------------------

/// Zero every mode with |m| > radius (projection onto the known support
/// ball; the identity for fields provably supported inside).
ScalarField ball_truncate(const ScalarField& f, double radius);
VectorField ball_truncate(const VectorField& f, double radius);
SymTFField ball_truncate(const SymTFField& f, double radius);

/// Spectral mass (sum |hat|^2) of modes with |m| outside [lo, hi].
double mass_outside_annulus(const ScalarField& f, double lo, double hi);
double mass_outside_annulus(const VectorField& f, double lo, double hi);
double mass_outside_ball(const VectorField& f, double radius);
double mass_outside_ball(const SymTFField& f, double radius);
/// Spectral mass on the intersection of the supports of f and g.
double support_overlap(const VectorField& f, const VectorField& g);

/// Largest |imag| of physical samples (reality check).
double imag_residue(const ScalarField& f);

/// Operator-norm lower bound sup ||P_{q+1,k} f||_C / ||f||_C over a seeded
/// probe family of C0-normalized band-limited fields, maximized over the
/// supplied lambdas and all directions of the 3-4-5 sets.
double measure_projector_norm(const PeriodicGrid& g,
                              const std::vector<double>& lambdas,
                              int probes, std::uint64_t seed);

// ------------------------ field algebra conveniences ------------------------

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& a);
VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(double s, const VectorField& a);
SymTFField operator+(const SymTFField& a, const SymTFField& b);
SymTFField operator-(const SymTFField& a, const SymTFField& b);
SymTFField operator*(double s, const SymTFField& a);

/// Random real band-limited field with |m| <= radius, unit-normalized in C0;
/// divergence-free when solenoidal is set. Deterministic in the seed.
VectorField random_band_field(const PeriodicGrid& g, double radius,
                              std::uint64_t seed, bool solenoidal);
ScalarField random_band_scalar(const PeriodicGrid& g, double radius,
                               std::uint64_t seed);

/// Direct evaluation of a (sparse) field at arbitrary points; cost is
/// #nonzero-modes x #points. Points are (x,y) pairs, flattened.
void eval_at_points(const ScalarField& f, const std::vector<double>& xy,
                    std::vector<cplx>& out);

}  // namespace msqg
