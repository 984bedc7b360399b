#ifndef GAMOW_TESTFUNCTION_HPP
#define GAMOW_TESTFUNCTION_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "gamow/potential.hpp"
#include "gamow/quadrature.hpp"
#include "gamow/types.hpp"

namespace gamow {

namespace detail {

// Polynomials are stored as coefficient vectors in powers of u = x - c.
inline double poly_eval(const std::vector<double> &p, double u) {
    double v = 0.0;
    for (std::size_t i = p.size(); i-- > 0;) v = v * u + p[i];
    return v;
}

inline std::vector<double> poly_derivative(const std::vector<double> &p) {
    if (p.size() <= 1) return {0.0};
    std::vector<double> d(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = double(i) * p[i];
    return d;
}

// (x - c)^p expanded around a different center is not needed; what we need is
// x^p = (u + c)^p in powers of u.
inline std::vector<double> binomial_shift(int p, double c) {
    std::vector<double> out(std::size_t(p) + 1, 0.0);
    double coeff = 1.0; // binomial(p, j) * c^(p-j)
    for (int j = 0; j <= p; ++j) {
        out[std::size_t(j)] = coeff * std::pow(c, double(p - j));
        coeff *= double(p - j) / double(j + 1);
    }
    // pow(0,0) = 1 keeps the j = p term right even at c = 0
    if (c == 0.0) {
        std::fill(out.begin(), out.end(), 0.0);
        out[std::size_t(p)] = 1.0;
    }
    return out;
}

} // namespace detail

// Optional analytic energy-space profile f(z) = poly(z) * exp(-(z-z0)^2/s^2),
// evaluated off the real axis for pairings with complex-delta functionals.
struct EnergyProfile {
    std::vector<double> poly{1.0};
    bool has_gaussian = false;
    double center = 0.0;
    double width = 1.0;

    cplx operator()(cplx z) const {
        cplx v{0.0, 0.0};
        for (std::size_t i = poly.size(); i-- > 0;) v = v * z + poly[i];
        if (has_gaussian) {
            const cplx u = (z - center) / width;
            v *= std::exp(-u * u);
        }
        return v;
    }
};

// Gaussian-falloff test function: a sum of atoms P(x-c) exp(-(x-c)^2/sigma^2).
// The single-atom family C r^p exp(-(r-c)^2/sigma^2) covers the radial case;
// mirrored two-atom sums give definite parity on the full line. Derivatives up
// to order 4 stay inside the family (P -> P' - 2u P / sigma^2) and are
// precomputed symbolically, never by finite differences.
class TestFunction {
  public:
    struct Atom {
        std::vector<double> poly; // in powers of u = x - c, normalization folded in
        double c = 0.0;
        double sigma = 1.0;
        std::array<std::vector<double>, 5> dpoly; // derivative-order polynomials
    };

    Geometry geometry = Geometry::radial;
    int p = 0;          // family exponent of the defining call (tag metadata)
    double c = 0.0;     // family center
    double sigma = 0.0; // family width
    std::optional<EnergyProfile> energy_profile;

    TestFunction(Geometry geo, std::vector<Atom> atoms_in)
        : geometry(geo), atoms_(std::move(atoms_in)) {
        for (auto &a : atoms_) {
            if (!(a.sigma > 0.0))
                throw DomainViolation("test function: sigma must be positive");
            a.dpoly[0] = a.poly;
            for (int n = 1; n <= 4; ++n)
                a.dpoly[std::size_t(n)] =
                    next_derivative(a.dpoly[std::size_t(n - 1)], a.sigma);
        }
        double lo = atoms_.front().c, hi = lo;
        for (const auto &a : atoms_) {
            lo = std::min(lo, a.c - 27.0 * a.sigma);
            hi = std::max(hi, a.c + 27.0 * a.sigma);
        }
        if (geometry == Geometry::radial) lo = std::max(lo, 0.0);
        support_lo_ = lo;
        support_hi_ = hi;
        peak_ = scan_peak();
    }

    double operator()(double x) const { return deriv(x, 0); }

    double deriv(double x, int n) const {
        double v = 0.0;
        for (const auto &a : atoms_) {
            const double u = x - a.c;
            const double g = u * u / (a.sigma * a.sigma);
            if (g > 700.0) continue;
            v += detail::poly_eval(a.dpoly[std::size_t(n)], u) * std::exp(-g);
        }
        return v;
    }

    double support_lo() const { return support_lo_; }
    double support_hi() const { return support_hi_; }
    double peak() const { return peak_; }
    const std::vector<Atom> &atoms() const { return atoms_; }

    void rescale(double s) {
        for (auto &a : atoms_)
            for (auto &dp : a.dpoly)
                for (double &co : dp) co *= s;
        for (auto &a : atoms_)
            for (double &co : a.poly) co *= s;
        peak_ *= std::abs(s);
    }

    // Truncation radius R for integrals of phi against e^{beta x}-growing
    // waves: past R the weighted envelope is below ~1e-35 of its own peak.
    // The weighted Gaussian peaks at c + beta sigma^2/2; we step ~9 sigma
    // beyond that plus a polynomial allowance.
    double pairing_radius(double beta) const {
        double r = support_lo_;
        for (const auto &a : atoms_) {
            const double shift = a.c + 0.5 * beta * a.sigma * a.sigma;
            const double peak_exponent =
                beta * a.c + 0.25 * beta * beta * a.sigma * a.sigma;
            if (peak_exponent > 650.0)
                throw TruncationFailure(
                    "pairing envelope overflows for this Im q and sigma");
            const double slack =
                std::sqrt(80.0 + 2.0 * double(a.poly.size()));
            r = std::max(r, shift + slack * a.sigma);
        }
        return r;
    }

    // sup over a grid of |(1+|x|)^n phi(x)| e^{x^2/(4 sigma_min^2)}; finite for
    // genuinely Gaussian falloff, blows up for anything slower.
    double falloff_sup(int n) const {
        double smin = atoms_.front().sigma;
        for (const auto &a : atoms_) smin = std::min(smin, a.sigma);
        double sup = 0.0;
        const int grid = 4001;
        for (int i = 0; i < grid; ++i) {
            const double x =
                support_lo_ + (support_hi_ - support_lo_) * i / double(grid - 1);
            const double e = x * x / (4.0 * smin * smin);
            if (e > 650.0) continue;
            sup = std::max(sup, std::pow(1.0 + std::abs(x), double(n)) *
                                    std::abs((*this)(x)) * std::exp(e));
        }
        return sup;
    }

  private:
    std::vector<Atom> atoms_;
    double support_lo_ = 0.0, support_hi_ = 0.0, peak_ = 0.0;

    static std::vector<double> next_derivative(const std::vector<double> &poly,
                                               double sigma) {
        // d/dx [P(u) e^{-u^2/s^2}] = [P'(u) - (2u/s^2) P(u)] e^{-u^2/s^2}
        std::vector<double> out(poly.size() + 1, 0.0);
        const std::vector<double> dp = detail::poly_derivative(poly);
        for (std::size_t i = 0; i < dp.size(); ++i) out[i] += dp[i];
        const double f = -2.0 / (sigma * sigma);
        for (std::size_t i = 0; i < poly.size(); ++i) out[i + 1] += f * poly[i];
        return out;
    }

    double scan_peak() const {
        double pk = 0.0;
        const int grid = 8001;
        for (int i = 0; i < grid; ++i) {
            const double x =
                support_lo_ + (support_hi_ - support_lo_) * i / double(grid - 1);
            pk = std::max(pk, std::abs((*this)(x)));
        }
        return pk;
    }
};

namespace detail {

inline void check_negligibility(const TestFunction &tf,
                                const PiecewiseConstantPotential &pot) {
    for (double rj : pot.boundaries) {
        const double v = std::abs(tf(rj));
        if (v >= 1e-13 * tf.peak())
            throw DomainViolation(
                "test function not negligible at the potential discontinuity r = " +
                std::to_string(rj) + " (|phi| / max|phi| = " +
                std::to_string(v / tf.peak()) + ")");
    }
}

inline void normalize_l2(TestFunction &tf) {
    const auto f = [&tf](double x) {
        const double v = tf(x);
        return cplx{v * v, 0.0};
    };
    const double n2 =
        num::quad_interval(f, tf.support_lo(), tf.support_hi()).real();
    tf.rescale(1.0 / std::sqrt(n2));
}

} // namespace detail

/// phi(r) = C r^p exp(-(r-c)^2/sigma^2), L2-normalized; rejected unless it is
/// machine-negligible at every potential discontinuity.
inline TestFunction make_test_function(int p, double c, double sigma,
                                       const PiecewiseConstantPotential &pot) {
    if (p < 1) throw DomainViolation("test function: p must be >= 1");
    if (!(sigma > 0.0)) throw DomainViolation("test function: sigma must be > 0");
    TestFunction::Atom a;
    a.c = c;
    a.sigma = sigma;
    a.poly = detail::binomial_shift(p, c);
    TestFunction tf(pot.geometry, {a});
    tf.p = p;
    tf.c = c;
    tf.sigma = sigma;
    detail::check_negligibility(tf, pot);
    detail::normalize_l2(tf);
    return tf;
}

/// Full-line variant with definite parity about the barrier midpoint:
/// phi(x) = C [g(x) + parity * g(2 x_mid - x)] with g = x^p Gaussian.
inline TestFunction make_parity_test_function(int p, double c, double sigma,
                                              int parity,
                                              const PiecewiseConstantPotential &pot) {
    if (pot.geometry != Geometry::line)
        throw DomainViolation("parity test function needs line geometry");
    if (parity != 1 && parity != -1)
        throw DomainViolation("parity must be +1 or -1");
    if (p < 1) throw DomainViolation("test function: p must be >= 1");
    const double xmid =
        0.5 * (pot.boundaries.front() + pot.boundaries.back());
    TestFunction::Atom a;
    a.c = c;
    a.sigma = sigma;
    a.poly = detail::binomial_shift(p, c);
    // mirror image under x -> 2 xmid - x: center reflects, odd u-powers flip
    TestFunction::Atom b;
    b.c = 2.0 * xmid - c;
    b.sigma = sigma;
    b.poly = a.poly;
    for (std::size_t i = 0; i < b.poly.size(); ++i) {
        b.poly[i] *= double(parity);
        if (i % 2 == 1) b.poly[i] = -b.poly[i];
    }
    TestFunction tf(Geometry::line, {a, b});
    tf.p = p;
    tf.c = c;
    tf.sigma = sigma;
    detail::check_negligibility(tf, pot);
    detail::normalize_l2(tf);
    return tf;
}

// H phi and H^2 phi inside each layer (V is constant there):
//   H phi   = -alpha phi'' + V phi
//   H^2 phi = alpha^2 phi'''' - 2 alpha V phi'' + V^2 phi,  alpha = hbar^2/2m.
// Valid because accepted test functions are machine-zero at the V jumps.
struct HamiltonianImage {
    const TestFunction *tf;
    const PiecewiseConstantPotential *pot;
    double alpha;
    int times;

    double operator()(double x) const {
        const double v = (*pot)(x);
        if (times == 1) return -alpha * tf->deriv(x, 2) + v * tf->deriv(x, 0);
        return alpha * alpha * tf->deriv(x, 4) -
               2.0 * alpha * v * tf->deriv(x, 2) + v * v * tf->deriv(x, 0);
    }
};

inline HamiltonianImage hamiltonian_image(const TestFunction &tf,
                                          const PiecewiseConstantPotential &pot,
                                          const PhysConsts &consts, int times) {
    if (times != 1 && times != 2)
        throw DomainViolation("apply_hamiltonian: times must be 1 or 2");
    return {&tf, &pot, consts.hbar * consts.hbar / (2.0 * consts.mass), times};
}

inline std::vector<double> apply_hamiltonian(const TestFunction &tf,
                                             const PiecewiseConstantPotential &pot,
                                             const PhysConsts &consts, int times,
                                             const std::vector<double> &grid) {
    const HamiltonianImage h = hamiltonian_image(tf, pot, consts, times);
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = h(grid[i]);
    return out;
}

} // namespace gamow

#endif
