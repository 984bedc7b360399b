#ifndef GAMOW_TYPES_HPP
#define GAMOW_TYPES_HPP

#include <complex>
#include <cstddef>

#include "gamow/errors.hpp"

namespace gamow {

using cplx = std::complex<double>;

inline constexpr cplx I{0.0, 1.0};

struct PhysConsts {
    double hbar = 1.0;
    double mass = 0.5; // with hbar = 1 this makes E = k^2

    PhysConsts() = default;
    PhysConsts(double hb, double m) : hbar(hb), mass(m) {
        if (!(hbar > 0.0) || !(mass > 0.0))
            throw DomainViolation("PhysConsts: hbar and mass must be positive");
    }

    // 2m/hbar^2, the factor the radial equation actually uses
    double two_m_over_hbar2() const { return 2.0 * mass / (hbar * hbar); }
};

// Axis-aligned rectangle in the complex q plane.
struct Region {
    double re_min, re_max;
    double im_min, im_max;

    Region(double a, double b, double c, double d)
        : re_min(a), re_max(b), im_min(c), im_max(d) {
        if (!(re_min < re_max) || !(im_min < im_max))
            throw DomainViolation("Region: empty or inverted rectangle");
    }

    bool contains(cplx q) const {
        return q.real() >= re_min && q.real() <= re_max &&
               q.imag() >= im_min && q.imag() <= im_max;
    }
    cplx center() const { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }
    double width() const { return re_max - re_min; }
    double height() const { return im_max - im_min; }
};

struct QuadratureSettings {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    std::size_t max_subdivisions = 2000;
    bool oscillation_splitting = false;
};

// Riemann sheet of E <-> q: sheet I is Im q >= 0, sheet II is Im q < 0.
enum class Sheet { one, two };

struct EnergyPoint {
    cplx z;
    Sheet sheet = Sheet::one;
};

} // namespace gamow

#endif
