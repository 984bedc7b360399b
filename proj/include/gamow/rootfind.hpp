#ifndef GAMOW_ROOTFIND_HPP
#define GAMOW_ROOTFIND_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "gamow/quadrature.hpp"
#include "gamow/types.hpp"

namespace gamow {
namespace num {

namespace detail {

// Relative floor under which a boundary sample counts as "zero on the edge".
inline constexpr double boundary_floor_rel = 1e-13;

template <class F>
void check_boundary_floor(const F &f, const Region &region, int samples_per_edge) {
    const cplx corners[4] = {{region.re_min, region.im_min},
                             {region.re_max, region.im_min},
                             {region.re_max, region.im_max},
                             {region.re_min, region.im_max}};
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (int e = 0; e < 4; ++e) {
        const cplx z0 = corners[e], z1 = corners[(e + 1) % 4];
        for (int j = 0; j <= samples_per_edge; ++j) {
            const double t = static_cast<double>(j) / samples_per_edge;
            const double a = std::abs(f(z0 + t * (z1 - z0)));
            if (first) {
                lo = hi = a;
                first = false;
            } else {
                lo = std::min(lo, a);
                hi = std::max(hi, a);
            }
        }
    }
    if (hi == 0.0 || lo < boundary_floor_rel * hi)
        throw BoundaryZero("count_zeros: |f| below floor on region boundary (min " +
                           std::to_string(lo) + ", max " + std::to_string(hi) + ")");
}

} // namespace detail

/// Number of zeros of f (with derivative df) inside a rectangle, by the
/// argument principle. Pre: f analytic on the closed region, no zeros on the
/// boundary. Throws BoundaryZero / Inconclusive / NonConvergence.
template <class F, class DF>
int count_zeros(const F &f, const DF &df, const Region &region,
                const QuadratureSettings &settings = {}) {
    detail::check_boundary_floor(f, region, 96);

    // The winding number only has to land within 0.1 of an integer, so the
    // contour quadrature runs at a loose tolerance.
    const QuadratureSettings s{std::max(settings.abs_tol, 1e-5), 1e-6,
                               settings.max_subdivisions, false};
    const cplx w = quad_contour([&](cplx q) { return df(q) / f(q); },
                                Contour::rectangle(region), s) /
                   (2.0 * M_PI * I);
    const double n = std::round(w.real());
    if (std::abs(w - n) > 0.1)
        throw Inconclusive("count_zeros: winding " + std::to_string(w.real()) + "+" +
                           std::to_string(w.imag()) + "i not near an integer");
    return static_cast<int>(n);
}

/// Newton refinement of a zero of f from q0. Converges when both the step and
/// |f| are at tolerance; throws DerivativeVanishes / NonConvergence.
template <class F, class DF>
cplx refine_zero(const F &f, const DF &df, cplx q0, double tol = 1e-12,
                 int max_iter = 60) {
    cplx q = q0;
    double fscale = std::abs(f(q0));
    if (fscale == 0.0) return q0;
    for (int it = 0; it < max_iter; ++it) {
        const cplx fq = f(q);
        const cplx dq = df(q);
        if (std::abs(dq) < 1e-300 * (1.0 + std::abs(fq)))
            throw DerivativeVanishes("refine_zero: f' vanished at " +
                                     std::to_string(q.real()) + "+" +
                                     std::to_string(q.imag()) + "i");
        const cplx step = fq / dq;
        q -= step;
        if (std::abs(step) <= tol * (1.0 + std::abs(q)) &&
            std::abs(f(q)) <= 1e-6 * fscale)
            return q;
    }
    throw NonConvergence("refine_zero: no convergence from " +
                         std::to_string(q0.real()) + "+" +
                         std::to_string(q0.imag()) + "i");
}

/// Derivative of analytic f at q by Richardson-extrapolated central
/// differences (Ridders' scheme). Step h0 shrinks geometrically; returns the
/// entry with the smallest error estimate.
template <class F>
cplx derivative(const F &f, cplx q, double h0 = 1e-2) {
    constexpr int ntab = 12;
    constexpr double shrink = 1.6;
    cplx tab[ntab][ntab];
    double h = h0;
    tab[0][0] = (f(q + h) - f(q - h)) / (2.0 * h);
    cplx best = tab[0][0];
    double best_err = 1e300;
    for (int i = 1; i < ntab; ++i) {
        h /= shrink;
        tab[0][i] = (f(q + h) - f(q - h)) / (2.0 * h);
        double fac = shrink * shrink;
        for (int j = 1; j <= i; ++j) {
            tab[j][i] = (tab[j - 1][i] * fac - tab[j - 1][i - 1]) / (fac - 1.0);
            fac *= shrink * shrink;
            const double err = std::max(std::abs(tab[j][i] - tab[j - 1][i]),
                                        std::abs(tab[j][i] - tab[j - 1][i - 1]));
            if (err <= best_err) {
                best_err = err;
                best = tab[j][i];
            }
        }
        if (std::abs(tab[i][i] - tab[i - 1][i - 1]) >= 2.0 * best_err) break;
    }
    return best;
}

/// All zeros of f in a rectangle: recursive bisection certified by count_zeros,
/// Newton refinement once a subregion holds a single zero. Deterministic.
template <class F, class DF>
std::vector<cplx> find_zeros_in_region(const F &f, const DF &df,
                                       const Region &region,
                                       double refine_tol = 1e-12) {
    std::vector<cplx> zeros;

    auto recurse = [&](const Region &r, auto &&self) -> void {
        const int n = count_zeros(f, df, r);
        if (n == 0) return;

        if (n == 1) {
            // Slightly widened acceptance box: a refined zero may round onto
            // the cell edge.
            try {
                const cplx z = refine_zero(f, df, r.center(), refine_tol);
                const double mx = 1e-9 * (1.0 + r.width());
                const double my = 1e-9 * (1.0 + r.height());
                if (z.real() >= r.re_min - mx && z.real() <= r.re_max + mx &&
                    z.imag() >= r.im_min - my && z.imag() <= r.im_max + my) {
                    zeros.push_back(z);
                    return;
                }
            } catch (const NonConvergence &) {
            } catch (const DerivativeVanishes &) {
            }
            // fall through: shrink the cell around the zero and retry
        }

        if (r.width() < 1e-9 && r.height() < 1e-9)
            throw Inconclusive("find_zeros_in_region: unresolved zero cluster near " +
                               std::to_string(r.center().real()) + "+" +
                               std::to_string(r.center().imag()) + "i");

        // Split along the longer axis; a jittered fraction dodges zeros that
        // sit on the first cut line. One retry, then the failure surfaces.
        const std::size_t keep = zeros.size();
        for (double frac : {0.5, 0.4621}) {
            zeros.resize(keep);
            Region r1 = r, r2 = r;
            if (r.width() >= r.height()) {
                const double xm = r.re_min + frac * r.width();
                r1 = Region(r.re_min, xm, r.im_min, r.im_max);
                r2 = Region(xm, r.re_max, r.im_min, r.im_max);
            } else {
                const double ym = r.im_min + frac * r.height();
                r1 = Region(r.re_min, r.re_max, r.im_min, ym);
                r2 = Region(r.re_min, r.re_max, ym, r.im_max);
            }
            try {
                self(r1, self);
                self(r2, self);
                return;
            } catch (const BoundaryZero &) {
                if (frac != 0.5) throw;
            } catch (const Inconclusive &) {
                if (frac != 0.5) throw;
            } catch (const NonConvergence &) {
                if (frac != 0.5) throw;
            }
        }
        return; // unreachable
    };
    recurse(region, recurse);

    std::sort(zeros.begin(), zeros.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    std::vector<cplx> unique;
    for (cplx z : zeros) {
        bool dup = false;
        for (cplx u : unique)
            if (std::abs(z - u) < 1e-8) dup = true;
        if (!dup) unique.push_back(z);
    }
    return unique;
}

} // namespace num
} // namespace gamow

#endif
