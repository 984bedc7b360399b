#ifndef GAMOW_QUADRATURE_HPP
#define GAMOW_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "gamow/types.hpp"

namespace gamow {
namespace num {

inline constexpr double pi = 3.141592653589793238462643383279502884;

namespace detail {

// 15-point Kronrod rule with embedded 7-point Gauss rule (positive abscissae).
inline constexpr double gk_x[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double gk_wk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double gk_wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelResult {
    cplx integral;
    double error;
};

template <class F>
PanelResult gk15(const F &f, double a, double b) {
    const double h = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    cplx fc = f(mid);
    cplx ik = gk_wk[7] * fc;
    cplx ig = gk_wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * gk_x[j];
        const cplx fsum = f(mid - dx) + f(mid + dx);
        ik += gk_wk[j] * fsum;
        if (j % 2 == 1) ig += gk_wg[j / 2] * fsum;
    }
    ik *= h;
    ig *= h;
    return {ik, std::abs(ik - ig)};
}

struct Segment {
    double a, b;
    cplx integral;
    double error;
};

} // namespace detail

/// Adaptive quadrature of a complex-valued f over [a, b].
/// Interior breakpoints force panel edges (used for piecewise integrands and
/// oscillation splitting). Throws NonConvergence past the subdivision budget.
template <class F>
cplx quad_interval(const F &f, double a, double b,
                   const QuadratureSettings &settings = {},
                   const std::vector<double> &breakpoints = {}) {
    if (!(a < b)) {
        if (a == b) return {0.0, 0.0};
        throw DomainViolation("quad_interval: a > b");
    }

    std::vector<detail::Segment> segs;
    {
        std::vector<double> edges;
        edges.push_back(a);
        for (double x : breakpoints)
            if (x > a && x < b) edges.push_back(x);
        edges.push_back(b);
        std::sort(edges.begin(), edges.end());
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
            if (edges[i + 1] - edges[i] <= 0.0) continue;
            auto r = detail::gk15(f, edges[i], edges[i + 1]);
            segs.push_back({edges[i], edges[i + 1], r.integral, r.error});
        }
    }

    auto totals = [&segs]() {
        cplx sum = 0.0;
        double err = 0.0;
        for (const auto &s : segs) {
            sum += s.integral;
            err += s.error;
        }
        return std::pair<cplx, double>(sum, err);
    };

    for (std::size_t iter = 0; iter < settings.max_subdivisions; ++iter) {
        auto [sum, err] = totals();
        if (err <= std::max(settings.abs_tol, settings.rel_tol * std::abs(sum)))
            return sum;

        std::size_t worst = 0;
        for (std::size_t i = 1; i < segs.size(); ++i)
            if (segs[i].error > segs[worst].error) worst = i;

        const double wa = segs[worst].a, wb = segs[worst].b;
        const double wm = 0.5 * (wa + wb);
        if (wm <= wa || wm >= wb)
            return sum; // panel at floating-point resolution, error is what it is
        auto left = detail::gk15(f, wa, wm);
        auto right = detail::gk15(f, wm, wb);
        segs[worst] = {wa, wm, left.integral, left.error};
        segs.push_back({wm, wb, right.integral, right.error});
    }

    auto [sum, err] = totals();
    if (err <= std::max(settings.abs_tol, settings.rel_tol * std::abs(sum)))
        return sum;
    throw NonConvergence("quad_interval: error " + std::to_string(err) +
                         " after max_subdivisions");
}

/// Piecewise-smooth oriented path in the complex plane. Each piece carries its
/// parametrization and exact derivative on t in [0, 1].
struct Contour {
    struct Piece {
        std::function<cplx(double)> gamma;
        std::function<cplx(double)> dgamma;
    };
    std::vector<Piece> pieces;

    static Contour segment(cplx z0, cplx z1) {
        Contour c;
        c.pieces.push_back({[z0, z1](double t) { return z0 + t * (z1 - z0); },
                            [z0, z1](double) { return z1 - z0; }});
        return c;
    }

    static Contour circle(cplx center, double radius) {
        // counterclockwise, full turn
        Contour c;
        c.pieces.push_back(
            {[center, radius](double t) {
                 return center + radius * std::exp(I * (2.0 * num::pi * t));
             },
             [center, radius](double t) {
                 return radius * 2.0 * num::pi * I * std::exp(I * (2.0 * num::pi * t));
             }});
        return c;
    }

    static Contour rectangle(const Region &r) {
        // counterclockwise from the lower-left corner
        const cplx c1{r.re_min, r.im_min}, c2{r.re_max, r.im_min};
        const cplx c3{r.re_max, r.im_max}, c4{r.re_min, r.im_max};
        Contour c;
        for (auto [z0, z1] : {std::pair{c1, c2}, {c2, c3}, {c3, c4}, {c4, c1}})
            c.pieces.push_back(segment(z0, z1).pieces[0]);
        return c;
    }

    Contour &append(const Contour &other) {
        for (const auto &p : other.pieces) pieces.push_back(p);
        return *this;
    }
};

/// Contour integral of f along a parametric path.
template <class F>
cplx quad_contour(const F &f, const Contour &contour,
                  const QuadratureSettings &settings = {}) {
    cplx sum = 0.0;
    for (const auto &p : contour.pieces) {
        sum += quad_interval(
            [&](double t) { return f(p.gamma(t)) * p.dgamma(t); }, 0.0, 1.0,
            settings);
    }
    return sum;
}

/// Fixed quadrature nodes covering [a, b]: GK15 panels no longer than max_len,
/// with panel edges forced at the breakpoints. For families of smooth
/// integrands evaluated at many parameters (pairing integrals along contours,
/// spectral tables) the fixed rule amortizes where adaptivity cannot.
struct FixedRule {
    std::vector<double> x, w;
};

inline FixedRule fixed_rule(double a, double b, double max_len,
                            const std::vector<double> &breakpoints = {}) {
    if (!(a < b)) throw DomainViolation("fixed_rule: need a < b");
    if (!(max_len > 0.0)) throw DomainViolation("fixed_rule: need max_len > 0");
    std::vector<double> edges{a};
    for (double x : breakpoints)
        if (x > a && x < b) edges.push_back(x);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    FixedRule rule;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double len = edges[i + 1] - edges[i];
        if (len <= 0.0) continue;
        const int panels = std::max(1, int(std::ceil(len / max_len)));
        for (int p = 0; p < panels; ++p) {
            const double pa = edges[i] + len * p / panels;
            const double pb = edges[i] + len * (p + 1) / panels;
            const double h = 0.5 * (pb - pa);
            const double mid = 0.5 * (pa + pb);
            rule.x.push_back(mid);
            rule.w.push_back(h * detail::gk_wk[7]);
            for (int j = 0; j < 7; ++j) {
                const double dx = h * detail::gk_x[j];
                rule.x.push_back(mid - dx);
                rule.w.push_back(h * detail::gk_wk[j]);
                rule.x.push_back(mid + dx);
                rule.w.push_back(h * detail::gk_wk[j]);
            }
        }
    }
    return rule;
}

/// Residue of f at `center` by an n-point trapezoid on a small circle.
/// Spectrally accurate for f analytic on the annulus around the pole.
template <class F>
cplx residue_trapezoid(const F &f, cplx center, double radius, int n = 64) {
    cplx sum = 0.0;
    for (int j = 0; j < n; ++j) {
        const double th = 2.0 * num::pi * j / n;
        const cplx w = radius * std::exp(I * th);
        sum += f(center + w) * w;
    }
    return sum / static_cast<double>(n);
}

} // namespace num
} // namespace gamow

#endif
