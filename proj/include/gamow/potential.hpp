#ifndef GAMOW_POTENTIAL_HPP
#define GAMOW_POTENTIAL_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "gamow/types.hpp"

namespace gamow {

enum class Geometry { radial, line };

// Piecewise-constant potential: M boundaries cut the domain into M+1 layers
// with heights V_0 .. V_M. The outermost layer is free (V_M = 0); on the full
// line the leftmost layer is free as well, so scattering has plane-wave
// asymptotics on both ends.
struct PiecewiseConstantPotential {
    Geometry geometry = Geometry::radial;
    std::vector<double> boundaries;
    std::vector<double> heights;

    PiecewiseConstantPotential(Geometry geo, std::vector<double> bounds,
                               std::vector<double> hts)
        : geometry(geo), boundaries(std::move(bounds)), heights(std::move(hts)) {
        if (boundaries.empty())
            throw DomainViolation("potential: need at least one boundary");
        if (heights.size() != boundaries.size() + 1)
            throw DomainViolation("potential: need exactly boundaries+1 heights");
        for (std::size_t j = 0; j + 1 < boundaries.size(); ++j)
            if (!(boundaries[j] < boundaries[j + 1]))
                throw DomainViolation("potential: boundaries must increase strictly");
        if (geometry == Geometry::radial && !(boundaries.front() > 0.0))
            throw DomainViolation("potential: radial boundaries must be positive");
        if (heights.back() != 0.0)
            throw DomainViolation("potential: outermost layer must be free");
        if (geometry == Geometry::line && heights.front() != 0.0)
            throw DomainViolation("potential: line geometry needs a free left end");
    }

    std::size_t layers() const { return heights.size(); }

    // index of the layer containing x; boundary points belong to the right layer
    std::size_t layer_index(double x) const {
        std::size_t j = 0;
        while (j < boundaries.size() && x >= boundaries[j]) ++j;
        return j;
    }

    double operator()(double x) const { return heights[layer_index(x)]; }

    // left edge of layer j (r = 0 for the innermost radial layer)
    double left_edge(std::size_t j) const {
        if (j == 0) return geometry == Geometry::radial
                               ? 0.0
                               : boundaries.front() - 1.0; // no natural left edge
        return boundaries[j - 1];
    }
};

/// Standard shell: free well 0 < r < a, barrier of height v0 on (a, b), free
/// outside.
inline PiecewiseConstantPotential shell_potential(double a = 1.0, double b = 2.0,
                                                  double v0 = 10.0) {
    return {Geometry::radial, {a, b}, {0.0, v0, 0.0}};
}

/// Standard 1D barrier on (a, b) of height v0, free elsewhere.
inline PiecewiseConstantPotential barrier_potential(double a = 0.0, double b = 1.0,
                                                    double v0 = 5.0) {
    return {Geometry::line, {a, b}, {0.0, v0, 0.0}};
}

// Per-layer wavenumbers kappa_j with kappa_j^2 = q^2 - 2m V_j / hbar^2.
// Free layers carry kappa = q exactly (no square root is taken), which pins the
// exterior branch; barrier layers use the principal square root. The physics
// depends only on kappa^2, so the branch choice is a representation detail.
struct LayerWaveNumbers {
    cplx q;
    std::vector<cplx> kappa;
    std::vector<cplx> kappa_sq;
};

inline LayerWaveNumbers layer_wavenumbers(cplx q,
                                          const PiecewiseConstantPotential &pot,
                                          const PhysConsts &consts) {
    LayerWaveNumbers lw;
    lw.q = q;
    lw.kappa.reserve(pot.layers());
    lw.kappa_sq.reserve(pot.layers());
    for (double v : pot.heights) {
        const cplx w = q * q - consts.two_m_over_hbar2() * v;
        lw.kappa_sq.push_back(w);
        lw.kappa.push_back(v == 0.0 ? q : std::sqrt(w));
    }
    return lw;
}

/// q on the requested energy sheet: sheet I has Im q >= 0, sheet II has
/// Im q < 0 (real positive E maps to -sqrt(E) there, the lower-lip limit).
inline cplx wavenumber_of_energy(cplx z, Sheet sheet, const PhysConsts &consts) {
    if (sheet == Sheet::two && std::abs(z) < 1e-300)
        throw BranchPointError("wavenumber_of_energy: z = 0 is the branch point");
    cplx q = std::sqrt(consts.two_m_over_hbar2() * z);
    if (q.imag() < 0.0) q = -q; // principal sqrt put us on the wrong half plane
    if (q.imag() == 0.0) q = cplx(std::abs(q.real()), 0.0);
    return sheet == Sheet::one ? q : -q;
}

inline cplx wavenumber_of_energy(const EnergyPoint &e, const PhysConsts &consts) {
    return wavenumber_of_energy(e.z, e.sheet, consts);
}

inline EnergyPoint energy_of_wavenumber(cplx q, const PhysConsts &consts) {
    return {q * q / consts.two_m_over_hbar2(),
            q.imag() >= 0.0 ? Sheet::one : Sheet::two};
}

} // namespace gamow

#endif
