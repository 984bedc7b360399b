#ifndef GAMOW_RESONANCE_HPP
#define GAMOW_RESONANCE_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "gamow/potential.hpp"
#include "gamow/quadrature.hpp"
#include "gamow/radial.hpp"
#include "gamow/rootfind.hpp"
#include "gamow/testfunction.hpp"
#include "gamow/types.hpp"

namespace gamow {

// A simple zero k_n of Jplus in the lower half plane. n > 0 labels resonances
// (Re k > 0), n < 0 their mirror anti-resonances at -conj(k_n). The associated
// sheet-II energy is z_n = hbar^2 k_n^2 / 2m with E_n = Re z_n and width
// Gamma_n = -2 Im z_n. N_sq = i res_S normalizes the Gamow state.
struct Resonance {
    int n = 0;
    cplx k{};
    cplx z{};
    cplx res_S{};
    cplx N_sq{};

    double energy() const { return z.real(); }
    double width() const { return -2.0 * z.imag(); }
};

namespace detail {

inline cplx contour_residue_smatrix(cplx k, const PiecewiseConstantPotential &pot,
                                    const PhysConsts &consts,
                                    double radius = 1e-3, int n = 64) {
    const auto s = [&](cplx q) { return jost(q, pot, consts).S; };
    return num::residue_trapezoid(s, k, radius, n);
}

} // namespace detail

/// Residue of S at a certified simple zero of Jplus: Jminus/dJplus, cross
/// checked against the contour integral (1/2 pi i) closed-circle S dq.
inline cplx residue_smatrix(cplx k, const PiecewiseConstantPotential &pot,
                            const PhysConsts &consts) {
    const JostData jd = jost(k, pot, consts);
    if (std::abs(jd.Jplus) > 1e-8 * std::max(1.0, std::abs(jd.Jminus)))
        throw DomainViolation("residue_smatrix: Jplus does not vanish here");
    if (std::abs(jd.dJplus) < 1e-14)
        throw MultiplePole("residue_smatrix: dJplus vanishes (multiple zero?)");
    const cplx analytic = jd.Jminus / jd.dJplus;
    const cplx contour = detail::contour_residue_smatrix(k, pot, consts);
    if (std::abs(analytic - contour) > 1e-4 * std::abs(analytic))
        throw MultiplePole(
            "residue_smatrix: contour and derivative residues disagree");
    return analytic;
}

struct ResonanceSearch {
    std::vector<Resonance> resonances;      // n = 1, 2, ... ascending Re k
    std::vector<Resonance> anti_resonances; // n = -1, -2, ... mirror order
    std::vector<cplx> other_zeros;          // threshold/imaginary-axis zeros
};

/// Search window holding every pole of the standard shell that matters at
/// default precision; deeper or farther poles are reachable by config.
inline Region default_search_region() { return Region{0.05, 6.0, -1.5, -1e-8}; }

/// All simple zeros of Jplus inside the region, certified by the winding
/// count, refined by Newton, classified by quadrant, and residue-normalized.
inline ResonanceSearch find_resonances(const Region &region,
                                       const PiecewiseConstantPotential &pot,
                                       const PhysConsts &consts,
                                       double refine_tol = 1e-12) {
    const auto f = [&](cplx q) { return jost(q, pot, consts).Jplus; };
    const auto df = [&](cplx q) { return jost(q, pot, consts).dJplus; };
    const std::vector<cplx> zeros =
        num::find_zeros_in_region(f, df, region, refine_tol);

    ResonanceSearch out;
    std::vector<cplx> res_k, anti_k;
    for (cplx k : zeros) {
        if (k.imag() < 0.0 && k.real() > 1e-8)
            res_k.push_back(k);
        else if (k.imag() < 0.0 && k.real() < -1e-8)
            anti_k.push_back(k);
        else
            out.other_zeros.push_back(k);
    }
    std::sort(res_k.begin(), res_k.end(),
              [](cplx a, cplx b) { return a.real() < b.real(); });
    std::sort(anti_k.begin(), anti_k.end(),
              [](cplx a, cplx b) { return a.real() > b.real(); });

    const auto build = [&](cplx k, int n) {
        Resonance r;
        r.n = n;
        r.k = k;
        r.z = k * k / consts.two_m_over_hbar2();
        r.res_S = residue_smatrix(k, pot, consts);
        r.N_sq = I * r.res_S;
        return r;
    };
    for (std::size_t i = 0; i < res_k.size(); ++i)
        out.resonances.push_back(build(res_k[i], int(i) + 1));
    for (std::size_t i = 0; i < anti_k.size(); ++i)
        out.anti_resonances.push_back(build(anti_k[i], -int(i) - 1));
    return out;
}

// Gamow eigensolution u_n = (N_n / J3(k_n)) chi(r; k_n): interior values ride
// on the stable regular-solution data; outside the potential the form is
// EXACTLY N_n e^{i k_n r} (purely outgoing), since J4(k_n) = 0 defines k_n.
class GamowState {
  public:
    Resonance res;
    cplx N;     // principal sqrt of N_sq; every physical output uses N^2
    cplx scale; // N / J3(k_n)

    GamowState(const Resonance &r, const PiecewiseConstantPotential &pot,
               const PhysConsts &consts)
        : res(r), sol_(r.k, pot, consts) {
        N = std::sqrt(r.N_sq);
        scale = N / sol_.J3;
        outer_ = pot.boundaries.back();
    }

    // The sign of N is a branch choice; bra*ket products must not feel it.
    GamowState flipped() const {
        GamowState g(*this);
        g.N = -g.N;
        g.scale = -g.scale;
        return g;
    }

    cplx operator()(double r) const {
        if (r >= outer_) return N * std::exp(I * res.k * r);
        return scale * sol_.eval(r);
    }

    cplx deriv(double r) const {
        if (r >= outer_) return I * res.k * N * std::exp(I * res.k * r);
        return scale * sol_.eval_deriv(r);
    }

    cplx second_deriv(double r) const {
        if (r >= outer_) return -res.k * res.k * N * std::exp(I * res.k * r);
        return scale * sol_.eval_second(r);
    }

    // -(hbar^2/2m) u'' + V u - z_n u, zero in exact arithmetic
    cplx schroedinger_residual(double r) const {
        const PhysConsts &c = sol_.consts;
        const double alpha = c.hbar * c.hbar / (2.0 * c.mass);
        return -alpha * second_deriv(r) + sol_.pot(r) * (*this)(r) -
               res.z * (*this)(r);
    }

    const RegularSolution &regular() const { return sol_; }

    // per-layer exponential amplitudes of u_n (exterior pair exactly (N, 0))
    RegularCoeffs coefficients() const {
        RegularCoeffs rc = regular_coeffs(sol_);
        for (auto &c : rc.cplus) c *= scale;
        for (auto &c : rc.cminus) c *= scale;
        rc.cplus.back() = N;
        rc.cminus.back() = cplx{0.0, 0.0};
        return rc;
    }

  private:
    RegularSolution sol_;
    double outer_;
};

inline GamowState gamow_state(const Resonance &res,
                              const PiecewiseConstantPotential &pot,
                              const PhysConsts &consts) {
    return GamowState(res, pot, consts);
}

/// Per-pole defects of the two identities tying u_n to the continued
/// eigenfunctions, each the worst relative deviation over the sample radii:
/// u = i sqrt(2 pi) N chi^-(r;k_n) (value identity) and
/// u = -(sqrt(2 pi)/N) res[chi^+(r;.)] at k_n (contour residue, radius 1e-3).
struct GamowIdentityDefects {
    double value_identity = 0.0;
    double residue_identity = 0.0;
};

inline GamowIdentityDefects residue_relation_defect(
    const Resonance &res, const std::vector<double> &r_samples,
    const PiecewiseConstantPotential &pot, const PhysConsts &consts) {
    const GamowState gs(res, pot, consts);
    const cplx jminus = gs.regular().jminus();

    // cache the contour solutions once; reuse for every radius
    const int npts = 64;
    const double radius = 1e-3;
    std::vector<RegularSolution> ring;
    std::vector<cplx> offsets;
    ring.reserve(npts);
    for (int j = 0; j < npts; ++j) {
        const double th = 2.0 * num::pi * j / npts;
        const cplx w = radius * std::exp(I * th);
        ring.emplace_back(res.k + w, pot, consts);
        offsets.push_back(w);
    }

    GamowIdentityDefects out;
    for (double r : r_samples) {
        const cplx u = gs(r);
        const double uscale = std::max(std::abs(u), 1e-30);

        const cplx chim = std::sqrt(2.0 / num::pi) * gs.regular().eval(r) / jminus;
        const cplx rhs1 = I * std::sqrt(2.0 * num::pi) * gs.N * chim;
        out.value_identity =
            std::max(out.value_identity, std::abs(u - rhs1) / uscale);

        cplx resid{0.0, 0.0};
        for (int j = 0; j < npts; ++j)
            resid += std::sqrt(2.0 / num::pi) * ring[j].eval(r) /
                     (-2.0 * I * ring[j].J4) * offsets[j];
        resid /= double(npts);
        const cplx rhs2 = -std::sqrt(2.0 * num::pi) / gs.N * resid;
        out.residue_identity =
            std::max(out.residue_identity, std::abs(u - rhs2) / uscale);
    }
    return out;
}

/// <phi|z_n> (ket) and <z_n|phi> (bra): both integrate phi times the SAME u_n,
/// never conj(u_n) — left and right Gamow eigenfunctions coincide. For the
/// real-valued test-function family the two roles return the same number.
inline cplx gamow_pairing(const TestFunction &tf, const GamowState &gs,
                          Role role, const QuadratureSettings &settings = {}) {
    (void)role;
    const double beta = std::abs(gs.res.k.imag());
    const double hi = tf.pairing_radius(beta);
    const double lo = std::max(0.0, tf.support_lo());
    std::vector<double> brk;
    for (double b : gs.regular().pot.boundaries)
        if (b > lo && b < hi) brk.push_back(b);
    const auto f = [&](double r) { return tf(r) * gs(r); };
    return num::quad_interval(f, lo, hi, settings, brk);
}

inline cplx gamow_pairing(const TestFunction &tf, const Resonance &res, Role role,
                          const PiecewiseConstantPotential &pot,
                          const PhysConsts &consts,
                          const QuadratureSettings &settings = {}) {
    return gamow_pairing(tf, GamowState(res, pot, consts), role, settings);
}

/// Energy-plane residue normalization: curly-N^2 = N_sq * dz/dq at k_n.
inline cplx energy_plane_norm_sq(const Resonance &res, const PhysConsts &consts) {
    return res.N_sq * consts.hbar * consts.hbar * res.k / consts.mass;
}

/// Breit-Wigner amplitude -(curly-N_n / sqrt(2 pi)) / (E - z_n).
inline cplx decay_amplitude_bw(double e, const Resonance &res,
                               const PhysConsts &consts) {
    if (res.n <= 0)
        throw DomainViolation("decay_amplitude_bw: needs a resonance (n > 0)");
    const double pi = 3.14159265358979323846;
    const cplx norm = std::sqrt(energy_plane_norm_sq(res, consts));
    return -(norm / std::sqrt(2.0 * pi)) / (cplx{e, 0.0} - res.z);
}

/// Pairing with the complex delta functional at z_n: f -> f(z_n).
inline cplx complex_delta_pairing(const EnergyProfile &f, const Resonance &res) {
    return f(res.z);
}

} // namespace gamow

#endif
