#ifndef GAMOW_RADIAL_HPP
#define GAMOW_RADIAL_HPP

#include <cmath>
#include <utility>
#include <vector>

#include "gamow/matching.hpp"
#include "gamow/potential.hpp"
#include "gamow/quadrature.hpp"
#include "gamow/testfunction.hpp"
#include "gamow/types.hpp"

namespace gamow {

// Regular solution chi(r;q) of the radial equation with chi(0) = 0 and
// chi = sin(kappa_0 r) in the innermost layer. Propagated through the layers
// as Cauchy data (u, u') with the entire-in-w step kernels, so the layer basis
// never degenerates at kappa_j = 0; the q-derivative rides along analytically.
// Outside the potential chi = J3 e^{iqr} + J4 e^{-iqr}, and the Jost functions
// are Jplus = -2i J4, Jminus = 2i J3.
class RegularSolution {
  public:
    cplx q;
    PiecewiseConstantPotential pot;
    PhysConsts consts;
    LayerWaveNumbers lw;
    cplx J3{}, J4{}, dJ3{}, dJ4{};

    RegularSolution(cplx q_in, const PiecewiseConstantPotential &pot_in,
                    const PhysConsts &consts_in)
        : q(q_in), pot(pot_in), consts(consts_in) {
        if (pot.geometry != Geometry::radial)
            throw DomainViolation("regular solution needs radial geometry");
        if (std::abs(q) < 1e-8)
            throw ThresholdLimit(
                "regular solution at |q| < 1e-8: exterior basis degenerates");
        lw = layer_wavenumbers(q, pot, consts);
        const std::size_t m = pot.boundaries.size();
        at_left_.resize(m + 1);

        // innermost layer: chi = sin(kappa_0 r), so chi'(0) = kappa_0 and the
        // q-derivative of the initial slope is dkappa_0/dq = q/kappa_0
        detail::LayerState s;
        s.u = cplx{0.0, 0.0};
        s.up = lw.kappa[0];
        s.qu = cplx{0.0, 0.0};
        s.qup = pot.heights[0] == 0.0 ? cplx{1.0, 0.0} : q / lw.kappa[0];
        at_left_[0] = s;

        double x = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            s = detail::step_forward(s, lw.kappa_sq[j], 2.0 * q,
                                     pot.boundaries[j] - x);
            x = pot.boundaries[j];
            at_left_[j + 1] = s;
        }

        // exterior split: J3 = e^{-iqr}(u + u'/iq)/2, J4 = e^{iqr}(u - u'/iq)/2
        const double rm = pot.boundaries.back();
        const cplx iq = I * q;
        const cplx ep = std::exp(iq * rm);
        const cplx A = s.u + s.up / iq;
        const cplx dA = s.qu + s.qup / iq - s.up / (iq * q);
        const cplx B = s.u - s.up / iq;
        const cplx dB = s.qu - s.qup / iq + s.up / (iq * q);
        J3 = 0.5 * A / ep;
        J4 = 0.5 * B * ep;
        dJ3 = 0.5 * (-I * rm * A + dA) / ep;
        dJ4 = 0.5 * (I * rm * B + dB) * ep;
    }

    cplx jplus() const { return -2.0 * I * J4; }
#ifdef GAMOW_MUTATE_JMINUS
    // Deliberately corrupted build: the verify suite's mutation smoke test
    // compiles with this flag and must see at least 3 checks fail.
    cplx jminus() const { return -(2.0 * I * J3); }
#else
    cplx jminus() const { return 2.0 * I * J3; }
#endif
    cplx djplus() const { return -2.0 * I * dJ4; }
    cplx djminus() const { return 2.0 * I * dJ3; }

    cplx eval(double r) const { return cauchy_at(r).first; }
    cplx eval_deriv(double r) const { return cauchy_at(r).second; }

    // chi'' = -w(r) chi inside each layer
    cplx eval_second(double r) const {
        const std::size_t j = pot.layer_index(r);
        if (j == pot.layers() - 1) {
            const cplx iq = I * q;
            return -q * q * (J3 * std::exp(iq * r) + J4 * std::exp(-iq * r));
        }
        return -lw.kappa_sq[j] * eval(r);
    }

    std::pair<cplx, cplx> cauchy_at(double r) const {
        if (r < 0.0) throw DomainViolation("regular solution: r must be >= 0");
        const std::size_t j = pot.layer_index(r);
        if (j == pot.layers() - 1) {
            const cplx iq = I * q;
            const cplx ep = std::exp(iq * r);
            return {J3 * ep + J4 / ep, iq * (J3 * ep - J4 / ep)};
        }
        const double x0 = j == 0 ? 0.0 : pot.boundaries[j - 1];
        const detail::LayerState s =
            detail::step_forward(at_left_[j], lw.kappa_sq[j], 2.0 * q, r - x0);
        return {s.u, s.up};
    }

    const detail::LayerState &state_at_left(std::size_t layer) const {
        return at_left_[layer];
    }

  private:
    std::vector<detail::LayerState> at_left_; // Cauchy data at layer left edges
};

// Exponential-basis amplitudes per layer: chi = c+ e^{i kappa_j r} + c- e^{-i
// kappa_j r}. The exterior pair is exactly (J3, J4). Amplitudes of a layer at
// its own height (kappa_j = 0) are infinite; the RegularSolution evaluation
// path never forms them.
struct RegularCoeffs {
    cplx q;
    std::vector<cplx> kappa;
    std::vector<cplx> cplus, cminus;
};

inline RegularCoeffs regular_coeffs(const RegularSolution &sol) {
    RegularCoeffs rc;
    rc.q = sol.q;
    rc.kappa = sol.lw.kappa;
    const std::size_t m = sol.pot.boundaries.size();
    for (std::size_t j = 0; j < m; ++j) {
        const auto &s = sol.state_at_left(j);
        const double x = j == 0 ? 0.0 : sol.pot.boundaries[j - 1];
        const auto c = detail::exp_split(s.u, s.up, sol.lw.kappa[j], x);
        rc.cplus.push_back(c.cplus);
        rc.cminus.push_back(c.cminus);
    }
    rc.cplus.push_back(sol.J3);
    rc.cminus.push_back(sol.J4);
    return rc;
}

inline RegularCoeffs regular_solution(cplx q, const PiecewiseConstantPotential &pot,
                                      const PhysConsts &consts) {
    return regular_coeffs(RegularSolution(q, pot, consts));
}

// Independent assembly route: per-interface 2x2 matching in the exponential
// basis, with an arbitrary sign mask on the layer wave numbers. Flipping any
// interior kappa_j swaps that layer's (c+, c-) and must leave (J3, J4)
// untouched; this route exists so that claim is testable against a path that
// actually takes square roots.
inline RegularCoeffs regular_coeffs_exponential(cplx q,
                                                const PiecewiseConstantPotential &pot,
                                                const PhysConsts &consts,
                                                const std::vector<int> &signs = {}) {
    if (std::abs(q) < 1e-8)
        throw ThresholdLimit("exponential route: |q| < 1e-8");
    LayerWaveNumbers lw = layer_wavenumbers(q, pot, consts);
    const cplx kappa0 = lw.kappa[0]; // principal branch fixes chi'(0)
    const std::size_t nl = pot.layers();
    if (!signs.empty()) {
        if (signs.size() != nl)
            throw DomainViolation("sign mask must have one entry per layer");
        for (std::size_t j = 0; j < nl; ++j)
            lw.kappa[j] *= double(signs[j]);
    }
    RegularCoeffs rc;
    rc.q = q;
    rc.kappa = lw.kappa;
    // chi(0) = 0, chi'(0) = principal kappa_0, expressed in whatever basis
    // the mask selected; for the unmasked basis this is the sin(kappa_0 r)
    // split {1/2i, -1/2i}.
    detail::ExpCoeffs c = detail::exp_split(cplx{0.0, 0.0}, kappa0, lw.kappa[0], 0.0);
    rc.cplus.push_back(c.cplus);
    rc.cminus.push_back(c.cminus);
    for (std::size_t j = 1; j < nl; ++j) {
        const double x = pot.boundaries[j - 1];
        cplx u, up;
        detail::exp_merge(c, lw.kappa[j - 1], x, u, up);
        c = detail::exp_split(u, up, lw.kappa[j], x);
        rc.cplus.push_back(c.cplus);
        rc.cminus.push_back(c.cminus);
    }
    return rc;
}

struct JostData {
    cplx q;
    cplx Jplus, Jminus;
    cplx S;
    cplx dJplus, dJminus;
    cplx J3, J4;
};

inline JostData jost_from(const RegularSolution &sol) {
    JostData jd;
    jd.q = sol.q;
    jd.Jplus = sol.jplus();
    jd.Jminus = sol.jminus();
    jd.dJplus = sol.djplus();
    jd.dJminus = sol.djminus();
    jd.J3 = sol.J3;
    jd.J4 = sol.J4;
    jd.S = jd.Jminus / jd.Jplus; // raw; smatrix() applies the pole floor
    return jd;
}

inline JostData jost(cplx q, const PiecewiseConstantPotential &pot,
                     const PhysConsts &consts) {
    return jost_from(RegularSolution(q, pot, consts));
}

namespace detail {
inline void require_off_pole(cplx jsign, cplx jother, const char *what) {
    if (std::abs(jsign) < 1e-12 * std::max(1.0, std::abs(jother)))
        throw AtPole(std::string(what) + ": Jost function vanishes here");
}
} // namespace detail

inline cplx smatrix(cplx q, const PiecewiseConstantPotential &pot,
                    const PhysConsts &consts) {
    const JostData jd = jost(q, pot, consts);
    detail::require_off_pole(jd.Jplus, jd.Jminus, "smatrix");
    return jd.Jminus / jd.Jplus;
}

inline cplx smatrix(const EnergyPoint &e, const PiecewiseConstantPotential &pot,
                    const PhysConsts &consts) {
    return smatrix(wavenumber_of_energy(e, consts), pot, consts);
}

/// Phase shifts delta(E) with S = e^{2 i delta}, unwrapped to be continuous
/// along the (monotone) scan; ties go to the previous branch.
inline std::vector<double> phase_shift_scan(const std::vector<double> &energies,
                                            const PiecewiseConstantPotential &pot,
                                            const PhysConsts &consts) {
    std::vector<double> out;
    out.reserve(energies.size());
    double prev = 0.0;
    const double pi = 3.14159265358979323846;
    for (double e : energies) {
        const cplx s = smatrix(EnergyPoint{cplx{e, 0.0}, Sheet::one}, pot, consts);
        const double principal = 0.5 * std::arg(s); // in (-pi/2, pi/2]
        double d = principal;
        if (!out.empty()) d = principal + pi * std::round((prev - principal) / pi);
        out.push_back(d);
        prev = d;
    }
    return out;
}

enum class Norm { energy, momentum };

namespace detail {
inline cplx ls_norm_factor(cplx q, Norm norm, const PhysConsts &consts) {
    const double pi = 3.14159265358979323846;
    if (norm == Norm::momentum) return std::sqrt(2.0 / pi);
    // N(E) = sqrt((1/pi) (2m/hbar^2) / q), principal branch off the axis
    return std::sqrt(consts.two_m_over_hbar2() / (pi * q));
}
} // namespace detail

// Lippmann-Schwinger eigenfunction chi^{sign}(r; q) = n(q) chi(r;q) / J_sign(q),
// in either delta(E - E') or delta(k - k') normalization. For complex q this
// expression IS the analytic continuation.
class LSEigenfunction {
  public:
    int sign;
    Norm norm;
    RegularSolution sol;
    cplx jsign;
    cplx prefactor;

    LSEigenfunction(cplx q, int sgn, Norm nrm, const PiecewiseConstantPotential &pot,
                    const PhysConsts &consts)
        : sign(sgn), norm(nrm), sol(q, pot, consts) {
        if (sign != 1 && sign != -1)
            throw DomainViolation("ls_eigenfunction: sign must be +1 or -1");
        jsign = sign > 0 ? sol.jplus() : sol.jminus();
        const cplx jother = sign > 0 ? sol.jminus() : sol.jplus();
        detail::require_off_pole(jsign, jother, "ls_eigenfunction");
        prefactor = detail::ls_norm_factor(q, norm, consts) / jsign;
    }

    cplx operator()(double r) const { return prefactor * sol.eval(r); }
    cplx deriv(double r) const { return prefactor * sol.eval_deriv(r); }
};

inline cplx ls_eigenfunction(double r, cplx q, int sign, Norm norm,
                             const PiecewiseConstantPotential &pot,
                             const PhysConsts &consts) {
    return LSEigenfunction(q, sign, norm, pot, consts)(r);
}

// F(q) = integral of phi(r) chi(r;q) dr: entire in q (the pairing numerator).
// Truncated at the analytic envelope radius; split at potential boundaries so
// every panel sees a smooth integrand. Test functions are real-valued, so no
// conjugation appears here; bra vs ket is a choice of J divisor only.
inline cplx pairing_entire(const TestFunction &tf, const RegularSolution &sol,
                           const QuadratureSettings &settings = {}) {
    const double beta = std::abs(sol.q.imag());
    const double hi = tf.pairing_radius(beta);
    const double lo = std::max(0.0, tf.support_lo());
    std::vector<double> brk;
    for (double b : sol.pot.boundaries)
        if (b > lo && b < hi) brk.push_back(b);
    const auto f = [&](double r) { return tf(r) * sol.eval(r); };
    return num::quad_interval(f, lo, hi, settings, brk);
}

enum class Role { bra, ket };

/// <phi|q sign> (ket) or <sign q|phi> (bra). The bra pairs against the
/// opposite-sign eigenfunction, which is what makes both sides entire in q.
inline cplx ls_pairing(const TestFunction &tf, cplx q, int sign, Role role,
                       const PiecewiseConstantPotential &pot,
                       const PhysConsts &consts, Norm norm = Norm::momentum,
                       const QuadratureSettings &settings = {}) {
    if (sign != 1 && sign != -1)
        throw DomainViolation("ls_pairing: sign must be +1 or -1");
    const RegularSolution sol(q, pot, consts);
    const int eff = role == Role::ket ? sign : -sign;
    const cplx jsign = eff > 0 ? sol.jplus() : sol.jminus();
    const cplx jother = eff > 0 ? sol.jminus() : sol.jplus();
    detail::require_off_pole(jsign, jother, "ls_pairing");
    const cplx F = pairing_entire(tf, sol, settings);
    return detail::ls_norm_factor(q, norm, consts) * F / jsign;
}

// |chi(r;q)| <= C (|q| r / (1 + |q| r)) e^{|Im q| r} with one constant for the
// whole sample set; the fitted C is the report.
struct GrowthBoundReport {
    bool holds = false;
    double c_fit = 0.0;
    double worst_r = 0.0;
};

inline GrowthBoundReport growth_bound_check(cplx q,
                                            const std::vector<double> &r_samples,
                                            const PiecewiseConstantPotential &pot,
                                            const PhysConsts &consts) {
    const RegularSolution sol(q, pot, consts);
    GrowthBoundReport rep;
    rep.holds = true;
    const double aq = std::abs(q);
    const double b = std::abs(q.imag());
    for (double r : r_samples) {
        if (!(r > 0.0)) continue;
        const double envelope = (aq * r / (1.0 + aq * r)) * std::exp(b * r);
        const double ratio = std::abs(sol.eval(r)) / envelope;
        if (!std::isfinite(ratio)) {
            rep.holds = false;
            rep.worst_r = r;
            return rep;
        }
        if (ratio > rep.c_fit) {
            rep.c_fit = ratio;
            rep.worst_r = r;
        }
    }
    return rep;
}

/// sup of 1/|J+| over a rectangular grid (skipping the threshold disc);
/// finite on the closed upper half plane, divergent near lower-half zeros.
inline double jost_inverse_sup(const Region &region, int n_re, int n_im,
                               const PiecewiseConstantPotential &pot,
                               const PhysConsts &consts) {
    double sup = 0.0;
    for (int i = 0; i < n_re; ++i) {
        for (int j = 0; j < n_im; ++j) {
            const cplx q{region.re_min +
                             (region.re_max - region.re_min) * i / double(n_re - 1),
                         region.im_min +
                             (region.im_max - region.im_min) * j / double(n_im - 1)};
            if (std::abs(q) < 1e-6) continue;
            sup = std::max(sup, 1.0 / std::abs(jost(q, pot, consts).Jplus));
        }
    }
    return sup;
}

} // namespace gamow

#endif
