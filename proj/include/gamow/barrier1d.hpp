#ifndef GAMOW_BARRIER1D_HPP
#define GAMOW_BARRIER1D_HPP

#include <cmath>
#include <vector>

#include "gamow/matching.hpp"
#include "gamow/potential.hpp"
#include "gamow/quadrature.hpp"
#include "gamow/testfunction.hpp"
#include "gamow/types.hpp"

namespace gamow {

enum class Side { left, right };

// Scattering eigenfunction of the full-line barrier for one incidence side,
// held as Cauchy data at the interior layer edges (stable through E = V_j,
// where the exponential layer basis would collapse; the entire-in-w kernels
// give the {1, x} limit automatically). The delta(E)-normalization prefactor
// sqrt(m / (2 pi k hbar^2)) multiplies every value.
class Barrier1DSolution {
  public:
    double k;
    Side side;
    cplx T, R;
    PiecewiseConstantPotential pot;
    PhysConsts consts;
    LayerWaveNumbers lw;
    double prefactor;

    Barrier1DSolution(double k_in, Side side_in,
                      const PiecewiseConstantPotential &pot_in,
                      const PhysConsts &consts_in)
        : k(k_in), side(side_in), pot(pot_in), consts(consts_in) {
        if (pot.geometry != Geometry::line)
            throw DomainViolation("barrier solution needs line geometry");
        if (!(k > 0.0)) throw DomainViolation("barrier solution needs k > 0");
        lw = layer_wavenumbers(cplx{k, 0.0}, pot, consts);
        const double pi = 3.14159265358979323846;
        prefactor = std::sqrt(consts.mass /
                              (2.0 * pi * k * consts.hbar * consts.hbar));
        const std::size_t m = pot.boundaries.size();
        states_.assign(m + 1, {});
        const double a = pot.boundaries.front();
        const double b = pot.boundaries.back();
        const cplx ik = I * cplx{k, 0.0};

        if (side == Side::left) {
            // trial transmitted wave e^{ikx} at x = b, pulled back to x = a
            detail::LayerState s;
            s.u = std::exp(ik * b);
            s.up = ik * s.u;
            states_[m] = s;
            for (std::size_t j = m - 1; j >= 1; --j) {
                s = detail::step_backward(s, lw.kappa_sq[j],
                                          pot.boundaries[j] - pot.boundaries[j - 1]);
                states_[j] = s;
            }
            const cplx alpha = 0.5 * (s.u + s.up / ik) * std::exp(-ik * a);
            const cplx beta = 0.5 * (s.u - s.up / ik) * std::exp(ik * a);
            T = 1.0 / alpha;
            R = beta / alpha;
        } else {
            // trial transmitted wave e^{-ikx} at x = a, pushed forward to x = b
            detail::LayerState s;
            s.u = std::exp(-ik * a);
            s.up = -ik * s.u;
            states_[1] = s;
            for (std::size_t j = 1; j + 1 <= m; ++j) {
                s = detail::step_forward(s, lw.kappa_sq[j], 2.0 * cplx{k, 0.0},
                                         pot.boundaries[j] - pot.boundaries[j - 1]);
                states_[j + 1] = s;
            }
            const cplx gamma = 0.5 * (s.u + s.up / ik) * std::exp(-ik * b);
            const cplx delta = 0.5 * (s.u - s.up / ik) * std::exp(ik * b);
            T = 1.0 / delta;
            R = gamma / delta;
        }
        for (auto &s : states_) {
            s.u *= T;
            s.up *= T;
        }
    }

    // value WITH the delta(E) prefactor
    cplx operator()(double x) const { return prefactor * raw(x); }
    cplx deriv(double x) const { return prefactor * raw_deriv(x); }

    // value without the prefactor (completeness integrals strip it analytically)
    cplx raw(double x) const { return cauchy_at(x).u; }
    cplx raw_deriv(double x) const { return cauchy_at(x).up; }

  private:
    std::vector<detail::LayerState> states_; // index j: data at boundary x_j
                                             // (1-based; [0] unused)

    detail::LayerState cauchy_at(double x) const {
        const cplx ik = I * cplx{k, 0.0};
        const std::size_t m = pot.boundaries.size();
        const double a = pot.boundaries.front();
        const double b = pot.boundaries.back();
        detail::LayerState s;
        if (side == Side::left) {
            if (x < a) {
                const cplx inc = std::exp(ik * x);
                const cplx ref = R * std::exp(-ik * x);
                s.u = inc + ref;
                s.up = ik * (inc - ref);
                return s;
            }
            if (x >= b) {
                s.u = T * std::exp(ik * x);
                s.up = ik * s.u;
                return s;
            }
        } else {
            if (x >= b) {
                const cplx inc = std::exp(-ik * x);
                const cplx ref = R * std::exp(ik * x);
                s.u = inc + ref;
                s.up = ik * (ref - inc);
                return s;
            }
            if (x < a) {
                s.u = T * std::exp(-ik * x);
                s.up = -ik * s.u;
                return s;
            }
        }
        const std::size_t j = pot.layer_index(x); // interior: 1 <= j <= m-1
        return detail::step_forward(states_[j], lw.kappa_sq[j],
                                    2.0 * cplx{k, 0.0}, x - pot.boundaries[j - 1]);
    }
};

// Transmission/reflection amplitudes plus the interior layer coefficients of
// both incidence solutions: u_interior = A e^{i kappa x} + B e^{-i kappa x}
// per interior layer. At E = V_j the A, B of that layer are not representable
// (the solution is linear there); evaluation goes through Barrier1DSolution.
struct BarrierCoefficients {
    double k;
    cplx T, R_l, R_r;
    std::vector<cplx> A_l, B_l, A_r, B_r;
    double reciprocity_defect;
};

inline BarrierCoefficients barrier_coefficients(double k,
                                                const PiecewiseConstantPotential &pot,
                                                const PhysConsts &consts) {
    const Barrier1DSolution left(k, Side::left, pot, consts);
    const Barrier1DSolution right(k, Side::right, pot, consts);
    BarrierCoefficients bc;
    bc.k = k;
    bc.T = left.T;
    bc.R_l = left.R;
    bc.R_r = right.R;
    bc.reciprocity_defect = std::abs(left.T - right.T);
    const std::size_t m = pot.boundaries.size();
    for (std::size_t j = 1; j + 1 <= m; ++j) {
        const double x = pot.boundaries[j - 1];
        const auto cl = detail::exp_split(left.raw(x), left.raw_deriv(x),
                                          left.lw.kappa[j], x);
        bc.A_l.push_back(cl.cplus);
        bc.B_l.push_back(cl.cminus);
        const auto cr =
            detail::exp_split(right.raw(x), right.raw_deriv(x), right.lw.kappa[j], x);
        bc.A_r.push_back(cr.cplus);
        bc.B_r.push_back(cr.cminus);
    }
    return bc;
}

inline cplx eigenfunction_1d(double x, double e, Side side,
                             const PiecewiseConstantPotential &pot,
                             const PhysConsts &consts) {
    if (!(e > 0.0)) throw DomainViolation("eigenfunction_1d needs E > 0");
    const double k = std::sqrt(consts.two_m_over_hbar2() * e);
    return Barrier1DSolution(k, side, pot, consts)(x);
}

// (phi, psi) - sum_sides int_0^{e_max} dE <phi|E+>_s <+E|psi>_s, computed in
// the k variable where prefactor^2 dE/dk = 1/(2 pi) exactly.
inline cplx completeness_defect_1d(const TestFunction &phi, const TestFunction &psi,
                                   double e_max,
                                   const PiecewiseConstantPotential &pot,
                                   const PhysConsts &consts,
                                   const QuadratureSettings &settings = {}) {
    if (!(e_max > 0.0)) throw DomainViolation("completeness: e_max must be > 0");
    const double lo = std::min(phi.support_lo(), psi.support_lo());
    const double hi = std::max(phi.support_hi(), psi.support_hi());
    std::vector<double> brk;
    for (double b : pot.boundaries)
        if (b > lo && b < hi) brk.push_back(b);

    const auto overlap = [&](const TestFunction &f, const Barrier1DSolution &s) {
        const auto g = [&](double x) { return f(x) * s.raw(x); };
        return num::quad_interval(g, f.support_lo(), f.support_hi(), settings, brk);
    };

    const double pi = 3.14159265358979323846;
    const double k_max = std::sqrt(consts.two_m_over_hbar2() * e_max);
    const auto spectral = [&](double k) -> cplx {
        if (k <= 0.0) return {0.0, 0.0};
        cplx acc{0.0, 0.0};
        for (Side side : {Side::left, Side::right}) {
            const Barrier1DSolution s(k, side, pot, consts);
            // phi, psi real: <phi|E+> = int phi u, <+E|psi> = conj(int psi u)
            acc += overlap(phi, s) * std::conj(overlap(psi, s));
        }
        return acc / (2.0 * pi);
    };

    const auto direct_f = [&](double x) { return cplx{phi(x) * psi(x), 0.0}; };
    const cplx direct =
        num::quad_interval(direct_f, lo, hi, settings, brk);
    QuadratureSettings outer = settings;
    outer.abs_tol = std::max(outer.abs_tol, 1e-11);
    const cplx spec_sum = num::quad_interval(spectral, 0.0, k_max, outer);
    return direct - spec_sum;
}

/// || (QP - PQ) phi - i hbar phi ||_2 / ||phi||_2 with analytic derivatives.
inline double commutator_check(const TestFunction &phi, const PhysConsts &consts) {
    const cplx ih = I * consts.hbar;
    const auto resid2 = [&](double x) {
        const double f = phi(x);
        const double fp = phi.deriv(x, 1);
        const cplx qp = -ih * x * fp;          // Q P phi
        const cplx pq = -ih * (f + x * fp);    // P Q phi
        const cplx r = (qp - pq) - ih * f;
        return cplx{std::norm(r), 0.0};
    };
    const double n2 =
        num::quad_interval(resid2, phi.support_lo(), phi.support_hi()).real();
    const auto phi2 = [&](double x) { return cplx{phi(x) * phi(x), 0.0}; };
    const double nphi2 =
        num::quad_interval(phi2, phi.support_lo(), phi.support_hi()).real();
    return std::sqrt(std::max(0.0, n2 / nphi2));
}

inline cplx commutator_expectation(const TestFunction &phi,
                                   const PhysConsts &consts) {
    const cplx ih = I * consts.hbar;
    const auto f = [&](double x) {
        const double v = phi(x);
        const double vp = phi.deriv(x, 1);
        const cplx comm = -ih * x * vp + ih * (v + x * vp);
        return v * comm;
    };
    return num::quad_interval(f, phi.support_lo(), phi.support_hi());
}

/// Delta Q * Delta P by quadrature; >= hbar/2 for every admissible state.
inline double uncertainty_product(const TestFunction &phi,
                                  const PhysConsts &consts) {
    const auto mom = [&](auto g) {
        return num::quad_interval(
                   [&](double x) { return cplx{g(x), 0.0}; },
                   phi.support_lo(), phi.support_hi())
            .real();
    };
    // moments of the normalized state: divide by ||phi||^2 throughout
    const double eta = mom([&](double x) { return phi(x) * phi(x); });
    const double xbar = mom([&](double x) { return x * phi(x) * phi(x); }) / eta;
    const double x2 =
        mom([&](double x) { return x * x * phi(x) * phi(x); }) / eta;
    const double p2 = consts.hbar * consts.hbar *
                      mom([&](double x) {
                          const double d = phi.deriv(x, 1);
                          return d * d;
                      }) /
                      eta;
    const double pbar = 0.0; // real phi: <P> = -i hbar int phi phi' = 0
    const double dq = std::sqrt(std::max(0.0, x2 - xbar * xbar));
    const double dp = std::sqrt(std::max(0.0, p2 - pbar * pbar));
    return dq * dp;
}

} // namespace gamow

#endif
