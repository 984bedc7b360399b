#ifndef GAMOW_MATCHING_HPP
#define GAMOW_MATCHING_HPP

#include <cmath>
#include <complex>

#include "gamow/types.hpp"

namespace gamow::detail {

// Layer-step kernels C(w;L) = cos(sqrt(w) L) and S(w;L) = sin(sqrt(w) L)/sqrt(w),
// viewed as ENTIRE functions of w = kappa^2. Working in w removes the sqrt
// branch from the propagation and keeps the step regular at kappa = 0 (a layer
// hit exactly at its own height). dC/dw and dS/dw feed the analytic q-derivative
// of the Jost function.
struct StepKernels {
    cplx C, S, dC, dS; // dC = dC/dw, dS = dS/dw
};

inline StepKernels step_kernels(cplx w, double L) {
    StepKernels k;
    const double L2 = L * L;
    if (std::abs(w) * L2 < 1e-2) {
        // Taylor series in w; converges in a few terms this close to zero.
        // C = sum (-w)^n L^{2n} / (2n)!,  S = sum (-w)^n L^{2n+1} / (2n+1)!,
        // dS/dw = -sum n (-w)^{n-1} L^{2n+1} / (2n+1)!   (so dS(0) = -L^3/6).
        cplx c{1.0, 0.0}, s{L, 0.0}, ds{0.0, 0.0};
        cplx term_c{1.0, 0.0}, term_s{L, 0.0};
        cplx pw{1.0, 0.0}; // (-w)^{n-1}
        double lpow = L2 * L;
        double fact = 6.0; // (2n+1)! at n = 1
        for (int n = 1; n <= 30; ++n) {
            term_c *= -w * L2 / double((2 * n - 1) * (2 * n));
            term_s *= -w * L2 / double((2 * n) * (2 * n + 1));
            c += term_c;
            s += term_s;
            ds -= double(n) * pw * lpow / fact;
            if (std::abs(term_s) < 1e-18 * std::abs(s)) break;
            pw *= -w;
            lpow *= L2;
            fact *= double((2 * n + 2) * (2 * n + 3));
        }
        k.C = c;
        k.S = s;
        k.dS = ds;
    } else {
        const cplx rt = std::sqrt(w);
        const cplx arg = rt * L;
        k.C = std::cos(arg);
        k.S = std::sin(arg) / rt;
        k.dS = (L * k.C - k.S) / (2.0 * w);
    }
    k.dC = -0.5 * L * k.S;
    return k;
}

// Cauchy data of a solution at a point, together with its q-derivative.
// up = du/dr; qu, qup are the partial q-derivatives at fixed r.
struct LayerState {
    cplx u{}, up{}, qu{}, qup{};
};

// Advance the state a distance L through a layer with w = q^2 - 2mV/hbar^2,
// dw/dq = 2q. The transfer matrix [C, S; -wS, C] has unit determinant.
inline LayerState step_forward(const LayerState &s, cplx w, cplx dwdq, double L) {
    const StepKernels k = step_kernels(w, L);
    const cplx qC = k.dC * dwdq;
    const cplx qS = k.dS * dwdq;
    LayerState r;
    r.u = s.u * k.C + s.up * k.S;
    r.up = -w * k.S * s.u + k.C * s.up;
    r.qu = s.qu * k.C + s.u * qC + s.qup * k.S + s.up * qS;
    r.qup = -dwdq * k.S * s.u - w * qS * s.u - w * k.S * s.qu + k.C * s.qup +
            s.up * qC;
    return r;
}

// Inverse step: recover the state a distance L to the LEFT (no q tracking).
inline LayerState step_backward(const LayerState &s, cplx w, double L) {
    const StepKernels k = step_kernels(w, L);
    LayerState r;
    r.u = s.u * k.C - s.up * k.S;
    r.up = w * k.S * s.u + k.C * s.up;
    return r;
}

// Split Cauchy data at position x into exponential-basis coefficients
// (cplus, cminus) with u = cplus e^{i kappa x} + cminus e^{-i kappa x}.
// Singular as kappa -> 0; the (u, u') representation is the stable one.
struct ExpCoeffs {
    cplx cplus{}, cminus{};
};

inline ExpCoeffs exp_split(cplx u, cplx up, cplx kappa, double x) {
    const cplx ik = I * kappa;
    const cplx ep = std::exp(ik * x);
    return {0.5 * (u + up / ik) / ep, 0.5 * (u - up / ik) * ep};
}

inline void exp_merge(const ExpCoeffs &c, cplx kappa, double x, cplx &u, cplx &up) {
    const cplx ik = I * kappa;
    const cplx ep = std::exp(ik * x);
    u = c.cplus * ep + c.cminus / ep;
    up = ik * (c.cplus * ep - c.cminus / ep);
}

} // namespace gamow::detail

#endif
