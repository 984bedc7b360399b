#include "catch2/catch_amalgamated.hpp"

#include <cmath>

#include "gamow/quadrature.hpp"

using namespace gamow;
using num::quad_interval;
using num::quad_contour;
using num::Contour;

namespace {
const cplx two_pi_i{0.0, 2.0 * num::pi};
}

TEST_CASE("interval quadrature is exact on a constant", "[quadrature]") {
    const cplx v = quad_interval([](double) { return cplx{1.0, 0.0}; }, 0.0, 1.0);
    CHECK(std::abs(v - 1.0) < 1e-14);
}

TEST_CASE("interval quadrature integrates e^{ix} over [0,pi]", "[quadrature]") {
    const cplx v =
        quad_interval([](double x) { return std::exp(I * x); }, 0.0, num::pi);
    CHECK(std::abs(v - cplx{0.0, 2.0}) < 1e-12);
}

TEST_CASE("oscillatory integral matches the dense Simpson reference", "[quadrature]") {
    // 10^6-point Simpson of sin(50x) e^{-x} on [0, 20], frozen
    const double simpson = 0.019992003174865634;
    const cplx v = quad_interval(
        [](double x) { return cplx{std::sin(50.0 * x) * std::exp(-x), 0.0}; }, 0.0,
        20.0);
    CHECK(std::abs(v.real() - simpson) < 1e-9);
    CHECK(std::abs(v.imag()) < 1e-12);
}

TEST_CASE("splitting the interval does not move the result", "[quadrature]") {
    const auto f = [](double x) { return std::exp(I * x) / (1.0 + x * x); };
    const cplx whole = quad_interval(f, 0.0, num::pi);
    const cplx parts = quad_interval(f, 0.0, 1.1) + quad_interval(f, 1.1, num::pi);
    CHECK(std::abs(whole - parts) < 2e-12);
}

TEST_CASE("an unresolvable integrand raises NonConvergence", "[quadrature]") {
    // sign noise at a scale no subdivision budget can resolve
    const auto f = [](double x) {
        return cplx{std::sin(1e7 * x) >= 0.0 ? 1.0 : -1.0, 0.0};
    };
    CHECK_THROWS_AS(quad_interval(f, 0.0, 1.0), NonConvergence);
}

TEST_CASE("closed contour around a simple pole gives 2 pi i", "[quadrature]") {
    const cplx v = quad_contour([](cplx q) { return 1.0 / q; },
                                Contour::circle(cplx{0.0, 0.0}, 1.0));
    CHECK(std::abs(v - two_pi_i) < 1e-12);
}

TEST_CASE("closed contour of an entire function vanishes", "[quadrature]") {
    const cplx v =
        quad_contour([](cplx q) { return q * q; }, Contour::circle(cplx{0.0, 0.0}, 1.0));
    CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("rectangle contour captures an interior pole", "[quadrature]") {
    const cplx pole{0.3, -0.1};
    const cplx v = quad_contour([&](cplx q) { return 1.0 / (q - pole); },
                                Contour::rectangle(Region{-1.0, 1.0, -1.0, 1.0}));
    CHECK(std::abs(v - two_pi_i) < 1e-10);
}

TEST_CASE("contour value is invariant under piece splitting", "[quadrature]") {
    // full circle vs the same circle as two appended half arcs
    const auto f = [](cplx q) { return 1.0 / q; };
    const cplx whole = quad_contour(f, Contour::circle(cplx{0.0, 0.0}, 1.0));

    Contour halves;
    for (double start : {0.0, num::pi}) {
        Contour::Piece p;
        p.gamma = [start](double t) { return std::exp(I * (start + num::pi * t)); };
        p.dgamma = [start](double t) {
            return num::pi * I * std::exp(I * (start + num::pi * t));
        };
        halves.pieces.push_back(p);
    }
    const cplx split = quad_contour(f, halves);
    CHECK(std::abs(whole - split) < 2e-12);
}
