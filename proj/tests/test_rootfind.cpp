#include "catch2/catch_amalgamated.hpp"

#include <cmath>

#include "gamow/radial.hpp"
#include "gamow/rootfind.hpp"

using namespace gamow;
using num::count_zeros;
using num::refine_zero;
using num::derivative;
using num::find_zeros_in_region;

namespace {

// First three S-matrix poles of the default shell (a=1, b=2, V0=10), frozen
// from an independent dense-grid scan plus finite-difference Newton polish.
const cplx pole1{2.3190998502052733, -0.0093031054809650359};
const cplx pole2{3.9925107140075808, -0.25914986511885285};
const cplx pole3{5.1171498806837459, -0.45400892556992445};

} // namespace

TEST_CASE("winding count finds the single zero of q^2+1 below the axis", "[rootfind]") {
    const auto f = [](cplx q) { return q * q + 1.0; };
    const auto df = [](cplx q) { return 2.0 * q; };
    CHECK(count_zeros(f, df, Region{-2.0, 2.0, -2.0, 0.0}) == 1);
}

TEST_CASE("winding count of a zero-free function is zero", "[rootfind]") {
    const auto f = [](cplx q) { return std::exp(q); };
    CHECK(count_zeros(f, f, Region{-2.0, 2.0, -2.0, 0.0}) == 0);
}

TEST_CASE("zero counts add across a region split", "[rootfind]") {
    const auto f = [](cplx q) { return q * q + 1.0; };
    const auto df = [](cplx q) { return 2.0 * q; };
    const int whole = count_zeros(f, df, Region{-2.0, 2.0, -2.0, 0.0});
    const int left = count_zeros(f, df, Region{-2.0, 0.37, -2.0, 0.0});
    const int right = count_zeros(f, df, Region{0.37, 2.0, -2.0, 0.0});
    CHECK(whole == left + right);
}

TEST_CASE("a zero on the region boundary is refused", "[rootfind]") {
    const cplx corner{-2.0, -2.0};
    const auto f = [&](cplx q) { return q - corner; };
    const auto df = [](cplx) { return cplx{1.0, 0.0}; };
    CHECK_THROWS_AS(count_zeros(f, df, Region{-2.0, 2.0, -2.0, 0.0}), BoundaryZero);
}

TEST_CASE("Newton refinement lands on sqrt(2)", "[rootfind]") {
    const auto f = [](cplx q) { return q * q - 2.0; };
    const auto df = [](cplx q) { return 2.0 * q; };
    const cplx z = refine_zero(f, df, cplx{1.5, 0.0});
    CHECK(std::abs(z - std::sqrt(2.0)) < 1e-11);
}

TEST_CASE("a refined zero is certified by a tight recount", "[rootfind]") {
    const auto f = [](cplx q) { return q * q - 2.0; };
    const auto df = [](cplx q) { return 2.0 * q; };
    const cplx z = refine_zero(f, df, cplx{1.5, 0.0}, 1e-12);
    CHECK(std::abs(f(z)) < 1e-11);
    const double box = 1e-10;
    CHECK(count_zeros(f, df, Region{z.real() - box, z.real() + box,
                                    z.imag() - box, z.imag() + box}) == 1);
}

TEST_CASE("complex derivative of q^2 and e^q", "[rootfind]") {
    const cplx d1 = derivative([](cplx q) { return q * q; }, cplx{1.0, 1.0});
    CHECK(std::abs(d1 - cplx{2.0, 2.0}) < 1e-10);
    const cplx d2 = derivative([](cplx q) { return std::exp(q); }, cplx{0.0, 0.0});
    CHECK(std::abs(d2 - 1.0) < 1e-12);
}

TEST_CASE("derivative is stable under initial-step halving", "[rootfind]") {
    const auto f = [](cplx q) { return std::exp(q) / (1.0 + q * q); };
    const cplx q0{0.3, 0.2};
    const cplx a = derivative(f, q0, 1e-2);
    const cplx b = derivative(f, q0, 5e-3);
    CHECK(std::abs(a - b) < 1e-8 * (1.0 + std::abs(a)));
}

TEST_CASE("Jost-function zeros inside a window are counted exactly", "[rootfind]") {
    const PiecewiseConstantPotential shell = shell_potential();
    const PhysConsts consts;
    const auto f = [&](cplx q) { return jost(q, shell, consts).Jplus; };
    const auto df = [&](cplx q) { return jost(q, shell, consts).dJplus; };
    // window holds pole1 and pole2; pole3 sits past re = 5
    CHECK(count_zeros(f, df, Region{0.1, 5.0, -1.0, -1e-6}) == 2);
}

TEST_CASE("Newton on the Jost function recovers the frozen poles", "[rootfind]") {
    const PiecewiseConstantPotential shell = shell_potential();
    const PhysConsts consts;
    const auto f = [&](cplx q) { return jost(q, shell, consts).Jplus; };
    const auto df = [&](cplx q) { return jost(q, shell, consts).dJplus; };
    CHECK(std::abs(refine_zero(f, df, cplx{2.32, -0.01}) - pole1) < 1e-10);
    CHECK(std::abs(refine_zero(f, df, cplx{3.99, -0.26}) - pole2) < 1e-10);
    CHECK(std::abs(refine_zero(f, df, cplx{5.12, -0.45}) - pole3) < 1e-10);
}

TEST_CASE("region sweep returns every zero once, sorted", "[rootfind]") {
    const PiecewiseConstantPotential shell = shell_potential();
    const PhysConsts consts;
    const auto f = [&](cplx q) { return jost(q, shell, consts).Jplus; };
    const auto df = [&](cplx q) { return jost(q, shell, consts).dJplus; };
    const std::vector<cplx> zeros =
        find_zeros_in_region(f, df, Region{0.1, 5.0, -1.0, -1e-6});
    REQUIRE(zeros.size() == 2);
    CHECK(std::abs(zeros[0] - pole1) < 1e-8);
    CHECK(std::abs(zeros[1] - pole2) < 1e-8);
}
