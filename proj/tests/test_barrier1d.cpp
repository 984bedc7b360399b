#include "catch2/catch_amalgamated.hpp"

#include <cmath>
#include <vector>

#include "gamow/barrier1d.hpp"
#include "gamow/verify.hpp"

using namespace gamow;

namespace {

PiecewiseConstantPotential free_line() {
    return {Geometry::line, {0.0, 1.0}, {0.0, 0.0, 0.0}};
}

// frozen from an independent transfer-matrix evaluation at k = 1
const cplx frozen_T{-0.01188682291286325, -0.21507044441553994};
const cplx frozen_Rl{-0.57216204442796248, -0.79134948176893194};
const cplx frozen_Rr{-0.48146862271128121, 0.84958305816702906};

} // namespace

TEST_CASE("zero barrier transmits perfectly", "[barrier1d]") {
    const PhysConsts consts;
    const auto fl = free_line();
    for (double k : {0.5, 2.0}) {
        const auto bc = barrier_coefficients(k, fl, consts);
        CHECK(std::abs(bc.T - 1.0) < 1e-14);
        CHECK(std::abs(bc.R_l) < 1e-14);
        CHECK(std::abs(bc.R_r) < 1e-14);
    }
    const Barrier1DSolution left(1.3, Side::left, fl, consts);
    for (double x : {-1.0, 0.5, 2.0})
        CHECK(std::abs(left(x) - left.prefactor * std::exp(I * cplx{1.3 * x, 0.0})) <
              1e-14);
}

TEST_CASE("transmission at k=1 matches the frozen oracle values", "[barrier1d]") {
    const PhysConsts consts;
    const auto bc = barrier_coefficients(1.0, barrier_potential(), consts);
    CHECK(std::abs(bc.T - frozen_T) < 1e-12);
    CHECK(std::abs(bc.R_l - frozen_Rl) < 1e-12);
    CHECK(std::abs(bc.R_r - frozen_Rr) < 1e-12);
}

TEST_CASE("closed-form coefficients match a fixed-step shooting oracle",
          "[barrier1d]") {
    const PhysConsts consts;
    const auto bar = barrier_potential();
    for (double k : {1.0, 2.4, 3.0}) {
        const auto bc = barrier_coefficients(k, bar, consts);
        const auto sh = verify::detail::barrier_shooting_oracle(k, bar, consts);
        CHECK(std::abs(sh.T - bc.T) < 1e-10);
        CHECK(std::abs(sh.R_l - bc.R_l) < 1e-10);
        CHECK(std::abs(sh.R_r - bc.R_r) < 1e-10);
    }
}

TEST_CASE("interior coefficients satisfy the matching equations", "[barrier1d]") {
    const PhysConsts consts;
    const auto bar = barrier_potential();
    const double k = 1.0;
    const auto bc = barrier_coefficients(k, bar, consts);
    REQUIRE(bc.A_l.size() == 1);
    const cplx kap = layer_wavenumbers(cplx{k, 0.0}, bar, consts).kappa[1];
    const cplx ik = I * k;
    const cplx A = bc.A_l[0], B = bc.B_l[0];
    const cplx eb = std::exp(I * kap), emb = std::exp(-I * kap);
    CHECK(std::abs(1.0 + bc.R_l - (A + B)) < 1e-12);
    CHECK(std::abs(ik * (1.0 - bc.R_l) - I * kap * (A - B)) < 1e-12);
    CHECK(std::abs(A * eb + B * emb - bc.T * std::exp(ik)) < 1e-12);
    CHECK(std::abs(I * kap * (A * eb - B * emb) - ik * bc.T * std::exp(ik)) <
          1e-12);

    const Barrier1DSolution left(k, Side::left, bar, consts);
    CHECK(std::abs(left(3.0) - left.prefactor * bc.T * std::exp(3.0 * ik)) <
          1e-12);
}

TEST_CASE("flux conservation and reciprocity hold across the spectrum",
          "[barrier1d]") {
    const PhysConsts consts;
    const auto bar = barrier_potential();
    for (int i = 0; i < 20; ++i) {
        const double k = 0.05 * std::pow(1000.0, i / 19.0);
        const auto bc = barrier_coefficients(k, bar, consts);
        const double t2 = std::norm(bc.T);
        CHECK(std::abs(t2 + std::norm(bc.R_l) - 1.0) < 1e-10);
        CHECK(std::abs(t2 + std::norm(bc.R_r) - 1.0) < 1e-10);
        CHECK(bc.reciprocity_defect < 1e-12);
    }
}

TEST_CASE("transmission approaches unity above the barrier", "[barrier1d]") {
    const PhysConsts consts;
    const auto bar = barrier_potential();
    double prev = 0.0;
    for (double k : {2.0, 5.0, 10.0, 20.0}) {
        const double t = std::abs(barrier_coefficients(k, bar, consts).T);
        CHECK(t > prev);
        CHECK(t <= 1.0 + 1e-12);
        prev = t;
    }
    CHECK(prev > 0.99);
}

TEST_CASE("line eigenfunctions reject non-positive energies", "[barrier1d]") {
    const PhysConsts consts;
    CHECK_THROWS_AS(
        eigenfunction_1d(0.3, 0.0, Side::left, barrier_potential(), consts),
        DomainViolation);
    CHECK_THROWS_AS(
        eigenfunction_1d(0.3, -2.0, Side::right, barrier_potential(), consts),
        DomainViolation);
    CHECK_THROWS_AS(Barrier1DSolution(1.0, Side::left, shell_potential(), consts),
                    DomainViolation);
}

TEST_CASE("two-sided spectral resolution reproduces the identity on a line",
          "[barrier1d]") {
    const PhysConsts consts;
    const auto fl = free_line();
    const TestFunction phi = make_test_function(1, 3.0, 0.25, fl);
    CHECK(std::abs(completeness_defect_1d(phi, phi, 1000.0, fl, consts)) < 1e-6);

    const auto bar = barrier_potential();
    const TestFunction phib = make_test_function(1, 3.0, 0.25, bar);
    CHECK(std::abs(completeness_defect_1d(phib, phib, 1000.0, bar, consts)) <
          1e-6);
}

TEST_CASE("opposite-parity packets stay orthogonal through the resolution",
          "[barrier1d]") {
    const PhysConsts consts;
    const auto bar = barrier_potential();
    const TestFunction even = make_parity_test_function(1, 4.5, 0.5, +1, bar);
    const TestFunction odd = make_parity_test_function(1, 4.5, 0.5, -1, bar);
    const cplx direct = num::quad_interval(
        [&](double x) { return cplx{even(x) * odd(x), 0.0}; }, -8.0, 9.0, {},
        {0.0, 1.0});
    CHECK(std::abs(direct) < 1e-8);
    CHECK(std::abs(completeness_defect_1d(even, odd, 400.0, bar, consts)) < 1e-6);

    CHECK_THROWS_AS(make_parity_test_function(1, 4.5, 0.5, 0, bar),
                    DomainViolation);
    CHECK_THROWS_AS(make_parity_test_function(1, 4.5, 0.5, 1, shell_potential()),
                    DomainViolation);
}

TEST_CASE("position and momentum close the canonical commutator", "[barrier1d]") {
    const PhysConsts consts;
    const TestFunction phi = make_test_function(2, 3.0, 0.25, free_line());
    CHECK(commutator_check(phi, consts) < 1e-10);
    const cplx ce = commutator_expectation(phi, consts);
    CHECK(std::abs(ce - I * consts.hbar) < 1e-9);
    CHECK(uncertainty_product(phi, consts) >= 0.5 * consts.hbar - 1e-9);
}
