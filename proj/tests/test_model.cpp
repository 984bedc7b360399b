#include "catch2/catch_amalgamated.hpp"

#include <cmath>
#include <string>

#include "gamow/potential.hpp"
#include "gamow/quadrature.hpp"
#include "gamow/testfunction.hpp"

using namespace gamow;

namespace {

PiecewiseConstantPotential free_radial() {
    return {Geometry::radial, {1.0}, {0.0, 0.0}};
}

double overlap(const TestFunction &a, const TestFunction &b) {
    const auto f = [&](double r) { return cplx{a(r) * b(r), 0.0}; };
    const double lo = std::max(0.0, std::min(a.support_lo(), b.support_lo()));
    const double hi = std::max(a.support_hi(), b.support_hi());
    return num::quad_interval(f, lo, hi).real();
}

} // namespace

TEST_CASE("potential constructor rejects malformed layer data", "[model]") {
    CHECK_THROWS_AS(PiecewiseConstantPotential(Geometry::radial, {2.0, 1.0},
                                               {0.0, 10.0, 0.0}),
                    DomainViolation);
    CHECK_THROWS_AS(PiecewiseConstantPotential(Geometry::radial, {-1.0, 2.0},
                                               {0.0, 10.0, 0.0}),
                    DomainViolation);
    CHECK_THROWS_AS(PiecewiseConstantPotential(Geometry::radial, {1.0, 2.0},
                                               {0.0, 10.0, 3.0}),
                    DomainViolation);
    CHECK_THROWS_AS(PiecewiseConstantPotential(Geometry::line, {0.0, 1.0},
                                               {2.0, 5.0, 0.0}),
                    DomainViolation);
}

TEST_CASE("layer wave numbers on the default shell", "[model]") {
    const PhysConsts consts;
    const PiecewiseConstantPotential shell = shell_potential();
    CHECK(consts.two_m_over_hbar2() == 1.0);

    const LayerWaveNumbers lw = layer_wavenumbers(cplx{2.0, 0.0}, shell, consts);
    REQUIRE(lw.kappa.size() == 3);
    CHECK(std::abs(lw.kappa[0] - 2.0) < 1e-15);
    CHECK(std::abs(lw.kappa[1] - I * std::sqrt(6.0)) < 1e-14);
    CHECK(std::abs(lw.kappa[2] - 2.0) < 1e-15);
    CHECK(std::abs(lw.kappa_sq[1] - cplx{-6.0, 0.0}) < 1e-14);

    const cplx q{1.0, 0.5};
    const LayerWaveNumbers lc = layer_wavenumbers(q, shell, consts);
    CHECK(std::abs(lc.kappa_sq[1] - (q * q - 10.0)) < 1e-13);
    CHECK(std::abs(lc.kappa[1] * lc.kappa[1] - lc.kappa_sq[1]) < 1e-13);
}

TEST_CASE("free potential keeps every layer wave number equal to q", "[model]") {
    const PhysConsts consts;
    const LayerWaveNumbers lw =
        layer_wavenumbers(cplx{2.0, 0.0}, free_radial(), consts);
    for (const cplx &k : lw.kappa) CHECK(std::abs(k - 2.0) < 1e-15);
}

TEST_CASE("energy-to-momentum map respects the sheet convention", "[model]") {
    const PhysConsts consts;
    CHECK(wavenumber_of_energy(cplx{4.0, 0.0}, Sheet::one, consts) == cplx{2.0, 0.0});
    CHECK(wavenumber_of_energy(cplx{4.0, 0.0}, Sheet::two, consts) == cplx{-2.0, 0.0});

    const cplx z{1.0, -0.2};
    const cplx q = wavenumber_of_energy(z, Sheet::two, consts);
    CHECK(q.imag() < 0.0);
    CHECK(std::abs(q * q - z) < 1e-12);

    CHECK_THROWS_AS(wavenumber_of_energy(cplx{0.0, 0.0}, Sheet::two, consts),
                    BranchPointError);

    for (cplx zz : {cplx{4.0, 1.0}, cplx{2.0, -3.0}, cplx{0.5, 0.1}}) {
        const cplx q1 = wavenumber_of_energy(zz, Sheet::one, consts);
        const cplx q2 = wavenumber_of_energy(zz, Sheet::two, consts);
        CHECK(std::abs(q1 + q2) == 0.0);
        const EnergyPoint back = energy_of_wavenumber(q2, consts);
        CHECK(back.sheet == Sheet::two);
        CHECK(std::abs(back.z - zz) < 1e-12 * std::abs(zz));
    }
}

TEST_CASE("test functions that touch a discontinuity are rejected", "[model]") {
    const PiecewiseConstantPotential shell = shell_potential();
    // (0.5 / 0.12)^2 = 17.4, so |phi(1)| / max ~ e^{-17.4}: nine orders above
    // the 1e-13 admission gate
    CHECK_THROWS_AS(make_test_function(1, 0.5, 0.12, shell), DomainViolation);
    CHECK_THROWS_AS(make_test_function(1, 0.9, 0.5, shell), DomainViolation);
    try {
        make_test_function(1, 0.9, 0.5, shell);
        FAIL("expected DomainViolation");
    } catch (const DomainViolation &e) {
        CHECK(std::string(e.what()).find("r = 1") != std::string::npos);
    }
    CHECK_THROWS_AS(make_test_function(0, 0.5, 0.08, shell), DomainViolation);
    CHECK_THROWS_AS(make_test_function(1, 0.5, -0.1, shell), DomainViolation);
}

TEST_CASE("accepted test functions are L2-normalized and vanish at r=0", "[model]") {
    const PiecewiseConstantPotential shell = shell_potential();
    const TestFunction tf = make_test_function(1, 0.5, 0.08, shell);
    CHECK(tf(0.0) == 0.0);
    CHECK(tf.peak() > 0.0);
    CHECK(std::abs(overlap(tf, tf) - 1.0) < 1e-10);
}

TEST_CASE("Hamiltonian image matches the hand-derived second derivative", "[model]") {
    const PhysConsts consts;
    const PiecewiseConstantPotential free_pot = free_radial();
    const double c = 0.5, sigma = 0.08;
    const TestFunction tf = make_test_function(1, c, sigma, free_pot);
    const double alpha = consts.hbar * consts.hbar / (2.0 * consts.mass);

    // phi = C r g with g = e^{-u^2/sigma^2}; recover C from one sample, then
    // H phi = -alpha C (2 g' + r g'') with g', g'' written out by hand
    const double r0 = 0.6;
    const auto gauss = [&](double r) {
        const double u = r - c;
        return std::exp(-u * u / (sigma * sigma));
    };
    const double C = tf(r0) / (r0 * gauss(r0));

    const std::vector<double> grid{0.35, 0.5, 0.62, 0.75};
    const std::vector<double> h = apply_hamiltonian(tf, free_pot, consts, 1, grid);
    double scale = 0.0;
    for (double v : h) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid[i];
        const double u = r - c;
        const double g = gauss(r);
        const double gp = -2.0 * u / (sigma * sigma) * g;
        const double gpp =
            (-2.0 / (sigma * sigma) + 4.0 * u * u / std::pow(sigma, 4)) * g;
        const double expected = -alpha * C * (2.0 * gp + r * gpp);
        CHECK(std::abs(h[i] - expected) < 1e-12 * scale);
    }

    CHECK_THROWS_AS(apply_hamiltonian(tf, free_pot, consts, 3, grid),
                    DomainViolation);
}

TEST_CASE("expectation of H is real and matches the integrated-by-parts form",
          "[model]") {
    const PhysConsts consts;
    const PiecewiseConstantPotential shell = shell_potential();
    const TestFunction tf = make_test_function(1, 0.5, 0.08, shell);
    const HamiltonianImage h = hamiltonian_image(tf, shell, consts, 1);
    const double alpha = consts.hbar * consts.hbar / (2.0 * consts.mass);
    const double lo = std::max(0.0, tf.support_lo());
    const double hi = tf.support_hi();

    const double direct =
        num::quad_interval([&](double r) { return cplx{tf(r) * h(r), 0.0}; }, lo, hi)
            .real();
    const double parts =
        num::quad_interval(
            [&](double r) {
                const double fp = tf.deriv(r, 1);
                return cplx{alpha * fp * fp + shell(r) * tf(r) * tf(r), 0.0};
            },
            lo, hi)
            .real();
    CHECK(std::abs(direct - parts) < 1e-10 * (1.0 + std::abs(direct)));
}

TEST_CASE("the square of H agrees with two applications of H", "[model]") {
    const PhysConsts consts;
    const PiecewiseConstantPotential shell = shell_potential();
    const TestFunction tf = make_test_function(2, 0.5, 0.07, shell);
    const HamiltonianImage h1 = hamiltonian_image(tf, shell, consts, 1);
    const HamiltonianImage h2 = hamiltonian_image(tf, shell, consts, 2);
    const double lo = std::max(0.0, tf.support_lo());
    const double hi = tf.support_hi();

    const double hh =
        num::quad_interval([&](double r) { return cplx{h1(r) * h1(r), 0.0}; }, lo, hi)
            .real();
    const double sq =
        num::quad_interval([&](double r) { return cplx{tf(r) * h2(r), 0.0}; }, lo, hi)
            .real();
    CHECK(std::abs(hh - sq) < 1e-10 * (1.0 + std::abs(hh)));
}

TEST_CASE("no admissible test function is an eigenfunction", "[model]") {
    const PhysConsts consts;
    const PiecewiseConstantPotential shell = shell_potential();
    const TestFunction tf = make_test_function(1, 0.5, 0.08, shell);
    const HamiltonianImage h = hamiltonian_image(tf, shell, consts, 1);
    const double lo = std::max(0.0, tf.support_lo());
    const double hi = tf.support_hi();

    const double h_norm_sq =
        num::quad_interval([&](double r) { return cplx{h(r) * h(r), 0.0}; }, lo, hi)
            .real();
    const double e =
        num::quad_interval([&](double r) { return cplx{tf(r) * h(r), 0.0}; }, lo, hi)
            .real();
    // phi normalized: min over lambda of ||H phi - lambda phi||^2
    CHECK(h_norm_sq - e * e > 0.01);
}
