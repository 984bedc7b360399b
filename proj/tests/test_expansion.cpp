#include "catch2/catch_amalgamated.hpp"

#include <cmath>
#include <vector>

#include "gamow/expansion.hpp"

using namespace gamow;

namespace {

const double gamma1 = 0.086299322109399488; // frozen width of the first pole

PiecewiseConstantPotential free_radial() {
    return {Geometry::radial, {1.0}, {0.0, 0.0}};
}

} // namespace

TEST_CASE("spectral resolution separates disjoint packets", "[expansion]") {
    const PhysConsts consts;
    const auto shell = shell_potential();
    const TestFunction a = make_test_function(1, 0.3, 0.05, shell);
    const TestFunction b = make_test_function(1, 3.5, 0.05, shell);
    CHECK(std::abs(completeness_defect_radial(a, b, 21000.0, shell, consts)) <
          1e-10);
    CHECK_THROWS_AS(completeness_defect_radial(a, b, 0.0, shell, consts),
                    DomainViolation);
}

TEST_CASE("free radial states satisfy Parseval's identity", "[expansion]") {
    const PhysConsts consts;
    const auto fr = free_radial();
    const TestFunction phi = make_test_function(1, 0.5, 0.09, fr);
    CHECK(std::abs(completeness_defect_radial(phi, phi, 7000.0, fr, consts)) <
          1e-6);
}

TEST_CASE("the transition amplitude starts at the plain overlap", "[expansion]") {
    const PhysConsts consts;
    const auto fr = free_radial();
    const TestFunction phi = make_test_function(1, 0.5, 0.09, fr);
    const SpectralAmplitude amp(phi, phi, fr, consts);
    CHECK(std::abs(transition_amplitude_direct(amp, 0.0) - 1.0) < 1e-6);

    const auto shell = shell_potential();
    const TestFunction a = make_test_function(1, 0.5, 0.08, shell);
    const TestFunction b = make_test_function(2, 0.5, 0.07, shell);
    const SpectralAmplitude ab(a, b, shell, consts);
    const double lo = std::max(0.0, std::min(a.support_lo(), b.support_lo()));
    const double hi = std::max(a.support_hi(), b.support_hi());
    const cplx ov = num::quad_interval(
        [&](double r) { return cplx{a(r) * b(r), 0.0}; }, lo, hi);
    CHECK(std::abs(transition_amplitude_direct(ab, 0.0) - ov) < 2e-6);

    CHECK_THROWS_AS(transition_amplitude_direct(ab, -0.1), DomainViolation);
}

TEST_CASE("unitary evolution never amplifies a normalized state", "[expansion]") {
    const PhysConsts consts;
    const auto shell = shell_potential();
    const TestFunction a = make_test_function(1, 0.5, 0.08, shell);
    const SpectralAmplitude aa(a, a, shell, consts);
    for (double t : {0.5, 2.0})
        CHECK(std::abs(transition_amplitude_direct(aa, t)) <= 1.0 + 1e-9);
}

TEST_CASE("three pole terms plus a rotated background reproduce the amplitude",
          "[expansion]") {
    const PhysConsts consts;
    const auto shell = shell_potential();
    const TestFunction a = make_test_function(1, 0.5, 0.08, shell);
    const TestFunction b = make_test_function(2, 0.5, 0.07, shell);
    BackgroundContour bc;
    bc.ray_angle = -0.5 * num::pi;
    bc.t_max = 20.0;
    const auto rep = resonance_expansion(a, b, 1.0, 3, bc,
                                         default_search_region(), shell, consts);
    REQUIRE(rep.terms.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(rep.terms[std::size_t(i)].n == i + 1);
    CHECK(rep.defect < 1e-3 * std::abs(rep.direct));

    cplx total = rep.background;
    for (const auto &tm : rep.terms) total += tm.value;
    CHECK(std::abs(total - rep.total) < 1e-15 * (1.0 + std::abs(rep.total)));
    CHECK(std::abs(rep.defect - std::abs(rep.total - rep.direct)) < 1e-15);

    CHECK_THROWS_AS(resonance_expansion(a, b, 0.0, 3, bc,
                                        default_search_region(), shell, consts),
                    TZeroRejected);
    CHECK_THROWS_AS(resonance_expansion(a, b, -1.0, 3, bc,
                                        default_search_region(), shell, consts),
                    TZeroRejected);
    CHECK_THROWS_AS(resonance_expansion(a, b, 1.0, 99, bc,
                                        default_search_region(), shell, consts),
                    Inconclusive);
}

TEST_CASE("with no poles the rotated background carries the whole amplitude",
          "[expansion]") {
    const PhysConsts consts;
    const auto fr = free_radial();
    const TestFunction phi = make_test_function(1, 0.5, 0.09, fr);
    BackgroundContour bc;
    bc.ray_angle = -0.10 * num::pi;
    bc.t_max = 25.0;
    const auto rep = resonance_expansion(phi, phi, 0.5, std::vector<Resonance>{},
                                         bc, fr, consts);
    CHECK(rep.terms.empty());
    CHECK(rep.defect < 1e-6 * std::abs(rep.direct));
}

TEST_CASE("contour guards refuse rays outside their analytic window",
          "[expansion]") {
    const PhysConsts consts;
    const auto fr = free_radial();
    const TestFunction phi = make_test_function(1, 0.5, 0.09, fr);

    const SpectralAmplitude narrow(phi, phi, fr, consts);
    for (double angle : {0.0, -num::pi}) {
        BackgroundContour bc;
        bc.ray_angle = angle;
        bc.t_max = 5.0;
        CHECK_THROWS_AS(background_integral(narrow, 0.5, bc), DomainViolation);
    }
    BackgroundContour neg;
    neg.ray_angle = -0.3 * num::pi;
    neg.t_max = -1.0;
    CHECK_THROWS_AS(background_integral(narrow, 0.5, neg), DomainViolation);
    BackgroundContour deep;
    deep.ray_angle = -0.5 * num::pi;
    deep.t_max = 5.0; // needs Im q down to 5, amplitude was built for 0
    CHECK_THROWS_AS(background_integral(narrow, 0.5, deep), DomainViolation);

    // on the negative imaginary axis a free integrand grows without bound;
    // the divergence guard must refuse rather than return garbage
    const SpectralAmplitude wide(phi, phi, fr, consts, 25.0);
    BackgroundContour steep;
    steep.ray_angle = -0.50 * num::pi;
    steep.t_max = 25.0;
    CHECK_THROWS_AS(background_integral(wide, 0.5, steep), NonConvergence);
}

TEST_CASE("the survival amplitude decays at the first resonance's rate",
          "[expansion]") {
    const PhysConsts consts;
    const auto shell = shell_potential();
    const TestFunction phi = make_test_function(1, 0.5, 0.08, shell);
    std::vector<double> times{0.0};
    for (double t = 0.5; t <= 12.0 + 1e-9; t += 0.5) times.push_back(t);
    const auto ds = survival_series(phi, times, shell, consts);
    REQUIRE(ds.survival.size() == times.size());
    CHECK(std::abs(std::abs(ds.survival[0]) - 1.0) < 1e-6);
    CHECK(ds.window_found);
    CHECK(ds.fit_t_lo < ds.fit_t_hi);
    CHECK(std::abs(ds.fitted_gamma - gamma1) < 0.05 * gamma1);
    CHECK_NOTHROW(require_fit_window(ds));

    CHECK_THROWS_AS(survival_series(phi, {-1.0}, shell, consts), DomainViolation);
}

TEST_CASE("a potential without resonances yields no fit window", "[expansion]") {
    const PhysConsts consts;
    const auto fr = free_radial();
    const TestFunction phi = make_test_function(1, 0.5, 0.09, fr);
    const auto ds = survival_series(phi, {0.0, 1.0}, fr, consts);
    CHECK_FALSE(ds.window_found);
    CHECK(ds.fit_status.find("no resonances") != std::string::npos);
    CHECK_THROWS_AS(require_fit_window(ds), FitWindowEmpty);
}

TEST_CASE("tabulated spectral grids must tile the spectrum from zero",
          "[expansion]") {
    const PhysConsts consts;
    const auto shell = shell_potential();
    const TestFunction phi = make_test_function(1, 0.5, 0.09, shell);
    const SpectralAmplitude amp(phi, phi, shell, consts);
    using GB = SpectralTable::GridBlock;
    CHECK_THROWS_AS(SpectralTable(amp, {GB{0.0, 1.0, 0.1}, GB{1.5, 2.0, 0.1}}),
                    DomainViolation);
    CHECK_THROWS_AS(SpectralTable(amp, {GB{0.5, 1.0, 0.1}}), DomainViolation);
    CHECK_THROWS_AS(SpectralTable(amp, {GB{0.0, 1.0, -0.1}}), DomainViolation);
}

TEST_CASE("a peak-refined table matches the adaptive amplitude", "[expansion]") {
    const PhysConsts consts;
    const auto shell = shell_potential();
    const TestFunction phi = make_test_function(1, 0.5, 0.09, shell);
    const SpectralAmplitude amp(phi, phi, shell, consts);
    const double emax = amp.k_max() * amp.k_max() + 50.0;
    // a dense window across the narrow first resonance, a medium grid while
    // the packet's momentum content oscillates, a coarse far tail
    const SpectralTable tab(amp, {{0.0, 4.69, 0.002},
                                  {4.69, 6.07, 0.0005},
                                  {6.07, 600.0, 0.01},
                                  {600.0, emax, 1.0}});
    for (double t : {0.0, 0.3, 1.0}) {
        const cplx got = tab.amplitude(t);
        const cplx want = transition_amplitude_direct(amp, t);
        CHECK(std::abs(got - want) < 1e-8 * std::abs(want));
    }
}

TEST_CASE("the tabulated propagator is consistent on a smooth spectrum",
          "[expansion]") {
    const PhysConsts consts;
    const auto fr = free_radial();
    const TestFunction phi = make_test_function(1, 0.5, 0.09, fr);
    const SpectralAmplitude amp(phi, phi, fr, consts);

    // uniform-grid accuracy is limited by the sqrt(E) threshold cusp of the
    // spectral weight, not by the grid extent; 1e-3 is its honest scale
    const double t = 0.3;
    const EvolvedState ev(phi, t, fr, consts, 4500.0, 0.05);
    const double lo = std::max(0.0, phi.support_lo());
    const double hi = phi.support_hi();
    const cplx got = num::quad_interval(
        [&](double r) { return cplx{phi(r), 0.0} * ev(r); }, lo, hi, {}, {1.0});
    const cplx want = transition_amplitude_direct(amp, t);
    CHECK(std::abs(got - want) < 1e-3 * std::abs(want));

    const EvolvedState ev0(phi, 0.0, fr, consts, 4500.0, 0.05);
    for (double r : {0.35, 0.5, 0.68})
        CHECK(std::abs(ev0(r) - phi(r)) < 1e-4 * phi.peak());
}
