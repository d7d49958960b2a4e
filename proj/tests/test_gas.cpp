#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "eulerps/gas.hpp"

using namespace eulerps;

namespace {
const GasModel air{1.4};

double rel(double a, double b) { return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-300}); }
}  // namespace

TEST_CASE("sound speed") {
    CHECK(sound_speed({1.0, 0.0, 1.0}, air) == doctest::Approx(1.1832159566199232).epsilon(1e-12));
    CHECK(sound_speed({1.4, 5.0, 1.0}, air) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sound_speed({0.125, 0.0, 0.1}, air) == doctest::Approx(1.0583005244258363).epsilon(1e-12));
}

TEST_CASE("mach number") {
    CHECK(mach_number({1.0, 0.0, 1.0}, air) == 0.0);
    CHECK(mach_number({1.4, 1.0, 1.0}, air) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(mach_number({1.0, 2.3664319132398464, 1.0}, air) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(mach_number({1.0, -2.3664319132398464, 1.0}, air) == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("total energy") {
    CHECK(total_energy({1.0, 0.0, 1.0}, air) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(total_energy({1.0, 1.0, 1.0}, air) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK_THROWS_AS(validate(GasState{2.0, 0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(validate(GasState{-1.0, 0.0, 1.0}), DomainError);
}

TEST_CASE("flux") {
    const FluxVector f0 = flux({1.0, 0.0, 1.0}, air);
    CHECK(f0.mass == 0.0);
    CHECK(f0.momentum == doctest::Approx(1.0));
    CHECK(f0.energy == 0.0);
    const FluxVector f1 = flux({1.0, 1.0, 1.0}, air);
    CHECK(f1.mass == doctest::Approx(1.0));
    CHECK(f1.momentum == doctest::Approx(2.0));
    CHECK(f1.energy == doctest::Approx(4.0));
}

TEST_CASE("eigenvalues") {
    const auto l0 = eigenvalues({1.4, 0.0, 1.0}, air);
    CHECK(l0[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(l0[1] == 0.0);
    CHECK(l0[2] == doctest::Approx(1.0).epsilon(1e-14));
    const auto l1 = eigenvalues({1.4, 1.0, 1.0}, air);
    CHECK(l1[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(l1[1] == doctest::Approx(1.0));
    CHECK(l1[2] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("conserved round trip and rejection") {
    const GasState s = primitive_from_conserved({1.0, 0.0, 2.5}, air);
    CHECK(rel(s.p, 1.0) < 1e-14);
    CHECK(s.u == 0.0);
    CHECK_THROWS_AS(primitive_from_conserved({1.0, 0.0, -1.0}, air), NonPhysicalError);
    CHECK_THROWS_AS(primitive_from_conserved({-1.0, 0.0, 2.5}, air), NonPhysicalError);
}

TEST_CASE("properties: hyperbolicity, mirror covariance, round trip") {
    std::mt19937_64 rng(91);
    std::uniform_real_distribution<double> logu(-2.3, 2.3);
    std::uniform_real_distribution<double> mach(-5.0, 5.0);
    std::uniform_real_distribution<double> gam(1.1, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const GasModel m{gam(rng)};
        GasState s{std::exp(logu(rng)), 0.0, std::exp(logu(rng))};
        s.u = mach(rng) * sound_speed(s, m);

        const auto lam = eigenvalues(s, m);
        CHECK(lam[0] < lam[1]);
        CHECK(lam[1] < lam[2]);

        const GasState ms = mirror_state(s);
        const auto mlam = eigenvalues(ms, m);
        CHECK(rel(mlam[0], -lam[2]) < 1e-14);
        CHECK(rel(mlam[1], -lam[1]) < 1e-14);
        CHECK(rel(mlam[2], -lam[0]) < 1e-14);
        const FluxVector f = flux(s, m);
        const FluxVector mf = flux(ms, m);
        CHECK(rel(mf.mass, -f.mass) < 1e-14);
        CHECK(rel(mf.momentum, f.momentum) < 1e-14);
        CHECK(rel(mf.energy, -f.energy) < 1e-14);

        const GasState back = primitive_from_conserved(conserved_from_primitive(s, m), m);
        worst = std::max({worst, rel(back.rho, s.rho), rel(back.p, s.p)});
        if (s.u != 0.0) worst = std::max(worst, std::fabs(back.u - s.u) / std::fabs(s.u));
    }
    CHECK(worst < 1e-13);
}
