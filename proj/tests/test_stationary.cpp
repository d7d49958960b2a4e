#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "eulerps/stationary.hpp"

using namespace eulerps;

namespace {
const GasModel air{1.4};

double rel(double a, double b) { return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-300}); }

// Upstream Mach drawn from the admissible set of the given composite gain.
double random_admissible_mach(std::mt19937_64& rng, double k, const GasModel& m) {
    const CriticalMachNumbers cm = critical_machs(k, m);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const bool super_ok = std::isfinite(cm.m2) || k == 0.0;
    if (!super_ok || unit(rng) < 0.5) {
        const double hi = k > 0.0 ? cm.m1 : 1.0;
        return hi * (0.05 + 0.9 * unit(rng));
    }
    const double lo = k > 0.0 ? cm.m2 : 1.0;
    const double hi = std::isfinite(cm.m3) ? std::min(cm.m3 * 0.98, 8.0) : 8.0;
    if (hi <= lo * 1.0001) return (k > 0.0 ? cm.m1 : 1.0) * (0.05 + 0.9 * unit(rng));
    return lo * 1.001 + (hi - lo * 1.001) * unit(rng);
}

SourceCoefficients random_coeffs(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> kd(-0.6, 1.2);
    return {kd(rng), kd(rng), kd(rng)};
}

GasState random_upstream(std::mt19937_64& rng, double k, const GasModel& m) {
    std::uniform_real_distribution<double> logu(-1.6, 1.6);
    GasState s{std::exp(logu(rng)), 0.0, std::exp(logu(rng))};
    s.u = random_admissible_mach(rng, k, m) * sound_speed(s, m);
    return s;
}
}  // namespace

TEST_CASE("composite gain") {
    CHECK(SourceCoefficients{0, 0, 0}.composite() == 0.0);
    CHECK(SourceCoefficients{0, 0, 0.2}.composite() == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(SourceCoefficients{0.1, 0.1, 0.1}.composite() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_THROWS_AS(validate(SourceCoefficients{-1.5, 0, 0}), ValidationError);
}

TEST_CASE("i_value") {
    SUBCASE("k = 0 reduces to |M^2-1|/(gamma M^2+1)") {
        for (double m : {0.2, 0.7, 1.0, 1.3, 2.9}) {
            const double expect = std::fabs(m * m - 1.0) / (air.gamma * m * m + 1.0);
            CHECK(rel(i_value(m, 0.0, air), expect) < 1e-12);
        }
        CHECK(i_value(1.0, 0.0, air) == 0.0);
    }
    SUBCASE("nonexistence inside the gap") {
        CHECK_THROWS_AS(i_value(0.8, 0.2, air), NoSolutionError);
    }
    SUBCASE("1+k -> 0 pushes I toward 1") {
        CHECK(i_value(0.7, -1.0 + 1e-13, air) == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("branch_mach") {
    SUBCASE("normal-shock limb at k = 0") {
        CHECK(branch_mach(StationaryBranch::Subsonic, 2.0, 0.0, air) ==
              doctest::Approx(0.57735026918962584).epsilon(1e-12));
        CHECK(branch_mach(StationaryBranch::Supersonic, 2.0, 0.0, air) ==
              doctest::Approx(2.0).epsilon(1e-12));
        CHECK(branch_mach(StationaryBranch::Subsonic, 1.0, 0.0, air) == doctest::Approx(1.0));
        CHECK(branch_mach(StationaryBranch::Supersonic, 1.0, 0.0, air) == doctest::Approx(1.0));
    }
    SUBCASE("branch bounds") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> kd(-0.9, 1.5);
        std::uniform_real_distribution<double> md(0.05, 6.0);
        int violations = 0;
        for (int i = 0; i < 4000; ++i) {
            const double k = kd(rng), m = md(rng);
            try {
                if (branch_mach(StationaryBranch::Subsonic, m, k, air) > 1.0 + 1e-12) ++violations;
            } catch (const Error&) {
            }
            try {
                const double ms = branch_mach(StationaryBranch::Supersonic, m, k, air);
                if (ms < 1.0 - 1e-12) ++violations;
            } catch (const Error&) {
            }
        }
        CHECK(violations == 0);
    }
    SUBCASE("supersonic limb undefined when gamma I > 1") {
        CHECK_THROWS_AS(branch_mach(StationaryBranch::Supersonic, 0.2, 0.0, air),
                        BranchUndefinedError);
    }
}

TEST_CASE("downstream_mach") {
    SUBCASE("identity at k = 0") {
        for (double m : {0.1, 0.8, 1.0, 1.5, 4.0}) {
            const MachSolutions ms = downstream_mach(m, 0.0, air);
            REQUIRE(ms.count == 1);
            CHECK(rel(ms.value[0], m) < 1e-12);
        }
    }
    SUBCASE("double solution at the k < 0 sonic point") {
        const MachSolutions ms = downstream_mach(1.0, -0.2, air);
        REQUIRE(ms.count == 2);
        CHECK(ms.value[0] == doctest::Approx(0.58304916906963999).epsilon(1e-9));
        CHECK(ms.value[1] == doctest::Approx(1.9673789625378926).epsilon(1e-9));
    }
    SUBCASE("no solution inside the k > 0 gap") {
        CHECK_THROWS_AS(downstream_mach(1.0, 0.2, air), NoSolutionError);
        CHECK_THROWS_AS(downstream_mach(0.8, 0.2, air), NoSolutionError);
        CHECK_THROWS_AS(downstream_mach(1.5, 0.2, air), NoSolutionError);
    }
    SUBCASE("no solution beyond the k < 0 supersonic bound") {
        CHECK_THROWS_AS(downstream_mach(3.6, -0.2, air), NoSolutionError);
    }
    SUBCASE("single solution at the k <= -1/gamma^2 sonic point") {
        const MachSolutions ms = downstream_mach(1.0, -0.6, air);
        CHECK(ms.count == 1);
        CHECK(ms.value[0] < 1.0);
    }
}

TEST_CASE("upstream_mach") {
    SUBCASE("identity at k = 0") {
        const MachSolutions ms = upstream_mach(0.77, 0.0, air);
        REQUIRE(ms.count == 1);
        CHECK(rel(ms.value[0], 0.77) < 1e-12);
    }
    SUBCASE("double pre-image at the k > 0 sonic point") {
        const MachSolutions ms = upstream_mach(1.0, 0.2, air);
        REQUIRE(ms.count == 2);
        CHECK(ms.value[0] == doctest::Approx(0.613629160700075).epsilon(1e-9));
        CHECK(ms.value[1] == doctest::Approx(1.8129604490369293).epsilon(1e-9));
    }
    SUBCASE("no pre-image beyond the downstream supremum") {
        const CriticalMachNumbers cm = critical_machs(0.2, air);
        CHECK_THROWS_AS(upstream_mach(cm.m3 * 1.01, 0.2, air), NoSolutionError);
        CHECK(upstream_mach(cm.m3 * 0.97, 0.2, air).count == 1);
        const CriticalMachNumbers cn = critical_machs(-0.2, air);
        CHECK_THROWS_AS(upstream_mach(0.5 * (cn.m1 + cn.m2), -0.2, air), NoSolutionError);
    }
    SUBCASE("round trip downstream -> upstream recovers M-") {
        std::mt19937_64 rng(29);
        std::uniform_real_distribution<double> kd(-0.6, 1.2);
        int tested = 0;
        for (int i = 0; i < 2000 && tested < 1000; ++i) {
            const double k = kd(rng);
            const double m = random_admissible_mach(rng, k, air);
            if (std::fabs(m - 1.0) < 1e-6) continue;
            MachSolutions down;
            try {
                down = downstream_mach(m, k, air);
            } catch (const NoSolutionError&) {
                continue;
            }
            for (int b = 0; b < down.count; ++b) {
                const MachSolutions up = upstream_mach(down.value[b], k, air);
                bool found = false;
                for (int c = 0; c < up.count; ++c) found = found || rel(up.value[c], m) < 1e-10;
                CHECK(found);
            }
            ++tested;
        }
        CHECK(tested == 1000);
    }
}

TEST_CASE("state ratios") {
    SUBCASE("identity") {
        const StateRatios r = state_ratios(0.77, 0.77, {0, 0, 0}, air);
        CHECK(r.density == doctest::Approx(1.0));
        CHECK(r.velocity == doctest::Approx(1.0));
        CHECK(r.pressure == doctest::Approx(1.0));
    }
    SUBCASE("mass consistency rho_ratio * u_ratio = 1 + k1") {
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> md(0.05, 4.0);
        for (int i = 0; i < 1000; ++i) {
            const SourceCoefficients c = random_coeffs(rng);
            const StateRatios r = state_ratios(md(rng), md(rng), c, air);
            CHECK(rel(r.density * r.velocity, 1.0 + c.k1) < 1e-12);
        }
    }
}

TEST_CASE("forward_curve") {
    SUBCASE("zero source is the identity") {
        const GasState u{1.3, 0.9, 0.7};
        const auto pairs = forward_curve(u, {0, 0, 0}, air);
        REQUIRE(pairs.size() == 1);
        CHECK(rel(pairs[0].right.rho, u.rho) < 1e-14);
        CHECK(rel(pairs[0].right.u, u.u) < 1e-14);
        CHECK(rel(pairs[0].right.p, u.p) < 1e-14);
    }
    SUBCASE("nonexistence just above M1*") {
        const SourceCoefficients c{0, 0, 0.44};
        const double m1 = critical_machs(c.composite(), air).m1;
        GasState u{1.0, 0.0, 1.0};
        u.u = (m1 * 1.01) * sound_speed(u, air);
        CHECK_THROWS_AS(forward_curve(u, c, air), NoSolutionError);
    }
    SUBCASE("negative upstream velocity is the caller's job to mirror") {
        CHECK_THROWS_AS(forward_curve({1.0, -0.5, 1.0}, {0, 0, 0.1}, air), DomainError);
    }
    SUBCASE("random admissible pairs satisfy the jump relation and criterion") {
        std::mt19937_64 rng(37);
        int tested = 0;
        for (int i = 0; i < 3000 && tested < 1000; ++i) {
            const SourceCoefficients c = random_coeffs(rng);
            const GasState u = random_upstream(rng, c.composite(), air);
            std::vector<StationaryWavePair> pairs;
            try {
                pairs = forward_curve(u, c, air);
            } catch (const NoSolutionError&) {
                continue;
            }
            for (const auto& p : pairs) {
                CHECK(jump_residual(p, air) < 1e-10);
                const CriterionCheck cc = satisfies_criterion(p.left, p.right, air);
                CHECK(cc.eigenvalue_form);
                CHECK(cc.mach_form);
            }
            ++tested;
        }
        CHECK(tested == 1000);
    }
}

TEST_CASE("backward_curve") {
    SUBCASE("zero source is the identity") {
        const GasState u{0.8, 1.1, 1.9};
        const auto pairs = backward_curve(u, {0, 0, 0}, air);
        REQUIRE(pairs.size() == 1);
        CHECK(rel(pairs[0].left.rho, u.rho) < 1e-14);
    }
    SUBCASE("forward then backward returns the upstream state") {
        std::mt19937_64 rng(43);
        int tested = 0;
        for (int i = 0; i < 2000 && tested < 500; ++i) {
            const SourceCoefficients c = random_coeffs(rng);
            const GasState u = random_upstream(rng, c.composite(), air);
            if (std::fabs(mach_number(u, air) - 1.0) < 1e-6) continue;
            std::vector<StationaryWavePair> fwd;
            try {
                fwd = forward_curve(u, c, air);
            } catch (const NoSolutionError&) {
                continue;
            }
            for (const auto& p : fwd) {
                const auto back = backward_curve(p.right, c, air);
                bool found = false;
                for (const auto& q : back) {
                    found = found || (rel(q.left.rho, u.rho) < 1e-10 && rel(q.left.u, u.u) < 1e-10 &&
                                      rel(q.left.p, u.p) < 1e-10);
                }
                CHECK(found);
            }
            ++tested;
        }
        CHECK(tested == 500);
    }
    SUBCASE("forward with inverted gains undoes the forward map") {
        std::mt19937_64 rng(47);
        for (int i = 0; i < 500; ++i) {
            const SourceCoefficients c = random_coeffs(rng);
            GasState u;
            try {
                u = random_upstream(rng, c.composite(), air);
                const auto fwd = forward_curve(u, c, air);
                for (const auto& p : fwd) {
                    if (std::fabs(mach_number(p.right, air) - 1.0) < 1e-6) continue;
                    const auto inv = forward_curve(p.right, c.inverted(), air);
                    bool found = false;
                    for (const auto& q : inv)
                        found = found || (rel(q.right.rho, u.rho) < 1e-10 &&
                                          rel(q.right.u, u.u) < 1e-10 && rel(q.right.p, u.p) < 1e-10);
                    CHECK(found);
                }
            } catch (const NoSolutionError&) {
                continue;
            }
        }
    }
}

TEST_CASE("critical_machs") {
    SUBCASE("spot values at gamma = 1.4 (root-finding oracle, frozen)") {
        const CriticalMachNumbers pos = critical_machs(0.2, air);
        CHECK(pos.m1 == doctest::Approx(0.6136291607).epsilon(1e-8));
        CHECK(pos.m2 == doctest::Approx(1.8129604490).epsilon(1e-8));
        CHECK(pos.m3 == doctest::Approx(4.0298974222).epsilon(1e-8));
        const CriticalMachNumbers neg = critical_machs(-0.2, air);
        CHECK(neg.m1 == doctest::Approx(0.5830491691).epsilon(1e-8));
        CHECK(neg.m2 == doctest::Approx(1.9673789625).epsilon(1e-8));
        CHECK(neg.m3 == doctest::Approx(3.5574667840).epsilon(1e-8));
    }
    SUBCASE("k = 0 collapses the boundaries") {
        const CriticalMachNumbers cm = critical_machs(0.0, air);
        CHECK(cm.m1 == 1.0);
        CHECK(cm.m2 == 1.0);
        CHECK(std::isinf(cm.m3));
    }
    SUBCASE("supersonic boundaries disappear for k >= 1/(gamma^2-1)") {
        const double k0 = 1.0 / (air.gamma * air.gamma - 1.0);
        CHECK(std::isinf(critical_machs(k0, air).m2));
        CHECK(std::isinf(critical_machs(k0 + 0.2, air).m2));
        CHECK(std::isinf(critical_machs(k0 + 0.2, air).m3));
        // dedicated value at the singular denominator
        CHECK(critical_machs(k0, air).m1 ==
              doctest::Approx(std::sqrt((air.gamma - 1.0) / (2.0 * air.gamma))).epsilon(1e-12));
    }
    SUBCASE("k <= -1/gamma^2 removes the supersonic branch") {
        const double kc = -1.0 / (air.gamma * air.gamma);
        CHECK(std::isinf(critical_machs(kc, air).m2));
        CHECK(critical_machs(kc, air).m3 == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(critical_machs(kc - 0.3, air).m3 == 1.0);
    }
    SUBCASE("boundaries are the sonic pre-images/images") {
        for (double k : {0.05, 0.2, 0.7}) {
            const CriticalMachNumbers cm = critical_machs(k, air);
            CHECK(rel(branch_mach(StationaryBranch::Subsonic, cm.m1, k, air), 1.0) < 1e-7);
            CHECK(rel(branch_mach(StationaryBranch::Supersonic, cm.m2, k, air), 1.0) < 1e-7);
        }
        for (double k : {-0.05, -0.2, -0.45}) {
            const CriticalMachNumbers cm = critical_machs(k, air);
            CHECK(rel(branch_mach(StationaryBranch::Subsonic, 1.0, k, air), cm.m1) < 1e-10);
            CHECK(rel(branch_mach(StationaryBranch::Supersonic, 1.0, k, air), cm.m2) < 1e-10);
        }
    }
}

TEST_CASE("admissible_sets reproduce the k-signed table") {
    SUBCASE("k = 0") {
        const AdmissibleSets s = admissible_sets(0.0, air);
        CHECK(s.minus_subsonic.hi == 1.0);
        CHECK(std::isinf(s.minus_supersonic.hi));
        CHECK(s.contains_upstream(0.5, 1e-9));
        CHECK(s.contains_upstream(3.0, 1e-9));
    }
    SUBCASE("k = 0.2") {
        const CriticalMachNumbers cm = critical_machs(0.2, air);
        const AdmissibleSets s = admissible_sets(0.2, air);
        CHECK(s.minus_subsonic.hi == cm.m1);
        CHECK(s.minus_supersonic.lo == cm.m2);
        CHECK(s.plus_subsonic.hi == 1.0);
        CHECK(s.plus_supersonic.hi == cm.m3);
        CHECK(!s.contains_upstream(1.0, 1e-9));
        CHECK(!s.contains_upstream(0.7, 1e-9));
        CHECK(s.contains_upstream(cm.m1, 1e-9));
        CHECK(s.contains_upstream(cm.m2, 1e-9));
        CHECK(!s.contains_downstream(cm.m3, 1e-9));
    }
    SUBCASE("k = -0.2") {
        const CriticalMachNumbers cm = critical_machs(-0.2, air);
        const AdmissibleSets s = admissible_sets(-0.2, air);
        CHECK(s.minus_subsonic.hi == 1.0);
        CHECK(s.minus_supersonic.hi == cm.m3);
        CHECK(s.plus_subsonic.hi == cm.m1);
        CHECK(s.plus_supersonic.lo == cm.m2);
        CHECK(s.contains_upstream(1.0, 1e-9));
        CHECK(!s.contains_upstream(cm.m3, 1e-9));
        CHECK(!s.contains_downstream(0.9, 1e-9));
    }
}

TEST_CASE("criterion") {
    SUBCASE("identical states pass") {
        const GasState u{1.0, 0.7, 1.0};
        const CriterionCheck c = satisfies_criterion(u, u, air);
        CHECK(c.eigenvalue_form);
        CHECK(c.mach_form);
    }
    SUBCASE("subsonic-supersonic pairing fails") {
        GasState a{1.0, 0.0, 1.0};
        a.u = 0.5 * sound_speed(a, air);
        GasState b{1.0, 0.0, 1.0};
        b.u = 2.0 * sound_speed(b, air);
        const CriterionCheck c = satisfies_criterion(a, b, air);
        CHECK(!c.eigenvalue_form);
        CHECK(!c.mach_form);
    }
    SUBCASE("the two criteria agree on random same-sign pairs") {
        std::mt19937_64 rng(59);
        std::uniform_real_distribution<double> logu(-1.2, 1.2);
        std::uniform_real_distribution<double> md(0.05, 3.0);
        std::uniform_real_distribution<double> sign(0.0, 1.0);
        for (int i = 0; i < 2000; ++i) {
            const double s = sign(rng) < 0.5 ? -1.0 : 1.0;
            GasState a{std::exp(logu(rng)), 0.0, std::exp(logu(rng))};
            GasState b{std::exp(logu(rng)), 0.0, std::exp(logu(rng))};
            a.u = s * md(rng) * sound_speed(a, air);
            b.u = s * md(rng) * sound_speed(b, air);
            const CriterionCheck c = satisfies_criterion(a, b, air);
            CHECK(c.eigenvalue_form == c.mach_form);
        }
    }
}

TEST_CASE("is_choked") {
    SourceCoefficients c{0, 0, -0.2};
    const auto sols = downstream_mach(1.0, c.composite(), air);
    GasState up{1.0, 0.0, 1.0};
    up.u = sound_speed(up, air);
    const auto pairs = forward_curve(up, c, air);
    REQUIRE(pairs.size() == 2);
    for (const auto& p : pairs) CHECK(is_choked(p, air, 1e-9));
    CHECK(sols.count == 2);

    GasState half{1.0, 0.0, 1.0};
    half.u = 0.5 * sound_speed(half, air);
    const auto id_pair = forward_curve(half, {0, 0, 0}, air);
    CHECK(!is_choked(id_pair[0], air, 1e-9));
}

TEST_CASE("region_of") {
    CHECK(region_of(0.5, 0.8) == MachRegion::Omega1);
    CHECK(region_of(2.0, 1.5) == MachRegion::Omega4);
    CHECK(region_of(0.5, 0.5) == MachRegion::Boundary);
    CHECK(region_of(1.0, 0.4) == MachRegion::Boundary);
    CHECK_THROWS_AS(region_of(0.5, 2.0), OutsideAdmissibleError);
    SUBCASE("sign of k decides the half of the admissible square") {
        std::mt19937_64 rng(61);
        for (int i = 0; i < 500; ++i) {
            const SourceCoefficients c = random_coeffs(rng);
            const double k = c.composite();
            if (std::fabs(k) < 1e-3) continue;
            GasState u;
            try {
                u = random_upstream(rng, k, air);
                const auto pairs = forward_curve(u, c, air);
                for (const auto& p : pairs) {
                    const MachRegion r = region_of(std::fabs(mach_number(p.left, air)),
                                                   std::fabs(mach_number(p.right, air)));
                    if (r == MachRegion::Boundary) continue;
                    if (k > 0.0) CHECK((r == MachRegion::Omega1 || r == MachRegion::Omega4));
                    if (k < 0.0) CHECK((r == MachRegion::Omega2 || r == MachRegion::Omega3));
                }
            } catch (const NoSolutionError&) {
                continue;
            }
        }
    }
}

TEST_CASE("oracle_jump_solutions") {
    SUBCASE("zero source: the anchor and its normal-shock partner") {
        GasState u{1.0, 0.0, 1.0};
        u.u = 2.0 * sound_speed(u, air);
        const auto roots = oracle_jump_solutions(u, {0, 0, 0}, air);
        REQUIRE(roots.size() == 2);
        const double m0 = mach_number(roots[0], air);
        const double m1 = mach_number(roots[1], air);
        CHECK(std::min(m0, m1) == doctest::Approx(0.57735026918962584).epsilon(1e-8));
        CHECK(std::max(m0, m1) == doctest::Approx(2.0).epsilon(1e-8));
    }
    SUBCASE("empty in the nonexistence gap") {
        const SourceCoefficients c{0, 0, 0.2};
        GasState u{1.0, 0.0, 1.0};
        u.u = 1.0 * sound_speed(u, air);
        CHECK(oracle_jump_solutions(u, c, air).empty());
    }
    SUBCASE("forward_curve output appears among the oracle roots") {
        std::mt19937_64 rng(71);
        int tested = 0;
        for (int i = 0; i < 600 && tested < 200; ++i) {
            const SourceCoefficients c = random_coeffs(rng);
            GasState u;
            std::vector<StationaryWavePair> pairs;
            try {
                u = random_upstream(rng, c.composite(), air);
                if (std::fabs(mach_number(u, air) - 1.0) < 5e-3) continue;
                pairs = forward_curve(u, c, air);
            } catch (const NoSolutionError&) {
                continue;
            }
            const auto roots = oracle_jump_solutions(u, c, air);
            for (const auto& p : pairs) {
                bool found = false;
                for (const auto& r : roots) {
                    found = found || (rel(r.rho, p.right.rho) < 1e-8 && rel(r.u, p.right.u) < 1e-8 &&
                                      rel(r.p, p.right.p) < 1e-8);
                }
                CHECK(found);
            }
            ++tested;
        }
        CHECK(tested == 200);
    }
}

TEST_CASE("branch monotonicity on a quick grid") {
    for (double k : {-0.2, 0.0, 0.2}) {
        const CriticalMachNumbers cm = critical_machs(k, air);
        const double sub_hi = k > 0.0 ? cm.m1 : 1.0;
        double prev = 0.0;
        for (int i = 1; i <= 200; ++i) {
            const double m = sub_hi * i / 200.0;
            const double mp = branch_mach(StationaryBranch::Subsonic, m, k, air);
            CHECK(mp >= prev - 1e-12);
            prev = mp;
        }
        if (!std::isfinite(cm.m2)) continue;
        const double sup_lo = k > 0.0 ? cm.m2 : 1.0;
        const double sup_hi = std::isfinite(cm.m3) ? cm.m3 * 0.995 : 8.0;
        prev = 0.0;
        for (int i = 0; i <= 200; ++i) {
            const double m = sup_lo + (sup_hi - sup_lo) * i / 200.0;
            const double mp = branch_mach(StationaryBranch::Supersonic, m, k, air);
            CHECK(mp >= prev - 1e-12);
            prev = mp;
        }
    }
}

TEST_CASE("transformation identity inverts the composite gain") {
    std::mt19937_64 rng(73);
    for (int i = 0; i < 200; ++i) {
        const SourceCoefficients c = random_coeffs(rng);
        const double k = c.composite();
        const double kb = c.inverted().composite();
        CHECK(rel(kb, -k / (1.0 + k)) < 1e-12);
        const SourceCoefficients cm = c.mirrored();
        CHECK(cm.k1 == -c.k1);
        CHECK(cm.k2 == -c.k2);
        CHECK(cm.k3 == -c.k3);
    }
}
