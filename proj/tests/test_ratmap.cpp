#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dynamo/ratmap.hpp"

using namespace dynamo;

static RationalMap power2() { return RationalMap({{0, 0}, {0, 0}, {1, 0}}, {{1, 0}}); }
static RationalMap basilica() { return RationalMap({{-1, 0}, {0, 0}, {1, 0}}, {{1, 0}}); }
static RationalMap chebyshev() { return RationalMap({{-2, 0}, {0, 0}, {1, 0}}, {{1, 0}}); }
static RationalMap newton_cubic() {
    // (2z^3 + 1) / (3z^2)
    return RationalMap({{1, 0}, {0, 0}, {0, 0}, {2, 0}}, {{0, 0}, {0, 0}, {3, 0}});
}

// Independent oracle for the spherical derivative: chordal difference quotient
// with Richardson extrapolation over two step sizes.
static double fd_spherical_derivative(const RationalMap& f, SpherePoint z) {
    auto quotient = [&](double h) {
        double worst = 0.0;
        for (int k = 0; k < 8; ++k) {
            cplx dir = std::exp(cplx(0, 2 * M_PI * k / 8.0));
            SpherePoint z2(z.z + h * dir);
            double q = chordal(f.evaluate(z), f.evaluate(z2)) / chordal(z, z2);
            worst = std::max(worst, q);
        }
        return worst;
    };
    double q1 = quotient(1e-5), q2 = quotient(5e-6);
    return 2 * q2 - q1;
}

TEST_CASE("evaluate handles poles and infinity projectively") {
    CHECK(chordal(basilica().evaluate(SpherePoint(0, 0)), SpherePoint(-1, 0)) < 1e-14);
    CHECK(chordal(newton_cubic().evaluate(SpherePoint(1, 0)), SpherePoint(1, 0)) < 1e-14);
    CHECK(power2().evaluate(SpherePoint::infinity()).is_inf());
    // pole of the Newton map maps to infinity, never a failure
    CHECK(newton_cubic().evaluate(SpherePoint(0, 0)).is_inf());
}

TEST_CASE("spherical derivative matches finite-difference oracle") {
    auto f = power2();
    CHECK(f.spherical_derivative(SpherePoint(0, 0)) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(f.spherical_derivative(SpherePoint::infinity()) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(f.spherical_derivative(SpherePoint(1, 0)) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(f.spherical_derivative(SpherePoint(1, 0)) ==
          doctest::Approx(fd_spherical_derivative(f, SpherePoint(1, 0))).epsilon(1e-4));
    auto g = newton_cubic();
    for (cplx z : {cplx(0.4, 0.3), cplx(-1.2, 0.7), cplx(2.5, -0.4)}) {
        CHECK(g.spherical_derivative(SpherePoint(z)) ==
              doctest::Approx(fd_spherical_derivative(g, SpherePoint(z))).epsilon(1e-4));
    }
}

TEST_CASE("critical points with multiplicity") {
    auto cp = power2().critical_points();
    REQUIRE(cp.size() == 2);
    int sum = 0;
    bool zero = false, inf = false;
    for (auto& [p, d] : cp) {
        sum += d - 1;
        if (p.is_inf()) {
            inf = true;
            CHECK(d == 2);
        } else if (chordal(p, SpherePoint(0, 0)) < 1e-10) {
            zero = true;
            CHECK(d == 2);
        }
    }
    CHECK(sum == 2);
    CHECK(zero);
    CHECK(inf);

    // z^3: both critical points have local degree 3
    RationalMap cube({{0, 0}, {0, 0}, {0, 0}, {1, 0}}, {{1, 0}});
    auto cp3 = cube.critical_points();
    REQUIRE(cp3.size() == 2);
    for (auto& [p, d] : cp3) CHECK(d == 3);

    // Newton cubic: oracle = roots of the numerator of N' (6 z^4 - 6 z),
    // i.e. 0 and the three cube roots of unity, each of local degree 2.
    auto nc = newton_cubic().critical_points();
    REQUIRE(nc.size() == 4);
    std::vector<cplx> expected = {cplx(0, 0), cplx(1, 0), std::exp(cplx(0, 2 * M_PI / 3)),
                                  std::exp(cplx(0, -2 * M_PI / 3))};
    for (cplx e : expected) {
        bool found = false;
        for (auto& [p, d] : nc)
            if (!p.is_inf() && std::abs(p.z - e) < 1e-8 && d == 2) found = true;
        CHECK(found);
    }
}

TEST_CASE("preimages with multiplicity and forward consistency") {
    auto f = power2();
    auto pre = f.preimages(SpherePoint(4, 0));
    REQUIRE(pre.size() == 2);
    for (auto& [p, m] : pre) {
        CHECK(m == 1);
        CHECK(std::abs(std::abs(p.z) - 2.0) < 1e-10);
        CHECK(chordal(f.evaluate(p), SpherePoint(4, 0)) < 1e-10);
    }

    auto fb = basilica();
    auto pre2 = fb.preimages(SpherePoint(-1, 0));
    REQUIRE(pre2.size() == 1);
    CHECK(pre2[0].second == 2);
    CHECK(chordal(pre2[0].first, SpherePoint(0, 0)) < 1e-8);

    // (2z^3+1)/(3z^2) at infinity: pole orders give {(0,2), (inf,1)}
    auto pn = newton_cubic().preimages(SpherePoint::infinity());
    REQUIRE(pn.size() == 2);
    bool zero2 = false, inf1 = false;
    for (auto& [p, m] : pn) {
        if (p.is_inf() && m == 1) inf1 = true;
        if (!p.is_inf() && chordal(p, SpherePoint(0, 0)) < 1e-8 && m == 2) zero2 = true;
    }
    CHECK(zero2);
    CHECK(inf1);

    // degree bookkeeping on random targets
    for (cplx w : {cplx(0.37, 0.21), cplx(-1.4, 2.2), cplx(5.0, -3.0)}) {
        auto ps = newton_cubic().preimages(SpherePoint(w));
        int total = 0;
        for (auto& [p, m] : ps) {
            total += m;
            CHECK(chordal(newton_cubic().evaluate(p), SpherePoint(w)) < 1e-10);
        }
        CHECK(total == 3);
    }
}

TEST_CASE("postcritical orbits certify PCF") {
    auto pcf = postcritical_orbit(basilica(), 1e-9, 64);
    // Post = {-1, 0, inf}; 0 has period 2, inf fixed
    CHECK(pcf.postcritical_set.size() == 3);
    bool has0 = false, hasm1 = false, hasinf = false;
    for (auto& p : pcf.postcritical_set) {
        if (p.is_inf()) hasinf = true;
        else if (chordal(p, SpherePoint(0, 0)) < 1e-9) has0 = true;
        else if (chordal(p, SpherePoint(-1, 0)) < 1e-9) hasm1 = true;
    }
    CHECK(has0);
    CHECK(hasm1);
    CHECK(hasinf);
    for (auto& rec : pcf.orbit_table) {
        if (!rec.critical_value.is_inf()) CHECK(rec.period == 2);
    }

    auto pc2 = postcritical_orbit(chebyshev(), 1e-9, 64);
    CHECK(pc2.postcritical_set.size() == 3);  // {-2, 2, inf}
    for (auto& rec : pc2.orbit_table) {
        if (!rec.critical_value.is_inf()) {
            CHECK(rec.preperiod == 1);  // -2 -> 2 -> 2
            CHECK(rec.period == 1);
        }
    }

    // PCF closure invariant
    for (auto& p : pc2.postcritical_set)
        CHECK(pc2.in_postcritical(chebyshev().evaluate(p), 1e-8));

    // non-PCF map must fail
    RationalMap generic({{0.3, 0.1}, {0, 0}, {1, 0}}, {{1, 0}});
    CHECK_THROWS_AS(postcritical_orbit(generic, 1e-9, 128), NotPCF);
}

TEST_CASE("airplane parameter refinement") {
    // Oracle: the real root of c^3 + 2c^2 + c + 1 = 0 via the polynomial
    // solver (independent of the Newton recurrence in the implementation).
    auto roots = poly_roots({{1, 0}, {1, 0}, {2, 0}, {1, 0}});
    cplx oracle;
    for (cplx r : roots)
        if (std::abs(r.imag()) < 1e-9) oracle = r;
    CHECK(oracle.real() == doctest::Approx(-1.7548777).epsilon(1e-6));

    cplx refined = refine_cycle_parameter("quadratic", cplx(-1.75875, 0), 3);
    CHECK(std::abs(refined - oracle) < 1e-9);

    // basilica parameter is already exact
    CHECK(std::abs(refine_cycle_parameter("quadratic", cplx(-1.0, 0), 2) - cplx(-1, 0)) < 1e-12);
}

TEST_CASE("local degree via log-slope finite differences") {
    // local degree at a certified critical point z equals the slope of
    // log|f(z+h)-f(z)| against log h
    auto f = newton_cubic();
    for (auto& [p, dloc] : f.critical_points()) {
        if (p.is_inf()) continue;
        SpherePoint fz = f.evaluate(p);
        double l1 = std::log(chordal(f.evaluate(SpherePoint(p.z + cplx(1e-3, 0))), fz));
        double l2 = std::log(chordal(f.evaluate(SpherePoint(p.z + cplx(1e-4, 0))), fz));
        double slope = (l1 - l2) / (std::log(1e-3) - std::log(1e-4));
        CHECK(std::lround(slope) == dloc);
    }
}

TEST_CASE("local series in charts") {
    auto f = power2();
    // At infinity, in the w = 1/z chart, z^2 reads w^2.
    auto ls = f.local_series(SpherePoint::infinity(), 8);
    CHECK(ls.in_inverted);
    CHECK(ls.out_inverted);
    CHECK(std::abs(ls.s[0]) < 1e-14);
    CHECK(std::abs(ls.s[1]) < 1e-14);
    CHECK(std::abs(ls.s[2] - cplx(1, 0)) < 1e-14);

    // basilica at -1: f(-1+t) = t^2 - 2t
    auto lb = basilica().local_series(SpherePoint(-1, 0), 6);
    CHECK(!lb.in_inverted);
    CHECK(!lb.out_inverted);
    CHECK(std::abs(lb.s[0] - cplx(0, 0)) < 1e-14);
    CHECK(std::abs(lb.s[1] - cplx(-2, 0)) < 1e-14);
    CHECK(std::abs(lb.s[2] - cplx(1, 0)) < 1e-14);
}

TEST_CASE("newton preimage solver tracks branches") {
    auto f = power2();
    auto r = f.newton_preimage(SpherePoint(4, 0), 1, SpherePoint(-1.7, 0.1));
    REQUIRE(r.has_value());
    CHECK(chordal(*r, SpherePoint(-2, 0)) < 1e-10);
    auto r2 = f.newton_preimage(SpherePoint(16, 0), 2, SpherePoint(1.9, 0.1));
    REQUIRE(r2.has_value());
    CHECK(chordal(*r2, SpherePoint(2, 0)) < 1e-10);
}
