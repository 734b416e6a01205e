#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dynamo/bottcher.hpp"

using namespace dynamo;

namespace {

RationalMap power2() { return RationalMap({{0, 0}, {0, 0}, {1, 0}}, {{1, 0}}); }
RationalMap basilica() { return RationalMap({{-1, 0}, {0, 0}, {1, 0}}, {{1, 0}}); }
RationalMap chebyshev() { return RationalMap({{-2, 0}, {0, 0}, {1, 0}}, {{1, 0}}); }
RationalMap newton_cubic() {
    return RationalMap({{1, 0}, {0, 0}, {0, 0}, {2, 0}}, {{0, 0}, {0, 0}, {3, 0}});
}

FatouAtlas make_atlas(const RationalMap& f, int res = 256) {
    auto pcf = postcritical_orbit(f);
    auto grid = label_basins(f, pcf, res, 200);
    return component_atlas(f, pcf, std::move(grid), 5e-3);
}

int comp_containing(const FatouAtlas& a, SpherePoint p) { return a.component_at(p); }

}  // namespace

TEST_CASE("power2 basin grid: unit disk in, exterior out, julia on the circle") {
    auto f = power2();
    auto pcf = postcritical_orbit(f);
    auto g = label_basins(f, pcf, 256, 200);
    int in = g.label_at(SpherePoint(0.2, 0.1));
    int out = g.label_at(SpherePoint(3.0, 0.0));
    CHECK(in >= 0);
    CHECK(out >= 0);
    CHECK(in != out);
    CHECK(g.label_at(SpherePoint(0.7, 0.0)) == in);
    CHECK(g.label_at(SpherePoint::infinity()) == out);
    // julia pixels hug |z| = 1
    CHECK(g.near_julia(SpherePoint(std::cos(0.3), std::sin(0.3)), 2.0));
    CHECK(!g.near_julia(SpherePoint(0.1, 0.0), 2.0));
}

TEST_CASE("parallel and serial basin labeling agree exactly") {
    auto f = basilica();
    auto pcf = postcritical_orbit(f);
    auto gp = label_basins(f, pcf, 128, 150, true);
    auto gs = label_basins_serial(f, pcf, 128, 150);
    CHECK(gp.labels[0] == gs.labels[0]);
    CHECK(gp.labels[1] == gs.labels[1]);
}

TEST_CASE("chebyshev: one basin, julia is the segment") {
    auto f = chebyshev();
    auto atlas = make_atlas(f);
    // escape-oracle checks: points off the segment escape to infinity's basin
    REQUIRE(atlas.components.size() == 1);
    CHECK(atlas.component_at(SpherePoint(0, 1.5)) == 0);
    CHECK(atlas.component_at(SpherePoint::infinity()) == 0);
    CHECK(atlas.components[0].center.is_inf());
    CHECK(atlas.components[0].degree_on_component == 2);
    // segment pixels are JULIA
    CHECK(atlas.grid.near_julia(SpherePoint(0.7, 0.0), 1.0));
    CHECK(atlas.grid.near_julia(SpherePoint(1.2, 0.0), 1.0));
}

TEST_CASE("power2 atlas: two fixed components of degree 2") {
    auto atlas = make_atlas(power2());
    REQUIRE(atlas.components.size() == 2);
    for (auto& c : atlas.components) {
        CHECK(c.is_periodic());
        CHECK(c.period == 1);
        CHECK(c.degree_on_component == 2);
        CHECK(c.image_id == c.id);
    }
    int in = comp_containing(atlas, SpherePoint(0.0, 0.0));
    CHECK(chordal(atlas.components[static_cast<size_t>(in)].center, SpherePoint(0, 0)) < 1e-12);
}

TEST_CASE("basilica atlas: period-2 cycle plus basin of infinity") {
    auto atlas = make_atlas(basilica());
    int c0 = comp_containing(atlas, SpherePoint(0, 0));
    int cm1 = comp_containing(atlas, SpherePoint(-1, 0));
    int cinf = comp_containing(atlas, SpherePoint::infinity());
    REQUIRE(c0 >= 0);
    REQUIRE(cm1 >= 0);
    REQUIRE(cinf >= 0);
    CHECK(c0 != cm1);
    CHECK(atlas.components[static_cast<size_t>(c0)].period == 2);
    CHECK(atlas.components[static_cast<size_t>(c0)].image_id == cm1);
    CHECK(atlas.components[static_cast<size_t>(cm1)].image_id == c0);
    CHECK(atlas.components[static_cast<size_t>(cinf)].period == 1);
    CHECK(atlas.components[static_cast<size_t>(c0)].degree_on_component == 2);
    CHECK(atlas.components[static_cast<size_t>(cm1)].degree_on_component == 1);
    // preperiodic component around z = 1 maps onto the one at 0
    int c1 = comp_containing(atlas, SpherePoint(1, 0));
    REQUIRE(c1 >= 0);
    CHECK(c1 != c0);
    CHECK(atlas.components[static_cast<size_t>(c1)].image_id == c0);
    CHECK(atlas.components[static_cast<size_t>(c1)].preperiod == 1);
    CHECK(chordal(atlas.components[static_cast<size_t>(c1)].center, SpherePoint(1, 0)) < 1e-9);
}

TEST_CASE("newton-cubic: three fixed root basins, infinity is a julia point") {
    auto atlas = make_atlas(newton_cubic());
    cplx w = std::exp(cplx(0, 2 * M_PI / 3));
    int c1 = comp_containing(atlas, SpherePoint(1, 0));
    int c2 = comp_containing(atlas, SpherePoint(w));
    int c3 = comp_containing(atlas, SpherePoint(std::conj(w)));
    REQUIRE(c1 >= 0);
    REQUIRE(c2 >= 0);
    REQUIRE(c3 >= 0);
    CHECK(c1 != c2);
    CHECK(c2 != c3);
    for (int c : {c1, c2, c3}) {
        CHECK(atlas.components[static_cast<size_t>(c)].period == 1);
        CHECK(atlas.components[static_cast<size_t>(c)].degree_on_component == 2);
    }
    // infinity is a repelling fixed Julia point (multiplier 3/2), not a center
    CHECK(atlas.grid.near_julia(SpherePoint::infinity(), 1.0));
    CHECK(newton_cubic().spherical_derivative(SpherePoint::infinity()) == doctest::Approx(1.5));
}

TEST_CASE("bottcher charts: power2 is exact") {
    auto atlas = make_atlas(power2());
    BottcherSystem bott(atlas);
    int in = comp_containing(atlas, SpherePoint(0, 0));
    int out = comp_containing(atlas, SpherePoint::infinity());
    // phi = z on the inner basin
    cplx v = bott.value(in, SpherePoint(0.3, 0.0));
    CHECK(std::abs(v - cplx(0.3, 0)) < 1e-10);
    cplx v2 = bott.value(in, SpherePoint(0.1, 0.55));
    CHECK(std::abs(v2 - cplx(0.1, 0.55)) < 1e-10);
    // phi = 1/z on the outer basin
    cplx v3 = bott.value(out, SpherePoint(2.0, 0.0));
    CHECK(std::abs(v3 - cplx(0.5, 0)) < 1e-10);
    // inverse
    SpherePoint p = bott.inverse(in, cplx(0.7, 0.2));
    CHECK(chordal(p, SpherePoint(0.7, 0.2)) < 1e-10);
}

TEST_CASE("bottcher functional equation on basilica and newton") {
    for (auto f : {basilica(), newton_cubic()}) {
        auto atlas = make_atlas(f);
        BottcherSystem bott(atlas);
        int checked = 0;
        for (auto& comp : atlas.components) {
            if (!bott.chart(comp.id).usable) continue;
            if (comp.image_id < 0 || !bott.chart(comp.image_id).usable) continue;
            for (int k = 0; k < 25; ++k) {
                double r = 0.12 + 0.76 * (k % 5) / 5.0;
                double th = (k * 0.137) - std::floor(k * 0.137);
                SpherePoint z;
                try {
                    z = bott.inverse(comp.id, r * std::exp(cplx(0, 2 * M_PI * th)));
                } catch (const std::exception&) {
                    continue;
                }
                cplx phi_z, phi_f;
                try {
                    phi_z = bott.value(comp.id, z);
                    phi_f = bott.value(comp.image_id, f.evaluate(z));
                } catch (const std::exception&) {
                    continue;
                }
                cplx pw = std::pow(phi_z, comp.degree_on_component);
                CHECK(std::abs(phi_f - pw) < 1e-9);
                checked++;
            }
        }
        CHECK(checked > 20);
    }
}

TEST_CASE("rays land: power2 and chebyshev landmarks") {
    auto atlas = make_atlas(power2());
    BottcherSystem bott(atlas);
    int in = comp_containing(atlas, SpherePoint(0, 0));
    auto ray = bott.traced_landed_ray(in, 0.0);
    CHECK(chordal(ray.landing_point, SpherePoint(1, 0)) < 1e-6);
    CHECK(ray.landing_certified);

    // chebyshev external ray 0 lands on the fixed point 2
    auto atlas2 = make_atlas(chebyshev());
    BottcherSystem bott2(atlas2);
    auto ray2 = bott2.traced_landed_ray(0, 0.0);
    CHECK(chordal(ray2.landing_point, SpherePoint(2, 0)) < 1e-6);

    // basilica: the fixed internal angle on the alpha side lands at (1-sqrt5)/2
    auto atlas3 = make_atlas(basilica());
    BottcherSystem bott3(atlas3);
    int c0 = comp_containing(atlas3, SpherePoint(0, 0));
    double alpha = (1.0 - std::sqrt(5.0)) / 2.0;
    auto ray3 = bott3.traced_landed_ray(c0, 0.0);
    CHECK(chordal(ray3.landing_point, SpherePoint(alpha, 0)) < 1e-6);
}

TEST_CASE("equipotential circles: power2") {
    auto atlas = make_atlas(power2());
    BottcherSystem bott(atlas);
    int in = comp_containing(atlas, SpherePoint(0, 0));
    auto eq = bott.equipotential(in, 0.5, 64);
    REQUIRE(eq.size() == 65);
    for (auto& p : eq) CHECK(std::abs(std::abs(p.z) - 0.5) < 1e-9);
    CHECK(chordal(eq.front(), eq.back()) < 1e-12);
}
