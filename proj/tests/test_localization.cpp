#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cmr/localization.hpp"
#include "test_support.hpp"

using namespace cmr;

namespace {

Direction direction_from_cosines(double ux, double uy) {
    return Direction(Vec3(ux, uy, std::sqrt(1.0 - ux * ux - uy * uy)));
}

const GeneratorEstimate& pick(const std::vector<GeneratorEstimate>& gens, Axis axis, int sub) {
    for (const GeneratorEstimate& g : gens)
        if (g.axis == axis && g.subarray == sub) return g;
    throw std::logic_error("missing generator");
}

double line_objective(std::span<const Vec3> centers, std::span<const Direction> dirs,
                      const Vec3& point) {
    double s = 0.0;
    for (std::size_t m = 0; m < centers.size(); ++m) {
        const Vec3 d = point - centers[m];
        const double along = d.dot(dirs[m].u());
        s += d.squaredNorm() - along * along;
    }
    return s;
}

} // namespace

TEST_SUITE_BEGIN("localization");

TEST_CASE("generators of a broadside column are all one") {
    const ArrayGeometry g = build_cplsa({4, 7, 4, 4}, {4, 7, 4, 4});
    const std::vector<Direction> dirs{Direction(Vec3(0, 0, 1))};
    const Vector col = steering_matrix(g, dirs).col(0);
    for (const GeneratorEstimate& e : extract_generators(col, g))
        CHECK(std::abs(e.z - Complex(1.0, 0.0)) < 1e-12);
}

TEST_CASE("generators of an exact steering column carry the axis phase") {
    const ArrayGeometry g = build_cplsa({4, 7, 4, 4}, {4, 7, 4, 4});
    const std::vector<Direction> dirs{direction_from_cosines(0.3, -0.41)};
    const Vector col = steering_matrix(g, dirs).col(0);
    const auto gens = extract_generators(col, g);
    CHECK(std::abs(pick(gens, Axis::X, 1).z - std::polar(1.0, std::numbers::pi * 1.2)) < 1e-12);
    CHECK(std::abs(pick(gens, Axis::X, 2).z - std::polar(1.0, std::numbers::pi * 7 * 0.3)) < 1e-12);
    CHECK(std::abs(pick(gens, Axis::Y, 1).z - std::polar(1.0, -std::numbers::pi * 4 * 0.41)) <
          1e-12);

    // complex scaling of the column leaves every generator unchanged
    const Vector scaled = Complex((-2.3), 0.7) * col;
    const auto gens2 = extract_generators(scaled, g);
    for (std::size_t i = 0; i < gens.size(); ++i) CHECK(std::abs(gens[i].z - gens2[i].z) < 1e-12);
}

TEST_CASE("planar-grid generators use whole row/column blocks") {
    const ArrayGeometry g = build_cppa({3, 5, 3, 3}, {3, 5, 3, 3});
    const std::vector<Direction> dirs{direction_from_cosines(-0.27, 0.55)};
    const Vector col = steering_matrix(g, dirs).col(0);
    const auto gens = extract_generators(col, g);
    CHECK(std::abs(pick(gens, Axis::X, 1).z - std::polar(1.0, -std::numbers::pi * 3 * 0.27)) <
          1e-12);
    CHECK(std::abs(pick(gens, Axis::Y, 2).z - std::polar(1.0, std::numbers::pi * 5 * 0.55)) <
          1e-12);
}

TEST_CASE("coprime disambiguation recovers the cosine from wrapped phases") {
    const GeneratorEstimate z40{Complex(1.0, 0.0), 4, Axis::X, 1};
    const GeneratorEstimate z70{Complex(1.0, 0.0), 7, Axis::X, 2};
    CHECK(disambiguate_coprime(z40, z70) == doctest::Approx(0.0));

    Rng rng(5);
    for (int n = 0; n < 60; ++n) {
        const double u = rng.uniform(-0.999, 0.999);
        const GeneratorEstimate za{std::polar(1.0, std::numbers::pi * 4 * u), 4, Axis::X, 1};
        const GeneratorEstimate zb{std::polar(1.0, std::numbers::pi * 7 * u), 7, Axis::X, 2};
        CHECK(std::abs(disambiguate_coprime(za, zb) - u) < 1e-10);
    }

    // With coarse steps the combined candidate lattice is coarse enough for a
    // genuine conflict to exceed the agreement tolerance. (For steps (4,7) the
    // lattices interleave to within 1/28 cosine units, so any pair of phases
    // has a near-agreeing candidate pair and deep noise degrades gracefully
    // instead of erroring.)
    const GeneratorEstimate u0_step2{Complex(1.0, 0.0), 2, Axis::X, 1};
    const GeneratorEstimate conflicting{std::polar(1.0, 0.5 * std::numbers::pi), 3, Axis::X, 2};
    CHECK_THROWS_AS(disambiguate_coprime(u0_step2, conflicting), std::runtime_error);

    const GeneratorEstimate even{Complex(1.0, 0.0), 2, Axis::X, 1};
    const GeneratorEstimate even2{Complex(1.0, 0.0), 4, Axis::X, 2};
    CHECK_THROWS_AS(disambiguate_coprime(even, even2), std::invalid_argument);
}

TEST_CASE("virtual steering lifts an L-shaped column onto the planar grid") {
    const ArrayGeometry l = build_cplsa({4, 7, 4, 4}, {4, 7, 4, 4});
    const ArrayGeometry p = virtual_cppa(l);

    const std::vector<Direction> broadside{Direction(Vec3(0, 0, 1))};
    CHECK((virtual_steering(steering_matrix(l, broadside).col(0), l) -
           Vector::Ones(p.size()))
              .norm() < 1e-12);

    const std::vector<Direction> dirs{direction_from_cosines(0.21, -0.47)};
    const Vector col = steering_matrix(l, dirs).col(0);
    const Vector lifted = virtual_steering(col, l);
    const Vector expected = steering_matrix(p, dirs).col(0);
    CHECK((lifted - expected).norm() < 1e-10);

    // scale invariance after origin normalization
    const Vector lifted2 = virtual_steering(Complex(0.2, -1.4) * col, l);
    CHECK((lifted2 - lifted).norm() < 1e-10);

    CHECK_THROWS_AS(virtual_steering(expected, p), std::invalid_argument);
}

TEST_CASE("doa_from_cosines covers the disk including its boundary") {
    const Direction up = doa_from_cosines(0.0, 0.0);
    CHECK((up.u() - Vec3(0, 0, 1)).norm() < 1e-12);

    const Direction edge = doa_from_cosines(0.6, 0.8);
    CHECK(edge.z() == doctest::Approx(0.0));
    CHECK(edge.x() == doctest::Approx(0.6));

    CHECK_THROWS_AS(doa_from_cosines(0.9, 0.9), std::invalid_argument);
}

TEST_CASE("steering columns round-trip to their directions") {
    Rng rng(6);
    const ArrayGeometry l = build_cplsa({4, 7, 4, 4}, {4, 7, 4, 4});
    const ArrayGeometry p = build_cppa({3, 5, 3, 3}, {3, 5, 3, 3});
    for (int n = 0; n < 25; ++n) {
        const double ux = rng.uniform(-0.7, 0.7);
        const double uy = rng.uniform(-0.7, 0.7);
        if (ux * ux + uy * uy > 0.98) continue;
        const Direction d = direction_from_cosines(ux, uy);
        const std::vector<Direction> dirs{d};
        for (const ArrayGeometry* g : {&l, &p}) {
            const Vector col = steering_matrix(*g, dirs).col(0);
            const Direction est = estimate_doa(col, *g);
            CHECK(std::acos(std::clamp(std::abs(est.u().dot(d.u())), 0.0, 1.0)) < 1e-8);
        }
    }
}

TEST_CASE("fuse_lines returns exact intersections of concurrent lines") {
    const Vec3 target(0.0, 0.0, 1.0);
    std::vector<Vec3> centers{{1.0, 0.0, 0.0}, {-1.0, 0.0, 0.0}};
    std::vector<Direction> dirs{Direction(target - centers[0]), Direction(target - centers[1])};
    const LocalizationResult two = fuse_lines(centers, dirs);
    CHECK((two.position - target).norm() < 1e-12);
    CHECK(two.residual < 1e-12);

    centers.push_back(Vec3(0.5, -2.0, 0.0));
    dirs.push_back(Direction(target - centers[2]));
    const LocalizationResult three = fuse_lines(centers, dirs);
    CHECK((three.position - target).norm() < 1e-12);

    // parallel lines have no unique closest point
    std::vector<Vec3> pc{{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
    std::vector<Direction> pd{Direction(Vec3(0, 0, 1)), Direction(Vec3(0, 0, 1))};
    CHECK_THROWS_AS(fuse_lines(pc, pd), std::runtime_error);
    CHECK_THROWS_AS(fuse_lines(std::vector<Vec3>{pc[0]}, std::vector<Direction>{pd[0]}),
                    std::invalid_argument);
}

TEST_CASE("fuse_lines minimizes the summed squared line distance") {
    Rng rng(7);
    for (int n = 0; n < 10; ++n) {
        std::vector<Vec3> centers;
        std::vector<Direction> dirs;
        const Vec3 target(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(2, 8));
        for (int m = 0; m < 3; ++m) {
            const Vec3 c(rng.uniform(-10, 10), rng.uniform(-10, 10), 0.0);
            Vec3 v = (target - c).normalized();
            v += 0.01 * Vec3(rng.normal(), rng.normal(), rng.normal());
            v.z() = std::abs(v.z());
            centers.push_back(c);
            dirs.push_back(Direction(v));
        }
        const LocalizationResult res = fuse_lines(centers, dirs);
        CHECK(res.residual ==
              doctest::Approx(line_objective(centers, dirs, res.position)).epsilon(1e-9));

        // no lattice point around the solution does better
        const double h = 0.05;
        for (int dx = -2; dx <= 2; ++dx)
            for (int dy = -2; dy <= 2; ++dy)
                for (int dz = -2; dz <= 2; ++dz) {
                    const Vec3 probe = res.position + h * Vec3(dx, dy, dz);
                    CHECK(line_objective(centers, dirs, probe) >= res.residual - 1e-12);
                }
    }
}

TEST_CASE("mean angular error on aligned direction sets") {
    const std::vector<std::vector<Direction>> truth{
        {Direction(Vec3(0, 0, 1)), Direction(Vec3(1, 0, 0))},
        {Direction(Vec3(0, 1, 0)), Direction(Vec3(0, 0, 1))}};
    CHECK(mae(truth, truth) == 0.0);

    const std::vector<std::vector<Direction>> ortho{
        {Direction(Vec3(1, 0, 0)), Direction(Vec3(0, 0, 1))},
        {Direction(Vec3(0, 0, 1)), Direction(Vec3(0, 1, 0))}};
    CHECK(mae(truth, ortho) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));

    const double deg1 = std::numbers::pi / 180.0;
    const std::vector<std::vector<Direction>> t1{{Direction(Vec3(0, 0, 1))}};
    const std::vector<std::vector<Direction>> e1{
        {Direction(Vec3(std::sin(deg1), 0.0, std::cos(deg1)))}};
    CHECK(mae(t1, e1) == doctest::Approx(deg1).epsilon(1e-12));

    // unsigned: flipping an estimate across the origin changes nothing
    const std::vector<std::vector<Direction>> t2{{Direction(Vec3(1, 0, 0))}};
    const std::vector<std::vector<Direction>> e2{
        {Direction(Vec3(std::cos(deg1), std::sin(deg1), 0.0))}};
    const std::vector<std::vector<Direction>> e2_flipped{
        {Direction(Vec3(-std::cos(deg1), -std::sin(deg1), 0.0))}};
    CHECK(mae(t2, e2) == doctest::Approx(deg1).epsilon(1e-9));
    CHECK(mae(t2, e2_flipped) == doctest::Approx(mae(t2, e2)).epsilon(1e-12));

    CHECK_THROWS_AS(mae(truth, t1), std::invalid_argument);
}

TEST_SUITE_END();
