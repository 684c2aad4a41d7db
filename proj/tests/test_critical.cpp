#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "morse/critical.hpp"

using namespace morse;

namespace {

bool has_point(const std::vector<CriticalPoint>& cps, const Vec3& p, double tol = 1e-7)
{
    return std::any_of(cps.begin(), cps.end(),
                       [&](const CriticalPoint& c) { return (c.position - p).norm() < tol; });
}

std::vector<int> index_pattern(const std::vector<CriticalPoint>& cps)
{
    std::vector<int> idx;
    for (const auto& c : cps) idx.push_back(c.index);
    std::sort(idx.begin(), idx.end());
    return idx;
}

// chart oracle for the vertical torus: f as a function of the two angles,
// critical points located by dense sampling plus Newton on finite-difference
// gradients of the chart function
std::vector<Vec3> torus_chart_critical_oracle(const ScalarField& f, double R, double r)
{
    const auto point = [&](double u, double v) {
        const double rho = R + r * std::cos(v);
        return Vec3(r * std::sin(v), rho * std::cos(u), rho * std::sin(u));
    };
    const auto g = [&](double u, double v) { return f.value(point(u, v)); };

    std::vector<Vec3> found;
    const int N = 96;
    const double h = 1e-6;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            double u = 2.0 * M_PI * i / N, v = 2.0 * M_PI * j / N;
            // Newton on grad(g) with FD derivatives
            bool ok = false;
            for (int it = 0; it < 40; ++it) {
                const double gu = (g(u + h, v) - g(u - h, v)) / (2 * h);
                const double gv = (g(u, v + h) - g(u, v - h)) / (2 * h);
                if (std::abs(gu) < 1e-10 && std::abs(gv) < 1e-10) {
                    ok = true;
                    break;
                }
                const double guu = (g(u + h, v) - 2 * g(u, v) + g(u - h, v)) / (h * h);
                const double gvv = (g(u, v + h) - 2 * g(u, v) + g(u, v - h)) / (h * h);
                const double guv =
                    (g(u + h, v + h) - g(u + h, v - h) - g(u - h, v + h) + g(u - h, v - h)) /
                    (4 * h * h);
                const double det = guu * gvv - guv * guv;
                if (std::abs(det) < 1e-12) break;
                u -= (gvv * gu - guv * gv) / det;
                v -= (guu * gv - guv * gu) / det;
            }
            if (!ok) continue;
            const Vec3 p = point(u, v);
            if (!std::any_of(found.begin(), found.end(),
                             [&](const Vec3& q) { return (q - p).norm() < 1e-4; }))
                found.push_back(p);
        }
    return found;
}

} // namespace

TEST_CASE("round sphere has two critical points")
{
    const auto sphere = make_unit_sphere();
    const auto f = make_height_field();
    const auto res = find_critical_points(sphere, f);
    REQUIRE(res.points.size() == 2);
    CHECK_FALSE(res.seed_exhaustion_warning);
    CHECK(has_point(res.points, {0, 0, -1}));
    CHECK(has_point(res.points, {0, 0, 1}));

    // sorted by value: the minimum first
    CHECK(res.points[0].index == 0);
    CHECK(res.points[1].index == 2);
    CHECK(res.points[0].id == 0);
    CHECK(res.points[1].id == 1);
    CHECK(morse_index(res.points[1]) == 2);
    CHECK(res.points[0].unstable_frame.empty());
    CHECK(res.points[1].unstable_frame.size() == 2);
}

TEST_CASE("two-peak sphere: Lagrange oracle positions")
{
    const auto sphere = make_unit_sphere();
    const auto f = make_two_peak_field();
    const auto res = find_critical_points(sphere, f);
    REQUIRE(res.points.size() == 4);

    const double s3 = std::sqrt(3.0) / 2.0;
    CHECK(has_point(res.points, {s3, 0, 0.5}));
    CHECK(has_point(res.points, {-s3, 0, 0.5}));
    CHECK(has_point(res.points, {0, 0, 1}));
    CHECK(has_point(res.points, {0, 0, -1}));
    CHECK(index_pattern(res.points) == std::vector<int>{0, 1, 2, 2});

    for (const auto& cp : res.points) {
        if ((cp.position - Vec3(0, 0, 1)).norm() < 1e-7) {
            CHECK(cp.index == 1);
            CHECK(cp.hessian_eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-6));
            CHECK(cp.hessian_eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-6));
        }
        if ((cp.position - Vec3(0, 0, -1)).norm() < 1e-7)
            CHECK(cp.index == 0);
        if (std::abs(std::abs(cp.position.x()) - s3) < 1e-7) {
            CHECK(cp.index == 2);
            CHECK(cp.value == doctest::Approx(1.25).epsilon(1e-9));
        }
    }
}

TEST_CASE("tilted torus: four critical points, chart oracle agreement")
{
    const auto torus = make_vertical_torus();
    const auto f = make_tilted_height_field(0.05);
    const auto res = find_critical_points(torus, f);
    REQUIRE(res.points.size() == 4);
    CHECK(index_pattern(res.points) == std::vector<int>{0, 1, 1, 2});

    const auto oracle = torus_chart_critical_oracle(f, 2.0, 1.0);
    REQUIRE(oracle.size() == 4);
    for (const Vec3& p : oracle)
        CHECK(has_point(res.points, p, 1e-5));

    // closed forms from the Lagrange conditions: y = 0, x = eps*w*s,
    // z = s*(R + w) with w = ±r/sqrt(1+eps²)
    const double eps = 0.05, n = std::sqrt(1.0 + eps * eps);
    for (double w : {1.0 / n, -1.0 / n})
        for (double s : {1.0, -1.0}) {
            const Vec3 p(s * eps * w, 0.0, s * (2.0 + w));
            CHECK(has_point(res.points, p, 1e-7));
        }
}

TEST_CASE("grid refinement stability on the sphere")
{
    const auto sphere = make_unit_sphere();
    const auto f = make_two_peak_field();
    CriticalConfig cfg;
    cfg.grid_per_axis = 5;
    const auto coarse = find_critical_points(sphere, f, cfg);
    cfg.grid_per_axis = 10;
    const auto fine = find_critical_points(sphere, f, cfg);
    REQUIRE(coarse.points.size() == fine.points.size());
    for (const auto& cp : coarse.points)
        CHECK(has_point(fine.points, cp.position, cfg.dedup_radius));
}

TEST_CASE("every critical point re-verifies under a fresh Newton polish")
{
    const auto torus = make_vertical_torus();
    const auto f = make_tilted_height_field(0.05);
    const auto res = find_critical_points(torus, f);
    CriticalConfig cfg;
    for (const auto& cp : res.points) {
        Vec3 x = cp.position;
        CHECK(polish_critical_point(torus, f, x, cfg));
        CHECK((x - cp.position).norm() < cfg.dedup_radius);
        CHECK(riemannian_gradient(torus, f, x).norm() <= cfg.geom.crit_tol);
    }
}

TEST_CASE("degenerate critical points are reported")
{
    // f = z on the horizontal torus has critical circles
    const auto torus = make_torus(2.0, 1.0);
    const auto f = make_height_field();
    CHECK_THROWS_AS(find_critical_points(torus, f), DegenerateCritical);
}

TEST_CASE("eigenvector sign convention")
{
    CHECK(canonical_eigvec_sign(Vec3(0, 0, -1)) == Vec3(0, 0, 1));
    CHECK(canonical_eigvec_sign(Vec3(0.1, -0.9, 0)) == Vec3(-0.1, 0.9, 0));
    // tie on magnitude: first coordinate decides
    const Vec3 t = canonical_eigvec_sign(Vec3(-0.5, 0.5, 0));
    CHECK(t.x() == 0.5);
    CHECK(t.y() == -0.5);
}
