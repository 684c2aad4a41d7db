#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "morse/geometry.hpp"

using namespace morse;

namespace {

// sample points on M by projecting random box points
std::vector<Vec3> sample_surface(const ImplicitSurface& s, std::size_t n, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Vec3> pts;
    while (pts.size() < n) {
        Vec3 x;
        for (int i = 0; i < 3; ++i)
            x[i] = s.bounding_box.lo[i] + u(rng) * (s.bounding_box.hi[i] - s.bounding_box.lo[i]);
        try {
            pts.push_back(project_to_surface(x, s));
        } catch (const NonConvergence&) {
        }
    }
    return pts;
}

// central finite differences of a scalar map
Vec3 fd_gradient(const std::function<double(const Vec3&)>& f, const Vec3& x, double h)
{
    Vec3 g;
    for (int i = 0; i < 3; ++i) {
        Vec3 hi = x, lo = x;
        hi[i] += h;
        lo[i] -= h;
        g[i] = (f(hi) - f(lo)) / (2.0 * h);
    }
    return g;
}

// graph-coordinate second-difference oracle for the restricted Hessian at a
// critical point: g(u,v) = f(project(p + u e1 + v e2))
Mat2 graph_hessian_oracle(const ImplicitSurface& s, const ScalarField& f, const Vec3& p,
                          const TangentFrame& fr, double h)
{
    const auto g = [&](double u, double v) {
        return f.value(project_to_surface(p + u * fr.e1 + v * fr.e2, s));
    };
    Mat2 H;
    H(0, 0) = (g(h, 0) - 2.0 * g(0, 0) + g(-h, 0)) / (h * h);
    H(1, 1) = (g(0, h) - 2.0 * g(0, 0) + g(0, -h)) / (h * h);
    H(0, 1) = H(1, 0) = (g(h, h) - g(h, -h) - g(-h, h) + g(-h, -h)) / (4.0 * h * h);
    return H;
}

} // namespace

TEST_CASE("projection onto the unit sphere")
{
    const auto sphere = make_unit_sphere();
    CHECK((project_to_surface({0, 0, 2}, sphere) - Vec3(0, 0, 1)).norm() < 1e-9);
    CHECK((project_to_surface({1, 0, 0}, sphere) - Vec3(1, 0, 0)).norm() < 1e-12);
}

TEST_CASE("projection onto the torus tube circle")
{
    const auto torus = make_torus(2.0, 1.0);
    CHECK((project_to_surface({3.5, 0, 0}, torus) - Vec3(3, 0, 0)).norm() < 1e-9);
}

TEST_CASE("projection errors")
{
    const auto sphere = make_unit_sphere();
    CHECK_THROWS_AS(project_to_surface({9, 9, 9}, sphere), NonConvergence);
}

TEST_CASE("riemannian gradient of the height field")
{
    const auto sphere = make_unit_sphere();
    const auto f = make_height_field();
    CHECK((riemannian_gradient(sphere, f, {1, 0, 0}) - Vec3(0, 0, 1)).norm() < 1e-12);
    CHECK(riemannian_gradient(sphere, f, {0, 0, 1}).norm() < 1e-12);
    const double s = std::sqrt(0.5);
    CHECK((riemannian_gradient(sphere, f, Vec3(0, s, s)) - Vec3(0, -0.5, 0.5)).norm() < 1e-12);
    CHECK_THROWS_AS(riemannian_gradient(sphere, f, {0.5, 0, 0}), OffSurface);
}

TEST_CASE("restricted Hessian at the poles of f = z")
{
    const auto sphere = make_unit_sphere();
    const auto f = make_height_field();
    const TangentFrame north = tangent_frame_at(sphere, {0, 0, 1});
    const Mat2 Hn = restricted_hessian(sphere, f, {0, 0, 1}, north);
    CHECK((Hn + Mat2::Identity()).norm() < 1e-12);

    const TangentFrame south = tangent_frame_at(sphere, {0, 0, -1});
    const Mat2 Hs = restricted_hessian(sphere, f, {0, 0, -1}, south);
    CHECK((Hs - Mat2::Identity()).norm() < 1e-12);

    CHECK_THROWS_AS(restricted_hessian(sphere, f, {1, 0, 0}, tangent_frame_at(sphere, {1, 0, 0})),
                    NotCritical);
}

TEST_CASE("restricted Hessian of f = z + x^2 at the north pole")
{
    const auto sphere = make_unit_sphere();
    const auto f = make_two_peak_field();
    TangentFrame fr{{0, 0, 1}, {1, 0, 0}, {0, 1, 0}};
    const Mat2 H = restricted_hessian(sphere, f, {0, 0, 1}, fr);
    Mat2 want;
    want << 1, 0, 0, -1;
    CHECK((H - want).norm() < 1e-12);

    // independent graph-coordinate oracle
    const Mat2 oracle = graph_hessian_oracle(sphere, f, {0, 0, 1}, fr, 1e-4);
    CHECK((H - oracle).norm() < 1e-5);
}

TEST_CASE("restricted Hessian oracle on the torus")
{
    const auto torus = make_vertical_torus();
    const auto f = make_tilted_height_field(0.05);
    // inner-top saddle of the tilted torus, closed form: x = eps*w, z = R + w
    const double eps = 0.05, w = -1.0 / std::sqrt(1.0 + eps * eps);
    const Vec3 p = project_to_surface(Vec3(eps * w, 0.0, 2.0 + w), torus);
    const TangentFrame fr = tangent_frame_at(torus, p);
    const Mat2 H = restricted_hessian(torus, f, p, fr);
    const Mat2 oracle = graph_hessian_oracle(torus, f, p, fr, 1e-4);
    CHECK((H - oracle).norm() < 1e-5);
    CHECK(H(0, 1) == H(1, 0));  // exact symmetry, mirrored entry
}

TEST_CASE("tangential gradients are orthogonal to the constraint gradient")
{
    const auto surfaces = {make_unit_sphere(), make_vertical_torus()};
    const auto f = make_two_peak_field();
    int k = 0;
    for (const auto& s : surfaces) {
        for (const Vec3& x : sample_surface(s, 200, 17 + k)) {
            const Vec3 tg = riemannian_gradient(s, f, x);
            const Vec3 cg = s.constraint_gradient(x);
            CHECK(std::abs(tg.dot(cg)) <= 1e-8 * std::max(1.0, tg.norm() * cg.norm()));
        }
        ++k;
    }
}

TEST_CASE("analytic gradients match finite differences")
{
    const auto sphere = make_unit_sphere();
    const auto torus = make_vertical_torus();
    const auto fields = {make_height_field(), make_two_peak_field(),
                         make_tilted_height_field(0.05)};

    for (const auto& s : {sphere, torus}) {
        for (const Vec3& x : sample_surface(s, 100, 99)) {
            const Vec3 g = s.constraint_gradient(x);
            const Vec3 fd = fd_gradient(s.constraint, x, 1e-5);
            CHECK((g - fd).norm() <= 1e-5 * std::max(1.0, g.norm()));
            for (const auto& f : fields) {
                const Vec3 gf = f.gradient(x);
                const Vec3 fdf = fd_gradient(f.value, x, 1e-5);
                CHECK((gf - fdf).norm() <= 1e-5 * std::max(1.0, gf.norm()));
            }
        }
    }
}

TEST_CASE("tangent frames are orthonormal")
{
    const auto torus = make_vertical_torus();
    for (const Vec3& x : sample_surface(torus, 100, 5)) {
        const TangentFrame fr = tangent_frame_at(torus, x);
        const Vec3 n = torus.unit_normal(x);
        CHECK(std::abs(fr.e1.norm() - 1.0) < 1e-12);
        CHECK(std::abs(fr.e2.norm() - 1.0) < 1e-12);
        CHECK(std::abs(fr.e1.dot(fr.e2)) < 1e-12);
        CHECK(std::abs(fr.e1.dot(n)) < 1e-12);
        CHECK(std::abs(fr.e2.dot(n)) < 1e-12);
    }
}
