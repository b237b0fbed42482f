#include <catch_amalgamated.hpp>

#include "thurston/analysis.hpp"
#include "thurston/builtins.hpp"
#include "support.hpp"

using namespace thurston;

namespace {

// Target point and local degree of the portrait edge leaving z.
struct Edge {
    SpherePoint target;
    int degree;
};

Edge edge_at(const RamificationPortrait& p, const SpherePoint& z) {
    int k = p.find(z, 1e-9);
    REQUIRE(k >= 0);
    return {p.points[p.points[k].image].z, p.points[k].local_degree};
}

bool same(const SpherePoint& a, const SpherePoint& b) { return chordal_distance(a, b) < 1e-9; }

RationalMap poly_map(std::vector<Complex> c) { return RationalMap(Polynomial(std::move(c)), Polynomial::constant(1.0)); }

}  // namespace

TEST_CASE("portrait of the first built-in map") {
    auto job = builtin::example1();
    auto p = postcritical_portrait(*job.f, job.marked);
    CHECK(p.points.size() == 4);
    const Complex w = builtin::omega();
    auto e0 = edge_at(p, 0.0), e1 = edge_at(p, 1.0), ew = edge_at(p, w), ewb = edge_at(p, std::conj(w));
    CHECK(same(e0.target, 0.0));
    CHECK(same(e1.target, 1.0));
    CHECK(same(ew.target, std::conj(w)));
    CHECK(same(ewb.target, w));
    for (const auto& e : {e0, e1, ew, ewb}) CHECK(e.degree == 2);
    for (const auto& pt : p.points) {
        CHECK(pt.marked);
        CHECK(pt.critical);
        CHECK(pt.postcritical);
    }
    CHECK_FALSE(has_nonperiodic_marked_point(p));
}

TEST_CASE("portrait of the rabbit") {
    auto job = builtin::rabbit();
    auto p = postcritical_portrait(*job.f, job.marked);
    const Complex x = builtin::rabbit_parameter() + 1.0;
    // The marked point x from the published value.
    CHECK(std::abs(x - Complex(0.87744, 0.74486)) < 1e-5);
    CHECK(same(edge_at(p, 0.0).target, 1.0));
    CHECK(edge_at(p, 0.0).degree == 2);
    CHECK(same(edge_at(p, 1.0).target, x));
    CHECK(edge_at(p, 1.0).degree == 1);
    CHECK(same(edge_at(p, x).target, 0.0));
    CHECK(edge_at(p, SpherePoint::infinity()).target.is_infinite());
    CHECK(edge_at(p, SpherePoint::infinity()).degree == 2);
    CHECK_FALSE(has_nonperiodic_marked_point(p));
}

TEST_CASE("portrait of z^2 with three marked points") {
    auto job = builtin::z_squared();
    auto p = postcritical_portrait(*job.f, job.marked);
    CHECK(p.points.size() == 3);
    CHECK(edge_at(p, 0.0).degree == 2);
    CHECK(edge_at(p, SpherePoint::infinity()).degree == 2);
    CHECK(edge_at(p, 1.0).degree == 1);
    CHECK(same(edge_at(p, 1.0).target, 1.0));
    CHECK_FALSE(p.points[p.find(1.0)].postcritical);
}

TEST_CASE("portrait invariants") {
    for (const auto& name : {"example1", "rabbit", "lattes", "z2", "quintic"}) {
        auto job = builtin::get(name);
        auto p = postcritical_portrait(*job.f, job.marked);
        for (const auto& pt : p.points) {
            CHECK(pt.image >= 0);
            CHECK(pt.image < static_cast<int>(p.points.size()));
            CHECK(pt.local_degree >= 1);
            CHECK(pt.critical == (pt.local_degree > 1));
            CHECK(same((*job.f)(pt.z), p.points[pt.image].z));
        }
    }
}

TEST_CASE("merging is stable when the tolerance is halved") {
    for (const auto& name : {"example1", "rabbit", "lattes", "z2"}) {
        auto job = builtin::get(name);
        PortraitOptions opt;
        auto a = postcritical_portrait(*job.f, job.marked, opt);
        opt.merge_tol /= 2.0;
        auto b = postcritical_portrait(*job.f, job.marked, opt);
        REQUIRE(a.points.size() == b.points.size());
        for (std::size_t k = 0; k < a.points.size(); ++k) {
            CHECK(chordal_distance(a.points[k].z, b.points[k].z) < 1e-12);
            CHECK(a.points[k].image == b.points[k].image);
            CHECK(a.points[k].local_degree == b.points[k].local_degree);
        }
    }
}

TEST_CASE("portrait errors") {
    REQUIRE_THROWS_CODE(postcritical_portrait(*builtin::non_pcf().f, {}), Errc::NotPostcriticallyFinite);
    // z^2 - 1 has P_f = {0, -1, inf}; leaving out -1 is rejected.
    RationalMap basilica = poly_map({-1.0, 0.0, 1.0});
    REQUIRE_THROWS_CODE(postcritical_portrait(basilica, {SpherePoint(0.0), SpherePoint::infinity()}),
                        Errc::MarkedSetNotInvariant);
    // i maps to -1, which is not marked.
    RationalMap sq = *builtin::z_squared().f;
    REQUIRE_THROWS_CODE(postcritical_portrait(sq, {SpherePoint(0.0), SpherePoint::infinity(), SpherePoint(Complex(0.0, 1.0))}),
                        Errc::MarkedSetNotInvariant);
    REQUIRE_THROWS_CODE(postcritical_portrait(RationalMap(), {}), Errc::Degenerate);
}

TEST_CASE("preperiodic marked points are detected") {
    auto sq = *builtin::z_squared().f;
    auto p = postcritical_portrait(sq, {SpherePoint(0.0), SpherePoint::infinity(), SpherePoint(1.0), SpherePoint(-1.0)});
    CHECK(has_nonperiodic_marked_point(p));
}

TEST_CASE("orbifold signatures and Euler characteristic") {
    for (const auto& name : {"example1", "rabbit"}) {
        auto job = builtin::get(name);
        auto sig = orbifold_signature(postcritical_portrait(*job.f, job.marked));
        REQUIRE(sig.entries.size() == 4);
        for (const auto& e : sig.entries) CHECK_FALSE(e.nu.has_value());
        CHECK(euler_characteristic(sig) == Rational(-2));
        CHECK(is_hyperbolic(sig));
    }

    auto basilica = orbifold_signature(postcritical_portrait(poly_map({-1.0, 0.0, 1.0}), {}));
    REQUIRE(basilica.entries.size() == 3);
    for (const auto& e : basilica.entries) CHECK_FALSE(e.nu.has_value());
    CHECK(euler_characteristic(basilica) == Rational(-1));

    auto lattes = orbifold_signature(postcritical_portrait(*builtin::lattes().f, {}));
    REQUIRE(lattes.entries.size() == 4);
    for (const auto& e : lattes.entries) CHECK(to_string(e.nu) == "2");
    CHECK(euler_characteristic(lattes) == Rational(0));
    CHECK_FALSE(is_hyperbolic(lattes));

    // z^2: two fixed critical points, cone order infinity at each.
    auto sq = orbifold_signature(postcritical_portrait(*builtin::z_squared().f, {}));
    CHECK(sq.entries.size() == 2);
    CHECK(euler_characteristic(sq) == Rational(0));

    CHECK(euler_characteristic(OrbifoldSignature{}) == Rational(2));
    CHECK_FALSE(is_hyperbolic(OrbifoldSignature{}));
}

TEST_CASE("cone orders are a fixed point of the relaxation") {
    for (const auto& name : {"example1", "rabbit", "lattes", "z2"}) {
        auto job = builtin::get(name);
        auto p = postcritical_portrait(*job.f, job.marked);
        auto nu = detail::relax_cone_orders(p);
        CHECK(detail::relax_cone_orders(p, nu) == nu);
    }
    // The Chebyshev map 2z^2 - 1 has P_f = {-1, 1, inf} with cone order 2 at
    // both finite points.
    auto cheb = postcritical_portrait(poly_map({-1.0, 0.0, 2.0}), {});
    auto sig = orbifold_signature(cheb);
    int finite_two = 0;
    for (const auto& e : sig.entries) {
        if (e.nu && *e.nu == 2) ++finite_two;
    }
    CHECK(finite_two == 2);
    CHECK(euler_characteristic(sig) == Rational(0));
}

TEST_CASE("circles through three points") {
    CHECK(circle_through(0.0, 1.0, SpherePoint::infinity()).is_line());
    Circle u = circle_through(1.0, builtin::omega(), std::conj(builtin::omega()));
    CHECK_FALSE(u.is_line());
    CHECK(std::abs(u.center()) < 1e-15);
    CHECK(u.radius() == Catch::Approx(1.0));
    Circle c = circle_through(0.0, 1.0, Complex(0.0, 1.0));
    CHECK(std::abs(c.center() - Complex(0.5, 0.5)) < 1e-15);
    CHECK(c.radius() == Catch::Approx(std::sqrt(2.0) / 2.0));
    CHECK(circle_through(0.0, 1.0, 2.0).is_line());
    REQUIRE_THROWS_CODE(circle_through(0.0, 0.0, 1.0), Errc::Degenerate);
    for (int k = 0; k < 16; ++k) CHECK(c.distance(c.sample(k / 16.0)) < 1e-14);
    CHECK(c.distance(SpherePoint::infinity()) == 1.0);
    CHECK(Circle::real_line().distance(SpherePoint::infinity()) == 0.0);
}

TEST_CASE("the quintic fixes its four critical points") {
    auto p = postcritical_portrait(*builtin::quintic().f, {});
    CHECK(p.points.size() == 4);
    for (const Complex z : {Complex(1.0), Complex(-1.0), Complex(0.0, 1.0), Complex(0.0, -1.0)}) {
        CHECK(same(edge_at(p, z).target, z));
        CHECK(edge_at(p, z).degree == 3);
    }
}

TEST_CASE("circle to circle checks") {
    auto q = builtin::quintic();
    auto res = check_circle_to_circle(*q.f, *q.circle);
    CHECK(res.pass);
    CHECK(res.max_deviation <= 1e-9);
    REQUIRE(res.image);
    CHECK(std::abs(res.image->center()) < 1e-9);
    CHECK(res.image->radius() == Catch::Approx(1.0));
    CHECK(chordal_distance((*q.f)(Complex(0.0, 1.0)), Complex(0.0, 1.0)) < 1e-15);

    auto sq = check_circle_to_circle(*builtin::z_squared().f, Circle::real_line());
    CHECK(sq.pass);

    REQUIRE_THROWS_CODE(check_circle_to_circle(*builtin::off_circle().f, Circle::unit_circle()),
                        Errc::CriticalPointsOffCircle);
}

TEST_CASE("circle check is stable under doubled sampling") {
    auto q = builtin::quintic();
    auto a = check_circle_to_circle(*q.f, *q.circle, 256);
    auto b = check_circle_to_circle(*q.f, *q.circle, 512);
    CHECK(a.pass == b.pass);
    CHECK(std::abs(a.max_deviation - b.max_deviation) < 2e-9);
}

TEST_CASE("graph invariance for the built-in correspondences") {
    for (const auto& name : {"example1", "rabbit"}) {
        auto job = builtin::get(name);
        auto res = check_graph_invariance(*job.X, *job.Y, *job.circle);
        CHECK(res.pass);
        CHECK(res.samples == 256);
        CHECK(res.max_deviation <= 1e-9);
    }
    auto job = builtin::rabbit();
    RationalMap shifted(job.Y->num() + job.Y->den() * Complex(0.0, 1.0), job.Y->den());
    RationalMap x = RationalMap(Polynomial{0.0, 1.0}, Polynomial{1.0});
    RationalMap y(Polynomial{Complex(0.0, 1.0), 1.0}, Polynomial{1.0});
    auto control = check_graph_invariance(x, y, Circle::real_line());
    CHECK_FALSE(control.pass);
    CHECK(control.max_deviation == Catch::Approx(1.0));
    CHECK_FALSE(check_graph_invariance(*job.X, shifted, *job.circle).pass);
}
