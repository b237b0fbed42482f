#include <catch_amalgamated.hpp>

#include <random>

#include "thurston/builtins.hpp"
#include "thurston/correspondence.hpp"
#include "support.hpp"

using namespace thurston;

namespace {

Correspondence make(const MapJob& j) { return Correspondence(*j.X, *j.Y, ModuliNormalizer(*j.theta)); }

}  // namespace

TEST_CASE("fixed-point candidates of the first correspondence") {
    auto c = make(builtin::example1());
    auto cands = fixed_point_candidates(c);
    // X = Y on the roots of a(a - 1)(2a^3 + a^2 + a + 2) and at infinity; a = 1
    // and a = -1 (a root of the cubic) have y = 1, a puncture.
    REQUIRE(cands.size() == 4);
    CHECK(cands[0].w.value() == Complex(0.0));
    CHECK(cands[0].y.value() == Complex(0.0));
    CHECK(cands.back().w.is_infinite());
    for (const auto& k : cands) {
        if (k.w.is_infinite() || k.w.value() == Complex(0.0)) continue;
        Complex a = k.w.value();
        CHECK(std::abs(2.0 * a * a * a + a * a + a + 2.0) < 1e-12);
        CHECK(chordal_distance(c.X()(k.w), c.Y()(k.w)) < 1e-12);
        CHECK_FALSE(c.normalizer().is_puncture(k.y, 1e-6));
    }
}

TEST_CASE("fixed-point candidates of the rabbit correspondence") {
    auto c = make(builtin::rabbit());
    auto cands = fixed_point_candidates(c);
    REQUIRE(cands.size() == 3);
    int upper = 0;
    for (const auto& k : cands) {
        Complex a = k.w.value();
        CHECK(std::abs(a * a * a - a * a + 1.0) < 1e-12);
        CHECK(chordal_distance(k.y, k.w) < 1e-12);
        if (a.imag() > 0.0) {
            ++upper;
            CHECK(std::abs(a - Complex(0.87744, 0.74486)) < 1e-5);
        }
    }
    CHECK(upper == 1);
}

TEST_CASE("degenerate correspondences are rejected") {
    auto j = builtin::rabbit();
    Correspondence same(*j.Y, *j.Y, ModuliNormalizer(*j.theta));
    REQUIRE_THROWS_CODE(fixed_point_candidates(same), Errc::DegenerateCorrespondence);
    REQUIRE_THROWS_CODE(Correspondence(*j.X, RationalMap(Polynomial{2.0}, Polynomial{1.0}), ModuliNormalizer(*j.theta)),
                        Errc::DegenerateCorrespondence);
}

TEST_CASE("moduli map when X is injective") {
    auto g = moduli_map_if_injective(make(builtin::rabbit()));
    REQUIRE(g);
    std::mt19937_64 rng(73);
    std::normal_distribution<double> n;
    for (int k = 0; k < 50; ++k) {
        Complex a(n(rng), n(rng));
        CHECK(chordal_distance((*g)(a), 1.0 - 1.0 / (a * a)) < 1e-13);
    }
    CHECK_FALSE(moduli_map_if_injective(make(builtin::example1())));
}

TEST_CASE("lambda-chart maps agree with the normalizer") {
    for (const auto& name : {"example1", "rabbit"}) {
        auto c = make(builtin::get(name));
        std::mt19937_64 rng(79);
        std::normal_distribution<double> n;
        for (int k = 0; k < 50; ++k) {
            SpherePoint w = Complex(n(rng), n(rng));
            SpherePoint via = c.normalizer().to_lambda()(c.Y()(w));
            CHECK(chordal_distance(c.Y_lambda()(w), via) < 1e-12);
            via = c.normalizer().to_lambda()(c.X()(w));
            CHECK(chordal_distance(c.X_lambda()(w), via) < 1e-12);
        }
        // Punctures sit at lambda = 0, 1, infinity.
        for (CuspClass cls : {CuspClass::Zero, CuspClass::One, CuspClass::Infinity}) {
            SpherePoint l = c.normalizer().to_lambda()(c.normalizer().puncture(cls));
            CHECK(chordal_distance(l, ModuliNormalizer::lambda_puncture(cls)) < 1e-12);
        }
    }
}

TEST_CASE("predictor improves on the current point") {
    auto c = make(builtin::example1());
    const ChartedMap& y = c.Y_lambda();
    std::mt19937_64 rng(83);
    std::normal_distribution<double> n;
    for (int k = 0; k < 50; ++k) {
        SpherePoint w = Complex(n(rng), n(rng));
        SpherePoint cur = y(w);
        if (cur.is_infinite()) continue;
        SpherePoint target = cur.value() * Complex(1.0 + 1e-4, 1e-4);
        SpherePoint p = y.predict(w, cur, target);
        CHECK(chordal_distance(y(p), target) < 0.1 * chordal_distance(cur, target));
    }
}

TEST_CASE("values near a puncture keep their distance to it") {
    // Rabbit: the normalizer gives Y_lambda(w) = w^2, so 1 - Y_lambda(w) =
    // -(w - 1)(w + 1), which the expanded form loses near w = 1.
    auto c = make(builtin::rabbit());
    for (double e : {1e-6, 1e-10, 1e-13}) {
        Complex w = 1.0 + std::polar(e, 0.7);
        Modulus m = c.Y_lambda().modulus(SpherePoint(w));
        CHECK(std::abs(m.one_minus / (-(w - 1.0) * (w + 1.0)) - 1.0) < 1e-12);
        CHECK(std::abs(m.value - w * w) < 1e-14);
    }
}

TEST_CASE("level sets near a multiple preimage of a puncture are split") {
    // First built-in: the normalizer sends y = 1 to lambda = infinity, and
    // 1 - Y(w) = -(w - 1)^3 (w + 1) / (2w^3 + 1), so w = 1 is a triple
    // preimage. The factored form is an oracle independent of root finding.
    auto j = builtin::example1();
    auto c = make(j);
    const auto& m = c.normalizer().to_lambda();
    REQUIRE(std::abs(m.c() + m.d()) < 1e-15);
    auto lambda_exact = [&](Complex w) {
        Complex y = (*j.Y)(w).value();
        Complex one_minus_y = -(w - 1.0) * (w - 1.0) * (w - 1.0) * (w + 1.0) / (2.0 * w * w * w + 1.0);
        return (m.a() * y + m.b()) / (m.d() * one_minus_y);
    };
    for (double mag : {1e9, 1e13, 1e20}) {
        Complex target = std::polar(mag, 2.1);
        auto roots = c.Y_lambda().level_set(Modulus::of(target));
        std::vector<Complex> near_one;
        for (const auto& r : roots) {
            CHECK(r.multiplicity == 1);
            if (!r.point.is_infinite() && std::abs(r.point.value() - 1.0) < 1e-2) near_one.push_back(r.point.value());
        }
        REQUIRE(near_one.size() == 3);
        const double size = std::abs(near_one[0] - 1.0);
        for (std::size_t a = 0; a < 3; ++a) {
            // Storing w rounds w - 1 by eps / |w - 1| relatively, tripled in lambda.
            const double conditioning = 3.0 * 4.0 * std::numeric_limits<double>::epsilon() / std::abs(near_one[a] - 1.0);
            CHECK(std::abs(lambda_exact(near_one[a]) / target - 1.0) < 1e-12 + conditioning);
            CHECK(std::abs(std::abs(near_one[a] - 1.0) / size - 1.0) < 10.0 * size);
            for (std::size_t b = a + 1; b < 3; ++b) CHECK(std::abs(near_one[a] - near_one[b]) > size);
        }
    }
}
