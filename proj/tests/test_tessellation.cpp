#include <catch_amalgamated.hpp>

#include <random>
#include <set>

#include "thurston/tessellation.hpp"
#include "support.hpp"

using namespace thurston;

TEST_CASE("tile vertices must be pairwise neighbours") {
    FareyTriangle t(Slope::infinity(), slope(1, 1), slope(0, 1));
    CHECK(t[0] == slope(0, 1));
    CHECK(t[2] == Slope::infinity());
    REQUIRE_THROWS_CODE(FareyTriangle(slope(0, 1), slope(2, 1), Slope::infinity()), Errc::InvalidPair);
}

TEST_CASE("vertices of a tile occupy all three cusp classes") {
    for (const auto& ring : tiles_within_flips(base_tile(), 6)) {
        for (const auto& t : ring) {
            std::set<CuspClass> classes;
            for (const auto& v : t.vertices()) classes.insert(v.cusp_class());
            CHECK(classes.size() == 3);
        }
    }
}

TEST_CASE("vertex map sends the base tile onto the tile") {
    for (const auto& ring : tiles_within_flips(base_tile(), 5)) {
        for (const auto& t : ring) {
            IntMoebius m = t.vertex_map();
            CHECK(t.has_vertex(m.apply(Slope::integer(0))));
            CHECK(t.has_vertex(m.apply(Slope::integer(1))));
            CHECK(t.has_vertex(m.apply(Slope::infinity())));
            CHECK(locate(interior_point(t)) == t);
        }
    }
}

TEST_CASE("flip neighbours") {
    FareyTriangle b = base_tile();
    CHECK(neighbor(b, 2) == FareyTriangle(slope(0, 1), slope(1, 2), slope(1, 1)));
    CHECK(neighbor(b, 0) == FareyTriangle(slope(1, 1), slope(2, 1), Slope::infinity()));
    CHECK(neighbor(b, 1) == FareyTriangle(slope(-1, 1), slope(0, 1), Slope::infinity()));
}

TEST_CASE("flipping twice across the same edge is the identity") {
    for (const auto& ring : tiles_within_flips(base_tile(), 5)) {
        for (const auto& t : ring) {
            for (int k = 0; k < 3; ++k) {
                FareyTriangle n = neighbor(t, k);
                bool back = false;
                for (int j = 0; j < 3; ++j) back = back || neighbor(n, j) == t;
                CHECK(back);
                // The shared edge is the pair of vertices other than t[k].
                CHECK(n.has_vertex(t[(k + 1) % 3]));
                CHECK(n.has_vertex(t[(k + 2) % 3]));
                CHECK_FALSE(n.has_vertex(t[k]));
            }
        }
    }
}

TEST_CASE("flip rings grow as in a trivalent tree") {
    auto rings = tiles_within_flips(base_tile(), 4);
    REQUIRE(rings.size() == 5);
    std::vector<std::size_t> sizes;
    for (const auto& r : rings) sizes.push_back(r.size());
    CHECK(sizes == std::vector<std::size_t>{1, 3, 6, 12, 24});
}

TEST_CASE("locate returns a tile containing the point") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> re(-4.0, 4.0), lg(-3.0, 1.0);
    for (int k = 0; k < 1000; ++k) {
        Complex tau(re(rng), std::pow(10.0, lg(rng)));
        FareyTriangle t = locate_closed(tau);
        CHECK(distance_to_tile(tau, t) == 0.0);
        // The tile's vertex map pulls tau back into the base tile.
        Complex back = t.vertex_map().inverse().apply(tau);
        CHECK(back.real() >= -1e-9);
        CHECK(back.real() <= 1.0 + 1e-9);
        CHECK(std::abs(back - Complex(0.5, 0.0)) >= 0.5 - 1e-9);
    }
}

TEST_CASE("points on edges are reported") {
    REQUIRE_THROWS_CODE(locate(Complex(0.0, 1.0)), Errc::OnEdge);
    try {
        locate(Complex(0.5, 0.5));
        FAIL("expected an edge hit");
    } catch (const OnEdgeError& e) {
        std::set<Slope> edge{e.first(), e.second()};
        CHECK(edge == std::set<Slope>{slope(0, 1), slope(1, 1)});
    }
    CHECK(locate(Complex(0.5, std::sqrt(3.0) / 2.0)) == base_tile());
    REQUIRE_THROWS_CODE(locate(Complex(0.5, -1.0)), Errc::LocateFailed);
}

TEST_CASE("neighbourhoods by hyperbolic radius") {
    Complex rho(0.5, std::sqrt(3.0) / 2.0);
    auto small = tiles_near(rho, 0.1);
    CHECK(small == std::vector<FareyTriangle>{base_tile()});
    // The incircle of an ideal triangle has radius ln(3)/2 about the centre.
    const double in_r = std::log(3.0) / 2.0;
    CHECK(tiles_near(rho, in_r - 1e-6).size() == 1);
    CHECK(tiles_near(rho, in_r + 1e-6).size() == 4);
    auto big = tiles_near(rho, 1.0);
    for (const auto& t : big) CHECK(distance_to_tile(rho, t) <= 1.0);
    // Every neighbour outside the set is farther than the radius.
    std::set<FareyTriangle> in(big.begin(), big.end());
    for (const auto& t : big) {
        for (const auto& n : neighbors(t)) {
            if (!in.count(n)) CHECK(distance_to_tile(rho, n) > 1.0);
        }
    }
}

TEST_CASE("distance to a tile agrees with sampled distance to its edges") {
    FareyTriangle t(slope(1, 3), slope(1, 2), slope(2, 5));
    Complex tau(0.0, 0.5);
    double d = distance_to_tile(tau, t);
    // Brute force over points of the three edges.
    double best = 1e300;
    for (int e = 0; e < 3; ++e) {
        double a = t[e].to_double(), b = t[(e + 1) % 3].to_double();
        double c = (a + b) / 2.0, r = std::abs(b - a) / 2.0;
        for (int k = 1; k < 20000; ++k) {
            double th = M_PI * k / 20000.0;
            best = std::min(best, hyperbolic_distance(tau, Complex(c + r * std::cos(th), r * std::sin(th))));
        }
    }
    CHECK(d == Catch::Approx(best).epsilon(1e-6));
}
