#include <catch_amalgamated.hpp>

#include <random>

#include "thurston/builtins.hpp"
#include "thurston/pullback.hpp"
#include "support.hpp"

using namespace thurston;

namespace {

Correspondence make(const std::string& name) {
    auto j = builtin::get(name);
    return Correspondence(*j.X, *j.Y, ModuliNormalizer(*j.theta));
}

PullbackEngine engine(const std::string& name, const AnchorSelection& sel = {}) {
    Correspondence c = make(name);
    return PullbackEngine(c, resolve_anchor(c, sel).anchor);
}

CurveClass cc(const char* text) { return CurveClass::parse(text); }

std::vector<CurveClass> classes(std::initializer_list<const char*> names) {
    std::vector<CurveClass> out;
    for (const char* n : names) out.push_back(cc(n));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("automatic anchors") {
    auto a = resolve_anchor(make("example1"));
    CHECK(a.anchor.w.value() == Complex(0.0));
    CHECK(a.anchor.y.value() == Complex(0.0));
    CHECK(std::abs(a.anchor.tau - Complex(0.5, std::sqrt(3.0) / 2.0)) < 1e-10);
    for (const auto& k : a.candidates) CHECK(k.validated);

    auto r = resolve_anchor(make("rabbit"));
    CHECK(std::abs(r.anchor.y.value() - Complex(0.87744, 0.74486)) < 1e-5);
    int validated = 0;
    for (const auto& k : r.candidates) validated += k.validated;
    CHECK(validated >= 1);
}

TEST_CASE("anchor selection modes") {
    Correspondence c = make("example1");
    auto by_index = resolve_anchor(c, {AnchorSelection::Mode::Index, 0, {}, {}});
    CHECK(by_index.anchor.candidate == 0);
    AnchorSelection near_y{AnchorSelection::Mode::NearestY, 0, SpherePoint(Complex(0.01, 0.0)), {}};
    CHECK(resolve_anchor(c, near_y).anchor.y.value() == Complex(0.0));
    REQUIRE_THROWS_CODE(resolve_anchor(c, {AnchorSelection::Mode::Index, 9, {}, {}}), Errc::ConfigError);
    AnchorSelection off{AnchorSelection::Mode::Tau, 0, {}, Complex(0.1, 0.3)};
    REQUIRE_THROWS_CODE(resolve_anchor(c, off), Errc::ValidationFailed);
}

TEST_CASE("corrupted anchors fail validation") {
    Correspondence c = make("rabbit");
    auto good = resolve_anchor(c);
    const auto& pick = good.candidates[good.anchor.candidate];

    CandidateReport moved = pick;
    moved.tau = good.anchor.tau + Complex(0.01, 0.0);
    moved.validated = false;
    validate_anchor(c, moved);
    CHECK_FALSE(moved.validated);
    CHECK(moved.residual > 1e-9);

    CandidateReport wrong_sheet = pick;
    wrong_sheet.candidate.w = SpherePoint(pick.candidate.w.value() + 0.05);
    wrong_sheet.validated = false;
    validate_anchor(c, wrong_sheet);
    CHECK_FALSE(wrong_sheet.validated);
}

TEST_CASE("sigma fixes the anchor and attracts nearby points") {
    for (const auto& name : {"example1", "rabbit"}) {
        auto e = engine(name);
        const Complex tf = e.anchor().tau;
        CHECK(hyperbolic_distance(e.sigma_at(tf), tf) <= 1e-8);
        std::mt19937_64 rng(103);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi), dist(0.3, 2.5);
        for (int k = 0; k < 10; ++k) {
            Complex tau = geodesic_point(tf, tf + tf.imag() * std::polar(1.0, angle(rng)), dist(rng));
            double prev = hyperbolic_distance(tau, tf);
            for (int n = 0; n < 6 && prev > 1e-12; ++n) {
                tau = e.sigma_at(tau);
                double d = hyperbolic_distance(tau, tf);
                CHECK(d < prev);
                prev = d;
            }
            CHECK(prev < 0.5);
        }
    }
}

TEST_CASE("tile images do not depend on the sample point") {
    for (const auto& name : {"example1", "rabbit"}) {
        auto e = engine(name);
        int tiles = 0;
        for (const auto& ring : tiles_within_flips(e.anchor_tile(), 4)) {
            for (const auto& t : ring) {
                auto s = e.tile_image_samples(t);
                CHECK(s[0] == s[1]);
                CHECK(s[1] == s[2]);
                CHECK(e.tile_image(t) == s[0]);
                ++tiles;
            }
        }
        CHECK(tiles == 46);
        // The tile of the fixed point is invariant.
        CHECK(e.tile_image(e.anchor_tile()) == e.anchor_tile());
    }
}

TEST_CASE("tile states agree with direct continuation") {
    auto e = engine("rabbit");
    for (const auto& ring : tiles_within_flips(e.anchor_tile(), 3)) {
        for (const auto& t : ring) {
            Complex c = interior_point(t);
            ContinuationState via = e.state_via_tiles(c);
            ContinuationState direct = e.state_from_anchor(c);
            CHECK(hyperbolic_distance(via.tau_image, direct.tau_image) <= 1e-8);
            CHECK(chordal_distance(via.w, direct.w) <= 1e-8);
        }
    }
}

TEST_CASE("boundary pullback on the listed slopes") {
    auto e = engine("example1");
    CHECK(e.boundary_pullback(cc("1")) == cc("1"));
    CHECK(e.boundary_pullback(cc("0")) == cc("inf"));
    CHECK(e.boundary_pullback(cc("inf")) == cc("0"));
    CHECK(e.boundary_pullback(cc("o")) == cc("o"));

    auto r = engine("rabbit");
    CHECK(r.boundary_pullback(cc("1")) == cc("inf"));
    CHECK(r.boundary_pullback(cc("inf")) == cc("0"));
    CHECK(r.boundary_pullback(cc("0")) == cc("1"));
    CHECK(r.boundary_pullback(cc("o")) == cc("o"));
}

TEST_CASE("boundary limits carry consistent evidence") {
    auto e = engine("example1");
    const BoundaryResult& b = e.boundary_detail(slope(0, 1));
    CHECK(b.source_tile.has_vertex(slope(0, 1)));
    CHECK(b.image_tile.has_vertex(Slope::infinity()));
    CHECK(b.puncture_distance <= 1e-6);
    CHECK(b.approach.consistent);
    REQUIRE(b.approach.image_depths.size() >= 4);
    CHECK(b.approach.image_depths.back() > b.approach.image_depths.front());

    auto r = engine("rabbit");
    const BoundaryResult& o = r.boundary_detail(slope(2, 1));
    CHECK(o.image == cc("o"));
    CHECK(o.puncture_distance > 1e-3);
    CHECK(o.approach.consistent);
}

TEST_CASE("entry tiles contain their cusp") {
    auto e = engine("rabbit");
    for (const char* s : {"0", "1", "inf", "1/2", "-3/7", "5/2", "13/8"}) {
        Slope r = Slope::parse(s);
        CHECK(e.entry_tile(r).has_vertex(r));
    }
}

TEST_CASE("cusp-approach pullback commutes with the tile map") {
    for (const auto& name : {"example1", "rabbit"}) {
        auto e = engine(name);
        auto rep = e.attractor();
        for (const auto& x : rep.candidates) {
            if (!x.is_essential()) continue;
            CurveClass img = e.boundary_pullback(x);
            auto by_tiles = e.boundary_by_tiles(x.slope());
            if (img.is_essential()) {
                REQUIRE(by_tiles);
                CHECK(*by_tiles == img.slope());
            } else {
                CHECK_FALSE(by_tiles);
            }
        }
    }
}

TEST_CASE("moving the anchor by a deck transformation conjugates the dynamics") {
    for (const auto& name : {"example1", "rabbit"}) {
        auto base = engine(name);
        for (Letter l : {Letter::A, Letter::BInv}) {
            IntMoebius m = generator(l);
            AnchorSelection sel;
            sel.mode = AnchorSelection::Mode::Tau;
            sel.tau = m.apply(base.anchor().tau);
            auto moved = engine(name, sel);
            CHECK(moved.anchor_tile() == FareyTriangle(m.apply(base.anchor_tile()[0]), m.apply(base.anchor_tile()[1]),
                                                       m.apply(base.anchor_tile()[2])));
            for (const auto& ring : tiles_within_flips(base.anchor_tile(), 2)) {
                for (const auto& t : ring) {
                    FareyTriangle img = base.tile_image(t);
                    FareyTriangle mt(m.apply(t[0]), m.apply(t[1]), m.apply(t[2]));
                    FareyTriangle expect(m.apply(img[0]), m.apply(img[1]), m.apply(img[2]));
                    CHECK(moved.tile_image(mt) == expect);
                }
            }
            for (const char* s : {"0", "1", "inf"}) {
                Slope r = Slope::parse(s);
                CurveClass img = base.boundary_pullback(CurveClass(r));
                CurveClass expect = img.is_essential() ? CurveClass(m.apply(img.slope())) : img;
                CHECK(moved.boundary_pullback(CurveClass(m.apply(r))) == expect);
            }
        }
    }
}

TEST_CASE("attractor of the first built-in") {
    auto e = engine("example1");
    auto rep = e.attractor(1.0);
    CHECK(rep.attractor == classes({"o", "0", "1", "inf"}));
    CHECK(rep.transition.at(cc("1")) == cc("1"));
    CHECK(rep.transition.at(cc("0")) == cc("inf"));
    CHECK(rep.transition.at(cc("inf")) == cc("0"));
    CHECK(rep.transition.at(cc("o")) == cc("o"));
    CHECK(rep.cycles.size() == 3);
    CHECK(rep.transient_max == 1);
}

TEST_CASE("attractor of the rabbit") {
    auto e = engine("rabbit");
    auto rep = e.attractor(1.0);
    CHECK(rep.attractor == classes({"o", "0", "1", "inf"}));
    CHECK(rep.transition.at(cc("1")) == cc("inf"));
    CHECK(rep.transition.at(cc("inf")) == cc("0"));
    CHECK(rep.transition.at(cc("0")) == cc("1"));
    CHECK(rep.transition.at(cc("o")) == cc("o"));
    REQUIRE(rep.cycles.size() == 2);
    CHECK(rep.transient_max == 3);
}

TEST_CASE("attractor report invariants") {
    for (const auto& name : {"example1", "rabbit"}) {
        auto e = engine(name);
        auto rep = e.attractor();
        std::set<CurveClass> attr(rep.attractor.begin(), rep.attractor.end());
        std::set<CurveClass> images;
        for (const auto& x : rep.attractor) {
            CHECK(attr.count(rep.transition.at(x)));
            images.insert(rep.transition.at(x));
        }
        CHECK(images == attr);
        for (const auto& [x, y] : rep.transition) {
            CurveClass cur = x;
            std::size_t n = 0;
            while (!attr.count(cur) && n <= rep.transition.size()) {
                cur = rep.transition.at(cur);
                ++n;
            }
            CHECK(attr.count(cur));
        }
        CHECK(std::find(rep.candidates.begin(), rep.candidates.end(), cc("o")) != rep.candidates.end());
    }
}

TEST_CASE("a small neighbourhood of an interior fixed point sees one tile") {
    auto e = engine("example1");
    auto rep = e.attractor(1e-3);
    CHECK(rep.neighbourhood == std::vector<FareyTriangle>{base_tile()});
    std::vector<CurveClass> cands = rep.candidates;
    std::sort(cands.begin(), cands.end());
    CHECK(cands == classes({"o", "0", "1", "inf"}));
}

TEST_CASE("the growth cap stops an unclosed candidate set") {
    Correspondence c = make("example1");
    EngineOptions opt;
    opt.growth_cap = 3;
    PullbackEngine e(c, resolve_anchor(c).anchor, opt);
    REQUIRE_THROWS_CODE(e.attractor(1.0), Errc::AttractorNotClosed);
}

TEST_CASE("hitting times") {
    auto e = engine("example1");
    auto rep = e.attractor();
    for (const auto& x : rep.attractor) CHECK(e.hitting_time(rep, x, 0) == 0);
    // Regression values from the branch-limit engine.
    CHECK(e.hitting_time(rep, CurveClass(slope(2, 5)), 30) == 3);
    CHECK(e.boundary_pullback(CurveClass(slope(2, 5))) == CurveClass(slope(-1, 2)));

    auto r = engine("rabbit");
    auto rrep = r.attractor();
    CHECK(r.hitting_time(rrep, CurveClass(slope(2, 5)), 30) == 1);
    CHECK(r.boundary_pullback(CurveClass(slope(2, 5))) == cc("o"));
}

TEST_CASE("sampled global attraction") {
    for (const auto& name : {"example1", "rabbit"}) {
        auto e = engine(name);
        auto rep = e.attractor();
        auto st = e.verify_global_attraction(rep, 40, 30, 30, 7);
        CHECK(st.samples == 40);
        CHECK(st.reached == 40);
        CHECK(st.failures.empty());
        CHECK(st.max_hitting_time <= 30);
    }
}
