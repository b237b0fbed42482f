#include <catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>
#include <random>

#include "thurston/polynomial.hpp"
#include "support.hpp"

using namespace thurston;

namespace {

// Eigenvalues of the companion matrix: an independent route to the roots.
std::vector<Complex> companion_roots(const Polynomial& p) {
    const int n = p.degree();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 1; k < n; ++k) m(k, k - 1) = 1.0;
    for (int k = 0; k < n; ++k) m(k, n - 1) = -p[k] / p.leading();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
    std::vector<Complex> out;
    for (int k = 0; k < n; ++k) out.push_back(es.eigenvalues()[k]);
    return out;
}

// Greedy matching distance between two root multisets of equal size.
double match_distance(std::vector<Complex> a, std::vector<Complex> b) {
    double worst = 0.0;
    for (const auto& z : a) {
        auto it = std::min_element(b.begin(), b.end(),
                                   [&](Complex u, Complex v) { return std::abs(u - z) < std::abs(v - z); });
        worst = std::max(worst, std::abs(*it - z) / std::max(1.0, std::abs(z)));
        b.erase(it);
    }
    return worst;
}

}  // namespace

TEST_CASE("evaluation and arithmetic") {
    Polynomial p{1.0, -3.0, 2.0};  // 2z^2 - 3z + 1
    CHECK(p.degree() == 2);
    CHECK(p(2.0) == Complex(3.0));
    auto [v, d] = p.eval_with_derivative(Complex(0.0, 1.0));
    CHECK(std::abs(v - Complex(-1.0, -3.0)) < 1e-15);
    CHECK(std::abs(d - Complex(-3.0, 4.0)) < 1e-15);
    Polynomial q = p * Polynomial{0.0, 1.0};
    CHECK(q.degree() == 3);
    CHECK((q - q).is_zero());
    CHECK(p.derivative()(0.0) == Complex(-3.0));
    // reversed(n) is z^n p(1/z).
    CHECK(p.reversed(2)[0] == Complex(2.0));
    CHECK(p.reversed(3)[3] == Complex(1.0));
}

TEST_CASE("roots of small polynomials with known answers") {
    auto r = all_roots(Polynomial{1.0, -3.0, 2.0});
    REQUIRE(r.size() == 2);
    CHECK(std::abs(r[0].z - Complex(0.5)) < 1e-15);
    CHECK(std::abs(r[1].z - Complex(1.0)) < 1e-15);

    auto unity = all_roots(Polynomial{-1.0, 0.0, 0.0, 0.0, 0.0, 1.0});
    REQUIRE(unity.size() == 5);
    for (const auto& x : unity) CHECK(std::abs(std::pow(x.z, 5) - 1.0) < 1e-14);
    REQUIRE_THROWS_CODE(all_roots(Polynomial::constant(2.0)), Errc::InvalidPolynomial);
}

TEST_CASE("multiple roots are merged with their multiplicity") {
    // (z - 1)^3 (z + 2) z^2
    Polynomial p = Polynomial::from_roots({1.0, 1.0, 1.0, -2.0, 0.0, 0.0});
    auto r = all_roots(p);
    REQUIRE(r.size() == 3);
    CHECK(r[0].multiplicity == 1);
    CHECK(std::abs(r[0].z + 2.0) < 1e-12);
    CHECK(r[1].multiplicity == 2);
    CHECK(r[1].z == Complex(0.0));
    CHECK(r[2].multiplicity == 3);
    CHECK(std::abs(r[2].z - 1.0) < 1e-9);

    // Double complex pair: (z^2 + 1)^2.
    auto s = all_roots(Polynomial{1.0, 0.0, 2.0, 0.0, 1.0});
    REQUIRE(s.size() == 2);
    for (const auto& x : s) {
        CHECK(x.multiplicity == 2);
        CHECK(std::abs(std::abs(x.z.imag()) - 1.0) < 1e-9);
    }
}

TEST_CASE("roots agree with companion-matrix eigenvalues") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 60; ++trial) {
        int n = 2 + trial % 9;
        std::vector<Complex> c(n + 1);
        for (auto& x : c) x = Complex(g(rng), g(rng));
        Polynomial p(c);
        auto ours = expand(all_roots(p));
        REQUIRE(static_cast<int>(ours.size()) == n);
        CHECK(match_distance(ours, companion_roots(p)) < 1e-9);
        for (const auto& z : ours) CHECK(backward_error(p, z) <= 1e-12);
    }
}

TEST_CASE("multiplicities sum to the degree") {
    std::mt19937_64 rng(37);
    std::uniform_int_distribution<int> pick(0, 3), mult(1, 3);
    const std::vector<Complex> pool{Complex(0.3, 0.4), Complex(-1.0, 0.0), Complex(2.0, -1.0), Complex(0.0, 1.5)};
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<Complex> rs;
        for (int k = 0; k < 3; ++k) {
            Complex z = pool[pick(rng)];
            for (int m = mult(rng); m > 0; --m) rs.push_back(z);
        }
        Polynomial p = Polynomial::from_roots(rs, Complex(1.5, 0.0));
        auto r = all_roots(p);
        int total = 0;
        for (const auto& x : r) total += x.multiplicity;
        CHECK(total == p.degree());
        CHECK(match_distance(expand(r), rs) < 1e-4);
    }
}

TEST_CASE("roots over a wide dynamic range") {
    // Roots 1e-6, 1, 1e6: relative accuracy is what matters.
    Polynomial p = Polynomial::from_roots({1e-6, 1.0, 1e6});
    auto r = all_roots(p);
    REQUIRE(r.size() == 3);
    CHECK(std::abs(r[0].z - 1e-6) < 1e-15);
    CHECK(std::abs(r[1].z - 1.0) < 1e-12);
    CHECK(std::abs(r[2].z - 1e6) / 1e6 < 1e-12);
}

TEST_CASE("listed root examples") {
    auto i = all_roots(Polynomial{1.0, 0.0, 1.0});
    REQUIRE(i.size() == 2);
    CHECK(std::abs(i[0].z - Complex(0.0, -1.0)) < 1e-15);
    CHECK(std::abs(i[1].z - Complex(0.0, 1.0)) < 1e-15);

    auto triple = all_roots(Polynomial::from_roots({2.0, 2.0, 2.0}));
    REQUIRE(triple.size() == 1);
    CHECK(triple[0].multiplicity == 3);
    CHECK(std::abs(triple[0].z - 2.0) < 1e-12);

    // 2a^4 - a^3 + a - 2 = (a - 1)(2a^3 + a^2 + a + 2); check by synthetic
    // division of the cubic factor.
    Polynomial quartic{-2.0, 1.0, 0.0, -1.0, 2.0};
    Polynomial cubic{2.0, 1.0, 1.0, 2.0};
    CHECK(((Polynomial{-1.0, 1.0} * cubic) - quartic).is_zero());
    auto qr = expand(all_roots(quartic));
    auto cr = expand(all_roots(cubic));
    cr.push_back(1.0);
    CHECK(match_distance(qr, cr) < 1e-13);
}

TEST_CASE("expanding the computed roots reproduces the coefficients") {
    std::mt19937_64 rng(39);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 1 + trial % 8;
        std::vector<Complex> rs;
        while (static_cast<int>(rs.size()) < n) {
            Complex z(u(rng), u(rng));
            bool separated = true;
            for (const auto& r : rs) separated = separated && std::abs(r - z) > 0.1;
            if (separated) rs.push_back(z);
        }
        Complex lead(u(rng) + 3.0, u(rng));
        Polynomial p = Polynomial::from_roots(rs, lead);
        Polynomial back = Polynomial::from_roots(expand(all_roots(p)), lead);
        double err = 0.0;
        for (int k = 0; k <= n; ++k) err = std::max(err, std::abs(back[k] - p[k]));
        CHECK(err <= 1e-8 * p.scale());
    }
}
