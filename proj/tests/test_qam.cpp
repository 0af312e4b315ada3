#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>
#include <cmath>
#include <random>
#include <set>

#include "otfs/qam.hpp"

using namespace otfs;

namespace {

double mean_energy(const Alphabet& a) {
    double acc = 0.0;
    for (const Complex& p : a.points()) acc += std::norm(p);
    return acc / static_cast<double>(a.order());
}

}  // namespace

TEST_CASE("4-QAM mapping") {
    const Alphabet a = Alphabet::make(4);
    CHECK(a.bits_per_symbol() == 2);

    const double s = 1.0 / std::sqrt(2.0);
    const auto sym = modulate({0, 0}, a);
    REQUIRE(sym.size() == 1);
    CHECK(sym[0].real() == doctest::Approx(s));
    CHECK(sym[0].imag() == doctest::Approx(s));

    // All four 2-bit patterns hit distinct points with unit mean energy.
    std::set<std::pair<double, double>> seen;
    for (const Complex& p : a.points()) seen.insert({p.real(), p.imag()});
    CHECK(seen.size() == 4);
    CHECK(mean_energy(a) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("16-QAM scaling is 1/sqrt(10)") {
    const Alphabet a = Alphabet::make(16);
    // Oracle: the unnormalized {±1,±3}^2 lattice has mean energy
    // (1/16) * sum |s|^2 = 10, so unit energy needs 1/sqrt(10).
    double unnorm = 0.0;
    for (int i : {-3, -1, 1, 3})
        for (int q : {-3, -1, 1, 3}) unnorm += static_cast<double>(i * i + q * q);
    unnorm /= 16.0;
    CHECK(unnorm == doctest::Approx(10.0));
    const double scale = 1.0 / std::sqrt(unnorm);
    for (const Complex& p : a.points()) {
        const double i = p.real() / scale, q = p.imag() / scale;
        CHECK(std::abs(std::round(i) - i) < 1e-12);
        CHECK((std::lround(std::abs(i)) == 1 || std::lround(std::abs(i)) == 3));
        CHECK((std::lround(std::abs(q)) == 1 || std::lround(std::abs(q)) == 3));
    }
    CHECK(mean_energy(a) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Gray property: axis-adjacent points differ in one bit") {
    for (unsigned order : {4u, 16u, 64u}) {
        const Alphabet a = Alphabet::make(order);
        const auto& pts = a.points();
        // Adjacency = distance of one lattice step (2 * scale) along one axis,
        // where scale is the innermost level magnitude.
        double scale = 1e300;
        for (const Complex& p : pts) scale = std::min(scale, std::abs(p.real()));
        for (unsigned s1 = 0; s1 < order; ++s1)
            for (unsigned s2 = s1 + 1; s2 < order; ++s2) {
                const double dre = std::abs(pts[s1].real() - pts[s2].real());
                const double dim = std::abs(pts[s1].imag() - pts[s2].imag());
                const bool adjacent = (std::abs(dre - 2.0 * scale) < 1e-9 && dim < 1e-9) ||
                                      (std::abs(dim - 2.0 * scale) < 1e-9 && dre < 1e-9);
                if (adjacent) CHECK(std::popcount(s1 ^ s2) == 1);
            }
    }
}

TEST_CASE("hard demap") {
    const Alphabet a = Alphabet::make(4);
    SUBCASE("exact constellation points round trip") {
        for (unsigned s = 0; s < 4; ++s) {
            std::vector<std::uint8_t> bits;
            append_symbol_bits(s, a, bits);
            const auto sym = modulate(bits, a);
            CHECK(hard_demap(sym[0], a) == bits);
        }
    }
    SUBCASE("nearest neighbor") {
        const auto bits = hard_demap({0.9, 0.8}, a);
        CHECK(bits == std::vector<std::uint8_t>{0, 0});
    }
    SUBCASE("equidistant input breaks toward the smallest pattern") {
        CHECK(hard_demap({0.0, 0.0}, a) == std::vector<std::uint8_t>{0, 0});
    }
}

TEST_CASE("modulate/demap identities for all orders") {
    std::mt19937 rng(11);
    for (unsigned order : {4u, 16u, 64u}) {
        const Alphabet a = Alphabet::make(order);
        std::uniform_int_distribution<unsigned> pick(0, order - 1);
        for (int i = 0; i < 200; ++i) {
            const unsigned s = pick(rng);
            CHECK(nearest_symbol(a.point(s), a) == s);
        }
    }
}

TEST_CASE("empirical mean energy of uniform draws") {
    const Alphabet a = Alphabet::make(4);
    std::mt19937 rng(23);
    std::uniform_int_distribution<unsigned> pick(0, 3);
    double acc = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) acc += std::norm(a.point(pick(rng)));
    CHECK(acc / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("error paths") {
    const Alphabet a = Alphabet::make(4);
    CHECK_THROWS_AS(modulate({0, 1, 0}, a), std::invalid_argument);
    CHECK_THROWS_AS(Alphabet::make(8), std::invalid_argument);
    CHECK_THROWS_AS(Alphabet::make(0), std::invalid_argument);
}
