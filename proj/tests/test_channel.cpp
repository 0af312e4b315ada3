#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include "otfs/channel.hpp"
#include "otfs/qam.hpp"
#include "otfs/rng.hpp"

using namespace otfs;

namespace {

CMat random_mat(std::size_t n, std::size_t m, std::mt19937& rng) {
    std::normal_distribution<double> g;
    CMat x(n, m);
    for (Complex& v : x.raw()) v = {g(rng), g(rng)};
    return x;
}

double max_abs_diff(const CMat& a, const CMat& b) {
    double mx = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        mx = std::max(mx, std::abs(a.raw()[i] - b.raw()[i]));
    return mx;
}

// Oracle for apply_dd: the full TF pipeline of the Hadamard channel model.
SymbolGrid tf_pipeline(const TFChannel& h, const SymbolGrid& x) {
    return sfft(apply_tf(h, isfft(x)));
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("synth_four_tap") {
    const GridConfig cfg(8, 8, 40e6);
    SUBCASE("always four taps on the diagonal offsets") {
        const TapSet taps = synth_four_tap(cfg, 42);
        REQUIRE(taps.taps.size() == 4);
        for (std::size_t k = 0; k < 4; ++k) {
            CHECK(taps.taps[k].delay_index == k);
            CHECK(taps.taps[k].doppler_index == k);
        }
    }
    SUBCASE("fixed seed is reproducible") {
        const TapSet a = synth_four_tap(cfg, 7);
        const TapSet b = synth_four_tap(cfg, 7);
        for (std::size_t k = 0; k < 4; ++k) CHECK(a.taps[k].gain == b.taps[k].gain);
    }
    SUBCASE("per-tap mean power is 1/4") {
        double acc[4] = {};
        const int draws = 100000;
        for (int i = 0; i < draws; ++i) {
            const TapSet t = synth_four_tap(cfg, 1000 + static_cast<std::uint64_t>(i));
            for (int k = 0; k < 4; ++k) acc[k] += std::norm(t.taps[k].gain);
        }
        for (int k = 0; k < 4; ++k)
            CHECK(acc[k] / draws == doctest::Approx(0.25).epsilon(0.04));
    }
    SUBCASE("grid too small") {
        CHECK_THROWS_AS(synth_four_tap(GridConfig(3, 8, 40e6), 1), std::invalid_argument);
    }
}

TEST_CASE("taps_to_dd") {
    TapSet t;
    t.n_delay = 4;
    t.m_doppler = 4;
    SUBCASE("empty set gives the zero grid") {
        const DDChannel dd = taps_to_dd(t);
        for (const Complex& v : dd.s_h.raw()) CHECK(v == Complex{});
    }
    SUBCASE("single unit tap gives a delta grid") {
        t.taps.push_back({0, 0, 1.0});
        const DDChannel dd = taps_to_dd(t);
        CHECK(dd.s_h.at(0, 0) == Complex{1.0});
        CHECK(dd.s_h.frobenius_norm() == doctest::Approx(1.0));
    }
    SUBCASE("four taps give four nonzeros") {
        for (std::size_t k = 0; k < 4; ++k) t.taps.push_back({k, k, Complex(1.0, -1.0)});
        const DDChannel dd = taps_to_dd(t);
        int nonzero = 0;
        for (const Complex& v : dd.s_h.raw()) nonzero += (v != Complex{}) ? 1 : 0;
        CHECK(nonzero == 4);
    }
    SUBCASE("duplicates and bad indices rejected") {
        t.taps.push_back({1, 1, 1.0});
        t.taps.push_back({1, 1, 2.0});
        CHECK_THROWS_AS(taps_to_dd(t), std::invalid_argument);
        t.taps = {{4, 0, 1.0}};
        CHECK_THROWS_AS(taps_to_dd(t), std::invalid_argument);
    }
}

TEST_CASE("dd <-> tf duality") {
    SUBCASE("all-ones H is the delta channel") {
        TFChannel h{CMat(4, 4)};
        for (Complex& v : h.h.raw()) v = 1.0;
        const DDChannel s = tf_to_dd(h);
        CHECK(std::abs(s.s_h.at(0, 0) - 1.0) < 1e-12);
        CHECK(s.s_h.frobenius_norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("round trip") {
        std::mt19937 rng(17);
        const TFChannel h{random_mat(4, 4, rng)};
        const TFChannel back = dd_to_tf(tf_to_dd(h));
        CHECK(max_abs_diff(back.h, h.h) < 1e-12);
    }
}

TEST_CASE("apply_tf") {
    std::mt19937 rng(19);
    SymbolGrid u(random_mat(3, 3, rng), Domain::TimeFrequency);
    SUBCASE("identity and zero channels") {
        TFChannel ones{CMat(3, 3)}, zeros{CMat(3, 3)};
        for (Complex& v : ones.h.raw()) v = 1.0;
        CHECK(max_abs_diff(apply_tf(ones, u).data, u.data) == 0.0);
        const SymbolGrid nulled = apply_tf(zeros, u);
        for (const Complex& v : nulled.data.raw()) CHECK(v == Complex{});
    }
    SUBCASE("element-wise products match scalar multiplication") {
        const TFChannel h{random_mat(3, 3, rng)};
        const SymbolGrid r = apply_tf(h, u);
        for (std::size_t f = 0; f < 3; ++f)
            for (std::size_t t = 0; t < 3; ++t)
                CHECK(std::abs(r.data.at(f, t) - h.h.at(f, t) * u.data.at(f, t)) == 0.0);
    }
    SUBCASE("errors") {
        TFChannel small{CMat(2, 2)};
        CHECK_THROWS_AS(apply_tf(small, u), std::invalid_argument);
        SymbolGrid dd(3, 3, Domain::DelayDoppler);
        TFChannel h{CMat(3, 3)};
        CHECK_THROWS_AS(apply_tf(h, dd), std::invalid_argument);
    }
}

TEST_CASE("apply_dd shift property") {
    std::mt19937 rng(21);
    SymbolGrid x(random_mat(4, 4, rng), Domain::DelayDoppler);
    SUBCASE("delta at origin is identity") {
        DDChannel s{CMat(4, 4)};
        s.s_h.at(0, 0) = 1.0;
        CHECK(max_abs_diff(apply_dd(s, x).data, x.data) == 0.0);
    }
    SUBCASE("shifted delta circularly shifts and scales") {
        DDChannel s{CMat(4, 4)};
        const Complex g{0.3, -0.8};
        s.s_h.at(1, 2) = g;
        const SymbolGrid y = apply_dd(s, x);
        for (std::size_t n = 0; n < 4; ++n)
            for (std::size_t m = 0; m < 4; ++m)
                CHECK(std::abs(y.data.at(n, m) -
                               g * x.data.at((n + 3) % 4, (m + 2) % 4)) < 1e-14);
    }
}

TEST_CASE("Hadamard / twisted-convolution equivalence") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng() % 16, m = 1 + rng() % 16;
        const TFChannel h{random_mat(n, m, rng)};
        SymbolGrid x(random_mat(n, m, rng), Domain::DelayDoppler);
        const SymbolGrid via_dd = apply_dd(tf_to_dd(h), x);
        const SymbolGrid via_tf = tf_pipeline(h, x);
        CHECK(max_abs_diff(via_dd.data, via_tf.data) < 1e-10);
    }
}

TEST_CASE("energy bound of the TF channel") {
    std::mt19937 rng(29);
    const TFChannel h{random_mat(6, 6, rng)};
    SymbolGrid u(random_mat(6, 6, rng), Domain::TimeFrequency);
    double max_h = 0.0;
    for (const Complex& v : h.h.raw()) max_h = std::max(max_h, std::abs(v));
    CHECK(apply_tf(h, u).data.frobenius_norm() <=
          max_h * u.data.frobenius_norm() * (1.0 + 1e-12));
}

TEST_CASE("identity channel leaves a frame unchanged through the full chain") {
    std::mt19937 rng(31);
    SymbolGrid x(random_mat(8, 8, rng), Domain::DelayDoppler);
    TFChannel h{CMat(8, 8)};
    for (Complex& v : h.h.raw()) v = 1.0;
    CHECK(max_abs_diff(tf_pipeline(h, x).data, x.data) < 1e-12);
}

TEST_CASE("add_awgn") {
    const Alphabet a = Alphabet::make(4);
    SUBCASE("variance formula at 0 dB") {
        CHECK(awgn_variance(0.0, a) == doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("infinite Eb/N0 passes through") {
        SymbolGrid y(2, 2, Domain::DelayDoppler);
        y.data.at(1, 1) = {3.0, -4.0};
        const SymbolGrid out =
            add_awgn(y, std::numeric_limits<double>::infinity(), a, 5);
        CHECK(max_abs_diff(out.data, y.data) == 0.0);
    }
    SUBCASE("empirical variance at sigma^2 = 0.5") {
        SymbolGrid zero(1000, 1000, Domain::DelayDoppler);
        const SymbolGrid noisy = add_awgn(zero, 0.0, a, 77);
        double acc = 0.0;
        for (const Complex& v : noisy.data.raw()) acc += std::norm(v);
        CHECK(acc / 1e6 == doctest::Approx(0.5).epsilon(0.01));
    }
    SUBCASE("deterministic under a fixed seed") {
        SymbolGrid zero(4, 4, Domain::DelayDoppler);
        const SymbolGrid n1 = add_awgn(zero, 10.0, a, 123);
        const SymbolGrid n2 = add_awgn(zero, 10.0, a, 123);
        CHECK(max_abs_diff(n1.data, n2.data) == 0.0);
    }
}

TEST_CASE("AWGN calibration against the closed-form 4-QAM BER") {
    // Identity channel + hard decisions: BER = Q(sqrt(2 Eb/N0)).
    const Alphabet a = Alphabet::make(4);
    std::mt19937 rng(37);
    std::uniform_int_distribution<unsigned> pick(0, 3);
    for (double ebn0_db : {0.0, 4.0, 8.0}) {
        const double ebn0 = std::pow(10.0, ebn0_db / 10.0);
        const double expected = q_function(std::sqrt(2.0 * ebn0));
        const std::size_t bits = (ebn0_db < 8.0) ? 200000 : 2000000;
        const std::size_t symbols = bits / 2;
        const double var = awgn_variance(ebn0_db, a);
        Rng noise(91 + static_cast<std::uint64_t>(ebn0_db));
        std::size_t errors = 0;
        for (std::size_t i = 0; i < symbols; ++i) {
            const unsigned tx = pick(rng);
            const Complex rx = a.point(tx) + noise.complex_gaussian(var);
            errors += std::popcount(tx ^ nearest_symbol(rx, a));
        }
        const double ber = static_cast<double>(errors) / static_cast<double>(bits);
        const double sigma =
            std::sqrt(expected * (1.0 - expected) / static_cast<double>(bits));
        CHECK(std::abs(ber - expected) <= 3.0 * sigma);
    }
}
