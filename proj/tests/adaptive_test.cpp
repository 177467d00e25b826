#include "oracle/tsr_oracle.hpp"

#include "tadsim/adaptive/adaptation.hpp"
#include "tadsim/adaptive/tsr.hpp"
#include "tadsim/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace tadsim;
using namespace tadsim::adaptive;

namespace {

TsrRegister from_oracle(const oracle::Bits& bits)
{
    // Push the oldest bit first so bits[0] ends up at index 1.
    TsrRegister reg(static_cast<unsigned>(bits.size()), TsrInit::Zeros);
    for (auto it = bits.rbegin(); it != bits.rend(); ++it)
        reg.push(*it != 0);
    return reg;
}

TsrRegister alternating(unsigned length, int first)
{
    oracle::Bits b(length);
    for (unsigned i = 0; i < length; ++i)
        b[i] = (first + static_cast<int>(i)) % 2;
    return from_oracle(b);
}

} // namespace

TEST_CASE("push shifts toward index L and inserts at index 1")
{
    CHECK(TsrRegister::from_bits({0, 0, 0, 0}).pushed(true) == TsrRegister::from_bits({1, 0, 0, 0}));
    CHECK(TsrRegister::from_bits({1, 0, 1, 0}).pushed(true) == TsrRegister::from_bits({1, 1, 0, 1}));
    CHECK(TsrRegister::from_bits({1, 1, 1, 1}).pushed(false) == TsrRegister::from_bits({0, 1, 1, 1}));
}

TEST_CASE("push matches the shift definition on every L=8 register")
{
    for (std::uint64_t code = 0; code < 256; ++code)
    {
        const auto bits = oracle::bits_of(code, 8);
        const auto reg = from_oracle(bits);
        for (int b : {0, 1})
        {
            const auto next = reg.pushed(b != 0);
            CHECK(next.at(1) == (b != 0));
            for (unsigned k = 2; k <= 8; ++k)
                CHECK(next.at(k) == reg.at(k - 1));
        }
    }
}

TEST_CASE("registers reject odd or out-of-range lengths")
{
    CHECK_THROWS_AS(TsrRegister(7), ConfigError);
    CHECK_THROWS_AS(TsrRegister(0), ConfigError);
    CHECK_THROWS_AS(TsrRegister(66), ConfigError);
    CHECK(TsrRegister(8).to_string() == "01010101");
    CHECK(TsrRegister(4, TsrInit::Zeros).to_string() == "0000");
}

TEST_CASE("half_stats examples")
{
    const auto r = TsrRegister::from_bits({0, 0, 0, 0, 1, 1, 1, 1});
    CHECK(half_stats(r, Half::First) == HalfStats{4, 0, 3, 0});
    CHECK(half_stats(r, Half::Second) == HalfStats{0, 4, 0, 3});
    const auto alt = TsrRegister::from_bits({0, 1, 0, 1, 0, 1, 0, 1});
    CHECK(half_stats(alt, Half::First) == HalfStats{2, 2, 0, 0});
    // 0,0 | 0,0 : the boundary pair is not counted
    CHECK(half_stats(TsrRegister::from_bits({1, 0, 0, 1}), Half::First) == HalfStats{1, 1, 0, 0});
}

TEST_CASE("weighted_value and update_factor examples")
{
    CHECK(weighted_value({4, 0, 3, 0}, 8) == 3.0);
    CHECK(weighted_value({2, 2, 0, 0}, 8) == 0.0);
    CHECK(weighted_value({0, 4, 0, 3}, 8) == -3.0);
    CHECK(update_factor(3.0, 3.0, 0.5) == 3.0);
    CHECK(update_factor(0.0, 0.0, 0.7) == 0.0);
    CHECK(update_factor(2.0, -1.0, 1.0) == 2.0);
}

TEST_CASE("half statistics agree with the brute-force oracle")
{
    for (unsigned length : {4u, 8u, 12u})
    {
        CAPTURE(length);
        for (std::uint64_t code = 0; code < (std::uint64_t{1} << length); ++code)
        {
            const auto bits = oracle::bits_of(code, length);
            const auto reg = from_oracle(bits);
            for (int h : {1, 2})
            {
                const auto want = oracle::scan(bits, h);
                const auto got = half_stats(reg, h == 1 ? Half::First : Half::Second);
                REQUIRE(got.n0 == want.n0);
                REQUIRE(got.n1 == want.n1);
                REQUIRE(got.nc0 == want.nc0);
                REQUIRE(got.nc1 == want.nc1);
                // counting identity and pair bound
                REQUIRE(got.n0 + got.n1 == length / 2);
                REQUIRE(static_cast<long>(got.nc0) <= std::max(0L, static_cast<long>(got.n0) - 1));
                REQUIRE(static_cast<long>(got.nc1) <= std::max(0L, static_cast<long>(got.n1) - 1));
                REQUIRE(weighted_value(got, length) == oracle::weighted(want, length).value());
            }
            for (long q = 0; q <= 4; ++q)
            {
                const auto want = oracle::mu(oracle::weighted(oracle::scan(bits, 1), length),
                                             oracle::weighted(oracle::scan(bits, 2), length), q);
                REQUIRE(std::abs(update_factor(reg, static_cast<double>(q) / 4.0) - want.value()) < 1e-12);
            }
        }
    }
}

TEST_CASE("the oracle derives mu for a register one push away from alternating")
{
    // 01010101 followed by a 1 gives 10101010: still alternating.
    const auto reg = TsrRegister::from_bits({0, 1, 0, 1, 0, 1, 0, 1}).pushed(true);
    CHECK(reg.to_string() == "10101010");
    const auto bits = oracle::Bits{1, 0, 1, 0, 1, 0, 1, 0};
    const auto want = oracle::mu(oracle::weighted(oracle::scan(bits, 1), 8), oracle::weighted(oracle::scan(bits, 2), 8), 2);
    CHECK(want.num == 0);
    CHECK(update_factor(reg, 0.5) == want.value());

    // 10101010 followed by a 1 gives 11010101: one pair of ones in the newer half.
    const auto next = reg.pushed(true);
    const auto nbits = oracle::Bits{1, 1, 0, 1, 0, 1, 0, 1};
    const auto nwant = oracle::mu(oracle::weighted(oracle::scan(nbits, 1), 8),
                                  oracle::weighted(oracle::scan(nbits, 2), 8), 2);
    CHECK(nwant.num == -3);
    CHECK(nwant.den == 8);
    CHECK(update_factor(next, 0.5) == nwant.value());
}

TEST_CASE("complementing a register negates X1, X2 and mu")
{
    for (std::uint64_t code = 0; code < 256; ++code)
    {
        const auto reg = from_oracle(oracle::bits_of(code, 8));
        const auto inv = reg.complemented();
        for (auto h : {Half::First, Half::Second})
            CHECK(weighted_value(half_stats(inv, h), 8) == -weighted_value(half_stats(reg, h), 8));
        for (double a : {0.0, 0.25, 0.5, 0.75, 1.0})
            CHECK(update_factor(inv, a) == -update_factor(reg, a));
    }
}

TEST_CASE("alternating registers are a fixed point of the interval law")
{
    AdaptParams p;
    for (unsigned length = 4; length <= 32; length += 2)
        for (int first : {0, 1})
        {
            const auto reg = alternating(length, first);
            for (double a : {0.0, 0.25, 0.5, 0.75, 1.0})
            {
                const double mu = update_factor(reg, a);
                CHECK(mu == 0.0);
                const auto s = next_interval(IntervalState::starting_at(Millis{123.456}), mu, 0.0, p);
                CHECK(s.i_wu.count() == 123.456);
            }
        }
}

TEST_CASE("all-zero registers grow the interval and all-one registers shrink it")
{
    for (unsigned length : {4u, 8u, 16u, 32u})
        for (double a : {0.0, 0.25, 0.5, 0.75, 1.0})
        {
            CHECK(update_factor(TsrRegister(length, TsrInit::Zeros), a) > 0.0);
            CHECK(update_factor(TsrRegister(length, TsrInit::Zeros).complemented(), a) < 0.0);
        }
}

TEST_CASE("next_interval examples, clamping and history")
{
    AdaptParams p;
    auto s = IntervalState::starting_at(Millis{100.0});
    CHECK(next_interval(s, 0.0, 0.0, p).i_wu.count() == 100.0);
    CHECK(next_interval(s, 3.0, 0.0, p).i_wu.count() == 103.0);
    CHECK(next_interval(s, -3.0, 0.0, p).i_wu.count() == 97.0);
    const auto grown = next_interval(s, 3.0, 0.0, p);
    REQUIRE(grown.history.size() == 2);
    CHECK(grown.history.back().count() == 103.0);
    CHECK(next_interval(s, -1e6, 0.0, p).i_wu == p.i_min);
    CHECK(next_interval(s, 1e6, 0.0, p).i_wu == p.i_max);
    CHECK_THROWS(next_interval(s, std::nan(""), 0.0, p));
}

TEST_CASE("random update sequences stay inside the clamp")
{
    AdaptParams p;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> mu(-40.0, 40.0);
    auto s = IntervalState::starting_at(Millis{500.0});
    for (int i = 0; i < 20000; ++i)
    {
        s = next_interval(std::move(s), mu(rng), 0.0, p);
        REQUIRE(s.i_wu >= p.i_min);
        REQUIRE(s.i_wu <= p.i_max);
    }
}

TEST_CASE("error policies")
{
    const ErrorPolicy zero = ErrorPolicy::by_name("zero");
    CHECK(error_term(TsrRegister::from_bits({1, 0, 1, 0, 1, 0, 1, 0}), zero) == 0.0);
    CHECK(error_term(TsrRegister(8, TsrInit::Zeros), zero) == 0.0);
    CHECK_THROWS_AS(ErrorPolicy::by_name("foo"), ConfigError);
    CHECK(ErrorPolicy::registered_names() == std::vector<std::string>{"zero"});
}

TEST_CASE("adaptation parameters are validated")
{
    AdaptParams p;
    p.alpha = 1.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.t_ref = Millis{0.0};
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.i_min = Millis{300.0};
    p.i_max = Millis{200.0};
    CHECK_THROWS_AS(p.validate(), ConfigError);
}
