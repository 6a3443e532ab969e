#include <doctest.h>

#include <omf/ff.hpp>

#include <random>

using namespace omf;

namespace {

FFPoly mk(const FFTowerPtr& tw, int lvl, std::initializer_list<long> coeffs) {
    std::vector<FFData> c;
    for (long v : coeffs) c.push_back(tw->from_long(lvl, v));
    return FFPoly(tw, lvl, std::move(c));
}

FFPoly refactor_product(const FFPoly& f, const std::vector<std::pair<FFPoly, int>>& parts) {
    FFPoly acc = mk(f.tower(), f.level(), {1});
    for (const auto& [g, m] : parts)
        for (int i = 0; i < m; ++i) acc = acc * g;
    return acc;
}

}  // namespace

TEST_CASE("factor examples over small prime fields") {
    auto f5 = FFTower::prime_field(5);

    // y^2 + 1 = (y-2)(y-3) over F_5
    auto fact = ff_factor(mk(f5, 0, {1, 0, 1}));
    REQUIRE(fact.size() == 2);
    CHECK(fact[0].first == mk(f5, 0, {2, 1}));  // y + 2 = y - 3
    CHECK(fact[1].first == mk(f5, 0, {3, 1}));  // y + 3 = y - 2
    CHECK(fact[0].second == 1);

    auto f3 = FFTower::prime_field(3);
    auto irr = ff_factor(mk(f3, 0, {1, 0, 1}));
    REQUIRE(irr.size() == 1);
    CHECK(irr[0].second == 1);
    CHECK(irr[0].first.degree() == 2);

    // y^4 + 2y^2 + 1 = (y-2)^2 (y-3)^2 over F_5
    auto sq = ff_factor(mk(f5, 0, {1, 0, 2, 0, 1}));
    REQUIRE(sq.size() == 2);
    CHECK(sq[0].second == 2);
    CHECK(sq[1].second == 2);
    CHECK(sq[0].first.degree() == 1);
}

TEST_CASE("irreducibility examples") {
    auto f5 = FFTower::prime_field(5);
    auto f3 = FFTower::prime_field(3);
    CHECK(ff_is_irreducible(mk(f5, 0, {0, 1})));
    CHECK(ff_is_irreducible(mk(f5, 0, {3, 0, 1})));  // y^2 - 2
    CHECK_FALSE(ff_is_irreducible(mk(f3, 0, {1, 2, 1})));
}

TEST_CASE("tower extensions") {
    auto f3 = FFTower::prime_field(3);
    auto t9 = tower_extend(f3, mk(f3, 0, {1, 0, 1}));
    CHECK(t9->top() == 1);
    CHECK(t9->card(1) == 9);

    auto f5 = FFTower::prime_field(5);
    CHECK(tower_extend(f5, mk(f5, 0, {3, 1})) == f5);  // degree-1 resolved in place

    auto f2 = FFTower::prime_field(2);
    auto f4 = tower_extend(f2, mk(f2, 0, {1, 1, 1}));
    // second modulus y^2 + y + a over F_4, a the class of the generator
    FFData a;
    a.c = {FFData{}, FFData{1, {}}};
    FFPoly m2(f4, 1, {a, f4->one(1), f4->one(1)});
    CHECK(ff_is_irreducible(m2));
    auto f16 = tower_extend(f4, m2);
    CHECK(f16->card(2) == 16);
}

TEST_CASE("random refactor round trip") {
    std::mt19937_64 rng(20240809);
    for (unsigned long p : {2ul, 3ul, 5ul, 7ul}) {
        auto tw = FFTower::prime_field(p);
        for (int trial = 0; trial < 60; ++trial) {
            long deg = 1 + static_cast<long>(rng() % 12);
            std::vector<FFData> c(static_cast<std::size_t>(deg + 1));
            for (auto& x : c) x = tw->rand_elem(0, rng);
            c.back() = tw->one(0);
            FFPoly f(tw, 0, c);
            auto fact = ff_factor(f, rng);
            CHECK(refactor_product(f, fact) == f);
            long total = 0;
            for (const auto& [g, m] : fact) {
                total += g.degree() * m;
                CHECK(g.monic());
                CHECK(ff_is_irreducible(g));
            }
            CHECK(total == f.degree());
        }
    }
}

TEST_CASE("factorization over a tower level") {
    auto f3 = FFTower::prime_field(3);
    auto f9 = tower_extend(f3, mk(f3, 0, {1, 0, 1}));  // F_9 = F_3[i]
    // y^2 + 1 splits over F_9
    std::vector<FFData> c{f9->one(1), f9->zero(), f9->one(1)};
    c[0] = f9->one(1);
    FFPoly f(f9, 1, {f9->one(1), f9->zero(), f9->one(1)});
    auto fact = ff_factor(f);
    REQUIRE(fact.size() == 2);
    CHECK(fact[0].first.degree() == 1);
    CHECK(refactor_product(f, fact) == f);
}

TEST_CASE("frobenius check on reported irreducibles") {
    std::mt19937_64 rng(99);
    auto tw = FFTower::prime_field(7);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<FFData> c(static_cast<std::size_t>(2 + rng() % 8));
        for (auto& x : c) x = tw->rand_elem(0, rng);
        c.push_back(tw->one(0));
        FFPoly f(tw, 0, c);
        for (const auto& [g, m] : ff_factor(f, rng)) {
            long d = g.degree();
            Int q = tw->card(0);
            // y^(q^d) == y mod g
            auto x = FFTower::PolyD{tw->zero(), tw->one(0)};
            auto h = tw->pol_powmod(0, x, ipow(q, static_cast<unsigned long>(d)), g.data());
            CHECK(tw->pol_rem(0, tw->pol_sub(0, h, x), g.data()).empty());
            for (long e = 1; e < d; ++e) {
                if (d % e != 0) continue;
                auto he = tw->pol_powmod(0, x, ipow(q, static_cast<unsigned long>(e)), g.data());
                CHECK_FALSE(tw->pol_rem(0, tw->pol_sub(0, he, x), g.data()).empty());
            }
        }
    }
}

TEST_CASE("irreducibility agrees with factor output") {
    std::mt19937_64 rng(5);
    auto tw = FFTower::prime_field(5);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<FFData> c(static_cast<std::size_t>(1 + rng() % 7));
        for (auto& x : c) x = tw->rand_elem(0, rng);
        c.push_back(tw->one(0));
        FFPoly f(tw, 0, c);
        if (f.degree() < 1) continue;
        auto fact = ff_factor(f, rng);
        bool single = fact.size() == 1 && fact[0].second == 1;
        CHECK(ff_is_irreducible(f) == single);
    }
}
