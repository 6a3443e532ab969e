#include <doctest.h>

#include <omf/mlv.hpp>

#include <random>

using namespace omf;

namespace {

template <class F>
Poly<typename F::Elem> pl(const F& K, std::initializer_list<long> coeffs) {
    std::vector<typename F::Elem> c;
    for (long v : coeffs) c.push_back(K.from_int(v));
    return Poly<typename F::Elem>(std::move(c));
}

FFPoly fpoly(const FFTowerPtr& tw, std::initializer_list<long> coeffs) {
    std::vector<FFData> c;
    for (long v : coeffs) c.push_back(tw->from_long(tw->top(), v));
    return FFPoly(tw, tw->top(), std::move(c));
}

GroupValue gv(long a, long ad) { return GroupValue::scalar(rat(a, ad)); }
GroupValue gv2(long a, long ad, long b, long bd) {
    return GroupValue({rat(a, ad), rat(b, bd)});
}

}  // namespace

TEST_CASE("depth-zero values") {
    QpField K(5);
    auto mu = Valuation<QpField>::depth_zero(K, Rat(0), gv(0, 1));
    CHECK(mu.value(pl(K, {5, 1})) == gv(0, 1));
    CHECK(mu.value(Poly<Rat>()) == GroupValue::infinity());

    auto mu2 = Valuation<QpField>::depth_zero(K, Rat(0), gv(1, 2));
    CHECK(mu2.value(pl(K, {-5, 0, 1})) == gv(1, 1));
    CHECK(mu2.top().e == 2);

    Qt2Field T(5);
    auto mu0 = Valuation<Qt2Field>::depth_zero(T, Qt2Field::Elem{}, GroupValue::zero(2));
    CHECK(mu0.value(pl(T, {1, 0, 1})) == GroupValue::zero(2));

    CHECK_THROWS_AS((void)Valuation<QpField>::depth_zero(K, Rat(0), GroupValue::infinity()),
                    PrecondError);
}

TEST_CASE("worked example: depth-zero residual over the rank-two field") {
    Qt2Field K(5);
    auto mu0 = Valuation<Qt2Field>::depth_zero(K, Qt2Field::Elem{}, GroupValue::zero(2));
    // g = x^4 + (t+2) x^2 + 1
    auto t = K.t_gen();
    std::vector<Qt2Field::Elem> gc{K.from_int(1), Qt2Field::Elem{}, t + K.from_int(2),
                                   Qt2Field::Elem{}, K.from_int(1)};
    Poly<Qt2Field::Elem> g(gc);

    FFPoly r = mu0.residual(g);
    CHECK(r == fpoly(K.residue_tower(), {1, 0, 2, 0, 1}));  // y^4 + 2y^2 + 1
}

TEST_CASE("worked example: refinement level at x - 2") {
    Qt2Field K(5);
    auto t = K.t_gen();
    std::vector<Qt2Field::Elem> gc{K.from_int(1), Qt2Field::Elem{}, t + K.from_int(2),
                                   Qt2Field::Elem{}, K.from_int(1)};
    Poly<Qt2Field::Elem> g(gc);

    auto rho1 = Valuation<Qt2Field>::depth_zero(K, K.from_int(2), gv2(0, 1, 1, 1));
    CHECK(rho1.value(pl(K, {1, 0, 1})) == gv2(0, 1, 1, 1));
    CHECK(rho1.top().e == 1);

    // truncated residual: (y - 1)^2 = y^2 + 3y + 1 over F_5
    FFPoly r = rho1.residual(g, 2);
    CHECK(r == fpoly(K.residue_tower(), {1, 3, 1}));

    // the natural lift of y - 1 is x - 7
    auto tw = K.residue_tower();
    auto q = rho1.lift_key(fpoly(tw, {4, 1}));
    CHECK(q == pl(K, {-7, 1}));

    // and on the mirror branch, x + 7
    auto rho1m = Valuation<Qt2Field>::depth_zero(K, K.from_int(-2), gv2(0, 1, 1, 1));
    FFPoly rm = rho1m.residual(g, 2);
    CHECK(rm == fpoly(K.residue_tower(), {1, 2, 1}));  // (y + 1)^2
    CHECK(rho1m.lift_key(fpoly(tw, {1, 1})) == pl(K, {7, 1}));
}

TEST_CASE("lifts over Q_p") {
    QpField K(5);
    auto mu0 = Valuation<QpField>::depth_zero(K, Rat(0), gv(0, 1));
    auto tw = K.residue_tower();

    // lift(y^2 - 2) = x^2 - 2 with balanced representatives
    auto q = mu0.lift_key(fpoly(tw, {3, 0, 1}));
    CHECK(q == pl(K, {-2, 0, 1}));
    CHECK(mu0.residual(q) == fpoly(tw, {3, 0, 1}));

    // slope-1/2 level: lift(y - 1) = x^2 - 5
    auto mu = Valuation<QpField>::depth_zero(K, Rat(0), gv(1, 2));
    auto q2 = mu.lift_key(fpoly(tw, {4, 1}));
    CHECK(q2 == pl(K, {-5, 0, 1}));
    CHECK(mu.residual(pl(K, {-5, 0, 1})) == fpoly(tw, {4, 1}));
}

TEST_CASE("augmentation bookkeeping") {
    QpField K(5);
    auto mu0 = Valuation<QpField>::depth_zero(K, Rat(0), gv(0, 1));
    auto mu1 = mu0.augmented(pl(K, {-2, 0, 1}), gv(1, 1));
    CHECK(mu1.size() == 2);
    CHECK(mu1.top().e == 1);
    CHECK(mu1.top().f == 2);
    CHECK(mu1.value(pl(K, {-2, 0, 1})) == gv(1, 1));
    CHECK(mu1.kappa()->card(mu1.kappa()->top()) == 25);

    // gamma must strictly exceed mu(phi)
    CHECK_THROWS_AS((void)mu0.augmented(pl(K, {-2, 0, 1}), gv(0, 1)), PrecondError);
    // x^2 - 4 is not a key polynomial for mu0 (residual (y-2)(y+2))
    CHECK_THROWS_AS((void)mu0.augmented(pl(K, {-4, 0, 1}), gv(1, 1)), PrecondError);

    // refinement replaces the top level in place
    auto r0 = Valuation<QpField>::depth_zero(K, Rat(1), gv(1, 2));
    CHECK(r0.size() == 1);
    auto r1 = r0.augmented(pl(K, {-6, 1}), gv(3, 2));
    CHECK(r1.size() == 1);
    CHECK(r1.top().phi == pl(K, {-6, 1}));
    CHECK(r1.value(pl(K, {-6, 1})) == gv(3, 2));
    // non-equivalent replacement rejected
    CHECK_THROWS_AS((void)r0.augmented(pl(K, {-2, 1}), gv(3, 2)), PrecondError);
}

TEST_CASE("canonical units") {
    Qt2Field K(5);
    auto mu0 = Valuation<Qt2Field>::depth_zero(K, Qt2Field::Elem{}, GroupValue::zero(2));
    auto mu = mu0.augmented(pl(K, {-2, 0, 1}), gv2(1, 2, 0, 1));
    CHECK(mu.top().e == 2);
    CHECK(mu.top().f == 2);

    // grade (1,0) realized by c = t, no key-polynomial powers
    UnitRecipe u = mu.canon(1, gv2(1, 1, 0, 1));
    CHECK(u.base == std::vector<long>{1, 0});
    CHECK(u.phis == std::vector<long>{0});

    QpField Q5(5);
    auto nu = Valuation<QpField>::depth_zero(Q5, Rat(0), gv(1, 2));
    UnitRecipe w = nu.canon(0, gv(1, 1));
    CHECK(w.base == std::vector<long>{1});
    CHECK(w.phis.empty());

    UnitRecipe zero = nu.canon(1, GroupValue::zero(1));
    CHECK(zero.base == std::vector<long>{0});
    CHECK(zero.phis == std::vector<long>{0});

    // grade 1/2 needs one power of the key polynomial
    UnitRecipe h = nu.canon(1, gv(1, 2));
    CHECK(h.phis == std::vector<long>{1});
    CHECK(h.base == std::vector<long>{0});
}

TEST_CASE("residual of the key itself is the constant 1") {
    QpField K(5);
    auto mu = Valuation<QpField>::depth_zero(K, Rat(0), gv(1, 2));
    FFPoly r = mu.residual(pl(K, {0, 1}));
    CHECK(r.degree() == 0);
    CHECK(r.monic());
}

namespace {

template <class F>
Poly<typename F::Elem> random_poly(const F& K, std::mt19937_64& rng, long maxdeg, bool monic) {
    long d = 1 + static_cast<long>(rng() % static_cast<unsigned long>(maxdeg));
    std::vector<typename F::Elem> c(static_cast<std::size_t>(d + 1));
    for (auto& x : c) {
        long v = static_cast<long>(rng() % 19) - 9;
        x = K.from_int(v);
        if constexpr (std::is_same_v<F, Qt2Field> || std::is_same_v<F, FqtField>) {
            if (rng() % 3 == 0) x = x + K.t_gen() * K.from_int(static_cast<long>(rng() % 5) - 2);
        }
    }
    if (monic)
        c.back() = K.from_int(1);
    else if (is_zero(c.back()))
        c.back() = K.from_int(1);
    return Poly<typename F::Elem>(std::move(c));
}

template <class F>
GroupValue random_gamma(const F& K, std::mt19937_64& rng, long denom) {
    std::vector<Rat> co;
    for (int i = 0; i < K.rank(); ++i)
        co.push_back(rat(static_cast<long>(rng() % 5) - 1, denom));
    return GroupValue(co);
}

template <class F>
Valuation<F> random_chain(const F& K, std::mt19937_64& rng, int depth) {
    long den0 = 1 + static_cast<long>(rng() % 3);
    auto mu = Valuation<F>::depth_zero(K, K.from_int(static_cast<long>(rng() % 5) - 2),
                                       random_gamma(K, rng, den0));
    if (depth < 2) return mu;
    // extend by the lift of a random irreducible residual polynomial
    auto tw = mu.kappa();
    std::mt19937_64 seed2(rng());
    for (int tries = 0; tries < 200; ++tries) {
        long f = 1 + static_cast<long>(rng() % 2);
        std::vector<FFData> c(static_cast<std::size_t>(f + 1));
        for (auto& x : c) x = tw->rand_elem(tw->top(), seed2);
        c.back() = tw->one(tw->top());
        FFPoly psi(tw, tw->top(), c);
        if (psi.degree() != f || psi.coeff(0).is_zero()) continue;
        if (!ff_is_irreducible(psi)) continue;
        auto phi = mu.lift_key(psi);
        long den = 1 + static_cast<long>(rng() % 2);
        GroupValue delta = GroupValue::zero(K.rank());
        std::vector<Rat> co;
        co.push_back(rat(1 + static_cast<long>(rng() % 3), den));
        for (int i = 1; i < K.rank(); ++i) co.push_back(rat(static_cast<long>(rng() % 3), den));
        GroupValue gamma = mu.value(phi) + GroupValue(co);
        return mu.augmented(phi, gamma);
    }
    throw Error("random_chain: no irreducible residual found");
}

template <class F>
void check_prodR(const F& K, std::mt19937_64& rng, int depth, int trials) {
    for (int i = 0; i < trials; ++i) {
        auto mu = random_chain(K, rng, depth);
        auto g = random_poly(K, rng, 6, false);
        auto h = random_poly(K, rng, 6, false);
        auto rg = mu.residual(g);
        auto rh = mu.residual(h);
        auto rgh = mu.residual(g * h);
        CHECK(rgh == rg * rh);
    }
}

template <class F>
void check_roundtrip(const F& K, std::mt19937_64& rng, int depth, int trials) {
    for (int i = 0; i < trials; ++i) {
        auto mu = random_chain(K, rng, depth);
        auto tw = mu.kappa();
        std::mt19937_64 seed2(rng());
        for (int tries = 0; tries < 100; ++tries) {
            long f = 1 + static_cast<long>(rng() % 2);
            std::vector<FFData> c(static_cast<std::size_t>(f + 1));
            for (auto& x : c) x = tw->rand_elem(tw->top(), seed2);
            c.back() = tw->one(tw->top());
            FFPoly psi(tw, tw->top(), c);
            if (psi.degree() != f || psi.coeff(0).is_zero() || !ff_is_irreducible(psi)) continue;
            auto q = mu.lift_key(psi);  // lift_key re-checks residual(q) == psi
            CHECK(q.degree() == mu.degree() * mu.top().e * psi.degree());
            break;
        }
    }
}

}  // namespace

TEST_CASE("residual multiplicativity on random chains") {
    std::mt19937_64 rng(1234);
    QpField q5(5), q3(3);
    check_prodR(q5, rng, 1, 30);
    check_prodR(q5, rng, 2, 20);
    check_prodR(q3, rng, 2, 15);
    FqtField f7(7);
    check_prodR(f7, rng, 1, 15);
    check_prodR(f7, rng, 2, 10);
    Qt2Field t5(5);
    check_prodR(t5, rng, 1, 15);
    check_prodR(t5, rng, 2, 10);
}

TEST_CASE("lift/residual round trip on random chains") {
    std::mt19937_64 rng(77);
    QpField q5(5);
    check_roundtrip(q5, rng, 1, 25);
    check_roundtrip(q5, rng, 2, 15);
    FqtField f3(3);
    check_roundtrip(f3, rng, 2, 10);
    Qt2Field t5(5);
    check_roundtrip(t5, rng, 2, 10);
}

TEST_CASE("valuation axioms on random chains") {
    std::mt19937_64 rng(555);
    QpField K(5);
    for (int i = 0; i < 25; ++i) {
        auto mu = random_chain(K, rng, 1 + static_cast<int>(rng() % 2));
        auto g = random_poly(K, rng, 6, false);
        auto h = random_poly(K, rng, 6, false);
        CHECK(mu.value(g * h) == mu.value(g) + mu.value(h));
        CHECK(mu.value(g + h) >= min(mu.value(g), mu.value(h)));
    }
}

TEST_CASE("augmentation monotonicity") {
    std::mt19937_64 rng(31);
    QpField K(5);
    for (int i = 0; i < 20; ++i) {
        auto mu = random_chain(K, rng, 2);
        const auto& phi = mu.top().phi;
        auto nu = mu.augmented(phi, mu.top().gamma + gv(1, 1));
        for (int j = 0; j < 5; ++j) {
            auto g = random_poly(K, rng, 6, false);
            auto vmu = mu.value(g), vnu = nu.value(g);
            CHECK(vnu >= vmu);
            bool untouched = mu.residual_min_index(g) == 0;
            CHECK((vmu == vnu) == untouched);
        }
    }
}
