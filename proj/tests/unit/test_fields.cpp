#include <doctest.h>

#include <omf/fields.hpp>

#include <random>

using namespace omf;

TEST_CASE("Qp valuation, residue, lift") {
    QpField K(5);
    CHECK(K.value(Rat(50)) == GroupValue::scalar(rat(2, 1)));
    CHECK(K.value(Rat(0)).is_infinity());
    CHECK(K.value(rat(1, 5)) == GroupValue::scalar(rat(-1, 1)));

    // 7/3 = 7 * 3^{-1} = 4 mod 5
    FFElem r = K.residue(rat(7, 3));
    CHECK(r == FFElem(K.residue_tower(), 0, K.residue_tower()->from_long(0, 4)));
    CHECK_THROWS_AS((void)K.residue(Rat(10)), PrecondError);

    // balanced canonical lift
    CHECK(K.lift_residue(r) == Rat(-1));
    CHECK(K.residue(K.lift_residue(r)) == r);
    CHECK(K.gen_monomial({3}) == Rat(125));
    CHECK(K.gen_monomial({-1}) == rat(1, 5));
}

TEST_CASE("Fqt valuation and residue") {
    FqtField K(7);
    auto t = K.t_gen();
    auto u = t / (t + K.from_int(1));
    CHECK(K.value(u) == GroupValue::scalar(rat(1, 1)));
    CHECK(K.value(K.from_int(3)).is_zero());
    CHECK(K.value(K.from_int(0)).is_infinity());

    auto w = (t + K.from_int(2)) / (t * t + K.from_int(1));
    CHECK(K.value(w).is_zero());
    CHECK(K.residue(w) == K.coef_from_int(2));
    CHECK(K.residue(K.lift_residue(K.coef_from_int(4))) == K.coef_from_int(4));
}

TEST_CASE("Fqt with prime power q") {
    FqtField K(9);
    CHECK(K.residue_tower()->card(K.residue_tower()->top()) == 9);
    auto a = K.coef_gen();
    auto e = K.lift_residue(a);
    CHECK(K.residue(e) == a);
}

TEST_CASE("Qt2 rank-two valuation") {
    Qt2Field K(5);
    auto t = K.t_gen();
    auto u = t * t * Qt2Field::Elem::constant(rat(5, 3));
    CHECK(K.value(u) == GroupValue({rat(2, 1), rat(1, 1)}));
    CHECK(K.initial_term(u) == rat(5, 3));
    CHECK(K.initial_term(K.from_int(7)) == Rat(7));

    auto w = (t + K.from_int(2)) / (t * Qt2Field::Elem::constant(Rat(2)) + K.from_int(1));
    CHECK(K.initial_term(w) == Rat(2));
    CHECK(K.value(w) == GroupValue::zero(2));
    CHECK(K.residue(w) == FFElem(K.residue_tower(), 0, K.residue_tower()->from_long(0, 2)));

    CHECK(K.value(K.gen_monomial({2, 1})) == GroupValue({rat(2, 1), rat(1, 1)}));
    CHECK(K.value(K.gen_monomial({-1, 0})) == GroupValue({rat(-1, 1), rat(0, 1)}));
}

namespace {

template <class F>
void ultrametric_property(const F& K, std::mt19937_64& rng, int trials,
                          typename F::Elem (*rnd)(const F&, std::mt19937_64&)) {
    for (int i = 0; i < trials; ++i) {
        auto a = rnd(K, rng), b = rnd(K, rng);
        auto va = K.value(a), vb = K.value(b), vab = K.value(a * b), vs = K.value(a + b);
        CHECK(vab == va + vb);
        CHECK(vs >= min(va, vb));
        if (va != vb) CHECK(vs == min(va, vb));
    }
}

Rat rnd_qp(const QpField&, std::mt19937_64& rng) {
    long n = static_cast<long>(rng() % 2000) - 1000;
    long d = 1 + static_cast<long>(rng() % 1000);
    return rat(n, d);
}

FqtField::Elem rnd_fqt(const FqtField& K, std::mt19937_64& rng) {
    auto t = K.t_gen();
    auto poly = [&] {
        FqtField::Elem acc = K.from_int(static_cast<long>(rng() % 7));
        FqtField::Elem tp = K.from_int(1);
        for (int i = 0; i < 3; ++i) {
            tp = tp * t;
            acc = acc + tp * K.from_int(static_cast<long>(rng() % 7));
        }
        return acc;
    };
    auto n = poly(), d = poly();
    if (n.is_zero()) n = t;
    if (d.is_zero()) d = t + K.from_int(1);
    return n / d;
}

Qt2Field::Elem rnd_qt2(const Qt2Field& K, std::mt19937_64& rng) {
    auto t = K.t_gen();
    auto poly = [&] {
        Qt2Field::Elem acc = Qt2Field::Elem::constant(rat(static_cast<long>(rng() % 41) - 20, 1));
        Qt2Field::Elem tp = K.from_int(1);
        for (int i = 0; i < 2; ++i) {
            tp = tp * t;
            acc = acc + tp * Qt2Field::Elem::constant(rat(static_cast<long>(rng() % 41) - 20, 1 + static_cast<long>(rng() % 4)));
        }
        return acc;
    };
    auto n = poly(), d = poly();
    if (n.is_zero()) n = t;
    if (d.is_zero()) d = K.from_int(1);
    return n / d;
}

}  // namespace

TEST_CASE("ultrametric law across all fields") {
    std::mt19937_64 rng(42);
    QpField q5(5);
    ultrametric_property(q5, rng, 3000, rnd_qp);
    FqtField f7(7);
    ultrametric_property(f7, rng, 500, rnd_fqt);
    Qt2Field t5(5);
    ultrametric_property(t5, rng, 800, rnd_qt2);
}

TEST_CASE("residue is multiplicative on units") {
    std::mt19937_64 rng(43);
    QpField K(7);
    int done = 0;
    while (done < 300) {
        auto a = rnd_qp(K, rng), b = rnd_qp(K, rng);
        if (is_zero(a) || is_zero(b)) continue;
        if (!K.value(a).is_zero() || !K.value(b).is_zero()) continue;
        CHECK(K.residue(a * b) == K.residue(a) * K.residue(b));
        ++done;
    }
}
