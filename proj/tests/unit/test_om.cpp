#include <doctest.h>

#include <omf/om.hpp>

#include <random>

using namespace omf;

namespace {

template <class F>
Poly<typename F::Elem> pl(const F& K, std::initializer_list<long> coeffs) {
    std::vector<typename F::Elem> c;
    for (long v : coeffs) c.push_back(K.from_int(v));
    return Poly<typename F::Elem>(std::move(c));
}

GroupValue gv(long a, long ad = 1) { return GroupValue::scalar(rat(a, ad)); }
GroupValue gv2(long a, long b) { return GroupValue({rat(a, 1), rat(b, 1)}); }

}  // namespace

TEST_CASE("om on x^4 - 7x^2 + 10 over Q_5") {
    QpField K(5);
    auto rep = om_run(K, pl(K, {10, 0, -7, 0, 1}));
    CHECK(rep.unresolved.empty());
    REQUIRE(rep.types.size() == 2);
    CHECK(rep.total_degree_accounted == 4);

    // slope -1/2 branch: approximant x^2 - 5, (E, F) = (2, 1)
    CHECK(rep.types[0].phi == pl(K, {-5, 0, 1}));
    CHECK(rep.types[0].ram_index == 2);
    CHECK(rep.types[0].res_total == 1);

    // slope 0 branch: approximant x^2 - 2, (E, F) = (1, 2)
    CHECK(rep.types[1].phi == pl(K, {-2, 0, 1}));
    CHECK(rep.types[1].ram_index == 1);
    CHECK(rep.types[1].res_total == 2);
}

TEST_CASE("om on a linear polynomial") {
    QpField K(5);
    auto rep = om_run(K, pl(K, {-3, 1}));
    REQUIRE(rep.types.size() == 1);
    CHECK(rep.types[0].ram_index == 1);
    CHECK(rep.types[0].res_total == 1);
    CHECK(rep.types[0].factor_degree() == 1);
    CHECK(rep.total_degree_accounted == 1);
}

TEST_CASE("om emits exact factors") {
    QpField K(5);
    auto rep = om_run(K, pl(K, {0, -1, 1}));  // x(x-1)
    REQUIRE(rep.types.size() == 2);
    CHECK(rep.types[0].exact);
    CHECK(rep.types[0].phi == pl(K, {0, 1}));
    CHECK(rep.types[1].phi == pl(K, {-1, 1}));
    CHECK(rep.total_degree_accounted == 2);
}

TEST_CASE("om preconditions") {
    QpField K(5);
    CHECK_THROWS_AS((void)om_run(K, pl(K, {1, 2})), PrecondError);          // non-monic
    CHECK_THROWS_AS((void)om_run(K, pl(K, {1, 2, 1})), PrecondError);       // (x+1)^2
    CHECK_THROWS_AS((void)om_run(K, Poly<Rat>()), PrecondError);            // zero
}

TEST_CASE("rank-two worked example: refinement cap and diagnostics") {
    Qt2Field K(5);
    auto t = K.t_gen();
    std::vector<Qt2Field::Elem> gc{K.from_int(1), Qt2Field::Elem{}, t + K.from_int(2),
                                   Qt2Field::Elem{}, K.from_int(1)};
    Poly<Qt2Field::Elem> g(gc);

    OMConfig cfg;
    cfg.max_refinements = 6;
    auto rep = om_run(K, g, cfg);
    CHECK(rep.types.empty());
    REQUIRE(rep.unresolved.size() == 2);
    CHECK(rep.total_degree_accounted == 4);

    for (const auto& u : rep.unresolved) {
        CHECK(u.ell == 2);
        CHECK(u.phi.degree() == 1);
        CHECK(u.diagnosis == "IR-limit-suspected");
        REQUIRE(u.trace.size() >= 2);
        CHECK(u.trace[0].lambda == gv2(0, 1));
        CHECK(u.trace[1].lambda == gv2(0, 2));
    }
    // branch seeds are x - 2 and x + 2; the first refinement replaces them by
    // x - 7 and x + 7 (the x - 2 branch is popped first)
    CHECK(rep.unresolved[0].trace[0].phi == pl(K, {-2, 1}));
    CHECK(rep.unresolved[1].trace[0].phi == pl(K, {2, 1}));
    CHECK(rep.unresolved[0].trace[1].phi == pl(K, {-7, 1}));
    CHECK(rep.unresolved[1].trace[1].phi == pl(K, {7, 1}));
}

TEST_CASE("diagnosis rules") {
    CHECK(diagnose_unresolved(5, 2, 2) == "IR-limit-suspected");
    CHECK(diagnose_unresolved(2, 1, 4) == "IR-defect-suspected");
    CHECK(diagnose_unresolved(2, 2, 4) == "IR-defect-suspected");
    CHECK(diagnose_unresolved(0, 1, 3) == "inconclusive");
    CHECK(diagnose_unresolved(5, 1, 3) == "inconclusive");
}

TEST_CASE("rank-one terminates with full degree accounting") {
    std::mt19937_64 rng(404);
    for (unsigned long p : {2ul, 3ul, 5ul}) {
        QpField K(p);
        int done = 0;
        while (done < 25) {
            long d = 2 + static_cast<long>(rng() % 7);
            std::vector<Rat> c(static_cast<std::size_t>(d + 1));
            for (auto& x : c) x = rat(static_cast<long>(rng() % 200) - 100, 1);
            c.back() = 1;
            Poly<Rat> g(c);
            if (!squarefree_test(g)) continue;
            auto rep = om_run(K, g);
            CHECK(rep.unresolved.empty());
            CHECK(rep.total_degree_accounted == g.degree());
            ++done;
        }
    }
}

TEST_CASE("om over a rational function base field") {
    FqtField K(7);
    auto t = K.t_gen();
    // g = x^2 - t: ramified, one type with E = 2
    std::vector<FqtField::Elem> gc{FqtField::Elem{} - t, FqtField::Elem{}, K.from_int(1)};
    Poly<FqtField::Elem> g(gc);
    auto rep = om_run(K, g);
    REQUIRE(rep.types.size() == 1);
    CHECK(rep.types[0].ram_index == 2);
    CHECK(rep.types[0].res_total == 1);
}
