#pragma once

#include <omf/mlv.hpp>
#include <omf/newton.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace omf {

inline constexpr std::uint64_t kDefaultSeed = 0x0f0e1d2c3b4a5968ull;

struct OMConfig {
    long max_refinements = 64;
    std::uint64_t seed = kDefaultSeed;
};

template <class F>
struct TraceStep {
    Poly<typename F::Elem> phi;
    GroupValue lambda;
};

// One output type (mu, phi): an inductive valuation together with the key
// polynomial approximating the factor it singles out.
template <class F>
struct OMType {
    Valuation<F> mu;
    Poly<typename F::Elem> phi;
    long res_degree = 1;  // degree of the residual polynomial of phi
    bool exact = false;   // phi divides the input exactly
    long ram_index = 1;   // E
    long res_total = 1;   // F

    long factor_degree() const { return phi.degree(); }
};

template <class F>
struct UnresolvedBranch {
    Poly<typename F::Elem> phi;  // pending key polynomial of the capped branch
    long ell = 0;
    std::vector<TraceStep<F>> trace;
    std::string diagnosis;
};

template <class F>
struct OMReport {
    std::vector<OMType<F>> types;
    std::vector<UnresolvedBranch<F>> unresolved;
    long total_degree_accounted = 0;
};

// Heuristic tag for a branch that hit the refinement cap. Never decides the
// infinite-refinement class; it only flags which regime the trace resembles.
inline std::string diagnose_unresolved(unsigned long residue_char, int rank, long ell) {
    if (residue_char > 0) {
        long b = ell;
        while (b > 1 && b % static_cast<long>(residue_char) == 0) b /= static_cast<long>(residue_char);
        if (b == 1 && ell > 1) return "IR-defect-suspected";
    }
    if (rank > 1) return "IR-limit-suspected";
    return "inconclusive";
}

namespace detail {

template <class F>
std::pair<long, long> exact_type_invariants(const Valuation<F>& mu,
                                            const Poly<typename F::Elem>& phi) {
    if (mu.is_base()) return {1, 1};
    auto [e, f] = mu.ef_products();
    if (phi.degree() == mu.degree()) return {e / mu.top().e, f};
    return {e, f * mu.residual(phi).degree()};
}

}  // namespace detail

// The stack-driven double dissection. Every popped item accounts for exactly
// ell * deg(phi) of the input degree, split between emitted types, pushed
// children and capped branches.
template <class F>
OMReport<F> om_run(const F& K, const Poly<typename F::Elem>& g, OMConfig cfg = {}) {
    using P = Poly<typename F::Elem>;
    if (g.zero()) throw PrecondError("om: zero polynomial");
    if (!g.is_monic()) throw PrecondError("om: input must be monic");
    if (g.degree() < 1) throw PrecondError("om: input must be non-constant");
    if (!squarefree_test(g)) throw PrecondError("om: input must be square-free");

    struct Item {
        Valuation<F> mu;
        P phi;
        long ell;
        long refinements;
        std::vector<TraceStep<F>> trace;
    };

    std::mt19937_64 rng(cfg.seed);
    OMReport<F> report;
    P x = P::monomial(K.from_int(1), 1);

    std::vector<Item> stack;
    stack.push_back({Valuation<F>::base(K), x, g.degree(), 0, {}});

    auto emit = [&](OMType<F> t) { report.types.push_back(std::move(t)); };

    while (!stack.empty()) {
        Item item = std::move(stack.back());
        stack.pop_back();
        const long budget = item.ell * item.phi.degree();
        long consumed = 0;

        if (item.phi.divides(g)) {
            OMType<F> t;
            t.mu = item.mu;
            t.phi = item.phi;
            t.exact = true;
            auto [E, Fv] = detail::exact_type_invariants(item.mu, item.phi);
            t.ram_index = E;
            t.res_total = Fv;
            t.res_degree = 1;
            consumed += item.phi.degree();
            emit(std::move(t));
            if (g == item.phi) {
                if (consumed != budget) throw Error("om: degree accounting failed");
                continue;
            }
        }

        NewtonPolygon np = np_compute(item.mu, item.phi, item.ell, g);
        if (!item.mu.is_base()) {
            np = np.principal(item.mu.value(item.phi));
            if (np.right().first != item.ell)
                throw Error("om: principal polygon length disagrees with the promised order");
        }

        struct Child {
            Valuation<F> mu_l;
            P lift;
            long n;
            GroupValue lambda;
            long resdeg;
        };
        std::vector<Child> children;
        for (const auto& side : np.sides()) {
            Valuation<F> mu_l = item.mu.augmented(item.phi, side.lambda);
            FFPoly r = mu_l.residual(g, item.ell);
            auto factors = ff_factor(r, rng);
            for (auto& [psi, n] : factors) {
                P lift = mu_l.lift_key(psi);
                children.push_back({mu_l, std::move(lift), n, side.lambda, psi.degree()});
            }
        }

        const bool refinement = children.size() == 1 && children[0].n > 1 &&
                                children[0].lift.degree() == item.phi.degree();
        if (refinement) {
            Child& c = children[0];
            if (c.n != item.ell) throw Error("om: refinement with unexpected multiplicity");
            std::vector<TraceStep<F>> trace = item.trace;
            trace.push_back({item.phi, c.lambda});
            consumed += c.n * c.lift.degree();
            if (item.refinements + 1 > cfg.max_refinements) {
                UnresolvedBranch<F> u;
                u.phi = c.lift;
                u.ell = item.ell;
                u.trace = std::move(trace);
                u.diagnosis = diagnose_unresolved(K.residue_char(), K.rank(), item.ell);
                report.unresolved.push_back(std::move(u));
            } else {
                stack.push_back({item.mu, c.lift, item.ell, item.refinements + 1, std::move(trace)});
            }
        } else {
            for (auto& c : children) {
                consumed += c.n * c.lift.degree();
                if (c.n == 1) {
                    OMType<F> t;
                    t.mu = c.mu_l;
                    t.phi = std::move(c.lift);
                    t.res_degree = c.resdeg;
                    auto [e, f] = t.mu.ef_products();
                    t.ram_index = e;
                    t.res_total = f * c.resdeg;
                    emit(std::move(t));
                } else {
                    Valuation<F> next = c.lift.degree() > item.phi.degree() ? c.mu_l : item.mu;
                    stack.push_back({std::move(next), std::move(c.lift), c.n, 0, {}});
                }
            }
        }
        if (consumed != budget) throw Error("om: degree accounting failed");
    }

    long total = 0;
    for (const auto& t : report.types) total += t.factor_degree();
    for (const auto& u : report.unresolved) total += u.ell * u.phi.degree();
    report.total_degree_accounted = total;
    if (total != g.degree()) throw Error("om: global degree accounting failed");
    return report;
}

}  // namespace omf
