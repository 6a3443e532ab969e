#pragma once

#include <omf/newton.hpp>
#include <omf/om.hpp>

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace omf {

// Monic Q of degree deg(g)/n whose Q-expansion of g has vanishing (n-1)-th
// coefficient. Each pass strictly shrinks deg(a_{n-1}), so the iteration
// settles after at most deg(Q)+1 corrections.
template <class F>
Poly<typename F::Elem> approx_root(const F& K, const Poly<typename F::Elem>& g, long n) {
    using P = Poly<typename F::Elem>;
    if (g.zero() || !g.is_monic()) throw PrecondError("approximate root needs a monic polynomial");
    if (n < 1 || g.degree() % n != 0) throw PrecondError("approximate root: n must divide deg(g)");
    if (K.characteristic() != 0 && n % K.characteristic() == 0)
        throw PrecondError("approximate root: n divisible by the characteristic");
    const long m = g.degree() / n;
    P q = P::monomial(K.from_int(1), static_cast<std::size_t>(m));
    typename F::Elem ninv = K.from_int(1) / K.from_int(n);
    for (long guard = 0; guard <= m + 1; ++guard) {
        auto coeffs = g.phi_expansion(q);
        P a = static_cast<long>(coeffs.size()) > n - 1 ? coeffs[static_cast<std::size_t>(n - 1)] : P();
        if (a.zero()) {
            // re-expansion proof that the defining coefficient vanished
            return q;
        }
        q = q + a.scaled(ninv);
    }
    throw Error("approximate root did not settle");
}

// Everything the last while-loop pass of the irreducibility test knows: the
// pair itself, its polygon, the right end-slope data and the residual
// factorization at that slope.
template <class F>
struct SplitOutcome {
    bool irreducible = false;
    long iterations = 0;
    bool exact_key = false;  // g itself became the key polynomial

    Valuation<F> mu;                 // valuation of the last pair
    Poly<typename F::Elem> phi;      // key polynomial of the last pair
    NewtonPolygon np;                // polygon of the pair
    GroupValue lambda;               // right end-slope is -lambda
    Valuation<F> mu_lambda;          // last pair augmented at the right end-slope
    FFPoly right_residual;           // residual polynomial at the right end-slope
    std::vector<std::pair<FFPoly, int>> rfactors;
    long n_lambda = 0;               // left abscissa of the right end-slope component
    GroupValue delta0;               // Okutsu bound of g

    long ram_index = 1, res_total = 1;  // E, F when irreducible

    SplitOutcome() : lambda(GroupValue::infinity()), delta0(GroupValue::infinity()) {}
};

template <class F>
long iteration_cap(long deg) {
    long cap = 1, d = 1;
    while (d < deg) {
        d *= 2;
        ++cap;
    }
    return cap;
}

// Approximate-root driven irreducibility test over the henselization.
template <class F>
SplitOutcome<F> split_analysis(const F& K, const Poly<typename F::Elem>& g,
                               std::uint64_t seed = kDefaultSeed) {
    using P = Poly<typename F::Elem>;
    if (g.zero() || !g.is_monic() || g.degree() < 1)
        throw PrecondError("irreducibility test needs a monic non-constant polynomial");
    if (K.residue_char() != 0 && g.degree() % static_cast<long>(K.residue_char()) == 0)
        throw PrecondError("irreducibility test: residue characteristic divides deg(g)");
    if (!squarefree_test(g)) throw PrecondError("irreducibility test needs a square-free polynomial");

    std::mt19937_64 rng(seed);
    SplitOutcome<F> out;
    Valuation<F> mu = Valuation<F>::base(K);
    P phi = P::monomial(K.from_int(1), 1);
    const long cap = iteration_cap<F>(g.degree());

    for (;;) {
        ++out.iterations;
        if (out.iterations > cap) throw Error("irreducibility test exceeded its iteration bound");
        NewtonPolygon np = np_compute(mu, phi, g.degree() / phi.degree(), g);
        out.mu = mu;
        out.phi = phi;
        out.np = np;
        if (np.sides().empty()) {
            // single-point polygon: g = phi exactly
            out.irreducible = true;
            out.exact_key = true;
            auto [e, f] = mu.ef_products();
            out.ram_index = e;
            out.res_total = f * (mu.is_base() ? 1 : mu.residual(phi).degree());
            out.delta0 = GroupValue::infinity();
            return out;
        }
        auto sides = np.sides();
        out.lambda = sides.back().lambda;
        if (!mu.is_base() && !(out.lambda > mu.value(phi)))
            throw Error("irreducibility test: slope fell below the current key value");
        out.mu_lambda = mu.augmented(phi, out.lambda);
        out.right_residual = out.mu_lambda.residual(g);
        out.rfactors = ff_factor(out.right_residual, rng);
        out.n_lambda = np.component(out.lambda).n_lo;
        out.delta0 = out.mu_lambda.value(g);

        bool one = np.one_sided();
        if (!one || out.rfactors.size() != 1) {
            if (out.n_lambda == 0 && out.rfactors.size() < 2)
                throw Error("irreducibility test: splitting pair without a split");
            out.irreducible = false;
            return out;
        }
        const auto& [psi, m] = out.rfactors[0];
        if (m == 1) {
            out.irreducible = true;
            auto [e, f] = out.mu_lambda.ef_products();
            out.ram_index = e;
            out.res_total = f * psi.degree();
            return out;
        }
        mu = out.mu_lambda;
        phi = approx_root(K, g, m);
    }
}

template <class F>
SplitOutcome<F> splitting_pair(const F& K, const Poly<typename F::Elem>& g,
                               std::uint64_t seed = kDefaultSeed) {
    SplitOutcome<F> out = split_analysis(K, g, seed);
    if (out.irreducible) throw PrecondError("no splitting pair: polynomial is irreducible");
    return out;
}

template <class F>
GroupValue gauss_value(const F& K, const Poly<typename F::Elem>& g) {
    GroupValue best = GroupValue::infinity();
    for (long i = 0; i <= g.degree(); ++i) {
        auto c = g.coeff(i);
        if (is_zero(c)) continue;
        best = min(best, K.value(c));
    }
    return best;
}

template <class F>
GroupValue okutsu_bound(const F& K, const Poly<typename F::Elem>& g,
                        std::uint64_t seed = kDefaultSeed) {
    return split_analysis(K, g, seed).delta0;
}

// Multifactor valuated Hensel state: approximants H_i of the factors
// G_i ~ phi_i^{n_i}, with the defect mu_lambda(g - prod H_i) - mu_lambda(g)
// at least 2^steps * gamma.
template <class F>
struct HenselContext {
    Valuation<F> mu_lambda;
    Poly<typename F::Elem> g;
    GroupValue lambda;
    std::vector<Poly<typename F::Elem>> lifts;   // phi_i
    std::vector<long> mult;                      // n_i
    std::vector<Poly<typename F::Elem>> approx;  // H_i, monic of degree deg(phi_i^{n_i})
    GroupValue gamma;                            // initial defect
    long steps = 0;
    bool exact = false;                          // g equals the lift product

    GroupValue defect() const {
        Poly<typename F::Elem> prod = product();
        auto diff = g - prod;
        if (diff.zero()) return GroupValue::infinity();
        return mu_lambda.value(diff) - mu_lambda.value(g);
    }

    Poly<typename F::Elem> product() const {
        Poly<typename F::Elem> p = Poly<typename F::Elem>::constant(g.one_of());
        for (const auto& h : approx) p = p * h;
        return p;
    }
};

template <class F>
HenselContext<F> hensel_init(const F& K, const Poly<typename F::Elem>& g,
                             const SplitOutcome<F>& pair) {
    using P = Poly<typename F::Elem>;
    if (pair.irreducible) throw PrecondError("hensel_init needs a reducible splitting outcome");
    HenselContext<F> ctx;
    ctx.mu_lambda = pair.mu_lambda;
    ctx.g = g;
    ctx.lambda = pair.lambda;
    if (pair.n_lambda > 0) {
        ctx.lifts.push_back(pair.phi);
        ctx.mult.push_back(pair.n_lambda);
    }
    for (const auto& [psi, m] : pair.rfactors) {
        ctx.lifts.push_back(pair.mu_lambda.lift_key(psi));
        ctx.mult.push_back(m);
    }
    long total = 0;
    for (std::size_t i = 0; i < ctx.lifts.size(); ++i) {
        ctx.approx.push_back(ctx.lifts[i].pow(static_cast<unsigned long>(ctx.mult[i])));
        total += ctx.approx.back().degree();
    }
    if (total != g.degree()) throw Error("hensel_init: lift degrees do not add up");
    GroupValue d = ctx.defect();
    if (d.is_infinity()) {
        ctx.exact = true;
        ctx.gamma = GroupValue::infinity();
        return ctx;
    }
    if (!(d > GroupValue::zero(K.rank()))) throw Error("hensel_init: non-positive initial defect");
    ctx.gamma = d;
    return ctx;
}

namespace detail {

// sum s_i * prod_{j != i} H_j = 1, exact, via CRT idempotents.
template <class P>
std::vector<P> bezout_cofactors(const std::vector<P>& h) {
    std::vector<P> out;
    out.reserve(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        P rest = P::constant(h[i].one_of());
        for (std::size_t j = 0; j < h.size(); ++j)
            if (j != i) rest = rest * h[j];
        // invert rest modulo h[i]
        P r0 = h[i], r1 = rest.divrem(h[i]).second;
        P t0, t1 = P::constant(h[i].one_of());
        while (!r1.zero()) {
            auto [q, r2] = r0.divrem(r1);
            P t2 = t0 - q * t1;
            r0 = r1;
            r1 = r2;
            t0 = t1;
            t1 = t2;
        }
        if (r0.degree() != 0) throw Error("hensel: approximants not coprime");
        out.push_back(t0.scaled(r0.one_of() / r0.coeff(0)).divrem(h[i]).second);
    }
    return out;
}

}  // namespace detail

// One quadratic step: correction rounds until the defect exponent has at
// least doubled. Cofactors are recomputed exactly each round.
template <class F>
void hensel_step(HenselContext<F>& ctx) {
    using P = Poly<typename F::Elem>;
    if (ctx.exact) {
        ++ctx.steps;
        return;
    }
    GroupValue target = ctx.gamma * (1l << std::min<long>(ctx.steps + 1, 62));
    for (int round = 0; round < 128; ++round) {
        P e = ctx.g - ctx.product();
        if (e.zero()) {
            ctx.exact = true;
            break;
        }
        GroupValue d = ctx.mu_lambda.value(e) - ctx.mu_lambda.value(ctx.g);
        if (d >= target) break;
        auto s = detail::bezout_cofactors(ctx.approx);
        bool moved = false;
        for (std::size_t i = 0; i < ctx.approx.size(); ++i) {
            P delta = (s[i] * e).divrem(ctx.approx[i]).second;
            if (!delta.zero()) moved = true;
            ctx.approx[i] = ctx.approx[i] + delta;
        }
        GroupValue d2 = ctx.exact ? GroupValue::infinity() : ctx.defect();
        if (!moved || !(d2 > d)) throw Error("hensel step stalled");
    }
    ++ctx.steps;
}

// Runs steps until the defect strictly exceeds `bound` above mu_lambda(g).
template <class F>
void hensel_to_defect(HenselContext<F>& ctx, const GroupValue& bound) {
    for (int guard = 0; guard < 256; ++guard) {
        if (ctx.exact) return;
        if (ctx.defect() > bound) return;
        hensel_step(ctx);
    }
    throw Error("hensel lifting did not reach the requested precision");
}

template <class F>
struct FactorApprox {
    Poly<typename F::Elem> poly;
    long ram_index = 1;
    long res_total = 1;
};

template <class F>
struct FactorizeResult {
    std::vector<FactorApprox<F>> factors;
    GroupValue product_defect;  // v0(g - prod), Infinity when exact
    GroupValue delta_max;       // largest Okutsu bound seen during the run
    bool certified = false;
};

namespace detail {

template <class F>
void factorize_rec(const F& K, const Poly<typename F::Elem>& g, const GroupValue& work,
                   std::uint64_t seed, std::vector<FactorApprox<F>>& out, GroupValue& delta_max,
                   std::string& shape, int depth) {
    using P = Poly<typename F::Elem>;
    if (depth > 64) throw Error("factorize recursion too deep");
    SplitOutcome<F> sp = split_analysis(K, g, seed);
    if (sp.delta0.finite()) delta_max = max(delta_max, sp.delta0);
    if (sp.irreducible) {
        shape += "I" + std::to_string(g.degree()) +
                 "(" + std::to_string(sp.ram_index) + "," + std::to_string(sp.res_total) + ")";
        out.push_back({g, sp.ram_index, sp.res_total});
        return;
    }
    shape += "S" + std::to_string(g.degree()) + "[l=" + sp.lambda.str() +
             ",n0=" + std::to_string(sp.n_lambda);
    for (const auto& [psi, m] : sp.rfactors)
        shape += ",f" + std::to_string(psi.degree()) + "^" + std::to_string(m);
    shape += "]";

    HenselContext<F> ctx = hensel_init(K, g, sp);
    if (!ctx.exact) {
        // precision bridging the gap between the working valuation and the
        // Gauss valuation
        GroupValue bound = work + sp.lambda * rat(g.degree(), sp.phi.degree());
        hensel_to_defect(ctx, bound);
    }
    for (std::size_t i = 0; i < ctx.approx.size(); ++i) {
        const P& h = ctx.approx[i];
        if (ctx.mult[i] == 1) {
            SplitOutcome<F> leaf = split_analysis(K, h, seed);
            if (leaf.delta0.finite()) delta_max = max(delta_max, leaf.delta0);
            if (!leaf.irreducible)
                throw Error("factorize: approximant of a singled-out factor split again");
            shape += "L" + std::to_string(h.degree()) +
                     "(" + std::to_string(leaf.ram_index) + "," + std::to_string(leaf.res_total) + ")";
            out.push_back({h, leaf.ram_index, leaf.res_total});
        } else {
            if (!squarefree_test(h))
                throw Error("factorize: approximant lost square-freeness");
            factorize_rec(K, h, work, seed, out, delta_max, shape, depth + 1);
        }
    }
}

}  // namespace detail

// Rank-one factorization over the henselization with certified Gauss
// precision sigma. Internal precision adapts: it doubles and the whole run
// restarts until two consecutive runs agree on the full splitting shape.
template <class F>
FactorizeResult<F> factorize(const F& K, const Poly<typename F::Elem>& g, const Rat& sigma,
                             std::uint64_t seed = kDefaultSeed) {
    using P = Poly<typename F::Elem>;
    if (K.rank() != 1) throw PrecondError("factorize supports rank-one base fields only");
    if (g.zero() || !g.is_monic() || g.degree() < 1)
        throw PrecondError("factorize needs a monic non-constant polynomial");
    if (!squarefree_test(g)) throw PrecondError("factorize needs a square-free polynomial");
    if (K.residue_char() != 0 && static_cast<long>(K.residue_char()) <= g.degree())
        throw PrecondError("factorize needs residue characteristic zero or > deg(g)");
    GroupValue g0 = gauss_value(K, g);
    if (!(g0 >= GroupValue::zero(1)))
        throw PrecondError("factorize needs coefficients in the valuation ring");

    GroupValue sigma_v = GroupValue::scalar(sigma);
    GroupValue d0 = okutsu_bound(K, g, seed);
    GroupValue work = max(sigma_v, GroupValue::scalar(rat(1, 1)));
    if (d0.finite()) work = max(work, d0 * 2 + GroupValue::scalar(rat(1, 1)));

    std::string prev_shape;
    for (int attempt = 0; attempt < 32; ++attempt) {
        std::vector<FactorApprox<F>> factors;
        GroupValue delta_max = GroupValue::zero(1);
        std::string shape;
        bool ok = true;
        try {
            detail::factorize_rec(K, g, work, seed, factors, delta_max, shape, 0);
        } catch (const Error&) {
            ok = false;
        }
        if (ok) {
            P prod = P::constant(K.from_int(1));
            long total = 0;
            for (const auto& f : factors) {
                prod = prod * f.poly;
                total += f.poly.degree();
            }
            GroupValue defect = (g - prod).zero() ? GroupValue::infinity() : gauss_value(K, g - prod);
            bool product_ok = total == g.degree() && defect > sigma_v;
            bool stable = (!prev_shape.empty() && shape == prev_shape) ||
                          work >= delta_max * 2 + sigma_v;
            if (product_ok && stable) {
                std::sort(factors.begin(), factors.end(), [&](const auto& a, const auto& b) {
                    if (a.poly.degree() != b.poly.degree()) return a.poly.degree() < b.poly.degree();
                    for (long i = a.poly.degree(); i >= 0; --i) {
                        std::string ra = K.render_elem(a.poly.coeff(i));
                        std::string rb = K.render_elem(b.poly.coeff(i));
                        if (ra != rb) return ra < rb;
                    }
                    return false;
                });
                FactorizeResult<F> res;
                res.factors = std::move(factors);
                res.product_defect = defect;
                res.delta_max = delta_max;
                res.certified = sigma_v > delta_max;
                return res;
            }
            prev_shape = shape;
        } else {
            prev_shape.clear();
        }
        work = work * 2 + GroupValue::scalar(rat(1, 1));
    }
    throw Error("factorize did not stabilize");
}

}  // namespace omf
