#pragma once

#include <omf/fields.hpp>
#include <omf/ff.hpp>
#include <omf/lattice.hpp>
#include <omf/poly.hpp>

#include <optional>
#include <utility>
#include <vector>

namespace omf {

// A homogeneous unit of the graded algebra, recorded as the exponent vector of
// c * prod_i phi_i^{m_i} with c a monomial in the uniformizing generators of K.
struct UnitRecipe {
    std::vector<long> base;
    std::vector<long> phis;

    static UnitRecipe scaled(const UnitRecipe& u, long k) {
        UnitRecipe r = u;
        for (auto& x : r.base) x *= k;
        for (auto& x : r.phis) x *= k;
        return r;
    }

    static UnitRecipe diff(const UnitRecipe& a, const UnitRecipe& b) {
        UnitRecipe r = a;
        if (r.base.size() < b.base.size()) r.base.resize(b.base.size(), 0);
        if (r.phis.size() < b.phis.size()) r.phis.resize(b.phis.size(), 0);
        for (std::size_t i = 0; i < b.base.size(); ++i) r.base[i] -= b.base[i];
        for (std::size_t i = 0; i < b.phis.size(); ++i) r.phis[i] -= b.phis[i];
        return r;
    }
};

template <class F>
struct Level {
    Poly<typename F::Elem> phi;
    GroupValue gamma;
    long e = 1;                 // index of gamma over the previous value group
    long f = 1;                 // residual degree gained at this level
    std::optional<FFPoly> psi;  // minimal polynomial of z over the level below
    FFTowerPtr kappa;           // residue tower through this level
    FFElem z;                   // root of psi inside kappa (levels >= 1)
    UnitRecipe unit;            // canonical unit of grade e * gamma
    ValueLattice lattice;       // value group through this level

    Level() : gamma(GroupValue::infinity()), lattice(ValueLattice::standard(1)) {}
};

// Inductive valuation, stored as its chain of ordinary augmentations in normal
// form: strictly increasing key degrees, equal-degree augmentations replacing
// the top level. The empty chain stands for the base valuation v itself and
// values constants only.
//
// Index conventions, used consistently below:
//   * level index n ranges over 0..size()-1;
//   * value_n(n, g) evaluates g under the prefix chain with n levels
//     (so value_n(0, -) is v on constants);
//   * res/unit_lift/canon at stage n handle polynomials of degree < deg phi_n
//     with unit recipes over phi_0..phi_{n-1}, living in the residue field of
//     level n.
template <class F>
class Valuation {
public:
    using Elem = typename F::Elem;
    using P = Poly<Elem>;

    // Detached chain; assign a real one before use.
    Valuation() : f_(nullptr), std_lattice_(ValueLattice::standard(1)) {}

    static Valuation base(const F& field) { return Valuation(field); }

    static Valuation depth_zero(const F& field, const Elem& a, const GroupValue& gamma) {
        P phi = P(std::vector<Elem>{Elem{} - a, field.from_int(1)});
        return base(field).augmented(phi, gamma);
    }

    const F& field() const { return *f_; }
    bool is_base() const { return lv_.empty(); }
    long size() const { return static_cast<long>(lv_.size()); }
    const Level<F>& level(long i) const { return lv_[static_cast<std::size_t>(i)]; }
    const Level<F>& top() const { return lv_.back(); }

    long degree() const { return lv_.empty() ? 0 : lv_.back().phi.degree(); }

    const ValueLattice& lattice() const {
        return lv_.empty() ? std_lattice_ : lv_.back().lattice;
    }

    FFTowerPtr kappa() const {
        return lv_.empty() ? f_->residue_tower() : lv_.back().kappa;
    }

    // Product of the e_n and of the f_n along the chain.
    std::pair<long, long> ef_products() const {
        long e = 1, f = 1;
        for (const auto& L : lv_) {
            e *= L.e;
            f *= L.f;
        }
        return {e, f};
    }

    GroupValue value(const P& g) const { return value_n(size(), g); }

    // mu(g) from the first ell+1 expansion coefficients only; exact whenever
    // the minimizing index is known a priori to be <= ell.
    GroupValue value_trunc(const P& g, long ell) const {
        if (lv_.empty()) return value(g);
        if (g.zero()) return GroupValue::infinity();
        auto coeffs = g.phi_expansion(top().phi, ell);
        GroupValue best = GroupValue::infinity();
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
            if (coeffs[j].zero()) continue;
            best = min(best, value_n(size() - 1, coeffs[j]) + top().gamma * static_cast<long>(j));
        }
        return best;
    }

    Valuation augmented(const P& phi, const GroupValue& gamma) const {
        if (!gamma.finite()) throw PrecondError("augmentation value must be finite");
        if (gamma.rank() != f_->rank()) throw PrecondError("augmentation value has wrong rank");
        if (phi.degree() < 1 || !phi.is_monic())
            throw PrecondError("key polynomial must be monic and non-constant");
        if (lv_.empty()) {
            if (phi.degree() != 1) throw PrecondError("depth-zero key polynomial must be linear");
            return appended(phi, gamma);
        }
        if (phi.degree() == degree()) {
            // equal-degree augmentation: the chain stays in normal form by
            // replacing the top level; phi must be minimal for the current
            // valuation, and the prefix append re-validates it as a key.
            GroupValue dv = value(phi - top().phi);
            if (!(dv >= top().gamma))
                throw PrecondError("equal-degree augmentation requires a minimal key polynomial");
            if (!(gamma > value(phi)))
                throw PrecondError("augmentation must increase the key value");
            Valuation prefix = *this;
            prefix.lv_.pop_back();
            return prefix.appended(phi, gamma);
        }
        if (!(gamma > value(phi)))
            throw PrecondError("augmentation must increase the key value");
        return appended(phi, gamma);
    }

    // Residual polynomial of g with respect to the top key polynomial (or a
    // mu-equivalent candidate of the same degree). Monic over kappa().
    FFPoly residual(const P& g, std::optional<long> trunc = {}, const P* phi_override = nullptr) const {
        if (g.zero()) throw PrecondError("residual polynomial of zero");
        if (lv_.empty()) throw PrecondError("residual polynomial needs at least one level");
        ResData rd = residual_data(size() - 1, g, phi_override, trunc);
        return rho_to_poly(rd.rho, kappa());
    }

    // min S: the order with which the key prime divides in(g).
    long residual_min_index(const P& g, std::optional<long> trunc = {}) const {
        if (g.zero() || lv_.empty()) throw PrecondError("residual support of zero");
        return support(size() - 1, g, nullptr, trunc).l0;
    }

    // Monic key polynomial Q with residual(Q) = psi and
    // deg Q = deg(mu) * e * deg(psi).
    P lift_key(const FFPoly& psi) const {
        if (lv_.empty()) throw PrecondError("lift needs at least one level");
        if (!psi.monic() || psi.degree() < 1) throw PrecondError("lift needs a monic residual polynomial");
        if (psi.coeff(0).is_zero()) throw PrecondError("cannot lift psi = y");
        const long T = size() - 1;
        const Level<F>& tl = top();
        const long e = tl.e;
        const long fdeg = psi.degree();
        P q = tl.phi.pow(static_cast<unsigned long>(e * fdeg));
        for (long j = 0; j < fdeg; ++j) {
            FFElem eta = psi.coeff(j);
            if (eta.is_zero()) continue;
            GroupValue alpha = tl.gamma * (e * (fdeg - j));
            UnitRecipe desired = UnitRecipe::scaled(tl.unit, fdeg - j);
            FFElem delta = recipe_vs_canonical(T, desired, alpha);
            P a = unit_lift(T, eta * delta, alpha);
            q = q + a * tl.phi.pow(static_cast<unsigned long>(j * e));
        }
        if (q.degree() != degree() * e * fdeg) throw Error("lift: degree law violated");
        if (!(residual(q) == psi)) throw Error("lift: residual round trip failed");
        return q;
    }

    // Canonical unit recipe of a grade alpha in the value group of the prefix
    // with st levels: phi-exponents reduced into [0, e_i).
    UnitRecipe canon(long st, GroupValue alpha) const {
        UnitRecipe r;
        r.phis.assign(static_cast<std::size_t>(st), 0);
        for (long i = st - 1; i >= 0; --i) {
            const Level<F>& L = lv_[static_cast<std::size_t>(i)];
            const ValueLattice& prev = i == 0 ? std_lattice_ : lv_[static_cast<std::size_t>(i - 1)].lattice;
            bool found = false;
            for (long m = 0; m < L.e; ++m) {
                if (prev.contains(alpha)) {
                    r.phis[static_cast<std::size_t>(i)] = m;
                    found = true;
                    break;
                }
                alpha = alpha - L.gamma;
            }
            if (!found) throw Error("unit grade outside the value group");
        }
        r.base.reserve(alpha.coords().size());
        for (const auto& c : alpha.coords()) {
            if (c.get_den() != 1) throw Error("unit grade not integral over the base group");
            r.base.push_back(to_long(c.get_num()));
        }
        return r;
    }

    // Residue in the stage-st residue field of in(prod a_k^{s_k} * recipe);
    // the product must be a homogeneous unit of grade zero.
    FFElem res(long st, const std::vector<std::pair<P, long>>& factors,
               std::vector<long> base_exps, std::vector<long> phi_exps) const {
        if (st == 0) {
            Elem acc = f_->gen_monomial(base_exps);
            for (const auto& [a, s] : factors) {
                if (!a.constant_poly() || a.zero()) throw Error("res: non-constant factor at stage 0");
                acc = apply_power(acc, a.coeff(0), s);
            }
            return f_->residue(acc);
        }
        const Level<F>& below = lv_[static_cast<std::size_t>(st - 1)];
        const Level<F>& here = lv_[static_cast<std::size_t>(st)];
        const FFTowerPtr& tw = here.kappa;
        const int lvl = tw->top();

        std::vector<std::pair<P, long>> next;
        next.reserve(factors.size());
        long dsum = 0;
        long kexp = phi_exps[static_cast<std::size_t>(st - 1)];
        FFElem zpart(tw, lvl, tw->one(lvl));
        for (const auto& [a, s] : factors) {
            ResData rd = residual_data(st - 1, a, nullptr, {});
            next.emplace_back(rd.blead, s);
            dsum += s * rd.d;
            kexp += s * rd.l0;
            FFElem rho_z = eval_at(rd.rho, here.z, tw, lvl);
            if (rho_z.is_zero()) throw Error("res: residual polynomial vanishes at the generator");
            zpart = zpart * rho_z.pow(Int(s));
        }
        if (kexp % below.e != 0) throw Error("res: key exponent not divisible by the ramification index");
        long qexp = kexp / below.e;
        long dtot = dsum + qexp;
        if (qexp != 0) zpart = zpart * here.z.embed_into(tw, lvl).pow(Int(qexp));

        if (base_exps.size() != below.unit.base.size()) throw Error("res: recipe rank mismatch");
        for (std::size_t i = 0; i < base_exps.size(); ++i)
            base_exps[i] += dtot * below.unit.base[i];
        std::vector<long> lower(phi_exps.begin(), phi_exps.end() - 1);
        for (std::size_t i = 0; i < below.unit.phis.size(); ++i)
            lower[i] += dtot * below.unit.phis[i];
        FFElem bracket = res(st - 1, next, std::move(base_exps), std::move(lower));
        return bracket.embed_into(tw, lvl) * zpart;
    }

    // Residue of desired / canon(st, alpha), where grade(desired) = alpha.
    FFElem recipe_vs_canonical(long st, const UnitRecipe& desired, const GroupValue& alpha) const {
        UnitRecipe d = UnitRecipe::diff(desired, canon(st, alpha));
        d.base.resize(static_cast<std::size_t>(f_->rank()), 0);
        d.phis.resize(static_cast<std::size_t>(st), 0);
        return res(st, {}, d.base, d.phis);
    }

    // Polynomial b of degree < deg phi_st with in(b) = rho * in(canon(st, alpha)).
    P unit_lift(long st, const FFElem& rho, const GroupValue& alpha) const {
        if (rho.is_zero()) throw Error("unit_lift of zero");
        UnitRecipe rc = canon(st, alpha);
        if (st == 0) {
            Elem c = f_->gen_monomial(rc.base);
            return P::constant(f_->lift_residue(rho) * c);
        }
        const Level<F>& below = lv_[static_cast<std::size_t>(st - 1)];
        const Level<F>& here = lv_[static_cast<std::size_t>(st)];
        std::vector<FFElem> comps = z_components(rho, here, below.kappa);
        P out;
        for (std::size_t j = 0; j < comps.size(); ++j) {
            if (comps[j].is_zero()) continue;
            long kk = rc.phis[static_cast<std::size_t>(st - 1)] + static_cast<long>(j) * below.e;
            GroupValue aj = alpha - below.gamma * kk;
            UnitRecipe desired;
            desired.base = rc.base;
            desired.phis.assign(rc.phis.begin(), rc.phis.end() - 1);
            desired = UnitRecipe::diff(desired, UnitRecipe::scaled(below.unit, static_cast<long>(j)));
            FFElem delta = recipe_vs_canonical(st - 1, desired, aj);
            P piece = unit_lift(st - 1, comps[j] * delta, aj);
            out = out + piece * below.phi.pow(static_cast<unsigned long>(kk));
        }
        if (out.degree() >= here.phi.degree()) throw Error("unit_lift: degree overflow");
        return out;
    }

private:
    struct SupportData {
        long l0 = 0, lmax = 0, d = 0;
    };

    struct ResData {
        long l0 = 0, lmax = 0, d = 0;
        P blead;
        std::vector<FFElem> rho;  // over the residue field of its level
    };

    explicit Valuation(const F& field)
        : f_(&field), std_lattice_(ValueLattice::standard(field.rank())) {}

    GroupValue value_n(long n, const P& g) const {
        if (g.zero()) return GroupValue::infinity();
        if (n == 0) {
            if (!g.constant_poly())
                throw Error("base valuation defined on constants only");
            return f_->value(g.coeff(0));
        }
        const Level<F>& L = lv_[static_cast<std::size_t>(n - 1)];
        auto coeffs = g.phi_expansion(L.phi);
        GroupValue best = GroupValue::infinity();
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
            if (coeffs[j].zero()) continue;
            best = min(best, value_n(n - 1, coeffs[j]) + L.gamma * static_cast<long>(j));
        }
        return best;
    }

    // Expansion support of g at level m: indices where mu(a_j phi_m^j) is
    // minimal, bundled as (l0, lmax, d).
    template <class Sink>
    SupportData scan_support(long m, const P& g, const P* phi_override,
                             std::optional<long> trunc, Sink&& sink) const {
        const Level<F>& L = lv_[static_cast<std::size_t>(m)];
        const P& phi = phi_override ? *phi_override : L.phi;
        auto coeffs = g.phi_expansion(phi, trunc);
        GroupValue best = GroupValue::infinity();
        std::vector<GroupValue> tot(coeffs.size(), GroupValue::infinity());
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
            if (coeffs[j].zero()) continue;
            tot[j] = value_n(m, coeffs[j]) + L.gamma * static_cast<long>(j);
            best = min(best, tot[j]);
        }
        SupportData h;
        bool first = true;
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
            if (tot[j].is_infinity() || tot[j] != best) continue;
            if (first) {
                h.l0 = static_cast<long>(j);
                first = false;
            }
            h.lmax = static_cast<long>(j);
        }
        if (first) throw Error("residual support empty");
        if ((h.lmax - h.l0) % L.e != 0) throw Error("residual support incompatible with ramification");
        h.d = (h.lmax - h.l0) / L.e;
        sink(h, coeffs, tot, best);
        return h;
    }

    SupportData support(long m, const P& g, const P* phi_override, std::optional<long> trunc) const {
        return scan_support(m, g, phi_override, trunc,
                            [](const SupportData&, const auto&, const auto&, const GroupValue&) {});
    }

    ResData residual_data(long m, const P& g, const P* phi_override,
                          std::optional<long> trunc) const {
        const Level<F>& L = lv_[static_cast<std::size_t>(m)];
        ResData rd;
        scan_support(m, g, phi_override, trunc,
                     [&](const SupportData& h, const std::vector<P>& coeffs,
                         const std::vector<GroupValue>& tot, const GroupValue& best) {
                         rd.l0 = h.l0;
                         rd.lmax = h.lmax;
                         rd.d = h.d;
                         rd.blead = coeffs[static_cast<std::size_t>(h.lmax)];
                         const FFTowerPtr& ktw = L.kappa;
                         const int klvl = ktw->top();
                         rd.rho.assign(static_cast<std::size_t>(h.d + 1), FFElem());
                         rd.rho[static_cast<std::size_t>(h.d)] = FFElem(ktw, klvl, ktw->one(klvl));
                         for (long j = 0; j < h.d; ++j) {
                             long lj = h.l0 + j * L.e;
                             if (tot[static_cast<std::size_t>(lj)].is_infinity() ||
                                 tot[static_cast<std::size_t>(lj)] != best)
                                 continue;
                             std::vector<std::pair<P, long>> fac{
                                 {coeffs[static_cast<std::size_t>(lj)], 1}, {rd.blead, -1}};
                             UnitRecipe u = UnitRecipe::scaled(L.unit, j - h.d);
                             u.phis.resize(static_cast<std::size_t>(m), 0);
                             rd.rho[static_cast<std::size_t>(j)] = res(m, fac, u.base, u.phis);
                         }
                     });
        return rd;
    }

    static FFPoly rho_to_poly(const std::vector<FFElem>& rho, const FFTowerPtr& tw) {
        const int lvl = tw->top();
        std::vector<FFData> c;
        c.reserve(rho.size());
        for (const auto& el : rho)
            c.push_back(el.is_zero() ? FFData{} : el.embed_into(tw, lvl).data());
        return FFPoly(tw, lvl, std::move(c));
    }

    static FFElem eval_at(const std::vector<FFElem>& rho, const FFElem& z,
                          const FFTowerPtr& tw, int lvl) {
        FFElem acc(tw, lvl, FFData{});
        FFElem zz = z.embed_into(tw, lvl);
        for (std::size_t i = rho.size(); i-- > 0;) {
            acc = acc * zz;
            if (!rho[i].is_zero()) acc = acc + rho[i].embed_into(tw, lvl);
        }
        return acc;
    }

    // rho written in coordinates over powers of the level generator z; the
    // coordinates live in the residue field one level down.
    static std::vector<FFElem> z_components(const FFElem& rho, const Level<F>& here,
                                            const FFTowerPtr& below_kappa) {
        std::vector<FFElem> out;
        if (here.f == 1) {
            out.push_back(rho);
            return out;
        }
        const FFTowerPtr& tw = here.kappa;
        int lvl = tw->top();
        FFData d = rho.embed_into(tw, lvl).data();
        out.reserve(static_cast<std::size_t>(here.f));
        for (long j = 0; j < here.f; ++j) {
            if (j < static_cast<long>(d.c.size()))
                out.emplace_back(below_kappa, below_kappa->top(), d.c[static_cast<std::size_t>(j)]);
            else
                out.emplace_back();
        }
        return out;
    }

    static Elem apply_power(Elem acc, const Elem& c, long s) {
        if (is_zero(c)) throw Error("res: zero factor");
        Elem b = c;
        long n = s;
        if (n < 0) {
            b = (c / c) / c;
            n = -n;
        }
        for (long i = 0; i < n; ++i) acc = acc * b;
        return acc;
    }

    Valuation appended(const P& phi, const GroupValue& gamma) const {
        Valuation next = *this;
        Level<F> L;
        L.phi = phi;
        L.gamma = gamma;
        const ValueLattice& prev = lattice();
        L.e = prev.index(gamma);
        if (!lv_.empty()) {
            ResData rd = residual_data(size() - 1, phi, nullptr, {});
            if (rd.l0 != 0)
                throw PrecondError("not a key polynomial: divisible by the current key");
            FFPoly psi = rho_to_poly(rd.rho, kappa());
            if (psi.degree() < 1 || psi.coeff(0).is_zero() || !ff_is_irreducible(psi))
                throw PrecondError("not a key polynomial: residual polynomial not irreducible");
            if (phi.degree() != degree() * top().e * psi.degree())
                throw PrecondError("not a key polynomial: degree law violated");
            L.psi = psi;
            L.f = psi.degree();
            if (L.f > 1) {
                L.kappa = tower_extend(kappa(), psi);
                FFData gen;
                gen.c = {FFData{}, L.kappa->one(L.kappa->top() - 1)};
                L.z = FFElem(L.kappa, L.kappa->top(), std::move(gen));
            } else {
                L.kappa = kappa();
                L.z = -psi.coeff(0);
            }
        } else {
            L.kappa = f_->residue_tower();
        }
        L.lattice = prev.extended(gamma);
        next.lv_.push_back(std::move(L));
        next.lv_.back().unit = next.canon(next.size() - 1, gamma * next.lv_.back().e);
        return next;
    }

    const F* f_;
    ValueLattice std_lattice_;
    std::vector<Level<F>> lv_;
};

}  // namespace omf
