#pragma once

#include <omf/ff.hpp>
#include <omf/groupvalue.hpp>
#include <omf/lattice.hpp>
#include <omf/ratfunc.hpp>

#include <string>
#include <variant>
#include <vector>

namespace omf {

// Which valued base field (K, v) a computation runs over.
struct FieldDescriptor {
    enum class Kind { Qp, Fqt, Qt2 };
    Kind kind;
    unsigned long p = 0;  // residue characteristic
    unsigned k = 1;       // q = p^k for Fqt

    static FieldDescriptor qp(unsigned long p) {
        if (!is_prime(p)) throw PrecondError("p must be prime");
        return {Kind::Qp, p, 1};
    }

    static FieldDescriptor fqt(unsigned long q) {
        if (q < 2) throw PrecondError("q must be a prime power >= 2");
        unsigned long p = 2;
        while (q % p != 0) {
            ++p;
            if (p * p > q) {
                p = q;
                break;
            }
        }
        unsigned k = 0;
        unsigned long rest = q;
        while (rest > 1) {
            if (rest % p != 0) throw PrecondError("q must be a prime power");
            rest /= p;
            ++k;
        }
        if (!is_prime(p)) throw PrecondError("q must be a prime power");
        return {Kind::Fqt, p, k};
    }

    static FieldDescriptor qt2(unsigned long p) {
        if (!is_prime(p)) throw PrecondError("p must be prime");
        return {Kind::Qt2, p, 1};
    }

    int rank() const { return kind == Kind::Qt2 ? 2 : 1; }
    unsigned long q() const {
        unsigned long r = 1;
        for (unsigned i = 0; i < k; ++i) r *= p;
        return r;
    }
};

namespace detail {

template <class C>
long ord_t(const Poly<C>& f) {
    if (f.zero()) throw Error("ord_t of zero polynomial");
    long i = 0;
    while (is_zero(f.coeff(i))) ++i;
    return i;
}

inline bool atomic_token(const std::string& s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        char ch = s[i];
        if (ch == '+' || ch == '*' || ch == '(' || ch == ' ')
            return false;
        if (ch == '-' && i != 0) return false;
    }
    return true;
}

inline std::string parenthesize(const std::string& s) {
    return atomic_token(s) ? s : "(" + s + ")";
}

// Renders a polynomial in the named variable; coefficients via `rc`.
template <class C, class RC>
std::string render_var_poly(const Poly<C>& f, const char* var, RC rc, bool rat_signs) {
    if (f.zero()) return "0";
    std::string out;
    for (long i = f.degree(); i >= 0; --i) {
        C c = f.coeff(i);
        if (is_zero(c)) continue;
        std::string cs = rc(c);
        bool neg = false;
        if (rat_signs && !cs.empty() && cs[0] == '-') {
            neg = true;
            cs = cs.substr(1);
        }
        if (out.empty()) {
            if (neg) out += "-";
        } else {
            out += neg ? " - " : " + ";
        }
        std::string body;
        if (i == 0) {
            body = detail::parenthesize(cs);
        } else {
            std::string xs = i == 1 ? std::string(var) : std::string(var) + "^" + std::to_string(i);
            body = (cs == "1") ? xs : detail::parenthesize(cs) + "*" + xs;
        }
        out += body;
    }
    return out;
}

inline std::string render_ffelem(const FFElem& c) {
    if (c.is_zero()) return "0";
    if (c.level() == 0) return std::to_string(c.data().s);
    // composite residue elements rendered in the generator symbol 'a'
    std::string out;
    const auto& cs = c.data().c;
    for (std::size_t i = cs.size(); i-- > 0;) {
        FFElem ci(c.tower(), c.level() - 1, cs[i]);
        if (ci.is_zero()) continue;
        std::string s = render_ffelem(ci);
        if (!out.empty()) out += " + ";
        if (i == 0)
            out += parenthesize(s);
        else {
            std::string av = i == 1 ? "a" : "a^" + std::to_string(i);
            out += (s == "1") ? av : parenthesize(s) + "*" + av;
        }
    }
    return out;
}

inline Rat balanced_lift(const FFElem& c) {
    if (c.level() != 0)
        throw PrecondError("lift needs a prime-field element");
    std::uint64_t s = c.data().s;
    std::uint64_t p = c.tower()->p();
    long v = static_cast<long>(s);
    if (s > p / 2) v -= static_cast<long>(p);
    return Rat(v);
}

}  // namespace detail

// (Q, ord_p): rank-one discrete, residue field F_p.
class QpField {
public:
    using Elem = Rat;

    explicit QpField(unsigned long p) : p_(p), tower_(FFTower::prime_field(p)) {}

    int rank() const { return 1; }
    long characteristic() const { return 0; }
    unsigned long residue_char() const { return p_; }
    const FFTowerPtr& residue_tower() const { return tower_; }
    FieldDescriptor descriptor() const { return FieldDescriptor::qp(p_); }

    GroupValue value(const Elem& a) const {
        if (is_zero(a)) return GroupValue::infinity();
        return GroupValue::scalar(rat(rat_ord(a, Int(static_cast<long>(p_))), 1));
    }

    FFElem residue(const Elem& a) const {
        if (!value(a).is_zero()) throw PrecondError("residue of a non-unit");
        Int p(static_cast<long>(p_));
        Int n = a.get_num() % p, d = a.get_den() % p, di;
        if (mpz_invert(di.get_mpz_t(), d.get_mpz_t(), p.get_mpz_t()) == 0)
            throw Error("residue: denominator not invertible");
        return FFElem(tower_, 0, tower_->from_int(0, n * di));
    }

    Elem lift_residue(const FFElem& c) const {
        if (c.is_zero()) throw PrecondError("lift of zero residue");
        return detail::balanced_lift(c);
    }

    Elem gen_monomial(const std::vector<long>& e) const {
        if (e.size() != 1) throw Error("rank mismatch in uniformizer monomial");
        Rat r(Int(static_cast<long>(p_)), 1);
        return pow_rat(r, e[0]);
    }

    Elem from_int(const Int& n) const { return Rat(n); }
    bool has_t() const { return false; }
    Elem t_gen() const { throw PrecondError("field Q_p has no parameter t"); }

    std::string render_elem(const Elem& a) const { return a.get_str(); }

    static Elem pow_rat(const Rat& b, long e) {
        Rat r = 1;
        Rat base = e < 0 ? Rat(b.get_den(), b.get_num()) : b;
        base.canonicalize();
        for (long i = 0, n = e < 0 ? -e : e; i < n; ++i) r *= base;
        return r;
    }

private:
    unsigned long p_;
    FFTowerPtr tower_;
};

// (F_q(t), ord_t): rank-one discrete, residue field F_q.
class FqtField {
public:
    using Coef = FFElem;
    using Elem = RatFunc<FFElem>;

    explicit FqtField(unsigned long q) {
        FieldDescriptor d = FieldDescriptor::fqt(q);
        p_ = d.p;
        k_ = d.k;
        tower_ = galois_field(d.p, d.k);
    }

    int rank() const { return 1; }
    long characteristic() const { return static_cast<long>(p_); }
    unsigned long residue_char() const { return p_; }
    const FFTowerPtr& residue_tower() const { return tower_; }
    FieldDescriptor descriptor() const { return FieldDescriptor::fqt(q()); }
    unsigned long q() const {
        unsigned long r = 1;
        for (unsigned i = 0; i < k_; ++i) r *= p_;
        return r;
    }

    FFElem coef_from_int(const Int& n) const {
        return FFElem(tower_, tower_->top(), tower_->from_int(tower_->top(), n));
    }

    FFElem coef_one() const { return coef_from_int(1); }

    // Generator of F_q over F_p (only meaningful when k > 1).
    FFElem coef_gen() const {
        if (k_ <= 1) throw PrecondError("prime field has no proper generator");
        FFData g;
        g.c = {FFData{}, FFData{1, {}}};
        return FFElem(tower_, 1, g);
    }

    GroupValue value(const Elem& a) const {
        if (a.is_zero()) return GroupValue::infinity();
        long v = detail::ord_t(a.num()) - (a.den_is_one() ? 0 : detail::ord_t(a.den_raw()));
        return GroupValue::scalar(rat(v, 1));
    }

    FFElem residue(const Elem& a) const {
        if (!value(a).is_zero()) throw PrecondError("residue of a non-unit");
        FFElem n0 = a.num().coeff(0);
        FFElem d0 = a.den_is_one() ? coef_one() : a.den_raw().coeff(0);
        return n0 / d0;
    }

    Elem lift_residue(const FFElem& c) const {
        if (c.is_zero()) throw PrecondError("lift of zero residue");
        return Elem::constant(c.embed_into(tower_, tower_->top()));
    }

    Elem gen_monomial(const std::vector<long>& e) const {
        if (e.size() != 1) throw Error("rank mismatch in uniformizer monomial");
        Poly<FFElem> t = Poly<FFElem>::monomial(coef_one(), static_cast<std::size_t>(e[0] < 0 ? -e[0] : e[0]));
        Poly<FFElem> one = Poly<FFElem>::constant(coef_one());
        return e[0] >= 0 ? Elem(t, one) : Elem(one, t);
    }

    Elem from_int(const Int& n) const { return Elem::constant(coef_from_int(n)); }
    bool has_t() const { return true; }
    Elem t_gen() const { return gen_monomial({1}); }

    std::string render_elem(const Elem& a) const {
        if (a.is_zero()) return "0";
        auto rc = [](const FFElem& c) { return detail::render_ffelem(c); };
        std::string n = detail::render_var_poly(a.num(), "t", rc, false);
        if (a.den_is_one()) return n;
        std::string d = detail::render_var_poly(a.den_raw(), "t", rc, false);
        return detail::parenthesize(n) + "/" + detail::parenthesize(d);
    }

private:
    unsigned long p_;
    unsigned k_ = 1;
    FFTowerPtr tower_;
};

// (Q(t), v) with v(u) = (ord_t(u), ord_p(in(u))) in Z^2_lex; residue field F_p.
class Qt2Field {
public:
    using Elem = RatFunc<Rat>;

    explicit Qt2Field(unsigned long p) : p_(p), tower_(FFTower::prime_field(p)) {}

    int rank() const { return 2; }
    long characteristic() const { return 0; }
    unsigned long residue_char() const { return p_; }
    const FFTowerPtr& residue_tower() const { return tower_; }
    FieldDescriptor descriptor() const { return FieldDescriptor::qt2(p_); }

    // in(u) = (u * t^{-ord_t u})(0), a nonzero rational.
    Rat initial_term(const Elem& a) const {
        if (a.is_zero()) throw PrecondError("initial term of zero");
        long an = detail::ord_t(a.num());
        Rat n0 = a.num().coeff(an);
        if (a.den_is_one()) return n0;
        long ad = detail::ord_t(a.den_raw());
        Rat r = n0 / a.den_raw().coeff(ad);
        r.canonicalize();
        return r;
    }

    GroupValue value(const Elem& a) const {
        if (a.is_zero()) return GroupValue::infinity();
        long vt = detail::ord_t(a.num()) - (a.den_is_one() ? 0 : detail::ord_t(a.den_raw()));
        long vp = rat_ord(initial_term(a), Int(static_cast<long>(p_)));
        return GroupValue(std::vector<Rat>{rat(vt, 1), rat(vp, 1)});
    }

    FFElem residue(const Elem& a) const {
        if (!value(a).is_zero()) throw PrecondError("residue of a non-unit");
        Rat in = initial_term(a);
        Int p(static_cast<long>(p_));
        Int n = in.get_num() % p, d = in.get_den() % p, di;
        if (mpz_invert(di.get_mpz_t(), d.get_mpz_t(), p.get_mpz_t()) == 0)
            throw Error("residue: denominator not invertible");
        return FFElem(tower_, 0, tower_->from_int(0, n * di));
    }

    Elem lift_residue(const FFElem& c) const {
        if (c.is_zero()) throw PrecondError("lift of zero residue");
        return Elem::constant(detail::balanced_lift(c));
    }

    Elem gen_monomial(const std::vector<long>& e) const {
        if (e.size() != 2) throw Error("rank mismatch in uniformizer monomial");
        Rat c = QpField::pow_rat(Rat(static_cast<long>(p_)), e[1]);
        Poly<Rat> t = Poly<Rat>::monomial(Rat(1), static_cast<std::size_t>(e[0] < 0 ? -e[0] : e[0]));
        Poly<Rat> one = Poly<Rat>::constant(Rat(1));
        Elem m = e[0] >= 0 ? Elem(t, one) : Elem(one, t);
        return m * Elem::constant(c);
    }

    Elem from_int(const Int& n) const { return Elem::constant(Rat(n)); }
    bool has_t() const { return true; }
    Elem t_gen() const { return gen_monomial({1, 0}); }

    std::string render_elem(const Elem& a) const {
        if (a.is_zero()) return "0";
        auto rc = [](const Rat& c) { return c.get_str(); };
        std::string n = detail::render_var_poly(a.num(), "t", rc, true);
        if (a.den_is_one()) return n;
        std::string d = detail::render_var_poly(a.den_raw(), "t", rc, true);
        return detail::parenthesize(n) + "/" + detail::parenthesize(d);
    }

private:
    unsigned long p_;
    FFTowerPtr tower_;
};

using AnyField = std::variant<QpField, FqtField, Qt2Field>;

inline AnyField make_field(const FieldDescriptor& d) {
    switch (d.kind) {
        case FieldDescriptor::Kind::Qp: return QpField(d.p);
        case FieldDescriptor::Kind::Fqt: return FqtField(d.q());
        case FieldDescriptor::Kind::Qt2: return Qt2Field(d.p);
    }
    throw Error("unknown field kind");
}

}  // namespace omf
