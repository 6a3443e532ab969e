#pragma once

#include <omf/poly.hpp>

#include <utility>

namespace omf {

// Rational function num/den over an exact coefficient field, kept in lowest
// terms with monic denominator. A denominator of degree zero is folded into
// the numerator and stored as the empty polynomial, so equality is structural.
template <class C>
class RatFunc {
public:
    RatFunc() = default;

    static RatFunc from_poly(Poly<C> p) {
        RatFunc r;
        r.num_ = std::move(p);
        return r;
    }

    static RatFunc constant(C v) { return from_poly(Poly<C>::constant(std::move(v))); }

    RatFunc(Poly<C> n, Poly<C> d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

    const Poly<C>& num() const { return num_; }
    bool den_is_one() const { return den_.zero(); }
    const Poly<C>& den_raw() const { return den_; }

    Poly<C> den() const {
        if (!den_.zero()) return den_;
        if (num_.zero()) throw Error("rational function zero has no materialized denominator");
        return Poly<C>::constant(num_.one_of());
    }

    bool is_zero() const { return num_.zero(); }
    bool is_poly() const { return den_.zero(); }

    const Poly<C>& as_poly() const {
        if (!den_.zero()) throw Error("rational function is not polynomial");
        return num_;
    }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        return RatFunc(a.num_ * b.den() + b.num_ * a.den(), a.den() * b.den());
    }

    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

    RatFunc operator-() const {
        RatFunc r = *this;
        r.num_ = -r.num_;
        return r;
    }

    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        if (a.is_zero() || b.is_zero()) return RatFunc();
        return RatFunc(a.num_ * b.num_, a.den() * b.den());
    }

    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.is_zero()) throw Error("rational function division by zero");
        if (a.is_zero()) return RatFunc();
        return RatFunc(a.num_ * b.den(), a.den() * b.num_);
    }

    RatFunc inv() const {
        if (is_zero()) throw Error("inverse of zero rational function");
        return RatFunc(den(), num_);
    }

    bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }

private:
    void normalize() {
        if (den_.zero()) throw Error("rational function with zero denominator");
        if (num_.zero()) {
            den_ = Poly<C>();
            return;
        }
        Poly<C> g = gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = num_.divrem(g).first;
            den_ = den_.divrem(g).first;
        }
        C scale = num_.one_of() / den_.lead();
        num_ = num_.scaled(scale);
        den_ = den_.scaled(scale);
        if (den_.degree() == 0) den_ = Poly<C>();
    }

    Poly<C> num_;
    Poly<C> den_;
};

template <class C>
bool is_zero(const RatFunc<C>& a) {
    return a.is_zero();
}

}  // namespace omf
