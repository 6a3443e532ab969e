#pragma once

#include <omf/numbers.hpp>

#include <optional>
#include <utility>
#include <vector>

namespace omf {

// n * c computed with additions only, so coefficient types need no integer
// embedding of their own.
template <class C>
C mul_long(const C& c, long n) {
    if (n < 0) return C{} - mul_long(c, -n);
    C acc{};
    C base = c;
    unsigned long k = static_cast<unsigned long>(n);
    while (k) {
        if (k & 1) acc = acc + base;
        k >>= 1;
        if (k) base = base + base;
    }
    return acc;
}

// Dense univariate polynomial over an exact field. The zero polynomial has an
// empty coefficient vector; a default-constructed C is the zero of its field.
template <class C>
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<C> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Poly constant(C v) {
        Poly p;
        if (!is_zero(v)) p.c_.push_back(std::move(v));
        return p;
    }

    static Poly monomial(C v, std::size_t k) {
        Poly p;
        if (!is_zero(v)) {
            p.c_.resize(k + 1);
            p.c_[k] = std::move(v);
        }
        return p;
    }

    long degree() const { return static_cast<long>(c_.size()) - 1; }
    bool zero() const { return c_.empty(); }
    bool constant_poly() const { return c_.size() <= 1; }

    C coeff(long i) const {
        if (i < 0 || i >= static_cast<long>(c_.size())) return C{};
        return c_[static_cast<std::size_t>(i)];
    }

    const std::vector<C>& coeffs() const { return c_; }

    const C& lead() const {
        if (c_.empty()) throw Error("lead of zero polynomial");
        return c_.back();
    }

    bool is_monic() const {
        if (c_.empty()) return false;
        const C& l = c_.back();
        return l == l / l;
    }

    C one_of() const { return lead() / lead(); }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<C> r = a.c_;
        if (b.c_.size() > r.size()) r.resize(b.c_.size());
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] = r[i] + b.c_[i];
        return Poly(std::move(r));
    }

    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

    Poly operator-() const {
        std::vector<C> r = c_;
        for (auto& x : r) x = C{} - x;
        return Poly(std::move(r));
    }

    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.zero() || b.zero()) return Poly();
        std::vector<C> r(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (is_zero(a.c_[i])) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                if (is_zero(b.c_[j])) continue;
                r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
            }
        }
        return Poly(std::move(r));
    }

    Poly scaled(const C& k) const {
        if (is_zero(k)) return Poly();
        std::vector<C> r = c_;
        for (auto& x : r) x = x * k;
        return Poly(std::move(r));
    }

    // Multiplication by x^k.
    Poly shifted(std::size_t k) const {
        if (zero()) return Poly();
        std::vector<C> r(c_.size() + k);
        for (std::size_t i = 0; i < c_.size(); ++i) r[i + k] = c_[i];
        return Poly(std::move(r));
    }

    std::pair<Poly, Poly> divrem(const Poly& b) const {
        if (b.zero()) throw Error("polynomial division by zero");
        if (degree() < b.degree()) return {Poly(), *this};
        std::vector<C> rem = c_;
        std::vector<C> quo(c_.size() - b.c_.size() + 1);
        const long db = b.degree();
        for (long i = degree(); i >= db; --i) {
            const auto ui = static_cast<std::size_t>(i);
            if (is_zero(rem[ui])) continue;
            C f = rem[ui] / b.lead();
            quo[static_cast<std::size_t>(i - db)] = f;
            for (long j = 0; j <= db; ++j)
                rem[static_cast<std::size_t>(i - db + j)] =
                    rem[static_cast<std::size_t>(i - db + j)] - f * b.c_[static_cast<std::size_t>(j)];
        }
        rem.resize(static_cast<std::size_t>(db));
        return {Poly(std::move(quo)), Poly(std::move(rem))};
    }

    bool divides(const Poly& g) const { return g.divrem(*this).second.zero(); }

    Poly monic() const {
        if (zero()) throw Error("monic of zero polynomial");
        return scaled(one_of() / lead());
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<C> r(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = mul_long(c_[i], static_cast<long>(i));
        return Poly(std::move(r));
    }

    C eval(const C& x) const {
        C acc{};
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    Poly pow(unsigned long e) const {
        if (zero()) {
            if (e == 0) throw Error("0^0 polynomial power");
            return Poly();
        }
        Poly r = constant(one_of());
        Poly base = *this;
        while (e) {
            if (e & 1) r = r * base;
            e >>= 1;
            if (e) base = base * base;
        }
        return r;
    }

    friend Poly gcd(Poly a, Poly b) {
        while (!b.zero()) {
            Poly r = a.divrem(b).second;
            a = std::move(b);
            b = std::move(r);
        }
        return a.zero() ? a : a.monic();
    }

    // Coefficients a_0..a_m of g = sum a_i phi^i with deg a_i < deg phi.
    // When ell is given, only the first ell+1 coefficients are produced.
    std::vector<Poly> phi_expansion(const Poly& phi, std::optional<long> ell = {}) const {
        if (!phi.is_monic() || phi.degree() < 1)
            throw PrecondError("phi-expansion needs a monic non-constant phi");
        std::vector<Poly> out;
        Poly rest = *this;
        while (!rest.zero()) {
            if (ell && static_cast<long>(out.size()) > *ell) break;
            auto [q, r] = rest.divrem(phi);
            out.push_back(std::move(r));
            rest = std::move(q);
        }
        if (ell) {
            if (static_cast<long>(out.size()) > *ell + 1) out.resize(static_cast<std::size_t>(*ell + 1));
        }
        if (out.empty()) out.push_back(Poly());
        return out;
    }

    bool operator==(const Poly& o) const { return c_ == o.c_; }

private:
    void trim() {
        while (!c_.empty() && is_zero(c_.back())) c_.pop_back();
    }

    std::vector<C> c_;
};

// gcd(g, g') is constant <=> squarefree; a vanishing derivative of a
// non-constant g cannot be classified this way and is rejected.
template <class C>
bool squarefree_test(const Poly<C>& g) {
    if (g.zero()) throw PrecondError("squarefree test of zero polynomial");
    if (g.degree() == 0) return true;
    Poly<C> d = g.derivative();
    if (d.zero()) throw PrecondError("squarefree test: derivative vanishes (inseparable)");
    return gcd(g, d).degree() == 0;
}

}  // namespace omf
