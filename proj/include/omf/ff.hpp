#pragma once

#include <omf/numbers.hpp>

#include <algorithm>
#include <memory>
#include <random>
#include <utility>
#include <vector>

namespace omf {

// Nested coefficient data of a tower element. At level 0 the payload is the
// scalar s in [0, p); at level L > 0 it is the dense coefficient vector c over
// level L-1 with trailing zeros trimmed (zero element = empty vector).
struct FFData {
    std::uint64_t s = 0;
    std::vector<FFData> c;
    bool operator==(const FFData&) const = default;
};

class FFTower;
using FFTowerPtr = std::shared_ptr<const FFTower>;

// Tower F_p = level 0 < level 1 < ... < level top(), each level cut out by a
// monic irreducible modulus over the previous one. Immutable; extensions
// produce new towers sharing nothing mutable.
class FFTower : public std::enable_shared_from_this<FFTower> {
public:
    using PolyD = std::vector<FFData>;

    static FFTowerPtr prime_field(unsigned long p) {
        if (p < 2 || p >= (1ul << 31) || !is_prime(p))
            throw PrecondError("characteristic must be a prime < 2^31");
        return FFTowerPtr(new FFTower(p));
    }

    unsigned long p() const { return p_; }
    int top() const { return static_cast<int>(moduli_.size()); }
    const PolyD& modulus(int level) const { return moduli_.at(static_cast<std::size_t>(level - 1)); }
    long modulus_degree(int level) const { return static_cast<long>(modulus(level).size()) - 1; }

    Int card(int level) const {
        Int c(static_cast<long>(p_));
        Int e = 1;
        for (int i = 1; i <= level; ++i) e *= modulus_degree(i);
        return ipow(Int(static_cast<long>(p_)), static_cast<unsigned long>(to_long(e)));
    }

    long abs_degree(int level) const {
        long d = 1;
        for (int i = 1; i <= level; ++i) d *= modulus_degree(i);
        return d;
    }

    // New tower with psi (monic irreducible over level top()) on top.
    FFTowerPtr extend(const PolyD& psi) const {
        if (pol_deg(psi) < 2) throw PrecondError("tower extension needs degree >= 2");
        auto t = FFTowerPtr(new FFTower(p_));
        const_cast<FFTower&>(*t).moduli_ = moduli_;
        const_cast<FFTower&>(*t).moduli_.push_back(psi);
        return t;
    }

    bool same_shape(const FFTower& o) const {
        return p_ == o.p_ && moduli_ == o.moduli_;
    }

    //
    // element arithmetic at a given level
    //

    FFData zero() const { return FFData{}; }

    bool is_zero(const FFData& a) const { return a.s == 0 && a.c.empty(); }

    FFData one(int level) const {
        if (level == 0) return FFData{1, {}};
        FFData r;
        r.c.push_back(one(level - 1));
        return r;
    }

    FFData from_long(int level, long v) const {
        long m = v % static_cast<long>(p_);
        if (m < 0) m += static_cast<long>(p_);
        if (m == 0) return zero();
        if (level == 0) return FFData{static_cast<std::uint64_t>(m), {}};
        FFData r;
        r.c.push_back(from_long(level - 1, m));
        return r;
    }

    FFData from_int(int level, const Int& v) const {
        Int m = v % static_cast<long>(p_);
        if (sgn(m) < 0) m += static_cast<long>(p_);
        return from_long(level, to_long(m));
    }

    FFData embed(const FFData& a, int from, int to) const {
        if (from > to) throw Error("embed: level decrease");
        FFData r = a;
        for (int i = from; i < to; ++i) {
            if (is_zero(r)) return zero();
            FFData w;
            w.c.push_back(std::move(r));
            r = std::move(w);
        }
        return r;
    }

    FFData add(int level, const FFData& a, const FFData& b) const {
        if (level == 0) return mk0((a.s + b.s) % p_);
        FFData r;
        r.c = pol_add(level - 1, a.c, b.c);
        return r;
    }

    FFData sub(int level, const FFData& a, const FFData& b) const {
        return add(level, a, neg(level, b));
    }

    FFData neg(int level, const FFData& a) const {
        if (level == 0) return mk0(a.s == 0 ? 0 : p_ - a.s);
        FFData r;
        r.c = pol_neg(level - 1, a.c);
        return r;
    }

    FFData mul(int level, const FFData& a, const FFData& b) const {
        if (level == 0) return mk0(mulmod(a.s, b.s));
        FFData r;
        PolyD prod = pol_mul(level - 1, a.c, b.c);
        r.c = pol_rem(level - 1, prod, moduli_[static_cast<std::size_t>(level - 1)]);
        return r;
    }

    FFData inv(int level, const FFData& a) const {
        if (is_zero(a)) throw Error("inverse of zero field element");
        if (level == 0) return mk0(invmod(a.s));
        FFData r;
        r.c = pol_invmod(level - 1, a.c, moduli_[static_cast<std::size_t>(level - 1)]);
        return r;
    }

    FFData div(int level, const FFData& a, const FFData& b) const {
        return mul(level, a, inv(level, b));
    }

    FFData pow(int level, FFData a, Int e) const {
        if (sgn(e) < 0) {
            a = inv(level, a);
            e = -e;
        }
        FFData r = one(level);
        if (is_zero(a)) return sgn(e) == 0 ? r : zero();
        while (sgn(e) > 0) {
            if (mpz_odd_p(e.get_mpz_t())) r = mul(level, r, a);
            e >>= 1;
            if (sgn(e) > 0) a = mul(level, a, a);
        }
        return r;
    }

    FFData rand_elem(int level, std::mt19937_64& rng) const {
        if (level == 0) return mk0(rng() % p_);
        FFData r;
        long d = modulus_degree(level);
        r.c.resize(static_cast<std::size_t>(d));
        for (auto& x : r.c) x = rand_elem(level - 1, rng);
        pol_trim(r.c);
        return r;
    }

    // Total order on element data, for deterministic output.
    static int data_cmp(const FFData& a, const FFData& b) {
        if (a.s != b.s) return a.s < b.s ? -1 : 1;
        if (a.c.size() != b.c.size()) return a.c.size() < b.c.size() ? -1 : 1;
        for (std::size_t i = a.c.size(); i-- > 0;) {
            int c = data_cmp(a.c[i], b.c[i]);
            if (c != 0) return c;
        }
        return 0;
    }

    //
    // dense polynomials with coefficients at a level
    //

    static void pol_trim(PolyD& a) {
        while (!a.empty() && a.back().s == 0 && a.back().c.empty()) a.pop_back();
    }

    static long pol_deg(const PolyD& a) { return static_cast<long>(a.size()) - 1; }

    PolyD pol_add(int lvl, const PolyD& a, const PolyD& b) const {
        PolyD r = a;
        if (b.size() > r.size()) r.resize(b.size());
        for (std::size_t i = 0; i < b.size(); ++i) r[i] = add(lvl, r[i], b[i]);
        pol_trim(r);
        return r;
    }

    PolyD pol_neg(int lvl, const PolyD& a) const {
        PolyD r = a;
        for (auto& x : r) x = neg(lvl, x);
        return r;
    }

    PolyD pol_sub(int lvl, const PolyD& a, const PolyD& b) const {
        return pol_add(lvl, a, pol_neg(lvl, b));
    }

    PolyD pol_scale(int lvl, const PolyD& a, const FFData& k) const {
        if (is_zero(k)) return {};
        PolyD r = a;
        for (auto& x : r) x = mul(lvl, x, k);
        pol_trim(r);
        return r;
    }

    PolyD pol_mul(int lvl, const PolyD& a, const PolyD& b) const {
        if (a.empty() || b.empty()) return {};
        PolyD r(a.size() + b.size() - 1);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (is_zero(a[i])) continue;
            for (std::size_t j = 0; j < b.size(); ++j) {
                if (is_zero(b[j])) continue;
                r[i + j] = add(lvl, r[i + j], mul(lvl, a[i], b[j]));
            }
        }
        pol_trim(r);
        return r;
    }

    void pol_divrem(int lvl, PolyD a, const PolyD& b, PolyD& q, PolyD& r) const {
        if (b.empty()) throw Error("polynomial division by zero");
        q.clear();
        if (a.size() < b.size()) {
            r = std::move(a);
            return;
        }
        const long db = pol_deg(b);
        FFData lcinv = inv(lvl, b.back());
        q.assign(a.size() - b.size() + 1, FFData{});
        for (long i = pol_deg(a); i >= db; --i) {
            const auto ui = static_cast<std::size_t>(i);
            if (is_zero(a[ui])) continue;
            FFData f = mul(lvl, a[ui], lcinv);
            q[static_cast<std::size_t>(i - db)] = f;
            for (long j = 0; j <= db; ++j)
                a[static_cast<std::size_t>(i - db + j)] =
                    sub(lvl, a[static_cast<std::size_t>(i - db + j)], mul(lvl, f, b[static_cast<std::size_t>(j)]));
        }
        a.resize(static_cast<std::size_t>(db));
        pol_trim(a);
        pol_trim(q);
        r = std::move(a);
    }

    PolyD pol_rem(int lvl, const PolyD& a, const PolyD& b) const {
        PolyD q, r;
        pol_divrem(lvl, a, b, q, r);
        return r;
    }

    PolyD pol_monic(int lvl, PolyD a) const {
        pol_trim(a);
        if (a.empty()) return a;
        FFData li = inv(lvl, a.back());
        for (auto& x : a) x = mul(lvl, x, li);
        return a;
    }

    PolyD pol_gcd(int lvl, PolyD a, PolyD b) const {
        pol_trim(a);
        pol_trim(b);
        while (!b.empty()) {
            PolyD r = pol_rem(lvl, a, b);
            a = std::move(b);
            b = std::move(r);
        }
        return pol_monic(lvl, std::move(a));
    }

    // Inverse of a modulo m (extended Euclid); a must be prime to m.
    PolyD pol_invmod(int lvl, const PolyD& a, const PolyD& m) const {
        PolyD r0 = m, r1 = pol_rem(lvl, a, m);
        PolyD t0, t1{one(lvl)};
        while (!r1.empty()) {
            PolyD q, r2;
            pol_divrem(lvl, r0, r1, q, r2);
            PolyD t2 = pol_sub(lvl, t0, pol_mul(lvl, q, t1));
            r0 = std::move(r1);
            r1 = std::move(r2);
            t0 = std::move(t1);
            t1 = std::move(t2);
        }
        if (pol_deg(r0) != 0) throw Error("pol_invmod: not invertible");
        return pol_scale(lvl, t0, inv(lvl, r0[0]));
    }

    PolyD pol_mulmod(int lvl, const PolyD& a, const PolyD& b, const PolyD& m) const {
        return pol_rem(lvl, pol_mul(lvl, a, b), m);
    }

    PolyD pol_powmod(int lvl, PolyD a, Int e, const PolyD& m) const {
        PolyD r{one(lvl)};
        a = pol_rem(lvl, a, m);
        while (sgn(e) > 0) {
            if (mpz_odd_p(e.get_mpz_t())) r = pol_mulmod(lvl, r, a, m);
            e >>= 1;
            if (sgn(e) > 0) a = pol_mulmod(lvl, a, a, m);
        }
        return r;
    }

    PolyD pol_deriv(int lvl, const PolyD& a) const {
        if (a.size() <= 1) return {};
        PolyD r(a.size() - 1);
        for (std::size_t i = 1; i < a.size(); ++i) {
            FFData k = from_long(lvl, static_cast<long>(i));
            r[i - 1] = mul(lvl, a[i], k);
        }
        pol_trim(r);
        return r;
    }

    FFData pol_eval(int lvl, const PolyD& a, const FFData& x) const {
        FFData acc = zero();
        for (std::size_t i = a.size(); i-- > 0;) acc = add(lvl, mul(lvl, acc, x), a[i]);
        return acc;
    }

    // Coefficient-wise p-th root: valid in F_q since x -> x^p is bijective.
    FFData pth_root(int lvl, const FFData& a) const {
        Int e = card(lvl) / static_cast<long>(p_);
        return pow(lvl, a, e);
    }

private:
    explicit FFTower(unsigned long p) : p_(p) {}

    FFData mk0(std::uint64_t v) const { return v == 0 ? FFData{} : FFData{v, {}}; }

    std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) const {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p_);
    }

    std::uint64_t invmod(std::uint64_t a) const {
        long long t = 0, nt = 1;
        long long r = static_cast<long long>(p_), nr = static_cast<long long>(a % p_);
        while (nr != 0) {
            long long q = r / nr;
            std::swap(t -= q * nt, nt);
            std::swap(r -= q * nr, nr);
        }
        if (r != 1) throw Error("invmod: not invertible");
        if (t < 0) t += static_cast<long long>(p_);
        return static_cast<std::uint64_t>(t);
    }

    unsigned long p_;
    std::vector<PolyD> moduli_;
};

//
// public element / polynomial wrappers
//

class FFElem {
public:
    FFElem() = default;
    FFElem(FFTowerPtr tw, int level, FFData d)
        : tw_(std::move(tw)), lvl_(level), d_(std::move(d)) {}

    static FFElem zero_of(const FFElem& like) { return FFElem(like.tw_, like.lvl_, FFData{}); }

    bool attached() const { return static_cast<bool>(tw_); }
    const FFTowerPtr& tower() const { return tw_; }
    int level() const { return lvl_; }
    const FFData& data() const { return d_; }

    bool is_zero() const { return !tw_ || tw_->is_zero(d_); }

    FFElem embed_to(int level) const {
        ctx();
        return FFElem(tw_, level, tw_->embed(d_, lvl_, level));
    }

    FFElem embed_into(const FFTowerPtr& tw, int level) const {
        if (is_zero()) return FFElem(tw, level, FFData{});
        return FFElem(tw, level, tw->embed(d_, lvl_, level));
    }

    friend FFElem operator+(const FFElem& a, const FFElem& b) {
        auto [tw, lvl] = join(a, b);
        if (!tw) return FFElem();
        return FFElem(tw, lvl, tw->add(lvl, a.at(lvl, tw), b.at(lvl, tw)));
    }
    friend FFElem operator-(const FFElem& a, const FFElem& b) {
        auto [tw, lvl] = join(a, b);
        if (!tw) return FFElem();
        return FFElem(tw, lvl, tw->sub(lvl, a.at(lvl, tw), b.at(lvl, tw)));
    }
    friend FFElem operator*(const FFElem& a, const FFElem& b) {
        auto [tw, lvl] = join(a, b);
        if (!tw) return FFElem();
        if (a.is_zero() || b.is_zero()) return FFElem(tw, lvl, FFData{});
        return FFElem(tw, lvl, tw->mul(lvl, a.at(lvl, tw), b.at(lvl, tw)));
    }
    friend FFElem operator/(const FFElem& a, const FFElem& b) {
        auto [tw, lvl] = join(a, b);
        if (!tw || b.is_zero()) throw Error("FFElem division by zero");
        return FFElem(tw, lvl, tw->div(lvl, a.at(lvl, tw), b.at(lvl, tw)));
    }
    FFElem operator-() const {
        if (!tw_) return FFElem();
        return FFElem(tw_, lvl_, tw_->neg(lvl_, d_));
    }

    FFElem inv() const {
        ctx();
        return FFElem(tw_, lvl_, tw_->inv(lvl_, d_));
    }

    FFElem pow(const Int& e) const {
        ctx();
        return FFElem(tw_, lvl_, tw_->pow(lvl_, d_, e));
    }

    friend bool operator==(const FFElem& a, const FFElem& b) {
        if (a.is_zero() && b.is_zero()) return true;
        if (a.is_zero() != b.is_zero()) return false;
        auto [tw, lvl] = join(a, b);
        return a.at(lvl, tw) == b.at(lvl, tw);
    }

private:
    void ctx() const {
        if (!tw_) throw Error("FFElem without field context");
    }

    FFData at(int lvl, const FFTowerPtr& tw) const {
        if (!tw_) return FFData{};
        return tw->embed(d_, lvl_, lvl);
    }

    static std::pair<FFTowerPtr, int> join(const FFElem& a, const FFElem& b) {
        if (!a.tw_ && !b.tw_) return {nullptr, 0};
        if (!a.tw_) return {b.tw_, b.lvl_};
        if (!b.tw_) return {a.tw_, a.lvl_};
        if (a.tw_ != b.tw_ && !a.tw_->same_shape(*b.tw_))
            throw Error("FFElem tower mismatch");
        return {a.tw_, std::max(a.lvl_, b.lvl_)};
    }

    FFTowerPtr tw_;
    int lvl_ = 0;
    FFData d_;
};

inline bool is_zero(const FFElem& a) { return a.is_zero(); }

// Dense univariate polynomial over a tower level.
class FFPoly {
public:
    FFPoly() = default;
    FFPoly(FFTowerPtr tw, int level, std::vector<FFData> coeffs)
        : tw_(std::move(tw)), lvl_(level), c_(std::move(coeffs)) {
        FFTower::pol_trim(c_);
    }

    static FFPoly from_elems(const std::vector<FFElem>& coeffs) {
        if (coeffs.empty()) throw Error("FFPoly: empty coefficient list");
        FFTowerPtr tw;
        int lvl = 0;
        for (const auto& e : coeffs)
            if (e.attached()) {
                tw = e.tower();
                lvl = std::max(lvl, e.level());
            }
        if (!tw) throw Error("FFPoly: no field context");
        std::vector<FFData> d;
        d.reserve(coeffs.size());
        for (const auto& e : coeffs) d.push_back(e.embed_into(tw, lvl).data());
        return FFPoly(tw, lvl, std::move(d));
    }

    const FFTowerPtr& tower() const { return tw_; }
    int level() const { return lvl_; }
    const std::vector<FFData>& data() const { return c_; }
    long degree() const { return FFTower::pol_deg(c_); }
    bool zero() const { return c_.empty(); }

    FFElem coeff(long i) const {
        if (i < 0 || i > degree()) return FFElem(tw_, lvl_, FFData{});
        return FFElem(tw_, lvl_, c_[static_cast<std::size_t>(i)]);
    }

    bool monic() const {
        return !c_.empty() && c_.back() == tw_->one(lvl_);
    }

    FFPoly monic_scaled() const { return FFPoly(tw_, lvl_, tw_->pol_monic(lvl_, c_)); }

    friend FFPoly operator+(const FFPoly& a, const FFPoly& b) {
        a.chk(b);
        return FFPoly(a.tw_, a.lvl_, a.tw_->pol_add(a.lvl_, a.c_, b.c_));
    }
    friend FFPoly operator-(const FFPoly& a, const FFPoly& b) {
        a.chk(b);
        return FFPoly(a.tw_, a.lvl_, a.tw_->pol_sub(a.lvl_, a.c_, b.c_));
    }
    friend FFPoly operator*(const FFPoly& a, const FFPoly& b) {
        a.chk(b);
        return FFPoly(a.tw_, a.lvl_, a.tw_->pol_mul(a.lvl_, a.c_, b.c_));
    }

    std::pair<FFPoly, FFPoly> divrem(const FFPoly& b) const {
        chk(b);
        FFTower::PolyD q, r;
        tw_->pol_divrem(lvl_, c_, b.c_, q, r);
        return {FFPoly(tw_, lvl_, std::move(q)), FFPoly(tw_, lvl_, std::move(r))};
    }

    FFPoly gcd(const FFPoly& b) const {
        chk(b);
        return FFPoly(tw_, lvl_, tw_->pol_gcd(lvl_, c_, b.c_));
    }

    FFPoly derivative() const { return FFPoly(tw_, lvl_, tw_->pol_deriv(lvl_, c_)); }

    FFElem eval(const FFElem& x) const {
        int lvl = std::max(lvl_, x.level());
        FFData xv = x.embed_into(tw_, lvl).data();
        FFTower::PolyD cc;
        cc.reserve(c_.size());
        for (const auto& v : c_) cc.push_back(tw_->embed(v, lvl_, lvl));
        return FFElem(tw_, lvl, tw_->pol_eval(lvl, cc, xv));
    }

    // Structural equality (towers compared by shape).
    friend bool operator==(const FFPoly& a, const FFPoly& b) {
        if (a.c_.empty() && b.c_.empty()) return true;
        if (!a.tw_ || !b.tw_) return false;
        return a.lvl_ == b.lvl_ && a.tw_->same_shape(*b.tw_) && a.c_ == b.c_;
    }

    static int cmp(const FFPoly& a, const FFPoly& b) {
        if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
        for (std::size_t i = a.c_.size(); i-- > 0;) {
            int c = FFTower::data_cmp(a.c_[i], b.c_[i]);
            if (c != 0) return c;
        }
        return 0;
    }

private:
    void chk(const FFPoly& b) const {
        if (!tw_ || !b.tw_ || lvl_ != b.lvl_ ||
            (tw_ != b.tw_ && !tw_->same_shape(*b.tw_)))
            throw Error("FFPoly context mismatch");
    }

    FFTowerPtr tw_;
    int lvl_ = 0;
    std::vector<FFData> c_;
};

namespace detail {

inline FFTower::PolyD pol_pth_root(const FFTower& tw, int lvl, const FFTower::PolyD& f) {
    FFTower::PolyD r;
    unsigned long p = tw.p();
    r.resize(f.size() / p + 1);
    for (std::size_t i = 0; i < r.size(); ++i) {
        std::size_t j = i * p;
        r[i] = j < f.size() ? tw.pth_root(lvl, f[j]) : FFData{};
    }
    FFTower::pol_trim(r);
    return r;
}

// f = prod g_i^{m_i} with each g_i squarefree; returns (g_i, m_i).
inline void squarefree_parts(const FFTower& tw, int lvl, FFTower::PolyD f, int mult,
                             std::vector<std::pair<FFTower::PolyD, int>>& out) {
    if (FFTower::pol_deg(f) <= 0) return;
    FFTower::PolyD fp = tw.pol_deriv(lvl, f);
    if (fp.empty()) {
        squarefree_parts(tw, lvl, pol_pth_root(tw, lvl, f), mult * static_cast<int>(tw.p()), out);
        return;
    }
    FFTower::PolyD c = tw.pol_gcd(lvl, f, fp);
    FFTower::PolyD w, rr;
    tw.pol_divrem(lvl, f, c, w, rr);
    if (!rr.empty()) throw Error("squarefree: inexact division");
    int i = 1;
    while (FFTower::pol_deg(w) > 0) {
        FFTower::PolyD y = tw.pol_gcd(lvl, w, c);
        FFTower::PolyD q, r;
        tw.pol_divrem(lvl, w, y, q, r);
        if (FFTower::pol_deg(q) > 0) out.emplace_back(tw.pol_monic(lvl, q), mult * i);
        ++i;
        w = std::move(y);
        tw.pol_divrem(lvl, c, w, q, r);
        c = std::move(q);
    }
    if (FFTower::pol_deg(c) > 0)
        squarefree_parts(tw, lvl, pol_pth_root(tw, lvl, c), mult * static_cast<int>(tw.p()), out);
}

// Split a monic squarefree product of degree-d irreducibles.
inline void equal_degree_split(const FFTower& tw, int lvl, const FFTower::PolyD& f, long d,
                               std::mt19937_64& rng, std::vector<FFTower::PolyD>& out) {
    if (FFTower::pol_deg(f) == d) {
        out.push_back(f);
        return;
    }
    const Int q = tw.card(lvl);
    FFTower::PolyD split;
    for (int tries = 0; tries < 256; ++tries) {
        FFTower::PolyD a(static_cast<std::size_t>(FFTower::pol_deg(f)));
        for (auto& x : a) x = tw.rand_elem(lvl, rng);
        FFTower::pol_trim(a);
        if (FFTower::pol_deg(a) < 1) continue;
        FFTower::PolyD b;
        if (tw.p() == 2) {
            long bits = tw.abs_degree(lvl) * d;
            FFTower::PolyD t = a, acc = a;
            for (long i = 1; i < bits; ++i) {
                t = tw.pol_mulmod(lvl, t, t, f);
                acc = tw.pol_add(lvl, acc, t);
            }
            b = acc;
        } else {
            Int e = (ipow(q, static_cast<unsigned long>(d)) - 1) / 2;
            b = tw.pol_powmod(lvl, a, e, f);
            if (!b.empty()) b[0] = tw.sub(lvl, b[0], tw.one(lvl));
            else b = tw.pol_neg(lvl, FFTower::PolyD{tw.one(lvl)});
            FFTower::pol_trim(b);
        }
        FFTower::PolyD g = tw.pol_gcd(lvl, f, b);
        if (FFTower::pol_deg(g) > 0 && FFTower::pol_deg(g) < FFTower::pol_deg(f)) {
            split = g;
            break;
        }
    }
    if (split.empty()) throw Error("equal-degree splitting failed to converge");
    FFTower::PolyD q2, r2;
    tw.pol_divrem(lvl, f, split, q2, r2);
    equal_degree_split(tw, lvl, split, d, rng, out);
    equal_degree_split(tw, lvl, tw.pol_monic(lvl, q2), d, rng, out);
}

inline void distinct_degree_factor(const FFTower& tw, int lvl, FFTower::PolyD f,
                                   std::mt19937_64& rng, std::vector<FFTower::PolyD>& out) {
    const Int q = tw.card(lvl);
    FFTower::PolyD x{tw.zero(), tw.one(lvl)};
    FFTower::PolyD h = x;
    long d = 0;
    while (FFTower::pol_deg(f) > 0) {
        ++d;
        if (2 * d > FFTower::pol_deg(f)) {
            out.push_back(f);
            break;
        }
        h = tw.pol_powmod(lvl, h, q, f);
        FFTower::PolyD g = tw.pol_gcd(lvl, f, tw.pol_sub(lvl, h, x));
        if (FFTower::pol_deg(g) > 0) {
            equal_degree_split(tw, lvl, g, d, rng, out);
            FFTower::PolyD qq, rr;
            tw.pol_divrem(lvl, f, g, qq, rr);
            f = tw.pol_monic(lvl, std::move(qq));
            h = tw.pol_rem(lvl, h, f);
        }
    }
}

}  // namespace detail

// Monic irreducible factors with multiplicities; product equals f up to the
// leading unit. Randomized splitting is reproducible given the generator.
inline std::vector<std::pair<FFPoly, int>> ff_factor(const FFPoly& f, std::mt19937_64& rng) {
    if (f.zero()) throw PrecondError("ff_factor of zero polynomial");
    const FFTower& tw = *f.tower();
    const int lvl = f.level();
    std::vector<std::pair<FFTower::PolyD, int>> parts;
    detail::squarefree_parts(tw, lvl, tw.pol_monic(lvl, f.data()), 1, parts);
    std::vector<std::pair<FFPoly, int>> out;
    for (auto& [g, m] : parts) {
        std::vector<FFTower::PolyD> irr;
        detail::distinct_degree_factor(tw, lvl, g, rng, irr);
        for (auto& h : irr) out.emplace_back(FFPoly(f.tower(), lvl, std::move(h)), m);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return FFPoly::cmp(a.first, b.first) < 0;
    });
    return out;
}

inline std::vector<std::pair<FFPoly, int>> ff_factor(const FFPoly& f, std::uint64_t seed = 0x0f0e1d2c3b4a5968ull) {
    std::mt19937_64 rng(seed);
    return ff_factor(f, rng);
}

// Rabin's criterion; deterministic.
inline bool ff_is_irreducible(const FFPoly& f) {
    if (f.zero() || f.degree() < 1) throw PrecondError("irreducibility of constant polynomial");
    const FFTower& tw = *f.tower();
    const int lvl = f.level();
    const Int q = tw.card(lvl);
    FFTower::PolyD m = tw.pol_monic(lvl, f.data());
    long d = FFTower::pol_deg(m);
    FFTower::PolyD x{tw.zero(), tw.one(lvl)};
    for (long ell = 2; ell <= d; ++ell) {
        if (d % ell != 0 || !is_prime(static_cast<unsigned long>(ell))) continue;
        FFTower::PolyD h = tw.pol_powmod(lvl, x, ipow(q, static_cast<unsigned long>(d / ell)), m);
        FFTower::PolyD g = tw.pol_gcd(lvl, m, tw.pol_sub(lvl, h, x));
        if (FFTower::pol_deg(g) != 0) return false;
    }
    FFTower::PolyD h = tw.pol_powmod(lvl, x, ipow(q, static_cast<unsigned long>(d)), m);
    return tw.pol_rem(lvl, tw.pol_sub(lvl, h, x), m).empty();
}

// F_{p^k} with a deterministic defining modulus (first irreducible monic of
// degree k in coefficient-lex order).
inline FFTowerPtr galois_field(unsigned long p, unsigned k) {
    FFTowerPtr base = FFTower::prime_field(p);
    if (k <= 1) return base;
    Int total = ipow(Int(static_cast<long>(p)), k);
    for (Int n = 0; n < total; ++n) {
        FFTower::PolyD cand(k + 1);
        Int rest = n;
        for (unsigned i = 0; i < k; ++i) {
            Int digit = rest % static_cast<long>(p);
            rest /= static_cast<long>(p);
            cand[i] = base->from_long(0, to_long(digit));
        }
        cand[k] = base->one(0);
        if (ff_is_irreducible(FFPoly(base, 0, cand)))
            return base->extend(cand);
    }
    throw Error("no irreducible modulus found");
}

// Pushes psi as a new tower level; degree-1 moduli are resolved in place and
// never become levels.
inline FFTowerPtr tower_extend(const FFTowerPtr& tw, const FFPoly& psi) {
    if (!psi.monic() || psi.degree() < 1) throw PrecondError("tower_extend: modulus must be monic of degree >= 1");
    if (psi.level() != tw->top() || !psi.tower()->same_shape(*tw))
        throw PrecondError("tower_extend: modulus not over the top level");
    if (psi.degree() == 1) return tw;
    if (!ff_is_irreducible(psi)) throw PrecondError("tower_extend: reducible modulus");
    return tw->extend(psi.data());
}

}  // namespace omf
