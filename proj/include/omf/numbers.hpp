#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace omf {

using Int = mpz_class;
using Rat = mpq_class;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed user input (expressions, descriptors, JSON).
struct ParseError : Error {
    std::size_t offset;
    explicit ParseError(const std::string& msg, std::size_t off = 0)
        : Error(msg), offset(off) {}
};

// An operation was invoked outside its stated domain.
struct PrecondError : Error {
    using Error::Error;
};

inline bool is_zero(const Rat& a) { return sgn(a) == 0; }
inline bool is_one(const Rat& a) { return a == 1; }

inline Rat rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat rat(const Int& num, const Int& den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat parse_rat(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0)
        throw ParseError("bad rational literal: " + s);
    r.canonicalize();
    return r;
}

inline std::string render(const Rat& a) { return a.get_str(); }
inline std::string render(const Int& a) { return a.get_str(); }

inline Int ipow(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Int igcd(const Int& a, const Int& b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int ilcm(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

// Exact quotient; throws if b does not divide a.
inline Int idivexact(const Int& a, const Int& b) {
    if (sgn(b) == 0) throw Error("division by zero");
    Int q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (sgn(r) != 0) throw Error("inexact integer division");
    return q;
}

inline long to_long(const Int& a) {
    if (!a.fits_slong_p()) throw Error("integer out of range: " + a.get_str());
    return a.get_si();
}

// ord_p of a nonzero integer.
inline long int_ord(const Int& a, const Int& p) {
    if (sgn(a) == 0) throw Error("ord of zero");
    long k = 0;
    Int v = a, q, r;
    for (;;) {
        mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), v.get_mpz_t(), p.get_mpz_t());
        if (sgn(r) != 0) return k;
        v = q;
        ++k;
    }
}

inline long rat_ord(const Rat& a, const Int& p) {
    if (is_zero(a)) throw Error("ord of zero");
    return int_ord(a.get_num(), p) - int_ord(a.get_den(), p);
}

inline bool is_prime(unsigned long n) {
    Int v(static_cast<long>(n));
    return mpz_probab_prime_p(v.get_mpz_t(), 40) != 0;
}

}  // namespace omf
