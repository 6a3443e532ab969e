#pragma once

#include <omf/groupvalue.hpp>
#include <omf/numbers.hpp>

#include <vector>

namespace omf {

// Finitely generated full-rank subgroup of Q^r, stored as (1/den) * L where L
// is the Z-row-span of an integer matrix in Hermite normal form. The pair
// (den, HNF) with gcd(den, content) = 1 is a unique representation, so
// membership and equality tests are deterministic.
class ValueLattice {
public:
    ValueLattice(int rank, Int den, std::vector<std::vector<Int>> rows)
        : rank_(rank), den_(std::move(den)), h_(std::move(rows)) {
        normalize_content();
    }

    // Z^r with the standard basis.
    static ValueLattice standard(int rank) {
        std::vector<std::vector<Int>> id(static_cast<std::size_t>(rank),
                                         std::vector<Int>(static_cast<std::size_t>(rank), 0));
        for (int i = 0; i < rank; ++i) id[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
        return ValueLattice(rank, 1, std::move(id));
    }

    int rank() const { return rank_; }
    const Int& den() const { return den_; }
    const std::vector<std::vector<Int>>& rows() const { return h_; }

    bool operator==(const ValueLattice& o) const {
        return rank_ == o.rank_ && den_ == o.den_ && h_ == o.h_;
    }

    // Least e >= 1 with e*gamma in the lattice.
    long index(const GroupValue& gamma) const {
        if (!gamma.finite()) throw PrecondError("lattice index of Infinity");
        if (gamma.rank() != rank_) throw PrecondError("lattice/value rank mismatch");
        std::vector<Rat> x = solve(gamma);
        Int e = 1;
        for (const auto& xi : x) e = ilcm(e, xi.get_den());
        return to_long(e);
    }

    bool contains(const GroupValue& gamma) const { return index(gamma) == 1; }

    // Canonical lattice generated by this one together with gamma.
    ValueLattice extended(const GroupValue& gamma) const {
        if (!gamma.finite()) throw PrecondError("lattice extension by Infinity");
        if (gamma.rank() != rank_) throw PrecondError("lattice/value rank mismatch");
        Int nden = den_;
        for (const auto& c : gamma.coords()) nden = ilcm(nden, c.get_den());
        Int scale = idivexact(nden, den_);
        std::vector<std::vector<Int>> rows = h_;
        for (auto& row : rows)
            for (auto& v : row) v *= scale;
        std::vector<Int> extra;
        extra.reserve(static_cast<std::size_t>(rank_));
        for (const auto& c : gamma.coords()) {
            Rat t = c * nden;
            t.canonicalize();
            extra.push_back(t.get_num());
        }
        rows.push_back(std::move(extra));
        hermite(rows, rank_);
        rows.resize(static_cast<std::size_t>(rank_));
        return ValueLattice(rank_, nden, std::move(rows));
    }

private:
    // Solve x * H = den * gamma over Q (H upper triangular, full rank).
    std::vector<Rat> solve(const GroupValue& gamma) const {
        std::vector<Rat> t(static_cast<std::size_t>(rank_));
        for (int j = 0; j < rank_; ++j) {
            t[static_cast<std::size_t>(j)] = gamma[j] * den_;
            t[static_cast<std::size_t>(j)].canonicalize();
        }
        std::vector<Rat> x(static_cast<std::size_t>(rank_));
        for (int j = 0; j < rank_; ++j) {
            Rat acc = t[static_cast<std::size_t>(j)];
            for (int i = 0; i < j; ++i)
                acc -= x[static_cast<std::size_t>(i)] * h_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            const Int& piv = h_[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)];
            if (sgn(piv) == 0) throw Error("lattice not full rank");
            x[static_cast<std::size_t>(j)] = acc / piv;
            x[static_cast<std::size_t>(j)].canonicalize();
        }
        return x;
    }

    void normalize_content() {
        if (static_cast<int>(h_.size()) != rank_) throw Error("lattice basis size mismatch");
        Int g = den_;
        for (const auto& row : h_)
            for (const auto& v : row) g = igcd(g, v);
        if (g > 1) {
            den_ = idivexact(den_, g);
            for (auto& row : h_)
                for (auto& v : row) v = idivexact(v, g);
        }
    }

    // In-place row Hermite normal form: upper triangular, positive pivots,
    // entries above a pivot reduced into [0, pivot).
    static void hermite(std::vector<std::vector<Int>>& rows, int rank) {
        const std::size_t m = rows.size();
        for (int col = 0; col < rank; ++col) {
            const auto uc = static_cast<std::size_t>(col);
            for (;;) {
                std::size_t best = m;
                for (std::size_t i = uc; i < m; ++i) {
                    if (sgn(rows[i][uc]) == 0) continue;
                    if (best == m || cmp(abs(rows[i][uc]), abs(rows[best][uc])) < 0) best = i;
                }
                if (best == m) throw Error("lattice basis not full rank");
                bool others = false;
                for (std::size_t i = uc; i < m; ++i) {
                    if (i == best || sgn(rows[i][uc]) == 0) continue;
                    others = true;
                    Int q;
                    mpz_fdiv_q(q.get_mpz_t(), rows[i][uc].get_mpz_t(), rows[best][uc].get_mpz_t());
                    for (int j = 0; j < rank; ++j)
                        rows[i][static_cast<std::size_t>(j)] -= q * rows[best][static_cast<std::size_t>(j)];
                }
                if (!others) {
                    std::swap(rows[uc], rows[best]);
                    break;
                }
            }
            if (sgn(rows[uc][uc]) < 0)
                for (int j = 0; j < rank; ++j) rows[uc][static_cast<std::size_t>(j)] = -rows[uc][static_cast<std::size_t>(j)];
        }
        for (std::size_t i = static_cast<std::size_t>(rank); i < m; ++i)
            for (int j = 0; j < rank; ++j)
                if (sgn(rows[i][static_cast<std::size_t>(j)]) != 0)
                    throw Error("lattice echelon leftover");
        for (int col = 1; col < rank; ++col) {
            const auto uc = static_cast<std::size_t>(col);
            for (int i = 0; i < col; ++i) {
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), rows[static_cast<std::size_t>(i)][uc].get_mpz_t(), rows[uc][uc].get_mpz_t());
                if (sgn(q) == 0) continue;
                for (int j = 0; j < rank; ++j)
                    rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -= q * rows[uc][static_cast<std::size_t>(j)];
            }
        }
    }

    int rank_;
    Int den_;
    std::vector<std::vector<Int>> h_;
};

}  // namespace omf
