#pragma once

#include <omf/numbers.hpp>

#include <compare>
#include <utility>
#include <vector>

namespace omf {

// Element of Q^r with the lexicographic order, plus a distinguished maximal
// value Infinity. All valuation values, slopes and precision bounds live here.
class GroupValue {
public:
    GroupValue() : inf_(true) {}

    explicit GroupValue(std::vector<Rat> coords)
        : inf_(false), co_(std::move(coords)) {
        if (co_.empty()) throw Error("GroupValue needs rank >= 1");
    }

    static GroupValue infinity() { return GroupValue(); }

    static GroupValue zero(int rank) {
        return GroupValue(std::vector<Rat>(static_cast<std::size_t>(rank)));
    }

    static GroupValue scalar(Rat v) {
        return GroupValue(std::vector<Rat>{std::move(v)});
    }

    bool is_infinity() const { return inf_; }
    bool finite() const { return !inf_; }
    int rank() const { return static_cast<int>(co_.size()); }

    const std::vector<Rat>& coords() const {
        require_finite();
        return co_;
    }

    const Rat& operator[](int i) const {
        require_finite();
        return co_[static_cast<std::size_t>(i)];
    }

    // Rank-one convenience accessor.
    const Rat& as_rat() const {
        require_finite();
        if (co_.size() != 1) throw Error("GroupValue: not rank one");
        return co_[0];
    }

    bool is_zero() const {
        if (inf_) return false;
        for (const auto& c : co_)
            if (!omf::is_zero(c)) return false;
        return true;
    }

    // Total order: lexicographic on coordinates, Infinity above everything.
    int cmp(const GroupValue& o) const {
        if (inf_ && o.inf_) return 0;
        if (inf_) return 1;
        if (o.inf_) return -1;
        if (co_.size() != o.co_.size())
            throw Error("GroupValue rank mismatch in comparison");
        for (std::size_t i = 0; i < co_.size(); ++i) {
            int c = ::cmp(co_[i], o.co_[i]);
            if (c != 0) return c;
        }
        return 0;
    }

    bool operator==(const GroupValue& o) const { return cmp(o) == 0; }
    bool operator!=(const GroupValue& o) const { return cmp(o) != 0; }
    bool operator<(const GroupValue& o) const { return cmp(o) < 0; }
    bool operator<=(const GroupValue& o) const { return cmp(o) <= 0; }
    bool operator>(const GroupValue& o) const { return cmp(o) > 0; }
    bool operator>=(const GroupValue& o) const { return cmp(o) >= 0; }

    GroupValue operator+(const GroupValue& o) const {
        if (inf_ || o.inf_) return infinity();
        check_rank(o);
        std::vector<Rat> r(co_);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] += o.co_[i];
        return GroupValue(std::move(r));
    }

    GroupValue operator-(const GroupValue& o) const {
        require_finite();
        o.require_finite();
        check_rank(o);
        std::vector<Rat> r(co_);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= o.co_[i];
        return GroupValue(std::move(r));
    }

    GroupValue operator-() const {
        require_finite();
        std::vector<Rat> r(co_);
        for (auto& c : r) c = -c;
        return GroupValue(std::move(r));
    }

    GroupValue operator*(long k) const {
        if (inf_) {
            if (k <= 0) throw Error("cannot scale Infinity by non-positive");
            return infinity();
        }
        std::vector<Rat> r(co_);
        for (auto& c : r) c *= k;
        return GroupValue(std::move(r));
    }

    GroupValue operator*(const Rat& k) const {
        require_finite();
        std::vector<Rat> r(co_);
        for (auto& c : r) {
            c *= k;
            c.canonicalize();
        }
        return GroupValue(std::move(r));
    }

    GroupValue operator/(long k) const {
        if (k == 0) throw Error("GroupValue division by zero");
        require_finite();
        std::vector<Rat> r(co_);
        for (auto& c : r) {
            c /= k;
            c.canonicalize();
        }
        return GroupValue(std::move(r));
    }

    std::string str() const {
        if (inf_) return "inf";
        if (co_.size() == 1) return co_[0].get_str();
        std::string s = "(";
        for (std::size_t i = 0; i < co_.size(); ++i) {
            if (i) s += ", ";
            s += co_[i].get_str();
        }
        return s + ")";
    }

private:
    void require_finite() const {
        if (inf_) throw Error("GroupValue: Infinity where finite value required");
    }
    void check_rank(const GroupValue& o) const {
        if (co_.size() != o.co_.size()) throw Error("GroupValue rank mismatch");
    }

    bool inf_;
    std::vector<Rat> co_;
};

inline GroupValue min(const GroupValue& a, const GroupValue& b) {
    return a.cmp(b) <= 0 ? a : b;
}

inline GroupValue max(const GroupValue& a, const GroupValue& b) {
    return a.cmp(b) >= 0 ? a : b;
}

}  // namespace omf
