#pragma once

#include <omf/groupvalue.hpp>
#include <omf/mlv.hpp>

#include <algorithm>
#include <utility>
#include <vector>

namespace omf {

struct PolygonSide {
    GroupValue lambda;  // the side has slope -lambda
    long length;        // horizontal length

    bool operator==(const PolygonSide& o) const {
        return length == o.length && lambda == o.lambda;
    }
};

struct PolygonComponent {
    long n_lo = 0, n_hi = 0;
    bool segment = false;
};

// Lower convex hull of a finite cloud in N x Gamma_Q. Vertices carry the hull
// corners only; the full cloud is retained for component queries, which need
// collinear interior points.
class NewtonPolygon {
public:
    using Point = std::pair<long, GroupValue>;

    NewtonPolygon() = default;

    static NewtonPolygon from_cloud(std::vector<Point> pts) {
        NewtonPolygon n;
        std::sort(pts.begin(), pts.end(),
                  [](const Point& a, const Point& b) { return a.first < b.first; });
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            if (pts[i].first == pts[i + 1].first)
                throw Error("polygon cloud with repeated abscissas");
        for (const auto& p : pts)
            if (!p.second.finite()) throw Error("polygon cloud with infinite ordinate");
        n.cloud_ = std::move(pts);
        n.build_hull();
        return n;
    }

    bool empty() const { return cloud_.empty(); }
    const std::vector<Point>& vertices() const { return verts_; }
    const std::vector<Point>& cloud() const { return cloud_; }

    const Point& left() const {
        require();
        return verts_.front();
    }
    const Point& right() const {
        require();
        return verts_.back();
    }

    // Sides left to right; slopes -lambda strictly increase, so the lambdas
    // strictly decrease.
    std::vector<PolygonSide> sides() const {
        require();
        std::vector<PolygonSide> out;
        for (std::size_t i = 0; i + 1 < verts_.size(); ++i) {
            long len = verts_[i + 1].first - verts_[i].first;
            GroupValue lam = (verts_[i].second - verts_[i + 1].second) / len;
            out.push_back({std::move(lam), len});
        }
        return out;
    }

    // Sub-polygon of the sides with slope < -cutoff; the bare left endpoint
    // when no side qualifies.
    NewtonPolygon principal(const GroupValue& cutoff) const {
        require();
        long stop = verts_.front().first;
        GroupValue prev = verts_.front().second;
        for (std::size_t i = 0; i + 1 < verts_.size(); ++i) {
            long len = verts_[i + 1].first - verts_[i].first;
            GroupValue lam = (verts_[i].second - verts_[i + 1].second) / len;
            if (!(lam > cutoff)) break;
            stop = verts_[i + 1].first;
        }
        std::vector<Point> pts;
        for (const auto& p : cloud_)
            if (p.first <= stop) pts.push_back(p);
        return from_cloud(std::move(pts));
    }

    PolygonComponent component(const GroupValue& lambda) const {
        require();
        GroupValue best = GroupValue::infinity();
        for (const auto& [n, a] : cloud_) best = min(best, a + lambda * n);
        PolygonComponent c;
        bool first = true;
        for (const auto& [n, a] : cloud_) {
            if (a + lambda * n != best) continue;
            if (first) {
                c.n_lo = n;
                first = false;
            }
            c.n_hi = n;
        }
        c.segment = c.n_hi > c.n_lo;
        return c;
    }

    // Ordinate at which the support line of slope -lambda meets the vertical
    // axis: min over the cloud of alpha + n * lambda.
    GroupValue intercept(const GroupValue& lambda) const {
        require();
        GroupValue best = GroupValue::infinity();
        for (const auto& [n, a] : verts_) best = min(best, a + lambda * n);
        return best;
    }

    bool one_sided() const {
        if (empty() || verts_.size() != 2) return false;
        if (verts_.front().first != 0) return false;
        for (const auto& p : cloud_)
            if (p != verts_.front() && p != verts_.back() &&
                !on_segment(verts_.front(), verts_.back(), p))
                return false;
        return true;
    }

    friend NewtonPolygon add(const NewtonPolygon& a, const NewtonPolygon& b) {
        if (a.empty() || b.empty()) throw PrecondError("polygon addition with empty polygon");
        Point start{a.left().first + b.left().first, a.left().second + b.left().second};
        std::vector<PolygonSide> merged;
        auto sa = a.sides(), sb = b.sides();
        std::size_t i = 0, j = 0;
        auto push = [&](const PolygonSide& s) {
            if (!merged.empty() && merged.back().lambda == s.lambda)
                merged.back().length += s.length;
            else
                merged.push_back(s);
        };
        while (i < sa.size() || j < sb.size()) {
            if (j == sb.size() || (i < sa.size() && sa[i].lambda >= sb[j].lambda))
                push(sa[i++]);
            else
                push(sb[j++]);
        }
        std::vector<Point> pts{start};
        for (const auto& s : merged) {
            Point next{pts.back().first + s.length, pts.back().second - s.lambda * s.length};
            pts.push_back(std::move(next));
        }
        return from_cloud(std::move(pts));
    }

    bool operator==(const NewtonPolygon& o) const { return verts_ == o.verts_; }

private:
    void require() const {
        if (cloud_.empty()) throw Error("operation on empty polygon");
    }

    // strictly-below test for the hull sweep, cross-multiplied to stay exact
    static bool below(const Point& a, const Point& b, const Point& c) {
        GroupValue lhs = (b.second - a.second) * (c.first - a.first);
        GroupValue rhs = (c.second - a.second) * (b.first - a.first);
        return lhs < rhs;
    }

    static bool on_segment(const Point& a, const Point& b, const Point& p) {
        GroupValue lhs = (p.second - a.second) * (b.first - a.first);
        GroupValue rhs = (b.second - a.second) * (p.first - a.first);
        return lhs == rhs;
    }

    void build_hull() {
        verts_.clear();
        for (const auto& p : cloud_) {
            while (verts_.size() >= 2 && !below(verts_[verts_.size() - 2], verts_.back(), p))
                verts_.pop_back();
            verts_.push_back(p);
        }
        // drop collinear interior points
        std::vector<Point> clean;
        for (const auto& p : verts_) {
            while (clean.size() >= 2 && on_segment(clean[clean.size() - 2], p, clean.back()))
                clean.pop_back();
            clean.push_back(p);
        }
        verts_ = std::move(clean);
    }

    std::vector<Point> cloud_;
    std::vector<Point> verts_;
};

// Polygon of g with respect to (mu, phi) from the first ell+1 expansion
// coefficients; points with vanishing coefficient are omitted.
template <class F>
NewtonPolygon np_compute(const Valuation<F>& mu, const Poly<typename F::Elem>& phi, long ell,
                         const Poly<typename F::Elem>& g) {
    if (phi.degree() < 1 || !phi.is_monic())
        throw PrecondError("polygon needs a monic non-constant phi");
    if (g.zero()) return NewtonPolygon();
    auto coeffs = g.phi_expansion(phi, ell);
    std::vector<NewtonPolygon::Point> pts;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        if (coeffs[j].zero()) continue;
        pts.emplace_back(static_cast<long>(j), mu.value(coeffs[j]));
    }
    return NewtonPolygon::from_cloud(std::move(pts));
}

template <class F>
NewtonPolygon np_compute(const Valuation<F>& mu, const Poly<typename F::Elem>& phi,
                         const Poly<typename F::Elem>& g) {
    long ell = phi.degree() >= 1 && !g.zero() ? g.degree() / phi.degree() : 0;
    return np_compute(mu, phi, ell, g);
}

// Slopes -lambda_i and lengths of the polygon of g with respect to (v, x),
// reported with lambda ascending. The multiset {lambda_i with multiplicity
// len_i} is the multiset of root values of g away from zero roots.
template <class F>
std::vector<std::pair<GroupValue, long>> classical_dissection(const F& K,
                                                              const Poly<typename F::Elem>& g) {
    if (g.zero()) throw PrecondError("dissection of the zero polynomial");
    std::vector<NewtonPolygon::Point> pts;
    for (long j = 0; j <= g.degree(); ++j) {
        auto c = g.coeff(j);
        if (is_zero(c)) continue;
        pts.emplace_back(j, K.value(c));
    }
    auto np = NewtonPolygon::from_cloud(std::move(pts));
    std::vector<std::pair<GroupValue, long>> out;
    for (const auto& s : np.sides()) out.emplace_back(s.lambda, s.length);
    std::reverse(out.begin(), out.end());
    return out;
}

}  // namespace omf
