#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "parex/poset.hpp" // InputError

namespace parex {

inline constexpr size_t kMaxGroupOrder = 24;

// Finite group as a multiplication table; element 0..n-1, identity found by
// scan. All laws checked at construction.
class FiniteGroup {
public:
    static FiniteGroup from_table(std::vector<std::vector<size_t>> mult) {
        FiniteGroup g;
        g.mult_ = std::move(mult);
        g.validate();
        return g;
    }

    static FiniteGroup trivial() { return from_table({{0}}); }

    static FiniteGroup cyclic(size_t n) {
        std::vector<std::vector<size_t>> m(n, std::vector<size_t>(n));
        for (size_t a = 0; a < n; a++)
            for (size_t b = 0; b < n; b++) m[a][b] = (a + b) % n;
        return from_table(std::move(m));
    }

    // Symmetric group on k letters, elements = permutations in lex order.
    static FiniteGroup symmetric(size_t k) {
        std::vector<std::vector<size_t>> perms;
        std::vector<size_t> p(k);
        std::iota(p.begin(), p.end(), 0);
        do {
            perms.push_back(p);
        } while (std::next_permutation(p.begin(), p.end()));
        size_t n = perms.size();
        std::map<std::vector<size_t>, size_t> idx;
        for (size_t i = 0; i < n; i++) idx[perms[i]] = i;
        std::vector<std::vector<size_t>> m(n, std::vector<size_t>(n));
        for (size_t a = 0; a < n; a++)
            for (size_t b = 0; b < n; b++) {
                std::vector<size_t> c(k);
                for (size_t i = 0; i < k; i++) c[i] = perms[a][perms[b][i]];
                m[a][b] = idx[c];
            }
        return from_table(std::move(m));
    }

    static FiniteGroup named(const std::string& name) {
        if (name == "trivial" || name == "C1") return trivial();
        if (name == "C2") return cyclic(2);
        if (name == "C3") return cyclic(3);
        if (name == "C4") return cyclic(4);
        if (name == "C6") return cyclic(6);
        if (name == "S3") return symmetric(3);
        if (name == "S4") return symmetric(4);
        throw InputError("unknown group name: " + name);
    }

    size_t order() const { return mult_.size(); }
    size_t mult(size_t a, size_t b) const { return mult_[a][b]; }
    size_t identity() const { return e_; }
    size_t inverse(size_t a) const { return inv_[a]; }
    const std::vector<std::vector<size_t>>& table() const { return mult_; }

    // All subgroups, each as a sorted element list, deterministic order.
    std::vector<std::vector<size_t>> subgroups() const {
        std::set<std::vector<size_t>> found;
        found.insert({e_});
        bool grew = true;
        while (grew) {
            grew = false;
            std::vector<std::vector<size_t>> snapshot(found.begin(), found.end());
            for (const auto& h : snapshot)
                for (size_t g = 0; g < order(); g++) {
                    if (std::binary_search(h.begin(), h.end(), g)) continue;
                    auto ext = closure(h, g);
                    if (found.insert(ext).second) grew = true;
                }
        }
        return {found.begin(), found.end()};
    }

    std::vector<size_t> conjugate_subgroup(const std::vector<size_t>& h, size_t g) const {
        std::vector<size_t> out;
        for (size_t x : h) out.push_back(mult_[mult_[g][x]][inv_[g]]);
        std::sort(out.begin(), out.end());
        return out;
    }

    // Conjugacy classes of subgroups; each class is represented by its
    // lexicographically smallest member and sorted by (order, representative).
    std::vector<std::vector<size_t>> subgroup_class_reps() const {
        auto subs = subgroups();
        std::set<std::vector<size_t>> seen;
        std::vector<std::vector<size_t>> reps;
        for (const auto& h : subs) {
            if (seen.count(h)) continue;
            std::vector<size_t> rep = h;
            for (size_t g = 0; g < order(); g++) {
                auto c = conjugate_subgroup(h, g);
                seen.insert(c);
                if (c < rep) rep = c;
            }
            reps.push_back(rep);
        }
        std::sort(reps.begin(), reps.end(), [](const auto& a, const auto& b) {
            if (a.size() != b.size()) return a.size() < b.size();
            return a < b;
        });
        return reps;
    }

    bool same_table(const FiniteGroup& o) const { return mult_ == o.mult_; }

private:
    std::vector<size_t> closure(std::vector<size_t> h, size_t g) const {
        std::set<size_t> s(h.begin(), h.end());
        s.insert(g);
        bool grew = true;
        while (grew) {
            grew = false;
            std::vector<size_t> cur(s.begin(), s.end());
            for (size_t a : cur)
                for (size_t b : cur)
                    if (s.insert(mult_[a][b]).second) grew = true;
        }
        return {s.begin(), s.end()};
    }

    void validate() {
        size_t n = mult_.size();
        if (n == 0 || n > kMaxGroupOrder) throw InputError("group order out of range");
        for (auto& row : mult_) {
            if (row.size() != n) throw InputError("multiplication table not square");
            for (size_t v : row)
                if (v >= n) throw InputError("multiplication table entry out of range");
        }
        int e = -1;
        for (size_t c = 0; c < n; c++) {
            bool ok = true;
            for (size_t g = 0; g < n; g++)
                if (mult_[c][g] != g || mult_[g][c] != g) { ok = false; break; }
            if (ok) { e = static_cast<int>(c); break; }
        }
        if (e < 0) throw InputError("no identity element");
        e_ = static_cast<size_t>(e);
        inv_.assign(n, n);
        for (size_t a = 0; a < n; a++) {
            for (size_t b = 0; b < n; b++)
                if (mult_[a][b] == e_ && mult_[b][a] == e_) { inv_[a] = b; break; }
            if (inv_[a] == n) throw InputError("element without inverse");
        }
        for (size_t a = 0; a < n; a++)
            for (size_t b = 0; b < n; b++)
                for (size_t c = 0; c < n; c++)
                    if (mult_[mult_[a][b]][c] != mult_[a][mult_[b][c]])
                        throw InputError("multiplication not associative");
    }

    std::vector<std::vector<size_t>> mult_;
    std::vector<size_t> inv_;
    size_t e_ = 0;
};

// Finite G-set: points with an action table act[g][p]. Empty G-sets are valid.
class GSet {
public:
    static GSet from_action(const FiniteGroup* g, std::vector<int64_t> point_ids,
                            std::vector<std::vector<size_t>> act) {
        GSet x;
        x.group_ = g;
        x.point_ids_ = std::move(point_ids);
        x.act_ = std::move(act);
        x.validate();
        return x;
    }

    static GSet empty(const FiniteGroup* g) {
        return from_action(g, {}, std::vector<std::vector<size_t>>(g->order()));
    }

    // k points with trivial action
    static GSet trivial_points(const FiniteGroup* g, size_t k) {
        std::vector<int64_t> ids(k);
        std::iota(ids.begin(), ids.end(), 0);
        std::vector<std::vector<size_t>> act(g->order(), std::vector<size_t>(k));
        for (auto& row : act) std::iota(row.begin(), row.end(), 0);
        return from_action(g, std::move(ids), std::move(act));
    }

    static GSet point(const FiniteGroup* g) { return trivial_points(g, 1); }

    // Left cosets of H (sorted element list); coset of the identity is point 0,
    // further cosets numbered by their smallest group element.
    static GSet cosets(const FiniteGroup* g, const std::vector<size_t>& h) {
        size_t n = g->order();
        std::vector<int> coset_of(n, -1);
        std::vector<std::vector<size_t>> members;
        for (size_t a = 0; a < n; a++) {
            if (coset_of[a] >= 0) continue;
            std::vector<size_t> c;
            for (size_t x : h) c.push_back(g->mult(a, x));
            std::sort(c.begin(), c.end());
            for (size_t m : c) coset_of[m] = static_cast<int>(members.size());
            members.push_back(c);
        }
        size_t k = members.size();
        std::vector<int64_t> ids(k);
        std::iota(ids.begin(), ids.end(), 0);
        std::vector<std::vector<size_t>> act(n, std::vector<size_t>(k));
        for (size_t gg = 0; gg < n; gg++)
            for (size_t c = 0; c < k; c++) act[gg][c] = coset_of[g->mult(gg, members[c][0])];
        return from_action(g, std::move(ids), std::move(act));
    }

    const FiniteGroup* group() const { return group_; }
    size_t size() const { return point_ids_.size(); }
    int64_t point_id(size_t p) const { return point_ids_[p]; }
    size_t act(size_t g, size_t p) const { return act_[g][p]; }

    size_t index_of_id(int64_t id) const {
        for (size_t p = 0; p < size(); p++)
            if (point_ids_[p] == id) return p;
        throw InputError("unknown point id");
    }

    // Orbit partition, ordered by smallest point index; each orbit sorted.
    std::vector<std::vector<size_t>> orbits() const {
        std::vector<std::vector<size_t>> out;
        std::vector<bool> seen(size(), false);
        for (size_t p = 0; p < size(); p++) {
            if (seen[p]) continue;
            std::set<size_t> orb;
            for (size_t g = 0; g < group_->order(); g++) orb.insert(act_[g][p]);
            for (size_t q : orb) seen[q] = true;
            out.emplace_back(orb.begin(), orb.end());
        }
        return out;
    }

    std::vector<size_t> stabilizer(size_t p) const {
        std::vector<size_t> out;
        for (size_t g = 0; g < group_->order(); g++)
            if (act_[g][p] == p) out.push_back(g);
        return out;
    }

    bool transitive() const { return orbits().size() == 1; }

    GSet restrict_points(const std::vector<size_t>& keep) const {
        std::vector<int> newpos(size(), -1);
        for (size_t i = 0; i < keep.size(); i++) newpos[keep[i]] = static_cast<int>(i);
        std::vector<int64_t> ids;
        for (size_t p : keep) ids.push_back(point_ids_[p]);
        std::vector<std::vector<size_t>> act(group_->order(), std::vector<size_t>(keep.size()));
        for (size_t g = 0; g < group_->order(); g++)
            for (size_t i = 0; i < keep.size(); i++) {
                int np = newpos[act_[g][keep[i]]];
                if (np < 0) throw InputError("point subset not action-closed");
                act[g][i] = static_cast<size_t>(np);
            }
        return from_action(group_, std::move(ids), std::move(act));
    }

    // Multiset of stabilizer-subgroup conjugacy classes, one entry per orbit;
    // equal iso-invariants mean isomorphic G-sets.
    std::vector<std::vector<size_t>> iso_invariant() const {
        std::vector<std::vector<size_t>> inv;
        for (auto& orb : orbits()) {
            auto st = stabilizer(orb[0]);
            std::vector<size_t> best = st;
            for (size_t g = 0; g < group_->order(); g++)
                best = std::min(best, group_->conjugate_subgroup(st, g));
            inv.push_back(best);
        }
        std::sort(inv.begin(), inv.end());
        return inv;
    }

private:
    void validate() const {
        size_t n = group_->order(), k = size();
        if (act_.size() != n) throw InputError("action table has wrong group dimension");
        for (auto& row : act_) {
            if (row.size() != k) throw InputError("action table has wrong point dimension");
            for (size_t v : row)
                if (v >= k) throw InputError("action table entry out of range");
        }
        std::set<int64_t> uniq(point_ids_.begin(), point_ids_.end());
        if (uniq.size() != k) throw InputError("duplicate point id");
        for (size_t p = 0; p < k; p++)
            if (act_[group_->identity()][p] != p) throw InputError("identity does not act trivially");
        for (size_t g = 0; g < n; g++)
            for (size_t h = 0; h < n; h++)
                for (size_t p = 0; p < k; p++)
                    if (act_[g][act_[h][p]] != act_[group_->mult(g, h)][p])
                        throw InputError("action not associative");
    }

    const FiniteGroup* group_ = nullptr;
    std::vector<int64_t> point_ids_;
    std::vector<std::vector<size_t>> act_;
};

// Equivariant map of G-sets.
struct GMap {
    const GSet* source = nullptr;
    const GSet* target = nullptr;
    std::vector<size_t> map;

    size_t operator()(size_t p) const { return map[p]; }

    void validate() const {
        if (source->group() != target->group() &&
            !source->group()->same_table(*target->group()))
            throw InputError("equivariant map across different groups");
        if (map.size() != source->size()) throw InputError("map has wrong arity");
        for (size_t v : map)
            if (v >= target->size()) throw InputError("map value out of range");
        for (size_t g = 0; g < source->group()->order(); g++)
            for (size_t p = 0; p < source->size(); p++)
                if (map[source->act(g, p)] != target->act(g, map[p]))
                    throw InputError("map not equivariant");
    }

    bool is_bijective() const {
        if (source->size() != target->size()) return false;
        std::vector<bool> hit(target->size(), false);
        for (size_t v : map) {
            if (hit[v]) return false;
            hit[v] = true;
        }
        return true;
    }

    static GMap identity(const GSet& x) {
        GMap f{&x, &x, std::vector<size_t>(x.size())};
        std::iota(f.map.begin(), f.map.end(), 0);
        return f;
    }

    static GMap compose(const GMap& g, const GMap& f) { // g ∘ f
        if (f.target != g.source) throw InputError("maps not composable");
        GMap out{f.source, g.target, std::vector<size_t>(f.map.size())};
        for (size_t p = 0; p < f.map.size(); p++) out.map[p] = g.map[f.map[p]];
        return out;
    }
};

// Disjoint union with point ids renumbered 0..; returns the two injections.
struct DisjointUnion {
    GSet total;
    std::vector<size_t> from_left, from_right;
};

inline DisjointUnion disjoint_union(const GSet& a, const GSet& b) {
    size_t n = a.group()->order();
    std::vector<int64_t> ids;
    for (size_t p = 0; p < a.size() + b.size(); p++) ids.push_back(static_cast<int64_t>(p));
    std::vector<std::vector<size_t>> act(n, std::vector<size_t>(a.size() + b.size()));
    for (size_t g = 0; g < n; g++) {
        for (size_t p = 0; p < a.size(); p++) act[g][p] = a.act(g, p);
        for (size_t p = 0; p < b.size(); p++) act[g][a.size() + p] = a.size() + b.act(g, p);
    }
    DisjointUnion out;
    out.total = GSet::from_action(a.group(), std::move(ids), std::move(act));
    for (size_t p = 0; p < a.size(); p++) out.from_left.push_back(p);
    for (size_t p = 0; p < b.size(); p++) out.from_right.push_back(a.size() + p);
    return out;
}

// Fibre product of f and g over their common target, with the diagonal action;
// point (x,y) gets id x * |Y| + y. Projections are plain index vectors so the
// struct stays freely movable; callers wrap them in GMaps bound to their own
// storage.
struct Pullback {
    GSet total;
    std::vector<size_t> left, right;

    GMap proj_left(const GSet& x) const { return GMap{&total, &x, left}; }
    GMap proj_right(const GSet& y) const { return GMap{&total, &y, right}; }
};

inline Pullback pullback(const GMap& f, const GMap& g) {
    if (f.target != g.target) throw InputError("pullback legs have different targets");
    const GSet& X = *f.source;
    const GSet& Y = *g.source;
    size_t n = X.group()->order();
    std::vector<std::pair<size_t, size_t>> pts;
    std::map<std::pair<size_t, size_t>, size_t> idx;
    for (size_t x = 0; x < X.size(); x++)
        for (size_t y = 0; y < Y.size(); y++)
            if (f.map[x] == g.map[y]) {
                idx[{x, y}] = pts.size();
                pts.push_back({x, y});
            }
    std::vector<int64_t> ids;
    for (auto& [x, y] : pts) ids.push_back(static_cast<int64_t>(x * std::max<size_t>(Y.size(), 1) + y));
    std::vector<std::vector<size_t>> act(n, std::vector<size_t>(pts.size()));
    for (size_t gg = 0; gg < n; gg++)
        for (size_t p = 0; p < pts.size(); p++)
            act[gg][p] = idx.at({X.act(gg, pts[p].first), Y.act(gg, pts[p].second)});
    Pullback out;
    out.total = GSet::from_action(X.group(), std::move(ids), std::move(act));
    for (auto& [x, y] : pts) {
        out.left.push_back(x);
        out.right.push_back(y);
    }
    out.proj_left(X).validate();
    out.proj_right(Y).validate();
    return out;
}

} // namespace parex
