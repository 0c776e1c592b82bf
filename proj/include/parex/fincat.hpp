#pragma once

#include <map>
#include <optional>
#include <tuple>

#include "parex/poset.hpp"

namespace parex {

// Small strict category. Objects are indices 0..n-1; morphisms are global ids
// carrying (src, dst); composition is a dense table with -1 marking
// non-composable pairs. All category laws are checked at construction.
class FinCat {
public:
    struct Mor {
        size_t src, dst;
    };

    static FinCat build(size_t n_obj, std::vector<Mor> mors, std::vector<size_t> identities,
                        std::vector<std::vector<int>> comp) {
        FinCat c;
        c.n_obj_ = n_obj;
        c.mors_ = std::move(mors);
        c.id_ = std::move(identities);
        c.comp_ = std::move(comp);
        c.validate();
        c.index_homs();
        c.compute_invertibles();
        return c;
    }

    size_t objects() const { return n_obj_; }
    size_t morphisms() const { return mors_.size(); }
    size_t src(size_t m) const { return mors_[m].src; }
    size_t dst(size_t m) const { return mors_[m].dst; }
    size_t identity(size_t obj) const { return id_[obj]; }

    // g ∘ f for f: x→y, g: y→z
    size_t compose(size_t g, size_t f) const {
        int r = comp_[g][f];
        if (r < 0) throw InputError("morphisms not composable");
        return static_cast<size_t>(r);
    }

    const std::vector<size_t>& hom(size_t a, size_t b) const { return hom_[a * n_obj_ + b]; }

    bool is_invertible(size_t m) const { return invertible_[m]; }

    bool is_thin() const {
        for (size_t a = 0; a < n_obj_; a++)
            for (size_t b = 0; b < n_obj_; b++)
                if (hom(a, b).size() > 1) return false;
        return true;
    }

    FinCat opposite() const {
        std::vector<Mor> mors;
        for (const auto& m : mors_) mors.push_back({m.dst, m.src});
        std::vector<std::vector<int>> comp(mors.size(), std::vector<int>(mors.size(), -1));
        for (size_t g = 0; g < mors.size(); g++)
            for (size_t f = 0; f < mors.size(); f++) comp[g][f] = comp_[f][g];
        return build(n_obj_, std::move(mors), id_, std::move(comp));
    }

private:
    void validate() const {
        if (id_.size() != n_obj_) throw InputError("identity list has wrong size");
        size_t nm = mors_.size();
        for (const auto& m : mors_)
            if (m.src >= n_obj_ || m.dst >= n_obj_) throw InputError("morphism endpoint out of range");
        for (size_t o = 0; o < n_obj_; o++) {
            size_t e = id_[o];
            if (e >= nm || mors_[e].src != o || mors_[e].dst != o)
                throw InputError("identity morphism has wrong endpoints");
        }
        if (comp_.size() != nm) throw InputError("composition table has wrong size");
        for (const auto& row : comp_)
            if (row.size() != nm) throw InputError("composition table has wrong size");
        for (size_t g = 0; g < nm; g++)
            for (size_t f = 0; f < nm; f++) {
                bool composable = mors_[f].dst == mors_[g].src;
                int r = comp_[g][f];
                if (!composable) {
                    if (r >= 0) throw InputError("composite defined for non-composable pair");
                    continue;
                }
                if (r < 0 || static_cast<size_t>(r) >= nm)
                    throw InputError("missing composite");
                if (mors_[r].src != mors_[f].src || mors_[r].dst != mors_[g].dst)
                    throw InputError("composite has wrong endpoints");
            }
        for (size_t f = 0; f < nm; f++) {
            if (comp_[id_[mors_[f].dst]][f] != static_cast<int>(f) ||
                comp_[f][id_[mors_[f].src]] != static_cast<int>(f))
                throw InputError("identity law fails");
        }
        for (size_t h = 0; h < nm; h++)
            for (size_t g = 0; g < nm; g++) {
                if (mors_[g].dst != mors_[h].src) continue;
                size_t hg = static_cast<size_t>(comp_[h][g]);
                for (size_t f = 0; f < nm; f++) {
                    if (mors_[f].dst != mors_[g].src) continue;
                    size_t gf = static_cast<size_t>(comp_[g][f]);
                    if (comp_[hg][f] != comp_[h][gf])
                        throw InputError("composition not associative");
                }
            }
    }

    void index_homs() {
        hom_.assign(n_obj_ * n_obj_, {});
        for (size_t m = 0; m < mors_.size(); m++)
            hom_[mors_[m].src * n_obj_ + mors_[m].dst].push_back(m);
    }

    void compute_invertibles() {
        invertible_.assign(mors_.size(), false);
        for (size_t m = 0; m < mors_.size(); m++) {
            for (size_t w : hom(mors_[m].dst, mors_[m].src)) {
                if (comp_[w][m] == static_cast<int>(id_[mors_[m].src]) &&
                    comp_[m][w] == static_cast<int>(id_[mors_[m].dst])) {
                    invertible_[m] = true;
                    break;
                }
            }
        }
    }

    size_t n_obj_ = 0;
    std::vector<Mor> mors_;
    std::vector<size_t> id_;
    std::vector<std::vector<int>> comp_;
    std::vector<std::vector<size_t>> hom_;
    std::vector<bool> invertible_;
};

// Helper for assembling a FinCat morphism-by-morphism, deduplicating by a
// caller-chosen key, then resolving composites by key lookup.
template <typename Key>
class FinCatBuilder {
public:
    explicit FinCatBuilder(size_t n_obj) : n_obj_(n_obj) {}

    size_t add(size_t src, size_t dst, const Key& key) {
        auto it = index_.find(key);
        if (it != index_.end()) return it->second;
        size_t id = mors_.size();
        mors_.push_back({src, dst});
        keys_.push_back(key);
        index_[key] = id;
        return id;
    }

    int find(const Key& key) const {
        auto it = index_.find(key);
        return it == index_.end() ? -1 : static_cast<int>(it->second);
    }

    const Key& key_of(size_t m) const { return keys_[m]; }
    size_t count() const { return mors_.size(); }
    size_t src(size_t m) const { return mors_[m].src; }
    size_t dst(size_t m) const { return mors_[m].dst; }

    // composite_key(g, f) must return the key of g∘f
    template <typename F>
    FinCat finish(std::vector<size_t> identities, F&& composite_key) const {
        std::vector<std::vector<int>> comp(mors_.size(), std::vector<int>(mors_.size(), -1));
        for (size_t g = 0; g < mors_.size(); g++)
            for (size_t f = 0; f < mors_.size(); f++) {
                if (mors_[f].dst != mors_[g].src) continue;
                comp[g][f] = find(composite_key(g, f));
                if (comp[g][f] < 0) throw InputError("composite escapes morphism set");
            }
        return FinCat::build(n_obj_, mors_, std::move(identities), std::move(comp));
    }

private:
    size_t n_obj_;
    std::vector<FinCat::Mor> mors_;
    std::vector<Key> keys_;
    std::map<Key, size_t> index_;
};

// Functor between finite categories: object and morphism assignments, laws
// checked at construction.
struct CatFunctor {
    const FinCat* source = nullptr;
    const FinCat* target = nullptr;
    std::vector<size_t> ob;
    std::vector<size_t> mor;

    void validate() const {
        if (ob.size() != source->objects() || mor.size() != source->morphisms())
            throw InputError("functor tables have wrong size");
        for (size_t m = 0; m < mor.size(); m++) {
            if (target->src(mor[m]) != ob[source->src(m)] ||
                target->dst(mor[m]) != ob[source->dst(m)])
                throw InputError("functor breaks endpoints");
        }
        for (size_t o = 0; o < ob.size(); o++)
            if (mor[source->identity(o)] != target->identity(ob[o]))
                throw InputError("functor breaks identities");
        for (size_t g = 0; g < mor.size(); g++)
            for (size_t f = 0; f < mor.size(); f++) {
                if (source->dst(f) != source->src(g)) continue;
                if (mor[source->compose(g, f)] != target->compose(mor[g], mor[f]))
                    throw InputError("functor breaks composition");
            }
    }

    static CatFunctor identity(const FinCat& c) {
        CatFunctor f{&c, &c, {}, {}};
        f.ob.resize(c.objects());
        f.mor.resize(c.morphisms());
        for (size_t o = 0; o < c.objects(); o++) f.ob[o] = o;
        for (size_t m = 0; m < c.morphisms(); m++) f.mor[m] = m;
        return f;
    }
};

// Comma category u/F for F: A -> B and u in B. Objects are pairs
// (a, κ: u → F(a)); a morphism (a,κ) → (a',κ') is h: a' → a in A with
// F(h)∘κ' = κ. This orientation makes the comma diagram of a contravariant
// functor on A covariant, which is what colimit-style Kan extensions consume.
struct CommaCat {
    FinCat cat;
    std::vector<std::pair<size_t, size_t>> objects; // (object of A, morphism of B)
    std::vector<size_t> mor_h;                      // morphism of A per comma morphism
};

inline CommaCat comma_from(const CatFunctor& F, size_t u) {
    const FinCat& A = *F.source;
    const FinCat& B = *F.target;
    CommaCat out;
    std::map<std::pair<size_t, size_t>, size_t> obj_index;
    for (size_t a = 0; a < A.objects(); a++)
        for (size_t k : B.hom(u, F.ob[a])) {
            obj_index[{a, k}] = out.objects.size();
            out.objects.push_back({a, k});
        }
    // key: (src comma object, dst comma object, h)
    FinCatBuilder<std::tuple<size_t, size_t, size_t>> bld(out.objects.size());
    for (size_t o = 0; o < out.objects.size(); o++)
        for (size_t o2 = 0; o2 < out.objects.size(); o2++) {
            auto [a, k] = out.objects[o];
            auto [a2, k2] = out.objects[o2];
            for (size_t h : A.hom(a2, a))
                if (B.compose(F.mor[h], k2) == k) bld.add(o, o2, {o, o2, h});
        }
    std::vector<size_t> ids(out.objects.size());
    for (size_t o = 0; o < out.objects.size(); o++) {
        int m = bld.find({o, o, A.identity(out.objects[o].first)});
        if (m < 0) throw std::logic_error("comma identity missing");
        ids[o] = static_cast<size_t>(m);
    }
    out.mor_h.resize(bld.count());
    for (size_t m = 0; m < bld.count(); m++) out.mor_h[m] = std::get<2>(bld.key_of(m));
    out.cat = bld.finish(std::move(ids), [&](size_t g, size_t f) {
        // f: o→o' via h1 ∈ A(a',a), g: o'→o'' via h2 ∈ A(a'',a'); composite via h1∘h2
        auto [fo, fo2, h1] = bld.key_of(f);
        auto [go, go2, h2] = bld.key_of(g);
        return std::tuple<size_t, size_t, size_t>{fo, go2, A.compose(h1, h2)};
    });
    return out;
}

// Comma category F/u: objects (a, β: F(a) → u); morphism (a,β) → (a',β') is
// h: a → a' in A with β'∘F(h) = β. The comma diagram of a contravariant
// functor on A is then contravariant, which limit-style Kan extensions consume.
inline CommaCat comma_to(const CatFunctor& F, size_t u) {
    const FinCat& A = *F.source;
    const FinCat& B = *F.target;
    CommaCat out;
    for (size_t a = 0; a < A.objects(); a++)
        for (size_t k : B.hom(F.ob[a], u)) out.objects.push_back({a, k});
    FinCatBuilder<std::tuple<size_t, size_t, size_t>> bld(out.objects.size());
    for (size_t o = 0; o < out.objects.size(); o++)
        for (size_t o2 = 0; o2 < out.objects.size(); o2++) {
            auto [a, k] = out.objects[o];
            auto [a2, k2] = out.objects[o2];
            for (size_t h : A.hom(a, a2))
                if (B.compose(k2, F.mor[h]) == k) bld.add(o, o2, {o, o2, h});
        }
    std::vector<size_t> ids(out.objects.size());
    for (size_t o = 0; o < out.objects.size(); o++) {
        int m = bld.find({o, o, A.identity(out.objects[o].first)});
        if (m < 0) throw std::logic_error("comma identity missing");
        ids[o] = static_cast<size_t>(m);
    }
    out.mor_h.resize(bld.count());
    for (size_t m = 0; m < bld.count(); m++) out.mor_h[m] = std::get<2>(bld.key_of(m));
    out.cat = bld.finish(std::move(ids), [&](size_t g, size_t f) {
        auto [fo, fo2, h1] = bld.key_of(f);
        auto [go, go2, h2] = bld.key_of(g);
        return std::tuple<size_t, size_t, size_t>{fo, go2, A.compose(h2, h1)};
    });
    return out;
}

// Skeleton of a thin category: one representative per isomorphism class, with
// the induced partial order and the unique transport morphisms to and from
// each representative.
struct ThinSkeleton {
    FinPoset poset;                // ids = representative object indices
    std::vector<size_t> rep_of;    // per object: its representative
    std::vector<size_t> rep_index; // per object: poset index of rep_of
    std::vector<size_t> to_rep;    // per object: morphism obj → rep
    std::vector<size_t> from_rep;  // per object: morphism rep → obj
};

inline ThinSkeleton skeletonize_thin(const FinCat& c) {
    if (!c.is_thin()) throw InputError("skeletonize requires a thin category");
    size_t n = c.objects();
    ThinSkeleton out;
    out.rep_of.assign(n, 0);
    out.to_rep.assign(n, 0);
    out.from_rep.assign(n, 0);
    std::vector<size_t> reps;
    std::vector<int> rep_idx(n, -1);
    for (size_t a = 0; a < n; a++) {
        size_t rep = a;
        for (size_t b = 0; b < a; b++)
            if (!c.hom(a, b).empty() && !c.hom(b, a).empty()) { rep = out.rep_of[b]; break; }
        out.rep_of[a] = rep;
        if (rep == a) {
            rep_idx[a] = static_cast<int>(reps.size());
            reps.push_back(a);
            out.to_rep[a] = c.identity(a);
            out.from_rep[a] = c.identity(a);
        } else {
            out.to_rep[a] = c.hom(a, rep)[0];
            out.from_rep[a] = c.hom(rep, a)[0];
        }
    }
    std::vector<int64_t> ids;
    for (size_t r : reps) ids.push_back(static_cast<int64_t>(r));
    std::vector<std::vector<bool>> leq(reps.size(), std::vector<bool>(reps.size(), false));
    for (size_t i = 0; i < reps.size(); i++)
        for (size_t j = 0; j < reps.size(); j++) leq[i][j] = !c.hom(reps[i], reps[j]).empty();
    out.poset = FinPoset::from_leq(std::move(ids), std::move(leq));
    out.rep_index.assign(n, 0);
    for (size_t a = 0; a < n; a++) out.rep_index[a] = static_cast<size_t>(rep_idx[out.rep_of[a]]);
    return out;
}

// Atomicity: a composable pair whose composite is invertible must consist of
// invertible morphisms. Returns a violating pair (f, g) with g∘f invertible,
// or nothing if the category is atomic.
struct AtomicityWitness {
    size_t f, g;
};

inline std::optional<AtomicityWitness> check_atomic(const FinCat& c) {
    for (size_t f = 0; f < c.morphisms(); f++)
        for (size_t g = 0; g < c.morphisms(); g++) {
            if (c.dst(f) != c.src(g)) continue;
            if (c.is_invertible(c.compose(g, f)) &&
                (!c.is_invertible(f) || !c.is_invertible(g)))
                return AtomicityWitness{f, g};
        }
    return std::nullopt;
}

} // namespace parex
