#pragma once

#include <functional>
#include <memory>
#include <numeric>

#include "parex/fincat.hpp"
#include "parex/group.hpp"

namespace parex {

// Orbit category of a finite group: one coset G-set per subgroup conjugacy
// class (lexicographically smallest representative), hom-sets enumerated via
// basepoint images. An equivariant map out of a transitive G-set is pinned by
// the image of the basepoint, which must be fixed by the basepoint stabilizer.
class OrbitCat {
public:
    static OrbitCat build(const FiniteGroup* g) {
        OrbitCat o;
        o.group_ = g;
        o.class_reps_ = g->subgroup_class_reps();
        for (const auto& h : o.class_reps_)
            o.objects_.push_back(std::make_shared<const GSet>(GSet::cosets(g, h)));

        FinCatBuilder<std::tuple<size_t, size_t, std::vector<size_t>>> bld(o.objects_.size());
        for (size_t i = 0; i < o.objects_.size(); i++)
            for (size_t j = 0; j < o.objects_.size(); j++)
                for (auto& m : enumerate_maps(*o.objects_[i], *o.objects_[j]))
                    bld.add(i, j, {i, j, m});
        std::vector<size_t> ids(o.objects_.size());
        for (size_t i = 0; i < o.objects_.size(); i++) {
            std::vector<size_t> idm(o.objects_[i]->size());
            std::iota(idm.begin(), idm.end(), 0);
            int m = bld.find({i, i, idm});
            if (m < 0) throw std::logic_error("orbit category misses an identity");
            ids[i] = static_cast<size_t>(m);
        }
        o.maps_.resize(bld.count());
        for (size_t m = 0; m < bld.count(); m++) o.maps_[m] = std::get<2>(bld.key_of(m));
        o.cat_ = bld.finish(std::move(ids), [&](size_t g2, size_t f) {
            const auto& fm = std::get<2>(bld.key_of(f));
            const auto& gm = std::get<2>(bld.key_of(g2));
            std::vector<size_t> comp(fm.size());
            for (size_t p = 0; p < fm.size(); p++) comp[p] = gm[fm[p]];
            return std::tuple<size_t, size_t, std::vector<size_t>>{bld.src(f), bld.dst(g2), comp};
        });
        return o;
    }

    const FiniteGroup* group() const { return group_; }
    const FinCat& cat() const { return cat_; }
    size_t n_objects() const { return objects_.size(); }
    const GSet& object(size_t i) const { return *objects_[i]; }
    const std::vector<size_t>& class_rep(size_t i) const { return class_reps_[i]; }
    const std::vector<size_t>& point_map(size_t mor) const { return maps_[mor]; }

    GMap gmap(size_t mor) const {
        GMap f{objects_[cat_.src(mor)].get(), objects_[cat_.dst(mor)].get(), maps_[mor]};
        return f;
    }

    // All equivariant maps between two transitive G-sets, ordered by basepoint
    // image. Equals brute-force function enumeration (cross-checked in tests).
    static std::vector<std::vector<size_t>> enumerate_maps(const GSet& a, const GSet& b) {
        std::vector<std::vector<size_t>> out;
        if (a.size() == 0) {
            out.push_back({});
            return out;
        }
        const FiniteGroup* g = a.group();
        auto stab = a.stabilizer(0);
        std::vector<int> rep(a.size(), -1); // group element sending basepoint to p
        for (size_t gg = 0; gg < g->order(); gg++)
            if (rep[a.act(gg, 0)] < 0) rep[a.act(gg, 0)] = static_cast<int>(gg);
        for (size_t p = 0; p < a.size(); p++)
            if (rep[p] < 0) throw InputError("hom enumeration needs a transitive source");
        for (size_t t = 0; t < b.size(); t++) {
            bool fixed = true;
            for (size_t h : stab)
                if (b.act(h, t) != t) { fixed = false; break; }
            if (!fixed) continue;
            std::vector<size_t> m(a.size());
            for (size_t p = 0; p < a.size(); p++) m[p] = b.act(static_cast<size_t>(rep[p]), t);
            out.push_back(std::move(m));
        }
        return out;
    }

private:
    const FiniteGroup* group_ = nullptr;
    std::vector<std::vector<size_t>> class_reps_;
    std::vector<std::shared_ptr<const GSet>> objects_;
    std::vector<std::vector<size_t>> maps_;
    FinCat cat_;
};

inline std::vector<GMap> hom_orbits(const OrbitCat& o, size_t i, size_t j) {
    std::vector<GMap> out;
    for (size_t m : o.cat().hom(i, j)) out.push_back(o.gmap(m));
    return out;
}

// Slice category over an object: objects are morphisms b: B → V, morphisms are
// commuting triangles. Exactly the comma construction along the identity.
inline CommaCat slice_over(const FinCat& c, size_t v) {
    auto idf = CatFunctor::identity(c);
    idf.validate();
    return comma_to(idf, v);
}

// Longest chain of non-invertible morphisms in the slice over v. The slice of
// an orbit category has no non-invertible cycles; a cycle is a hard error.
inline size_t slice_length(const OrbitCat& o, size_t v) {
    CommaCat slice = slice_over(o.cat(), v);
    const FinCat& s = slice.cat;
    size_t n = s.objects();
    std::vector<std::vector<bool>> step(n, std::vector<bool>(n, false));
    for (size_t m = 0; m < s.morphisms(); m++)
        if (!s.is_invertible(m)) step[s.src(m)][s.dst(m)] = true;
    std::vector<int> depth(n, -1);
    std::vector<int> state(n, 0);
    // longest path by DFS; cycles cannot occur in atomic orbital slices
    std::function<int(size_t)> longest = [&](size_t a) -> int {
        if (state[a] == 1) throw std::logic_error("non-invertible cycle in slice");
        if (state[a] == 2) return depth[a];
        state[a] = 1;
        int best = 0;
        for (size_t b = 0; b < n; b++)
            if (step[a][b]) best = std::max(best, 1 + longest(b));
        state[a] = 2;
        depth[a] = best;
        return best;
    };
    size_t out = 0;
    for (size_t a = 0; a < n; a++) out = std::max(out, static_cast<size_t>(longest(a)));
    return out;
}

// W ×_V W decomposed as the diagonal summand W plus its complement C with the
// two restricted projections. The diagonal failing to be orbit-closed would
// contradict atomicity of the base.
struct DiagonalNotSummand : std::logic_error {
    using std::logic_error::logic_error;
};

struct DiagonalComplement {
    GSet complement;
    std::vector<size_t> c, cbar;        // projections C → W
    std::vector<size_t> diagonal_points; // indices inside the full pullback

    GMap proj_c(const GSet& w) const { return GMap{&complement, &w, c}; }
    GMap proj_cbar(const GSet& w) const { return GMap{&complement, &w, cbar}; }
};

inline DiagonalComplement diagonal_complement(const GMap& w) {
    auto pb = pullback(w, w);
    std::vector<bool> is_diag(pb.total.size(), false);
    for (size_t p = 0; p < pb.total.size(); p++) is_diag[p] = pb.left[p] == pb.right[p];
    for (const auto& orb : pb.total.orbits()) {
        size_t cnt = 0;
        for (size_t p : orb) cnt += is_diag[p];
        if (cnt != 0 && cnt != orb.size())
            throw DiagonalNotSummand("diagonal is not a union of orbits");
    }
    DiagonalComplement out;
    std::vector<size_t> keep;
    for (size_t p = 0; p < pb.total.size(); p++) {
        if (is_diag[p]) out.diagonal_points.push_back(p);
        else keep.push_back(p);
    }
    out.complement = pb.total.restrict_points(keep);
    for (size_t p : keep) {
        out.c.push_back(pb.left[p]);
        out.cbar.push_back(pb.right[p]);
    }
    out.proj_c(*w.source).validate();
    out.proj_cbar(*w.source).validate();
    return out;
}

} // namespace parex
