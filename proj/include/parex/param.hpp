#pragma once

#include "parex/lattice.hpp"
#include "parex/orbit.hpp"

namespace parex {

// Parametrised poset over the slice T_{/V}: a fibre poset per slice object and
// a restriction map per slice morphism, contravariantly. Fibres live on the
// heap so maps into them survive copies of this struct.
struct ParamPoset {
    const OrbitCat* T = nullptr;
    size_t over_obj = 0;                  // V, an object index of T
    std::shared_ptr<const CommaCat> base; // slice T_{/V}
    std::vector<std::shared_ptr<const FinPoset>> fibres;
    std::vector<std::shared_ptr<const FinLattice>> fibre_lattices; // null if not a lattice
    std::vector<MonotoneMap> restriction; // per slice morphism m: fibre(dst m) -> fibre(src m)
    bool pointed = false;                 // restrictions preserve bottom and top

    const FinPoset& fibre(size_t o) const { return *fibres[o]; }
    const FinLattice& lattice(size_t o) const {
        if (!fibre_lattices[o]) throw InputError("fibre is not a lattice");
        return *fibre_lattices[o];
    }
    size_t levels() const { return fibres.size(); }

    size_t restrict_elem(size_t mor, size_t x) const { return restriction[mor].map[x]; }

    void validate() const {
        const FinCat& c = base->cat;
        if (fibres.size() != c.objects() || restriction.size() != c.morphisms())
            throw InputError("parametrised poset tables have wrong size");
        for (size_t m = 0; m < c.morphisms(); m++) {
            const MonotoneMap& r = restriction[m];
            if (r.source != fibres[c.dst(m)].get() || r.target != fibres[c.src(m)].get())
                throw InputError("restriction endpoints disagree with the base");
            if (!r.is_monotone()) throw InputError("restriction not monotone");
        }
        for (size_t o = 0; o < c.objects(); o++) {
            const MonotoneMap& r = restriction[c.identity(o)];
            for (size_t x = 0; x < fibres[o]->size(); x++)
                if (r.map[x] != x) throw InputError("identity restriction is not identity");
        }
        for (size_t m = 0; m < c.morphisms(); m++)
            for (size_t m2 = 0; m2 < c.morphisms(); m2++) {
                if (c.dst(m) != c.src(m2)) continue;
                size_t mc = c.compose(m2, m);
                for (size_t x = 0; x < fibres[c.dst(m2)]->size(); x++)
                    if (restriction[mc].map[x] != restriction[m].map[restriction[m2].map[x]])
                        throw InputError("restrictions not functorial");
            }
        if (pointed)
            for (size_t m = 0; m < c.morphisms(); m++) {
                const FinPoset& src = *fibres[c.dst(m)];
                const FinPoset& dst = *fibres[c.src(m)];
                if (src.bottom() < 0 || src.top() < 0 || dst.bottom() < 0 || dst.top() < 0)
                    throw InputError("pointed fibre lacks bottom or top");
                if (restriction[m].map[static_cast<size_t>(src.bottom())] !=
                        static_cast<size_t>(dst.bottom()) ||
                    restriction[m].map[static_cast<size_t>(src.top())] !=
                        static_cast<size_t>(dst.top()))
                    throw InputError("restriction moves bottom or top");
            }
    }
};

// One element of one fibre.
struct ParamPoint {
    size_t level; // slice object
    size_t value; // fibre element index
};

// Levelwise monotone map between parametrised posets over the same base,
// commuting with restrictions.
struct ParamMonotoneMap {
    const ParamPoset* source = nullptr;
    const ParamPoset* target = nullptr;
    std::vector<MonotoneMap> level; // per slice object

    void validate() const {
        if (source->base != target->base) throw InputError("parametrised map across bases");
        const FinCat& c = source->base->cat;
        if (level.size() != c.objects()) throw InputError("parametrised map has wrong arity");
        for (size_t o = 0; o < c.objects(); o++) {
            if (level[o].source != source->fibres[o].get() ||
                level[o].target != target->fibres[o].get())
                throw InputError("level map endpoints disagree");
            if (!level[o].is_monotone()) throw InputError("level map not monotone");
        }
        for (size_t m = 0; m < c.morphisms(); m++) {
            size_t o = c.src(m), o2 = c.dst(m);
            for (size_t x = 0; x < source->fibres[o2]->size(); x++)
                if (target->restriction[m].map[level[o2].map[x]] !=
                    level[o].map[source->restriction[m].map[x]])
                    throw InputError("parametrised map not natural");
        }
    }
};

inline std::shared_ptr<const CommaCat> build_slice(const OrbitCat& t, size_t v) {
    return std::make_shared<const CommaCat>(slice_over(t.cat(), v));
}

// Slice object (V, id), the terminal object of T_{/V}.
inline size_t terminal_level(const CommaCat& slice, const FinCat& base_cat, size_t v) {
    for (size_t o = 0; o < slice.objects.size(); o++)
        if (slice.objects[o].first == v && slice.objects[o].second == base_cat.identity(v))
            return o;
    throw std::logic_error("slice misses its terminal object");
}

// All sections s: B -> W over V, i.e. w ∘ s = b, for transitive B.
inline std::vector<std::vector<size_t>> sections_over(const GMap& b, const GMap& w) {
    const GSet& B = *b.source;
    const GSet& W = *w.source;
    std::vector<std::vector<size_t>> out;
    if (B.size() == 0) {
        out.push_back({});
        return out;
    }
    const FiniteGroup* g = B.group();
    auto stab = B.stabilizer(0);
    std::vector<int> rep(B.size(), -1);
    for (size_t gg = 0; gg < g->order(); gg++)
        if (rep[B.act(gg, 0)] < 0) rep[B.act(gg, 0)] = static_cast<int>(gg);
    for (size_t p = 0; p < B.size(); p++)
        if (rep[p] < 0) throw InputError("sections need a transitive source");
    for (size_t t = 0; t < W.size(); t++) {
        if (w.map[t] != b.map[0]) continue;
        bool fixed = true;
        for (size_t h : stab)
            if (W.act(h, t) != t) { fixed = false; break; }
        if (!fixed) continue;
        std::vector<size_t> s(B.size());
        for (size_t p = 0; p < B.size(); p++) s[p] = W.act(static_cast<size_t>(rep[p]), t);
        out.push_back(std::move(s));
    }
    return out;
}

// Per-level pullback data of a cube.
struct CubeLevel {
    std::shared_ptr<const GSet> total;     // b^*W
    std::vector<std::vector<size_t>> orbits;
    std::vector<size_t> orbit_of;          // point -> orbit index
    std::vector<size_t> to_b, to_w;        // projections to B and W points
    std::vector<int> point_index;          // (b_pt * |W| + w_pt) -> point, -1 if absent

    size_t find_point(size_t bp, size_t wp, size_t w_size) const {
        int p = point_index[bp * w_size + wp];
        if (p < 0) throw std::logic_error("missing pullback point");
        return static_cast<size_t>(p);
    }
};

// Parametrised cube w_*Δ¹: fibre at (B, b) is the powerset of the orbits of
// b^*W (element index = orbit bitmask), restriction along a slice morphism is
// orbit preimage.
struct ParamCube {
    std::shared_ptr<const GSet> W;
    std::vector<size_t> w_map; // W -> V point map
    ParamPoset poset;
    std::vector<CubeLevel> levels;
    std::vector<std::vector<size_t>> orbit_image; // per slice morphism: covariant orbit map

    GMap w_gmap() const {
        return GMap{W.get(), &poset.T->object(poset.over_obj), w_map};
    }
};

inline ParamCube build_cube(const OrbitCat& t, size_t v, std::shared_ptr<const GSet> w_source,
                            std::vector<size_t> w_map,
                            std::shared_ptr<const CommaCat> slice = nullptr) {
    ParamCube cube;
    cube.W = std::move(w_source);
    cube.w_map = std::move(w_map);
    GMap w{cube.W.get(), &t.object(v), cube.w_map};
    w.validate();

    ParamPoset& p = cube.poset;
    p.T = &t;
    p.over_obj = v;
    p.base = slice ? std::move(slice) : build_slice(t, v);
    p.pointed = true;
    const FinCat& c = p.base->cat;

    for (size_t o = 0; o < c.objects(); o++) {
        auto [a, beta] = p.base->objects[o];
        GMap b = t.gmap(beta);
        auto pb = pullback(b, w);
        CubeLevel lvl;
        lvl.total = std::make_shared<const GSet>(std::move(pb.total));
        lvl.to_b = std::move(pb.left);
        lvl.to_w = std::move(pb.right);
        lvl.orbits = lvl.total->orbits();
        if (lvl.orbits.size() > 8) throw InputError("cube fibre exceeds the lattice size cap");
        lvl.orbit_of.assign(lvl.total->size(), 0);
        for (size_t i = 0; i < lvl.orbits.size(); i++)
            for (size_t pt : lvl.orbits[i]) lvl.orbit_of[pt] = i;
        lvl.point_index.assign(b.source->size() * std::max<size_t>(cube.W->size(), 1), -1);
        for (size_t pt = 0; pt < lvl.total->size(); pt++)
            lvl.point_index[lvl.to_b[pt] * cube.W->size() + lvl.to_w[pt]] = static_cast<int>(pt);
        auto lat = std::make_shared<const FinLattice>(
            powerset_lattice(static_cast<unsigned>(lvl.orbits.size())));
        p.fibre_lattices.push_back(lat);
        p.fibres.push_back(lat);
        cube.levels.push_back(std::move(lvl));
    }

    for (size_t m = 0; m < c.morphisms(); m++) {
        size_t o = c.src(m), o2 = c.dst(m);
        size_t h = p.base->mor_h[m]; // B -> B' in T
        const auto& hm = t.point_map(h);
        const CubeLevel& src = cube.levels[o];
        const CubeLevel& dst = cube.levels[o2];
        std::vector<size_t> img(src.orbits.size());
        for (size_t i = 0; i < src.orbits.size(); i++) {
            size_t pt = src.orbits[i][0];
            img[i] = dst.orbit_of[dst.find_point(hm[src.to_b[pt]], src.to_w[pt], cube.W->size())];
        }
        cube.orbit_image.push_back(img);
        MonotoneMap r{p.fibres[o2].get(), p.fibres[o].get(), {}};
        r.map.resize(p.fibres[o2]->size());
        for (size_t mask = 0; mask < r.map.size(); mask++) {
            size_t pre = 0;
            for (size_t i = 0; i < img.size(); i++)
                if (mask & (size_t{1} << img[i])) pre |= size_t{1} << i;
            r.map[mask] = pre;
        }
        p.restriction.push_back(std::move(r));
    }
    p.validate();
    return cube;
}

inline ParamCube build_cube(const OrbitCat& t, size_t v, const GMap& w,
                            std::shared_ptr<const CommaCat> slice = nullptr) {
    return build_cube(t, v, std::make_shared<const GSet>(*w.source), w.map, std::move(slice));
}

// Remove the global top (or bottom) from every fibre.
enum class Puncture { top, bottom };

inline ParamPoset puncture(const ParamPoset& p, Puncture which) {
    ParamPoset out;
    out.T = p.T;
    out.over_obj = p.over_obj;
    out.base = p.base;
    out.pointed = false;
    const FinCat& c = p.base->cat;
    std::vector<std::vector<int>> reindex(c.objects());
    for (size_t o = 0; o < c.objects(); o++) {
        const FinPoset& f = p.fibre(o);
        int drop = which == Puncture::top ? f.top() : f.bottom();
        if (drop < 0) throw InputError("puncture needs a global bound");
        std::vector<size_t> keep;
        reindex[o].assign(f.size(), -1);
        for (size_t x = 0; x < f.size(); x++)
            if (static_cast<int>(x) != drop) {
                reindex[o][x] = static_cast<int>(keep.size());
                keep.push_back(x);
            }
        out.fibres.push_back(std::make_shared<const FinPoset>(f.induced(keep)));
        out.fibre_lattices.push_back(nullptr);
    }
    for (size_t m = 0; m < c.morphisms(); m++) {
        size_t o = c.src(m), o2 = c.dst(m);
        MonotoneMap r{out.fibres[o2].get(), out.fibres[o].get(), {}};
        const FinPoset& f2 = p.fibre(o2);
        for (size_t x = 0; x < f2.size(); x++) {
            if (reindex[o2][x] < 0) continue;
            int y = reindex[o][p.restriction[m].map[x]];
            if (y < 0) throw InputError("puncture is not restriction-stable");
            r.map.push_back(static_cast<size_t>(y));
        }
        out.restriction.push_back(std::move(r));
    }
    out.validate();
    return out;
}

// Global points: families compatible with every restriction. Computed by
// honest enumeration from the terminal level, then verified on all squares.
inline std::vector<std::vector<size_t>> global_points(const ParamPoset& p) {
    const FinCat& c = p.base->cat;
    size_t term = terminal_level(*p.base, p.T->cat(), p.over_obj);
    std::vector<std::vector<size_t>> out;
    for (size_t x = 0; x < p.fibre(term).size(); x++) {
        std::vector<size_t> family(c.objects());
        std::vector<bool> set(c.objects(), false);
        family[term] = x;
        set[term] = true;
        for (size_t o = 0; o < c.objects(); o++) {
            if (set[o]) continue;
            auto homs = c.hom(o, term);
            if (homs.empty()) throw std::logic_error("level misses the terminal object");
            family[o] = p.restriction[homs[0]].map[x];
            set[o] = true;
        }
        bool ok = true;
        for (size_t m = 0; m < c.morphisms() && ok; m++)
            if (p.restriction[m].map[family[c.dst(m)]] != family[c.src(m)]) ok = false;
        if (ok) out.push_back(std::move(family));
    }
    return out;
}

inline std::vector<ParamPoint> enumerate_points(const ParamPoset& p) {
    std::vector<ParamPoint> out;
    for (size_t o = 0; o < p.levels(); o++)
        for (size_t x = 0; x < p.fibre(o).size(); x++) out.push_back({o, x});
    return out;
}

} // namespace parex
