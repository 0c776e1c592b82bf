#pragma once

#include "parex/param.hpp"

namespace parex {

// Cone on k incomparable points: element 0 is the bottom, 1..k the points.
inline FinPoset make_cone_poset(size_t k) {
    std::vector<int64_t> ids;
    std::vector<std::pair<int64_t, int64_t>> covers;
    for (size_t i = 0; i <= k; i++) {
        ids.push_back(static_cast<int64_t>(i));
        if (i > 0) covers.push_back({0, static_cast<int64_t>(i)});
    }
    return FinPoset::from_covers(std::move(ids), covers);
}

// Singleton subposet (w_!∗)^◁ of a cube and its inclusion φ_w: fibre at
// (B, b) is the cone on the sections of w over b; a section maps to the
// singleton of its graph orbit, the cone point to ∅.
struct SingletonCone {
    std::shared_ptr<const ParamPoset> poset;
    std::vector<std::vector<std::vector<size_t>>> sections; // per level
    ParamMonotoneMap inclusion;                             // poset -> cube.poset
};

inline SingletonCone singleton_inclusion(const ParamCube& cube) {
    const ParamPoset& cp = cube.poset;
    const FinCat& c = cp.base->cat;
    GMap w = cube.w_gmap();

    auto sp = std::make_shared<ParamPoset>();
    sp->T = cp.T;
    sp->over_obj = cp.over_obj;
    sp->base = cp.base;
    sp->pointed = false;

    SingletonCone out;
    for (size_t o = 0; o < c.objects(); o++) {
        auto [a, beta] = cp.base->objects[o];
        GMap b = cp.T->gmap(beta);
        out.sections.push_back(sections_over(b, w));
        sp->fibres.push_back(
            std::make_shared<const FinPoset>(make_cone_poset(out.sections[o].size())));
        sp->fibre_lattices.push_back(nullptr);
    }
    for (size_t m = 0; m < c.morphisms(); m++) {
        size_t o = c.src(m), o2 = c.dst(m);
        const auto& hm = cp.T->point_map(cp.base->mor_h[m]);
        MonotoneMap r{sp->fibres[o2].get(), sp->fibres[o].get(), {}};
        r.map.push_back(0);
        for (const auto& s2 : out.sections[o2]) {
            std::vector<size_t> s(hm.size());
            for (size_t p = 0; p < hm.size(); p++) s[p] = s2[hm[p]];
            size_t j = 0;
            while (j < out.sections[o].size() && out.sections[o][j] != s) j++;
            if (j == out.sections[o].size())
                throw std::logic_error("restricted section missing from enumeration");
            r.map.push_back(j + 1);
        }
        sp->restriction.push_back(std::move(r));
    }
    sp->validate();
    out.poset = sp;

    out.inclusion.source = sp.get();
    out.inclusion.target = &cp;
    for (size_t o = 0; o < c.objects(); o++) {
        MonotoneMap f{sp->fibres[o].get(), cp.fibres[o].get(), {}};
        f.map.push_back(0);
        for (const auto& s : out.sections[o]) {
            size_t graph_orbit =
                cube.levels[o].orbit_of[cube.levels[o].find_point(0, s[0], cube.W->size())];
            f.map.push_back(size_t{1} << graph_orbit);
        }
        if (!f.is_monotone() || !f.is_injective() || !f.is_order_reflecting())
            throw std::logic_error("singleton inclusion is not a full embedding");
        out.inclusion.level.push_back(std::move(f));
    }
    out.inclusion.validate();
    return out;
}

// Precompose a parametrised poset over V with the slice functor of b: B -> V.
inline ParamPoset basechange(const ParamPoset& p, size_t b_obj, size_t b_mor,
                             std::shared_ptr<const CommaCat> new_slice = nullptr) {
    const FinCat& tc = p.T->cat();
    if (tc.src(b_mor) != b_obj || tc.dst(b_mor) != p.over_obj)
        throw InputError("basechange morphism has wrong endpoints");
    ParamPoset out;
    out.T = p.T;
    out.over_obj = b_obj;
    out.base = new_slice ? std::move(new_slice) : build_slice(*p.T, b_obj);
    out.pointed = p.pointed;

    std::map<std::pair<size_t, size_t>, size_t> old_obj;
    for (size_t o = 0; o < p.base->objects.size(); o++) old_obj[p.base->objects[o]] = o;
    std::vector<size_t> to_old(out.base->objects.size());
    for (size_t o = 0; o < out.base->objects.size(); o++) {
        auto [a, cmor] = out.base->objects[o];
        auto it = old_obj.find({a, tc.compose(b_mor, cmor)});
        if (it == old_obj.end()) throw std::logic_error("basechange misses a slice object");
        to_old[o] = it->second;
        out.fibres.push_back(p.fibres[it->second]);
        out.fibre_lattices.push_back(p.fibre_lattices[it->second]);
    }
    std::map<std::tuple<size_t, size_t, size_t>, size_t> old_mor;
    for (size_t m = 0; m < p.base->cat.morphisms(); m++)
        old_mor[{p.base->cat.src(m), p.base->cat.dst(m), p.base->mor_h[m]}] = m;
    for (size_t m = 0; m < out.base->cat.morphisms(); m++) {
        auto it = old_mor.find(
            {to_old[out.base->cat.src(m)], to_old[out.base->cat.dst(m)], out.base->mor_h[m]});
        if (it == old_mor.end()) throw std::logic_error("basechange misses a slice morphism");
        out.restriction.push_back(p.restriction[it->second]);
    }
    out.validate();
    return out;
}

// Basechange of a cube: rebuilt as the cube of the pulled-back map, compared
// levelwise with the precomposed original. The comparison includes the orbit
// bijections and singleton compatibility (b^*φ_w ≅ φ_w̄).
struct BasechangedCube {
    ParamCube cube;        // cube of the pulled-back map over slice(B)
    ParamPoset restricted; // original poset precomposed along the slice functor
    std::vector<std::vector<size_t>> orbit_bijection; // per level: cube orbit -> restricted orbit
};

inline BasechangedCube basechange_cube(const ParamCube& orig, size_t b_obj, size_t b_mor) {
    const OrbitCat& t = *orig.poset.T;
    GMap b = t.gmap(b_mor);
    GMap w = orig.w_gmap();
    auto pb = pullback(b, w);
    BasechangedCube out;
    out.cube = build_cube(t, b_obj, std::make_shared<const GSet>(pb.total), pb.left);
    out.restricted = basechange(orig.poset, b_obj, b_mor, out.cube.poset.base);

    std::map<std::pair<size_t, size_t>, size_t> old_obj;
    for (size_t o = 0; o < orig.poset.base->objects.size(); o++)
        old_obj[orig.poset.base->objects[o]] = o;
    const FinCat& nc = out.cube.poset.base->cat;
    for (size_t o = 0; o < nc.objects(); o++) {
        auto [a, cmor] = out.cube.poset.base->objects[o];
        size_t oo = old_obj.at({a, t.cat().compose(b_mor, cmor)});
        const CubeLevel& nl = out.cube.levels[o];
        const CubeLevel& ol = orig.levels[oo];
        std::vector<size_t> bij(nl.orbits.size());
        std::vector<bool> hit(ol.orbits.size(), false);
        if (nl.orbits.size() != ol.orbits.size())
            throw std::logic_error("basechanged cube has wrong fibre size");
        for (size_t j = 0; j < nl.orbits.size(); j++) {
            size_t q = nl.orbits[j][0];
            size_t pbpt = nl.to_w[q]; // point of B ×_V W
            bij[j] = ol.orbit_of[ol.find_point(nl.to_b[q], pb.right[pbpt], orig.W->size())];
            if (hit[bij[j]]) throw std::logic_error("orbit correspondence not injective");
            hit[bij[j]] = true;
        }
        out.orbit_bijection.push_back(std::move(bij));
    }
    // restrictions commute with the relabelling
    std::map<std::tuple<size_t, size_t, size_t>, size_t> old_mor;
    for (size_t m = 0; m < orig.poset.base->cat.morphisms(); m++)
        old_mor[{orig.poset.base->cat.src(m), orig.poset.base->cat.dst(m),
                 orig.poset.base->mor_h[m]}] = m;
    for (size_t m = 0; m < nc.morphisms(); m++) {
        size_t o = nc.src(m), o2 = nc.dst(m);
        auto [a, cmor] = out.cube.poset.base->objects[o];
        auto [a2, cmor2] = out.cube.poset.base->objects[o2];
        size_t oo = old_obj.at({a, t.cat().compose(b_mor, cmor)});
        size_t oo2 = old_obj.at({a2, t.cat().compose(b_mor, cmor2)});
        size_t om = old_mor.at({oo, oo2, out.cube.poset.base->mor_h[m]});
        for (size_t j = 0; j < out.cube.levels[o].orbits.size(); j++)
            if (out.orbit_bijection[o2][out.cube.orbit_image[m][j]] !=
                orig.orbit_image[om][out.orbit_bijection[o][j]])
                throw std::logic_error("basechange does not commute with restrictions");
    }
    // singleton compatibility: s̄(x) = (c(x), s(x)) matches sections of the
    // rebuilt cube bijectively, and graph orbits agree under the bijection
    auto sc_new = singleton_inclusion(out.cube);
    std::vector<int> pb_at(b.source->size() * std::max<size_t>(w.source->size(), 1), -1);
    for (size_t pt = 0; pt < pb.total.size(); pt++)
        pb_at[pb.left[pt] * w.source->size() + pb.right[pt]] = static_cast<int>(pt);
    for (size_t o = 0; o < nc.objects(); o++) {
        auto [a, cmor] = out.cube.poset.base->objects[o];
        GMap cg = t.gmap(cmor);
        GMap bc{cg.source, w.target, {}};
        for (size_t x = 0; x < cg.source->size(); x++) bc.map.push_back(b.map[cg.map[x]]);
        auto old_secs = sections_over(bc, w);
        if (old_secs.size() != sc_new.sections[o].size())
            throw std::logic_error("basechanged sections differ in count");
        size_t oo = old_obj.at({a, t.cat().compose(b_mor, cmor)});
        for (const auto& s : old_secs) {
            std::vector<size_t> sbar(s.size());
            for (size_t x = 0; x < s.size(); x++)
                sbar[x] = static_cast<size_t>(pb_at[cg.map[x] * w.source->size() + s[x]]);
            size_t j = 0;
            while (j < sc_new.sections[o].size() && sc_new.sections[o][j] != sbar) j++;
            if (j == sc_new.sections[o].size())
                throw std::logic_error("singleton inclusions do not correspond");
            const CubeLevel& nl = out.cube.levels[o];
            size_t orbit_new = nl.orbit_of[nl.find_point(0, sbar[0], out.cube.W->size())];
            size_t orbit_old =
                orig.levels[oo].orbit_of[orig.levels[oo].find_point(0, s[0], orig.W->size())];
            if (out.orbit_bijection[o][orbit_new] != orbit_old)
                throw std::logic_error("singleton inclusions do not correspond");
        }
    }
    return out;
}

// Orbit partition (A, D, Z) of the terminal fibre turned into per-level
// decomposition triples plus the face cube of w restricted to the A-orbits.
struct NotAPartition : InputError {
    using InputError::InputError;
};

struct FaceDecomposition {
    std::vector<size_t> a_mask, d_mask, z_mask; // per level
    ParamCube face;                             // cube of w|_A, over the same slice
    std::vector<std::vector<size_t>> orbit_map; // per level: face orbit -> parent orbit

    // y ↦ d ∨ ι(y), a full embedding levelwise and natural in the level
    ParamMonotoneMap embedding(const ParamCube& parent) const {
        ParamMonotoneMap e;
        e.source = &face.poset;
        e.target = &parent.poset;
        for (size_t o = 0; o < face.poset.levels(); o++) {
            MonotoneMap f{face.poset.fibres[o].get(), parent.poset.fibres[o].get(), {}};
            for (size_t s = 0; s < face.poset.fibre(o).size(); s++) {
                size_t mask = d_mask[o];
                for (size_t i = 0; i < orbit_map[o].size(); i++)
                    if (s & (size_t{1} << i)) mask |= size_t{1} << orbit_map[o][i];
                f.map.push_back(mask);
            }
            if (!f.is_monotone() || !f.is_injective() || !f.is_order_reflecting())
                throw std::logic_error("face embedding is not full");
            e.level.push_back(std::move(f));
        }
        e.validate();
        return e;
    }
};

inline FaceDecomposition decompose_cube(const ParamCube& cube, size_t amask, size_t dmask,
                                        size_t zmask) {
    const ParamPoset& p = cube.poset;
    const FinCat& c = p.base->cat;
    size_t term = terminal_level(*p.base, p.T->cat(), p.over_obj);
    size_t full = p.fibre(term).size() - 1; // top bitmask of the terminal powerset
    if ((amask | dmask | zmask) != full || (amask & dmask) || (amask & zmask) || (dmask & zmask))
        throw NotAPartition("orbit sets do not partition the terminal fibre");

    FaceDecomposition out;
    for (size_t o = 0; o < c.objects(); o++) {
        size_t to_term = c.hom(o, term).at(0);
        const auto& r = p.restriction[to_term].map;
        out.a_mask.push_back(r[amask]);
        out.d_mask.push_back(r[dmask]);
        out.z_mask.push_back(r[zmask]);
        auto triple = make_triple(p.lattice(o), out.a_mask[o], out.d_mask[o]);
        if (triple.z != out.z_mask[o])
            throw std::logic_error("restricted remainder disagrees with the triple");
    }

    // W restricted to the A-orbits (terminal level ≅ W via the W-projection)
    const CubeLevel& tl = cube.levels[term];
    std::vector<size_t> keep;
    for (size_t i = 0; i < tl.orbits.size(); i++) {
        if (!(amask & (size_t{1} << i))) continue;
        for (size_t pt : tl.orbits[i]) keep.push_back(tl.to_w[pt]);
    }
    std::sort(keep.begin(), keep.end());
    auto wa = std::make_shared<const GSet>(cube.W->restrict_points(keep));
    std::vector<size_t> wa_map;
    for (size_t j : keep) wa_map.push_back(cube.w_map[j]);
    out.face = build_cube(*p.T, p.over_obj, wa, wa_map, p.base);

    for (size_t o = 0; o < c.objects(); o++) {
        const CubeLevel& fl = out.face.levels[o];
        const CubeLevel& pl = cube.levels[o];
        std::vector<size_t> om(fl.orbits.size());
        size_t image_bits = 0;
        for (size_t j = 0; j < fl.orbits.size(); j++) {
            size_t q = fl.orbits[j][0];
            om[j] = pl.orbit_of[pl.find_point(fl.to_b[q], keep[fl.to_w[q]], cube.W->size())];
            image_bits |= size_t{1} << om[j];
        }
        if (image_bits != out.a_mask[o])
            throw std::logic_error("face orbits do not match the restricted A part");
        out.orbit_map.push_back(std::move(om));
    }
    out.embedding(cube); // full-embedding and naturality asserts
    return out;
}

// Grothendieck construction: objects (level, fibre element), a morphism per
// slice morphism m with x ≤ ρ_m(x'). The projection to the base is faithful
// by keying; fibres over identities recover the fibre posets.
struct TotalPoset {
    FinCat cat;
    std::vector<ParamPoint> objects;
    std::vector<size_t> mor_base; // slice morphism per total morphism

    CatFunctor projection(const FinCat& base) const {
        CatFunctor f{&cat, &base, {}, {}};
        for (const auto& o : objects) f.ob.push_back(o.level);
        f.mor = mor_base;
        f.validate();
        return f;
    }
};

inline TotalPoset total_poset(const ParamPoset& p) {
    const FinCat& c = p.base->cat;
    TotalPoset out;
    std::vector<std::vector<size_t>> obj_at(c.objects());
    for (size_t o = 0; o < c.objects(); o++)
        for (size_t x = 0; x < p.fibre(o).size(); x++) {
            obj_at[o].push_back(out.objects.size());
            out.objects.push_back({o, x});
        }
    FinCatBuilder<std::tuple<size_t, size_t, size_t>> bld(out.objects.size());
    for (size_t m = 0; m < c.morphisms(); m++) {
        size_t o = c.src(m), o2 = c.dst(m);
        for (size_t x = 0; x < p.fibre(o).size(); x++)
            for (size_t x2 = 0; x2 < p.fibre(o2).size(); x2++)
                if (p.fibre(o).leq(x, p.restriction[m].map[x2]))
                    bld.add(obj_at[o][x], obj_at[o2][x2], {obj_at[o][x], obj_at[o2][x2], m});
    }
    std::vector<size_t> ids(out.objects.size());
    for (size_t t = 0; t < out.objects.size(); t++) {
        int m = bld.find({t, t, c.identity(out.objects[t].level)});
        if (m < 0) throw std::logic_error("total poset misses an identity");
        ids[t] = static_cast<size_t>(m);
    }
    out.mor_base.resize(bld.count());
    for (size_t m = 0; m < bld.count(); m++) out.mor_base[m] = std::get<2>(bld.key_of(m));
    out.cat = bld.finish(std::move(ids), [&](size_t g, size_t f) {
        auto [fs, fd, m1] = bld.key_of(f);
        auto [gs, gd, m2] = bld.key_of(g);
        return std::tuple<size_t, size_t, size_t>{fs, gd, c.compose(m2, m1)};
    });
    out.projection(c); // faithfulness by keying; validates functor laws
    return out;
}

namespace detail {

// One component B_i of B ×_A V together with its leg to V, the sections of w
// over the leg, and the orbit data of B_i ×_V W.
struct PushComp {
    std::shared_ptr<const GSet> bset;
    std::vector<size_t> keep; // points of B ×_A V in this component, ascending
    std::vector<size_t> leg;  // B_i -> V
    std::vector<std::vector<size_t>> sections;
    std::vector<std::vector<size_t>> worbits;
    std::vector<size_t> worbit_of;
    std::vector<int> wat; // (B_i point)*|W| + (W point) -> pullback point
};

struct PushLevel {
    std::vector<size_t> pleft, pright; // B ×_A V projections
    std::vector<size_t> comp_of;       // pullback point -> component
    std::vector<size_t> pos_in_comp;   // pullback point -> index inside bset
    std::vector<int> vat;              // (B point)*|V| + (V point) -> pullback point
    std::vector<PushComp> comp;
};

} // namespace detail

// Pushforward along a: V -> A. The composite cube (aw)_*Δ¹ splits levelwise
// over the components of B ×_A V, and the singleton cone of aw maps into the
// indexed product of per-component section cones; composing with the product
// of singleton inclusions recovers the singleton inclusion of aw.
struct PushforwardData {
    ParamCube composite;                // cube of aw over the slice of A
    SingletonCone composite_cones;      // singletons of aw
    std::shared_ptr<const ParamPoset> product_cones;
    ParamMonotoneMap theta;             // composite_cones.poset -> product_cones
    std::vector<std::vector<std::pair<size_t, size_t>>> orbit_split;
    std::vector<std::vector<size_t>> section_counts; // per level, per component
};

inline PushforwardData pushforward_singletons(const ParamCube& wcube, size_t a_obj,
                                              size_t a_mor) {
    const OrbitCat& t = *wcube.poset.T;
    size_t v = wcube.poset.over_obj;
    if (t.cat().src(a_mor) != v || t.cat().dst(a_mor) != a_obj)
        throw InputError("pushforward morphism has wrong endpoints");
    const GSet& vset = t.object(v);
    GMap a_g = t.gmap(a_mor);
    GMap w_g = wcube.w_gmap();
    const auto& apm = t.point_map(a_mor);

    PushforwardData out;
    std::vector<size_t> aw_map;
    for (size_t y : wcube.w_map) aw_map.push_back(apm[y]);
    out.composite = build_cube(t, a_obj, wcube.W, std::move(aw_map));
    out.composite_cones = singleton_inclusion(out.composite);

    const FinCat& c = out.composite.poset.base->cat;
    std::vector<detail::PushLevel> lv(c.objects());
    for (size_t o = 0; o < c.objects(); o++) {
        auto [bi, cmor] = out.composite.poset.base->objects[o];
        GMap c_g = t.gmap(cmor);
        auto pbv = pullback(c_g, a_g);
        detail::PushLevel& L = lv[o];
        L.pleft = pbv.left;
        L.pright = pbv.right;
        L.vat.assign(c_g.source->size() * vset.size(), -1);
        for (size_t pt = 0; pt < pbv.total.size(); pt++)
            L.vat[pbv.left[pt] * vset.size() + pbv.right[pt]] = static_cast<int>(pt);
        L.comp_of.assign(pbv.total.size(), 0);
        L.pos_in_comp.assign(pbv.total.size(), 0);
        for (auto orb : pbv.total.orbits()) {
            std::sort(orb.begin(), orb.end());
            detail::PushComp pc;
            pc.keep = orb;
            pc.bset = std::make_shared<const GSet>(pbv.total.restrict_points(pc.keep));
            for (size_t ii = 0; ii < pc.keep.size(); ii++) {
                L.comp_of[pc.keep[ii]] = L.comp.size();
                L.pos_in_comp[pc.keep[ii]] = ii;
                pc.leg.push_back(pbv.right[pc.keep[ii]]);
            }
            GMap legm{pc.bset.get(), &vset, pc.leg};
            pc.sections = sections_over(legm, w_g);
            auto pbw = pullback(legm, w_g);
            pc.worbits = pbw.total.orbits();
            pc.worbit_of.assign(pbw.total.size(), 0);
            for (size_t j = 0; j < pc.worbits.size(); j++)
                for (size_t pt : pc.worbits[j]) pc.worbit_of[pt] = j;
            pc.wat.assign(pc.bset->size() * std::max<size_t>(wcube.W->size(), 1), -1);
            for (size_t pt = 0; pt < pbw.total.size(); pt++)
                pc.wat[pbw.left[pt] * wcube.W->size() + pbw.right[pt]] = static_cast<int>(pt);
            L.comp.push_back(std::move(pc));
        }
    }

    // the composite fibre orbits split across components
    std::vector<std::vector<std::vector<size_t>>> split_inv(c.objects());
    for (size_t o = 0; o < c.objects(); o++) {
        const detail::PushLevel& L = lv[o];
        const CubeLevel& cl = out.composite.levels[o];
        split_inv[o].resize(L.comp.size());
        size_t expect = 0;
        for (size_t i = 0; i < L.comp.size(); i++) {
            split_inv[o][i].assign(L.comp[i].worbits.size(), cl.orbits.size());
            expect += L.comp[i].worbits.size();
        }
        if (expect != cl.orbits.size())
            throw std::logic_error("component orbits do not add up");
        std::vector<std::pair<size_t, size_t>> split(cl.orbits.size());
        for (size_t j = 0; j < cl.orbits.size(); j++) {
            size_t q = cl.orbits[j][0];
            size_t x = cl.to_b[q], y = cl.to_w[q];
            size_t pv = static_cast<size_t>(L.vat[x * vset.size() + wcube.w_map[y]]);
            size_t i = L.comp_of[pv];
            const detail::PushComp& pc = L.comp[i];
            size_t jj = pc.worbit_of[static_cast<size_t>(
                pc.wat[L.pos_in_comp[pv] * wcube.W->size() + y])];
            if (split_inv[o][i][jj] != cl.orbits.size())
                throw std::logic_error("orbit split not injective");
            split_inv[o][i][jj] = j;
            split[j] = {i, jj};
        }
        out.orbit_split.push_back(std::move(split));
    }

    auto pp = std::make_shared<ParamPoset>();
    pp->T = &t;
    pp->over_obj = a_obj;
    pp->base = out.composite.poset.base;
    pp->pointed = false;
    std::vector<std::vector<size_t>> radix(c.objects());
    for (size_t o = 0; o < c.objects(); o++) {
        std::vector<const FinPoset*> parts;
        std::vector<FinPoset> cones;
        cones.reserve(lv[o].comp.size());
        std::vector<size_t> counts;
        for (const auto& pc : lv[o].comp) {
            cones.push_back(make_cone_poset(pc.sections.size()));
            radix[o].push_back(pc.sections.size() + 1);
            counts.push_back(pc.sections.size());
        }
        for (const auto& cone : cones) parts.push_back(&cone);
        pp->fibres.push_back(std::make_shared<const FinPoset>(FinPoset::product(parts)));
        pp->fibre_lattices.push_back(nullptr);
        out.section_counts.push_back(std::move(counts));
    }
    auto encode = [&](size_t o, const std::vector<size_t>& ts) {
        size_t e = 0;
        for (size_t i = 0; i < ts.size(); i++) e = e * radix[o][i] + ts[i];
        return e;
    };
    auto decode = [&](size_t o, size_t e) {
        std::vector<size_t> ts(radix[o].size());
        for (size_t i = radix[o].size(); i-- > 0;) {
            ts[i] = e % radix[o][i];
            e /= radix[o][i];
        }
        return ts;
    };
    for (size_t m = 0; m < c.morphisms(); m++) {
        size_t o = c.src(m), o2 = c.dst(m);
        const detail::PushLevel& L = lv[o];
        const detail::PushLevel& L2 = lv[o2];
        const auto& hm = t.point_map(out.composite.poset.base->mor_h[m]);
        // per component of B ×_A V: the matching component over B' and the
        // induced point map into it
        std::vector<size_t> ci(L.comp.size());
        std::vector<std::vector<size_t>> induced(L.comp.size());
        for (size_t i = 0; i < L.comp.size(); i++) {
            for (size_t pv : L.comp[i].keep) {
                size_t pv2 = static_cast<size_t>(
                    L2.vat[hm[L.pleft[pv]] * vset.size() + L.pright[pv]]);
                induced[i].push_back(L2.pos_in_comp[pv2]);
            }
            ci[i] = L2.comp_of[static_cast<size_t>(
                L2.vat[hm[L.pleft[L.comp[i].keep[0]]] * vset.size() +
                       L.pright[L.comp[i].keep[0]]])];
        }
        MonotoneMap r{pp->fibres[o2].get(), pp->fibres[o].get(), {}};
        for (size_t e = 0; e < pp->fibres[o2]->size(); e++) {
            auto ts2 = decode(o2, e);
            std::vector<size_t> ts(L.comp.size(), 0);
            for (size_t i = 0; i < L.comp.size(); i++) {
                size_t tc = ts2[ci[i]];
                if (tc == 0) continue;
                const auto& s2 = L2.comp[ci[i]].sections[tc - 1];
                std::vector<size_t> s(induced[i].size());
                for (size_t ii = 0; ii < s.size(); ii++) s[ii] = s2[induced[i][ii]];
                size_t j = 0;
                const auto& secs = L.comp[i].sections;
                while (j < secs.size() && secs[j] != s) j++;
                if (j == secs.size())
                    throw std::logic_error("restricted section missing from component");
                ts[i] = j + 1;
            }
            r.map.push_back(encode(o, ts));
        }
        pp->restriction.push_back(std::move(r));
    }
    pp->validate();
    out.product_cones = pp;

    out.theta.source = out.composite_cones.poset.get();
    out.theta.target = pp.get();
    for (size_t o = 0; o < c.objects(); o++) {
        const detail::PushLevel& L = lv[o];
        MonotoneMap f{out.composite_cones.poset->fibres[o].get(), pp->fibres[o].get(), {}};
        f.map.push_back(encode(o, std::vector<size_t>(L.comp.size(), 0)));
        for (const auto& s : out.composite_cones.sections[o]) {
            // the graph of x ↦ (x, w(s(x))) is one whole component
            size_t pv0 = static_cast<size_t>(L.vat[0 * vset.size() + wcube.w_map[s[0]]]);
            size_t i = L.comp_of[pv0];
            const detail::PushComp& pc = L.comp[i];
            std::vector<size_t> stilde(pc.keep.size());
            for (size_t ii = 0; ii < pc.keep.size(); ii++) stilde[ii] = s[L.pleft[pc.keep[ii]]];
            size_t j = 0;
            while (j < pc.sections.size() && pc.sections[j] != stilde) j++;
            if (j == pc.sections.size())
                throw std::logic_error("composite section does not restrict to a component");
            std::vector<size_t> ts(L.comp.size(), 0);
            ts[i] = j + 1;
            f.map.push_back(encode(o, ts));
        }
        // Π(singleton inclusions) ∘ θ equals the singleton inclusion of aw
        for (size_t e = 0; e < f.map.size(); e++) {
            auto ts = decode(o, f.map[e]);
            size_t mask = 0;
            for (size_t i = 0; i < ts.size(); i++) {
                if (ts[i] == 0) continue;
                const detail::PushComp& pc = L.comp[i];
                const auto& sec = pc.sections[ts[i] - 1];
                size_t jj = pc.worbit_of[static_cast<size_t>(pc.wat[0 * wcube.W->size() + sec[0]])];
                mask |= size_t{1} << split_inv[o][i][jj];
            }
            if (mask != out.composite_cones.inclusion.level[o].map[e])
                throw std::logic_error("product of inclusions does not recover the composite one");
        }
        out.theta.level.push_back(std::move(f));
    }
    out.theta.validate();
    return out;
}

} // namespace parex
