#pragma once

#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "parex/coeff.hpp"
#include "parex/hocolim.hpp"
#include "parex/param.hpp"

namespace parex {

// Slice of the orbit category over an arbitrary G-set W, together with its
// projection to the slice over V. Objects are equivariant maps B -> W out of
// orbit objects; morphisms are orbit morphisms commuting over W. W need not
// be transitive, which is why slice_over does not apply.
struct WSlice {
    FinCat cat;
    std::vector<std::pair<size_t, std::vector<size_t>>> objects; // (orbit object, map to W)
    std::vector<size_t> mor_h;    // underlying orbit morphism per morphism
    std::vector<size_t> ob_base;  // level under the projection, per object
    std::vector<size_t> mor_base; // slice morphism under the projection

    size_t find(size_t obj, const std::vector<size_t>& f) const {
        for (size_t o = 0; o < objects.size(); o++)
            if (objects[o].first == obj && objects[o].second == f) return o;
        throw std::logic_error("slice over W misses an object");
    }
};

inline WSlice wslice(const ParamCube& cube) {
    const OrbitCat& t = *cube.poset.T;
    const FinCat& tc = t.cat();
    const CommaCat& base = *cube.poset.base;
    WSlice out;
    for (size_t i = 0; i < tc.objects(); i++)
        for (auto& f : OrbitCat::enumerate_maps(t.object(i), *cube.W))
            out.objects.push_back({i, f});

    FinCatBuilder<std::tuple<size_t, size_t, size_t>> bld(out.objects.size());
    for (size_t o = 0; o < out.objects.size(); o++)
        for (size_t o2 = 0; o2 < out.objects.size(); o2++) {
            const auto& f = out.objects[o].second;
            const auto& f2 = out.objects[o2].second;
            for (size_t h : tc.hom(out.objects[o].first, out.objects[o2].first)) {
                const auto& hm = t.point_map(h);
                bool over_w = true;
                for (size_t p = 0; p < f.size() && over_w; p++) over_w = f2[hm[p]] == f[p];
                if (over_w) bld.add(o, o2, {o, o2, h});
            }
        }
    std::vector<size_t> ids(out.objects.size());
    for (size_t o = 0; o < out.objects.size(); o++) {
        int m = bld.find({o, o, tc.identity(out.objects[o].first)});
        if (m < 0) throw std::logic_error("slice over W misses an identity");
        ids[o] = static_cast<size_t>(m);
    }
    out.mor_h.resize(bld.count());
    for (size_t m = 0; m < bld.count(); m++) out.mor_h[m] = std::get<2>(bld.key_of(m));
    out.cat = bld.finish(std::move(ids), [&](size_t g, size_t f) {
        auto [fo, fo2, h1] = bld.key_of(f);
        auto [go, go2, h2] = bld.key_of(g);
        return std::tuple<size_t, size_t, size_t>{fo, go2, tc.compose(h2, h1)};
    });

    // project each structure map along w and look the result up in the slice
    out.ob_base.resize(out.objects.size());
    for (size_t o = 0; o < out.objects.size(); o++) {
        auto& [i, f] = out.objects[o];
        std::vector<size_t> c(f.size());
        for (size_t p = 0; p < f.size(); p++) c[p] = cube.w_map[f[p]];
        int found = -1;
        for (size_t b : tc.hom(i, cube.poset.over_obj))
            if (t.point_map(b) == c) {
                for (size_t lv = 0; lv < base.objects.size(); lv++)
                    if (base.objects[lv] == std::make_pair(i, b)) found = static_cast<int>(lv);
                break;
            }
        if (found < 0) throw std::logic_error("projected structure map misses the slice");
        out.ob_base[o] = static_cast<size_t>(found);
    }
    out.mor_base.resize(out.cat.morphisms());
    for (size_t m = 0; m < out.cat.morphisms(); m++) {
        int found = -1;
        for (size_t mu : base.cat.hom(out.ob_base[out.cat.src(m)], out.ob_base[out.cat.dst(m)]))
            if (base.mor_h[mu] == out.mor_h[m]) found = static_cast<int>(mu);
        if (found < 0) throw std::logic_error("projected morphism misses the slice");
        out.mor_base[m] = static_cast<size_t>(found);
    }
    CatFunctor proj{&out.cat, &base.cat, out.ob_base, out.mor_base};
    proj.validate();
    return out;
}

// Indexed coproduct w_! and indexed product w_* of the restriction of a
// coefficient system along the slice projection, with the canonical norm
// comparison between them. Both Kan extensions are honest comma-category
// homotopy (co)limits; the comparison is assembled from identity components
// on the summand/factor pairs matched by a section and is zero elsewhere.
struct NormData {
    ChainSystem lower, upper;
    SystemMap norm;
    std::vector<size_t> sections; // lower summands per level
    std::vector<size_t> factors;  // upper factors per level
    std::vector<bool> qis;        // levelwise homology verdict for the norm
    bool all_qis = true;
};

inline NormData norm_map(const ParamCube& cube, const ChainSystem& x) {
    const OrbitCat& t = *cube.poset.T;
    const CommaCat& base = *cube.poset.base;
    const FinCat& bc = base.cat;
    if (x.cat_ptr() != &bc) throw InputError("coefficient system lives over a different slice");

    WSlice ws = wslice(cube);
    CatFunctor u{&ws.cat, &bc, ws.ob_base, ws.mor_base};
    GMap wg = cube.w_gmap();

    auto rep_obj = [](const ThinSkeleton& sk, size_t p) {
        return static_cast<size_t>(sk.poset.id_of(p));
    };
    auto index_of = [](const CommaCat& cc) {
        std::map<std::pair<size_t, size_t>, size_t> ix;
        for (size_t o = 0; o < cc.objects.size(); o++) ix[cc.objects[o]] = o;
        return ix;
    };
    // value and edge of the restricted system on a comma object / morphism
    auto cval = [&](const CommaCat& cc, size_t o) -> const ChainComplex& {
        return x.at(ws.ob_base[cc.objects[o].first]);
    };
    auto cmap = [&](const CommaCat& cc, size_t m) -> const ChainMap& {
        return x.res(ws.mor_base[cc.mor_h[m]]);
    };

    struct Level {
        CommaCat lo, up;
        ThinSkeleton lo_sk, up_sk;
        std::map<std::pair<size_t, size_t>, size_t> lo_ix, up_ix;
        ChainDiagram lo_diag, up_diag;
        Totalization lo_tot;
        Cototalization up_tot;
    };
    std::vector<Level> lvl(bc.objects());
    std::vector<std::vector<std::vector<size_t>>> lifts(bc.objects());

    NormData out;
    std::vector<ChainComplex> lower_vals(bc.objects()), upper_vals(bc.objects());
    for (size_t v = 0; v < bc.objects(); v++) {
        Level& L = lvl[v];
        L.lo = comma_from(u, v);
        L.up = comma_to(u, v);
        L.lo_sk = skeletonize_thin(L.lo.cat);
        L.up_sk = skeletonize_thin(L.up.cat);
        L.lo_ix = index_of(L.lo);
        L.up_ix = index_of(L.up);
        {
            auto shp = std::make_shared<const FinPoset>(L.lo_sk.poset);
            std::vector<ChainComplex> vals;
            for (size_t p = 0; p < shp->size(); p++) vals.push_back(cval(L.lo, rep_obj(L.lo_sk, p)));
            ChainDiagram::CoverMaps cm;
            for (auto& [a, b] : shp->covers())
                cm[{a, b}] = cmap(L.lo, L.lo.cat.hom(rep_obj(L.lo_sk, a), rep_obj(L.lo_sk, b))[0]);
            L.lo_diag = ChainDiagram::build(shp, std::move(vals), cm);
        }
        L.lo_tot = hocolim(L.lo_diag);
        lower_vals[v] = L.lo_tot.total;
        {
            // the comma diagram is contravariant, so it totalizes over the
            // opposite of the skeleton
            auto shp = opposite(L.up_sk.poset);
            std::vector<ChainComplex> vals;
            for (size_t p = 0; p < shp->size(); p++) vals.push_back(cval(L.up, rep_obj(L.up_sk, p)));
            ChainDiagram::CoverMaps cm;
            for (auto& [a, b] : shp->covers())
                cm[{a, b}] = cmap(L.up, L.up.cat.hom(rep_obj(L.up_sk, b), rep_obj(L.up_sk, a))[0]);
            L.up_diag = ChainDiagram::build(shp, std::move(vals), cm);
        }
        L.up_tot = holim(L.up_diag);
        upper_vals[v] = L.up_tot.total;
        lifts[v] = sections_over(t.gmap(base.objects[v].second), wg);
        out.sections.push_back(lifts[v].size());
        out.factors.push_back(cube.levels[v].orbits.size());
    }

    // Norm component: project onto the summand of a section, include as the
    // factor of the same section. Sections name exactly the comma components
    // with an invertible structure map, on both sides.
    std::vector<ChainMap> norm_at;
    for (size_t v = 0; v < bc.objects(); v++) {
        Level& L = lvl[v];
        size_t idv = bc.identity(v);
        ChainMap nv = chain_map_zero(lower_vals[v], upper_vals[v]);
        for (const auto& l : lifts[v]) {
            size_t cw = ws.find(base.objects[v].first, l);
            size_t tau_lo = L.lo_ix.at({cw, idv});
            size_t tau_up = L.up_ix.at({cw, idv});
            std::vector<ChainMap> legs;
            for (size_t p = 0; p < L.lo_diag.size(); p++) {
                const auto& hs = L.lo.cat.hom(rep_obj(L.lo_sk, p), tau_lo);
                legs.push_back(hs.empty() ? chain_map_zero(L.lo_diag.value(p), x.at(v))
                                          : cmap(L.lo, hs[0]));
            }
            ChainMap proj = hocolim_out(L.lo_tot, L.lo_diag, x.at(v), legs);
            std::vector<ChainMap> cone;
            for (size_t p = 0; p < L.up_diag.size(); p++) {
                const auto& hs = L.up.cat.hom(rep_obj(L.up_sk, p), tau_up);
                cone.push_back(hs.empty() ? chain_map_zero(x.at(v), L.up_diag.value(p))
                                          : cmap(L.up, hs[0]));
            }
            ChainMap inc = holim_in(L.up_tot, L.up_diag, x.at(v), cone);
            nv = cm_add(nv, compose(inc, proj));
        }
        norm_at.push_back(std::move(nv));
    }

    // restrictions transport along precomposition (lower) and postcomposition
    // (upper) of the comma structure maps
    std::vector<ChainMap> lower_res, upper_res;
    for (size_t m = 0; m < bc.morphisms(); m++) {
        Level& S = lvl[bc.src(m)];
        Level& D = lvl[bc.dst(m)];
        {
            std::vector<size_t> g(D.lo_diag.size());
            std::vector<ChainMap> comp(D.lo_diag.size());
            for (size_t p = 0; p < g.size(); p++) {
                auto [a, k] = D.lo.objects[rep_obj(D.lo_sk, p)];
                size_t img = S.lo_ix.at({a, bc.compose(k, m)});
                g[p] = S.lo_sk.rep_index[img];
                comp[p] = cmap(S.lo, S.lo_sk.to_rep[img]);
            }
            lower_res.push_back(
                hocolim_transport(D.lo_tot, D.lo_diag, S.lo_tot, S.lo_diag, g, comp));
        }
        {
            std::vector<size_t> g(S.up_diag.size());
            std::vector<ChainMap> comp(S.up_diag.size());
            for (size_t p = 0; p < g.size(); p++) {
                auto [a, k] = S.up.objects[rep_obj(S.up_sk, p)];
                size_t img = D.up_ix.at({a, bc.compose(m, k)});
                g[p] = D.up_sk.rep_index[img];
                comp[p] = cmap(D.up, D.up_sk.to_rep[img]);
            }
            upper_res.push_back(
                holim_transport(S.up_tot, S.up_diag, D.up_tot, D.up_diag, g, comp));
        }
    }

    out.lower = ChainSystem::build(&bc, std::move(lower_vals), std::move(lower_res));
    out.upper = ChainSystem::build(&bc, std::move(upper_vals), std::move(upper_res));
    out.norm = SystemMap{std::move(norm_at)};
    validate_system_map(out.lower, out.upper, out.norm, "norm component");
    out.qis = qis_levels(out.lower, out.upper, out.norm);
    for (bool b : out.qis) out.all_qis = out.all_qis && b;
    return out;
}

// Shape category of cube-valued diagrams: objects are (level, fibre mask), a
// morphism (v,S) -> (v',S') is a slice morphism m: v' -> v whose mask
// preimage lands inside S'. Fibrewise collapse maps and contravariant level
// restrictions are both covariant over this twist.
struct CubeShape {
    FinCat cat;
    std::vector<ParamPoint> objects;
    std::vector<size_t> mor_base; // slice morphism per shape morphism
    std::vector<size_t> first;    // object offset per level
    std::map<std::tuple<size_t, size_t, size_t>, size_t> mor_ix;

    size_t index(size_t level, size_t mask) const { return first[level] + mask; }
    size_t edge(size_t o, size_t o2, size_t m) const { return mor_ix.at({o, o2, m}); }
};

inline std::shared_ptr<const CubeShape> cube_shape(const ParamCube& cube) {
    const FinCat& bc = cube.poset.base->cat;
    auto out = std::make_shared<CubeShape>();
    for (size_t v = 0; v < bc.objects(); v++) {
        out->first.push_back(out->objects.size());
        for (size_t s = 0; s < cube.poset.fibre(v).size(); s++) out->objects.push_back({v, s});
    }
    FinCatBuilder<std::tuple<size_t, size_t, size_t>> bld(out->objects.size());
    for (size_t m = 0; m < bc.morphisms(); m++) {
        size_t vs = bc.src(m), vd = bc.dst(m);
        const auto& r = cube.poset.restriction[m].map;
        for (size_t s = 0; s < cube.poset.fibre(vd).size(); s++)
            for (size_t s2 = 0; s2 < cube.poset.fibre(vs).size(); s2++)
                if ((r[s] & ~s2) == 0)
                    bld.add(out->index(vd, s), out->index(vs, s2),
                            {out->index(vd, s), out->index(vs, s2), m});
    }
    std::vector<size_t> ids(out->objects.size());
    for (size_t o = 0; o < out->objects.size(); o++) {
        int m = bld.find({o, o, bc.identity(out->objects[o].level)});
        if (m < 0) throw std::logic_error("cube shape misses an identity");
        ids[o] = static_cast<size_t>(m);
    }
    out->mor_base.resize(bld.count());
    for (size_t m = 0; m < bld.count(); m++) out->mor_base[m] = std::get<2>(bld.key_of(m));
    out->cat = bld.finish(std::move(ids), [&](size_t g, size_t f) {
        auto [fo, fo2, m1] = bld.key_of(f);
        auto [go, go2, m2] = bld.key_of(g);
        return std::tuple<size_t, size_t, size_t>{fo, go2, bc.compose(m1, m2)};
    });
    for (size_t m = 0; m < out->cat.morphisms(); m++)
        out->mor_ix[{out->cat.src(m), out->cat.dst(m), out->mor_base[m]}] = m;
    return out;
}

// Covariant functor from a cube shape to chain complexes, laws checked as
// exact matrix identities on construction.
class CubeCh {
public:
    CubeCh() = default;

    static CubeCh build(std::shared_ptr<const CubeShape> shape, std::vector<ChainComplex> at,
                        std::vector<ChainMap> map) {
        CubeCh c;
        c.shape_ = std::move(shape);
        c.at_ = std::move(at);
        c.map_ = std::move(map);
        const FinCat& k = c.shape_->cat;
        if (c.at_.size() != k.objects() || c.map_.size() != k.morphisms())
            throw InputError("cube tables have wrong size");
        for (size_t m = 0; m < k.morphisms(); m++)
            validate_chain_map(c.at_[k.src(m)], c.at_[k.dst(m)], c.map_[m], "cube edge");
        for (size_t o = 0; o < k.objects(); o++)
            if (!cm_is_zero(cm_sub(c.map_[k.identity(o)], chain_map_identity(c.at_[o]))))
                throw InputError("cube identity edge is not the identity");
        for (size_t m1 = 0; m1 < k.morphisms(); m1++)
            for (size_t m2 = 0; m2 < k.morphisms(); m2++) {
                if (k.dst(m1) != k.src(m2)) continue;
                if (!cm_is_zero(cm_sub(c.map_[k.compose(m2, m1)],
                                       compose(c.map_[m2], c.map_[m1]))))
                    throw InputError("cube edges are not functorial");
            }
        return c;
    }

    const CubeShape& shape() const { return *shape_; }
    const std::shared_ptr<const CubeShape>& shape_ptr() const { return shape_; }
    const ChainComplex& at(size_t o) const { return at_[o]; }
    const ChainMap& map(size_t m) const { return map_[m]; }

private:
    std::shared_ptr<const CubeShape> shape_;
    std::vector<ChainComplex> at_;
    std::vector<ChainMap> map_;
};

struct CubeMap {
    std::vector<ChainMap> at;
};

inline void validate_cube_map(const CubeCh& s, const CubeCh& t, const CubeMap& f,
                              const char* what) {
    const FinCat& k = s.shape().cat;
    if (s.shape_ptr() != t.shape_ptr()) throw InputError("cube map across shapes");
    if (f.at.size() != k.objects()) throw InputError("cube map has wrong arity");
    for (size_t o = 0; o < k.objects(); o++) validate_chain_map(s.at(o), t.at(o), f.at[o], what);
    for (size_t m = 0; m < k.morphisms(); m++)
        if (!cm_is_zero(cm_sub(compose(f.at[k.dst(m)], s.map(m)),
                               compose(t.map(m), f.at[k.src(m)]))))
            throw InputError("cube map is not natural");
}

// The collapse cube of indexed coproducts, the dual cube of indexed products,
// and the componentwise norm between them. The mask names the already
// collapsed orbits: the empty mask carries the full coproduct/product, the
// top carries zero. Summands are indexed by sections, factors by pullback
// orbits through a fixed chart per orbit; the norm is the identity on the
// pairs matched by a section's graph and zero elsewhere.
struct AlphaBeta {
    std::shared_ptr<const CubeShape> shape;
    CubeCh alpha, beta;
    CubeMap aleph;
    std::vector<bool> aleph_qis;           // per shape object
    std::vector<std::vector<bool>> cocart; // counit verdict per level and mask
    std::vector<std::vector<bool>> cart;   // unit verdict per level and mask
    bool alpha_cocartesian = true;
    bool beta_cartesian = true;
};

inline AlphaBeta alpha_beta_cubes(const ParamCube& cube, const ChainSystem& x) {
    const OrbitCat& t = *cube.poset.T;
    const CommaCat& base = *cube.poset.base;
    const FinCat& bc = base.cat;
    if (x.cat_ptr() != &bc) throw InputError("coefficient system lives over a different slice");
    GMap wg = cube.w_gmap();

    // sections with their graph orbits, per level
    std::vector<std::vector<std::vector<size_t>>> lift(bc.objects());
    std::vector<std::vector<size_t>> graph_of(bc.objects());
    std::vector<std::map<std::vector<size_t>, size_t>> lift_ix(bc.objects());
    for (size_t v = 0; v < bc.objects(); v++) {
        lift[v] = sections_over(t.gmap(base.objects[v].second), wg);
        const CubeLevel& lvl = cube.levels[v];
        for (size_t i = 0; i < lift[v].size(); i++) {
            lift_ix[v][lift[v][i]] = i;
            graph_of[v].push_back(
                lvl.orbit_of[lvl.find_point(0, lift[v][i][0], cube.W->size())]);
        }
    }

    // one chart per pullback orbit: an orbit object with an equivariant
    // bijection onto the orbit, graphs charted through their section
    struct Chart {
        size_t level;
        std::vector<size_t> phi;
        std::vector<int> phi_inv;
    };
    std::vector<std::vector<Chart>> chart(bc.objects());
    for (size_t v = 0; v < bc.objects(); v++) {
        const CubeLevel& lvl = cube.levels[v];
        for (size_t j = 0; j < lvl.orbits.size(); j++) {
            Chart c;
            size_t vt = base.objects[v].first;
            if (lvl.orbits[j].size() == t.object(vt).size()) {
                c.level = v;
                c.phi.resize(t.object(vt).size());
                for (size_t z : lvl.orbits[j]) c.phi[lvl.to_b[z]] = z;
            } else {
                int it = -1;
                for (size_t i = 0; i < t.n_objects() && it < 0; i++) {
                    if (t.object(i).size() != lvl.orbits[j].size()) continue;
                    for (auto& f : OrbitCat::enumerate_maps(t.object(i), *lvl.total)) {
                        bool inside = true;
                        for (size_t p : f) inside = inside && lvl.orbit_of[p] == j;
                        std::vector<bool> seen(lvl.total->size(), false);
                        for (size_t p : f) {
                            if (seen[p]) inside = false;
                            seen[p] = true;
                        }
                        if (inside) {
                            it = static_cast<int>(i);
                            c.phi = f;
                            break;
                        }
                    }
                }
                if (it < 0) throw std::logic_error("pullback orbit misses its orbit object");
                const auto& bv = t.point_map(base.objects[v].second);
                std::vector<size_t> sm(c.phi.size());
                for (size_t p = 0; p < c.phi.size(); p++) sm[p] = bv[lvl.to_b[c.phi[p]]];
                int found = -1;
                for (size_t b : t.cat().hom(static_cast<size_t>(it), cube.poset.over_obj))
                    if (t.point_map(b) == sm) {
                        for (size_t lv = 0; lv < base.objects.size(); lv++)
                            if (base.objects[lv] ==
                                std::make_pair(static_cast<size_t>(it), b))
                                found = static_cast<int>(lv);
                        break;
                    }
                if (found < 0) throw std::logic_error("orbit chart misses the slice");
                c.level = static_cast<size_t>(found);
            }
            c.phi_inv.assign(lvl.total->size(), -1);
            for (size_t p = 0; p < c.phi.size(); p++) c.phi_inv[c.phi[p]] = static_cast<int>(p);
            chart[v].push_back(std::move(c));
        }
    }

    auto shape = cube_shape(cube);
    const FinCat& k = shape->cat;

    // surviving summands/factors and the direct sums they span
    std::vector<std::vector<size_t>> asum(k.objects()), bfac(k.objects());
    std::vector<ChainComplex> aval(k.objects()), bval(k.objects());
    auto bpart = [&](size_t v, size_t j) -> const ChainComplex& {
        return x.at(chart[v][j].level);
    };
    for (size_t o = 0; o < k.objects(); o++) {
        auto [v, s] = shape->objects[o];
        ChainComplex sa, sb;
        for (size_t i = 0; i < lift[v].size(); i++)
            if (!(s >> graph_of[v][i] & 1)) {
                asum[o].push_back(i);
                sa = direct_sum_data(sa, x.at(v)).sum;
            }
        for (size_t j = 0; j < cube.levels[v].orbits.size(); j++)
            if (!(s >> j & 1)) {
                bfac[o].push_back(j);
                sb = direct_sum_data(sb, bpart(v, j)).sum;
            }
        aval[o] = std::move(sa);
        bval[o] = std::move(sb);
    }
    auto apos = [&](size_t o, size_t li) -> int {
        for (size_t p = 0; p < asum[o].size(); p++)
            if (asum[o][p] == li) return static_cast<int>(p);
        return -1;
    };
    auto boff = [&](size_t o, size_t j, int n) {
        size_t v = shape->objects[o].level, off = 0;
        for (size_t p = 0; p < bfac[o].size() && bfac[o][p] != j; p++)
            off += bpart(v, bfac[o][p]).dim(n);
        return off;
    };

    std::vector<ChainMap> amap(k.morphisms()), bmap(k.morphisms());
    for (size_t m = 0; m < k.morphisms(); m++) {
        size_t o = k.src(m), o2 = k.dst(m);
        size_t bm = shape->mor_base[m];
        auto [v, s] = shape->objects[o];
        auto [v2, s2] = shape->objects[o2];
        const auto& pm = t.point_map(base.mor_h[bm]);
        const CubeLevel& lvl = cube.levels[v];
        const CubeLevel& lvl2 = cube.levels[v2];

        // a surviving section precomposes; it dies if its orbit is collapsed
        ChainMap am = chain_map_zero(aval[o], aval[o2]);
        for (size_t pos = 0; pos < asum[o].size(); pos++) {
            const auto& l = lift[v][asum[o][pos]];
            std::vector<size_t> l2(pm.size());
            for (size_t p = 0; p < pm.size(); p++) l2[p] = l[pm[p]];
            size_t li2 = lift_ix[v2].at(l2);
            int pos2 = apos(o2, li2);
            if (pos2 < 0) continue;
            for (int n = kChainLo; n <= kChainHi; n++)
                am.at(n).set_block(static_cast<size_t>(pos2) * x.at(v2).dim(n),
                                   pos * x.at(v).dim(n), x.res(bm).at(n));
        }
        amap[m] = std::move(am);

        // each surviving factor pulls back from its image orbit through the
        // charts; the connecting slice morphism is the conjugated point map
        ChainMap bmm = chain_map_zero(bval[o], bval[o2]);
        const auto& oimg = cube.orbit_image[bm];
        for (size_t j2 : bfac[o2]) {
            size_t jj = oimg[j2];
            const Chart& c2 = chart[v2][j2];
            const Chart& cj = chart[v][jj];
            std::vector<size_t> psi(c2.phi.size());
            for (size_t p = 0; p < psi.size(); p++) {
                size_t z = lvl.find_point(pm[lvl2.to_b[c2.phi[p]]], lvl2.to_w[c2.phi[p]],
                                          cube.W->size());
                psi[p] = static_cast<size_t>(cj.phi_inv[z]);
            }
            size_t i2t = base.objects[c2.level].first;
            size_t ijt = base.objects[cj.level].first;
            int th = -1;
            for (size_t h : t.cat().hom(i2t, ijt))
                if (t.point_map(h) == psi) th = static_cast<int>(h);
            if (th < 0) throw std::logic_error("orbit charts are not equivariant");
            int mu = -1;
            for (size_t h : bc.hom(c2.level, cj.level))
                if (base.mor_h[h] == static_cast<size_t>(th)) mu = static_cast<int>(h);
            if (mu < 0) throw std::logic_error("chart comparison misses the slice");
            for (int n = kChainLo; n <= kChainHi; n++)
                bmm.at(n).set_block(boff(o2, j2, n), boff(o, jj, n),
                                    x.res(static_cast<size_t>(mu)).at(n));
        }
        bmap[m] = std::move(bmm);
    }

    AlphaBeta out;
    out.shape = shape;
    out.alpha = CubeCh::build(shape, std::move(aval), std::move(amap));
    out.beta = CubeCh::build(shape, std::move(bval), std::move(bmap));
    for (size_t o = 0; o < k.objects(); o++) {
        auto [v, s] = shape->objects[o];
        ChainMap nm = chain_map_zero(out.alpha.at(o), out.beta.at(o));
        for (size_t pos = 0; pos < asum[o].size(); pos++) {
            size_t j = graph_of[v][asum[o][pos]];
            for (int n = kChainLo; n <= kChainHi; n++)
                nm.at(n).set_block(boff(o, j, n), pos * x.at(v).dim(n),
                                   QMat::identity(x.at(v).dim(n)));
        }
        out.aleph.at.push_back(std::move(nm));
    }
    validate_cube_map(out.alpha, out.beta, out.aleph, "componentwise norm");
    for (size_t o = 0; o < k.objects(); o++)
        out.aleph_qis.push_back(is_qis(out.alpha.at(o), out.beta.at(o), out.aleph.at[o]));

    // fibrewise singleton checks: the collapse cube restricted to a level
    // must be left Kan extended from the empty mask and the single orbits,
    // the product cube right Kan extended from the top and the single gaps
    for (size_t v = 0; v < bc.objects(); v++) {
        size_t n_orb = cube.levels[v].orbits.size();
        const FinPoset& fp = cube.poset.fibre(v);
        size_t full = fp.size() - 1;
        size_t idv = bc.identity(v);
        std::vector<bool> row_co, row_ca;
        for (size_t s = 0; s < fp.size(); s++) {
            {
                std::vector<size_t> keep{0};
                for (size_t j = 0; j < n_orb; j++)
                    if (s >> j & 1) keep.push_back(size_t{1} << j);
                auto sub = std::make_shared<const FinPoset>(fp.induced(keep));
                std::vector<ChainComplex> vals;
                for (size_t p = 0; p < keep.size(); p++)
                    vals.push_back(out.alpha.at(shape->index(v, keep[p])));
                ChainDiagram::CoverMaps cm;
                for (auto& [a, b] : sub->covers())
                    cm[{a, b}] = out.alpha.map(
                        shape->edge(shape->index(v, keep[a]), shape->index(v, keep[b]), idv));
                ChainDiagram diag = ChainDiagram::build(sub, std::move(vals), cm);
                Totalization tt = hocolim(diag);
                std::vector<ChainMap> legs;
                for (size_t p = 0; p < keep.size(); p++)
                    legs.push_back(out.alpha.map(
                        shape->edge(shape->index(v, keep[p]), shape->index(v, s), idv)));
                ChainMap counit =
                    hocolim_out(tt, diag, out.alpha.at(shape->index(v, s)), legs);
                bool ok = is_qis(tt.total, out.alpha.at(shape->index(v, s)), counit);
                row_co.push_back(ok);
                out.alpha_cocartesian = out.alpha_cocartesian && ok;
            }
            {
                std::vector<size_t> keep;
                for (size_t j = 0; j < n_orb; j++)
                    if (!(s >> j & 1)) keep.push_back(full ^ (size_t{1} << j));
                keep.push_back(full);
                auto sub = std::make_shared<const FinPoset>(fp.induced(keep));
                std::vector<ChainComplex> vals;
                for (size_t p = 0; p < keep.size(); p++)
                    vals.push_back(out.beta.at(shape->index(v, keep[p])));
                ChainDiagram::CoverMaps cm;
                for (auto& [a, b] : sub->covers())
                    cm[{a, b}] = out.beta.map(
                        shape->edge(shape->index(v, keep[a]), shape->index(v, keep[b]), idv));
                ChainDiagram diag = ChainDiagram::build(sub, std::move(vals), cm);
                Cototalization ct = holim(diag);
                std::vector<ChainMap> legs;
                for (size_t p = 0; p < keep.size(); p++)
                    legs.push_back(out.beta.map(
                        shape->edge(shape->index(v, s), shape->index(v, keep[p]), idv)));
                ChainMap unit = holim_in(ct, diag, out.beta.at(shape->index(v, s)), legs);
                bool ok = is_qis(out.beta.at(shape->index(v, s)), ct.total, unit);
                row_ca.push_back(ok);
                out.beta_cartesian = out.beta_cartesian && ok;
            }
        }
        out.cocart.push_back(std::move(row_co));
        out.cart.push_back(std::move(row_ca));
    }
    return out;
}

} // namespace parex
