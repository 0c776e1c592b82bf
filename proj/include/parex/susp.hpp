#pragma once

#include "parex/coeff.hpp"
#include "parex/hocolim.hpp"
#include "parex/param.hpp"

namespace parex {

// diagram with x at the bottom face and zero elsewhere
inline ChainDiagram bottom_concentrated(std::shared_ptr<const FinPoset> shape,
                                        const ChainComplex& x) {
    if (shape->size() == 0) return ChainDiagram::build(shape, {}, {});
    int bot = shape->bottom();
    if (bot < 0) throw InputError("fibre lacks a bottom face");
    return ChainDiagram::concentrated(shape, static_cast<size_t>(bot), x);
}

// transport components between two concentrated diagrams: f at the bottom
inline std::vector<ChainMap> concentrated_comps(const ChainDiagram& ds, const ChainDiagram& dt,
                                                const std::vector<size_t>& g,
                                                const ChainMap& f) {
    std::vector<ChainMap> comp;
    for (size_t q = 0; q < ds.size(); q++) {
        if (static_cast<int>(q) == ds.shape().bottom())
            comp.push_back(f);
        else
            comp.push_back(chain_map_zero(ds.value(q), dt.value(g[q])));
    }
    return comp;
}

// Chains of the top-punctured fibres rooted at the empty face. The complex at
// a level is the suspension of the unit system there; its homology is the
// reduced cell structure of the equivariant sphere of w. The restriction maps
// are totalization transports along the fibre restrictions, which land in the
// punctured fibres because the underlying orbit maps are onto.
struct FibreChains {
    ChainDiagram diag;
    Totalization tot;
};

struct CubeChains {
    const ParamCube* cube = nullptr;
    ParamPoset tp; // fibres with the top face removed
    std::vector<FibreChains> at;
    ChainSystem chains; // values = fibre chains, restrictions = transports

    const FinCat& cat() const { return tp.base->cat; }
};

inline CubeChains cube_chains(const ParamCube& cube) {
    CubeChains cc;
    cc.cube = &cube;
    cc.tp = puncture(cube.poset, Puncture::top);
    const FinCat& c = cc.tp.base->cat;
    std::vector<ChainComplex> vals;
    for (size_t u = 0; u < c.objects(); u++) {
        FibreChains fc{bottom_concentrated(cc.tp.fibres[u], ChainComplex::sphere(0)), {}};
        fc.tot = hocolim(fc.diag);
        vals.push_back(fc.tot.total);
        cc.at.push_back(std::move(fc));
    }
    std::vector<ChainMap> tau;
    for (size_t m = 0; m < c.morphisms(); m++) {
        size_t a = c.src(m), b = c.dst(m);
        const auto& g = cc.tp.restriction[m].map;
        tau.push_back(hocolim_transport(
            cc.at[b].tot, cc.at[b].diag, cc.at[a].tot, cc.at[a].diag, g,
            concentrated_comps(cc.at[b].diag, cc.at[a].diag, g,
                               chain_map_identity(ChainComplex::sphere(0)))));
    }
    cc.chains = ChainSystem::build(&c, std::move(vals), std::move(tau));
    return cc;
}

// Suspension along w: at each level the totalization over the punctured fibre
// of the value concentrated at the empty face, restrictions transported along
// the fibre restriction maps. The value is X(u) tensored with the fibre
// chains, with the Koszul sign inherited from the one totalization convention.
struct SuspensionData {
    ChainSystem sys;
    std::vector<ChainDiagram> diag;
    std::vector<Totalization> tot;
};

inline SuspensionData suspension_w(const CubeChains& cc, const ChainSystem& x) {
    if (x.cat_ptr() != &cc.cat()) throw InputError("system lives over the wrong category");
    const FinCat& c = cc.cat();
    SuspensionData out;
    std::vector<ChainComplex> vals;
    for (size_t u = 0; u < c.objects(); u++) {
        out.diag.push_back(bottom_concentrated(cc.tp.fibres[u], x.at(u)));
        out.tot.push_back(hocolim(out.diag.back()));
        vals.push_back(out.tot.back().total);
    }
    std::vector<ChainMap> res;
    for (size_t m = 0; m < c.morphisms(); m++) {
        size_t a = c.src(m), b = c.dst(m);
        const auto& g = cc.tp.restriction[m].map;
        res.push_back(
            hocolim_transport(out.tot[b], out.diag[b], out.tot[a], out.diag[a], g,
                              concentrated_comps(out.diag[b], out.diag[a], g, x.res(m))));
    }
    out.sys = ChainSystem::build(&c, std::move(vals), std::move(res));
    return out;
}

// functorial action on maps: identity shape transport with f at the bottom
inline SystemMap suspend_map(const CubeChains& cc, const SystemMap& f, const SuspensionData& sx,
                             const SuspensionData& sy) {
    SystemMap out;
    for (size_t u = 0; u < cc.cat().objects(); u++) {
        std::vector<size_t> id(cc.tp.fibres[u]->size());
        for (size_t q = 0; q < id.size(); q++) id[q] = q;
        out.at.push_back(
            hocolim_transport(sx.tot[u], sx.diag[u], sy.tot[u], sy.diag[u], id,
                              concentrated_comps(sx.diag[u], sy.diag[u], id, f.at[u])));
    }
    return out;
}

// One block of the product complex at one degree: the component of
// Hom(chains(u), Z(u)) in fibre-chain degree k for the morphism hom[h].
struct PiBlock {
    size_t h;
    int k;
    size_t rows, cols;
    size_t offset;
};

struct LoopLevel {
    std::vector<size_t> hom;                  // morphisms with this level as target
    std::vector<std::vector<PiBlock>> blocks; // per degree
    std::vector<size_t> pi_dim;               // per degree
    std::vector<QMat> d_pi;                   // product differential
    std::vector<QMat> incl, retr;             // the end inside the product
    ChainComplex value;
};

struct LoopData {
    ChainSystem sys;
    std::vector<LoopLevel> levels;
};

inline const PiBlock* find_block(const LoopLevel& l, int n, size_t h, int k) {
    for (const PiBlock& b : l.blocks[chain_idx(n)])
        if (b.h == h && b.k == k) return &b;
    return nullptr;
}

inline size_t hom_position(const LoopLevel& l, size_t mor) {
    for (size_t i = 0; i < l.hom.size(); i++)
        if (l.hom[i] == mor) return i;
    throw std::logic_error("loop level misses a morphism");
}

// Loop functor as the exact right adjoint of the suspension. The value at a
// level is the end of Hom(chains(u), Z(u)) over the morphisms u -> a: the
// subcomplex of the product cut out by
//   psi_{h o m} o tau_m  =  Z(m) o psi_h        for every m : u' -> u,
// where tau is the fibre-chain transport. Restrictions reindex the product,
// so they are strictly functorial; this is the rectification choice, and the
// adjunction below holds with strict triangle identities.
inline LoopData loop_w(const CubeChains& cc, const ChainSystem& z) {
    if (z.cat_ptr() != &cc.cat()) throw InputError("system lives over the wrong category");
    const FinCat& c = cc.cat();
    LoopData out;
    out.levels.resize(c.objects());
    std::vector<ChainComplex> vals(c.objects());

    for (size_t a = 0; a < c.objects(); a++) {
        LoopLevel& l = out.levels[a];
        for (size_t m = 0; m < c.morphisms(); m++)
            if (c.dst(m) == a) l.hom.push_back(m);

        for (size_t hp = 0; hp < l.hom.size(); hp++) {
            size_t u = c.src(l.hom[hp]);
            const ChainComplex& fc = cc.chains.at(u);
            for (int k = kChainLo; k <= kChainHi; k++) {
                if (!fc.dim(k)) continue;
                for (int zd = kChainLo; zd <= kChainHi; zd++)
                    if (z.at(u).dim(zd) && !chain_degree_ok(zd - k))
                        throw InputError("loop construction leaves the bounded degree window");
            }
        }

        l.blocks.assign(kChainDegrees, {});
        l.pi_dim.assign(kChainDegrees, 0);
        for (int n = kChainLo; n <= kChainHi; n++) {
            size_t off = 0;
            for (size_t hp = 0; hp < l.hom.size(); hp++) {
                size_t u = c.src(l.hom[hp]);
                const ChainComplex& fc = cc.chains.at(u);
                for (int k = kChainLo; k <= kChainHi; k++) {
                    if (!fc.dim(k)) continue;
                    size_t rows = z.at(u).dim(k + n);
                    l.blocks[chain_idx(n)].push_back({hp, k, rows, fc.dim(k), off});
                    off += rows * fc.dim(k);
                }
            }
            l.pi_dim[chain_idx(n)] = off;
        }

        // product differential: post-compose with d_Z, pre-compose with the
        // fibre-chain differential, Hom-complex sign -(-1)^n on the latter
        l.d_pi.assign(kChainDegrees, QMat(0, 0));
        for (int n = kChainLo + 1; n <= kChainHi; n++) {
            QMat dm(l.pi_dim[chain_idx(n - 1)], l.pi_dim[chain_idx(n)]);
            Rational s = (n % 2 == 0) ? -1 : 1;
            for (const PiBlock& b : l.blocks[chain_idx(n)]) {
                if (b.rows == 0 || b.cols == 0) continue;
                size_t u = c.src(l.hom[b.h]);
                const PiBlock* o1 = find_block(l, n - 1, b.h, b.k);
                if (o1 && o1->rows) {
                    QMat dz = z.at(u).d(b.k + n);
                    for (size_t i2 = 0; i2 < o1->rows; i2++)
                        for (size_t i = 0; i < b.rows; i++) {
                            if (dz(i2, i) == 0) continue;
                            for (size_t j = 0; j < b.cols; j++)
                                dm(o1->offset + i2 * o1->cols + j,
                                   b.offset + i * b.cols + j) += dz(i2, i);
                        }
                }
                const PiBlock* o2 = find_block(l, n - 1, b.h, b.k + 1);
                if (o2 && o2->rows && o2->cols) {
                    QMat dc = cc.chains.at(u).d(b.k + 1);
                    for (size_t j = 0; j < b.cols; j++)
                        for (size_t j2 = 0; j2 < o2->cols; j2++) {
                            if (dc(j, j2) == 0) continue;
                            for (size_t i = 0; i < b.rows; i++)
                                dm(o2->offset + i * o2->cols + j2,
                                   b.offset + i * b.cols + j) += s * dc(j, j2);
                        }
                }
            }
            l.d_pi[chain_idx(n)] = std::move(dm);
        }

        // the end conditions, one row block per (m, h, k)
        l.incl.assign(kChainDegrees, QMat(0, 0));
        l.retr.assign(kChainDegrees, QMat(0, 0));
        std::map<int, size_t> edims;
        std::map<int, QMat> edd;
        for (int n = kChainLo; n <= kChainHi; n++) {
            struct CondRow {
                size_t m, hp;
                int k;
                size_t zrows, ccols, off;
            };
            std::vector<CondRow> rws;
            size_t rows = 0;
            for (size_t m = 0; m < c.morphisms(); m++) {
                if (m == c.identity(c.src(m))) continue;
                size_t u2 = c.src(m), u = c.dst(m);
                for (size_t hp = 0; hp < l.hom.size(); hp++) {
                    if (c.src(l.hom[hp]) != u) continue;
                    const ChainComplex& fc = cc.chains.at(u);
                    for (int k = kChainLo; k <= kChainHi; k++) {
                        if (!fc.dim(k)) continue;
                        size_t zr = z.at(u2).dim(k + n);
                        if (!zr) continue;
                        rws.push_back({m, hp, k, zr, fc.dim(k), rows});
                        rows += zr * fc.dim(k);
                    }
                }
            }
            QMat chi(rows, l.pi_dim[chain_idx(n)]);
            for (const CondRow& r : rws) {
                size_t hp2 = hom_position(l, c.compose(l.hom[r.hp], r.m));
                const QMat& tau = cc.chains.res(r.m).at(r.k);
                const QMat& zm = z.res(r.m).at(r.k + n);
                const PiBlock* bh = find_block(l, n, r.hp, r.k);
                const PiBlock* bc = find_block(l, n, hp2, r.k);
                for (size_t ip = 0; ip < r.zrows; ip++)
                    for (size_t j = 0; j < r.ccols; j++) {
                        size_t row = r.off + ip * r.ccols + j;
                        if (bc && bc->rows)
                            for (size_t jp = 0; jp < bc->cols; jp++)
                                if (tau(jp, j) != 0)
                                    chi(row, bc->offset + ip * bc->cols + jp) += tau(jp, j);
                        if (bh && bh->rows)
                            for (size_t i = 0; i < bh->rows; i++)
                                if (zm(ip, i) != 0)
                                    chi(row, bh->offset + i * bh->cols + j) -= zm(ip, i);
                    }
            }
            KernelData kd = kernel_with_retraction(chi);
            l.incl[chain_idx(n)] = kd.incl;
            l.retr[chain_idx(n)] = kd.retr;
            if (kd.incl.cols()) edims[n] = kd.incl.cols();
        }
        for (int n = kChainLo + 1; n <= kChainHi; n++) {
            QMat de = l.retr[chain_idx(n - 1)] * (l.d_pi[chain_idx(n)] * l.incl[chain_idx(n)]);
            if (!(l.incl[chain_idx(n - 1)] * de == l.d_pi[chain_idx(n)] * l.incl[chain_idx(n)]))
                throw std::logic_error("end is not a subcomplex");
            if (de.rows() && de.cols()) edd[n] = de;
        }
        l.value = ChainComplex::build(edims, edd);
        vals[a] = l.value;
    }

    // restriction along m : a' -> a reindexes psi_h to psi_{m o h}
    std::vector<ChainMap> res;
    for (size_t m = 0; m < c.morphisms(); m++) {
        size_t a2 = c.src(m), a = c.dst(m);
        const LoopLevel& ls = out.levels[a];
        const LoopLevel& lt = out.levels[a2];
        ChainMap f = chain_map_zero(vals[a], vals[a2]);
        for (int n = kChainLo; n <= kChainHi; n++) {
            QMat r(lt.pi_dim[chain_idx(n)], ls.pi_dim[chain_idx(n)]);
            for (const PiBlock& b : lt.blocks[chain_idx(n)]) {
                if (b.rows == 0 || b.cols == 0) continue;
                const PiBlock* src = find_block(ls, n, hom_position(ls, c.compose(m, lt.hom[b.h])),
                                                b.k);
                if (!src || src->rows != b.rows || src->cols != b.cols)
                    throw std::logic_error("loop reindexing misses a block");
                for (size_t t = 0; t < b.rows * b.cols; t++)
                    r(b.offset + t, src->offset + t) = 1;
            }
            f.at(n) = lt.retr[chain_idx(n)] * (r * ls.incl[chain_idx(n)]);
            if (!(lt.incl[chain_idx(n)] * f.at(n)  == r * ls.incl[chain_idx(n)]))
                throw std::logic_error("loop reindexing leaves the end");
        }
        res.push_back(std::move(f));
    }
    out.sys = ChainSystem::build(&c, std::move(vals), std::move(res));
    return out;
}

// functorial action on maps: post-compose every product component
inline SystemMap loop_map(const CubeChains& cc, const SystemMap& f, const LoopData& ls,
                          const LoopData& lt) {
    const FinCat& c = cc.cat();
    SystemMap out;
    for (size_t a = 0; a < c.objects(); a++) {
        const LoopLevel& s = ls.levels[a];
        const LoopLevel& t = lt.levels[a];
        ChainMap g = chain_map_zero(ls.sys.at(a), lt.sys.at(a));
        for (int n = kChainLo; n <= kChainHi; n++) {
            QMat r(t.pi_dim[chain_idx(n)], s.pi_dim[chain_idx(n)]);
            for (const PiBlock& b : s.blocks[chain_idx(n)]) {
                if (b.rows == 0 || b.cols == 0) continue;
                const PiBlock* b2 = find_block(t, n, b.h, b.k);
                if (!b2 || b2->rows == 0) continue;
                size_t u = c.src(s.hom[b.h]);
                const QMat& fu = f.at[u].at(b.k + n);
                for (size_t i2 = 0; i2 < b2->rows; i2++)
                    for (size_t i = 0; i < b.rows; i++) {
                        if (fu(i2, i) == 0) continue;
                        for (size_t j = 0; j < b.cols; j++)
                            r(b2->offset + i2 * b2->cols + j, b.offset + i * b.cols + j) +=
                                fu(i2, i);
                    }
            }
            g.at(n) = t.retr[chain_idx(n)] * (r * s.incl[chain_idx(n)]);
            if (!(t.incl[chain_idx(n)] * g.at(n) == r * s.incl[chain_idx(n)]))
                throw std::logic_error("loop action leaves the end");
        }
        out.at.push_back(std::move(g));
    }
    return out;
}

// unit X -> loop(susp X): x goes to the family h |-> (c |-> (X(h)x ; c))
inline SystemMap unit_map(const CubeChains& cc, const ChainSystem& x, const SuspensionData& sx,
                          const LoopData& lsx) {
    const FinCat& c = cc.cat();
    SystemMap out;
    for (size_t a = 0; a < c.objects(); a++) {
        const LoopLevel& l = lsx.levels[a];
        ChainMap eta = chain_map_zero(x.at(a), lsx.sys.at(a));
        for (int n = kChainLo; n <= kChainHi; n++) {
            if (x.at(a).dim(n) == 0) continue;
            QMat pi(l.pi_dim[chain_idx(n)], x.at(a).dim(n));
            for (const PiBlock& b : l.blocks[chain_idx(n)]) {
                if (b.rows == 0 || b.cols == 0) continue;
                size_t hmor = l.hom[b.h];
                size_t u = c.src(hmor);
                const QMat& xh = x.res(hmor).at(n);
                for (size_t ci = 0; ci < cc.at[u].tot.chains.size(); ci++) {
                    if (cc.at[u].tot.block_dim(b.k, ci) == 0) continue;
                    size_t j = cc.at[u].tot.offset(b.k, ci);
                    size_t row0 = sx.tot[u].offset(n + b.k, ci);
                    for (size_t i = 0; i < x.at(u).dim(n); i++)
                        for (size_t col = 0; col < x.at(a).dim(n); col++)
                            if (xh(i, col) != 0)
                                pi(b.offset + (row0 + i) * b.cols + j, col) = xh(i, col);
                }
            }
            eta.at(n) = l.retr[chain_idx(n)] * pi;
            if (!(l.incl[chain_idx(n)] * eta.at(n) == pi))
                throw std::logic_error("unit leaves the end");
        }
        out.at.push_back(std::move(eta));
    }
    validate_system_map(x, lsx.sys, out, "suspension unit");
    return out;
}

// counit susp(loop Z) -> Z: (psi ; c) evaluates the identity component at c
inline SystemMap counit_map(const CubeChains& cc, const ChainSystem& z, const LoopData& lz,
                            const SuspensionData& slz) {
    const FinCat& c = cc.cat();
    SystemMap out;
    for (size_t a = 0; a < c.objects(); a++) {
        const LoopLevel& l = lz.levels[a];
        size_t idpos = hom_position(l, c.identity(a));
        ChainMap eps = chain_map_zero(slz.sys.at(a), z.at(a));
        for (int n = kChainLo; n <= kChainHi; n++) {
            if (z.at(a).dim(n) == 0) continue;
            for (size_t ci = 0; ci < cc.at[a].tot.chains.size(); ci++) {
                int k = static_cast<int>(cc.at[a].tot.chains[ci].size()) - 1;
                if (!chain_degree_ok(k) || cc.at[a].tot.block_dim(k, ci) == 0) continue;
                size_t jc = cc.at[a].tot.offset(k, ci);
                int m2 = n - k;
                if (!chain_degree_ok(m2) || lz.sys.at(a).dim(m2) == 0) continue;
                const PiBlock* b = find_block(l, m2, idpos, k);
                if (!b || b->rows == 0) continue;
                size_t col0 = slz.tot[a].offset(n, ci);
                const QMat& incl = l.incl[chain_idx(m2)];
                for (size_t s = 0; s < lz.sys.at(a).dim(m2); s++)
                    for (size_t i = 0; i < z.at(a).dim(n); i++)
                        eps.at(n)(i, col0 + s) = incl(b->offset + i * b->cols + jc, s);
            }
        }
        out.at.push_back(std::move(eps));
    }
    validate_system_map(slz.sys, z, out, "suspension counit");
    return out;
}

// suspension, loop of the suspension, and the unit, bundled for probes
struct UnitData {
    SuspensionData susp;
    LoopData loop;
    SystemMap unit;
};

inline UnitData suspension_loop_unit(const CubeChains& cc, const ChainSystem& x) {
    UnitData u{suspension_w(cc, x), {}, {}};
    u.loop = loop_w(cc, u.susp.sys);
    u.unit = unit_map(cc, x, u.susp, u.loop);
    return u;
}

// Sphere dimensions: orbit count of the pullback minus one, per level. Levels
// with empty fibres have no sphere and are rejected.
struct SphereDims {
    std::vector<size_t> at;
};

inline SphereDims sphere_dims(const ParamCube& cube) {
    SphereDims s;
    for (const CubeLevel& lvl : cube.levels) {
        if (lvl.orbits.empty()) throw InputError("sphere dimension needs a nonempty fibre");
        s.at.push_back(lvl.orbits.size() - 1);
    }
    return s;
}

// Chain-level certificate: levelwise, the suspension of the unit system has a
// single rank-one homology class in the stated degree.
struct SphereCert {
    SphereDims dims;
    std::vector<size_t> total_rank;
    std::vector<size_t> rank_at_dim;
    bool certified = true;
};

inline SphereCert certify_sphere_dims(const CubeChains& cc) {
    SphereCert out{sphere_dims(*cc.cube), {}, {}, true};
    for (size_t u = 0; u < cc.cat().objects(); u++) {
        HomologyData h = homology(cc.chains.at(u));
        out.total_rank.push_back(h.total_rank());
        out.rank_at_dim.push_back(h.rank_at(static_cast<int>(out.dims.at[u])));
        if (out.total_rank.back() != 1 || out.rank_at_dim.back() != 1) out.certified = false;
    }
    return out;
}

// W disjoint-union V over V: the original map on the left, the identity on
// the right; adds one orbit to every pullback.
inline std::pair<std::shared_ptr<const GSet>, std::vector<size_t>> plus_data(
    const GSet& v, const GSet& w_source, const std::vector<size_t>& w_map) {
    auto du = disjoint_union(w_source, v);
    std::vector<size_t> map(du.total.size());
    for (size_t p = 0; p < w_source.size(); p++) map[du.from_left[p]] = w_map[p];
    for (size_t q = 0; q < v.size(); q++) map[du.from_right[q]] = q;
    return {std::make_shared<const GSet>(std::move(du.total)), std::move(map)};
}

// The three sphere-calculus identities, levelwise, as exact integers:
//   dim S^{w+}     = dim S^w + 1
//   dim S^{u ⊔ w}  = dim S^{u+} + dim S^w
//   dim S^{w+}     = orbit count of the pullback (the smash with the circle)
// with the orbit counts recomputed from fresh pullbacks.
struct SphereCalculusReport {
    std::vector<size_t> u_dims, w_dims, u_plus_dims, w_plus_dims, join_dims, orbit_counts;
    bool plus_ok = true, join_ok = true, tensor_ok = true;

    bool ok() const { return plus_ok && join_ok && tensor_ok; }
};

inline SphereCalculusReport sphere_calculus_check(const OrbitCat& t, size_t v,
                                                  const GSet& usrc,
                                                  const std::vector<size_t>& umap,
                                                  const GSet& wsrc,
                                                  const std::vector<size_t>& wmap) {
    auto slice = build_slice(t, v);
    const GSet& vset = t.object(v);
    auto mk = [&](std::shared_ptr<const GSet> s, std::vector<size_t> m) {
        return build_cube(t, v, std::move(s), std::move(m), slice);
    };
    ParamCube cu = mk(std::make_shared<const GSet>(usrc), umap);
    ParamCube cw = mk(std::make_shared<const GSet>(wsrc), wmap);
    auto [ups, upm] = plus_data(vset, usrc, umap);
    auto [wps, wpm] = plus_data(vset, wsrc, wmap);
    ParamCube cup = mk(ups, upm);
    ParamCube cwp = mk(wps, wpm);
    auto ju = disjoint_union(usrc, wsrc);
    std::vector<size_t> jmap(ju.total.size());
    for (size_t p = 0; p < usrc.size(); p++) jmap[ju.from_left[p]] = umap[p];
    for (size_t p = 0; p < wsrc.size(); p++) jmap[ju.from_right[p]] = wmap[p];
    ParamCube cj = mk(std::make_shared<const GSet>(std::move(ju.total)), std::move(jmap));

    SphereCalculusReport r;
    r.u_dims = sphere_dims(cu).at;
    r.w_dims = sphere_dims(cw).at;
    r.u_plus_dims = sphere_dims(cup).at;
    r.w_plus_dims = sphere_dims(cwp).at;
    r.join_dims = sphere_dims(cj).at;
    GMap w{&wsrc, &vset, wmap};
    for (size_t o = 0; o < slice->objects.size(); o++) {
        GMap b = t.gmap(slice->objects[o].second);
        r.orbit_counts.push_back(pullback(b, w).total.orbits().size());
    }
    for (size_t o = 0; o < slice->objects.size(); o++) {
        if (r.w_plus_dims[o] != r.w_dims[o] + 1 || r.u_plus_dims[o] != r.u_dims[o] + 1)
            r.plus_ok = false;
        if (r.join_dims[o] != r.u_plus_dims[o] + r.w_dims[o]) r.join_ok = false;
        if (r.w_plus_dims[o] != r.orbit_counts[o]) r.tensor_ok = false;
    }
    return r;
}

// Seeded search for a system whose suspension-loop unit fails to be a
// quasi-isomorphism at some level. The witness is reported through the
// sub-seed that regenerates it, never stored out-of-band.
struct ProbeLevel {
    size_t level = 0;
    bool qis = true;
    std::vector<size_t> source_rank, target_rank; // homology ranks per degree
};

struct ProbeReport {
    uint64_t seed = 0;
    size_t max_total_dim = 0;
    size_t attempts = 0;
    bool found = false;
    uint64_t witness_seed = 0;
    std::optional<ChainSystem> witness;
    std::vector<ProbeLevel> table; // for the witness, or the last attempt
};

inline ProbeReport faithfulness_probe(const CubeChains& cc, uint64_t seed,
                                      size_t max_total_dim = 6, size_t max_attempts = 64) {
    ProbeReport r;
    r.seed = seed;
    r.max_total_dim = max_total_dim;
    for (size_t i = 0; i < max_attempts; i++) {
        uint64_t sub = Rng::sub_seed(seed, "attempt " + std::to_string(i));
        Rng rng(sub);
        ChainSystem x = random_system(rng, &cc.cat(), max_total_dim);
        r.attempts = i + 1;
        if (x.total_dim() == 0) continue;
        UnitData ud = suspension_loop_unit(cc, x);
        std::vector<ProbeLevel> table;
        bool fails = false;
        for (size_t u = 0; u < cc.cat().objects(); u++) {
            ProbeLevel pl{u, is_qis(x.at(u), ud.loop.sys.at(u), ud.unit.at[u]), {}, {}};
            pl.source_rank = homology(x.at(u)).rank;
            pl.target_rank = homology(ud.loop.sys.at(u)).rank;
            if (!pl.qis) fails = true;
            table.push_back(std::move(pl));
        }
        r.table = std::move(table);
        if (fails) {
            r.found = true;
            r.witness_seed = sub;
            r.witness = std::move(x);
            return r;
        }
    }
    return r;
}

} // namespace parex
