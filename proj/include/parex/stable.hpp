#pragma once

#include "parex/hocolim.hpp"

namespace parex {

inline bool complexes_equal(const ChainComplex& a, const ChainComplex& b) {
    for (int n = kChainLo; n <= kChainHi; n++)
        if (a.dim(n) != b.dim(n) || a.d(n) != b.d(n)) return false;
    return true;
}

// Degrees where the mapping cone of f carries homology; empty iff f is a
// quasi-isomorphism.
inline std::vector<int> qis_defect(const ChainComplex& x, const ChainComplex& y,
                                   const ChainMap& f) {
    HomologyData h = homology(mapping_cone(x, y, f));
    std::vector<int> out;
    for (int n = kChainLo; n <= kChainHi; n++)
        if (h.rank_at(n)) out.push_back(n);
    return out;
}

// An ordinary cube is a chain diagram over the subset lattice with element
// ids equal to bitmasks. Collapse onto the top vertex and descent from the
// bottom vertex are compared through their homology defects; the two
// verdicts always coincide because total cone and total fibre differ by a
// shift.
struct StableCubeReport {
    size_t n = 0;
    bool cocartesian = false;
    bool cartesian = false;
    bool agree = false;
    std::vector<int> cocart_defect; // homology degrees of the collapse cone
    std::vector<int> cart_defect;   // homology degrees of the descent cone
};

inline StableCubeReport stable_cube_check(const ChainDiagram& x) {
    const FinPoset& p = x.shape();
    size_t n = 0;
    while ((size_t{1} << n) < p.size()) n++;
    if (p.size() != size_t{1} << n)
        throw InputError("stable comparison requires a subset cube");
    if (n > 4) throw InputError("stable comparison caps the cube dimension at 4");
    for (size_t a = 0; a < p.size(); a++)
        for (size_t b = 0; b < p.size(); b++)
            if (p.leq(a, b) != ((a & ~b) == 0))
                throw InputError("stable comparison requires a subset cube");

    StableCubeReport rep;
    rep.n = n;
    size_t top = p.size() - 1;
    {
        std::vector<size_t> keep;
        for (size_t s = 0; s < top; s++) keep.push_back(s);
        ChainDiagram sub = x.restrict(keep);
        Totalization tt = hocolim(sub);
        std::vector<ChainMap> legs;
        for (size_t s : keep) legs.push_back(x.map(s, top));
        ChainMap cmp = hocolim_out(tt, sub, x.value(top), legs);
        rep.cocart_defect = qis_defect(tt.total, x.value(top), cmp);
        rep.cocartesian = rep.cocart_defect.empty();
    }
    {
        std::vector<size_t> keep;
        for (size_t s = 1; s <= top; s++) keep.push_back(s);
        ChainDiagram sub = x.restrict(keep);
        Cototalization ct = holim(sub);
        std::vector<ChainMap> legs;
        for (size_t s : keep) legs.push_back(x.map(0, s));
        ChainMap cmp = holim_in(ct, sub, x.value(0), legs);
        rep.cart_defect = qis_defect(x.value(0), ct.total, cmp);
        rep.cartesian = rep.cart_defect.empty();
    }
    rep.agree = rep.cocartesian == rep.cartesian;
    return rep;
}

// Two descent-complete cubes that agree away from the bottom vertex present
// the same bottom homotopy type, exhibited through the shared punctured
// limit.
struct GlueReport {
    bool match_away = false;
    bool f_cartesian = false;
    bool g_cartesian = false;
    bool equivalent = false;
};

inline GlueReport stable_glue_pair(const ChainDiagram& f, const ChainDiagram& g) {
    StableCubeReport rf = stable_cube_check(f);
    StableCubeReport rg = stable_cube_check(g);
    GlueReport rep;
    rep.f_cartesian = rf.cartesian;
    rep.g_cartesian = rg.cartesian;
    if (rf.n != rg.n) return rep;
    size_t sz = size_t{1} << rf.n;
    bool match = true;
    for (size_t s = 1; s < sz && match; s++) {
        match = complexes_equal(f.value(s), g.value(s));
        for (size_t s2 = s; s2 < sz && match; s2++)
            if ((s & ~s2) == 0) match = cm_is_zero(cm_sub(f.map(s, s2), g.map(s, s2)));
    }
    rep.match_away = match;
    if (!match || !rf.cartesian || !rg.cartesian) return rep;
    std::vector<size_t> keep;
    for (size_t s = 1; s < sz; s++) keep.push_back(s);
    ChainDiagram sub = f.restrict(keep);
    Cototalization ct = holim(sub);
    std::vector<ChainMap> uf, ug;
    for (size_t s : keep) {
        uf.push_back(f.map(0, s));
        ug.push_back(g.map(0, s));
    }
    ChainMap cf = holim_in(ct, sub, f.value(0), uf);
    ChainMap cg = holim_in(ct, sub, g.value(0), ug);
    rep.equivalent = is_qis(f.value(0), ct.total, cf) && is_qis(g.value(0), ct.total, cg);
    return rep;
}

} // namespace parex
