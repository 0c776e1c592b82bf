#pragma once

#include "parex/chain.hpp"
#include "parex/fincat.hpp"
#include "parex/rng.hpp"

namespace parex {

// Contravariant functor from a finite category to bounded chain complexes:
// res(m) : at(dst m) -> at(src m). Identity and composition laws hold as
// exact matrix identities, checked on construction.
class ChainSystem {
public:
    ChainSystem() = default;

    static ChainSystem build(const FinCat* cat, std::vector<ChainComplex> at,
                             std::vector<ChainMap> res) {
        ChainSystem s;
        s.cat_ = cat;
        s.at_ = std::move(at);
        s.res_ = std::move(res);
        const FinCat& c = *cat;
        if (s.at_.size() != c.objects() || s.res_.size() != c.morphisms())
            throw InputError("chain system tables have wrong size");
        for (size_t m = 0; m < c.morphisms(); m++)
            validate_chain_map(s.at_[c.dst(m)], s.at_[c.src(m)], s.res_[m],
                               "system restriction");
        for (size_t o = 0; o < c.objects(); o++)
            if (!cm_is_zero(cm_sub(s.res_[c.identity(o)], chain_map_identity(s.at_[o]))))
                throw InputError("identity restriction is not the identity");
        for (size_t m1 = 0; m1 < c.morphisms(); m1++)
            for (size_t m2 = 0; m2 < c.morphisms(); m2++) {
                if (c.dst(m1) != c.src(m2)) continue;
                if (!cm_is_zero(cm_sub(s.res_[c.compose(m2, m1)],
                                       compose(s.res_[m1], s.res_[m2]))))
                    throw InputError("system restrictions are not functorial");
            }
        return s;
    }

    const FinCat& cat() const { return *cat_; }
    const FinCat* cat_ptr() const { return cat_; }
    const ChainComplex& at(size_t o) const { return at_[o]; }
    const ChainMap& res(size_t m) const { return res_[m]; }

    size_t total_dim() const {
        size_t t = 0;
        for (const auto& x : at_) t += x.total_dim();
        return t;
    }

private:
    const FinCat* cat_ = nullptr;
    std::vector<ChainComplex> at_;
    std::vector<ChainMap> res_;
};

inline bool systems_equal(const ChainSystem& a, const ChainSystem& b) {
    if (a.cat_ptr() != b.cat_ptr()) return false;
    for (size_t o = 0; o < a.cat().objects(); o++)
        if (!(a.at(o) == b.at(o))) return false;
    for (size_t m = 0; m < a.cat().morphisms(); m++)
        if (!cm_is_zero(cm_sub(a.res(m), b.res(m)))) return false;
    return true;
}

inline ChainSystem system_zero(const FinCat* cat) {
    std::vector<ChainComplex> at(cat->objects());
    std::vector<ChainMap> res;
    for (size_t m = 0; m < cat->morphisms(); m++)
        res.push_back(chain_map_zero(at[cat->dst(m)], at[cat->src(m)]));
    return ChainSystem::build(cat, std::move(at), std::move(res));
}

inline ChainSystem constant_system(const FinCat* cat, const ChainComplex& x) {
    std::vector<ChainComplex> at(cat->objects(), x);
    std::vector<ChainMap> res(cat->morphisms(), chain_map_identity(x));
    return ChainSystem::build(cat, std::move(at), std::move(res));
}

// P_o tensor x: the value at b is one copy of x per morphism b -> o and
// restrictions permute the copies by precomposition, so functoriality is
// inherited from the category.
inline ChainSystem representable_system(const FinCat* cat, size_t o, const ChainComplex& x) {
    const FinCat& c = *cat;
    if (o >= c.objects()) throw InputError("representable object is out of range");
    std::vector<std::vector<size_t>> homs(c.objects());
    std::vector<ChainComplex> at;
    for (size_t b = 0; b < c.objects(); b++) {
        homs[b] = c.hom(b, o);
        std::map<int, size_t> dims;
        std::map<int, QMat> dd;
        for (int n = kChainLo; n <= kChainHi; n++) {
            size_t k = homs[b].size() * x.dim(n);
            if (k) dims[n] = k;
            if (n > kChainLo && k && homs[b].size() * x.dim(n - 1)) {
                QMat m(homs[b].size() * x.dim(n - 1), k);
                for (size_t i = 0; i < homs[b].size(); i++)
                    m.set_block(i * x.dim(n - 1), i * x.dim(n), x.d(n));
                dd[n] = std::move(m);
            }
        }
        at.push_back(ChainComplex::build(dims, dd));
    }
    auto pos = [&](size_t b, size_t h) {
        for (size_t i = 0; i < homs[b].size(); i++)
            if (homs[b][i] == h) return i;
        throw std::logic_error("representable misses a morphism");
    };
    std::vector<ChainMap> res;
    for (size_t m = 0; m < c.morphisms(); m++) {
        size_t a = c.src(m), b = c.dst(m);
        ChainMap f = chain_map_zero(at[b], at[a]);
        for (size_t i = 0; i < homs[b].size(); i++) {
            size_t j = pos(a, c.compose(homs[b][i], m));
            for (int n = kChainLo; n <= kChainHi; n++)
                for (size_t t = 0; t < x.dim(n); t++)
                    f.at(n)(j * x.dim(n) + t, i * x.dim(n) + t) = 1;
        }
        res.push_back(std::move(f));
    }
    return ChainSystem::build(cat, std::move(at), std::move(res));
}

inline ChainMap shift_chain_map(const ChainMap& f, int k) {
    ChainMap g;
    for (int n = kChainLo; n <= kChainHi; n++)
        g.at(n) = chain_degree_ok(n - k) ? f.at(n - k) : QMat(0, 0);
    return g;
}

inline ChainSystem system_shift(const ChainSystem& s, int k) {
    std::vector<ChainComplex> at;
    for (size_t o = 0; o < s.cat().objects(); o++) at.push_back(s.at(o).shifted(k));
    std::vector<ChainMap> res;
    for (size_t m = 0; m < s.cat().morphisms(); m++) res.push_back(shift_chain_map(s.res(m), k));
    return ChainSystem::build(s.cat_ptr(), std::move(at), std::move(res));
}

// Levelwise chain map commuting with the restrictions.
struct SystemMap {
    std::vector<ChainMap> at;
};

inline void validate_system_map(const ChainSystem& s, const ChainSystem& t,
                                const SystemMap& f, const char* what) {
    const FinCat& c = s.cat();
    if (s.cat_ptr() != t.cat_ptr()) throw InputError("system map across categories");
    if (f.at.size() != c.objects()) throw InputError("system map has wrong arity");
    for (size_t o = 0; o < c.objects(); o++)
        validate_chain_map(s.at(o), t.at(o), f.at[o], what);
    for (size_t m = 0; m < c.morphisms(); m++)
        if (!cm_is_zero(cm_sub(compose(f.at[c.src(m)], s.res(m)),
                               compose(t.res(m), f.at[c.dst(m)]))))
            throw InputError("system map is not natural");
}

inline SystemMap system_map_zero(const ChainSystem& s, const ChainSystem& t) {
    SystemMap f;
    for (size_t o = 0; o < s.cat().objects(); o++)
        f.at.push_back(chain_map_zero(s.at(o), t.at(o)));
    return f;
}

inline SystemMap system_map_identity(const ChainSystem& s) {
    SystemMap f;
    for (size_t o = 0; o < s.cat().objects(); o++)
        f.at.push_back(chain_map_identity(s.at(o)));
    return f;
}

inline SystemMap compose(const SystemMap& g, const SystemMap& f) {
    SystemMap h;
    for (size_t o = 0; o < f.at.size(); o++) h.at.push_back(compose(g.at[o], f.at[o]));
    return h;
}

inline std::vector<bool> qis_levels(const ChainSystem& s, const ChainSystem& t,
                                    const SystemMap& f) {
    std::vector<bool> out;
    for (size_t o = 0; o < s.cat().objects(); o++)
        out.push_back(is_qis(s.at(o), t.at(o), f.at[o]));
    return out;
}

inline bool system_map_is_qis(const ChainSystem& s, const ChainSystem& t, const SystemMap& f) {
    for (bool b : qis_levels(s, t, f))
        if (!b) return false;
    return true;
}

// Cone of a natural map, with the blockwise restrictions; naturality of f is
// exactly what makes those chain maps.
inline ChainSystem system_cone(const ChainSystem& s, const ChainSystem& t, const SystemMap& f) {
    validate_system_map(s, t, f, "cone input");
    std::vector<ChainComplex> at;
    for (size_t o = 0; o < s.cat().objects(); o++)
        at.push_back(mapping_cone(s.at(o), t.at(o), f.at[o]));
    std::vector<ChainMap> res;
    for (size_t m = 0; m < s.cat().morphisms(); m++) {
        ChainMap r;
        for (int n = kChainLo; n <= kChainHi; n++) {
            QMat lo = n > kChainLo ? s.res(m).at(n - 1) : QMat(0, 0);
            r.at(n) = QMat::block_diag(lo, t.res(m).at(n));
        }
        res.push_back(std::move(r));
    }
    return ChainSystem::build(s.cat_ptr(), std::move(at), std::move(res));
}

struct SystemSumData {
    ChainSystem sum;
    SystemMap in1, in2, pr1, pr2;
};

inline SystemSumData direct_sum_system(const ChainSystem& a, const ChainSystem& b) {
    SystemSumData out;
    std::vector<ChainComplex> at;
    std::vector<SumData> sums;
    for (size_t o = 0; o < a.cat().objects(); o++) {
        sums.push_back(direct_sum_data(a.at(o), b.at(o)));
        at.push_back(sums.back().sum);
    }
    std::vector<ChainMap> res;
    for (size_t m = 0; m < a.cat().morphisms(); m++) {
        ChainMap r;
        for (int n = kChainLo; n <= kChainHi; n++)
            r.at(n) = QMat::block_diag(a.res(m).at(n), b.res(m).at(n));
        res.push_back(std::move(r));
    }
    out.sum = ChainSystem::build(a.cat_ptr(), std::move(at), std::move(res));
    for (auto& s : sums) {
        out.in1.at.push_back(s.in1);
        out.in2.at.push_back(s.in2);
        out.pr1.at.push_back(s.pr1);
        out.pr2.at.push_back(s.pr2);
    }
    return out;
}

// Random element of the space of natural chain maps s -> t. The chain-map and
// naturality constraints are linear in the components, so the whole space is
// one exact kernel computation.
inline SystemMap random_natural_map(Rng& rng, const ChainSystem& s, const ChainSystem& t) {
    const FinCat& c = s.cat();
    MatEqSystem sys;
    std::vector<std::vector<size_t>> fam(c.objects(), std::vector<size_t>(kChainDegrees));
    for (size_t o = 0; o < c.objects(); o++)
        for (int n = kChainLo; n <= kChainHi; n++)
            fam[o][chain_idx(n)] = sys.unknown(t.at(o).dim(n), s.at(o).dim(n));
    for (size_t o = 0; o < c.objects(); o++)
        for (int n = kChainLo + 1; n <= kChainHi; n++)
            sys.equation({{t.at(o).d(n), fam[o][chain_idx(n)], QMat::identity(s.at(o).dim(n))},
                          {-QMat::identity(t.at(o).dim(n - 1)), fam[o][chain_idx(n - 1)],
                           s.at(o).d(n)}},
                         QMat(t.at(o).dim(n - 1), s.at(o).dim(n)));
    for (size_t m = 0; m < c.morphisms(); m++) {
        size_t a = c.src(m), b = c.dst(m);
        if (m == c.identity(a)) continue;
        for (int n = kChainLo; n <= kChainHi; n++)
            sys.equation({{QMat::identity(t.at(a).dim(n)), fam[a][chain_idx(n)],
                           s.res(m).at(n)},
                          {-t.res(m).at(n), fam[b][chain_idx(n)],
                           QMat::identity(s.at(b).dim(n))}},
                         QMat(t.at(a).dim(n), s.at(b).dim(n)));
    }
    SystemMap f = system_map_zero(s, t);
    for (const auto& basis : sys.kernel()) {
        Rational w = rng.small_rational();
        if (w == 0) continue;
        for (size_t o = 0; o < c.objects(); o++)
            for (int n = kChainLo; n <= kChainHi; n++)
                f.at[o].at(n) = f.at[o].at(n) + basis[fam[o][chain_idx(n)]].scaled(w);
    }
    validate_system_map(s, t, f, "random natural map");
    return f;
}

// Random system assembled from representables, shifts and cones of random
// natural maps; every step preserves strict functoriality.
inline ChainSystem random_system(Rng& rng, const FinCat* cat, size_t total_cap, int lo = -1,
                                 int hi = 2) {
    for (int attempt = 0; attempt < 16; attempt++) {
        auto piece = [&]() {
            ChainComplex x = random_complex(rng, lo, hi, 2, 3);
            if (rng.chance(0.5)) return constant_system(cat, x);
            return representable_system(cat, rng.below(cat->objects()), x);
        };
        ChainSystem s = piece();
        if (rng.chance(0.4)) {
            ChainSystem t = piece();
            s = system_cone(s, t, random_natural_map(rng, s, t));
        }
        if (rng.chance(0.3)) s = system_shift(s, static_cast<int>(rng.range(-1, 1)));
        if (s.total_dim() > 0 && s.total_dim() <= total_cap) return s;
    }
    ChainSystem unit = constant_system(cat, ChainComplex::sphere(0));
    return unit.total_dim() <= total_cap ? unit : system_zero(cat);
}

} // namespace parex
