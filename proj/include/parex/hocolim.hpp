#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "parex/chain.hpp"
#include "parex/poset.hpp"

namespace parex {

// Functor from a finite poset to chain complexes: one complex per element,
// one chain map per comparable pair. Built from cover maps; composites along
// different cover paths must agree.
class ChainDiagram {
public:
    using CoverMaps = std::map<std::pair<size_t, size_t>, ChainMap>;

    static ChainDiagram build(std::shared_ptr<const FinPoset> shape,
                              std::vector<ChainComplex> values, const CoverMaps& cover) {
        if (!shape) throw InputError("chain diagram needs a shape");
        if (values.size() != shape->size())
            throw InputError("chain diagram values do not match the shape");
        ChainDiagram d;
        d.shape_ = std::move(shape);
        d.value_ = std::move(values);
        for (auto& [lo, hi] : d.shape_->covers()) {
            auto it = cover.find({lo, hi});
            if (it == cover.end()) throw InputError("chain diagram is missing a cover map");
            validate_chain_map(d.value_[lo], d.value_[hi], it->second, "chain diagram edge");
        }
        d.fill_composites_(cover);
        return d;
    }

    // x placed at a single element, zero everywhere else
    static ChainDiagram concentrated(std::shared_ptr<const FinPoset> shape, size_t at,
                                     const ChainComplex& x) {
        std::vector<ChainComplex> vals(shape->size());
        vals[at] = x;
        CoverMaps cm;
        for (auto& [lo, hi] : shape->covers()) cm[{lo, hi}] = chain_map_zero(vals[lo], vals[hi]);
        return build(std::move(shape), std::move(vals), cm);
    }

    const FinPoset& shape() const { return *shape_; }
    const std::shared_ptr<const FinPoset>& shape_ptr() const { return shape_; }
    const ChainComplex& value(size_t p) const { return value_[p]; }
    size_t size() const { return value_.size(); }

    const ChainMap& map(size_t lo, size_t hi) const {
        auto it = maps_.find({lo, hi});
        if (it == maps_.end())
            throw InputError("chain diagram map requested for incomparable elements");
        return it->second;
    }

    ChainDiagram restrict(const std::vector<size_t>& keep) const {
        auto sub = std::make_shared<const FinPoset>(shape_->induced(keep));
        std::vector<ChainComplex> vals(keep.size());
        for (size_t i = 0; i < keep.size(); i++) vals[i] = value_[keep[i]];
        CoverMaps cm;
        for (auto& [lo, hi] : sub->covers()) cm[{lo, hi}] = map(keep[lo], keep[hi]);
        return build(std::move(sub), std::move(vals), cm);
    }

private:
    std::shared_ptr<const FinPoset> shape_;
    std::vector<ChainComplex> value_;
    std::map<std::pair<size_t, size_t>, ChainMap> maps_;

    void fill_composites_(const CoverMaps& cover) {
        size_t n = shape_->size();
        std::vector<size_t> order(n);
        for (size_t i = 0; i < n; i++) order[i] = i;
        std::vector<size_t> depth(n);
        for (size_t i = 0; i < n; i++) depth[i] = shape_->down_set(i).size();
        std::stable_sort(order.begin(), order.end(),
                         [&](size_t a, size_t b) { return depth[a] < depth[b]; });
        for (size_t i = 0; i < n; i++) maps_[{i, i}] = chain_map_identity(value_[i]);
        for (size_t hi : order) {
            for (size_t lo = 0; lo < n; lo++) {
                if (!shape_->lt(lo, hi)) continue;
                bool have = false;
                ChainMap acc;
                for (auto& [m, h] : shape_->covers()) {
                    if (h != hi || !shape_->leq(lo, m)) continue;
                    ChainMap cand = compose(cover.at({m, h}), maps_.at({lo, m}));
                    if (!have) {
                        acc = std::move(cand);
                        have = true;
                    } else if (!cm_is_zero(cm_sub(acc, cand))) {
                        throw InputError("chain diagram maps do not commute");
                    }
                }
                if (!have) throw std::logic_error("cover chain missing below an element");
                maps_[{lo, hi}] = std::move(acc);
            }
        }
    }
};

// all strict chains p0 < ... < pk, ordered by length then lexicographically
inline std::vector<std::vector<size_t>> poset_chains(const FinPoset& p) {
    auto out = p.chains();
    if (out.size() > 50000) throw InputError("shape has too many chains to totalize");
    return out;
}

// Totalization of the simplicial replacement. Sign convention, the single
// source of truth that every dual construction below inherits:
//   D(x; p0 < ... < pk) = (dx; c) + (-1)^m Σ_{i=0}^{k} (-1)^i ∂_i(x; c)
// where m is the internal degree of x, ∂_0 pushes x along F(p0 -> p1) and
// ∂_i for i >= 1 deletes p_i. Chains of length 0 have no simplicial part.
struct Totalization {
    ChainComplex total;
    std::vector<std::vector<size_t>> chains;
    std::vector<std::vector<size_t>> off; // per degree: prefix offsets, chains+1 entries

    size_t offset(int n, size_t chain) const { return off[chain_idx(n)][chain]; }
    size_t block_dim(int n, size_t chain) const {
        return off[chain_idx(n)][chain + 1] - off[chain_idx(n)][chain];
    }
    size_t chain_index(const std::vector<size_t>& c) const {
        auto it = index.find(c);
        assert(it != index.end());
        return it->second;
    }
    std::map<std::vector<size_t>, size_t> index;
};

inline Totalization hocolim(const ChainDiagram& d) {
    Totalization t;
    t.chains = poset_chains(d.shape());
    for (size_t i = 0; i < t.chains.size(); i++) t.index[t.chains[i]] = i;
    t.off.assign(kChainDegrees, std::vector<size_t>(t.chains.size() + 1, 0));
    std::map<int, size_t> dims;
    for (size_t ci = 0; ci < t.chains.size(); ci++) {
        int k = static_cast<int>(t.chains[ci].size()) - 1;
        const ChainComplex& v = d.value(t.chains[ci][0]);
        for (int m = v.lo(); m <= v.hi(); m++)
            if (v.dim(m) && !chain_degree_ok(m + k))
                throw InputError("totalization leaves the bounded degree window");
    }
    for (int n = kChainLo; n <= kChainHi; n++) {
        size_t acc = 0;
        for (size_t ci = 0; ci < t.chains.size(); ci++) {
            int k = static_cast<int>(t.chains[ci].size()) - 1;
            int m = n - k;
            size_t b = chain_degree_ok(m) ? d.value(t.chains[ci][0]).dim(m) : 0;
            t.off[chain_idx(n)][ci] = acc;
            acc += b;
        }
        t.off[chain_idx(n)][t.chains.size()] = acc;
        if (acc) dims[n] = acc;
    }

    std::map<int, QMat> dd;
    for (int n = kChainLo + 1; n <= kChainHi; n++) {
        size_t rows = t.off[chain_idx(n - 1)].back();
        size_t cols = t.off[chain_idx(n)].back();
        if (!rows || !cols) continue;
        QMat m(rows, cols);
        auto add_block = [&](size_t r0, size_t c0, const QMat& b, const Rational& s) {
            for (size_t i = 0; i < b.rows(); i++)
                for (size_t j = 0; j < b.cols(); j++)
                    if (b(i, j) != 0) m(r0 + i, c0 + j) += s * b(i, j);
        };
        for (size_t ci = 0; ci < t.chains.size(); ci++) {
            const auto& c = t.chains[ci];
            int k = static_cast<int>(c.size()) - 1;
            int deg = n - k;
            if (!chain_degree_ok(deg) || d.value(c[0]).dim(deg) == 0) continue;
            size_t c0 = t.offset(n, ci);
            // internal differential keeps the chain
            add_block(t.offset(n - 1, ci), c0, d.value(c[0]).d(deg), 1);
            if (k == 0) continue;
            Rational sgn = (deg % 2 == 0) ? 1 : -1;
            for (int i = 0; i <= k; i++) {
                std::vector<size_t> sub;
                for (int j = 0; j <= k; j++)
                    if (j != i) sub.push_back(c[j]);
                size_t ti = t.chain_index(sub);
                Rational s = (i % 2 == 0) ? sgn : -sgn;
                if (i == 0)
                    add_block(t.offset(n - 1, ti), c0, d.map(c[0], c[1]).at(deg), s);
                else
                    add_block(t.offset(n - 1, ti), c0,
                              QMat::identity(d.value(c[0]).dim(deg)), s);
            }
        }
        dd[n] = std::move(m);
    }
    // build() checks d*d = 0, which exercises the simplicial identities
    t.total = ChainComplex::build(dims, dd);
    return t;
}

// canonical inclusion of one value as the length-zero chain block
inline ChainMap hocolim_leg(const Totalization& t, const ChainDiagram& d, size_t p) {
    ChainMap leg = chain_map_zero(d.value(p), t.total);
    size_t ci = t.chain_index({p});
    for (int n = kChainLo; n <= kChainHi; n++)
        for (size_t i = 0; i < d.value(p).dim(n); i++) leg.at(n)(t.offset(n, ci) + i, i) = 1;
    validate_chain_map(d.value(p), t.total, leg, "totalization leg");
    return leg;
}

// Map out of the totalization induced by a strictly commuting cocone:
// length-zero blocks go through their legs, longer chains to zero.
inline ChainMap hocolim_out(const Totalization& t, const ChainDiagram& d,
                            const ChainComplex& z, const std::vector<ChainMap>& legs) {
    if (legs.size() != d.size()) throw InputError("cocone has the wrong number of legs");
    for (size_t p = 0; p < d.size(); p++)
        validate_chain_map(d.value(p), z, legs[p], "cocone leg");
    for (size_t lo = 0; lo < d.size(); lo++)
        for (size_t hi = 0; hi < d.size(); hi++)
            if (d.shape().lt(lo, hi) &&
                !cm_is_zero(cm_sub(compose(legs[hi], d.map(lo, hi)), legs[lo])))
                throw InputError("cocone does not commute strictly");
    ChainMap out = chain_map_zero(t.total, z);
    for (size_t p = 0; p < d.size(); p++) {
        size_t ci = t.chain_index({p});
        for (int n = kChainLo; n <= kChainHi; n++)
            out.at(n).set_block(0, t.offset(n, ci), legs[p].at(n));
    }
    validate_chain_map(t.total, z, out, "cocone-induced map");
    return out;
}

// Pushforward along a monotone shape map with strict naturality data; chains
// collapsed by g are sent to zero, which is the normalized-complex behaviour.
inline ChainMap hocolim_transport(const Totalization& ts, const ChainDiagram& ds,
                                  const Totalization& tt, const ChainDiagram& dt,
                                  const std::vector<size_t>& g,
                                  const std::vector<ChainMap>& comp) {
    if (g.size() != ds.size() || comp.size() != ds.size())
        throw InputError("transport data does not match the source shape");
    for (size_t p = 0; p < ds.size(); p++)
        validate_chain_map(ds.value(p), dt.value(g[p]), comp[p], "transport component");
    for (size_t lo = 0; lo < ds.size(); lo++)
        for (size_t hi = 0; hi < ds.size(); hi++) {
            if (!ds.shape().lt(lo, hi)) continue;
            if (!dt.shape().leq(g[lo], g[hi]))
                throw InputError("transport shape map is not monotone");
            ChainMap lhs = compose(comp[hi], ds.map(lo, hi));
            ChainMap rhs = g[lo] == g[hi]
                               ? comp[lo]
                               : compose(dt.map(g[lo], g[hi]), comp[lo]);
            if (!cm_is_zero(cm_sub(lhs, rhs)))
                throw InputError("transport components are not natural");
        }
    ChainMap out = chain_map_zero(ts.total, tt.total);
    for (size_t ci = 0; ci < ts.chains.size(); ci++) {
        const auto& c = ts.chains[ci];
        std::vector<size_t> img;
        bool strict = true;
        for (size_t j = 0; j < c.size() && strict; j++) {
            size_t v = g[c[j]];
            if (j > 0 && !(dt.shape().lt(img.back(), v))) strict = false;
            img.push_back(v);
        }
        if (!strict) continue;
        size_t ti = tt.chain_index(img);
        int k = static_cast<int>(c.size()) - 1;
        for (int n = kChainLo; n <= kChainHi; n++) {
            int deg = n - k;
            if (!chain_degree_ok(deg)) continue;
            if (ds.value(c[0]).dim(deg) == 0) continue;
            out.at(n).set_block(tt.offset(n, ti), ts.offset(n, ci), comp[c[0]].at(deg));
        }
    }
    validate_chain_map(ts.total, tt.total, out, "totalization transport");
    return out;
}

// same elements and ids, reversed order
inline std::shared_ptr<const FinPoset> opposite(const FinPoset& p) {
    std::vector<std::pair<int64_t, int64_t>> cov;
    for (auto& [lo, hi] : p.covers()) cov.push_back({p.id_of(hi), p.id_of(lo)});
    return std::make_shared<const FinPoset>(FinPoset::from_covers(p.ids(), cov));
}

inline ChainDiagram dual_diagram(const ChainDiagram& d) {
    auto op = opposite(d.shape());
    std::vector<ChainComplex> vals(d.size());
    for (size_t p = 0; p < d.size(); p++) vals[p] = dualize(d.value(p));
    ChainDiagram::CoverMaps cm;
    for (auto& [lo, hi] : op->covers()) cm[{lo, hi}] = dualize_map(d.map(hi, lo));
    return ChainDiagram::build(op, std::move(vals), cm);
}

// Dual totalization: holim over P is the dual of the hocolim over P^op of the
// dual diagram, so it inherits the one sign convention. The block for a
// descending chain q0 > ... > qk in degree n carries F(q0)_{n+k}.
struct Cototalization {
    ChainComplex total;
    std::vector<std::vector<size_t>> chains; // descending in the original order
    Totalization inner;

    size_t offset(int n, size_t chain) const { return inner.offset(-n, chain); }
    size_t block_dim(int n, size_t chain) const { return inner.block_dim(-n, chain); }
    size_t chain_index(const std::vector<size_t>& c) const { return inner.chain_index(c); }
};

inline Cototalization holim(const ChainDiagram& d) {
    Cototalization c;
    c.inner = hocolim(dual_diagram(d));
    c.chains = c.inner.chains;
    c.total = dualize(c.inner.total);
    return c;
}

// canonical projection onto one value, dual to the totalization leg
inline ChainMap holim_leg(const Cototalization& t, const ChainDiagram& d, size_t p) {
    ChainMap leg = chain_map_zero(t.total, d.value(p));
    size_t ci = t.chain_index({p});
    for (int n = kChainLo; n <= kChainHi; n++)
        for (size_t i = 0; i < d.value(p).dim(n); i++) leg.at(n)(i, t.offset(n, ci) + i) = 1;
    validate_chain_map(t.total, d.value(p), leg, "cototalization leg");
    return leg;
}

// map into the dual totalization induced by a strictly commuting cone
inline ChainMap holim_in(const Cototalization& t, const ChainDiagram& d,
                         const ChainComplex& z, const std::vector<ChainMap>& legs) {
    if (legs.size() != d.size()) throw InputError("cone has the wrong number of legs");
    for (size_t p = 0; p < d.size(); p++)
        validate_chain_map(z, d.value(p), legs[p], "cone leg");
    for (size_t lo = 0; lo < d.size(); lo++)
        for (size_t hi = 0; hi < d.size(); hi++)
            if (d.shape().lt(lo, hi) &&
                !cm_is_zero(cm_sub(compose(d.map(lo, hi), legs[lo]), legs[hi])))
                throw InputError("cone does not commute strictly");
    ChainMap out = chain_map_zero(z, t.total);
    for (size_t p = 0; p < d.size(); p++) {
        size_t ci = t.chain_index({p});
        for (int n = kChainLo; n <= kChainHi; n++)
            out.at(n).set_block(t.offset(n, ci), 0, legs[p].at(n));
    }
    validate_chain_map(z, t.total, out, "cone-induced map");
    return out;
}

// Contravariant transport: g : P -> P' monotone with components
// comp_p : dt.value(g(p)) -> ds.value(p) induces holim(dt) -> holim(ds),
// computed as the dual of the pushforward between the inner totalizations.
inline ChainMap holim_transport(const Cototalization& cs, const ChainDiagram& ds,
                                const Cototalization& ct, const ChainDiagram& dt,
                                const std::vector<size_t>& g,
                                const std::vector<ChainMap>& comp) {
    std::vector<ChainMap> dual_comp(comp.size());
    for (size_t p = 0; p < comp.size(); p++) dual_comp[p] = dualize_map(comp[p]);
    ChainMap inner = hocolim_transport(cs.inner, dual_diagram(ds), ct.inner,
                                       dual_diagram(dt), g, dual_comp);
    ChainMap out = dualize_map(inner);
    validate_chain_map(ct.total, cs.total, out, "cototalization transport");
    return out;
}

// objectwise quasi-isomorphic enlargement: the same acyclic complex is added
// to every value with identity edges, so the projection back is natural
struct PerturbedDiagram {
    ChainDiagram diagram;
    std::vector<ChainMap> proj;
};

inline PerturbedDiagram perturb_qis(const ChainDiagram& d, const ChainComplex& acyclic) {
    if (homology(acyclic).total_rank() != 0)
        throw InputError("perturbation summand must be acyclic");
    std::vector<ChainComplex> vals;
    std::vector<SumData> sums;
    for (size_t p = 0; p < d.size(); p++) {
        sums.push_back(direct_sum_data(d.value(p), acyclic));
        vals.push_back(sums.back().sum);
    }
    ChainDiagram::CoverMaps cm;
    for (auto& [lo, hi] : d.shape().covers()) {
        ChainMap m = chain_map_zero(vals[lo], vals[hi]);
        for (int n = kChainLo; n <= kChainHi; n++) {
            m.at(n).set_block(0, 0, d.map(lo, hi).at(n));
            for (size_t i = 0; i < acyclic.dim(n); i++)
                m.at(n)(d.value(hi).dim(n) + i, d.value(lo).dim(n) + i) = 1;
        }
        cm[{lo, hi}] = m;
    }
    PerturbedDiagram out{ChainDiagram::build(d.shape_ptr(), std::move(vals), cm), {}};
    for (size_t p = 0; p < d.size(); p++) out.proj.push_back(sums[p].pr1);
    return out;
}

} // namespace parex
