#pragma once

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "parex/matrix.hpp"
#include "parex/poset.hpp"
#include "parex/rng.hpp"

namespace parex {

// Functor from a finite poset to finite-dimensional Q-vector spaces: one
// dimension per element, one matrix per comparable pair. Built from cover
// maps only; composites along different cover paths must agree, so the full
// map table is well defined.
class PosetDiagramV {
public:
    using CoverMaps = std::map<std::pair<size_t, size_t>, QMat>;

    static PosetDiagramV build(std::shared_ptr<const FinPoset> shape,
                               std::vector<size_t> dims, const CoverMaps& cover) {
        if (!shape) throw InputError("diagram needs a shape");
        if (dims.size() != shape->size()) throw InputError("diagram dims do not match the shape");
        PosetDiagramV d;
        d.shape_ = std::move(shape);
        d.dims_ = std::move(dims);
        const auto& covers = d.shape_->covers();
        if (cover.size() != covers.size())
            throw InputError("diagram edge maps do not match the shape covers");
        for (auto& [lo, hi] : covers) {
            auto it = cover.find({lo, hi});
            if (it == cover.end()) throw InputError("diagram is missing a cover map");
            if (it->second.rows() != d.dims_[hi] || it->second.cols() != d.dims_[lo])
                throw InputError("diagram cover map has the wrong size");
        }
        d.fill_composites(cover);
        return d;
    }

    static PosetDiagramV constant(std::shared_ptr<const FinPoset> shape, size_t dim) {
        std::vector<size_t> dims(shape->size(), dim);
        CoverMaps cm;
        for (auto& [lo, hi] : shape->covers()) cm[{lo, hi}] = QMat::identity(dim);
        return build(std::move(shape), std::move(dims), cm);
    }

    const FinPoset& shape() const { return *shape_; }
    const std::shared_ptr<const FinPoset>& shape_ptr() const { return shape_; }
    size_t dim(size_t q) const { return dims_[q]; }
    const std::vector<size_t>& dims() const { return dims_; }
    size_t total_dim() const {
        size_t t = 0;
        for (size_t d : dims_) t += d;
        return t;
    }

    // composite map for any lo <= hi
    const QMat& map(size_t lo, size_t hi) const {
        auto it = maps_.find({lo, hi});
        if (it == maps_.end()) throw InputError("diagram map requested for incomparable elements");
        return it->second;
    }

    // Restriction to the full subposet on `keep` (ascending indices).
    PosetDiagramV restrict(const std::vector<size_t>& keep) const {
        auto sub = std::make_shared<const FinPoset>(shape_->induced(keep));
        std::vector<size_t> d(keep.size());
        for (size_t i = 0; i < keep.size(); i++) d[i] = dims_[keep[i]];
        CoverMaps cm;
        for (auto& [lo, hi] : sub->covers()) cm[{lo, hi}] = map(keep[lo], keep[hi]);
        return build(std::move(sub), std::move(d), cm);
    }

    // Precomposition with a monotone map f: P -> shape.
    PosetDiagramV reindex(std::shared_ptr<const FinPoset> p, const std::vector<size_t>& f) const {
        if (!p || f.size() != p->size()) throw InputError("reindexing map does not match its poset");
        std::vector<size_t> d(f.size());
        for (size_t i = 0; i < f.size(); i++) {
            if (f[i] >= shape_->size()) throw InputError("reindexing map leaves the shape");
            d[i] = dims_[f[i]];
        }
        CoverMaps cm;
        for (auto& [lo, hi] : p->covers()) {
            if (!shape_->leq(f[lo], f[hi])) throw InputError("reindexing map is not monotone");
            cm[{lo, hi}] = map(f[lo], f[hi]);
        }
        return build(std::move(p), std::move(d), cm);
    }

private:
    // Elements sorted by down-set size give a linear extension, so every
    // composite into hi is available once all elements below hi are done.
    void fill_composites(const CoverMaps& cover) {
        size_t n = shape_->size();
        std::vector<size_t> order(n);
        for (size_t i = 0; i < n; i++) order[i] = i;
        std::vector<size_t> depth(n);
        for (size_t i = 0; i < n; i++) depth[i] = shape_->down_set(i).size();
        std::stable_sort(order.begin(), order.end(),
                         [&](size_t a, size_t b) { return depth[a] < depth[b]; });
        for (size_t i = 0; i < n; i++) maps_[{i, i}] = QMat::identity(dims_[i]);
        for (size_t hi : order) {
            for (size_t lo = 0; lo < n; lo++) {
                if (!shape_->lt(lo, hi)) continue;
                bool have = false;
                QMat acc;
                for (auto& [m, h] : shape_->covers()) {
                    if (h != hi || !shape_->leq(lo, m)) continue;
                    QMat cand = cover.at({m, h}) * maps_.at({lo, m});
                    if (!have) {
                        acc = std::move(cand);
                        have = true;
                    } else if (acc != cand) {
                        throw InputError("diagram maps do not commute");
                    }
                }
                if (!have) throw std::logic_error("cover chain missing below an element");
                maps_[{lo, hi}] = std::move(acc);
            }
        }
    }

    std::shared_ptr<const FinPoset> shape_;
    std::vector<size_t> dims_;
    std::map<std::pair<size_t, size_t>, QMat> maps_;
};

// Colimit of a diagram as the cokernel of the cover-difference map
// ⊕_{q ⋖ q'} D(q) -> ⊕_q D(q). `legs[q]` is the cocone component D(q) -> colim
// and proj * sect == id.
struct ColimitData {
    size_t dim = 0;
    std::vector<size_t> offset;
    QMat proj;
    QMat sect;
    std::vector<QMat> legs;
};

inline ColimitData colim_v(const PosetDiagramV& d) {
    if (d.shape().size() == 0) throw InputError("colimit over the empty shape");
    ColimitData out;
    size_t total = 0;
    for (size_t q = 0; q < d.shape().size(); q++) {
        out.offset.push_back(total);
        total += d.dim(q);
    }
    size_t src = 0;
    for (auto& [lo, hi] : d.shape().covers()) (void)hi, src += d.dim(lo);
    QMat phi(total, src);
    size_t col = 0;
    for (auto& [lo, hi] : d.shape().covers()) {
        const QMat& e = d.map(lo, hi);
        for (size_t j = 0; j < d.dim(lo); j++) {
            for (size_t i = 0; i < d.dim(hi); i++) phi(out.offset[hi] + i, col + j) = e(i, j);
            phi(out.offset[lo] + j, col + j) -= 1;
        }
        col += d.dim(lo);
    }
    CokernelData ck = cokernel_with_section(phi);
    out.dim = ck.proj.rows();
    out.proj = std::move(ck.proj);
    out.sect = std::move(ck.sect);
    for (size_t q = 0; q < d.shape().size(); q++)
        out.legs.push_back(out.proj.block(0, out.offset[q], out.dim, d.dim(q)));
    return out;
}

// Limit as the kernel of the dual difference map ⊕_q D(q) -> ⊕_{q ⋖ q'} D(q').
// `legs[q]` is the cone component lim -> D(q) and retr * incl == id.
struct LimitData {
    size_t dim = 0;
    std::vector<size_t> offset;
    QMat incl;
    QMat retr;
    std::vector<QMat> legs;
};

inline LimitData lim_v(const PosetDiagramV& d) {
    if (d.shape().size() == 0) throw InputError("limit over the empty shape");
    LimitData out;
    size_t total = 0;
    for (size_t q = 0; q < d.shape().size(); q++) {
        out.offset.push_back(total);
        total += d.dim(q);
    }
    size_t tgt = 0;
    for (auto& [lo, hi] : d.shape().covers()) (void)lo, tgt += d.dim(hi);
    QMat psi(tgt, total);
    size_t row = 0;
    for (auto& [lo, hi] : d.shape().covers()) {
        const QMat& e = d.map(lo, hi);
        for (size_t i = 0; i < d.dim(hi); i++) {
            for (size_t j = 0; j < d.dim(lo); j++) psi(row + i, out.offset[lo] + j) = e(i, j);
            psi(row + i, out.offset[hi] + i) -= 1;
        }
        row += d.dim(hi);
    }
    KernelData k = kernel_with_retraction(psi);
    out.dim = k.incl.cols();
    out.incl = std::move(k.incl);
    out.retr = std::move(k.retr);
    for (size_t q = 0; q < d.shape().size(); q++)
        out.legs.push_back(out.incl.block(out.offset[q], 0, d.dim(q), out.dim));
    return out;
}

namespace detail {

inline void check_subposet_match(const FinPoset& ambient, const std::vector<size_t>& sub,
                                 const FinPoset& small) {
    if (small.size() != sub.size())
        throw InputError("diagram shape does not match the subposet");
    for (size_t i = 0; i < sub.size(); i++) {
        if (sub[i] >= ambient.size()) throw InputError("subposet index out of range");
        if (i + 1 < sub.size() && sub[i] >= sub[i + 1])
            throw InputError("subposet indices must be strictly increasing");
        for (size_t j = 0; j < sub.size(); j++)
            if (small.leq(i, j) != ambient.leq(sub[i], sub[j]))
                throw InputError("diagram shape does not match the subposet");
    }
}

// positional block inclusion ⊕_{i in from} D(i) -> ⊕_{i in to}; from ⊆ to
inline QMat block_inclusion(const std::vector<size_t>& from, const std::vector<size_t>& to,
                            const std::vector<size_t>& dims) {
    size_t rt = 0, ct = 0;
    for (size_t i : to) rt += dims[i];
    for (size_t i : from) ct += dims[i];
    QMat out(rt, ct);
    size_t col = 0;
    for (size_t i : from) {
        size_t row = 0;
        bool found = false;
        for (size_t j : to) {
            if (j == i) {
                out.set_block(row, col, QMat::identity(dims[i]));
                found = true;
                break;
            }
            row += dims[j];
        }
        if (!found) throw std::logic_error("block inclusion source is not a subfamily");
        col += dims[i];
    }
    return out;
}

} // namespace detail

// Left Kan extension along the full inclusion of the subposet on sigma.
// diagram(l) is the colimit of F over {i : sigma[i] <= l}; `along[i]` is the
// invertible comparison F(i) -> diagram(sigma[i]).
struct LkanData {
    PosetDiagramV diagram;
    std::vector<std::vector<size_t>> sub; // per ambient element: sigma positions below it
    std::vector<ColimitData> colim;
    std::vector<QMat> along;
};

inline LkanData lkan(std::shared_ptr<const FinPoset> ambient, const std::vector<size_t>& sigma,
                     const PosetDiagramV& f) {
    detail::check_subposet_match(*ambient, sigma, f.shape());
    size_t n = ambient->size();
    LkanData out;
    out.sub.resize(n);
    out.colim.resize(n);
    std::vector<size_t> dims(n, 0);
    for (size_t l = 0; l < n; l++) {
        for (size_t i = 0; i < sigma.size(); i++)
            if (ambient->leq(sigma[i], l)) out.sub[l].push_back(i);
        if (out.sub[l].empty()) continue; // colimit over nothing: zero space
        out.colim[l] = colim_v(f.restrict(out.sub[l]));
        dims[l] = out.colim[l].dim;
    }
    PosetDiagramV::CoverMaps cm;
    for (auto& [lo, hi] : ambient->covers()) {
        if (out.sub[lo].empty()) {
            cm[{lo, hi}] = QMat::zero(dims[hi], 0);
            continue;
        }
        QMat j = detail::block_inclusion(out.sub[lo], out.sub[hi], f.dims());
        QMat e = out.colim[hi].proj * j * out.colim[lo].sect;
        if (e * out.colim[lo].proj != out.colim[hi].proj * j)
            throw std::logic_error("left Kan edge map does not descend");
        cm[{lo, hi}] = std::move(e);
    }
    out.diagram = PosetDiagramV::build(ambient, std::move(dims), cm);
    for (size_t i = 0; i < sigma.size(); i++) {
        size_t l = sigma[i];
        size_t pos = 0;
        while (out.sub[l][pos] != i) pos++;
        QMat iso = out.colim[l].legs[pos];
        if (!iso.is_invertible())
            throw std::logic_error("left Kan extension is not fully faithful");
        out.along.push_back(std::move(iso));
    }
    for (size_t i = 0; i < sigma.size(); i++)
        for (size_t j = 0; j < sigma.size(); j++)
            if (f.shape().leq(i, j) &&
                out.diagram.map(sigma[i], sigma[j]) * out.along[i] != out.along[j] * f.map(i, j))
                throw std::logic_error("left Kan comparison is not natural");
    return out;
}

// Right Kan extension along the full inclusion of the subposet on sigma.
// diagram(l) is the limit of F over {i : l <= sigma[i]}.
struct RkanData {
    PosetDiagramV diagram;
    std::vector<std::vector<size_t>> sup;
    std::vector<LimitData> lim;
    std::vector<QMat> along; // invertible diagram(sigma[i]) -> F(i)
};

inline RkanData rkan(std::shared_ptr<const FinPoset> ambient, const std::vector<size_t>& sigma,
                     const PosetDiagramV& f) {
    detail::check_subposet_match(*ambient, sigma, f.shape());
    size_t n = ambient->size();
    RkanData out;
    out.sup.resize(n);
    out.lim.resize(n);
    std::vector<size_t> dims(n, 0);
    for (size_t l = 0; l < n; l++) {
        for (size_t i = 0; i < sigma.size(); i++)
            if (ambient->leq(l, sigma[i])) out.sup[l].push_back(i);
        if (out.sup[l].empty()) continue; // limit over nothing: zero space
        out.lim[l] = lim_v(f.restrict(out.sup[l]));
        dims[l] = out.lim[l].dim;
    }
    PosetDiagramV::CoverMaps cm;
    for (auto& [lo, hi] : ambient->covers()) {
        if (out.sup[hi].empty()) {
            cm[{lo, hi}] = QMat::zero(0, dims[lo]);
            continue;
        }
        // dual restriction: project away the summands that leave the index set
        QMat j = detail::block_inclusion(out.sup[hi], out.sup[lo], f.dims()).transposed();
        QMat e = out.lim[hi].retr * j * out.lim[lo].incl;
        if (out.lim[hi].incl * e != j * out.lim[lo].incl)
            throw std::logic_error("right Kan edge map does not descend");
        cm[{lo, hi}] = std::move(e);
    }
    out.diagram = PosetDiagramV::build(ambient, std::move(dims), cm);
    for (size_t i = 0; i < sigma.size(); i++) {
        size_t l = sigma[i];
        size_t pos = 0;
        while (out.sup[l][pos] != i) pos++;
        QMat iso = out.lim[l].legs[pos];
        if (!iso.is_invertible())
            throw std::logic_error("right Kan extension is not fully faithful");
        out.along.push_back(std::move(iso));
    }
    for (size_t i = 0; i < sigma.size(); i++)
        for (size_t j = 0; j < sigma.size(); j++)
            if (f.shape().leq(i, j) &&
                out.along[j] * out.diagram.map(sigma[i], sigma[j]) != f.map(i, j) * out.along[i])
                throw std::logic_error("right Kan comparison is not natural");
    return out;
}

// Comparison-map check shared by cocartesianness and cartesianness. `witness`
// is the first element whose comparison fails, with its dimension and the
// comparison rank as the gap certificate.
struct CartesianCheck {
    bool ok = true;
    int witness = -1;
    size_t value_dim = 0;
    size_t kan_dim = 0;
    size_t comparison_rank = 0;
    std::vector<QMat> comparison;
};

// X is sigma-cocartesian when the counit (lkan of X|sigma) -> X is invertible
// levelwise.
inline CartesianCheck is_cocartesian(const PosetDiagramV& x, const std::vector<size_t>& sigma) {
    LkanData lk = lkan(x.shape_ptr(), sigma, x.restrict(sigma));
    CartesianCheck out;
    for (size_t l = 0; l < x.shape().size(); l++) {
        QMat m(x.dim(l), 0);
        for (size_t i : lk.sub[l]) m = m.hstack(x.map(sigma[i], l));
        QMat c = lk.sub[l].empty() ? QMat::zero(x.dim(l), 0) : m * lk.colim[l].sect;
        if (!lk.sub[l].empty() && c * lk.colim[l].proj != m)
            throw std::logic_error("counit does not descend to the colimit");
        bool inv = c.rows() == c.cols() && c.is_invertible();
        if (!inv && out.ok) {
            out.ok = false;
            out.witness = static_cast<int>(l);
            out.value_dim = x.dim(l);
            out.kan_dim = c.cols();
            out.comparison_rank = c.rank();
        }
        out.comparison.push_back(std::move(c));
    }
    return out;
}

// X is cartesian when the unit X -> rkan of X away from the initial element is
// invertible levelwise.
inline CartesianCheck is_cartesian(const PosetDiagramV& x) {
    int bot = x.shape().bottom();
    if (bot < 0) throw InputError("cartesianness needs an initial element in the shape");
    std::vector<size_t> punct;
    for (size_t q = 0; q < x.shape().size(); q++)
        if (q != static_cast<size_t>(bot)) punct.push_back(q);
    RkanData rk = rkan(x.shape_ptr(), punct, x.restrict(punct));
    CartesianCheck out;
    for (size_t l = 0; l < x.shape().size(); l++) {
        QMat m(0, x.dim(l));
        for (size_t i : rk.sup[l]) m = m.vstack(x.map(l, punct[i]));
        QMat u = rk.sup[l].empty() ? QMat::zero(0, x.dim(l)) : rk.lim[l].retr * m;
        if (!rk.sup[l].empty() && rk.lim[l].incl * u != m)
            throw std::logic_error("unit does not land in the limit");
        bool inv = u.rows() == u.cols() && u.is_invertible();
        if (!inv && out.ok) {
            out.ok = false;
            out.witness = static_cast<int>(l);
            out.value_dim = x.dim(l);
            out.kan_dim = u.rows();
            out.comparison_rank = u.rank();
        }
        out.comparison.push_back(std::move(u));
    }
    return out;
}

// Random functorial diagram: a direct sum of up-set indicator bricks twisted
// by invertible base changes at every element. Bricks are functorial by
// construction and the twist preserves that.
inline PosetDiagramV sample_diagram(std::shared_ptr<const FinPoset> shape, Rng& rng,
                                    size_t max_dim) {
    size_t n = shape->size();
    std::vector<size_t> dims(n, 0);
    std::vector<std::pair<size_t, size_t>> bricks; // (root, multiplicity)
    size_t rounds = 1 + rng.below(2 * n);
    for (size_t r = 0; r < rounds; r++) {
        size_t root = rng.below(n);
        size_t mult = 1 + rng.below(2);
        bool fits = true;
        for (size_t q = 0; q < n && fits; q++)
            if (shape->leq(root, q) && dims[q] + mult > max_dim) fits = false;
        if (!fits) continue;
        bricks.push_back({root, mult});
        for (size_t q = 0; q < n; q++)
            if (shape->leq(root, q)) dims[q] += mult;
    }
    auto random_invertible = [&](size_t d) {
        if (d == 0) return QMat::identity(0);
        for (;;) {
            QMat a(d, d);
            for (size_t i = 0; i < d; i++)
                for (size_t j = 0; j < d; j++) a(i, j) = Rational(rng.range(-2, 2));
            if (a.is_invertible()) return a;
        }
    };
    std::vector<QMat> twist, twist_inv;
    for (size_t q = 0; q < n; q++) {
        twist.push_back(random_invertible(dims[q]));
        twist_inv.push_back(*twist.back().inverse());
    }
    PosetDiagramV::CoverMaps cm;
    for (auto& [lo, hi] : shape->covers()) {
        QMat e(dims[hi], dims[lo]);
        size_t roff = 0, coff = 0;
        for (auto& [root, mult] : bricks) {
            bool in_lo = shape->leq(root, lo), in_hi = shape->leq(root, hi);
            if (in_lo && in_hi) e.set_block(roff, coff, QMat::identity(mult));
            if (in_lo) coff += mult;
            if (in_hi) roff += mult;
        }
        cm[{lo, hi}] = twist[hi] * e * twist_inv[lo];
    }
    return PosetDiagramV::build(std::move(shape), std::move(dims), cm);
}

// Random diagram on a forest (every element has at most one lower cover):
// cover maps can be drawn independently, optionally injective.
inline PosetDiagramV sample_forest_diagram(std::shared_ptr<const FinPoset> shape, Rng& rng,
                                           size_t max_dim, bool injective) {
    size_t n = shape->size();
    for (size_t q = 0; q < n; q++) {
        size_t below = 0;
        for (auto& [lo, hi] : shape->covers())
            if (hi == q) (void)lo, below++;
        if (below > 1) throw InputError("independent edge sampling needs a forest shape");
    }
    std::vector<size_t> dims(n);
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; i++) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return shape->down_set(a).size() < shape->down_set(b).size();
    });
    for (size_t q : order) {
        size_t lo_dim = 0;
        for (auto& [lo, hi] : shape->covers())
            if (hi == q) lo_dim = dims[lo];
        size_t base = injective ? lo_dim : 0;
        dims[q] = base + rng.below(max_dim + 1 - std::min(base, max_dim));
        if (dims[q] > max_dim) dims[q] = max_dim;
        if (injective && dims[q] < lo_dim) dims[q] = lo_dim;
    }
    PosetDiagramV::CoverMaps cm;
    for (auto& [lo, hi] : shape->covers()) {
        for (;;) {
            QMat e(dims[hi], dims[lo]);
            for (size_t i = 0; i < dims[hi]; i++)
                for (size_t j = 0; j < dims[lo]; j++) e(i, j) = rng.small_rational();
            if (!injective || e.rank() == dims[lo]) {
                cm[{lo, hi}] = std::move(e);
                break;
            }
        }
    }
    return PosetDiagramV::build(std::move(shape), std::move(dims), cm);
}

} // namespace parex
