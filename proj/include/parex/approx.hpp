#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "parex/diagram.hpp"
#include "parex/functor.hpp"
#include "parex/lattice.hpp"

namespace parex {

inline void validate_excisable(const FinLattice& l, const std::vector<size_t>& sigma) {
    ExcisableStructure s{&l, sigma};
    for (size_t i = 0; i + 1 < sigma.size(); i++)
        if (sigma[i] >= sigma[i + 1]) throw InputError("excisable members must be ascending");
    s.validate();
}

inline std::vector<size_t> bottom_punctured(const FinLattice& l) {
    std::vector<size_t> out;
    for (size_t q = 0; q < l.size(); q++)
        if (q != l.bot()) out.push_back(q);
    return out;
}

// ---- cones -------------------------------------------------------------------

// C_sigma(X): left Kan extension of the diagram with X at the bottom of sigma
// and 0 elsewhere. Always sigma-cocartesian; values away from the image of the
// extension collapse to 0 whenever a second sigma member sits below them.
struct ConeData {
    LkanData kan;
    size_t bot_pos = 0; // position of the lattice bottom inside sigma
    size_t source_dim = 0;
};

inline ConeData c_sigma(std::shared_ptr<const FinLattice> l, const std::vector<size_t>& sigma,
                        size_t dim_x) {
    validate_excisable(*l, sigma);
    ConeData out;
    out.source_dim = dim_x;
    while (sigma[out.bot_pos] != l->bot()) out.bot_pos++;
    auto star_shape = std::make_shared<const FinPoset>(l->induced(sigma));
    std::vector<size_t> dims(sigma.size(), 0);
    dims[out.bot_pos] = dim_x;
    PosetDiagramV::CoverMaps cm;
    for (auto& [lo, hi] : star_shape->covers()) cm[{lo, hi}] = QMat::zero(dims[hi], dims[lo]);
    PosetDiagramV star = PosetDiagramV::build(star_shape, std::move(dims), cm);
    out.kan = lkan(l, sigma, star);
    if (!is_cocartesian(out.kan.diagram, sigma).ok)
        throw std::logic_error("cone diagram is not cocartesian");
    return out;
}

// Levelwise matrices of C_sigma(f) for f: V -> W, natural by construction.
inline std::vector<QMat> c_sigma_map(const ConeData& cv, const ConeData& cw, const QMat& f) {
    if (f.cols() != cv.source_dim || f.rows() != cw.source_dim)
        throw InputError("cone map endpoints do not match");
    const PosetDiagramV& dv = cv.kan.diagram;
    const PosetDiagramV& dw = cw.kan.diagram;
    std::vector<QMat> out;
    for (size_t l = 0; l < dv.shape().size(); l++) {
        std::vector<QMat> blocks;
        for (size_t i : cv.kan.sub[l]) {
            if (i == cv.bot_pos)
                blocks.push_back(f);
            else
                blocks.push_back(QMat::zero(0, 0));
        }
        QMat bd = direct_sum(blocks);
        QMat u = cw.kan.colim[l].proj * bd * cv.kan.colim[l].sect;
        if (u * cv.kan.colim[l].proj != cw.kan.colim[l].proj * bd)
            throw std::logic_error("cone map does not descend to the colimit");
        out.push_back(std::move(u));
    }
    for (auto& [lo, hi] : dv.shape().covers())
        if (out[hi] * dv.map(lo, hi) != dw.map(lo, hi) * out[lo])
            throw std::logic_error("cone map is not natural");
    return out;
}

// ---- the excisive approximation tower -----------------------------------------

// T_sigma F (X) = lim over the bottom-punctured lattice of F applied edgewise
// to C_sigma(X); theta is the canonical comparison F(X) -> T_sigma F (X).
struct TSigmaData {
    ConeData cone;
    std::vector<size_t> punct;
    PosetDiagramV fc;
    LimitData lim;
    QMat theta;
};

inline TSigmaData t_sigma(const VectFunctor& f, std::shared_ptr<const FinLattice> l,
                          const std::vector<size_t>& sigma, size_t dim_x) {
    if (l->degenerate()) throw InputError("approximation needs a nondegenerate lattice");
    TSigmaData out;
    out.cone = c_sigma(l, sigma, dim_x);
    out.punct = bottom_punctured(*l);
    out.fc = f.apply(out.cone.kan.diagram.restrict(out.punct));
    out.lim = lim_v(out.fc);
    QMat legs(0, f.obj(dim_x));
    for (size_t q : out.punct) legs = legs.vstack(f.map(out.cone.kan.diagram.map(l->bot(), q)));
    out.theta = out.lim.retr * legs;
    if (out.lim.incl * out.theta != legs)
        throw std::logic_error("theta legs do not form a cone");
    return out;
}

// T_sigma as a functor again, so the tower can be iterated. Per-dimension data
// is cached; identity maps short-circuit, which keeps nested towers linear in
// depth instead of branching over the punctured lattice at every level.
class TSigmaVectFunctor final : public VectFunctor {
public:
    TSigmaVectFunctor(std::shared_ptr<const VectFunctor> inner,
                      std::shared_ptr<const FinLattice> l, std::vector<size_t> sigma)
        : inner_(std::move(inner)), l_(std::move(l)), sigma_(std::move(sigma)) {
        validate_excisable(*l_, sigma_);
    }

    const TSigmaData& data(size_t dim) const {
        auto it = cache_.find(dim);
        if (it == cache_.end())
            it = cache_.emplace(dim, t_sigma(*inner_, l_, sigma_, dim)).first;
        return it->second;
    }

    size_t obj(size_t dim) const override { return data(dim).lim.dim; }

    QMat map(const QMat& f) const override {
        if (f.rows() == f.cols() && f == QMat::identity(f.rows()))
            return QMat::identity(obj(f.rows()));
        const TSigmaData& a = data(f.cols());
        const TSigmaData& b = data(f.rows());
        std::vector<QMat> lv = c_sigma_map(a.cone, b.cone, f);
        std::vector<QMat> blocks;
        for (size_t q : a.punct) blocks.push_back(inner_->map(lv[q]));
        QMat bd = direct_sum(blocks);
        QMat t = b.lim.retr * bd * a.lim.incl;
        if (b.lim.incl * t != bd * a.lim.incl)
            throw std::logic_error("approximation map does not land in the limit");
        return t;
    }

    std::string describe() const override { return "T[" + inner_->describe() + "]"; }

    const VectFunctor& inner() const { return *inner_; }

private:
    std::shared_ptr<const VectFunctor> inner_;
    std::shared_ptr<const FinLattice> l_;
    std::vector<size_t> sigma_;
    mutable std::map<size_t, TSigmaData> cache_;
};

// ---- stabilization ------------------------------------------------------------

// First stage from which every theta in the tower is invertible, up to the
// cap. Not stabilizing within the cap is an ordinary outcome, not an error.
struct PSigmaResult {
    bool stabilized = false;
    size_t stage = 0;
    size_t value_dim = 0;
    std::vector<size_t> dims;      // F_j(X) for j = 0..cap
    std::vector<bool> theta_iso;   // theta_j for j = 0..cap-1
};

inline PSigmaResult p_sigma(std::shared_ptr<const VectFunctor> f,
                            std::shared_ptr<const FinLattice> l,
                            const std::vector<size_t>& sigma, size_t dim_x, size_t cap = 8) {
    PSigmaResult out;
    std::shared_ptr<const VectFunctor> cur = std::move(f);
    for (size_t j = 0; j < cap; j++) {
        auto wrap = std::make_shared<TSigmaVectFunctor>(cur, l, sigma);
        const TSigmaData& td = wrap->data(dim_x);
        out.dims.push_back(td.theta.cols());
        out.theta_iso.push_back(td.theta.is_invertible());
        cur = wrap;
    }
    out.dims.push_back(cur->obj(dim_x));
    size_t k = cap;
    for (size_t j = cap; j-- > 0;) {
        if (!out.theta_iso[j]) break;
        k = j;
    }
    out.stabilized = k < cap;
    out.stage = k;
    out.value_dim = out.dims[k];
    return out;
}

// ---- Rezk factorization ---------------------------------------------------------

// E(x) = lim over the punctured lattice of q |-> F(D(x ∨ q)). For
// sigma-cocartesian D the canonical maps factor theta at every value of D and
// E is cartesian.
struct RezkData {
    PosetDiagramV e;
    std::vector<QMat> first;  // F(D(x)) -> E(x)
    std::vector<QMat> second; // E(x) -> T_sigma F (D(x))
};

inline RezkData rezk_factorization(std::shared_ptr<const VectFunctor> f,
                                   std::shared_ptr<const FinLattice> l,
                                   const std::vector<size_t>& sigma, const PosetDiagramV& d) {
    if (d.shape_ptr().get() != static_cast<const FinPoset*>(l.get()))
        throw InputError("diagram must live over the given lattice");
    if (!is_cocartesian(d, sigma).ok)
        throw InputError("Rezk factorization needs a sigma-cocartesian diagram");
    size_t bot = l->bot();
    std::vector<size_t> punct = bottom_punctured(*l);
    TSigmaVectFunctor tf(f, l, sigma);

    size_t n = l->size();
    std::vector<PosetDiagramV> rx;
    std::vector<LimitData> lims;
    std::vector<size_t> dims(n);
    for (size_t x = 0; x < n; x++) {
        std::vector<size_t> jmap(n);
        for (size_t q = 0; q < n; q++) jmap[q] = l->join(x, q);
        rx.push_back(d.reindex(l, jmap));
        lims.push_back(lim_v(f->apply(rx.back().restrict(punct))));
        dims[x] = lims.back().dim;
    }

    PosetDiagramV::CoverMaps cm;
    for (auto& [lo, hi] : l->covers()) {
        std::vector<QMat> blocks;
        for (size_t q : punct) blocks.push_back(f->map(d.map(l->join(lo, q), l->join(hi, q))));
        QMat bd = direct_sum(blocks);
        QMat e = lims[hi].retr * bd * lims[lo].incl;
        if (lims[hi].incl * e != bd * lims[lo].incl)
            throw std::logic_error("Rezk edge map does not land in the limit");
        cm[{lo, hi}] = std::move(e);
    }
    RezkData out{PosetDiagramV::build(l, std::move(dims), cm), {}, {}};

    for (size_t x = 0; x < n; x++) {
        // first leg: cone of F(D(x -> x ∨ q)) over the punctured lattice
        QMat legs(0, f->obj(d.dim(x)));
        for (size_t q : punct) legs = legs.vstack(f->map(d.map(x, l->join(x, q))));
        QMat first = lims[x].retr * legs;
        if (lims[x].incl * first != legs)
            throw std::logic_error("Rezk first map legs do not form a cone");

        // second leg: invert the counit of the reindexed diagram, then project
        // onto the cone of D(x)
        const TSigmaData& td = tf.data(d.dim(x));
        LkanData lk = lkan(l, sigma, rx[x].restrict(sigma));
        std::vector<QMat> blocks;
        for (size_t q : punct) {
            QMat m(rx[x].dim(q), 0);
            for (size_t i : lk.sub[q]) m = m.hstack(rx[x].map(sigma[i], q));
            QMat counit = m * lk.colim[q].sect;
            if (counit * lk.colim[q].proj != m)
                throw std::logic_error("counit does not descend to the colimit");
            auto counit_inv = counit.inverse();
            if (!counit_inv)
                throw std::logic_error("reindexed diagram lost cocartesianness");
            std::vector<QMat> star_blocks;
            for (size_t i : lk.sub[q])
                star_blocks.push_back(i == td.cone.bot_pos
                                          ? QMat::identity(d.dim(x))
                                          : QMat::zero(0, rx[x].dim(sigma[i])));
            QMat bd_star = direct_sum(star_blocks);
            QMat lam = td.cone.kan.colim[q].proj * bd_star * lk.colim[q].sect;
            if (lam * lk.colim[q].proj != td.cone.kan.colim[q].proj * bd_star)
                throw std::logic_error("cone projection does not descend");
            blocks.push_back(f->map(lam * *counit_inv));
        }
        QMat bd = direct_sum(blocks);
        QMat second = td.lim.retr * bd * lims[x].incl;
        if (td.lim.incl * second != bd * lims[x].incl)
            throw std::logic_error("Rezk second map does not land in the limit");
        if (second * first != td.theta)
            throw std::logic_error("Rezk maps do not factor theta");
        out.first.push_back(std::move(first));
        out.second.push_back(std::move(second));
    }

    for (auto& [lo, hi] : l->covers()) {
        if (out.e.map(lo, hi) * out.first[lo] != out.first[hi] * f->map(d.map(lo, hi)))
            throw std::logic_error("Rezk first map is not natural");
        if (out.second[hi] * out.e.map(lo, hi) != tf.map(d.map(lo, hi)) * out.second[lo])
            throw std::logic_error("Rezk second map is not natural");
    }
    if (!is_cartesian(out.e).ok) throw std::logic_error("Rezk middle diagram is not cartesian");
    return out;
}

// ---- excisiveness sampling ------------------------------------------------------

struct ExcisiveConfig {
    size_t samples = 20;
    size_t max_dim = 3;
    bool injective = false;
    uint64_t seed = 0;
};

struct ExcisiveReport {
    size_t pass = 0, fail = 0;
    int witness_sample = -1;   // sample with the least total dimension that fails
    int witness_element = -1;  // lattice element where cartesianness breaks
    size_t witness_total_dim = 0;
    uint64_t seed = 0;
};

// Samples sigma-cocartesian diagrams (left Kan extensions of random data on
// sigma) and checks that F applied edgewise is cartesian.
inline ExcisiveReport check_excisive(const VectFunctor& f, std::shared_ptr<const FinLattice> l,
                                     const std::vector<size_t>& sigma,
                                     const ExcisiveConfig& cfg = {}) {
    validate_excisable(*l, sigma);
    auto star_shape = std::make_shared<const FinPoset>(l->induced(sigma));
    bool forest = true;
    for (size_t q = 0; q < star_shape->size() && forest; q++) {
        size_t below = 0;
        for (auto& [lo, hi] : star_shape->covers())
            if (hi == q) below++;
        forest = below <= 1;
    }
    if (cfg.injective && !forest)
        throw InputError("injective sampling needs a forest input shape");
    ExcisiveReport out;
    out.seed = cfg.seed;
    for (size_t s = 0; s < cfg.samples; s++) {
        Rng rng = Rng::for_property(cfg.seed, "excisive/" + std::to_string(s));
        // forest shapes admit independent edge sampling, which is the only way
        // non-injective data can appear; elsewhere fall back to twisted bricks
        PosetDiagramV data =
            forest ? sample_forest_diagram(star_shape, rng, cfg.max_dim, cfg.injective)
                   : sample_diagram(star_shape, rng, cfg.max_dim);
        LkanData lk = lkan(l, sigma, data);
        CartesianCheck r = is_cartesian(f.apply(lk.diagram));
        if (r.ok) {
            out.pass++;
            continue;
        }
        out.fail++;
        size_t total = lk.diagram.total_dim();
        if (out.witness_sample < 0 || total < out.witness_total_dim) {
            out.witness_sample = static_cast<int>(s);
            out.witness_element = r.witness;
            out.witness_total_dim = total;
        }
    }
    return out;
}

// ---- face transport ---------------------------------------------------------------

struct FaceTransportOptions {
    uint64_t seed = 1;
    size_t samples = 6;     // per functor in the excisive-transport battery
    bool check_functors = true;
};

struct FaceTransportReport {
    bool ok = true;
    bool input_cocartesian = false;  // hypothesis for the two transport claims
    bool reindex_cocartesian = true; // every X ∘ (x ∨ -) stays sigma-cocartesian
    bool faces_cocartesian = true;   // every a-face is sigma_a-cocartesian
    bool all_faces_cartesian = false;
    bool x_cartesian = false;
    bool implication_holds = true;   // all faces cartesian => X cartesian
    bool excisive_transport = true;  // sigma_a-excisive => sigma-excisive, per battery
    bool reindex_cartesian = true;   // X ∘ (x ∨ -) cartesian for x != bottom
    int witness_x = -1;
    int witness_d = -1;
    std::vector<size_t> face_elements; // the valid d for the given a
};

inline FaceTransportReport face_transport_check(const PosetDiagramV& x,
                                                std::shared_ptr<const FinLattice> l,
                                                const std::vector<size_t>& sigma, size_t a,
                                                const FaceTransportOptions& opts = {}) {
    if (x.shape_ptr().get() != static_cast<const FinPoset*>(l.get()))
        throw InputError("diagram must live over the given lattice");
    validate_excisable(*l, sigma);
    if (a >= l->size()) throw InputError("face element out of range");

    FaceTransportReport out;
    out.input_cocartesian = is_cocartesian(x, sigma).ok;
    size_t n = l->size();

    for (size_t v = 0; v < n; v++) {
        std::vector<size_t> jmap(n);
        for (size_t q = 0; q < n; q++) jmap[q] = l->join(v, q);
        PosetDiagramV rx = x.reindex(l, jmap);
        if (out.input_cocartesian && !is_cocartesian(rx, sigma).ok) {
            out.reindex_cocartesian = false;
            if (out.witness_x < 0) out.witness_x = static_cast<int>(v);
        }
        if (v != l->bot() && !is_cartesian(rx).ok) {
            out.reindex_cartesian = false;
            if (out.witness_x < 0) out.witness_x = static_cast<int>(v);
        }
    }

    SmashLocalization loc = smash_localization(*l, a);
    ExcisableStructure amb{l.get(), sigma};
    ExcisableStructure ind = induced_excisable(loc, amb);
    out.all_faces_cartesian = true;
    for (size_t dd = 0; dd < n; dd++) {
        if (l->meet(a, dd) != l->bot()) continue;
        out.face_elements.push_back(dd);
        PosetDiagramV face = x.reindex(loc.sub, face_map(*l, loc, dd).map);
        if (out.input_cocartesian && !is_cocartesian(face, ind.members).ok) {
            out.faces_cocartesian = false;
            if (out.witness_d < 0) out.witness_d = static_cast<int>(dd);
        }
        if (!is_cartesian(face).ok) out.all_faces_cartesian = false;
    }
    out.x_cartesian = is_cartesian(x).ok;
    out.implication_holds = !(out.all_faces_cartesian && !out.x_cartesian);

    if (opts.check_functors) {
        for (const FunctorSpec& spec : FunctorSpec::battery()) {
            auto fn = spec.build();
            ExcisiveConfig cfg;
            cfg.samples = opts.samples;
            cfg.seed = Rng::sub_seed(opts.seed, "transport/" + spec.str());
            ExcisiveReport on_face = check_excisive(*fn, loc.sub, ind.members, cfg);
            ExcisiveReport on_whole = check_excisive(*fn, l, sigma, cfg);
            if (on_face.fail == 0 && on_whole.fail > 0) out.excisive_transport = false;
        }
    }

    out.ok = out.reindex_cocartesian && out.faces_cocartesian && out.implication_holds &&
             out.excisive_transport && out.reindex_cartesian;
    return out;
}

// ---- colimit decomposition over a cover ----------------------------------------

struct CoverDecompReport {
    size_t direct_dim = 0;
    size_t decomposed_dim = 0;
    bool equal = false;
};

// Decomposes colim over the shape as a colimit over J of per-piece colimits.
// Pieces must be monotone in J, reach every element and relation of the
// shape, and meet along connected index sets; those conditions make the shape
// the colimit of the pieces.
inline CoverDecompReport appendix_colim_decomposition(const FinPoset& j,
                                                      const std::vector<std::vector<size_t>>& pieces,
                                                      const PosetDiagramV& d) {
    if (pieces.size() != j.size()) throw InputError("one piece per index element required");
    size_t n = d.shape().size();
    for (const auto& piece : pieces)
        for (size_t i = 0; i < piece.size(); i++) {
            if (piece[i] >= n) throw InputError("cover piece leaves the shape");
            if (i + 1 < piece.size() && piece[i] >= piece[i + 1])
                throw InputError("cover pieces must be ascending");
        }
    auto contains = [&](size_t jj, size_t p) {
        return std::binary_search(pieces[jj].begin(), pieces[jj].end(), p);
    };
    for (size_t j1 = 0; j1 < j.size(); j1++)
        for (size_t j2 = 0; j2 < j.size(); j2++)
            if (j.leq(j1, j2))
                for (size_t p : pieces[j1])
                    if (!contains(j2, p))
                        throw InputError("cover pieces are not monotone over the index poset");
    auto connected = [&](const std::vector<size_t>& members) {
        if (members.empty()) return false;
        std::vector<bool> seen(members.size(), false);
        std::vector<size_t> stack{0};
        seen[0] = true;
        while (!stack.empty()) {
            size_t cur = stack.back();
            stack.pop_back();
            for (size_t k = 0; k < members.size(); k++)
                if (!seen[k] &&
                    (j.leq(members[cur], members[k]) || j.leq(members[k], members[cur]))) {
                    seen[k] = true;
                    stack.push_back(k);
                }
        }
        for (bool s : seen)
            if (!s) return false;
        return true;
    };
    for (size_t p = 0; p < n; p++)
        for (size_t q = 0; q < n; q++) {
            if (!d.shape().leq(p, q)) continue;
            std::vector<size_t> both;
            for (size_t jj = 0; jj < j.size(); jj++)
                if (contains(jj, p) && contains(jj, q)) both.push_back(jj);
            if (both.empty()) throw InputError("cover misses part of the shape");
            if (!connected(both))
                throw InputError("cover is not closed under the required intersections");
        }

    ColimitData direct = colim_v(d);
    std::vector<ColimitData> piece_colims;
    std::vector<size_t> jdims(j.size());
    for (size_t jj = 0; jj < j.size(); jj++) {
        piece_colims.push_back(colim_v(d.restrict(pieces[jj])));
        jdims[jj] = piece_colims.back().dim;
    }
    PosetDiagramV::CoverMaps cm;
    for (auto& [lo, hi] : j.covers()) {
        QMat inc = detail::block_inclusion(pieces[lo], pieces[hi], d.dims());
        QMat e = piece_colims[hi].proj * inc * piece_colims[lo].sect;
        if (e * piece_colims[lo].proj != piece_colims[hi].proj * inc)
            throw std::logic_error("piece colimit map does not descend");
        cm[{lo, hi}] = std::move(e);
    }
    auto jshape = std::make_shared<const FinPoset>(j);
    PosetDiagramV over_j = PosetDiagramV::build(jshape, std::move(jdims), cm);
    ColimitData decomposed = colim_v(over_j);

    // canonical map: each piece cocone factors through the direct colimit
    std::vector<size_t> all(n);
    for (size_t p = 0; p < n; p++) all[p] = p;
    QMat legs(direct.dim, 0);
    for (size_t jj = 0; jj < j.size(); jj++) {
        QMat emb = detail::block_inclusion(pieces[jj], all, d.dims());
        QMat leg = direct.proj * emb * piece_colims[jj].sect;
        if (leg * piece_colims[jj].proj != direct.proj * emb)
            throw std::logic_error("piece cocone does not factor through the direct colimit");
        legs = legs.hstack(leg);
    }
    QMat kappa = legs * decomposed.sect;
    if (kappa * decomposed.proj != legs)
        throw std::logic_error("canonical comparison does not descend");

    CoverDecompReport out;
    out.direct_dim = direct.dim;
    out.decomposed_dim = decomposed.dim;
    out.equal = direct.dim == decomposed.dim && kappa.is_invertible();
    if (!out.equal) throw std::logic_error("cover decomposition disagrees with the direct colimit");
    return out;
}

// ---- semiadditivity probe ----------------------------------------------------------

struct SemiadditiveReport {
    bool square_pushout = false;
    bool comparison_iso = false;
    size_t lhs_dim = 0;
    size_t rhs_dim = 0;
};

// The square (X⊕Y; X, Y; 0) with collapse maps is a pushout in Vect; F is
// semiadditive on it when F(X⊕Y) -> F(X) ⊕ F(Y) is invertible. Failures are
// reported, not thrown: constants are expected to fail.
inline SemiadditiveReport semiadditive_square_check(const VectFunctor& f, size_t dim_x,
                                                    size_t dim_y) {
    auto square = std::make_shared<const FinLattice>(powerset_lattice(2));
    size_t bot = square->bot(), top = square->top();
    std::vector<size_t> atoms = square->atoms();
    std::vector<size_t> dims(4);
    dims[bot] = dim_x + dim_y;
    dims[atoms[0]] = dim_x;
    dims[atoms[1]] = dim_y;
    dims[top] = 0;
    QMat px(dim_x, dim_x + dim_y), py(dim_y, dim_x + dim_y);
    px.set_block(0, 0, QMat::identity(dim_x));
    py.set_block(0, dim_x, QMat::identity(dim_y));
    PosetDiagramV::CoverMaps cm;
    cm[{bot, atoms[0]}] = px;
    cm[{bot, atoms[1]}] = py;
    cm[{atoms[0], top}] = QMat::zero(0, dim_x);
    cm[{atoms[1], top}] = QMat::zero(0, dim_y);
    PosetDiagramV d = PosetDiagramV::build(square, std::move(dims), cm);

    std::vector<size_t> star{bot, atoms[0], atoms[1]};
    std::sort(star.begin(), star.end());
    SemiadditiveReport out;
    out.square_pushout = is_cocartesian(d, star).ok;
    QMat cmp = f.map(px).vstack(f.map(py));
    out.lhs_dim = f.obj(dim_x + dim_y);
    out.rhs_dim = f.obj(dim_x) + f.obj(dim_y);
    out.comparison_iso = cmp.rows() == cmp.cols() && cmp.is_invertible();
    return out;
}

} // namespace parex
