#pragma once

#include <memory>
#include <optional>
#include <set>

#include "parex/poset.hpp"

namespace parex {

inline constexpr size_t kMaxLatticeSize = 256; // checks stay exhaustive up to 2^8

struct DistributivityWitness {
    size_t x, y, z; // x ∧ (y ∨ z) != (x ∧ y) ∨ (x ∧ z)
};

// Finite lattice: bounded poset with total meet/join tables, built eagerly at
// construction. Construction fails (InputError) unless every pair has a glb
// and lub and the poset is bounded and nonempty.
class FinLattice : public FinPoset {
public:
    static FinLattice from_poset(FinPoset p) {
        FinLattice l(std::move(p));
        l.build_tables();
        return l;
    }

    static FinLattice from_covers(std::vector<int64_t> ids,
                                  const std::vector<std::pair<int64_t, int64_t>>& covers) {
        return from_poset(FinPoset::from_covers(std::move(ids), covers));
    }

    size_t meet(size_t a, size_t b) const { return meet_[a][b]; }
    size_t join(size_t a, size_t b) const { return join_[a][b]; }
    size_t bot() const { return bot_; }
    size_t top() const { return top_; }
    bool degenerate() const { return size() == 1; } // one-element: bot == top

    size_t meet_all(const std::vector<size_t>& xs) const {
        size_t acc = top_;
        for (size_t x : xs) acc = meet(acc, x);
        return acc;
    }
    size_t join_all(const std::vector<size_t>& xs) const {
        size_t acc = bot_;
        for (size_t x : xs) acc = join(acc, x);
        return acc;
    }

    // exhaustive triple scan
    std::optional<DistributivityWitness> distributivity_witness() const {
        for (size_t x = 0; x < size(); x++)
            for (size_t y = 0; y < size(); y++)
                for (size_t z = 0; z < size(); z++)
                    if (meet(x, join(y, z)) != join(meet(x, y), meet(x, z)))
                        return DistributivityWitness{x, y, z};
        return std::nullopt;
    }
    bool is_distributive() const { return !distributivity_witness().has_value(); }

    // Unique complement if one exists. Two distinct complements mean the
    // distributivity validation upstream was broken, so that case aborts.
    std::optional<size_t> complement(size_t x) const {
        std::optional<size_t> found;
        for (size_t c = 0; c < size(); c++) {
            if (join(x, c) == top_ && meet(x, c) == bot_) {
                if (found && is_distributive())
                    throw std::logic_error("ambiguous complement in a distributive lattice");
                if (!found) found = c;
            }
        }
        return found;
    }

    bool is_complementable() const {
        for (size_t x = 0; x < size(); x++)
            if (!complement(x)) return false;
        return true;
    }

    std::vector<size_t> atoms() const {
        std::vector<size_t> out;
        for (auto& [a, b] : covers())
            if (a == bot_) out.push_back(b);
        return out;
    }

private:
    explicit FinLattice(FinPoset p) : FinPoset(std::move(p)) {}

    void build_tables() {
        if (size() == 0) throw InputError("empty lattice");
        if (size() > kMaxLatticeSize) throw InputError("lattice exceeds size cap");
        int b = FinPoset::bottom(), t = FinPoset::top();
        if (b < 0 || t < 0) throw InputError("not a lattice: missing bottom or top");
        bot_ = static_cast<size_t>(b);
        top_ = static_cast<size_t>(t);
        size_t n = size();
        meet_.assign(n, std::vector<size_t>(n));
        join_.assign(n, std::vector<size_t>(n));
        for (size_t a = 0; a < n; a++)
            for (size_t c = 0; c < n; c++) {
                meet_[a][c] = bound(a, c, /*lower=*/true);
                join_[a][c] = bound(a, c, /*lower=*/false);
            }
    }

    // greatest lower / least upper bound; throws if not unique
    size_t bound(size_t a, size_t c, bool lower) const {
        int best = -1;
        for (size_t m = 0; m < size(); m++) {
            bool bnd = lower ? (leq(m, a) && leq(m, c)) : (leq(a, m) && leq(c, m));
            if (!bnd) continue;
            if (best < 0) { best = static_cast<int>(m); continue; }
            if (lower ? leq(best, m) : leq(m, best)) best = static_cast<int>(m);
        }
        if (best < 0) throw InputError("not a lattice: unbounded pair");
        for (size_t m = 0; m < size(); m++) {
            bool bnd = lower ? (leq(m, a) && leq(m, c)) : (leq(a, m) && leq(c, m));
            if (bnd && !(lower ? leq(m, best) : leq(best, m)))
                throw InputError("not a lattice: no unique meet/join");
        }
        return static_cast<size_t>(best);
    }

    size_t bot_ = 0, top_ = 0;
    std::vector<std::vector<size_t>> meet_, join_;
};

// ---- builders ------------------------------------------------------------

// Subsets of {0..n-1}; element id = bitmask.
inline FinLattice powerset_lattice(unsigned n) {
    if (n > 8) throw InputError("powerset exceeds size cap");
    std::vector<int64_t> ids;
    std::vector<std::pair<int64_t, int64_t>> covers;
    for (int64_t s = 0; s < (1 << n); s++) {
        ids.push_back(s);
        for (unsigned b = 0; b < n; b++)
            if (!(s & (1 << b))) covers.push_back({s, s | (1 << b)});
    }
    return FinLattice::from_covers(std::move(ids), covers);
}

inline FinLattice chain_lattice(unsigned len) { // len+1 elements 0 < 1 < ... < len
    std::vector<int64_t> ids;
    std::vector<std::pair<int64_t, int64_t>> covers;
    for (int64_t i = 0; i <= len; i++) {
        ids.push_back(i);
        if (i > 0) covers.push_back({i - 1, i});
    }
    return FinLattice::from_covers(std::move(ids), covers);
}

inline FinLattice diamond_m3() { // 0 < a,b,c < 1: modular, not distributive
    return FinLattice::from_covers({0, 1, 2, 3, 4},
                                   {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 4}, {3, 4}});
}

inline FinLattice pentagon_n5() { // 0 < a < b < 1, 0 < c < 1: not modular
    return FinLattice::from_covers({0, 1, 2, 3, 4}, {{0, 1}, {1, 2}, {2, 4}, {0, 3}, {3, 4}});
}

// Product lattice; id of (u,v) = u_index * |B| + v_index.
inline FinLattice product_lattice(const FinLattice& A, const FinLattice& B) {
    std::vector<int64_t> ids;
    size_t nb = B.size();
    std::vector<std::vector<bool>> leq(A.size() * nb, std::vector<bool>(A.size() * nb, false));
    for (size_t u = 0; u < A.size(); u++)
        for (size_t v = 0; v < nb; v++) ids.push_back(static_cast<int64_t>(u * nb + v));
    for (size_t u = 0; u < A.size(); u++)
        for (size_t v = 0; v < nb; v++)
            for (size_t u2 = 0; u2 < A.size(); u2++)
                for (size_t v2 = 0; v2 < nb; v2++)
                    leq[u * nb + v][u2 * nb + v2] = A.leq(u, u2) && B.leq(v, v2);
    return FinLattice::from_poset(FinPoset::from_leq(std::move(ids), std::move(leq)));
}

// ---- excisable structures --------------------------------------------------

// Nonempty downward-closed subset of a lattice, the shape that excisive
// approximation is taken against. Stored as sorted element indices.
struct ExcisableStructure {
    const FinLattice* lattice = nullptr;
    std::vector<size_t> members;

    bool contains(size_t x) const {
        return std::binary_search(members.begin(), members.end(), x);
    }

    void validate() const {
        if (members.empty()) throw InputError("excisable structure is empty");
        for (size_t m : members)
            if (m >= lattice->size()) throw InputError("excisable member out of range");
        if (!contains(lattice->bot())) throw InputError("excisable structure misses bottom");
        for (size_t m : members)
            for (size_t below = 0; below < lattice->size(); below++)
                if (lattice->leq(below, m) && !contains(below))
                    throw InputError("excisable structure not downward closed");
    }
};

inline ExcisableStructure singleton_star(const FinLattice& L) {
    ExcisableStructure s;
    s.lattice = &L;
    s.members.push_back(L.bot());
    for (size_t a : L.atoms()) s.members.push_back(a);
    std::sort(s.members.begin(), s.members.end());
    s.validate();
    return s;
}

// ---- smashing (co)localisations ---------------------------------------------

// The image of x ∧ (-) is the down-set of x, itself a lattice. The sublattice
// lives on the heap so the maps' endpoint pointers survive moves of this
// struct.
struct SmashLocalization {
    std::shared_ptr<const FinLattice> sub; // L_x with original element ids
    std::vector<size_t> to_ambient;        // index in L per index in L_x
    MonotoneMap project;                   // L -> L_x,  a |-> x ∧ a
    MonotoneMap incl_bot;                  // L_x -> L,  b |-> b          (∅ ∨ -)
    MonotoneMap incl_comp;                 // L_x -> L,  b |-> x^c ∨ b
};

inline SmashLocalization smash_localization(const FinLattice& L, size_t x) {
    auto xc = L.complement(x);
    if (!xc) throw InputError("smash localization needs a complemented element");
    SmashLocalization out;
    out.to_ambient = L.down_set(x);
    out.sub = std::make_shared<const FinLattice>(
        FinLattice::from_poset(L.induced(out.to_ambient)));
    std::vector<size_t> to_sub(L.size());
    for (size_t i = 0; i < out.to_ambient.size(); i++) to_sub[out.to_ambient[i]] = i;

    out.project = {&L, out.sub.get(), {}};
    out.project.map.resize(L.size());
    for (size_t a = 0; a < L.size(); a++) out.project.map[a] = to_sub[L.meet(x, a)];

    out.incl_bot = {out.sub.get(), &L, out.to_ambient};
    out.incl_comp = {out.sub.get(), &L, {}};
    out.incl_comp.map.resize(out.sub->size());
    for (size_t b = 0; b < out.sub->size(); b++)
        out.incl_comp.map[b] = L.join(*xc, out.to_ambient[b]);

    // adjoint triple: plain inclusion ⊣ project ⊣ complement-shifted inclusion
    if (!check_galois(out.incl_bot, out.project) || !check_galois(out.project, out.incl_comp))
        throw std::logic_error("smash localization adjunctions failed");
    return out;
}

// ---- complement decomposition ----------------------------------------------

// L ≅ L_x × L_{x^c} via a |-> (x ∧ a, x^c ∧ a), inverse (u,v) |-> u ∨ v.
struct ComplementDecomposition {
    std::shared_ptr<const FinLattice> product; // L_x × L_{x^c}, ids encode the index pair
    SmashLocalization part, copart;
    MonotoneMap fwd; // L -> product
    MonotoneMap bwd; // product -> L
};

inline ComplementDecomposition complement_decomposition(const FinLattice& L, size_t x) {
    auto xc = L.complement(x);
    if (!xc) throw InputError("complement decomposition needs a complemented element");
    ComplementDecomposition out;
    out.part = smash_localization(L, x);
    out.copart = smash_localization(L, *xc);
    out.product = std::make_shared<const FinLattice>(
        product_lattice(*out.part.sub, *out.copart.sub));
    size_t nb = out.copart.sub->size();

    out.fwd = {&L, out.product.get(), {}};
    out.fwd.map.resize(L.size());
    for (size_t a = 0; a < L.size(); a++)
        out.fwd.map[a] = out.part.project.map[a] * nb + out.copart.project.map[a];

    out.bwd = {out.product.get(), &L, {}};
    out.bwd.map.resize(out.product->size());
    for (size_t u = 0; u < out.part.sub->size(); u++)
        for (size_t v = 0; v < nb; v++)
            out.bwd.map[u * nb + v] = L.join(out.part.to_ambient[u], out.copart.to_ambient[v]);

    for (size_t a = 0; a < L.size(); a++)
        if (out.bwd.map[out.fwd.map[a]] != a)
            throw std::logic_error("complement decomposition does not round-trip");
    for (size_t p = 0; p < out.product->size(); p++)
        if (out.fwd.map[out.bwd.map[p]] != p)
            throw std::logic_error("complement decomposition does not round-trip");
    if (!out.fwd.is_monotone() || !out.bwd.is_monotone())
        throw std::logic_error("complement decomposition not monotone");
    return out;
}

// Image of an excisable structure under x ∧ (-), living on L_x.
inline ExcisableStructure induced_excisable(const SmashLocalization& loc,
                                            const ExcisableStructure& sigma) {
    ExcisableStructure out;
    out.lattice = loc.sub.get();
    std::set<size_t> seen;
    for (size_t m : sigma.members) seen.insert(loc.project.map[m]);
    out.members.assign(seen.begin(), seen.end());
    out.validate(); // downward closure is a theorem here; still asserted
    return out;
}

// ---- decomposition triples and faces -----------------------------------------

// (a, d, z): pairwise disjoint, join = top, z = (a ∨ d)^c.
struct DecompositionTriple {
    size_t a, d, z;
};

inline DecompositionTriple make_triple(const FinLattice& L, size_t a, size_t d) {
    if (L.meet(a, d) != L.bot()) throw InputError("triple parts not disjoint");
    auto z = L.complement(L.join(a, d));
    if (!z) throw InputError("triple remainder not complemented");
    DecompositionTriple t{a, d, *z};
    if (L.meet(t.a, t.z) != L.bot() || L.meet(t.d, t.z) != L.bot() ||
        L.join(L.join(t.a, t.d), t.z) != L.top())
        throw std::logic_error("decomposition triple invariants failed");
    return t;
}

// Face embedding L_a -> L, y |-> d ∨ y, for disjoint a and d.
inline MonotoneMap face_map(const FinLattice& L, const SmashLocalization& la, size_t d) {
    size_t a = la.to_ambient[la.sub->top()];
    if (L.meet(a, d) != L.bot()) throw InputError("face direction not disjoint from d");
    MonotoneMap f{la.sub.get(), &L, {}};
    f.map.resize(la.sub->size());
    for (size_t y = 0; y < la.sub->size(); y++) f.map[y] = L.join(d, la.to_ambient[y]);
    if (!f.is_monotone() || !f.is_injective() || !f.is_order_reflecting())
        throw std::logic_error("face map is not a full embedding");
    return f;
}

// ---- Boolean cross-validation oracle -----------------------------------------

// For a complementable distributive lattice, x |-> { atoms below x } is an
// isomorphism onto the powerset of the atom set.
inline bool boolean_atom_iso(const FinLattice& L) {
    auto at = L.atoms();
    if (L.size() != (size_t{1} << at.size())) return false;
    std::set<std::vector<bool>> images;
    for (size_t x = 0; x < L.size(); x++) {
        std::vector<bool> below(at.size());
        for (size_t i = 0; i < at.size(); i++) below[i] = L.leq(at[i], x);
        if (!images.insert(below).second) return false;
    }
    // order must agree with subset order on atom supports
    for (size_t x = 0; x < L.size(); x++)
        for (size_t y = 0; y < L.size(); y++) {
            bool subset = true;
            for (size_t i = 0; i < at.size(); i++)
                if (L.leq(at[i], x) && !L.leq(at[i], y)) { subset = false; break; }
            if (subset != L.leq(x, y)) return false;
        }
    return true;
}

} // namespace parex
