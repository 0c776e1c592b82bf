#pragma once

#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "parex/matrix.hpp"
#include "parex/poset.hpp"
#include "parex/rng.hpp"

namespace parex {

// Chain complexes of finite-dimensional Q-vector spaces, supported in the
// fixed degree window [kChainLo, kChainHi]. Input complexes are capped at
// kChainInputCap; derived complexes (totalizations, Kan extensions, Hom
// complexes) may grow past that up to the hard kChainTotalCap guard. Every
// construction that could leave the window throws InputError instead of
// silently truncating.
constexpr int kChainLo = -8;
constexpr int kChainHi = 8;
constexpr size_t kChainDegrees = static_cast<size_t>(kChainHi - kChainLo + 1);
constexpr size_t kChainInputCap = 64;
constexpr size_t kChainTotalCap = 4096;

inline bool chain_degree_ok(int n) { return n >= kChainLo && n <= kChainHi; }
inline size_t chain_idx(int n) { return static_cast<size_t>(n - kChainLo); }

class ChainComplex {
public:
    ChainComplex() : dims_(kChainDegrees, 0), d_(kChainDegrees, QMat(0, 0)) {}

    // dims/d given sparsely by degree; d at degree n maps C_n -> C_{n-1}.
    static ChainComplex build(const std::map<int, size_t>& dims,
                              const std::map<int, QMat>& d) {
        ChainComplex x;
        for (auto& [n, k] : dims) {
            if (!chain_degree_ok(n)) throw InputError("chain degree outside the bounded window");
            x.dims_[chain_idx(n)] = k;
        }
        for (auto& [n, m] : d) {
            if (!chain_degree_ok(n)) throw InputError("chain degree outside the bounded window");
            x.d_[chain_idx(n)] = m;
        }
        x.normalize_();
        x.validate_();
        return x;
    }

    static ChainComplex zero() { return ChainComplex(); }

    // rank generators in degree n, no differential
    static ChainComplex sphere(int n, size_t rank = 1) {
        std::map<int, size_t> dims;
        dims[n] = rank;
        return build(dims, {});
    }

    // acyclic: identity differential from degree n to n-1
    static ChainComplex disc(int n) {
        std::map<int, size_t> dims;
        dims[n] = 1;
        dims[n - 1] = 1;
        std::map<int, QMat> d;
        d[n] = QMat::identity(1);
        return build(dims, d);
    }

    size_t dim(int n) const { return chain_degree_ok(n) ? dims_[chain_idx(n)] : 0; }

    // differential C_n -> C_{n-1}; correctly shaped zero outside the support
    QMat d(int n) const {
        if (!chain_degree_ok(n) || dims_[chain_idx(n)] == 0 || dim(n - 1) == 0)
            return QMat(dim(n - 1), dim(n));
        return d_[chain_idx(n)];
    }

    size_t total_dim() const {
        size_t t = 0;
        for (size_t k : dims_) t += k;
        return t;
    }

    // tightest support; empty complex reports lo() > hi()
    int lo() const {
        for (int n = kChainLo; n <= kChainHi; n++)
            if (dim(n)) return n;
        return kChainHi + 1;
    }
    int hi() const {
        for (int n = kChainHi; n >= kChainLo; n--)
            if (dim(n)) return n;
        return kChainLo - 1;
    }

    bool operator==(const ChainComplex& o) const {
        for (int n = kChainLo; n <= kChainHi; n++)
            if (dim(n) != o.dim(n) || d(n) != o.d(n)) return false;
        return true;
    }

    // X[k]_n = X_{n-k}, differential scaled by (-1)^k
    ChainComplex shifted(int k) const {
        std::map<int, size_t> dims;
        std::map<int, QMat> dd;
        for (int n = kChainLo; n <= kChainHi; n++) {
            if (!dim(n)) continue;
            if (!chain_degree_ok(n + k))
                throw InputError("shift leaves the bounded degree window");
            dims[n + k] = dim(n);
            QMat m = d(n);
            if (k % 2 != 0) m = -m;
            if (chain_degree_ok(n + k - 1)) dd[n + k] = m;
            else if (m.rows() > 0)
                throw InputError("shift leaves the bounded degree window");
        }
        return build(dims, dd);
    }

private:
    std::vector<size_t> dims_;
    std::vector<QMat> d_;

    void normalize_() {
        // give every stored differential its canonical shape
        std::vector<QMat> out;
        for (size_t i = 0; i < kChainDegrees; i++) {
            size_t rows = i == 0 ? 0 : dims_[i - 1];
            size_t cols = dims_[i];
            if (i < d_.size() && d_[i].rows() == rows && d_[i].cols() == cols)
                out.push_back(d_[i]);
            else if (i < d_.size() && !(d_[i].rows() == 0 && d_[i].cols() == 0) &&
                     !d_[i].is_zero())
                throw InputError("differential has the wrong shape");
            else
                out.push_back(QMat(rows, cols));
        }
        d_ = out;
    }

    void validate_() const {
        if (total_dim() > kChainTotalCap)
            throw InputError("chain complex exceeds the total dimension cap");
        for (int n = kChainLo + 1; n <= kChainHi; n++)
            if (!(d(n - 1) * d(n)).is_zero())
                throw InputError("differential does not square to zero");
    }
};

// Degreewise maps f_n : X_n -> Y_n. Stored densely over the degree window.
struct ChainMap {
    std::vector<QMat> f;

    ChainMap() : f(kChainDegrees) {}

    const QMat& at(int n) const { return f[chain_idx(n)]; }
    QMat& at(int n) { return f[chain_idx(n)]; }
};

inline ChainMap chain_map_zero(const ChainComplex& x, const ChainComplex& y) {
    ChainMap m;
    for (int n = kChainLo; n <= kChainHi; n++) m.at(n) = QMat(y.dim(n), x.dim(n));
    return m;
}

inline ChainMap chain_map_identity(const ChainComplex& x) {
    ChainMap m;
    for (int n = kChainLo; n <= kChainHi; n++) m.at(n) = QMat::identity(x.dim(n));
    return m;
}

inline void validate_chain_map(const ChainComplex& x, const ChainComplex& y,
                               const ChainMap& m, const char* what = "chain map") {
    for (int n = kChainLo; n <= kChainHi; n++) {
        if (m.at(n).rows() != y.dim(n) || m.at(n).cols() != x.dim(n))
            throw InputError(std::string(what) + " has the wrong shape");
        if (n > kChainLo && y.d(n) * m.at(n) != m.at(n - 1) * x.d(n))
            throw InputError(std::string(what) + " does not commute with the differential");
    }
}

inline bool is_chain_map(const ChainComplex& x, const ChainComplex& y, const ChainMap& m) {
    for (int n = kChainLo; n <= kChainHi; n++) {
        if (m.at(n).rows() != y.dim(n) || m.at(n).cols() != x.dim(n)) return false;
        if (n > kChainLo && y.d(n) * m.at(n) != m.at(n - 1) * x.d(n)) return false;
    }
    return true;
}

inline ChainMap compose(const ChainMap& g, const ChainMap& f) {
    ChainMap m;
    for (size_t i = 0; i < kChainDegrees; i++) m.f[i] = g.f[i] * f.f[i];
    return m;
}

inline ChainMap cm_add(const ChainMap& a, const ChainMap& b) {
    ChainMap m;
    for (size_t i = 0; i < kChainDegrees; i++) m.f[i] = a.f[i] + b.f[i];
    return m;
}

inline ChainMap cm_sub(const ChainMap& a, const ChainMap& b) {
    ChainMap m;
    for (size_t i = 0; i < kChainDegrees; i++) m.f[i] = a.f[i] - b.f[i];
    return m;
}

inline bool cm_is_zero(const ChainMap& a) {
    for (const QMat& q : a.f)
        if (!q.is_zero()) return false;
    return true;
}

// (X^*)_n = X_{-n}; the dual differential is the transpose, no sign needed
// since transposition already reverses composition.
inline ChainComplex dualize(const ChainComplex& x) {
    std::map<int, size_t> dims;
    std::map<int, QMat> dd;
    for (int n = kChainLo; n <= kChainHi; n++) {
        if (!chain_degree_ok(-n)) continue;
        if (x.dim(-n)) dims[n] = x.dim(-n);
        QMat t = x.d(-n + 1).transposed();
        if (t.rows() || t.cols()) dd[n] = t;
    }
    return ChainComplex::build(dims, dd);
}

// contravariant on maps: f : X -> Y gives f^* : Y^* -> X^*
inline ChainMap dualize_map(const ChainMap& f) {
    ChainMap m;
    for (int n = kChainLo; n <= kChainHi; n++) {
        if (!chain_degree_ok(-n)) { m.at(n) = QMat(0, 0); continue; }
        m.at(n) = f.f[chain_idx(-n)].transposed();
    }
    return m;
}

// cone(f)_n = X_{n-1} + Y_n, d(x, y) = (-dx, fx + dy); acyclic iff f is a
// quasi-isomorphism.
inline ChainComplex mapping_cone(const ChainComplex& x, const ChainComplex& y,
                                 const ChainMap& f) {
    validate_chain_map(x, y, f, "cone input");
    if (x.dim(kChainHi) > 0)
        throw InputError("mapping cone leaves the bounded degree window");
    std::map<int, size_t> dims;
    std::map<int, QMat> dd;
    for (int n = kChainLo; n <= kChainHi; n++) {
        size_t k = x.dim(n - 1) + y.dim(n);
        if (k) dims[n] = k;
    }
    for (int n = kChainLo + 1; n <= kChainHi; n++) {
        size_t rx = x.dim(n - 2);
        QMat m(rx + y.dim(n - 1), x.dim(n - 1) + y.dim(n));
        m.set_block(0, 0, -x.d(n - 1));
        m.set_block(rx, 0, f.at(n - 1));
        m.set_block(rx, x.dim(n - 1), y.d(n));
        if (m.rows() || m.cols()) dd[n] = m;
    }
    return ChainComplex::build(dims, dd);
}

// Cycle and class data per degree: columns of z_incl span ker d_n with
// z_retr * z_incl = id; h_proj presents H_n = ker d_n / im d_{n+1} with a
// section h_sect.
struct HomologyData {
    std::vector<QMat> z_incl, z_retr, h_proj, h_sect;
    std::vector<size_t> rank;

    size_t rank_at(int n) const { return rank[chain_idx(n)]; }
    size_t total_rank() const {
        size_t t = 0;
        for (size_t r : rank) t += r;
        return t;
    }
};

inline HomologyData homology(const ChainComplex& x) {
    HomologyData h;
    h.z_incl.resize(kChainDegrees);
    h.z_retr.resize(kChainDegrees);
    h.h_proj.resize(kChainDegrees);
    h.h_sect.resize(kChainDegrees);
    h.rank.resize(kChainDegrees);
    for (int n = kChainLo; n <= kChainHi; n++) {
        KernelData z = kernel_with_retraction(x.d(n));
        QMat into = chain_degree_ok(n + 1) ? x.d(n + 1) : QMat(x.dim(n), 0);
        // boundaries lie in the cycles, so the retraction lifts them exactly
        QMat lift = z.retr * into;
        assert(z.incl * lift == into);
        CokernelData c = cokernel_with_section(lift);
        size_t i = chain_idx(n);
        h.z_incl[i] = z.incl;
        h.z_retr[i] = z.retr;
        h.h_proj[i] = c.proj;
        h.h_sect[i] = c.sect;
        h.rank[i] = c.proj.rows();
    }
    return h;
}

// matrix of H_n(f) against the stored class bases
inline QMat induced_on_homology(const HomologyData& hx, const HomologyData& hy,
                                const ChainMap& f, int n) {
    size_t i = chain_idx(n);
    QMat on_cycles = hy.z_retr[i] * f.at(n) * hx.z_incl[i];
    assert(hy.z_incl[i] * on_cycles == f.at(n) * hx.z_incl[i]);
    return hy.h_proj[i] * on_cycles * hx.h_sect[i];
}

inline bool is_qis(const ChainComplex& x, const ChainComplex& y, const ChainMap& f) {
    HomologyData hx = homology(x), hy = homology(y);
    for (int n = kChainLo; n <= kChainHi; n++) {
        if (hx.rank_at(n) != hy.rank_at(n)) return false;
        if (!induced_on_homology(hx, hy, f, n).is_invertible()) return false;
    }
    return true;
}

inline bool qis_via_cone(const ChainComplex& x, const ChainComplex& y, const ChainMap& f) {
    return homology(mapping_cone(x, y, f)).total_rank() == 0;
}

// Linear system whose unknowns are matrices; equations are sums of
// L * U * R products equated to a constant. Solved exactly over Q.
class MatEqSystem {
public:
    size_t unknown(size_t rows, size_t cols) {
        fams_.push_back({rows, cols, nvars_});
        nvars_ += rows * cols;
        return fams_.size() - 1;
    }

    struct Term {
        QMat left;
        size_t fam;
        QMat right;
    };

    void equation(const std::vector<Term>& terms, const QMat& c) {
        for (const Term& t : terms) {
            assert(t.left.cols() == fams_[t.fam].rows);
            assert(t.right.rows() == fams_[t.fam].cols);
            assert(t.left.rows() == c.rows() && t.right.cols() == c.cols());
        }
        for (size_t i = 0; i < c.rows(); i++)
            for (size_t j = 0; j < c.cols(); j++) {
                std::vector<Rational> row(nvars_);
                bool any = false;
                for (const Term& t : terms) {
                    const Fam& fm = fams_[t.fam];
                    for (size_t p = 0; p < fm.rows; p++) {
                        const Rational& l = t.left(i, p);
                        if (l == 0) continue;
                        for (size_t q = 0; q < fm.cols; q++) {
                            const Rational& r = t.right(q, j);
                            if (r == 0) continue;
                            row[fm.offset + p * fm.cols + q] += l * r;
                            any = true;
                        }
                    }
                }
                if (!any && c(i, j) == 0) continue;
                rows_.push_back(std::move(row));
                rhs_.push_back(c(i, j));
            }
    }

    size_t var_count() const { return nvars_; }

    std::optional<std::vector<QMat>> solve() const {
        QMat a(rows_.size(), nvars_);
        QMat b(rows_.size(), 1);
        for (size_t i = 0; i < rows_.size(); i++) {
            for (size_t j = 0; j < nvars_; j++) a(i, j) = rows_[i][j];
            b(i, 0) = rhs_[i];
        }
        auto x = a.solve(b);
        if (!x) return std::nullopt;
        return unpack_(*x);
    }

    // basis of the homogeneous solution space, each element unpacked
    std::vector<std::vector<QMat>> kernel() const {
        QMat a(rows_.size(), nvars_);
        for (size_t i = 0; i < rows_.size(); i++)
            for (size_t j = 0; j < nvars_; j++) a(i, j) = rows_[i][j];
        QMat k = a.kernel_basis();
        std::vector<std::vector<QMat>> out;
        for (size_t c = 0; c < k.cols(); c++)
            out.push_back(unpack_(k.block(0, c, nvars_, 1)));
        return out;
    }

private:
    struct Fam {
        size_t rows, cols, offset;
    };
    std::vector<Fam> fams_;
    size_t nvars_ = 0;
    std::vector<std::vector<Rational>> rows_;
    std::vector<Rational> rhs_;

    std::vector<QMat> unpack_(const QMat& x) const {
        std::vector<QMat> out;
        for (const Fam& fm : fams_) {
            QMat m(fm.rows, fm.cols);
            for (size_t p = 0; p < fm.rows; p++)
                for (size_t q = 0; q < fm.cols; q++)
                    m(p, q) = x(fm.offset + p * fm.cols + q, 0);
            out.push_back(m);
        }
        return out;
    }
};

// h with d h + h d = f, if one exists; h_n : X_n -> Y_{n+1}
inline std::optional<ChainMap> nullhomotopy(const ChainComplex& x, const ChainComplex& y,
                                            const ChainMap& f) {
    MatEqSystem sys;
    std::vector<size_t> fam(kChainDegrees);
    for (int n = kChainLo; n <= kChainHi; n++)
        fam[chain_idx(n)] = sys.unknown(chain_degree_ok(n + 1) ? y.dim(n + 1) : 0, x.dim(n));
    for (int n = kChainLo; n <= kChainHi; n++) {
        std::vector<MatEqSystem::Term> terms;
        if (chain_degree_ok(n + 1))
            terms.push_back({y.d(n + 1), fam[chain_idx(n)], QMat::identity(x.dim(n))});
        if (n > kChainLo)
            terms.push_back({QMat::identity(y.dim(n)), fam[chain_idx(n - 1)], x.d(n)});
        sys.equation(terms, f.at(n));
    }
    auto sol = sys.solve();
    if (!sol) return std::nullopt;
    ChainMap h;
    for (int n = kChainLo; n <= kChainHi; n++) {
        h.at(n) = (*sol)[chain_idx(n)];
        if (!chain_degree_ok(n + 1)) h.at(n) = QMat(0, x.dim(n));
    }
    return h;
}

// chain homotopy classes: f ~ g iff f - g bounds
inline bool chain_homotopic(const ChainComplex& x, const ChainComplex& y,
                            const ChainMap& f, const ChainMap& g) {
    return nullhomotopy(x, y, cm_sub(f, g)).has_value();
}

// random complex: dims drawn in [lo, hi], each differential built inside the
// kernel of the previous one so d*d = 0 holds by construction
inline ChainComplex random_complex(Rng& rng, int lo, int hi, size_t max_dim,
                                   size_t total_cap = kChainInputCap) {
    if (lo < kChainLo || hi > kChainHi || lo > hi)
        throw InputError("random complex window is invalid");
    std::map<int, size_t> dims;
    size_t total = 0;
    for (int n = lo; n <= hi; n++) {
        size_t k = rng.below(max_dim + 1);
        k = std::min(k, total_cap - total);
        total += k;
        if (k) dims[n] = k;
    }
    ChainComplex shape = ChainComplex::build(dims, {});
    std::map<int, QMat> dd;
    QMat prev(0, shape.dim(lo)); // differential below the support is zero
    for (int n = lo + 1; n <= hi; n++) {
        QMat kb = prev.cols() ? prev.kernel_basis() : QMat(shape.dim(n - 1), shape.dim(n - 1));
        if (prev.cols() == 0) kb = QMat::identity(shape.dim(n - 1));
        QMat r(kb.cols(), shape.dim(n));
        for (size_t i = 0; i < r.rows(); i++)
            for (size_t j = 0; j < r.cols(); j++)
                if (rng.chance(0.5)) r(i, j) = rng.small_rational();
        QMat dn = kb * r;
        if (dn.rows() && dn.cols()) dd[n] = dn;
        prev = dn;
    }
    return ChainComplex::build(dims, dd);
}

// random element of the space of chain maps X -> Y
inline ChainMap random_chain_map(Rng& rng, const ChainComplex& x, const ChainComplex& y) {
    MatEqSystem sys;
    std::vector<size_t> fam(kChainDegrees);
    for (int n = kChainLo; n <= kChainHi; n++)
        fam[chain_idx(n)] = sys.unknown(y.dim(n), x.dim(n));
    for (int n = kChainLo + 1; n <= kChainHi; n++) {
        std::vector<MatEqSystem::Term> terms;
        terms.push_back({y.d(n), fam[chain_idx(n)], QMat::identity(x.dim(n))});
        terms.push_back({-QMat::identity(y.dim(n - 1)), fam[chain_idx(n - 1)], x.d(n)});
        sys.equation(terms, QMat(y.dim(n - 1), x.dim(n)));
    }
    ChainMap m = chain_map_zero(x, y);
    for (const auto& basis : sys.kernel()) {
        Rational c = rng.small_rational();
        if (c == 0) continue;
        for (int n = kChainLo; n <= kChainHi; n++)
            m.at(n) = m.at(n) + basis[chain_idx(n)].scaled(c);
    }
    validate_chain_map(x, y, m, "random chain map");
    return m;
}

// A + B with the four structure maps
struct SumData {
    ChainComplex sum;
    ChainMap in1, in2, pr1, pr2;
};

inline SumData direct_sum_data(const ChainComplex& a, const ChainComplex& b) {
    std::map<int, size_t> dims;
    std::map<int, QMat> dd;
    for (int n = kChainLo; n <= kChainHi; n++) {
        size_t k = a.dim(n) + b.dim(n);
        if (k) dims[n] = k;
        if (n > kChainLo) {
            QMat m = QMat::block_diag(a.d(n), b.d(n));
            if (m.rows() || m.cols()) dd[n] = m;
        }
    }
    SumData s;
    s.sum = ChainComplex::build(dims, dd);
    s.in1 = chain_map_zero(a, s.sum);
    s.in2 = chain_map_zero(b, s.sum);
    s.pr1 = chain_map_zero(s.sum, a);
    s.pr2 = chain_map_zero(s.sum, b);
    for (int n = kChainLo; n <= kChainHi; n++) {
        for (size_t i = 0; i < a.dim(n); i++) {
            s.in1.at(n)(i, i) = 1;
            s.pr1.at(n)(i, i) = 1;
        }
        for (size_t i = 0; i < b.dim(n); i++) {
            s.in2.at(n)(a.dim(n) + i, i) = 1;
            s.pr2.at(n)(i, a.dim(n) + i) = 1;
        }
    }
    return s;
}

} // namespace parex
