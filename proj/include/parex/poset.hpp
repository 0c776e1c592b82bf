#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace parex {

// Thrown when input data fails structural validation (CLI exit code 2).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Finite poset on elements 0..n-1 with user-facing ids. leq is stored as a
// full relation matrix; covers are derived. Empty posets are allowed (they
// appear as punctured degenerate fibres); lattices reject them separately.
class FinPoset {
public:
    FinPoset() = default;

    static FinPoset from_leq(std::vector<int64_t> ids, std::vector<std::vector<bool>> leq) {
        FinPoset p;
        p.ids_ = std::move(ids);
        p.leq_ = std::move(leq);
        p.index_ids();
        p.validate_order();
        p.compute_covers();
        return p;
    }

    // leq = reflexive-transitive closure of the cover relation
    static FinPoset from_covers(std::vector<int64_t> ids,
                                const std::vector<std::pair<int64_t, int64_t>>& covers) {
        FinPoset p;
        p.ids_ = std::move(ids);
        p.index_ids();
        size_t n = p.ids_.size();
        p.leq_.assign(n, std::vector<bool>(n, false));
        for (size_t i = 0; i < n; i++) p.leq_[i][i] = true;
        for (auto& [lo, hi] : covers) {
            auto a = p.try_index(lo), b = p.try_index(hi);
            if (a < 0 || b < 0) throw InputError("cover references unknown element id");
            if (a == b) throw InputError("cover relates an element to itself");
            p.leq_[a][b] = true;
        }
        // Floyd-Warshall closure
        for (size_t k = 0; k < n; k++)
            for (size_t i = 0; i < n; i++)
                if (p.leq_[i][k])
                    for (size_t j = 0; j < n; j++)
                        if (p.leq_[k][j]) p.leq_[i][j] = true;
        p.validate_order();
        p.compute_covers();
        return p;
    }

    size_t size() const { return ids_.size(); }
    int64_t id_of(size_t i) const { return ids_[i]; }
    const std::vector<int64_t>& ids() const { return ids_; }

    int try_index(int64_t id) const {
        auto it = idx_.find(id);
        return it == idx_.end() ? -1 : static_cast<int>(it->second);
    }
    size_t index_of(int64_t id) const {
        int i = try_index(id);
        if (i < 0) throw InputError("unknown element id " + std::to_string(id));
        return static_cast<size_t>(i);
    }

    bool leq(size_t a, size_t b) const { return leq_[a][b]; }
    bool lt(size_t a, size_t b) const { return a != b && leq_[a][b]; }

    // cover pairs (a,b): a < b with nothing strictly between
    const std::vector<std::pair<size_t, size_t>>& covers() const { return covers_; }

    std::vector<size_t> down_set(size_t x) const {
        std::vector<size_t> out;
        for (size_t i = 0; i < size(); i++)
            if (leq_[i][x]) out.push_back(i);
        return out;
    }
    std::vector<size_t> up_set(size_t x) const {
        std::vector<size_t> out;
        for (size_t i = 0; i < size(); i++)
            if (leq_[x][i]) out.push_back(i);
        return out;
    }

    std::vector<size_t> minimal_elements() const {
        std::vector<size_t> out;
        for (size_t i = 0; i < size(); i++) {
            bool min = true;
            for (size_t j = 0; j < size(); j++)
                if (lt(j, i)) { min = false; break; }
            if (min) out.push_back(i);
        }
        return out;
    }
    std::vector<size_t> maximal_elements() const {
        std::vector<size_t> out;
        for (size_t i = 0; i < size(); i++) {
            bool max = true;
            for (size_t j = 0; j < size(); j++)
                if (lt(i, j)) { max = false; break; }
            if (max) out.push_back(i);
        }
        return out;
    }

    // unique minimum / maximum if present
    int bottom() const {
        auto m = minimal_elements();
        if (m.size() != 1) return -1;
        for (size_t i = 0; i < size(); i++)
            if (!leq_[m[0]][i]) return -1;
        return static_cast<int>(m[0]);
    }
    int top() const {
        auto m = maximal_elements();
        if (m.size() != 1) return -1;
        for (size_t i = 0; i < size(); i++)
            if (!leq_[i][m[0]]) return -1;
        return static_cast<int>(m[0]);
    }

    // Induced subposet; keep[i] are indices into this poset, new ids inherited.
    FinPoset induced(const std::vector<size_t>& keep) const {
        FinPoset p;
        for (size_t i : keep) p.ids_.push_back(ids_[i]);
        p.index_ids();
        size_t n = keep.size();
        p.leq_.assign(n, std::vector<bool>(n, false));
        for (size_t i = 0; i < n; i++)
            for (size_t j = 0; j < n; j++) p.leq_[i][j] = leq_[keep[i]][keep[j]];
        p.compute_covers();
        return p;
    }

    // All strictly increasing chains, deterministically ordered (by length,
    // then lexicographically on indices). Includes singletons.
    std::vector<std::vector<size_t>> chains() const {
        std::vector<std::vector<size_t>> out;
        std::vector<size_t> cur;
        for (size_t s = 0; s < size(); s++) {
            cur = {s};
            extend_chains(cur, out);
        }
        std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
            if (a.size() != b.size()) return a.size() < b.size();
            return a < b;
        });
        return out;
    }

    bool same_order(const FinPoset& o) const { return ids_ == o.ids_ && leq_ == o.leq_; }

    // Product with componentwise order; index of (x_0..x_{k-1}) is the mixed
    // radix number with factor 0 most significant, ids are those indices.
    static FinPoset product(const std::vector<const FinPoset*>& parts) {
        size_t n = 1;
        for (const FinPoset* p : parts) n *= p->size();
        std::vector<int64_t> ids(n);
        for (size_t i = 0; i < n; i++) ids[i] = static_cast<int64_t>(i);
        auto decode = [&](size_t v) {
            std::vector<size_t> xs(parts.size());
            for (size_t k = parts.size(); k-- > 0;) {
                xs[k] = v % parts[k]->size();
                v /= parts[k]->size();
            }
            return xs;
        };
        std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
        for (size_t i = 0; i < n; i++) {
            auto xi = decode(i);
            for (size_t j = 0; j < n; j++) {
                auto xj = decode(j);
                bool ok = true;
                for (size_t k = 0; k < parts.size() && ok; k++)
                    ok = parts[k]->leq(xi[k], xj[k]);
                leq[i][j] = ok;
            }
        }
        return from_leq(std::move(ids), std::move(leq));
    }

private:
    void extend_chains(std::vector<size_t>& cur, std::vector<std::vector<size_t>>& out) const {
        out.push_back(cur);
        for (size_t nxt = 0; nxt < size(); nxt++) {
            if (lt(cur.back(), nxt)) {
                cur.push_back(nxt);
                extend_chains(cur, out);
                cur.pop_back();
            }
        }
    }

    void index_ids() {
        idx_.clear();
        for (size_t i = 0; i < ids_.size(); i++) {
            if (idx_.count(ids_[i])) throw InputError("duplicate element id");
            idx_[ids_[i]] = i;
        }
    }

    void validate_order() const {
        size_t n = size();
        for (size_t i = 0; i < n; i++)
            if (!leq_[i][i]) throw InputError("order not reflexive");
        for (size_t i = 0; i < n; i++)
            for (size_t j = 0; j < n; j++) {
                if (i != j && leq_[i][j] && leq_[j][i]) throw InputError("order not antisymmetric");
                if (!leq_[i][j]) continue;
                for (size_t k = 0; k < n; k++)
                    if (leq_[j][k] && !leq_[i][k]) throw InputError("order not transitive");
            }
    }

    void compute_covers() {
        covers_.clear();
        size_t n = size();
        for (size_t a = 0; a < n; a++)
            for (size_t b = 0; b < n; b++) {
                if (!lt(a, b)) continue;
                bool direct = true;
                for (size_t m = 0; m < n; m++)
                    if (lt(a, m) && lt(m, b)) { direct = false; break; }
                if (direct) covers_.push_back({a, b});
            }
    }

    std::vector<int64_t> ids_;
    std::map<int64_t, size_t> idx_;
    std::vector<std::vector<bool>> leq_;
    std::vector<std::pair<size_t, size_t>> covers_;
};

// Monotone map between finite posets, by target index per source index.
struct MonotoneMap {
    const FinPoset* source = nullptr;
    const FinPoset* target = nullptr;
    std::vector<size_t> map;

    size_t operator()(size_t i) const { return map[i]; }

    bool is_monotone() const {
        for (size_t a = 0; a < source->size(); a++)
            for (size_t b = 0; b < source->size(); b++)
                if (source->leq(a, b) && !target->leq(map[a], map[b])) return false;
        return true;
    }

    bool is_injective() const {
        std::vector<bool> seen(target->size(), false);
        for (size_t v : map) {
            if (seen[v]) return false;
            seen[v] = true;
        }
        return true;
    }

    // order-reflecting onto the image: f(a) <= f(b) implies a <= b
    bool is_order_reflecting() const {
        for (size_t a = 0; a < source->size(); a++)
            for (size_t b = 0; b < source->size(); b++)
                if (target->leq(map[a], map[b]) && !source->leq(a, b)) return false;
        return true;
    }
};

// f is left adjoint to g: f(x) <= y iff x <= g(y), checked exhaustively.
inline bool check_galois(const MonotoneMap& f, const MonotoneMap& g) {
    if (f.source != g.target || f.target != g.source) return false;
    for (size_t x = 0; x < f.source->size(); x++)
        for (size_t y = 0; y < f.target->size(); y++)
            if (f.target->leq(f.map[x], y) != f.source->leq(x, g.map[y])) return false;
    return true;
}

} // namespace parex
