#pragma once

#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "parex/diagram.hpp"
#include "parex/matrix.hpp"

namespace parex {

// Endofunctor of finite-dimensional Q-vector spaces, strictly functorial:
// map(identity) == identity and map(g * f) == map(g) * map(f) hold as exact
// matrix identities for every implementation.
class VectFunctor {
public:
    virtual ~VectFunctor() = default;
    virtual size_t obj(size_t dim) const = 0;
    virtual QMat map(const QMat& f) const = 0;
    virtual std::string describe() const = 0;

    bool reduced() const { return obj(0) == 0; }

    PosetDiagramV apply(const PosetDiagramV& d) const {
        std::vector<size_t> dims(d.shape().size());
        for (size_t q = 0; q < dims.size(); q++) dims[q] = obj(d.dim(q));
        PosetDiagramV::CoverMaps cm;
        for (auto& [lo, hi] : d.shape().covers()) cm[{lo, hi}] = map(d.map(lo, hi));
        return PosetDiagramV::build(d.shape_ptr(), std::move(dims), cm);
    }
};

class ConstantFunctor final : public VectFunctor {
public:
    explicit ConstantFunctor(size_t k) : k_(k) {}
    size_t obj(size_t) const override { return k_; }
    QMat map(const QMat&) const override { return QMat::identity(k_); }
    std::string describe() const override { return "constant:" + std::to_string(k_); }

private:
    size_t k_;
};

class IdentityFunctor final : public VectFunctor {
public:
    size_t obj(size_t dim) const override { return dim; }
    QMat map(const QMat& f) const override { return f; }
    std::string describe() const override { return "identity"; }
};

class SumPowerFunctor final : public VectFunctor {
public:
    explicit SumPowerFunctor(size_t k) : k_(k) {}
    size_t obj(size_t dim) const override { return k_ * dim; }
    QMat map(const QMat& f) const override {
        return direct_sum(std::vector<QMat>(k_, f));
    }
    std::string describe() const override { return "sum^" + std::to_string(k_); }

private:
    size_t k_;
};

class TensorPowerFunctor final : public VectFunctor {
public:
    explicit TensorPowerFunctor(size_t k) : k_(k) {}
    size_t obj(size_t dim) const override {
        size_t out = 1;
        for (size_t i = 0; i < k_; i++) out *= dim;
        return out;
    }
    QMat map(const QMat& f) const override {
        QMat out = QMat::identity(1);
        for (size_t i = 0; i < k_; i++) out = kron(out, f);
        return out;
    }
    std::string describe() const override { return "tensor^" + std::to_string(k_); }

private:
    size_t k_;
};

// Basis e_i ⊙ e_j with i <= j, ordered lexicographically.
class SymmetricSquareFunctor final : public VectFunctor {
public:
    size_t obj(size_t dim) const override { return dim * (dim + 1) / 2; }
    QMat map(const QMat& f) const override {
        size_t r = f.rows(), c = f.cols();
        auto index = [](size_t dim, size_t i, size_t j) {
            // position of (i, j), i <= j, in the lexicographic pair list
            return i * dim - i * (i + 1) / 2 + j;
        };
        // monomial basis: the image of e_i ⊙ e_j expands like the product of
        // two linear substitutions, so this is exactly composition-compatible
        QMat out(obj(r), obj(c));
        for (size_t i = 0; i < c; i++)
            for (size_t j = i; j < c; j++)
                for (size_t p = 0; p < r; p++)
                    for (size_t q = p; q < r; q++) {
                        Rational v = f(p, i) * f(q, j);
                        if (p != q) v += f(q, i) * f(p, j);
                        out(index(r, p, q), index(c, i, j)) = v;
                    }
        return out;
    }
    std::string describe() const override { return "sym2"; }
};

class CompositeFunctor final : public VectFunctor {
public:
    // parts applied right to left: {f, g} is f after g
    explicit CompositeFunctor(std::vector<std::shared_ptr<const VectFunctor>> parts)
        : parts_(std::move(parts)) {
        if (parts_.empty()) throw InputError("composite functor needs at least one part");
    }
    size_t obj(size_t dim) const override {
        size_t d = dim;
        for (size_t i = parts_.size(); i-- > 0;) d = parts_[i]->obj(d);
        return d;
    }
    QMat map(const QMat& f) const override {
        QMat m = f;
        for (size_t i = parts_.size(); i-- > 0;) m = parts_[i]->map(m);
        return m;
    }
    std::string describe() const override {
        std::string out;
        for (size_t i = 0; i < parts_.size(); i++) {
            if (i) out += ".";
            out += parts_[i]->describe();
        }
        return out;
    }

private:
    std::vector<std::shared_ptr<const VectFunctor>> parts_;
};

// Serializable functor description; `str` round-trips through `parse`.
// Composite parts are separated by '.', applied right to left.
struct FunctorSpec {
    enum class Kind { Constant, Identity, SumPower, TensorPower, SymmetricSquare, Composite };

    Kind kind = Kind::Identity;
    size_t k = 0;
    std::vector<FunctorSpec> parts;

    static FunctorSpec constant(size_t k) { return {Kind::Constant, k, {}}; }
    static FunctorSpec identity() { return {Kind::Identity, 0, {}}; }
    static FunctorSpec sum_power(size_t k) { return {Kind::SumPower, k, {}}; }
    static FunctorSpec tensor_power(size_t k) { return {Kind::TensorPower, k, {}}; }
    static FunctorSpec symmetric_square() { return {Kind::SymmetricSquare, 0, {}}; }
    static FunctorSpec composite(std::vector<FunctorSpec> parts) {
        FunctorSpec s{Kind::Composite, 0, std::move(parts)};
        if (s.parts.empty()) throw InputError("composite functor needs at least one part");
        return s;
    }

    std::shared_ptr<const VectFunctor> build() const {
        switch (kind) {
            case Kind::Constant: return std::make_shared<ConstantFunctor>(k);
            case Kind::Identity: return std::make_shared<IdentityFunctor>();
            case Kind::SumPower: return std::make_shared<SumPowerFunctor>(k);
            case Kind::TensorPower: return std::make_shared<TensorPowerFunctor>(k);
            case Kind::SymmetricSquare: return std::make_shared<SymmetricSquareFunctor>();
            case Kind::Composite: {
                std::vector<std::shared_ptr<const VectFunctor>> ps;
                for (const FunctorSpec& p : parts) ps.push_back(p.build());
                return std::make_shared<CompositeFunctor>(std::move(ps));
            }
        }
        throw std::logic_error("unreachable functor kind");
    }

    std::string str() const { return build()->describe(); }

    static FunctorSpec parse(const std::string& text) {
        std::vector<FunctorSpec> parts;
        size_t start = 0;
        while (start <= text.size()) {
            size_t dot = text.find('.', start);
            std::string tok = text.substr(start, dot == std::string::npos ? dot : dot - start);
            parts.push_back(parse_atom(tok));
            if (dot == std::string::npos) break;
            start = dot + 1;
        }
        if (parts.empty()) throw InputError("empty functor spec");
        if (parts.size() == 1) return parts[0];
        return composite(std::move(parts));
    }

    static std::vector<FunctorSpec> battery() {
        return {identity(), constant(1), sum_power(2), tensor_power(2), symmetric_square()};
    }

private:
    static FunctorSpec parse_atom(const std::string& tok) {
        auto num_after = [&](size_t at) {
            if (at >= tok.size()) throw InputError("functor spec misses a parameter: " + tok);
            size_t v = 0;
            for (size_t i = at; i < tok.size(); i++) {
                if (tok[i] < '0' || tok[i] > '9')
                    throw InputError("bad functor parameter: " + tok);
                v = v * 10 + static_cast<size_t>(tok[i] - '0');
            }
            return v;
        };
        if (tok == "identity") return identity();
        if (tok == "sym2") return symmetric_square();
        if (tok.rfind("constant:", 0) == 0) return constant(num_after(9));
        if (tok.rfind("sum^", 0) == 0) return sum_power(num_after(4));
        if (tok.rfind("tensor^", 0) == 0) return tensor_power(num_after(7));
        throw InputError("unknown functor spec: " + tok);
    }
};

} // namespace parex
