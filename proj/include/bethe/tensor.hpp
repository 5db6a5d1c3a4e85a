#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "bethe/scalar.hpp"

namespace bethe {

// Factor kinds. aux_plus/aux_minus are the rank-r halves of the auxiliary
// space, aux_full is their direct sum with signed basis order
// (+1,...,+r,-1,...,-r). plus_factor and dual_minus_factor are the creation
// string slots; `dual` distinguishes a space from its dual within the same
// family (a plus_factor with dual=true is the covector slot a creation row
// writes into, pairing against the primal plus_factor slot of the coefficient
// vector).
enum class SpaceKind {
    aux_plus,
    aux_minus,
    aux_full,
    quantum_site,
    plus_factor,
    dual_minus_factor,
    module_W,
};

struct SpaceLabel {
    SpaceKind kind;
    int dim;
    int id;
    bool dual = false;

    bool operator==(const SpaceLabel&) const = default;
};

inline SpaceLabel aux_plus_label(int rank, int id) { return {SpaceKind::aux_plus, rank, id, false}; }
inline SpaceLabel aux_minus_label(int rank, int id) { return {SpaceKind::aux_minus, rank, id, false}; }
inline SpaceLabel aux_full_label(int rank, int id) { return {SpaceKind::aux_full, 2 * rank, id, false}; }
inline SpaceLabel site_label(int rank, int id) { return {SpaceKind::quantum_site, 2 * rank, id, false}; }
inline SpaceLabel plus_factor_label(int dim, int id, bool dual = false) {
    return {SpaceKind::plus_factor, dim, id, dual};
}
inline SpaceLabel minus_factor_label(int dim, int id, bool dual = true) {
    return {SpaceKind::dual_minus_factor, dim, id, dual};
}
inline SpaceLabel module_label(int dim, int id) { return {SpaceKind::module_W, dim, id, false}; }

// Ordered tensor product of labeled factors with row-major flat indexing:
// the LAST factor varies fastest.
class TensorSpace {
public:
    TensorSpace() : total_dim_(1) {}

    explicit TensorSpace(std::vector<SpaceLabel> factors) : factors_(std::move(factors)) {
        strides_.assign(factors_.size(), 1);
        total_dim_ = 1;
        for (std::size_t i = factors_.size(); i-- > 0;) {
            if (factors_[i].dim <= 0) throw ShapeMismatch("factor with nonpositive dimension");
            strides_[i] = total_dim_;
            total_dim_ *= static_cast<std::size_t>(factors_[i].dim);
        }
    }

    std::size_t total_dim() const { return total_dim_; }
    std::size_t factor_count() const { return factors_.size(); }
    const SpaceLabel& factor(std::size_t i) const { return factors_.at(i); }
    const std::vector<SpaceLabel>& factors() const { return factors_; }
    std::size_t stride(std::size_t i) const { return strides_.at(i); }

    std::size_t flatten(const std::vector<int>& multi) const {
        if (multi.size() != factors_.size()) throw ShapeMismatch("multi-index arity mismatch");
        std::size_t flat = 0;
        for (std::size_t i = 0; i < multi.size(); ++i) {
            if (multi[i] < 0 || multi[i] >= factors_[i].dim)
                throw IndexOutOfRange("multi-index component out of range");
            flat += static_cast<std::size_t>(multi[i]) * strides_[i];
        }
        return flat;
    }

    std::vector<int> unflatten(std::size_t flat) const {
        std::vector<int> multi(factors_.size());
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            multi[i] = static_cast<int>((flat / strides_[i]) % static_cast<std::size_t>(factors_[i].dim));
        }
        return multi;
    }

    int component(std::size_t flat, std::size_t factor_index) const {
        return static_cast<int>((flat / strides_.at(factor_index)) %
                                static_cast<std::size_t>(factors_.at(factor_index).dim));
    }

    // Dimension profile equality; kinds and ids are metadata.
    bool compatible(const TensorSpace& other) const {
        if (factors_.size() != other.factors_.size()) return false;
        for (std::size_t i = 0; i < factors_.size(); ++i)
            if (factors_[i].dim != other.factors_[i].dim) return false;
        return true;
    }

    TensorSpace without_factor(std::size_t index) const {
        std::vector<SpaceLabel> rest;
        rest.reserve(factors_.size() - 1);
        for (std::size_t i = 0; i < factors_.size(); ++i)
            if (i != index) rest.push_back(factors_[i]);
        return TensorSpace(std::move(rest));
    }

    TensorSpace replace_factor(std::size_t index, const SpaceLabel& label) const {
        std::vector<SpaceLabel> copy = factors_;
        copy.at(index) = label;
        return TensorSpace(std::move(copy));
    }

    static TensorSpace concat(const TensorSpace& a, const TensorSpace& b) {
        std::vector<SpaceLabel> all = a.factors_;
        all.insert(all.end(), b.factors_.begin(), b.factors_.end());
        return TensorSpace(std::move(all));
    }

    std::string describe() const {
        std::string out = "[";
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(factors_[i].dim);
            if (factors_[i].dual) out += "*";
        }
        return out + "]";
    }

private:
    std::vector<SpaceLabel> factors_;
    std::vector<std::size_t> strides_;
    std::size_t total_dim_;
};

// Sparse vector over a tensor space. Exact zeros are never stored.
template <class S>
class Vec {
public:
    Vec() = default;
    explicit Vec(TensorSpace space) : space_(std::move(space)) {}

    const TensorSpace& space() const { return space_; }

    static Vec basis(const TensorSpace& space, std::size_t index) {
        Vec v(space);
        v.set(index, S(1));
        return v;
    }

    void set(std::size_t index, const S& value) {
        if (index >= space_.total_dim()) throw IndexOutOfRange("vector index out of range");
        if (FieldTraits<S>::is_zero(value))
            entries_.erase(index);
        else
            entries_[index] = value;
    }

    void add(std::size_t index, const S& value) {
        if (index >= space_.total_dim()) throw IndexOutOfRange("vector index out of range");
        auto it = entries_.find(index);
        if (it == entries_.end()) {
            if (!FieldTraits<S>::is_zero(value)) entries_.emplace(index, value);
        } else {
            it->second = it->second + value;
            if (FieldTraits<S>::is_zero(it->second)) entries_.erase(it);
        }
    }

    S get(std::size_t index) const {
        auto it = entries_.find(index);
        return it == entries_.end() ? S(0) : it->second;
    }

    const std::map<std::size_t, S>& entries() const { return entries_; }
    bool is_zero() const { return entries_.empty(); }
    std::size_t nnz() const { return entries_.size(); }

    Vec& operator+=(const Vec& other) {
        require_same_space(other);
        for (const auto& [i, v] : other.entries_) add(i, v);
        return *this;
    }

    Vec& operator-=(const Vec& other) {
        require_same_space(other);
        for (const auto& [i, v] : other.entries_) add(i, S(0) - v);
        return *this;
    }

    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }

    Vec scaled(const S& c) const {
        Vec out(space_);
        if (FieldTraits<S>::is_zero(c)) return out;
        for (const auto& [i, v] : entries_) out.set(i, v * c);
        return out;
    }

    double max_abs() const {
        double m = 0;
        for (const auto& [i, v] : entries_) m = std::max(m, FieldTraits<S>::abs(v));
        return m;
    }

    bool operator==(const Vec& other) const {
        return space_.compatible(other.space_) && entries_ == other.entries_;
    }

private:
    void require_same_space(const Vec& other) const {
        if (!space_.compatible(other.space_))
            throw ShapeMismatch("vector spaces differ: " + space_.describe() + " vs " +
                                other.space_.describe());
    }

    TensorSpace space_;
    std::map<std::size_t, S> entries_;
};

// Sparse operator between tensor spaces. Entries are keyed (row, col) in
// canonical order, which keeps composition and reporting deterministic.
template <class S>
class SparseOperator {
public:
    using Key = std::pair<std::size_t, std::size_t>;

    SparseOperator() = default;

    SparseOperator(TensorSpace domain, TensorSpace codomain)
        : domain_(std::move(domain)), codomain_(std::move(codomain)) {}

    explicit SparseOperator(const TensorSpace& square_space)
        : domain_(square_space), codomain_(square_space) {}

    static SparseOperator identity(const TensorSpace& space) {
        SparseOperator op(space);
        for (std::size_t i = 0; i < space.total_dim(); ++i) op.entries_.emplace(Key{i, i}, S(1));
        return op;
    }

    const TensorSpace& domain() const { return domain_; }
    const TensorSpace& codomain() const { return codomain_; }
    const std::map<Key, S>& entries() const { return entries_; }
    std::size_t nnz() const { return entries_.size(); }

    void add_entry(std::size_t row, std::size_t col, const S& value) {
        if (row >= codomain_.total_dim() || col >= domain_.total_dim())
            throw IndexOutOfRange("operator entry out of range");
        auto it = entries_.find({row, col});
        if (it == entries_.end()) {
            if (!FieldTraits<S>::is_zero(value)) entries_.emplace(Key{row, col}, value);
        } else {
            it->second = it->second + value;
            if (FieldTraits<S>::is_zero(it->second)) entries_.erase(it);
        }
    }

    S get(std::size_t row, std::size_t col) const {
        auto it = entries_.find({row, col});
        return it == entries_.end() ? S(0) : it->second;
    }

    // this applied after rhs
    SparseOperator compose(const SparseOperator& rhs) const {
        if (!domain_.compatible(rhs.codomain_))
            throw ShapeMismatch("compose needs matching middle spaces: " + domain_.describe() +
                                " vs " + rhs.codomain_.describe());
        SparseOperator out(rhs.domain_, codomain_);
        // Group rhs entries by row once; rhs map is sorted by (row, col).
        auto it = rhs.entries_.begin();
        std::map<std::size_t, std::vector<std::pair<std::size_t, S>>> rows_of_rhs;
        for (; it != rhs.entries_.end(); ++it)
            rows_of_rhs[it->first.first].emplace_back(it->first.second, it->second);
        for (const auto& [key, a] : entries_) {
            auto rowit = rows_of_rhs.find(key.second);
            if (rowit == rows_of_rhs.end()) continue;
            for (const auto& [c, b] : rowit->second) out.add_entry(key.first, c, a * b);
        }
        return out;
    }

    Vec<S> apply(const Vec<S>& x) const {
        if (!domain_.compatible(x.space()))
            throw ShapeMismatch("apply needs matching domain: " + domain_.describe() + " vs " +
                                x.space().describe());
        Vec<S> y(codomain_);
        for (const auto& [key, a] : entries_) {
            auto it = x.entries().find(key.second);
            if (it != x.entries().end()) y.add(key.first, a * it->second);
        }
        return y;
    }

    SparseOperator& operator+=(const SparseOperator& other) {
        require_same_shape(other);
        for (const auto& [key, v] : other.entries_) add_entry(key.first, key.second, v);
        return *this;
    }

    SparseOperator& operator-=(const SparseOperator& other) {
        require_same_shape(other);
        for (const auto& [key, v] : other.entries_) add_entry(key.first, key.second, S(0) - v);
        return *this;
    }

    friend SparseOperator operator+(SparseOperator a, const SparseOperator& b) { return a += b; }
    friend SparseOperator operator-(SparseOperator a, const SparseOperator& b) { return a -= b; }

    SparseOperator scaled(const S& c) const {
        SparseOperator out(domain_, codomain_);
        if (FieldTraits<S>::is_zero(c)) return out;
        for (const auto& [key, v] : entries_) out.entries_.emplace(key, v * c);
        return out;
    }

    S trace() const {
        if (!domain_.compatible(codomain_)) throw ShapeMismatch("trace needs a square operator");
        S t(0);
        for (const auto& [key, v] : entries_)
            if (key.first == key.second) t = t + v;
        return t;
    }

    bool is_zero() const { return entries_.empty(); }

    bool operator==(const SparseOperator& other) const {
        return domain_.compatible(other.domain_) && codomain_.compatible(other.codomain_) &&
               entries_ == other.entries_;
    }

    // First (row, col, lhs, rhs) where the two operators differ, in canonical
    // order. Returns nothing when equal. Exact comparison.
    static std::optional<std::tuple<std::size_t, std::size_t, S, S>> first_difference(
        const SparseOperator& lhs, const SparseOperator& rhs) {
        auto li = lhs.entries_.begin(), ri = rhs.entries_.begin();
        while (li != lhs.entries_.end() || ri != rhs.entries_.end()) {
            if (ri == rhs.entries_.end() || (li != lhs.entries_.end() && li->first < ri->first)) {
                return std::tuple{li->first.first, li->first.second, li->second, S(0)};
            }
            if (li == lhs.entries_.end() || ri->first < li->first) {
                return std::tuple{ri->first.first, ri->first.second, S(0), ri->second};
            }
            if (!(li->second == ri->second)) {
                return std::tuple{li->first.first, li->first.second, li->second, ri->second};
            }
            ++li;
            ++ri;
        }
        return std::nullopt;
    }

    double max_abs() const {
        double m = 0;
        for (const auto& [key, v] : entries_) m = std::max(m, FieldTraits<S>::abs(v));
        return m;
    }

    double frobenius_norm() const {
        double sum = 0;
        for (const auto& [key, v] : entries_) {
            double a = FieldTraits<S>::abs(v);
            sum += a * a;
        }
        return std::sqrt(sum);
    }

private:
    void require_same_shape(const SparseOperator& other) const {
        if (!domain_.compatible(other.domain_) || !codomain_.compatible(other.codomain_))
            throw ShapeMismatch("operator shapes differ");
    }

    TensorSpace domain_, codomain_;
    std::map<Key, S> entries_;
};

// Matrix unit E^a_b on a single rank-r factor: maps basis vector a to basis
// vector b, so the single entry sits at (row b-1, col a-1) in that factor's
// coordinates. Signs of a and b must agree and select the plus or minus
// factor family; dual=true tags the covector flavor of the same unit.
template <class S>
SparseOperator<S> matrix_unit(int a, int b, int rank, bool dual = false) {
    if (a == 0 || b == 0 || (a > 0) != (b > 0))
        throw IndexOutOfRange("matrix unit needs nonzero indices of equal sign");
    int ia = std::abs(a), ib = std::abs(b);
    if (ia > rank || ib > rank) throw IndexOutOfRange("matrix unit index exceeds rank");
    SpaceLabel label = (a > 0) ? (dual ? plus_factor_label(rank, 0, true)
                                       : aux_plus_label(rank, 0))
                               : (dual ? minus_factor_label(rank, 0, true)
                                       : aux_minus_label(rank, 0));
    TensorSpace space({label});
    SparseOperator<S> op(space);
    op.add_entry(static_cast<std::size_t>(ib - 1), static_cast<std::size_t>(ia - 1), S(1));
    return op;
}

// Signed basis position inside an aux_full factor of the given rank:
// +1..+rank map to 0..rank-1, -1..-rank map to rank..2*rank-1.
inline std::size_t signed_slot(int a, int rank) {
    if (a == 0 || std::abs(a) > rank) throw IndexOutOfRange("signed index out of range");
    return a > 0 ? static_cast<std::size_t>(a - 1) : static_cast<std::size_t>(rank - a - 1);
}

// Matrix unit on the full signed space (dim 2*rank), same direction rule.
template <class S>
SparseOperator<S> matrix_unit_full(int a, int b, int rank) {
    if (a == 0 || b == 0 || (a > 0) != (b > 0))
        throw IndexOutOfRange("matrix unit needs nonzero indices of equal sign");
    TensorSpace space({aux_full_label(rank, 0)});
    SparseOperator<S> op(space);
    op.add_entry(signed_slot(b, rank), signed_slot(a, rank), S(1));
    return op;
}

// Lift an operator to `target`, acting on the listed factor positions (in
// op's factor order) and as identity elsewhere. When op's codomain factors
// differ from its domain factors (relabeling maps), the target codomain gets
// the op's codomain labels at those positions.
template <class S>
SparseOperator<S> embed(const SparseOperator<S>& op, const TensorSpace& target,
                        const std::vector<std::size_t>& positions) {
    if (positions.size() != op.domain().factor_count())
        throw ShapeMismatch("embed: position count differs from operator arity");
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (positions[i] >= target.factor_count()) throw ShapeMismatch("embed: position out of range");
        if (target.factor(positions[i]).dim != op.domain().factor(i).dim)
            throw ShapeMismatch("embed: factor dimension mismatch at position " +
                                std::to_string(positions[i]));
    }
    // Keep the target's labels where the operator is square on a factor;
    // relabel only where the operator genuinely maps one factor kind to
    // another (sector swaps).
    TensorSpace target_codomain = target;
    for (std::size_t i = 0; i < positions.size(); ++i)
        if (!(op.domain().factor(i) == op.codomain().factor(i)))
            target_codomain = target_codomain.replace_factor(positions[i], op.codomain().factor(i));

    // Enumerate the complementary factors once.
    std::vector<std::size_t> comp;
    for (std::size_t i = 0; i < target.factor_count(); ++i)
        if (std::find(positions.begin(), positions.end(), i) == positions.end()) comp.push_back(i);

    std::size_t comp_dim = 1;
    for (std::size_t i : comp) comp_dim *= static_cast<std::size_t>(target.factor(i).dim);

    SparseOperator<S> out(target, target_codomain);
    for (const auto& [key, v] : op.entries()) {
        // Decode the operator's row/col into per-factor components.
        std::vector<int> row_multi = op.codomain().unflatten(key.first);
        std::vector<int> col_multi = op.domain().unflatten(key.second);
        // Base flat offsets contributed by the acted-on positions.
        std::size_t row_base = 0, col_base = 0;
        for (std::size_t i = 0; i < positions.size(); ++i) {
            row_base += static_cast<std::size_t>(row_multi[i]) * target_codomain.stride(positions[i]);
            col_base += static_cast<std::size_t>(col_multi[i]) * target.stride(positions[i]);
        }
        // Sweep the complementary index assignments.
        for (std::size_t c = 0; c < comp_dim; ++c) {
            std::size_t rest_row = 0, rest_col = 0, tmp = c;
            for (std::size_t i = comp.size(); i-- > 0;) {
                std::size_t dim_i = static_cast<std::size_t>(target.factor(comp[i]).dim);
                std::size_t idx = tmp % dim_i;
                tmp /= dim_i;
                rest_row += idx * target_codomain.stride(comp[i]);
                rest_col += idx * target.stride(comp[i]);
            }
            out.add_entry(row_base + rest_row, col_base + rest_col, v);
        }
    }
    return out;
}

// Contract one factor of an operator that is square on that factor.
template <class S>
SparseOperator<S> partial_trace(const SparseOperator<S>& op, std::size_t position) {
    if (position >= op.domain().factor_count() || position >= op.codomain().factor_count())
        throw ShapeMismatch("partial_trace: position out of range");
    if (op.domain().factor(position).dim != op.codomain().factor(position).dim)
        throw ShapeMismatch("partial_trace: traced factor is not square");
    TensorSpace dom = op.domain().without_factor(position);
    TensorSpace cod = op.codomain().without_factor(position);

    auto strip = [&](const TensorSpace& full, std::size_t flat) {
        std::size_t stride = full.stride(position);
        std::size_t dim = static_cast<std::size_t>(full.factor(position).dim);
        std::size_t high = flat / (stride * dim);
        std::size_t low = flat % stride;
        return std::pair<std::size_t, std::size_t>{high * stride + low,
                                                   (flat / stride) % dim};
    };

    SparseOperator<S> out(dom, cod);
    for (const auto& [key, v] : op.entries()) {
        auto [row_rest, row_idx] = strip(op.codomain(), key.first);
        auto [col_rest, col_idx] = strip(op.domain(), key.second);
        if (row_idx != col_idx) continue;
        out.add_entry(row_rest, col_rest, v);
    }
    return out;
}

// Full dual pairing <bra, ket>. The bra is an operator from a module space M
// into S_1 x ... x S_t x M (its leading codomain factors are pairing slots);
// the ket lives in S'_1 x ... x S'_t x M with each S'_i of the same dimension
// and opposite duality. Pairing is the coordinate diagonal on every slot,
// which realizes <f^a, e_b> and <e_{-r}, f^{-s}> at once; the result lives
// in M.
template <class S>
Vec<S> pair_contract(const SparseOperator<S>& bra, const Vec<S>& ket) {
    const TensorSpace& module = bra.domain();
    const TensorSpace& braco = bra.codomain();
    if (braco.factor_count() < module.factor_count())
        throw ShapeMismatch("pair_contract: bra codomain smaller than its domain");
    std::size_t slots = braco.factor_count() - module.factor_count();
    if (ket.space().factor_count() != slots + module.factor_count())
        throw ShapeMismatch("pair_contract: ket arity mismatch");
    for (std::size_t i = 0; i < slots; ++i) {
        const SpaceLabel& b = braco.factor(i);
        const SpaceLabel& k = ket.space().factor(i);
        if (b.dim != k.dim) throw ShapeMismatch("pair_contract: slot dimension mismatch");
        if (b.dual == k.dual)
            throw ShapeMismatch("pair_contract: slot " + std::to_string(i) +
                                " pairs factors of equal duality");
    }
    for (std::size_t i = 0; i < module.factor_count(); ++i)
        if (ket.space().factor(slots + i).dim != module.factor(i).dim)
            throw ShapeMismatch("pair_contract: module part mismatch");

    std::size_t mod_dim = module.total_dim();
    Vec<S> out(module);
    // Flat layout of both braco-rows and ket entries is slot_index*mod_dim + module_index.
    for (const auto& [key, a] : bra.entries()) {
        std::size_t slot_flat = key.first / mod_dim;
        std::size_t row_mod = key.first % mod_dim;
        auto it = ket.entries().lower_bound(slot_flat * mod_dim);
        auto end = ket.entries().lower_bound((slot_flat + 1) * mod_dim);
        for (; it != end; ++it) {
            if (it->first % mod_dim != key.second) continue;
            out.add(row_mod, a * it->second);
        }
    }
    return out;
}

// Dense mirrors used as test oracles. Row-major dense storage.
template <class S>
std::vector<S> to_dense(const SparseOperator<S>& op, std::size_t cap = 4096) {
    std::size_t rows = op.codomain().total_dim(), cols = op.domain().total_dim();
    if (rows > cap || cols > cap)
        throw DimensionTooLarge("dense oracle capped at " + std::to_string(cap));
    std::vector<S> dense(rows * cols, S(0));
    for (const auto& [key, v] : op.entries()) dense[key.first * cols + key.second] = v;
    return dense;
}

template <class S>
std::vector<S> dense_compose(const std::vector<S>& a, std::size_t a_rows, std::size_t mid,
                             const std::vector<S>& b, std::size_t b_cols) {
    std::vector<S> out(a_rows * b_cols, S(0));
    for (std::size_t i = 0; i < a_rows; ++i)
        for (std::size_t m = 0; m < mid; ++m) {
            const S& av = a[i * mid + m];
            if (FieldTraits<S>::is_zero(av)) continue;
            for (std::size_t j = 0; j < b_cols; ++j) out[i * b_cols + j] = out[i * b_cols + j] + av * b[m * b_cols + j];
        }
    return out;
}

} // namespace bethe
