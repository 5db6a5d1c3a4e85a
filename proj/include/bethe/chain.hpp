#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "bethe/errors.hpp"
#include "bethe/rmatrix.hpp"
#include "bethe/scalar.hpp"
#include "bethe/structure.hpp"
#include "bethe/tensor.hpp"

namespace bethe {

// Inhomogeneous chain data: rank parameters, site count, and one rapidity
// shift per site.
struct ChainSpec {
    Params params;
    int L = 1;
    std::vector<Rational> inhomogeneities;

    void validate() const {
        params.validate();
        if (L < 1) throw ConfigError("chain needs at least one site");
        if (static_cast<std::size_t>(L) != inhomogeneities.size())
            throw ConfigError("expected " + std::to_string(L) + " inhomogeneities, got " +
                              std::to_string(inhomogeneities.size()));
        for (std::size_t i = 0; i < inhomogeneities.size(); ++i)
            for (std::size_t j = i + 1; j < inhomogeneities.size(); ++j)
                if (inhomogeneities[i] == inhomogeneities[j])
                    throw RapidityClash("duplicate inhomogeneity " +
                                        format_rational(inhomogeneities[i]));
    }

    int local_dim() const { return 2 * params.n; }
};

inline TensorSpace chain_quantum_space(const ChainSpec& chain) {
    std::vector<SpaceLabel> factors;
    factors.reserve(static_cast<std::size_t>(chain.L));
    for (int l = 1; l <= chain.L; ++l) factors.push_back(site_label(chain.params.n, l));
    return TensorSpace(std::move(factors));
}

// True when every structure function and weight denominator stays away from
// a pole at x against each site shift.
inline bool chain_point_admissible(const ChainSpec& chain, const Rational& x) {
    Rational span(chain.params.n);
    for (const Rational& a : chain.inhomogeneities) {
        Rational d = x - a;
        if (d == 0 || d == 1 || d == -1) return false;
        if (d + chain.params.eta == 0 || d - chain.params.eta == 0) return false;
        if (d + span - chain.params.eta == 0 || d - span + chain.params.eta == 0) return false;
    }
    return true;
}

// Monodromy product over the sites: site 1 acts first, site L last. The
// result lives on [aux, site_1, ..., site_L].
template <class S>
SparseOperator<S> build_monodromy(const ChainSpec& chain, const S& x) {
    chain.validate();
    std::vector<SpaceLabel> factors;
    factors.reserve(static_cast<std::size_t>(chain.L) + 1);
    factors.push_back(aux_full_label(chain.params.n, 0));
    for (int l = 1; l <= chain.L; ++l) factors.push_back(site_label(chain.params.n, l));
    TensorSpace space(std::move(factors));
    auto acc = SparseOperator<S>::identity(space);
    for (int l = 1; l <= chain.L; ++l) {
        S shift = FieldTraits<S>::from_rational(chain.inhomogeneities[static_cast<std::size_t>(l - 1)]);
        auto local = build_R(chain.params, x, shift);
        acc = embed(local, space, {0, static_cast<std::size_t>(l)}).compose(acc);
    }
    return acc;
}

namespace detail {

// Extracts the quantum-space operator sitting at auxiliary entry (a, b) of
// a monodromy on [aux, sites...].
template <class S>
SparseOperator<S> monodromy_block(const SparseOperator<S>& mono, int rank, int a, int b) {
    if (a == 0 || b == 0) throw IndexOutOfRange("signed index out of range");
    if ((a > 0) != (b > 0))
        throw SectorMismatch("entry (" + std::to_string(a) + ", " + std::to_string(b) +
                             ") crosses sectors");
    std::size_t row_aux = signed_slot(a, rank);
    std::size_t col_aux = signed_slot(b, rank);
    TensorSpace quantum = mono.domain().without_factor(0);
    std::size_t q = quantum.total_dim();
    SparseOperator<S> out(quantum);
    for (const auto& [key, value] : mono.entries()) {
        if (key.first / q != row_aux || key.second / q != col_aux) continue;
        out.add_entry(key.first % q, key.second % q, value);
    }
    return out;
}

template <class S>
struct ScalarLess {
    bool operator()(const S& a, const S& b) const { return FieldTraits<S>::less(a, b); }
};

inline std::vector<Rational> vacuum_scan_points(const ChainSpec& chain) {
    RationalSampler rng(0x5eedbeefULL);
    std::vector<Rational> points;
    while (points.size() < 5) {
        Rational c = rng.next_where([&](const Rational& v) {
            if (!chain_point_admissible(chain, v)) return false;
            for (const Rational& q : points)
                if (q == v) return false;
            return true;
        });
        points.push_back(c);
    }
    return points;
}

// Checks the four triangularity conditions for the product state with local
// signed index b against an already built monodromy.
inline bool vacuum_conditions_hold(const SparseOperator<Rational>& mono, const ChainSpec& chain,
                                   int b) {
    int n = chain.params.n;
    TensorSpace quantum = mono.domain().without_factor(0);
    std::vector<int> comp(static_cast<std::size_t>(chain.L),
                          static_cast<int>(signed_slot(b, n)));
    std::size_t flat = quantum.flatten(comp);
    Vec<Rational> omega = Vec<Rational>::basis(quantum, flat);
    for (int i = 1; i <= n; ++i) {
        for (int k = i + 1; k <= n; ++k) {
            if (!monodromy_block(mono, n, i, k).apply(omega).is_zero()) return false;
            if (!monodromy_block(mono, n, -k, -i).apply(omega).is_zero()) return false;
        }
    }
    for (int i = 1; i <= n; ++i) {
        for (int sign : {1, -1}) {
            Vec<Rational> image = monodromy_block(mono, n, sign * i, sign * i).apply(omega);
            Rational coeff = image.get(flat);
            image -= omega.scaled(coeff);
            if (!image.is_zero()) return false;
        }
    }
    return true;
}

}  // namespace detail

// Scans the 2n product states e_b ⊗ ... ⊗ e_b, minus indices first, and
// returns the signed local index of the first one that passes the
// triangularity conditions at five sample points.
inline int find_vacuum_index(const ChainSpec& chain) {
    chain.validate();
    int n = chain.params.n;
    std::vector<Rational> points = detail::vacuum_scan_points(chain);
    std::vector<SparseOperator<Rational>> monos;
    monos.reserve(points.size());
    for (const Rational& x : points) monos.push_back(build_monodromy(chain, x));
    std::vector<int> order;
    for (int b = 1; b <= n; ++b) order.push_back(-b);
    for (int b = 1; b <= n; ++b) order.push_back(b);
    for (int b : order) {
        bool ok = true;
        for (const auto& mono : monos)
            if (!detail::vacuum_conditions_hold(mono, chain, b)) {
                ok = false;
                break;
            }
        if (ok) return b;
    }
    throw NoVacuumFound("no product state passes the triangularity scan for rank " +
                        std::to_string(n) + ", L=" + std::to_string(chain.L));
}

inline Vec<Rational> find_vacuum(const ChainSpec& chain) {
    int b = find_vacuum_index(chain);
    TensorSpace quantum = chain_quantum_space(chain);
    std::vector<int> comp(static_cast<std::size_t>(chain.L),
                          static_cast<int>(signed_slot(b, chain.params.n)));
    return Vec<Rational>::basis(quantum, quantum.flatten(comp));
}

// Vacuum eigenvalue of the diagonal entry a: product over the sites of the
// local diagonal coefficient on the local vacuum vector.
template <class S>
S weight_value(const ChainSpec& chain, int vacuum_index, int a, const S& x) {
    int n = chain.params.n;
    std::size_t d = static_cast<std::size_t>(2 * n);
    std::size_t sa = signed_slot(a, n);
    std::size_t sb = signed_slot(vacuum_index, n);
    std::size_t diag = sa * d + sb;
    S out(1);
    for (const Rational& shift : chain.inhomogeneities) {
        auto local = build_R(chain.params, x, FieldTraits<S>::from_rational(shift));
        out = out * local.get(diag, diag);
    }
    return out;
}

// Concrete chain representation. The vacuum is located once by the rational
// scan; monodromies are cached per spectral point behind a lock so distinct
// points can be evaluated from different threads.
template <class S>
class Representation {
  public:
    explicit Representation(ChainSpec chain)
        : chain_(std::move(chain)),
          quantum_(chain_quantum_space(chain_)),
          vacuum_index_(find_vacuum_index(chain_)),
          cache_(std::make_unique<Cache>()) {
        std::vector<int> comp(static_cast<std::size_t>(chain_.L),
                              static_cast<int>(signed_slot(vacuum_index_, chain_.params.n)));
        vacuum_flat_ = quantum_.flatten(comp);
        vacuum_ = Vec<S>::basis(quantum_, vacuum_flat_);
    }

    const ChainSpec& chain() const { return chain_; }
    const TensorSpace& quantum() const { return quantum_; }
    const Vec<S>& vacuum() const { return vacuum_; }
    int vacuum_index() const { return vacuum_index_; }
    std::size_t vacuum_flat() const { return vacuum_flat_; }

    std::shared_ptr<const SparseOperator<S>> monodromy(const S& x) const {
        std::lock_guard<std::mutex> lock(cache_->mutex);
        auto it = cache_->by_point.find(x);
        if (it == cache_->by_point.end()) {
            auto built = std::make_shared<SparseOperator<S>>(build_monodromy(chain_, x));
            it = cache_->by_point.emplace(x, std::move(built)).first;
        }
        return it->second;
    }

    SparseOperator<S> entry(int a, int b, const S& x) const {
        return detail::monodromy_block(*monodromy(x), chain_.params.n, a, b);
    }

    // Sector block as an operator on [aux_sign, sites...].
    SparseOperator<S> sector(int sign, const S& x) const {
        int n = chain_.params.n;
        std::size_t offset = sign > 0 ? 0 : static_cast<std::size_t>(n);
        std::size_t q = quantum_.total_dim();
        SpaceLabel aux = sign > 0 ? aux_plus_label(n, 0) : aux_minus_label(n, 0);
        TensorSpace space = TensorSpace::concat(TensorSpace({aux}), quantum_);
        SparseOperator<S> out(space);
        auto mono = monodromy(x);
        std::size_t lo = offset, hi = offset + static_cast<std::size_t>(n);
        for (const auto& [key, value] : mono->entries()) {
            std::size_t ra = key.first / q, ca = key.second / q;
            if (ra < lo || ra >= hi || ca < lo || ca >= hi) continue;
            out.add_entry((ra - offset) * q + key.first % q, (ca - offset) * q + key.second % q,
                          value);
        }
        return out;
    }

    SparseOperator<S> transfer(int sign, const S& x) const { return partial_trace(sector(sign, x), 0); }

    S weight(int a, const S& x) const { return weight_value(chain_, vacuum_index_, a, x); }

  private:
    struct Cache {
        std::mutex mutex;
        std::map<S, std::shared_ptr<const SparseOperator<S>>, detail::ScalarLess<S>> by_point;
    };

    ChainSpec chain_;
    TensorSpace quantum_;
    int vacuum_index_;
    std::unique_ptr<Cache> cache_;
    std::size_t vacuum_flat_ = 0;
    Vec<S> vacuum_;
};

template <class S>
SparseOperator<S> monodromy_entry(const Representation<S>& rep, int a, int b, const S& x) {
    return rep.entry(a, b, x);
}

template <class S>
SparseOperator<S> transfer(const Representation<S>& rep, int sign, const S& x) {
    return rep.transfer(sign, x);
}

template <class S>
std::map<int, std::function<S(const S&)>> compute_weights(const Representation<S>& rep) {
    std::map<int, std::function<S(const S&)>> out;
    ChainSpec chain = rep.chain();
    int vac = rep.vacuum_index();
    for (int i = 1; i <= chain.params.n; ++i)
        for (int a : {i, -i})
            out.emplace(a, [chain, vac, a](const S& x) { return weight_value(chain, vac, a, x); });
    return out;
}

// Row-echelon span over the rationals. Rows are normalized to a unit pivot;
// reduction eliminates leading entries only, which is enough for rank and
// membership.
class ExactSpan {
  public:
    Vec<Rational> reduce(Vec<Rational> v) const {
        for (;;) {
            if (v.is_zero()) return v;
            auto lead = v.entries().begin();
            auto it = by_pivot_.find(lead->first);
            if (it == by_pivot_.end()) return v;
            v -= rows_[it->second].scaled(lead->second);
        }
    }

    bool insert(const Vec<Rational>& v) {
        Vec<Rational> r = reduce(v);
        if (r.is_zero()) return false;
        auto lead = r.entries().begin();
        std::size_t pivot = lead->first;
        Rational scale = Rational(1) / lead->second;
        rows_.push_back(r.scaled(scale));
        by_pivot_.emplace(pivot, rows_.size() - 1);
        return true;
    }

    bool contains(const Vec<Rational>& v) const { return reduce(v).is_zero(); }
    int rank() const { return static_cast<int>(rows_.size()); }
    const std::vector<Vec<Rational>>& rows() const { return rows_; }

  private:
    std::vector<Vec<Rational>> rows_;
    std::map<std::size_t, std::size_t> by_pivot_;
};

struct WTildeBasis {
    ExactSpan span;

    int rank() const { return span.rank(); }
    bool contains(const Vec<Rational>& v) const { return span.contains(v); }
    const std::vector<Vec<Rational>>& vectors() const { return span.rows(); }
};

// Closure of the vacuum under the index-limited generator families at three
// fixed sample points, minus family first. Each family may grow the span for
// at most max_depth rounds.
inline WTildeBasis build_W_tilde(const Representation<Rational>& rep, int max_depth) {
    if (max_depth < 0) throw IndexOutOfRange("depth cap must be nonnegative");
    int n = rep.chain().params.n;
    std::vector<Rational> samples = {Rational(17) / 5, Rational(-23) / 7, Rational(41) / 3};
    for (Rational& s : samples)
        while (!chain_point_admissible(rep.chain(), s)) s += 1;

    ExactSpan span;
    span.insert(rep.vacuum());

    for (int family : {-1, 1}) {
        std::vector<SparseOperator<Rational>> generators;
        for (const Rational& x : samples)
            for (int i = 1; i <= n - 1; ++i)
                for (int k = 1; k <= n - 1; ++k)
                    generators.push_back(rep.entry(family * i, family * k, x));
        std::vector<Vec<Rational>> frontier = span.rows();
        int depth = 0;
        while (!frontier.empty()) {
            std::vector<Vec<Rational>> added;
            for (const auto& g : generators)
                for (const auto& v : frontier)
                    if (span.insert(g.apply(v))) added.push_back(span.rows().back());
            if (added.empty()) break;
            if (depth == max_depth)
                throw DepthExceeded("span still growing after " + std::to_string(max_depth) +
                                    " rounds");
            ++depth;
            frontier = std::move(added);
        }
    }
    return WTildeBasis{std::move(span)};
}

struct EigenPair {
    Complex value;
    Vec<Complex> vector;
};

// Dense spectral oracle for a transfer matrix. Eigenvalues are sorted by
// (re, im); each eigenvector is scaled so its largest-magnitude entry is 1.
inline std::vector<EigenPair> brute_force_spectrum(const Representation<Complex>& rep, int sign,
                                                   const Complex& x) {
    SparseOperator<Complex> h = rep.transfer(sign, x);
    std::size_t dim = h.domain().total_dim();
    if (dim > 4096)
        throw DimensionTooLarge("spectral oracle limited to dimension 4096, got " +
                                std::to_string(dim));
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                static_cast<Eigen::Index>(dim));
    for (const auto& [key, value] : h.entries())
        m(static_cast<Eigen::Index>(key.first), static_cast<Eigen::Index>(key.second)) = value;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m);
    if (solver.info() != Eigen::Success) throw Error("dense eigensolver did not converge");
    std::vector<EigenPair> out;
    out.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        Eigen::VectorXcd col = solver.eigenvectors().col(static_cast<Eigen::Index>(i));
        Eigen::Index best = 0;
        for (Eigen::Index j = 1; j < col.size(); ++j)
            if (std::abs(col(j)) > std::abs(col(best))) best = j;
        col /= col(best);
        Vec<Complex> vec(h.domain());
        for (Eigen::Index j = 0; j < col.size(); ++j)
            vec.set(static_cast<std::size_t>(j), col(j));
        out.push_back({solver.eigenvalues()(static_cast<Eigen::Index>(i)), std::move(vec)});
    }
    std::sort(out.begin(), out.end(), [](const EigenPair& a, const EigenPair& b) {
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    });
    return out;
}

}  // namespace bethe
