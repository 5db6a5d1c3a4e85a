#pragma once

#include <string>
#include <vector>

#include "bethe/structure.hpp"
#include "bethe/tensor.hpp"

namespace bethe {

// Sector pair of an R-matrix block: the sign of the first and second tensor
// factor it acts on.
enum class RBlock { pp, pm, mp, mm };

inline std::string rblock_name(RBlock b) {
    switch (b) {
        case RBlock::pp: return "pp";
        case RBlock::pm: return "pm";
        case RBlock::mp: return "mp";
        case RBlock::mm: return "mm";
    }
    return "?";
}

namespace detail {

// Append the same-sign block entries onto an operator over a two factor
// space whose per-factor coordinates are supplied by callbacks. `fv` and
// `gv` carry the evaluated 1/f normalization already folded in.
template <class S, class RowCoord, class ColCoord>
void add_same_sign_block(SparseOperator<S>& op, int r, const S& inv_f, const S& g_over_f,
                         RowCoord row_of, ColCoord col_of) {
    for (int a = 1; a <= r; ++a)
        for (int b = 1; b <= r; ++b)
            op.add_entry(row_of(a, b), col_of(a, b), inv_f);
    for (int i = 1; i <= r; ++i)
        for (int k = 1; k <= r; ++k)
            op.add_entry(row_of(k, i), col_of(i, k), g_over_f);
}

} // namespace detail

// Full R-matrix on the signed space pair, assembled from its four sector
// blocks. Basis order per factor is (+1..+n, -1..-n); every block preserves
// the sector of each factor separately.
template <class S>
SparseOperator<S> build_R(const Params& params, const S& x, const S& y) {
    params.validate();
    int n = params.n;
    TensorSpace space({aux_full_label(n, 1), aux_full_label(n, 2)});
    SparseOperator<S> op(space);
    std::size_t d = 2 * static_cast<std::size_t>(n);

    auto at = [&](int first, int second) {
        return signed_slot(first, n) * d + signed_slot(second, n);
    };

    S f = eval_f(x, y);
    S g = eval_g(x, y);
    S inv_f = S(1) / f;
    S g_over_f = g * inv_f;
    S kk = eval_k(params, x, y);
    S hh = eval_h(params, x, y);

    detail::add_same_sign_block(op, n, inv_f, g_over_f,
                                [&](int a, int b) { return at(a, b); },
                                [&](int a, int b) { return at(a, b); });
    detail::add_same_sign_block(op, n, inv_f, g_over_f,
                                [&](int a, int b) { return at(-a, -b); },
                                [&](int a, int b) { return at(-a, -b); });
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b) {
            op.add_entry(at(a, -b), at(a, -b), S(1));
            op.add_entry(at(-a, b), at(-a, b), S(1));
        }
    for (int i = 1; i <= n; ++i)
        for (int k = 1; k <= n; ++k) {
            op.add_entry(at(k, -k), at(i, -i), S(0) - kk);
            op.add_entry(at(-k, k), at(-i, i), S(0) - hh);
        }
    return op;
}

// Exact two-sided inverse of build_R at the same arguments.
template <class S>
SparseOperator<S> build_R_inverse(const Params& params, const S& x, const S& y) {
    params.validate();
    int n = params.n;
    TensorSpace space({aux_full_label(n, 1), aux_full_label(n, 2)});
    SparseOperator<S> op(space);
    std::size_t d = 2 * static_cast<std::size_t>(n);

    auto at = [&](int first, int second) {
        return signed_slot(first, n) * d + signed_slot(second, n);
    };

    S f = eval_f(y, x);
    S g = eval_g(y, x);
    S inv_f = S(1) / f;
    S g_over_f = g * inv_f;
    S kk = eval_k(params, y, x);
    S hh = eval_h(params, y, x);

    detail::add_same_sign_block(op, n, inv_f, g_over_f,
                                [&](int a, int b) { return at(a, b); },
                                [&](int a, int b) { return at(a, b); });
    detail::add_same_sign_block(op, n, inv_f, g_over_f,
                                [&](int a, int b) { return at(-a, -b); },
                                [&](int a, int b) { return at(-a, -b); });
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b) {
            op.add_entry(at(a, -b), at(a, -b), S(1));
            op.add_entry(at(-a, b), at(-a, b), S(1));
        }
    // The mixed blocks invert against each other with h and k exchanged.
    for (int i = 1; i <= n; ++i)
        for (int k = 1; k <= n; ++k) {
            op.add_entry(at(k, -k), at(i, -i), S(0) - hh);
            op.add_entry(at(-k, k), at(-i, i), S(0) - kk);
        }
    return op;
}

// One sector block at reduced rank m on a pair of m dimensional factors.
// The mp block carries the level-m shifted pole, which is what makes the
// reduced family close under the same exchange identities as the full one.
template <class S>
SparseOperator<S> build_R_reduced(RBlock block, int m, const Params& params, const S& x,
                                  const S& y) {
    params.validate();
    if (m < 1 || m > params.n)
        throw IndexOutOfRange("reduced rank " + std::to_string(m) + " outside [1, " +
                              std::to_string(params.n) + "]");
    bool first_plus = (block == RBlock::pp || block == RBlock::pm);
    bool second_plus = (block == RBlock::pp || block == RBlock::mp);
    SpaceLabel fl = first_plus ? aux_plus_label(m, 1) : aux_minus_label(m, 1);
    SpaceLabel sl = second_plus ? aux_plus_label(m, 2) : aux_minus_label(m, 2);
    TensorSpace space({fl, sl});
    SparseOperator<S> op(space);
    std::size_t d = static_cast<std::size_t>(m);
    auto at = [&](int first, int second) {
        return static_cast<std::size_t>(first - 1) * d + static_cast<std::size_t>(second - 1);
    };

    switch (block) {
        case RBlock::pp:
        case RBlock::mm: {
            S f = eval_f(x, y);
            S g = eval_g(x, y);
            S inv_f = S(1) / f;
            S g_over_f = g * inv_f;
            detail::add_same_sign_block(op, m, inv_f, g_over_f,
                                        [&](int a, int b) { return at(a, b); },
                                        [&](int a, int b) { return at(a, b); });
            break;
        }
        case RBlock::pm: {
            S kk = eval_k(params, x, y);
            for (int a = 1; a <= m; ++a)
                for (int b = 1; b <= m; ++b) op.add_entry(at(a, b), at(a, b), S(1));
            for (int i = 1; i <= m; ++i)
                for (int k = 1; k <= m; ++k) op.add_entry(at(k, k), at(i, i), S(0) - kk);
            break;
        }
        case RBlock::mp: {
            S hh = eval_h_tilde(params, m, x, y);
            for (int a = 1; a <= m; ++a)
                for (int b = 1; b <= m; ++b) op.add_entry(at(a, b), at(a, b), S(1));
            for (int i = 1; i <= m; ++i)
                for (int k = 1; k <= m; ++k) op.add_entry(at(k, k), at(i, i), S(0) - hh);
            break;
        }
    }
    return op;
}

namespace detail {

template <class S>
TensorSpace hat_space(RBlock block, int r) {
    bool aux_plus = (block == RBlock::pp || block == RBlock::pm);
    bool slot_plus = (block == RBlock::pp || block == RBlock::mp);
    SpaceLabel aux = aux_plus ? aux_plus_label(r, 0) : aux_minus_label(r, 0);
    SpaceLabel slot = slot_plus ? plus_factor_label(r, 1, false) : minus_factor_label(r, 1, true);
    return TensorSpace({aux, slot});
}

} // namespace detail

// Dressing R-matrix for a level of parent rank m: both factors have
// dimension m-1 and the shifted pole sits at level m-1. The same-sign
// flavors have a removable singularity at x == y, evaluated exactly as the
// transposition limit.
template <class S>
SparseOperator<S> build_R_hat(RBlock block, int m, const Params& params, const S& x, const S& y) {
    params.validate();
    if (m < 2 || m > params.n)
        throw IndexOutOfRange("hat rank " + std::to_string(m) + " outside [2, " +
                              std::to_string(params.n) + "]");
    int r = m - 1;
    TensorSpace space = detail::hat_space<S>(block, r);
    SparseOperator<S> op(space);
    std::size_t d = static_cast<std::size_t>(r);
    auto at = [&](int first, int second) {
        return static_cast<std::size_t>(first - 1) * d + static_cast<std::size_t>(second - 1);
    };

    bool coincident = FieldTraits<S>::is_zero(x - y);
    switch (block) {
        case RBlock::pp: {
            if (coincident) {
                for (int a = 1; a <= r; ++a)
                    for (int p = 1; p <= r; ++p) op.add_entry(at(a, p), at(p, a), S(1));
            } else {
                S f = eval_f(x, y);
                S g = eval_g(x, y);
                S inv_f = S(1) / f;
                S g_over_f = g * inv_f;
                detail::add_same_sign_block(op, r, inv_f, g_over_f,
                                            [&](int a, int b) { return at(a, b); },
                                            [&](int a, int b) { return at(a, b); });
            }
            break;
        }
        case RBlock::mm: {
            // Dual slot: the rank-one sum pairs diagonal against diagonal
            // instead of transposing, because the slot units act transposed.
            if (coincident) {
                for (int i = 1; i <= r; ++i)
                    for (int k = 1; k <= r; ++k) op.add_entry(at(k, k), at(i, i), S(1));
            } else {
                S f = eval_f(y, x);
                S g = eval_g(y, x);
                S inv_f = S(1) / f;
                S g_over_f = g * inv_f;
                for (int a = 1; a <= r; ++a)
                    for (int b = 1; b <= r; ++b) op.add_entry(at(a, b), at(a, b), inv_f);
                for (int i = 1; i <= r; ++i)
                    for (int k = 1; k <= r; ++k) op.add_entry(at(k, k), at(i, i), g_over_f);
            }
            break;
        }
        case RBlock::pm: {
            // Transposed slot action turns the rank-one sum into the
            // transposition of the two factors.
            S hh = eval_h_tilde(params, r, y, x);
            for (int a = 1; a <= r; ++a)
                for (int b = 1; b <= r; ++b) op.add_entry(at(a, b), at(a, b), S(1));
            for (int c = 1; c <= r; ++c)
                for (int dd = 1; dd <= r; ++dd) op.add_entry(at(c, dd), at(dd, c), S(0) - hh);
            break;
        }
        case RBlock::mp: {
            S hh = eval_h_tilde(params, r, x, y);
            for (int a = 1; a <= r; ++a)
                for (int b = 1; b <= r; ++b) op.add_entry(at(a, b), at(a, b), S(1));
            for (int i = 1; i <= r; ++i)
                for (int k = 1; k <= r; ++k) op.add_entry(at(k, k), at(i, i), S(0) - hh);
            break;
        }
    }
    return op;
}

// Coincident-point exchange operators on a pair of rank r factors. Flavors
// whose second factor is dual transpose the slot action, so plus_minus and
// dual_dual come out as transpositions while minus_minus and minus_plus are
// the diagonal-to-diagonal sums. Both mixed flavors trace over the first
// factor to the identity on the second.
enum class CoincidentKind {
    plus_plus,    // aux+ against a plus slot
    minus_minus,  // aux- against a dual minus slot
    plus_minus,   // aux+ against a dual minus slot
    minus_plus,   // aux- against a plus slot
    dual_dual,    // two dual minus slots
};

template <class S>
SparseOperator<S> build_exchange_coincident(CoincidentKind kind, int r) {
    if (r < 1) throw IndexOutOfRange("exchange operator needs rank >= 1");
    SpaceLabel first, second;
    switch (kind) {
        case CoincidentKind::plus_plus:
            first = aux_plus_label(r, 0);
            second = plus_factor_label(r, 1, false);
            break;
        case CoincidentKind::minus_minus:
            first = aux_minus_label(r, 0);
            second = minus_factor_label(r, 1, true);
            break;
        case CoincidentKind::plus_minus:
            first = aux_plus_label(r, 0);
            second = minus_factor_label(r, 1, true);
            break;
        case CoincidentKind::minus_plus:
            first = aux_minus_label(r, 0);
            second = plus_factor_label(r, 1, false);
            break;
        case CoincidentKind::dual_dual:
            first = minus_factor_label(r, 1, true);
            second = minus_factor_label(r, 2, true);
            break;
    }
    TensorSpace space({first, second});
    SparseOperator<S> op(space);
    std::size_t d = static_cast<std::size_t>(r);
    auto at = [&](int a, int b) {
        return static_cast<std::size_t>(a - 1) * d + static_cast<std::size_t>(b - 1);
    };
    switch (kind) {
        case CoincidentKind::plus_plus:
        case CoincidentKind::plus_minus:
        case CoincidentKind::dual_dual:
            for (int a = 1; a <= r; ++a)
                for (int b = 1; b <= r; ++b) op.add_entry(at(a, b), at(b, a), S(1));
            break;
        case CoincidentKind::minus_minus:
        case CoincidentKind::minus_plus:
            for (int a = 1; a <= r; ++a)
                for (int b = 1; b <= r; ++b) op.add_entry(at(a, a), at(b, b), S(1));
            break;
    }
    return op;
}

// Slot relabeling maps between the two slot flavors. Entries form the
// identity matrix; only the factor label changes, so embedding one of these
// rewrites the slot kind in the codomain.
enum class SwapDirection { minus_slot_to_plus, plus_slot_to_minus };

template <class S>
SparseOperator<S> build_slot_swap(SwapDirection dir, int r, int slot_id) {
    if (r < 1) throw IndexOutOfRange("slot swap needs rank >= 1");
    SpaceLabel from = dir == SwapDirection::minus_slot_to_plus
                          ? minus_factor_label(r, slot_id, true)
                          : plus_factor_label(r, slot_id, false);
    SpaceLabel to = dir == SwapDirection::minus_slot_to_plus
                        ? plus_factor_label(r, slot_id, false)
                        : minus_factor_label(r, slot_id, true);
    SparseOperator<S> op(TensorSpace({from}), TensorSpace({to}));
    for (int a = 0; a < r; ++a)
        op.add_entry(static_cast<std::size_t>(a), static_cast<std::size_t>(a), S(1));
    return op;
}

// Ordered product of hat matrices coupling one auxiliary factor to a string
// of slots. Same-second-sign blocks (pp, mp) multiply with the last slot
// leftmost, so slot 1 acts first; mixed blocks (pm, mm) multiply in slot
// order, so the last slot acts first. The result lives on
// [aux, slot_1, ..., slot_N]; an empty rapidity set gives the identity.
template <class S>
SparseOperator<S> build_R_hat_product(RBlock block, int m, const Params& params, const S& x,
                                      const RapiditySet<S>& rapidities) {
    params.validate();
    if (m < 2 || m > params.n)
        throw IndexOutOfRange("hat rank " + std::to_string(m) + " outside [2, " +
                              std::to_string(params.n) + "]");
    int r = m - 1;
    TensorSpace proto = detail::hat_space<S>(block, r);
    std::vector<SpaceLabel> factors{proto.factor(0)};
    for (std::size_t j = 0; j < rapidities.size(); ++j) {
        SpaceLabel slot = proto.factor(1);
        slot.id = static_cast<int>(j) + 1;
        factors.push_back(slot);
    }
    TensorSpace space(std::move(factors));

    SparseOperator<S> acc = SparseOperator<S>::identity(space);
    bool descending = (block == RBlock::pp || block == RBlock::mp);
    std::size_t count = rapidities.size();
    for (std::size_t step = 0; step < count; ++step) {
        std::size_t j = descending ? step : count - 1 - step;
        auto factor = embed(build_R_hat(block, m, params, x, rapidities[j]), space, {0, j + 1});
        acc = factor.compose(acc);
    }
    return acc;
}

// Outcome of one identity comparison. `detail` names the first differing
// entry in multi-index coordinates when the check fails.
struct IdentityCheck {
    bool pass = true;
    std::string detail;
};

namespace detail {

inline std::string multi_to_string(const std::vector<int>& multi) {
    std::string out = "(";
    for (std::size_t i = 0; i < multi.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(multi[i]);
    }
    return out + ")";
}

} // namespace detail

// Compare two operators entrywise. Exact scalars compare exactly; floating
// scalars compare against `tol` in absolute value.
template <class S>
IdentityCheck check_equal(const SparseOperator<S>& lhs, const SparseOperator<S>& rhs,
                          double tol = 0.0) {
    if constexpr (FieldTraits<S>::exact) {
        auto diff = SparseOperator<S>::first_difference(lhs, rhs);
        if (!diff) return {};
        auto [row, col, lv, rv] = *diff;
        return {false, "entry row=" + detail::multi_to_string(lhs.codomain().unflatten(row)) +
                           " col=" + detail::multi_to_string(lhs.domain().unflatten(col)) +
                           " lhs=" + FieldTraits<S>::to_string(lv) +
                           " rhs=" + FieldTraits<S>::to_string(rv)};
    } else {
        SparseOperator<S> d = lhs - rhs;
        for (const auto& [key, v] : d.entries()) {
            if (FieldTraits<S>::abs(v) > tol) {
                return {false,
                        "entry row=" + detail::multi_to_string(lhs.codomain().unflatten(key.first)) +
                            " col=" + detail::multi_to_string(lhs.domain().unflatten(key.second)) +
                            " difference=" + FieldTraits<S>::to_string(v)};
            }
        }
        return {};
    }
}

enum class YangBaxterVariant { full, hat_mixed };

// Triple-exchange consistency. The full variant checks the braid relation of
// build_R on three signed factors. The hat_mixed variant checks, for every
// sign assignment, that the reduced matrix on two auxiliary factors
// intertwines the pair of hat matrices coupling them to one slot.
template <class S>
IdentityCheck check_yang_baxter(const Params& params, const S& x, const S& y, const S& z,
                                YangBaxterVariant variant, double tol = 0.0) {
    params.validate();
    if (variant == YangBaxterVariant::full) {
        int n = params.n;
        TensorSpace triple(
            {aux_full_label(n, 1), aux_full_label(n, 2), aux_full_label(n, 3)});
        auto r12 = embed(build_R(params, x, y), triple, {0, 1});
        auto r13 = embed(build_R(params, x, z), triple, {0, 2});
        auto r23 = embed(build_R(params, y, z), triple, {1, 2});
        auto lhs = r12.compose(r13).compose(r23);
        auto rhs = r23.compose(r13).compose(r12);
        return check_equal(lhs, rhs, tol);
    }

    if (params.n < 2)
        throw ConfigError("hat exchange identities need rank n >= 2");
    int r = params.n - 1;
    auto reduced_block = [](bool e1_plus, bool e2_plus) {
        if (e1_plus && e2_plus) return RBlock::pp;
        if (e1_plus && !e2_plus) return RBlock::pm;
        if (!e1_plus && e2_plus) return RBlock::mp;
        return RBlock::mm;
    };
    for (bool e1 : {true, false})
        for (bool e2 : {true, false})
            for (bool sigma : {true, false}) {
                RBlock mid = reduced_block(e1, e2);
                RBlock left = reduced_block(e1, sigma);
                RBlock right = reduced_block(e2, sigma);
                auto rt = build_R_reduced(mid, r, params, x, y);
                auto h1 = build_R_hat(left, params.n, params, x, z);
                auto h2 = build_R_hat(right, params.n, params, y, z);
                TensorSpace triple({rt.domain().factor(0), rt.domain().factor(1),
                                    h1.domain().factor(1)});
                auto rte = embed(rt, triple, {0, 1});
                auto h1e = embed(h1, triple, {0, 2});
                auto h2e = embed(h2, triple, {1, 2});
                auto lhs = rte.compose(h1e).compose(h2e);
                auto rhs = h2e.compose(h1e).compose(rte);
                auto check = check_equal(lhs, rhs, tol);
                if (!check.pass) {
                    check.detail = "signs (" + std::string(e1 ? "+" : "-") + "," +
                                   (e2 ? "+" : "-") + ";" + (sigma ? "+" : "-") + ") " +
                                   check.detail;
                    return check;
                }
            }
    return {};
}

} // namespace bethe
