#pragma once

#include <string>

#include "bethe/scalar.hpp"

namespace bethe {

// The scalar structure functions that weight every exchange relation:
//
//   f(x,y) = (x - y + 1)/(x - y)
//   g(x,y) = 1/(x - y)
//   h(x,y) = 1/(x - y + n - eta)
//   k(x,y) = 1/(x - y + eta)
//
// plus the level-shifted variant used by the reduced blocks,
//
//   h_tilde at level m: 1/(x - y + m - eta),  1 <= m <= n.
//
// Every evaluator throws Singular when its denominator vanishes exactly.

struct FnKind {
    enum class Tag { f, g, h, k, h_tilde };
    Tag tag;
    int level = 0; // only meaningful for h_tilde

    static FnKind f() { return {Tag::f, 0}; }
    static FnKind g() { return {Tag::g, 0}; }
    static FnKind h() { return {Tag::h, 0}; }
    static FnKind k() { return {Tag::k, 0}; }
    static FnKind h_tilde_level(int m) { return {Tag::h_tilde, m}; }

    std::string name() const {
        switch (tag) {
            case Tag::f: return "f";
            case Tag::g: return "g";
            case Tag::h: return "h";
            case Tag::k: return "k";
            case Tag::h_tilde: return "h_tilde(" + std::to_string(level) + ")";
        }
        return "?";
    }
};

namespace detail {

template <class S>
[[noreturn]] void throw_singular(const FnKind& kind, const S& x, const S& y) {
    throw Singular(kind.name(), FieldTraits<S>::to_string(x), FieldTraits<S>::to_string(y));
}

} // namespace detail

template <class S>
S eval_f(const S& x, const S& y) {
    S d = x - y;
    if (FieldTraits<S>::is_zero(d)) detail::throw_singular(FnKind::f(), x, y);
    return (d + S(1)) / d;
}

template <class S>
S eval_g(const S& x, const S& y) {
    S d = x - y;
    if (FieldTraits<S>::is_zero(d)) detail::throw_singular(FnKind::g(), x, y);
    return S(1) / d;
}

template <class S>
S eval_h(const Params& params, const S& x, const S& y) {
    S d = x - y + FieldTraits<S>::from_rational(Rational(params.n) - params.eta);
    if (FieldTraits<S>::is_zero(d)) detail::throw_singular(FnKind::h(), x, y);
    return S(1) / d;
}

template <class S>
S eval_k(const Params& params, const S& x, const S& y) {
    S d = x - y + FieldTraits<S>::from_rational(params.eta);
    if (FieldTraits<S>::is_zero(d)) detail::throw_singular(FnKind::k(), x, y);
    return S(1) / d;
}

template <class S>
S eval_h_tilde(const Params& params, int level, const S& x, const S& y) {
    if (level < 1 || level > params.n)
        throw IndexOutOfRange("h_tilde level " + std::to_string(level) +
                              " outside [1, " + std::to_string(params.n) + "]");
    S d = x - y + FieldTraits<S>::from_rational(Rational(level) - params.eta);
    if (FieldTraits<S>::is_zero(d)) detail::throw_singular(FnKind::h_tilde_level(level), x, y);
    return S(1) / d;
}

template <class S>
S eval_structure_fn(const FnKind& kind, const Params& params, const S& x, const S& y) {
    switch (kind.tag) {
        case FnKind::Tag::f: return eval_f(x, y);
        case FnKind::Tag::g: return eval_g(x, y);
        case FnKind::Tag::h: return eval_h(params, x, y);
        case FnKind::Tag::k: return eval_k(params, x, y);
        case FnKind::Tag::h_tilde: return eval_h_tilde(params, kind.level, x, y);
    }
    throw Error("unreachable structure function tag");
}

enum class Side { left, right };

// F(x; set) = prod f(x, v)  (side = left)
// F(set; x) = prod f(v, x)  (side = right)
// An empty set gives 1.
template <class S>
S product_F(const S& x, const RapiditySet<S>& set, Side side) {
    S acc(1);
    for (const S& v : set)
        acc = acc * (side == Side::left ? eval_f(x, v) : eval_f(v, x));
    return acc;
}

} // namespace bethe
