#include <catch2/catch_amalgamated.hpp>

#include "bethe/tensor.hpp"

using namespace bethe;
using R = Rational;

namespace {

TensorSpace plus_pair(int rank) {
    return TensorSpace({aux_plus_label(rank, 1), aux_plus_label(rank, 2)});
}

SparseOperator<R> random_operator(const TensorSpace& space, RationalSampler& rng, int nnz) {
    SparseOperator<R> op(space);
    for (int t = 0; t < nnz; ++t) {
        auto row = static_cast<std::size_t>(rng.next_raw() % space.total_dim());
        auto col = static_cast<std::size_t>(rng.next_raw() % space.total_dim());
        op.add_entry(row, col, rng.next());
    }
    return op;
}

} // namespace

TEST_CASE("flat indexing is row major with the last factor fastest") {
    TensorSpace space({aux_plus_label(2, 1), aux_plus_label(3, 2), aux_plus_label(2, 3)});
    REQUIRE(space.total_dim() == 12);
    REQUIRE(space.flatten({0, 0, 0}) == 0);
    REQUIRE(space.flatten({0, 0, 1}) == 1);
    REQUIRE(space.flatten({0, 1, 0}) == 2);
    REQUIRE(space.flatten({1, 0, 0}) == 6);
    REQUIRE(space.unflatten(11) == std::vector<int>{1, 2, 1});
    for (std::size_t f = 0; f < 12; ++f) REQUIRE(space.flatten(space.unflatten(f)) == f);
    REQUIRE_THROWS_AS(space.flatten({0, 3, 0}), IndexOutOfRange);
    REQUIRE_THROWS_AS(space.flatten({0, 0}), ShapeMismatch);
}

TEST_CASE("matrix units compose by the index chain rule") {
    // E^1_2 sends e_1 to e_2, E^2_1 sends e_2 to e_1; the composite
    // E^2_1 after E^1_2 is E^1_1, and in product notation E^1_2 E^2_1 = E^2_2
    // when the left factor acts second.
    auto e12 = matrix_unit<R>(1, 2, 2);
    auto e21 = matrix_unit<R>(2, 1, 2);
    auto e22 = matrix_unit<R>(2, 2, 2);
    auto e11 = matrix_unit<R>(1, 1, 2);

    REQUIRE(e12.get(1, 0) == R(1));
    REQUIRE(e12.nnz() == 1);

    REQUIRE(e21.compose(e12) == e11);
    REQUIRE(e12.compose(e21) == e22);

    // Vanishing composite: E^1_2 after E^1_2 needs e_2 in, e_1 produced.
    REQUIRE(e12.compose(e12).is_zero());

    SparseOperator<R> sum_diag(TensorSpace({aux_plus_label(2, 0)}));
    sum_diag += matrix_unit<R>(1, 1, 2);
    sum_diag += matrix_unit<R>(2, 2, 2);
    REQUIRE(sum_diag == SparseOperator<R>::identity(TensorSpace({aux_plus_label(2, 0)})));
}

TEST_CASE("signed matrix units land in the signed slots") {
    // rank 2 full space: order (+1, +2, -1, -2).
    auto em = matrix_unit_full<R>(-1, -2, 2);
    REQUIRE(em.nnz() == 1);
    REQUIRE(em.get(3, 2) == R(1));
    REQUIRE(signed_slot(1, 2) == 0);
    REQUIRE(signed_slot(2, 2) == 1);
    REQUIRE(signed_slot(-1, 2) == 2);
    REQUIRE(signed_slot(-2, 2) == 3);
    REQUIRE_THROWS_AS(matrix_unit_full<R>(1, -1, 2), IndexOutOfRange);
    REQUIRE_THROWS_AS(signed_slot(3, 2), IndexOutOfRange);
}

TEST_CASE("embedding acts on chosen slots and commutes for disjoint slots") {
    TensorSpace vv = plus_pair(2);
    auto e12 = matrix_unit<R>(1, 2, 2);
    auto e21 = matrix_unit<R>(2, 1, 2);

    auto on_second = embed(e12, vv, {1});
    // e_1 x e_1 goes to e_1 x e_2.
    auto in = Vec<R>::basis(vv, vv.flatten({0, 0}));
    auto out = on_second.apply(in);
    REQUIRE(out.get(vv.flatten({0, 1})) == R(1));
    REQUIRE(out.nnz() == 1);

    // The reverse unit realizes e_1 x e_2 -> e_1 x e_1.
    auto back = embed(e21, vv, {1});
    auto round = back.apply(out);
    REQUIRE(round == in);

    auto a_first = embed(e12, vv, {0});
    REQUIRE(a_first.compose(on_second) == on_second.compose(a_first));

    // Embedding respects composition slotwise.
    REQUIRE(embed(e21.compose(e12), vv, {1}) == back.compose(on_second));
}

TEST_CASE("two slot embedding matches a manual kronecker layout") {
    TensorSpace vv = plus_pair(2);
    auto e12 = matrix_unit<R>(1, 2, 2);
    auto e21 = matrix_unit<R>(2, 1, 2);
    // Cross terms as a two-slot operator placed on (0, 1) and on (1, 0).
    TensorSpace pair_proto({aux_plus_label(2, 0), aux_plus_label(2, 0)});
    SparseOperator<R> cross(pair_proto);
    for (const auto& [ka, va] : e12.entries())
        for (const auto& [kb, vb] : e21.entries())
            cross.add_entry(ka.first * 2 + kb.first, ka.second * 2 + kb.second, va * vb);

    auto direct = embed(cross, vv, {0, 1});
    auto factored = embed(e12, vv, {0}).compose(embed(e21, vv, {1}));
    REQUIRE(direct == factored);

    auto swapped = embed(cross, vv, {1, 0});
    auto factored_sw = embed(e12, vv, {1}).compose(embed(e21, vv, {0}));
    REQUIRE(swapped == factored_sw);
}

TEST_CASE("composition is associative on random sparse operators") {
    TensorSpace space({aux_plus_label(3, 1), aux_plus_label(2, 2)});
    RationalSampler rng(314);
    for (int rep = 0; rep < 5; ++rep) {
        auto A = random_operator(space, rng, 9);
        auto B = random_operator(space, rng, 9);
        auto C = random_operator(space, rng, 9);
        REQUIRE(A.compose(B).compose(C) == A.compose(B.compose(C)));
        auto x = Vec<R>::basis(space, rng.next_raw() % space.total_dim());
        REQUIRE(A.compose(B).apply(x) == A.apply(B.apply(x)));
    }
}

TEST_CASE("sparse composition agrees with the dense oracle") {
    TensorSpace space({aux_plus_label(2, 1), aux_plus_label(2, 2)});
    RationalSampler rng(2718);
    auto A = random_operator(space, rng, 7);
    auto B = random_operator(space, rng, 7);
    auto AB = A.compose(B);
    std::size_t d = space.total_dim();
    auto dense = dense_compose(to_dense(A), d, d, to_dense(B), d);
    auto dense_ab = to_dense(AB);
    REQUIRE(dense == dense_ab);
}

TEST_CASE("partial trace contracts one slot and is cyclic there") {
    TensorSpace vv = plus_pair(2);
    RationalSampler rng(99);

    // Identity x A traced on slot 0 gives 2 A.
    auto A = random_operator(TensorSpace({aux_plus_label(2, 2)}), rng, 3);
    auto lifted = embed(A, vv, {1});
    auto traced = partial_trace(lifted, 0);
    REQUIRE(traced == A.scaled(R(2)));

    // E^1_2 x A is traceless on slot 0.
    auto off = embed(matrix_unit<R>(1, 2, 2), vv, {0}).compose(lifted);
    REQUIRE(partial_trace(off, 0).is_zero());

    // Tr_0(X Y_0) = Tr_0(Y_0 X) for Y supported on slot 0 only.
    auto X = random_operator(vv, rng, 10);
    auto Y0 = embed(random_operator(TensorSpace({aux_plus_label(2, 1)}), rng, 3), vv, {0});
    REQUIRE(partial_trace(X.compose(Y0), 0) == partial_trace(Y0.compose(X), 0));

    // Full trace equals iterated partial traces.
    auto t01 = partial_trace(partial_trace(X, 1), 0);
    REQUIRE(t01.get(0, 0) == X.trace());
}

TEST_CASE("dual pairing contracts string slots against coefficient slots") {
    // Module of dimension 3, one covector slot of dimension 2.
    TensorSpace module({module_label(3, 0)});
    TensorSpace braco({plus_factor_label(2, 1, true), module_label(3, 0)});
    TensorSpace ketsp({plus_factor_label(2, 1, false), module_label(3, 0)});

    // bra = f^1 x P + f^2 x Q with P, Q module operators.
    RationalSampler rng(7);
    auto P = random_operator(module, rng, 4);
    auto Q = random_operator(module, rng, 4);
    SparseOperator<R> bra(module, braco);
    for (const auto& [key, v] : P.entries()) bra.add_entry(0 * 3 + key.first, key.second, v);
    for (const auto& [key, v] : Q.entries()) bra.add_entry(1 * 3 + key.first, key.second, v);

    // ket = e_1 x phi1 + e_2 x phi2.
    Vec<R> phi1(module), phi2(module);
    for (int i = 0; i < 3; ++i) {
        phi1.set(i, rng.next());
        phi2.set(i, rng.next());
    }
    Vec<R> ket(ketsp);
    for (const auto& [i, v] : phi1.entries()) ket.add(0 * 3 + i, v);
    for (const auto& [i, v] : phi2.entries()) ket.add(1 * 3 + i, v);

    auto paired = pair_contract(bra, ket);
    auto expect = P.apply(phi1) + Q.apply(phi2);
    REQUIRE(paired == expect);

    // Pairing rejects slots of equal duality.
    Vec<R> bad(braco);
    bad.set(0, R(1));
    REQUIRE_THROWS_AS(pair_contract(bra, bad), ShapeMismatch);
}

TEST_CASE("pairing with no slots is plain application") {
    TensorSpace module({module_label(4, 0)});
    RationalSampler rng(11);
    auto M = random_operator(module, rng, 6);
    Vec<R> x(module);
    for (int i = 0; i < 4; ++i) x.set(i, rng.next());
    REQUIRE(pair_contract(M, x) == M.apply(x));
}

TEST_CASE("vectors prune exact zeros") {
    TensorSpace space({aux_plus_label(2, 0)});
    Vec<R> v(space);
    v.set(0, R(3));
    v.add(0, R(-3));
    REQUIRE(v.is_zero());
    REQUIRE(v.nnz() == 0);

    SparseOperator<R> op(space);
    op.add_entry(1, 1, R(5));
    op.add_entry(1, 1, R(-5));
    REQUIRE(op.is_zero());
}

TEST_CASE("first difference reporting names the earliest mismatch") {
    TensorSpace space({aux_plus_label(2, 0)});
    SparseOperator<R> A(space), B(space);
    A.add_entry(0, 1, R(2));
    B.add_entry(0, 1, R(2));
    B.add_entry(1, 0, R(7));
    auto diff = SparseOperator<R>::first_difference(A, B);
    REQUIRE(diff.has_value());
    auto [row, col, lhs, rhs] = *diff;
    REQUIRE(row == 1);
    REQUIRE(col == 0);
    REQUIRE(lhs == R(0));
    REQUIRE(rhs == R(7));
    REQUIRE_FALSE(SparseOperator<R>::first_difference(A, A).has_value());
}

TEST_CASE("dense oracle refuses oversized spaces") {
    TensorSpace big({module_label(4097, 0)});
    SparseOperator<R> op(big);
    REQUIRE_THROWS_AS(to_dense(op), DimensionTooLarge);
}
