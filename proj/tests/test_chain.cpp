#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "bethe/chain.hpp"

using namespace bethe;
using R = Rational;

namespace {

Params make_params(int n, R eta) {
    Params p;
    p.n = n;
    p.eta = eta;
    return p;
}

ChainSpec make_chain(int n, R eta, std::vector<R> shifts) {
    ChainSpec chain;
    chain.params = make_params(n, eta);
    chain.L = static_cast<int>(shifts.size());
    chain.inhomogeneities = std::move(shifts);
    return chain;
}

bool pair_admissible(const ChainSpec& chain, const R& x, const R& y) {
    if (!chain_point_admissible(chain, x) || !chain_point_admissible(chain, y)) return false;
    R d = x - y;
    R span(chain.params.n);
    const R& eta = chain.params.eta;
    return d != 0 && d != 1 && d != -1 && d + eta != 0 && d - eta != 0 && d + span - eta != 0 &&
           d - span + eta != 0;
}

}  // namespace

TEST_CASE("chain spec validation rejects malformed input") {
    REQUIRE_THROWS_AS(make_chain(2, R(1), {}).validate(), ConfigError);
    REQUIRE_THROWS_AS(make_chain(2, R(1), {R(0), R(0)}).validate(), RapidityClash);
    ChainSpec bad = make_chain(2, R(1), {R(0), R(1)});
    bad.L = 3;
    REQUIRE_THROWS_AS(bad.validate(), ConfigError);
    REQUIRE_NOTHROW(make_chain(2, R(1), {R(0), R(1) / 3}).validate());
}

TEST_CASE("monodromy entries act triangularly on the local vacuum") {
    ChainSpec chain = make_chain(2, R(-1), {R(0)});
    Representation<R> rep(chain);
    REQUIRE(rep.vacuum_index() == -1);
    R x = R(7) / 3;
    REQUIRE(chain_point_admissible(chain, x));

    // Raising entries annihilate, in both sectors.
    REQUIRE(rep.entry(1, 2, x).apply(rep.vacuum()).is_zero());
    REQUIRE(rep.entry(-2, -1, x).apply(rep.vacuum()).is_zero());

    // The leading diagonal entry picks up the pole factor at the site shift.
    Vec<R> image = rep.entry(1, 1, x).apply(rep.vacuum());
    R expected = R(1) - eval_k(chain.params, x, R(0));
    REQUIRE(image == rep.vacuum().scaled(expected));

    REQUIRE_THROWS_AS(rep.entry(1, -1, x), SectorMismatch);
    REQUIRE_THROWS_AS(rep.entry(0, 1, x), IndexOutOfRange);

    // A single-site monodromy is the local R matrix itself.
    auto mono = rep.monodromy(x);
    auto raw = build_R(chain.params, x, R(0));
    REQUIRE(mono->entries() == raw.entries());
}

TEST_CASE("vacuum scan returns the first minus product state") {
    REQUIRE(find_vacuum_index(make_chain(2, R(-1), {R(0)})) == -1);
    REQUIRE(find_vacuum_index(make_chain(3, R(1), {R(0)})) == -1);

    ChainSpec two_sites = make_chain(2, R(-1), {R(0), R(1) / 3});
    Vec<R> omega = find_vacuum(two_sites);
    TensorSpace quantum = chain_quantum_space(two_sites);
    std::size_t slot = signed_slot(-1, 2);
    REQUIRE(omega == Vec<R>::basis(quantum, quantum.flatten({static_cast<int>(slot),
                                                             static_cast<int>(slot)})));

    Representation<R> rep(two_sites);
    REQUIRE(rep.vacuum() == omega);
    REQUIRE(rep.vacuum_flat() == quantum.flatten({static_cast<int>(slot), static_cast<int>(slot)}));
}

TEST_CASE("chain weights multiply over sites and match direct application") {
    for (const R& eta : {R(-1), R(1) / 2}) {
        ChainSpec single = make_chain(2, eta, {R(0)});
        Representation<R> rep(single);
        R x = R(9) / 4;
        REQUIRE(rep.weight(1, x) == (x + eta - 1) / (x + eta));
        REQUIRE(rep.weight(-1, x) == R(1));
        REQUIRE(rep.weight(2, x) == R(1));
        REQUIRE(rep.weight(-2, x) == x / (x + 1));
    }

    ChainSpec chain = make_chain(2, R(-1), {R(0), R(1) / 3});
    Representation<R> rep(chain);
    Representation<R> site_a(make_chain(2, R(-1), {R(0)}));
    Representation<R> site_b(make_chain(2, R(-1), {R(1) / 3}));
    auto weights = compute_weights(rep);
    R x = R(-8) / 5;
    REQUIRE(chain_point_admissible(chain, x));
    for (int a : {1, 2, -1, -2}) {
        R w = rep.weight(a, x);
        REQUIRE(w == site_a.weight(a, x) * site_b.weight(a, x));
        REQUIRE(rep.entry(a, a, x).apply(rep.vacuum()) == rep.vacuum().scaled(w));
        REQUIRE(weights.at(a)(x) == w);
    }

    Representation<Complex> mirror(chain);
    Complex wc = mirror.weight(1, to_complex(x));
    REQUIRE(std::abs(wc - to_complex(rep.weight(1, x))) < 1e-12);
}

TEST_CASE("transfer matrices are auxiliary traces and commute") {
    ChainSpec chain = make_chain(2, R(1), {R(0), R(1) / 3});
    Representation<R> rep(chain);
    RationalSampler rng(77);
    auto draw = [&](const R* other) {
        return rng.next_where([&](const R& c) {
            if (other) return pair_admissible(chain, *other, c);
            return chain_point_admissible(chain, c);
        });
    };

    R x0 = draw(nullptr);
    for (int sign : {1, -1}) {
        SparseOperator<R> total(rep.quantum());
        for (int i = 1; i <= chain.params.n; ++i) total += rep.entry(sign * i, sign * i, x0);
        REQUIRE(rep.transfer(sign, x0) == total);

        R sum(0);
        for (int i = 1; i <= chain.params.n; ++i) sum += rep.weight(sign * i, x0);
        REQUIRE(rep.transfer(sign, x0).apply(rep.vacuum()) == rep.vacuum().scaled(sum));
    }

    // The full monodromy never mixes auxiliary sectors.
    auto mono = rep.monodromy(x0);
    std::size_t q = rep.quantum().total_dim();
    for (const auto& [key, value] : mono->entries()) {
        (void)value;
        bool row_plus = key.first / q < 2;
        bool col_plus = key.second / q < 2;
        REQUIRE(row_plus == col_plus);
    }

    for (int trial = 0; trial < 10; ++trial) {
        R x = draw(nullptr);
        R y = draw(&x);
        auto hp_x = rep.transfer(1, x);
        auto hp_y = rep.transfer(1, y);
        auto hm_y = rep.transfer(-1, y);
        REQUIRE(hp_x.compose(hm_y) == hm_y.compose(hp_x));
        REQUIRE(hp_x.compose(hp_y) == hp_y.compose(hp_x));
    }
}

TEST_CASE("monodromy satisfies the exchange relation with the full R matrix") {
    ChainSpec chain = make_chain(2, R(1) / 2, {R(0), R(1) / 3});
    int n = chain.params.n;
    TensorSpace big({aux_full_label(n, 1), aux_full_label(n, 2), site_label(n, 1),
                     site_label(n, 2)});
    auto monodromy_at = [&](std::size_t aux_pos, const R& x) {
        auto acc = SparseOperator<R>::identity(big);
        for (int l = 1; l <= chain.L; ++l) {
            auto local = build_R(chain.params, x, chain.inhomogeneities[static_cast<std::size_t>(l - 1)]);
            acc = embed(local, big, {aux_pos, static_cast<std::size_t>(l + 1)}).compose(acc);
        }
        return acc;
    };

    RationalSampler rng(913);
    for (int trial = 0; trial < 10; ++trial) {
        R x = rng.next_where([&](const R& c) { return chain_point_admissible(chain, c); });
        R y = rng.next_where([&](const R& c) { return pair_admissible(chain, x, c); });
        auto t1 = monodromy_at(0, x);
        auto t2 = monodromy_at(1, y);
        auto r12 = embed(build_R(chain.params, x, y), big, {0, 1});
        auto lhs = r12.compose(t1).compose(t2);
        auto rhs = t2.compose(t1).compose(r12);
        REQUIRE(lhs == rhs);
    }
}

TEST_CASE("generated subspace closes at small rank") {
    Representation<R> rank_two(make_chain(2, R(-1), {R(0)}));
    REQUIRE(build_W_tilde(rank_two, 0).rank() == 1);
    WTildeBasis trivial = build_W_tilde(rank_two, 4);
    REQUIRE(trivial.rank() == 1);
    REQUIRE(trivial.contains(rank_two.vacuum()));

    Representation<R> rank_three(make_chain(3, R(1), {R(0)}));
    WTildeBasis basis = build_W_tilde(rank_three, 4);
    REQUIRE(basis.rank() == 2);
    REQUIRE(basis.contains(rank_three.vacuum()));
    TensorSpace quantum = rank_three.quantum();
    REQUIRE(basis.contains(Vec<R>::basis(quantum, signed_slot(-2, 3))));
    REQUIRE_FALSE(basis.contains(Vec<R>::basis(quantum, signed_slot(-3, 3))));
    REQUIRE_FALSE(basis.contains(Vec<R>::basis(quantum, signed_slot(1, 3))));

    // Growth needed beyond the cap is an error, not a silent truncation.
    REQUIRE_THROWS_AS(build_W_tilde(rank_three, 0), DepthExceeded);
}

TEST_CASE("spectral oracle pins the vacuum eigenvalue and the trace") {
    ChainSpec chain = make_chain(2, R(-1), {R(0), R(1) / 3});
    Representation<Complex> rep(chain);
    Complex x(0.37, 0.21);
    for (int sign : {1, -1}) {
        auto spectrum = brute_force_spectrum(rep, sign, x);
        REQUIRE(spectrum.size() == rep.quantum().total_dim());

        Complex vacuum_value(0.0, 0.0);
        for (int i = 1; i <= chain.params.n; ++i) vacuum_value += rep.weight(sign * i, x);
        double best = 1e9;
        for (const auto& pair : spectrum)
            best = std::min(best, std::abs(pair.value - vacuum_value));
        REQUIRE(best < 1e-10);

        Complex total(0.0, 0.0);
        for (const auto& pair : spectrum) total += pair.value;
        Complex trace = rep.transfer(sign, x).trace();
        REQUIRE(std::abs(total - trace) < 1e-9);

        for (std::size_t i = 1; i < spectrum.size(); ++i) {
            const Complex& a = spectrum[i - 1].value;
            const Complex& b = spectrum[i].value;
            REQUIRE((a.real() < b.real() ||
                     (a.real() == b.real() && a.imag() <= b.imag())));
        }
        for (const auto& pair : spectrum) {
            double peak = 0;
            for (const auto& [idx, v] : pair.vector.entries()) {
                (void)idx;
                peak = std::max(peak, std::abs(v));
            }
            REQUIRE(peak == Catch::Approx(1.0).margin(1e-12));
        }
    }

    // Rank one chains have diagonal transfer matrices, so the spectrum is
    // just the sorted diagonal.
    Representation<Complex> diag_rep(make_chain(1, R(-1), {R(0), R(1) / 3}));
    Complex z(1.7, -0.4);
    auto h = diag_rep.transfer(1, z);
    std::vector<Complex> diag;
    for (std::size_t i = 0; i < diag_rep.quantum().total_dim(); ++i) diag.push_back(h.get(i, i));
    std::sort(diag.begin(), diag.end(), [](const Complex& a, const Complex& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    auto spectrum = brute_force_spectrum(diag_rep, 1, z);
    REQUIRE(spectrum.size() == diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i)
        REQUIRE(std::abs(spectrum[i].value - diag[i]) < 1e-10);
}

TEST_CASE("monodromy cache hands back the same product") {
    ChainSpec chain = make_chain(2, R(1), {R(0)});
    Representation<R> rep(chain);
    R x = R(5) / 2;
    auto first = rep.monodromy(x);
    auto second = rep.monodromy(x);
    REQUIRE(first.get() == second.get());
    REQUIRE(rep.monodromy(R(7) / 2).get() != first.get());
}
