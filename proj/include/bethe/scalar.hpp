#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "bethe/errors.hpp"

namespace bethe {

// Exact rational scalar. GMP keeps values canonical: lowest terms, positive
// denominator, no rounding anywhere.
using Rational = boost::multiprecision::mpq_rational;

// Floating scalar used by the numerical root finder.
using Complex = std::complex<double>;

// Parse "p" or "p/q" (q > 0 after normalization). Throws ConfigError on
// malformed input or zero denominator.
Rational parse_rational(const std::string& text);

// Inverse of parse_rational: "p" when the denominator is 1, else "p/q".
std::string format_rational(const Rational& value);

Complex to_complex(const Rational& value);

// Field hooks that let the operator layer stay generic over Rational and
// Complex. `exact` selects exact-equality paths (pruning, identity checks).
template <class S>
struct FieldTraits;

template <>
struct FieldTraits<Rational> {
    static constexpr bool exact = true;
    static Rational from_rational(const Rational& r) { return r; }
    static bool is_zero(const Rational& v) { return v.is_zero(); }
    static bool less(const Rational& a, const Rational& b) { return a < b; }
    static std::string to_string(const Rational& v) { return format_rational(v); }
    static double abs(const Rational& v) {
        double d = v.convert_to<double>();
        return d < 0 ? -d : d;
    }
};

template <>
struct FieldTraits<Complex> {
    static constexpr bool exact = false;
    static Complex from_rational(const Rational& r) { return to_complex(r); }
    static bool is_zero(const Complex& v) { return v.real() == 0.0 && v.imag() == 0.0; }
    static bool less(const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    }
    static std::string to_string(const Complex& v);
    static double abs(const Complex& v) { return std::abs(v); }
};

// Global data of the algebra: rank n and the deformation parameter eta.
// eta = -1 and eta = 1 select the two classical series; any other value is
// admitted as long as no evaluated denominator vanishes.
struct Params {
    int n = 1;
    Rational eta = 0;

    void validate() const {
        if (n < 1) throw ConfigError("rank n must be >= 1, got " + std::to_string(n));
    }
};

// Ordered tuple of pairwise distinct spectral parameters. Mirrors the sets
// written v1,...,vP with underlying unordered set v-bar; `without` drops one
// element, which is how the punctured sets enter the Bethe conditions.
template <class S>
class RapiditySet {
public:
    RapiditySet() = default;

    explicit RapiditySet(std::vector<S> values) : values_(std::move(values)) {
        for (std::size_t i = 0; i < values_.size(); ++i)
            for (std::size_t j = i + 1; j < values_.size(); ++j)
                if (values_[i] == values_[j])
                    throw RapidityClash("rapidity set has equal entries at positions " +
                                        std::to_string(i) + " and " + std::to_string(j));
    }

    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }
    const S& operator[](std::size_t i) const { return values_.at(i); }
    const std::vector<S>& values() const { return values_; }

    RapiditySet without(std::size_t i) const {
        if (i >= values_.size()) throw IndexOutOfRange("rapidity index out of range");
        std::vector<S> rest;
        rest.reserve(values_.size() - 1);
        for (std::size_t j = 0; j < values_.size(); ++j)
            if (j != i) rest.push_back(values_[j]);
        return RapiditySet(std::move(rest));
    }

    auto begin() const { return values_.begin(); }
    auto end() const { return values_.end(); }

private:
    std::vector<S> values_;
};

// Deterministic source of random rationals for identity checks. Numerators
// land in [-10000, 10000], denominators in [1, 100]. The raw engine output is
// mapped by modulus so the stream is reproducible independent of the standard
// library's distribution implementations.
class RationalSampler {
public:
    explicit RationalSampler(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    Rational next() {
        std::int64_t num = static_cast<std::int64_t>(next_raw() % 20001u) - 10000;
        std::int64_t den = static_cast<std::int64_t>(next_raw() % 100u) + 1;
        return Rational(num) / den;
    }

    Rational next_nonzero() {
        for (;;) {
            Rational r = next();
            if (!r.is_zero()) return r;
        }
    }

    // Keeps drawing until `admissible(candidate)` holds. Used to dodge poles.
    template <class Pred>
    Rational next_where(Pred&& admissible) {
        for (int tries = 0; tries < 10000; ++tries) {
            Rational r = next();
            if (admissible(r)) return r;
        }
        throw Error("sampler failed to find an admissible rational in 10000 draws");
    }

    // splitmix64: tiny, stable, well mixed. Exposed for index draws.
    std::uint64_t next_raw() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

} // namespace bethe
