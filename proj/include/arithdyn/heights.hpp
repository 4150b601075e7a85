#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

#include "arithdyn/bigmath.hpp"
#include "arithdyn/errors.hpp"

namespace arithdyn {

// Logarithmic height, natural-log scale, with the h^+ = max(h, 1) companion.
struct HeightValue {
    double value = 0.0;
    double plus_value = 1.0;

    static HeightValue of(double v) { return {v, v > 1.0 ? v : 1.0}; }
};

// Rational point of P^N in primitive integer coordinates: gcd 1, first
// nonzero coordinate positive. Immutable after construction.
class ProjectivePoint {
public:
    static ProjectivePoint from_integers(std::vector<mpz_class> raw);
    static ProjectivePoint from_rationals(const std::vector<mpq_class>& raw);

    const std::vector<mpz_class>& coords() const { return coords_; }
    size_t dim() const { return coords_.size() - 1; } // ambient P^N dimension N

    bool operator==(const ProjectivePoint& o) const { return coords_ == o.coords_; }
    std::string str() const;

private:
    explicit ProjectivePoint(std::vector<mpz_class> c) : coords_(std::move(c)) {}
    std::vector<mpz_class> coords_;
};

ProjectivePoint normalize_projective(const std::vector<mpq_class>& raw);

HeightValue weil_height(const ProjectivePoint& P);

// One nonzero rational in factored form: sign * prod p_i^{e_i}.
// Primes distinct and increasing, exponents nonzero (canonical form).
struct FactoredRational {
    int sign = 1; // +1 or -1
    std::vector<std::pair<mpz_class, mpz_class>> factors; // (prime, exponent)

    static FactoredRational one() { return {}; }
    static FactoredRational from_rational(const mpq_class& q);

    FactoredRational times(const FactoredRational& o) const;
    FactoredRational pow(const mpz_class& k) const;
    FactoredRational inverse() const { return pow(-1); }

    mpq_class to_rational() const;     // expands; caller checks exponent size
    double log_numerator() const;      // log of prod_{e>0} p^e
    double log_denominator() const;    // log of prod_{e<0} p^{-e}
    double log_height() const;         // log max(|num|, |den|) in lowest terms
    size_t max_exponent_bits() const;

    bool operator==(const FactoredRational& o) const {
        return sign == o.sign && factors == o.factors;
    }
    void validate() const;
    std::string str() const;
};

// Point of the torus G_m^d with every coordinate stored factored, so that
// monomial orbits only ever grow exponents, never re-factor.
class TorusPoint {
public:
    explicit TorusPoint(std::vector<FactoredRational> coords);
    static TorusPoint from_rationals(const std::vector<mpq_class>& coords);

    const std::vector<FactoredRational>& coords() const { return coords_; }
    size_t dim() const { return coords_.size(); }

    bool operator==(const TorusPoint& o) const { return coords_ == o.coords_; }
    std::string str() const;

private:
    std::vector<FactoredRational> coords_;
};

enum class TorusEmbedding { ProductOfLines, ProjectiveSpace };

// ProductOfLines: sum of P^1-heights of the coordinates.
// ProjectiveSpace: height of (1 : x_1 : ... : x_d), computed from the
// factored form without expanding the integers.
HeightValue torus_height(const TorusPoint& P, TorusEmbedding embedding);

// Tightest (M, M') with M > 0 such that h_prod >= M * h_proj + M' over the
// sample; degenerate all-zero sample returns (1, 0).
std::pair<double, double> height_comparability_constants(const std::vector<TorusPoint>& samples);

} // namespace arithdyn
