#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "arithdyn/bigmath.hpp"
#include "arithdyn/errors.hpp"

namespace arithdyn {

// Sparse multivariate integer polynomial. Exponent vectors all have length
// nvars; terms are kept sorted by exponent vector with like terms merged.
struct Polynomial {
    struct Term {
        mpz_class coef;
        std::vector<unsigned> exps;
    };

    size_t nvars = 0;
    std::vector<Term> terms;

    static Polynomial zero(size_t nvars) { return {nvars, {}}; }
    static Polynomial constant(size_t nvars, const mpz_class& c);
    static Polynomial variable(size_t nvars, size_t idx);

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial pow(unsigned k) const;

    bool is_zero() const { return terms.empty(); }
    unsigned total_degree() const;
    bool is_homogeneous() const;

    mpz_class eval(const std::vector<mpz_class>& point) const;
    mpq_class eval(const std::vector<mpq_class>& point) const;

    // Substitute args[i] for variable i; args share a common variable set.
    Polynomial compose(const std::vector<Polynomial>& args) const;

    void normalize(); // sort terms, merge, drop zeros
    std::string str(const std::vector<std::string>& var_names) const;
};

// Grammar: integer coefficients, named variables, caret powers, explicit *
// products, + and -. Example: "3*x^2*y - y^3".
Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& var_names);

} // namespace arithdyn
