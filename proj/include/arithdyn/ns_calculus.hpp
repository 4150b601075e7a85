#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "arithdyn/bigmath.hpp"
#include "arithdyn/errors.hpp"

namespace arithdyn {

// Integer Neron-Severi lattice model: intersection pairing on a chosen basis.
// A ruled model (P^1-bundle over a curve) has basis (F, C0) and Gram matrix
// [[0,1],[1,-e]].
struct NSModel {
    int rank = 0;
    IntMatrix gram;
    std::vector<std::string> basis_labels;
    std::optional<long> ruled_e;

    static NSModel ruled(long e);
    static NSModel hyperplane(); // P^N: rank 1, self-intersection 1
    static NSModel product_of_lines(int d); // (P^1)^d: diagonal, h_i^2 = 0 pairing off-diag 1? see impl
    void validate() const;
};

// Action of f^* on the model's basis; columns are images of basis vectors.
struct PullbackAction {
    IntMatrix matrix;
    mpz_class deg_f = 1;
};

struct RuledInvariants {
    long a = 1;
    long c = 0;
    long d = 1;
    long e = 0;
    mpz_class deg_f = 1;
    double delta = 1.0;
    bool realizable = true;
    std::string failure; // which constraint failed, empty when realizable
};

mpz_class intersect(const NSModel& model, const IntVector& D1, const IntVector& D2);

// Projection-formula Gram identity: M^T G M == deg_f * G, exactly.
bool check_pullback(const NSModel& model, const PullbackAction& action);

struct SpectralRadius {
    double value = 0.0;
    double error_bound = 0.0;
};

// Largest modulus among complex eigenvalues, certified via the exact integer
// characteristic polynomial (Faddeev-LeVerrier) with Newton refinement on its
// squarefree part.
SpectralRadius spectral_radius(const IntMatrix& matrix);

// Exact characteristic polynomial, coefficients low-to-high, monic.
std::vector<mpz_class> characteristic_polynomial(const IntMatrix& matrix);

double dynamical_degree(const PullbackAction& action);

RuledInvariants ruled_solve(long a, long d, long e);

bool is_ample_ruled(long a_coeff, long b_coeff, long e);

bool fiber_preserving_test(const PullbackAction& action);

mpz_class mat_det_exact(const IntMatrix& A);

} // namespace arithdyn
