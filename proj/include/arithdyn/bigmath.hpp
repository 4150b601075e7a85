#pragma once

#include <gmpxx.h>

#include <cmath>
#include <string>
#include <vector>

namespace arithdyn {

// log|z| for a nonzero integer, O(1) after the integer exists:
// |z| = m * 2^e with m in [0.5, 1), so log|z| = log(m) + e*log(2).
inline double log_abs(const mpz_class& z) {
    signed long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
    mant = std::fabs(mant);
    if (mant == 0.0) return 0.0; // caller guarantees z != 0 where it matters
    return std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
}

inline double log_abs(const mpq_class& q) {
    return log_abs(mpz_class(q.get_num())) - log_abs(mpz_class(q.get_den()));
}

inline mpz_class parse_mpz(const std::string& s) { return mpz_class(s, 10); }

// Accepts "a" or "a/b".
inline mpq_class parse_mpq(const std::string& s) {
    mpq_class q(s, 10);
    q.canonicalize();
    return q;
}

inline size_t bit_length(const mpz_class& z) {
    if (z == 0) return 0;
    return mpz_sizeinbase(z.get_mpz_t(), 2);
}

using IntMatrix = std::vector<std::vector<mpz_class>>;
using IntVector = std::vector<mpz_class>;

inline IntMatrix mat_mul(const IntMatrix& A, const IntMatrix& B) {
    size_t n = A.size(), m = B[0].size(), k = B.size();
    IntMatrix C(n, IntVector(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l)
            for (size_t j = 0; j < m; ++j) C[i][j] += A[i][l] * B[l][j];
    return C;
}

inline IntMatrix mat_identity(size_t n) {
    IntMatrix I(n, IntVector(n, 0));
    for (size_t i = 0; i < n; ++i) I[i][i] = 1;
    return I;
}

inline IntMatrix mat_pow(IntMatrix A, unsigned long t) {
    IntMatrix R = mat_identity(A.size());
    while (t > 0) {
        if (t & 1) R = mat_mul(R, A);
        A = mat_mul(A, A);
        t >>= 1;
    }
    return R;
}

inline mpz_class mat_det(const IntMatrix& A); // fraction-free Gauss, in ns_calculus.cpp

} // namespace arithdyn
