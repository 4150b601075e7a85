#include "arithdyn/ns_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace arithdyn {

NSModel NSModel::ruled(long e) {
    NSModel m;
    m.rank = 2;
    m.gram = {{mpz_class(0), mpz_class(1)}, {mpz_class(1), mpz_class(-e)}};
    m.basis_labels = {"F", "C0"};
    m.ruled_e = e;
    return m;
}

NSModel NSModel::hyperplane() {
    NSModel m;
    m.rank = 1;
    m.gram = {{mpz_class(1)}};
    m.basis_labels = {"H"};
    return m;
}

NSModel NSModel::product_of_lines(int d) {
    NSModel m;
    m.rank = d;
    m.gram.assign(d, IntVector(d, 1));
    for (int i = 0; i < d; ++i) m.gram[i][i] = 0; // h_i . h_i = 0, h_i . h_j = 1
    for (int i = 0; i < d; ++i) m.basis_labels.push_back("h" + std::to_string(i + 1));
    return m;
}

void NSModel::validate() const {
    if (rank <= 0 || gram.size() != static_cast<size_t>(rank))
        throw DimensionMismatch("NS model rank/gram mismatch");
    for (const auto& row : gram)
        if (row.size() != static_cast<size_t>(rank))
            throw DimensionMismatch("NS gram is not square");
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j)
            if (gram[i][j] != gram[j][i]) throw DimensionMismatch("NS gram is not symmetric");
    if (ruled_e) {
        if (rank != 2) throw DimensionMismatch("ruled model must have rank 2");
        if (gram[0][0] != 0 || gram[0][1] != 1 || gram[1][0] != 1 || gram[1][1] != -*ruled_e)
            throw DimensionMismatch("ruled model gram must be [[0,1],[1,-e]]");
    }
}

mpz_class intersect(const NSModel& model, const IntVector& D1, const IntVector& D2) {
    if (D1.size() != static_cast<size_t>(model.rank) || D2.size() != static_cast<size_t>(model.rank))
        throw DimensionMismatch("divisor vector length != rank");
    mpz_class s = 0;
    for (int i = 0; i < model.rank; ++i)
        for (int j = 0; j < model.rank; ++j) s += D1[i] * model.gram[i][j] * D2[j];
    return s;
}

bool check_pullback(const NSModel& model, const PullbackAction& action) {
    size_t n = model.gram.size();
    if (action.matrix.size() != n) throw DimensionMismatch("pullback matrix size != rank");
    for (const auto& row : action.matrix)
        if (row.size() != n) throw DimensionMismatch("pullback matrix not square");
    // M^T G M vs deg * G
    IntMatrix GM = mat_mul(model.gram, action.matrix);
    IntMatrix MT(n, IntVector(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) MT[i][j] = action.matrix[j][i];
    IntMatrix lhs = mat_mul(MT, GM);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (lhs[i][j] != action.deg_f * model.gram[i][j]) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Exact characteristic polynomial (Faddeev-LeVerrier).

std::vector<mpz_class> characteristic_polynomial(const IntMatrix& A) {
    size_t n = A.size();
    for (const auto& row : A)
        if (row.size() != n) throw DimensionMismatch("characteristic polynomial needs a square matrix");
    // p(x) = x^n + c1 x^{n-1} + ... + cn, coefficients returned low-to-high.
    std::vector<mpz_class> c(n + 1, 0);
    c[n] = 1;
    IntMatrix B = A;
    mpz_class ck;
    for (size_t k = 1; k <= n; ++k) {
        mpz_class tr = 0;
        for (size_t i = 0; i < n; ++i) tr += B[i][i];
        // tr is exactly divisible by k
        mpz_class kk(static_cast<unsigned long>(k));
        mpz_divexact(ck.get_mpz_t(), tr.get_mpz_t(), kk.get_mpz_t());
        ck = -ck;
        c[n - k] = ck;
        if (k < n) {
            for (size_t i = 0; i < n; ++i) B[i][i] += ck;
            B = mat_mul(A, B);
        }
    }
    return c;
}

mpz_class mat_det_exact(const IntMatrix& A) {
    auto p = characteristic_polynomial(A);
    // p(0) = (-1)^n det(A)
    mpz_class det = p[0];
    if (A.size() % 2 == 1) det = -det;
    return det;
}

namespace {

using QPoly = std::vector<mpq_class>; // low-to-high, may have trailing zeros trimmed

void trim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

QPoly derivative(const QPoly& p) {
    QPoly d;
    for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * mpq_class(static_cast<long>(i)));
    trim(d);
    return d;
}

QPoly poly_mod(QPoly a, const QPoly& b) {
    while (a.size() >= b.size() && !b.empty()) {
        mpq_class q = a.back() / b.back();
        size_t shift = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= q * b[i];
        a.pop_back();
        trim(a);
        if (a.empty()) break;
    }
    return a;
}

QPoly poly_gcd(QPoly a, QPoly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        QPoly r = poly_mod(a, b);
        a = b;
        b = r;
    }
    if (!a.empty()) {
        mpq_class lead = a.back();
        for (auto& x : a) x /= lead;
    }
    return a;
}

QPoly poly_div_exact(QPoly a, const QPoly& b) {
    QPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, mpq_class(0));
    while (a.size() >= b.size() && !a.empty()) {
        mpq_class f = a.back() / b.back();
        size_t shift = a.size() - b.size();
        q[shift] = f;
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
        trim(a);
        if (a.size() < b.size()) break;
    }
    return q;
}

std::complex<double> horner(const std::vector<double>& c, std::complex<double> z) {
    std::complex<double> v = 0.0;
    for (size_t i = c.size(); i-- > 0;) v = v * z + c[i];
    return v;
}

} // namespace

SpectralRadius spectral_radius(const IntMatrix& matrix) {
    size_t n = matrix.size();
    if (n == 0) return {0.0, 0.0};
    auto ip = characteristic_polynomial(matrix);

    QPoly p(ip.size());
    for (size_t i = 0; i < ip.size(); ++i) p[i] = mpq_class(ip[i]);
    // Squarefree part: p / gcd(p, p'); kills eigenvalue multiplicities so
    // Newton bounds stay finite.
    QPoly g = poly_gcd(p, derivative(p));
    QPoly sf = (g.size() > 1) ? poly_div_exact(p, g) : p;
    trim(sf);
    if (sf.size() <= 1) return {0.0, 0.0};

    std::vector<double> cd(sf.size());
    for (size_t i = 0; i < sf.size(); ++i) cd[i] = mpq_get_d(sf[i].get_mpq_t());
    // make monic in double
    for (auto& x : cd) x /= cd.back();
    size_t deg = cd.size() - 1;

    std::vector<double> dcd(deg);
    for (size_t i = 1; i <= deg; ++i) dcd[i - 1] = cd[i] * static_cast<double>(i);

    // Durand-Kerner on the squarefree part.
    std::vector<std::complex<double>> roots(deg);
    std::complex<double> seed(0.4, 0.9);
    std::complex<double> acc(1.0, 0.0);
    for (size_t i = 0; i < deg; ++i) {
        acc *= seed;
        roots[i] = acc;
    }
    for (int iter = 0; iter < 500; ++iter) {
        double move = 0.0;
        for (size_t i = 0; i < deg; ++i) {
            std::complex<double> num = horner(cd, roots[i]);
            std::complex<double> den = 1.0;
            for (size_t j = 0; j < deg; ++j)
                if (j != i) den *= roots[i] - roots[j];
            if (std::abs(den) == 0.0) continue;
            std::complex<double> delta = num / den;
            roots[i] -= delta;
            move = std::max(move, std::abs(delta));
        }
        if (move < 1e-14) break;
    }

    size_t best = 0;
    for (size_t i = 1; i < deg; ++i)
        if (std::abs(roots[i]) > std::abs(roots[best])) best = i;
    std::complex<double> z = roots[best];
    for (int it = 0; it < 50; ++it) {
        std::complex<double> pv = horner(cd, z);
        std::complex<double> dv = horner(dcd, z);
        if (std::abs(dv) == 0.0) break;
        std::complex<double> step = pv / dv;
        z -= step;
        if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(z))) break;
    }
    // If the dominant eigenvalue should be real (tiny imaginary part), snap to
    // the real axis before reporting the modulus.
    if (std::fabs(z.imag()) < 1e-9 * std::max(1.0, std::fabs(z.real()))) {
        double x = z.real();
        for (int it = 0; it < 50; ++it) {
            std::complex<double> pv = horner(cd, {x, 0.0});
            std::complex<double> dv = horner(dcd, {x, 0.0});
            if (std::abs(dv) == 0.0) break;
            double step = pv.real() / dv.real();
            x -= step;
            if (std::fabs(step) < 1e-16 * std::max(1.0, std::fabs(x))) break;
        }
        z = {x, 0.0};
    }

    double residual = std::abs(horner(cd, z));
    double dval = std::abs(horner(dcd, z));
    double bound = dval > 0.0 ? static_cast<double>(deg) * residual / dval : 1e-9;
    bound = std::max(bound, 1e-15);
    return {std::abs(z), bound};
}

double dynamical_degree(const PullbackAction& action) {
    return spectral_radius(action.matrix).value;
}

RuledInvariants ruled_solve(long a, long d, long e) {
    if (a < 1 || d < 1 || e < 0) throw NotRealizable("ruled_solve needs a>=1, d>=1, e>=0");
    long num = e * (d - a);
    if (num % 2 != 0) throw NotRealizable("e(d-a) is odd, no integral c exists");
    RuledInvariants r;
    r.a = a;
    r.d = d;
    r.e = e;
    r.c = num / 2;
    r.deg_f = mpz_class(a) * d;
    r.delta = static_cast<double>(std::max(a, d));
    if (e > 0 && a != d) {
        r.realizable = false;
        r.failure = "cone preservation: e>0 forces deg(f_C)=deg(f_F)";
    }
    return r;
}

bool is_ample_ruled(long a_coeff, long b_coeff, long e) {
    if (e < 0) throw NegativeE("ampleness criterion requires e >= 0");
    return a_coeff > b_coeff * e && b_coeff > 0;
}

bool fiber_preserving_test(const PullbackAction& action) {
    if (action.matrix.size() != 2) throw DimensionMismatch("fiber-preserving test needs a rank-2 action");
    return action.matrix[0][0] != 0 && action.matrix[1][0] == 0;
}

} // namespace arithdyn
