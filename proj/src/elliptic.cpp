#include "arithdyn/elliptic.hpp"

#include <algorithm>
#include <sstream>

namespace arithdyn {

EllipticCurve::EllipticCurve(mpq_class a_, mpq_class b_) : a(std::move(a_)), b(std::move(b_)) {
    if (discriminant() == 0) throw DomainMismatch("singular curve: 4a^3 + 27b^2 = 0");
}

mpq_class EllipticCurve::discriminant() const {
    return mpq_class(-16) * (4 * a * a * a + 27 * b * b);
}

std::string EllipticPoint::str() const {
    if (infinity) return "O";
    std::ostringstream os;
    os << "(" << x << "; " << y << ")";
    return os.str();
}

bool on_curve(const EllipticCurve& E, const EllipticPoint& P) {
    if (P.infinity) return true;
    return P.y * P.y == P.x * P.x * P.x + E.a * P.x + E.b;
}

namespace {
void require_on_curve(const EllipticCurve& E, const EllipticPoint& P) {
    if (!on_curve(E, P)) throw OffCurve("point " + P.str() + " is not on the curve");
}
} // namespace

EllipticPoint negate(const EllipticCurve& E, const EllipticPoint& P) {
    require_on_curve(E, P);
    if (P.infinity) return P;
    return EllipticPoint::affine(P.x, -P.y);
}

EllipticPoint add(const EllipticCurve& E, const EllipticPoint& P, const EllipticPoint& Q) {
    require_on_curve(E, P);
    require_on_curve(E, Q);
    if (P.infinity) return Q;
    if (Q.infinity) return P;
    mpq_class lambda;
    if (P.x == Q.x) {
        if (P.y != Q.y || P.y == 0) return EllipticPoint::at_infinity(); // inverse pair or 2-torsion
        lambda = (3 * P.x * P.x + E.a) / (2 * P.y); // tangent
    } else {
        lambda = (Q.y - P.y) / (Q.x - P.x); // chord
    }
    mpq_class x3 = lambda * lambda - P.x - Q.x;
    mpq_class y3 = lambda * (P.x - x3) - P.y;
    x3.canonicalize();
    y3.canonicalize();
    return EllipticPoint::affine(x3, y3);
}

EllipticPoint multiply(const EllipticCurve& E, const mpz_class& m, const EllipticPoint& P) {
    require_on_curve(E, P);
    mpz_class k = abs(m);
    EllipticPoint base = m < 0 ? negate(E, P) : P;
    EllipticPoint acc = EllipticPoint::at_infinity();
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) acc = add(E, acc, base);
        k >>= 1;
        if (k > 0) base = add(E, base, base);
    }
    return acc;
}

TorsionVerdict is_torsion(const EllipticCurve& E, const EllipticPoint& P) {
    require_on_curve(E, P);
    EllipticPoint acc = EllipticPoint::at_infinity();
    for (int n = 1; n <= 12; ++n) {
        acc = add(E, acc, P);
        if (acc.infinity) return {true, n};
    }
    return {false, 0};
}

HeightValue naive_height(const EllipticCurve& E, const EllipticPoint& P) {
    require_on_curve(E, P);
    if (P.infinity) return HeightValue::of(0.0);
    auto proj = ProjectivePoint::from_rationals({P.x, mpq_class(1)});
    return weil_height(proj);
}

namespace {

std::vector<mpz_class> integer_roots_monic_cubic(const mpz_class& A, const mpz_class& B) {
    // roots of X^3 + A X + B over Z
    std::vector<mpz_class> roots;
    auto is_root = [&](const mpz_class& x) { return x * x * x + A * x + B == 0; };
    if (B == 0) {
        roots.push_back(0);
        // remaining: X^2 + A = 0
        if (A <= 0) {
            mpz_class s = sqrt(mpz_class(-A));
            if (s * s == -A && s != 0) {
                roots.push_back(s);
                roots.push_back(-s);
            }
        }
        return roots;
    }
    mpz_class absB = abs(B);
    for (mpz_class d = 1; d * d <= absB; ++d) {
        if (absB % d != 0) continue;
        for (const mpz_class& cand : {mpz_class(d), mpz_class(absB / d)}) {
            if (is_root(cand) && std::find(roots.begin(), roots.end(), cand) == roots.end())
                roots.push_back(cand);
            mpz_class neg = -cand;
            if (is_root(neg) && std::find(roots.begin(), roots.end(), neg) == roots.end())
                roots.push_back(neg);
        }
    }
    return roots;
}

} // namespace

std::vector<EllipticPoint> rational_torsion_points(const EllipticCurve& E) {
    // Integral model: X = u^2 x, Y = u^3 y with u = lcm of denominators, so
    // Y^2 = X^3 + A X + B with A = a u^4, B = b u^6 integral. Nagell-Lutz
    // applies there: torsion has integer coordinates and Y = 0 or Y^2 | disc.
    mpz_class u;
    mpz_lcm(u.get_mpz_t(), E.a.get_den().get_mpz_t(), E.b.get_den().get_mpz_t());
    mpz_class u2 = u * u;
    mpq_class Aq = E.a * u2 * u2, Bq = E.b * u2 * u2 * u2;
    Aq.canonicalize();
    Bq.canonicalize();
    mpz_class A(Aq.get_num()), B(Bq.get_num());
    mpz_class disc = abs(mpz_class(16 * (4 * A * A * A + 27 * B * B)));

    std::vector<EllipticPoint> found{EllipticPoint::at_infinity()};
    auto try_xy = [&](const mpz_class& X, const mpz_class& Y) {
        mpq_class x = mpq_class(X) / u2;
        mpq_class y = mpq_class(Y) / (u2 * u);
        x.canonicalize();
        y.canonicalize();
        EllipticPoint P = EllipticPoint::affine(x, y);
        if (!on_curve(E, P)) return;
        if (std::find(found.begin(), found.end(), P) != found.end()) return;
        if (is_torsion(E, P).torsion) found.push_back(P);
    };

    for (const auto& X : integer_roots_monic_cubic(A, B)) try_xy(X, 0);
    for (mpz_class y = 1; y * y <= disc; ++y) {
        if (disc % (y * y) != 0) continue;
        for (const auto& X : integer_roots_monic_cubic(A, B - y * y)) {
            try_xy(X, y);
            try_xy(X, -y);
        }
    }
    return found;
}

std::vector<EllipticPoint> kernel_witness(const EllipticCurve& E, long m1, long b, int bound) {
    if (m1 == b) throw DegenerateKernel("m1 = b gives an infinite kernel");
    mpz_class k = abs(mpz_class(m1) - b);
    std::vector<EllipticPoint> out;
    for (const auto& Q : rational_torsion_points(E)) {
        auto t = is_torsion(E, Q);
        if (t.torsion && t.order <= bound && multiply(E, k, Q).infinity) out.push_back(Q);
    }
    return out;
}

} // namespace arithdyn
