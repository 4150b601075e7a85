#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "arithdyn/errors.hpp"
#include "arithdyn/heights.hpp"

namespace arithdyn {

// Short Weierstrass curve y^2 = x^3 + a*x + b over Q.
struct EllipticCurve {
    mpq_class a;
    mpq_class b;

    EllipticCurve(mpq_class a_, mpq_class b_);
    mpq_class discriminant() const; // -16(4a^3 + 27b^2)
};

struct EllipticPoint {
    bool infinity = true;
    mpq_class x;
    mpq_class y;

    static EllipticPoint at_infinity() { return {}; }
    static EllipticPoint affine(mpq_class x, mpq_class y) { return {false, std::move(x), std::move(y)}; }

    bool operator==(const EllipticPoint& o) const {
        if (infinity || o.infinity) return infinity == o.infinity;
        return x == o.x && y == o.y;
    }
    std::string str() const;
};

bool on_curve(const EllipticCurve& E, const EllipticPoint& P);

EllipticPoint negate(const EllipticCurve& E, const EllipticPoint& P);
EllipticPoint add(const EllipticCurve& E, const EllipticPoint& P, const EllipticPoint& Q);
EllipticPoint multiply(const EllipticCurve& E, const mpz_class& m, const EllipticPoint& P);

struct TorsionVerdict {
    bool torsion = false;
    int order = 0; // valid when torsion
};

// Checks [n]P = O for n in 1..12; over Q the uniform torsion bound makes a
// miss conclusive.
TorsionVerdict is_torsion(const EllipticCurve& E, const EllipticPoint& P);

// Naive height: Weil height of the x-coordinate on P^1; infinity -> 0.
HeightValue naive_height(const EllipticCurve& E, const EllipticPoint& P);

// All rational torsion points (Nagell-Lutz on an integral model, then each
// candidate is certified by is_torsion).
std::vector<EllipticPoint> rational_torsion_points(const EllipticCurve& E);

// Rational points Q with [|m1 - b|]Q = O: the rational part of
// Ker(f_C^* - [b]) when f_C^* acts as [m1].
std::vector<EllipticPoint> kernel_witness(const EllipticCurve& E, long m1, long b, int bound = 12);

} // namespace arithdyn
