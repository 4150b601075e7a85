#include "arithdyn/map_zoo.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace arithdyn {

std::string ProductPoint::str() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < factors.size(); ++i) {
        if (i) os << " x ";
        os << factors[i].str();
    }
    os << "]";
    return os.str();
}

std::string point_key(const Point& P) {
    return std::visit([](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ProjectivePoint>) return "P" + p.str();
        else if constexpr (std::is_same_v<T, TorusPoint>) return "T" + p.str();
        else if constexpr (std::is_same_v<T, ProductPoint>) return "X" + p.str();
        else return "E" + p.str();
    }, P);
}

size_t point_bit_size(const Point& P) {
    return std::visit([](const auto& p) -> size_t {
        using T = std::decay_t<decltype(p)>;
        size_t b = 0;
        if constexpr (std::is_same_v<T, ProjectivePoint>) {
            for (const auto& c : p.coords()) b = std::max(b, bit_length(c));
        } else if constexpr (std::is_same_v<T, TorusPoint>) {
            for (const auto& c : p.coords()) b = std::max(b, c.max_exponent_bits());
        } else if constexpr (std::is_same_v<T, ProductPoint>) {
            for (const auto& f : p.factors)
                for (const auto& c : f.coords()) b = std::max(b, bit_length(c));
        } else {
            if (!p.infinity) {
                b = std::max({bit_length(mpz_class(p.x.get_num())), bit_length(mpz_class(p.x.get_den())),
                              bit_length(mpz_class(p.y.get_num())), bit_length(mpz_class(p.y.get_den()))});
            }
        }
        return b;
    }, P);
}

// --- constructors -----------------------------------------------------------

SelfMap SelfMap::projective(size_t dim, std::vector<Polynomial> polys, bool asserted_morphism) {
    if (polys.size() != dim + 1) throw DomainMismatch("P^N self-map needs N+1 polynomials");
    unsigned deg = 0;
    for (const auto& p : polys) {
        if (p.is_zero()) continue;
        if (!p.is_homogeneous()) throw DomainMismatch("coordinate polynomial is not homogeneous");
        unsigned d = p.total_degree();
        if (deg == 0) deg = d;
        else if (d != deg) throw DomainMismatch("coordinate polynomials have different degrees");
    }
    if (deg == 0) throw DomainMismatch("zero map");
    SelfMap f;
    f.kind = ProjectivePolyMap{dim, std::move(polys), deg, asserted_morphism};
    return f;
}

SelfMap SelfMap::monomial(IntMatrix A, std::vector<FactoredRational> coeffs) {
    size_t d = A.size();
    for (const auto& row : A)
        if (row.size() != d) throw DomainMismatch("monomial exponent matrix not square");
    if (mat_det_exact(A) == 0) throw DomainMismatch("monomial map not dominant: det(A) = 0");
    if (coeffs.empty()) coeffs.assign(d, FactoredRational::one());
    if (coeffs.size() != d) throw DomainMismatch("monomial coefficient count != dimension");
    for (const auto& c : coeffs) c.validate();
    SelfMap f;
    f.kind = MonomialMap{std::move(A), std::move(coeffs)};
    return f;
}

SelfMap SelfMap::product(std::vector<SelfMap> p1_factors) {
    ProductMap pm;
    for (auto& g : p1_factors) {
        auto* pp = std::get_if<ProjectivePolyMap>(&g.kind);
        if (!pp || pp->dim != 1) throw DomainMismatch("product factors must act on P^1");
        pm.factors.push_back(*pp);
    }
    if (pm.factors.empty()) throw DomainMismatch("empty product map");
    SelfMap f;
    f.kind = std::move(pm);
    return f;
}

SelfMap SelfMap::ruled(const RuledInvariants& inv) {
    SelfMap f;
    f.kind = RuledNSMap{inv};
    f.known_delta = inv.delta;
    return f;
}

SelfMap SelfMap::elliptic(EllipticCurve E, long m, EllipticPoint translate) {
    if (m == 0) throw DomainMismatch("multiplication by 0 is not dominant");
    if (!on_curve(E, translate)) throw OffCurve("translation point not on curve");
    SelfMap f;
    f.kind = EllipticMap{std::move(E), m, std::move(translate)};
    return f;
}

SelfMap translation_map(const EllipticCurve& E, const EllipticPoint& c) {
    SelfMap f = SelfMap::elliptic(E, 1, c);
    f.known_delta = 1.0;
    return f;
}

// --- evaluation -------------------------------------------------------------

std::optional<Point> evaluate(const SelfMap& f, const Point& P) {
    if (auto* pp = std::get_if<ProjectivePolyMap>(&f.kind)) {
        auto* p = std::get_if<ProjectivePoint>(&P);
        if (!p || p->dim() != pp->dim) throw DomainMismatch("expected a point of P^" + std::to_string(pp->dim));
        std::vector<mpz_class> out;
        out.reserve(pp->polys.size());
        bool all_zero = true;
        for (const auto& poly : pp->polys) {
            out.push_back(poly.eval(p->coords()));
            if (out.back() != 0) all_zero = false;
        }
        if (all_zero) return std::nullopt; // indeterminacy locus
        return Point(ProjectivePoint::from_integers(std::move(out)));
    }
    if (auto* mm = std::get_if<MonomialMap>(&f.kind)) {
        auto* p = std::get_if<TorusPoint>(&P);
        if (!p || p->dim() != mm->exponents.size()) throw DomainMismatch("expected a torus point of matching dimension");
        std::vector<FactoredRational> out;
        size_t d = p->dim();
        for (size_t j = 0; j < d; ++j) {
            FactoredRational c = mm->coeffs[j];
            for (size_t i = 0; i < d; ++i)
                if (mm->exponents[j][i] != 0) c = c.times(p->coords()[i].pow(mm->exponents[j][i]));
            out.push_back(std::move(c));
        }
        return Point(TorusPoint(std::move(out)));
    }
    if (auto* pm = std::get_if<ProductMap>(&f.kind)) {
        auto* p = std::get_if<ProductPoint>(&P);
        if (!p || p->factors.size() != pm->factors.size()) throw DomainMismatch("expected a product point of matching length");
        ProductPoint out;
        for (size_t i = 0; i < pm->factors.size(); ++i) {
            SelfMap fi;
            fi.kind = pm->factors[i];
            auto r = evaluate(fi, Point(p->factors[i]));
            if (!r) return std::nullopt;
            out.factors.push_back(std::get<ProjectivePoint>(*r));
        }
        return Point(std::move(out));
    }
    if (auto* em = std::get_if<EllipticMap>(&f.kind)) {
        auto* p = std::get_if<EllipticPoint>(&P);
        if (!p) throw DomainMismatch("expected an elliptic point");
        return Point(add(em->curve, multiply(em->curve, em->m, *p), em->translate));
    }
    throw DomainMismatch("RuledNS maps are NS-level only and have no point evaluation");
}

HeightValue point_height(const SelfMap& f, const Point& P, TorusEmbedding embedding) {
    (void)f;
    return std::visit([&](const auto& p) -> HeightValue {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ProjectivePoint>) {
            return weil_height(p);
        } else if constexpr (std::is_same_v<T, TorusPoint>) {
            return torus_height(p, embedding);
        } else if constexpr (std::is_same_v<T, ProductPoint>) {
            double h = 0.0;
            for (const auto& q : p.factors) h += weil_height(q).value;
            return HeightValue::of(h);
        } else {
            const auto* em = std::get_if<EllipticMap>(&f.kind);
            if (!em) throw DomainMismatch("elliptic point height needs an elliptic map context");
            return naive_height(em->curve, p);
        }
    }, P);
}

OrbitRecord iterate_orbit(const SelfMap& f, const Point& P, const OrbitOptions& opts) {
    OrbitRecord rec;
    std::map<std::string, size_t> seen;
    Point cur = P;
    bool tracking = true;
    for (size_t n = 0;; ++n) {
        rec.points.push_back(cur);
        rec.heights.push_back(point_height(f, cur, opts.embedding));
        if (tracking) {
            auto key = point_key(cur);
            auto it = seen.find(key);
            if (it != seen.end()) {
                // points[tail_start + period] == points[tail_start], both kept
                rec.status = {OrbitStatus::Preperiodic, 0, it->second, n - it->second};
                return rec;
            }
            if (seen.size() < opts.preperiodic_memory_cap) seen.emplace(std::move(key), n);
            else tracking = false; // beyond cap, degrade to Completed
        }
        if (n == opts.n_max) {
            rec.status = {OrbitStatus::Completed, n};
            return rec;
        }
        auto next = evaluate(f, cur);
        if (!next) {
            rec.status = {OrbitStatus::HitIndeterminacy, n};
            return rec;
        }
        if (point_bit_size(*next) > opts.bit_budget) {
            rec.status = {OrbitStatus::BitBudgetExceeded, n + 1};
            return rec;
        }
        cur = std::move(*next);
    }
}

// --- NS actions and degrees -------------------------------------------------

NSAction ns_action_of(const SelfMap& f) {
    if (auto* pp = std::get_if<ProjectivePolyMap>(&f.kind)) {
        if (!pp->asserted_morphism)
            throw Unavailable("no certified NS action for a rational map with possible indeterminacy");
        NSAction a;
        a.model = NSModel::hyperplane();
        a.action.matrix = {{mpz_class(pp->deg)}};
        mpz_pow_ui(a.action.deg_f.get_mpz_t(), mpz_class(pp->deg).get_mpz_t(), pp->dim);
        return a;
    }
    if (auto* mm = std::get_if<MonomialMap>(&f.kind)) {
        size_t d = mm->exponents.size();
        for (const auto& row : mm->exponents)
            for (const auto& e : row)
                if (e < 0)
                    throw Unavailable("monomial map with negative exponents has no certified action on (P^1)^d; use known_delta = rho(A)");
        NSAction a;
        a.model = NSModel::product_of_lines(static_cast<int>(d));
        a.action.matrix.assign(d, IntVector(d, 0));
        for (size_t i = 0; i < d; ++i)
            for (size_t j = 0; j < d; ++j) a.action.matrix[i][j] = mm->exponents[j][i];
        a.action.deg_f = abs(mat_det_exact(mm->exponents));
        return a;
    }
    if (auto* pm = std::get_if<ProductMap>(&f.kind)) {
        size_t d = pm->factors.size();
        NSAction a;
        a.model = NSModel::product_of_lines(static_cast<int>(d));
        a.action.matrix.assign(d, IntVector(d, 0));
        a.action.deg_f = 1;
        for (size_t i = 0; i < d; ++i) {
            a.action.matrix[i][i] = pm->factors[i].deg;
            a.action.deg_f *= pm->factors[i].deg;
        }
        return a;
    }
    if (auto* rn = std::get_if<RuledNSMap>(&f.kind)) {
        NSAction a;
        a.model = NSModel::ruled(rn->inv.e);
        a.action.matrix = {{mpz_class(rn->inv.a), mpz_class(rn->inv.c)},
                           {mpz_class(0), mpz_class(rn->inv.d)}};
        a.action.deg_f = rn->inv.deg_f;
        return a;
    }
    const auto& em = std::get<EllipticMap>(f.kind);
    NSAction a;
    a.model.rank = 1;
    a.model.gram = {{mpz_class(0)}}; // degree pairing is trivial on a curve
    a.model.basis_labels = {"pt"};
    mpz_class m2 = mpz_class(em.m) * em.m;
    a.action.matrix = {{m2}};
    a.action.deg_f = m2;
    return a;
}

double delta_of(const SelfMap& f) {
    if (f.known_delta) return *f.known_delta;
    if (auto* mm = std::get_if<MonomialMap>(&f.kind))
        return spectral_radius(mm->exponents).value; // delta = rho(A) for monomial maps
    if (auto* rn = std::get_if<RuledNSMap>(&f.kind)) return rn->inv.delta;
    return spectral_radius(ns_action_of(f).action.matrix).value;
}

mpz_class topological_degree(const SelfMap& f) {
    if (auto* mm = std::get_if<MonomialMap>(&f.kind)) return abs(mat_det_exact(mm->exponents));
    return ns_action_of(f).action.deg_f;
}

// --- iterates ---------------------------------------------------------------

SelfMap power_map(const SelfMap& f, unsigned t, unsigned degree_cap) {
    if (t < 1) throw DomainMismatch("power_map needs t >= 1");
    if (auto* pp = std::get_if<ProjectivePolyMap>(&f.kind)) {
        double total = 1.0;
        for (unsigned k = 0; k < t; ++k) {
            total *= pp->deg;
            if (total > degree_cap) throw CompositionOverflow("composed degree exceeds cap");
        }
        std::vector<Polynomial> acc = pp->polys;
        for (unsigned k = 1; k < t; ++k) {
            std::vector<Polynomial> next;
            next.reserve(pp->polys.size());
            for (const auto& poly : pp->polys) next.push_back(poly.compose(acc));
            acc = std::move(next);
        }
        SelfMap g = SelfMap::projective(pp->dim, std::move(acc), pp->asserted_morphism);
        g.id = f.id.empty() ? "" : f.id + "^" + std::to_string(t);
        return g;
    }
    if (auto* mm = std::get_if<MonomialMap>(&f.kind)) {
        // Coefficient transport: iterating y = c * x^A gives coefficients
        // c^(I + A + ... + A^{t-1}) in the matrix-exponent sense.
        size_t d = mm->exponents.size();
        IntMatrix S = mat_identity(d); // I + A + ... + A^{t-1}
        IntMatrix Ak = mm->exponents;
        for (unsigned k = 1; k < t; ++k) {
            for (size_t i = 0; i < d; ++i)
                for (size_t j = 0; j < d; ++j) S[i][j] += Ak[i][j];
            if (k + 1 < t) Ak = mat_mul(Ak, mm->exponents);
        }
        std::vector<FactoredRational> coeffs;
        for (size_t j = 0; j < d; ++j) {
            FactoredRational c = FactoredRational::one();
            for (size_t i = 0; i < d; ++i)
                if (S[j][i] != 0) c = c.times(mm->coeffs[i].pow(S[j][i]));
            coeffs.push_back(std::move(c));
        }
        SelfMap g = SelfMap::monomial(mat_pow(mm->exponents, t), std::move(coeffs));
        g.id = f.id.empty() ? "" : f.id + "^" + std::to_string(t);
        return g;
    }
    if (auto* pm = std::get_if<ProductMap>(&f.kind)) {
        std::vector<SelfMap> factors;
        for (const auto& fac : pm->factors) {
            SelfMap fi;
            fi.kind = fac;
            factors.push_back(power_map(fi, t, degree_cap));
        }
        return SelfMap::product(std::move(factors));
    }
    if (auto* rn = std::get_if<RuledNSMap>(&f.kind)) {
        // (f^t)^* = (f^*)^t on the (F, C0) basis.
        IntMatrix M = mat_pow({{mpz_class(rn->inv.a), mpz_class(rn->inv.c)},
                               {mpz_class(0), mpz_class(rn->inv.d)}}, t);
        RuledInvariants inv = rn->inv;
        inv.a = static_cast<long>(M[0][0].get_si());
        inv.c = static_cast<long>(M[0][1].get_si());
        inv.d = static_cast<long>(M[1][1].get_si());
        mpz_pow_ui(inv.deg_f.get_mpz_t(), rn->inv.deg_f.get_mpz_t(), t);
        inv.delta = std::pow(rn->inv.delta, static_cast<double>(t));
        return SelfMap::ruled(inv);
    }
    const auto& em = std::get<EllipticMap>(f.kind);
    // f(P) = [m]P + c, so f^t(P) = [m^t]P + sum_{i<t} [m^i]c.
    mpz_class mt = 1;
    EllipticPoint trans = EllipticPoint::at_infinity();
    for (unsigned k = 0; k < t; ++k) {
        trans = add(em.curve, trans, multiply(em.curve, mt, em.translate));
        mt *= em.m;
    }
    if (!mt.fits_slong_p()) throw CompositionOverflow("m^t exceeds long range");
    return SelfMap::elliptic(em.curve, mt.get_si(), trans);
}

bool is_automorphism(const SelfMap& f) {
    if (auto* mm = std::get_if<MonomialMap>(&f.kind)) {
        mpz_class det = mat_det_exact(mm->exponents);
        return det == 1 || det == -1;
    }
    if (auto* em = std::get_if<EllipticMap>(&f.kind)) return em->m == 1 || em->m == -1;
    return false;
}

SelfMap inverse_map(const SelfMap& f) {
    if (!is_automorphism(f)) throw DomainMismatch("inverse only exists for automorphism kinds");
    if (auto* mm = std::get_if<MonomialMap>(&f.kind)) {
        size_t d = mm->exponents.size();
        mpz_class det = mat_det_exact(mm->exponents);
        // adjugate / det with det = +-1 stays integral
        IntMatrix inv(d, IntVector(d, 0));
        if (d == 1) {
            inv[0][0] = det; // a^{-1} = a for a = +-1
        } else {
            for (size_t i = 0; i < d; ++i)
                for (size_t j = 0; j < d; ++j) {
                    IntMatrix minor;
                    for (size_t r = 0; r < d; ++r) {
                        if (r == j) continue;
                        IntVector row;
                        for (size_t c = 0; c < d; ++c)
                            if (c != i) row.push_back(mm->exponents[r][c]);
                        minor.push_back(std::move(row));
                    }
                    mpz_class cof = mat_det_exact(minor);
                    if ((i + j) % 2 == 1) cof = -cof;
                    inv[i][j] = det * cof; // divide by det = multiply, det^2 = 1
                }
        }
        // x = c' * y^{A^{-1}} with c'_k = prod_j c_j^{-(A^{-1})_{kj}}
        std::vector<FactoredRational> coeffs;
        for (size_t k = 0; k < d; ++k) {
            FactoredRational c = FactoredRational::one();
            for (size_t j = 0; j < d; ++j)
                if (inv[k][j] != 0) c = c.times(mm->coeffs[j].pow(-inv[k][j]));
            coeffs.push_back(std::move(c));
        }
        return SelfMap::monomial(std::move(inv), std::move(coeffs));
    }
    const auto& em = std::get<EllipticMap>(f.kind);
    // f^{-1}(Q) = [1/m](Q - c) with m = +-1, i.e. [m]Q + [-m]c.
    return SelfMap::elliptic(em.curve, em.m, multiply(em.curve, mpz_class(-em.m), em.translate));
}

// --- semiconjugacy ----------------------------------------------------------

bool semiconjugacy_check(const Morphism& psi, const SelfMap& fX, const SelfMap& fY,
                         const std::vector<Point>& samples) {
    for (const auto& P : samples) {
        auto fp = evaluate(fX, P);
        if (!fp) return false;
        auto lhs = psi(*fp);
        auto gq = evaluate(fY, psi(P));
        if (!gq) return false;
        if (point_key(lhs) != point_key(*gq)) return false;
    }
    return true;
}

bool semiconjugacy_check(const SelfMap& psi, const SelfMap& fX, const SelfMap& fY,
                         const std::vector<Point>& samples) {
    return semiconjugacy_check(
        [&psi](const Point& P) {
            auto r = evaluate(psi, P);
            if (!r) throw DomainMismatch("psi hit indeterminacy; not a morphism on the sample");
            return *r;
        },
        fX, fY, samples);
}

// --- exact-defect detection -------------------------------------------------

bool exact_zero_defect(const SelfMap& f) {
    auto* pp = std::get_if<ProjectivePolyMap>(&f.kind);
    if (!pp) return false;
    // (x_{s(0)}^d : ... : x_{s(N)}^d) with unit coefficients and s injective:
    // primitive coordinates map to d-th powers, so h(f(P)) = d*h(P) exactly.
    std::vector<bool> used(pp->polys.size(), false);
    for (const auto& poly : pp->polys) {
        if (poly.terms.size() != 1) return false;
        const auto& t = poly.terms[0];
        if (t.coef != 1 && t.coef != -1) return false;
        size_t var = 0;
        unsigned nonzero = 0;
        for (size_t i = 0; i < t.exps.size(); ++i)
            if (t.exps[i] != 0) {
                ++nonzero;
                var = i;
            }
        if (nonzero != 1 || t.exps[var] != pp->deg) return false;
        if (used[var]) return false;
        used[var] = true;
    }
    return true;
}

} // namespace arithdyn
