#include "arithdyn/degree_engine.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace arithdyn {

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

DegreeEstimate alpha_root(const OrbitRecord& orbit) {
    size_t sz = orbit.heights.size();
    if (sz < 3) throw TooShort("alpha_root needs at least 3 recorded heights");
    size_t n = sz - 1;
    auto est = [&](size_t i) { return std::exp(std::log(orbit.heights[i].plus_value) / static_cast<double>(i)); };
    size_t w = (n + 2) / 3;
    double lo = est(n), hi = lo;
    for (size_t i = n - w + 1; i <= n; ++i) {
        double e = est(i);
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    DegreeEstimate r;
    r.method = EstimateMethod::RootLimit;
    r.value = std::max(est(n), 1.0);
    r.error_bar = hi - lo;
    r.n_used = static_cast<int>(n);
    return r;
}

DegreeEstimate alpha_ratio(const OrbitRecord& orbit) {
    size_t sz = orbit.heights.size();
    if (sz < 4) throw TooShort("alpha_ratio needs at least 4 recorded heights");
    size_t n = sz - 1;
    size_t w = (n + 2) / 3;
    for (size_t i = n - w; i <= n; ++i)
        if (orbit.heights[i].value < 1.0)
            throw NonGrowing("tail heights must be >= 1 for the ratio estimator");
    std::vector<double> ratios;
    for (size_t i = n - w; i < n; ++i)
        ratios.push_back(orbit.heights[i + 1].value / orbit.heights[i].value);
    DegreeEstimate r;
    r.method = EstimateMethod::RatioTail;
    r.value = std::max(median(ratios), 1.0);
    r.error_bar = *std::max_element(ratios.begin(), ratios.end()) -
                  *std::min_element(ratios.begin(), ratios.end());
    r.n_used = static_cast<int>(n);
    return r;
}

// ---------------------------------------------------------------------------
// Defect bounds

namespace {

double one_step_defect(const SelfMap& f, const Point& Q, double delta, TorusEmbedding emb) {
    auto img = evaluate(f, Q);
    if (!img) return 0.0;
    double h0 = point_height(f, Q, emb).value;
    double h1 = point_height(f, *img, emb).value;
    return std::fabs(h1 - delta * h0);
}

} // namespace

DefectBound defect_bound(const SelfMap& f, double delta, const std::optional<Point>& anchor,
                         unsigned long seed, TorusEmbedding embedding) {
    if (exact_zero_defect(f)) return {0.0, false};

    std::mt19937_64 rng(seed);
    double worst = 0.0;
    auto probe = [&](const Point& Q) { worst = std::max(worst, one_step_defect(f, Q, delta, embedding)); };

    if (auto* pp = std::get_if<ProjectivePolyMap>(&f.kind)) {
        std::uniform_int_distribution<long> dist(-999, 999);
        for (int k = 0; k < 100; ++k) {
            std::vector<mpz_class> coords(pp->dim + 1);
            bool nonzero = false;
            for (auto& c : coords) {
                c = dist(rng);
                if (c != 0) nonzero = true;
            }
            if (!nonzero) coords[0] = 1;
            probe(Point(ProjectivePoint::from_integers(std::move(coords))));
        }
    } else if (auto* mm = std::get_if<MonomialMap>(&f.kind)) {
        static const long primes[] = {2, 3, 5, 7, 11};
        std::uniform_int_distribution<int> pe(-8, 8);
        for (int k = 0; k < 100; ++k) {
            std::vector<FactoredRational> coords;
            for (size_t i = 0; i < mm->exponents.size(); ++i) {
                FactoredRational c;
                for (long p : primes) {
                    long e = pe(rng);
                    if (e != 0) c.factors.emplace_back(mpz_class(p), mpz_class(e));
                }
                coords.push_back(std::move(c));
            }
            probe(Point(TorusPoint(std::move(coords))));
        }
    } else if (auto* pm = std::get_if<ProductMap>(&f.kind)) {
        std::uniform_int_distribution<long> dist(-999, 999);
        for (int k = 0; k < 100; ++k) {
            ProductPoint Q;
            for (size_t i = 0; i < pm->factors.size(); ++i) {
                mpz_class a = dist(rng), b = dist(rng);
                if (a == 0 && b == 0) a = 1;
                Q.factors.push_back(ProjectivePoint::from_integers({a, b}));
            }
            probe(Point(std::move(Q)));
        }
    } else if (auto* em = std::get_if<EllipticMap>(&f.kind)) {
        EllipticPoint base = EllipticPoint::at_infinity();
        if (anchor)
            if (auto* e = std::get_if<EllipticPoint>(&*anchor)) base = *e;
        if (base.infinity && !em->translate.infinity) base = em->translate;
        if (base.infinity) {
            // Anchor carries no affine point (e.g. the point at infinity):
            // scan small x for any rational point to probe with.
            for (long xn = -20; xn <= 20 && base.infinity; ++xn)
                for (long xd = 1; xd <= 4 && base.infinity; ++xd) {
                    mpq_class x(xn, xd);
                    x.canonicalize();
                    mpq_class q = x * x * x + em->curve.a * x + em->curve.b;
                    if (sgn(q) < 0) continue;
                    if (mpz_perfect_square_p(q.get_num().get_mpz_t()) &&
                        mpz_perfect_square_p(q.get_den().get_mpz_t())) {
                        mpz_class yn, yd;
                        mpz_sqrt(yn.get_mpz_t(), q.get_num().get_mpz_t());
                        mpz_sqrt(yd.get_mpz_t(), q.get_den().get_mpz_t());
                        base = EllipticPoint::affine(x, mpq_class(yn) / mpq_class(yd));
                    }
                }
        }
        if (base.infinity) throw NoDefectBound("no sample point available on the elliptic curve");
        for (long k = 1; k <= 25; ++k) probe(Point(multiply(em->curve, mpz_class(k), base)));
    } else {
        throw NoDefectBound("RuledNS maps have no point-level height realization");
    }

    if (anchor && !std::holds_alternative<RuledNSMap>(f.kind)) {
        // Walk the anchor's own orbit so the bound covers the points that the
        // canonical-height truncation actually visits.
        OrbitOptions opts;
        opts.n_max = 15;
        opts.embedding = embedding;
        try {
            auto orb = iterate_orbit(f, *anchor, opts);
            for (const auto& Q : orb.points) probe(Q);
        } catch (const Error&) {
        }
    }
    return {2.0 * worst, true};
}

CanonicalHeightValue canonical_height(const SelfMap& f, double delta, const Point& P,
                                      size_t n_max, TorusEmbedding embedding) {
    if (delta <= 1.0) throw DeltaNotExpanding("canonical height needs delta > 1");
    DefectBound C = defect_bound(f, delta, P, 20240901, embedding); // throws NoDefectBound
    OrbitOptions opts;
    opts.n_max = n_max;
    opts.embedding = embedding;
    auto orbit = iterate_orbit(f, P, opts);

    if (orbit.status.kind == OrbitStatus::Preperiodic) return {0.0, 0.0, C.empirical};

    size_t n = orbit.heights.size() - 1;
    double defect = C.value;
    // For a provably zero one-step defect, float residue along the orbit is
    // rounding noise, not evidence of a defect; keep the exact zero.
    if (C.empirical)
        for (size_t i = 0; i + 1 <= n; ++i)
            defect = std::max(defect, 2.0 * std::fabs(orbit.heights[i + 1].value - delta * orbit.heights[i].value));

    double scale = std::pow(delta, static_cast<double>(n));
    CanonicalHeightValue r;
    r.value = std::max(orbit.heights[n].value / scale, 0.0);
    r.tail_bound = defect / (scale * (delta - 1.0));
    r.empirical_defect = C.empirical;
    return r;
}

// ---------------------------------------------------------------------------
// Vanishing-curve search (exact rational kernel)

namespace {

using QMatrix = std::vector<std::vector<mpq_class>>;

// Returns a nonzero kernel vector of M (as a linear map on column space), or
// empty when the columns are independent.
std::vector<mpq_class> rational_kernel_vector(QMatrix M, size_t cols) {
    size_t rows = M.size();
    std::vector<long> pivot_of_col(cols, -1);
    size_t rank = 0;
    for (size_t c = 0; c < cols && rank < rows; ++c) {
        size_t piv = rank;
        while (piv < rows && M[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(M[rank], M[piv]);
        mpq_class inv = M[rank][c];
        for (size_t j = c; j < cols; ++j) M[rank][j] /= inv;
        for (size_t r = 0; r < rows; ++r) {
            if (r == rank || M[r][c] == 0) continue;
            mpq_class m = M[r][c];
            for (size_t j = c; j < cols; ++j) M[r][j] -= m * M[rank][j];
        }
        pivot_of_col[c] = static_cast<long>(rank);
        ++rank;
    }
    long free_col = -1;
    for (size_t c = 0; c < cols; ++c)
        if (pivot_of_col[c] < 0) {
            free_col = static_cast<long>(c);
            break;
        }
    if (free_col < 0) return {};
    std::vector<mpq_class> v(cols, mpq_class(0));
    v[free_col] = 1;
    for (size_t c = 0; c < cols; ++c) {
        if (pivot_of_col[c] < 0) continue;
        v[c] = -M[pivot_of_col[c]][free_col];
    }
    return v;
}

std::vector<std::vector<unsigned>> monomials_of_degree(size_t nvars, unsigned d) {
    std::vector<std::vector<unsigned>> out;
    std::vector<unsigned> cur(nvars, 0);
    std::function<void(size_t, unsigned)> rec = [&](size_t i, unsigned rem) {
        if (i + 1 == nvars) {
            cur[i] = rem;
            out.push_back(cur);
            return;
        }
        for (unsigned e = 0; e <= rem; ++e) {
            cur[i] = e;
            rec(i + 1, rem - e);
        }
    };
    if (nvars > 0) rec(0, d);
    return out;
}

std::string render_form(const std::vector<mpq_class>& coeffs,
                        const std::vector<std::vector<unsigned>>& monomials, size_t nvars) {
    mpz_class lcm = 1;
    for (const auto& c : coeffs) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
    Polynomial p = Polynomial::zero(nvars);
    for (size_t i = 0; i < coeffs.size(); ++i) {
        mpq_class scaled = coeffs[i] * lcm;
        scaled.canonicalize();
        if (scaled == 0) continue;
        p.terms.push_back({mpz_class(scaled.get_num()), monomials[i]});
    }
    p.normalize();
    static const std::vector<std::string> names = {"x", "y", "z", "w", "v", "u"};
    std::vector<std::string> vars(names.begin(), names.begin() + std::min(nvars, names.size()));
    while (vars.size() < nvars) vars.push_back("t" + std::to_string(vars.size()));
    return p.str(vars);
}

} // namespace

DensityEvidence vanishing_curve_search(const std::vector<Point>& points, int max_degree) {
    if (points.empty()) throw InsufficientPoints("no points given");

    // Normalize everything to homogeneous coordinate vectors over Q. Product
    // points keep their factor structure (multidegree forms).
    bool product = std::holds_alternative<ProductPoint>(points[0]);

    if (product) {
        size_t k = std::get<ProductPoint>(points[0]).factors.size();
        for (int d = 1; d <= max_degree; ++d) {
            // monomials of multidegree (d, ..., d): per factor, exponent pair (e, d-e)
            size_t cols = 1;
            for (size_t i = 0; i < k; ++i) cols *= static_cast<size_t>(d) + 1;
            QMatrix M;
            for (const auto& P : points) {
                const auto& pp = std::get<ProductPoint>(P);
                if (pp.factors.size() != k) throw DimensionMismatch("mixed product lengths");
                std::vector<mpq_class> row;
                std::vector<size_t> idx(k, 0);
                for (size_t flat = 0; flat < cols; ++flat) {
                    size_t rem = flat;
                    mpq_class val = 1;
                    for (size_t i = 0; i < k; ++i) {
                        size_t e = rem % (static_cast<size_t>(d) + 1);
                        rem /= static_cast<size_t>(d) + 1;
                        const auto& c = pp.factors[i].coords();
                        for (size_t t = 0; t < e; ++t) val *= mpq_class(c[0]);
                        for (size_t t = e; t < static_cast<size_t>(d); ++t) val *= mpq_class(c[1]);
                    }
                    row.push_back(val);
                }
                M.push_back(std::move(row));
            }
            auto ker = rational_kernel_vector(M, cols);
            if (!ker.empty()) {
                std::ostringstream os;
                os << "bidegree-(" << d << ") form on (P^1)^" << k;
                return ContainedInCurve{os.str()};
            }
            if (d == max_degree && points.size() < cols + 1)
                throw InsufficientPoints("need more points for a conclusive negative");
        }
        return NoVanishingCurveUpToDegree{max_degree};
    }

    std::vector<ProjectivePoint> proj;
    for (const auto& P : points) {
        if (auto* p = std::get_if<ProjectivePoint>(&P)) {
            proj.push_back(*p);
        } else if (auto* t = std::get_if<TorusPoint>(&P)) {
            std::vector<mpq_class> coords{mpq_class(1)};
            for (const auto& c : t->coords()) coords.push_back(c.to_rational());
            proj.push_back(ProjectivePoint::from_rationals(coords));
        } else {
            throw DomainMismatch("vanishing-curve search supports projective, torus and product points");
        }
    }
    size_t nvars = proj[0].coords().size();
    for (const auto& p : proj)
        if (p.coords().size() != nvars) throw DimensionMismatch("mixed ambient dimensions");

    for (int d = 1; d <= max_degree; ++d) {
        auto monomials = monomials_of_degree(nvars, static_cast<unsigned>(d));
        QMatrix M;
        for (const auto& p : proj) {
            std::vector<mpq_class> row;
            for (const auto& mono : monomials) {
                mpz_class val = 1, pw;
                for (size_t i = 0; i < nvars; ++i) {
                    if (mono[i] == 0) continue;
                    mpz_pow_ui(pw.get_mpz_t(), p.coords()[i].get_mpz_t(), mono[i]);
                    val *= pw;
                }
                row.push_back(mpq_class(val));
            }
            M.push_back(std::move(row));
        }
        auto ker = rational_kernel_vector(M, monomials.size());
        if (!ker.empty()) return ContainedInCurve{render_form(ker, monomials, nvars)};
        if (d == max_degree && proj.size() < monomials.size() + 1)
            throw InsufficientPoints("need more points for a conclusive negative");
    }
    return NoVanishingCurveUpToDegree{max_degree};
}

// ---------------------------------------------------------------------------
// Verdict assembly

KSReport ks_verdict(const SelfMap& f, const Point& P, const VerdictConfig& config) {
    KSReport rep;
    rep.map_id = f.id;
    rep.point_str = point_key(P);
    rep.delta = delta_of(f);

    OrbitOptions opts;
    opts.n_max = config.n_max;
    opts.bit_budget = config.bit_budget;
    opts.embedding = config.embedding;
    auto orbit = iterate_orbit(f, P, opts);
    rep.orbit_status = orbit.status;

    if (orbit.status.kind == OrbitStatus::Preperiodic) {
        // Finite orbit: alpha = 1, hhat = 0, conjecture's hypothesis is empty.
        rep.alpha_estimate = {EstimateMethod::RatioTail, 1.0, 0.0, static_cast<int>(orbit.heights.size() - 1)};
        rep.alpha_root_estimate = rep.alpha_estimate;
        rep.alpha_root_estimate.method = EstimateMethod::RootLimit;
        rep.canonical = CanonicalHeightValue{0.0, 0.0, false};
        rep.density_evidence = PreperiodicEvidence{};
        rep.verdict = Verdict::ConsistentWithKS;
        return rep;
    }

    rep.alpha_root_estimate = alpha_root(orbit);
    try {
        rep.alpha_estimate = alpha_ratio(orbit);
    } catch (const Error&) {
        rep.alpha_estimate = rep.alpha_root_estimate;
    }

    if (rep.delta > 1.0) {
        try {
            rep.canonical = canonical_height(f, rep.delta, P, config.n_max, config.embedding);
        } catch (const Error&) {
        }
    }

    // Density evidence from the small-coordinate prefix of the orbit. The
    // curve search expands factored torus coordinates into plain integers,
    // so the cap must measure the expanded size, not the exponent bits.
    auto expanded_bits = [](const Point& q) -> double {
        if (const auto* tp = std::get_if<TorusPoint>(&q)) {
            double b = 0.0;
            for (const auto& c : tp->coords())
                b = std::max(b, (c.log_numerator() + c.log_denominator()) / std::log(2.0));
            return b;
        }
        return static_cast<double>(point_bit_size(q));
    };
    std::vector<Point> small;
    for (const auto& q : orbit.points)
        if (expanded_bits(q) <= static_cast<double>(config.density_points_bit_cap))
            small.push_back(q);
    for (int d = config.density_max_degree; d >= 1; --d) {
        try {
            rep.density_evidence = vanishing_curve_search(small, d);
            break;
        } catch (const Error&) {
            if (d == 1) rep.density_evidence = NoVanishingCurveUpToDegree{0}; // not searchable
        }
    }

    bool close = std::fabs(rep.alpha_estimate.value - rep.delta) <= config.tolerance;
    bool hhat_positive = rep.canonical && rep.canonical->value - rep.canonical->tail_bound > 0.0;
    if (close || hhat_positive) {
        rep.verdict = Verdict::ConsistentWithKS;
    } else if (rep.alpha_estimate.value + rep.alpha_estimate.error_bar < rep.delta - config.tolerance &&
               std::holds_alternative<NoVanishingCurveUpToDegree>(rep.density_evidence) &&
               std::get<NoVanishingCurveUpToDegree>(rep.density_evidence).degree >= 1) {
        rep.verdict = Verdict::InconsistentBeyondTolerance;
    } else {
        rep.verdict = Verdict::Inconclusive;
    }
    return rep;
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::ConsistentWithKS: return "ConsistentWithKS";
        case Verdict::InconsistentBeyondTolerance: return "InconsistentBeyondTolerance";
        default: return "Inconclusive";
    }
}

std::string status_name(const OrbitStatus& s) {
    switch (s.kind) {
        case OrbitStatus::Completed: return "Completed";
        case OrbitStatus::HitIndeterminacy: return "HitIndeterminacy(" + std::to_string(s.step) + ")";
        case OrbitStatus::Preperiodic:
            return "Preperiodic(" + std::to_string(s.tail_start) + "," + std::to_string(s.period) + ")";
        default: return "BitBudgetExceeded(" + std::to_string(s.step) + ")";
    }
}

} // namespace arithdyn
