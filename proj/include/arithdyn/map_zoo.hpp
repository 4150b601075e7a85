#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "arithdyn/elliptic.hpp"
#include "arithdyn/heights.hpp"
#include "arithdyn/ns_calculus.hpp"
#include "arithdyn/polynomial.hpp"

namespace arithdyn {

// Point of (P^1)^d.
struct ProductPoint {
    std::vector<ProjectivePoint> factors; // each in P^1

    bool operator==(const ProductPoint& o) const { return factors == o.factors; }
    std::string str() const;
};

using Point = std::variant<ProjectivePoint, TorusPoint, ProductPoint, EllipticPoint>;

std::string point_key(const Point& P); // canonical form, exact equality via string
size_t point_bit_size(const Point& P);

// --- map kinds --------------------------------------------------------------

struct ProjectivePolyMap {
    size_t dim = 1;                 // ambient P^N dimension N
    std::vector<Polynomial> polys;  // N+1 homogeneous polynomials, common degree
    unsigned deg = 1;
    bool asserted_morphism = true;  // user-asserted; delta claims attach only then
};

struct MonomialMap {
    IntMatrix exponents;                   // d x d, det != 0
    std::vector<FactoredRational> coeffs;  // one per output coordinate
};

struct ProductMap {
    std::vector<ProjectivePolyMap> factors; // each on P^1
};

struct RuledNSMap {
    RuledInvariants inv; // NS-level only, no point evaluation
};

struct EllipticMap {
    EllipticCurve curve;
    long m = 1;
    EllipticPoint translate; // P -> [m]P + translate
};

struct SelfMap {
    std::variant<ProjectivePolyMap, MonomialMap, ProductMap, RuledNSMap, EllipticMap> kind;
    std::optional<double> known_delta;
    std::string id;

    static SelfMap projective(size_t dim, std::vector<Polynomial> polys, bool asserted_morphism = true);
    static SelfMap monomial(IntMatrix A, std::vector<FactoredRational> coeffs = {});
    static SelfMap product(std::vector<SelfMap> p1_factors);
    static SelfMap ruled(const RuledInvariants& inv);
    static SelfMap elliptic(EllipticCurve E, long m, EllipticPoint translate = EllipticPoint::at_infinity());
};

SelfMap translation_map(const EllipticCurve& E, const EllipticPoint& c);

// --- orbits -----------------------------------------------------------------

struct OrbitStatus {
    enum Kind { Completed, HitIndeterminacy, Preperiodic, BitBudgetExceeded } kind = Completed;
    size_t step = 0;        // HitIndeterminacy / BitBudgetExceeded
    size_t tail_start = 0;  // Preperiodic
    size_t period = 0;      // Preperiodic
};

struct OrbitRecord {
    std::vector<Point> points;
    std::vector<HeightValue> heights;
    OrbitStatus status;
};

struct OrbitOptions {
    size_t n_max = 20;
    size_t bit_budget = 1u << 20;
    TorusEmbedding embedding = TorusEmbedding::ProductOfLines;
    size_t preperiodic_memory_cap = 100000;
};

// Indeterminate evaluation is an empty optional, not an error.
std::optional<Point> evaluate(const SelfMap& f, const Point& P);

HeightValue point_height(const SelfMap& f, const Point& P,
                         TorusEmbedding embedding = TorusEmbedding::ProductOfLines);

OrbitRecord iterate_orbit(const SelfMap& f, const Point& P, const OrbitOptions& opts = {});

// --- NS data ----------------------------------------------------------------

struct NSAction {
    NSModel model;
    PullbackAction action;
};

NSAction ns_action_of(const SelfMap& f); // throws Unavailable for uncertified kinds

// Certified dynamical degree: spectral radius of the NS action, or the
// exponent-matrix spectral radius for monomial maps, or an explicit override.
double delta_of(const SelfMap& f);

// Topological degree where defined.
mpz_class topological_degree(const SelfMap& f);

SelfMap power_map(const SelfMap& f, unsigned t, unsigned degree_cap = 4096);

// Inverse for automorphism kinds (unimodular monomial, elliptic with m = +-1).
SelfMap inverse_map(const SelfMap& f);
bool is_automorphism(const SelfMap& f);

using Morphism = std::function<Point(const Point&)>;

bool semiconjugacy_check(const Morphism& psi, const SelfMap& fX, const SelfMap& fY,
                         const std::vector<Point>& samples);
bool semiconjugacy_check(const SelfMap& psi, const SelfMap& fX, const SelfMap& fY,
                         const std::vector<Point>& samples);

// True when h(f(P)) = deg * h(P) holds exactly (coordinate-power maps), so the
// one-step height defect is zero.
bool exact_zero_defect(const SelfMap& f);

} // namespace arithdyn
