#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "arithdyn/map_zoo.hpp"

namespace arithdyn {

enum class EstimateMethod { RootLimit, RatioTail, CanonicalHeight };

struct DegreeEstimate {
    EstimateMethod method = EstimateMethod::RatioTail;
    double value = 1.0;     // always >= 1
    double error_bar = 0.0;
    int n_used = 0;
};

struct CanonicalHeightValue {
    double value = 0.0;
    double tail_bound = 0.0;
    bool empirical_defect = false; // defect constant measured, not proved
};

// (h^+_n)^{1/n} at the last index; error bar is the spread over the last
// third of the estimates.
DegreeEstimate alpha_root(const OrbitRecord& orbit);

// Median of h_{n+1}/h_n over the last third; fast consistent estimator when
// heights grow geometrically.
DegreeEstimate alpha_ratio(const OrbitRecord& orbit);

// One-step height defect bound |h(f(Q)) - delta*h(Q)| <= C_f. Zero and exact
// for coordinate-power maps; otherwise measured on seeded samples and doubled.
struct DefectBound {
    double value = 0.0;
    bool empirical = false;
};

DefectBound defect_bound(const SelfMap& f, double delta,
                         const std::optional<Point>& anchor = std::nullopt,
                         unsigned long seed = 20240901,
                         TorusEmbedding embedding = TorusEmbedding::ProductOfLines);

CanonicalHeightValue canonical_height(const SelfMap& f, double delta, const Point& P,
                                      size_t n_max,
                                      TorusEmbedding embedding = TorusEmbedding::ProductOfLines);

// Density evidence at finite budget.
struct NoVanishingCurveUpToDegree {
    int degree = 0;
};
struct ContainedInCurve {
    std::string poly;
};
struct PreperiodicEvidence {};

using DensityEvidence = std::variant<NoVanishingCurveUpToDegree, ContainedInCurve, PreperiodicEvidence>;

DensityEvidence vanishing_curve_search(const std::vector<Point>& points, int max_degree);

enum class Verdict { ConsistentWithKS, InconsistentBeyondTolerance, Inconclusive };

struct KSReport {
    double delta = 1.0;
    DegreeEstimate alpha_estimate;           // ratio when available, else root
    DegreeEstimate alpha_root_estimate;
    std::optional<CanonicalHeightValue> canonical;
    DensityEvidence density_evidence = NoVanishingCurveUpToDegree{0};
    Verdict verdict = Verdict::Inconclusive;
    OrbitStatus orbit_status;
    std::string map_id;
    std::string point_str;
};

struct VerdictConfig {
    size_t n_max = 20;
    size_t bit_budget = 1u << 20;
    double tolerance = 0.05;
    int density_max_degree = 3;
    size_t density_points_bit_cap = 4096; // only expand small points for the search
    TorusEmbedding embedding = TorusEmbedding::ProductOfLines;
};

KSReport ks_verdict(const SelfMap& f, const Point& P, const VerdictConfig& config = {});

std::string verdict_name(Verdict v);
std::string status_name(const OrbitStatus& s);

} // namespace arithdyn
