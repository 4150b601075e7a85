#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "arithdyn/degree_engine.hpp"
#include "arithdyn/json_io.hpp"
#include "arithdyn/map_zoo.hpp"

namespace arithdyn {

// Deterministic point source along a rational curve, indexed by an integer
// parameter of increasing height.
using CurveSampler = std::function<Point(long t)>;

// {"type":"projective-line","polys":["1","t","t+1"]} -> (1 : t : t+1)
// {"type":"torus","coords":["t","t+1"]}              -> torus point (t, t+1)
// {"type":"elliptic-multiples","base":{"x":..,"y":..}} -> [t]B on the map's curve
CurveSampler curve_sampler_from_json(const json& j, const SelfMap& f);

struct QualifiedPoint {
    Point point;
    CanonicalHeightValue hhat;
    long t = 0;
};

// Points on the curve whose canonical height clears epsilon past its tail
// bound; the bounded-height exclusions are exactly the points that fail.
std::vector<QualifiedPoint> find_full_degree_points(const SelfMap& f, const CurveSampler& curve,
                                                    long n_samples, double epsilon,
                                                    size_t n_iter = 20,
                                                    TorusEmbedding embedding = TorusEmbedding::ProductOfLines);

struct OrbitCertificate {
    Point point;
    CanonicalHeightValue hhat;
    std::vector<std::string> segment_keys; // canonical forms, forward + backward + self
};

struct DisjointOrbitSet {
    std::vector<OrbitCertificate> members;
    size_t segment_length = 0;
};

// Greedy loop from the disjoint-orbit construction: accept a candidate iff
// its forward and backward segments avoid every accepted segment exactly and
// its canonical height clears the qualification threshold.
DisjointOrbitSet build_disjoint_orbits(const SelfMap& f, size_t target_size, size_t segment_length,
                                       const CurveSampler& curve, double epsilon = 0.05,
                                       long candidate_budget = 200,
                                       TorusEmbedding embedding = TorusEmbedding::ProductOfLines);

struct ExperimentConfig {
    std::string experiment; // verify-ks | find-points | disjoint-orbits | ns-check | invariance-suite
    std::vector<SelfMap> maps;
    std::vector<Point> points;
    std::optional<json> curve;
    size_t n_max = 20;
    size_t bit_budget = 1u << 20;
    double tolerance = 0.05;
    double epsilon = 0.1;
    long n_samples = 20;
    size_t target_size = 5;
    size_t segment_length = 50;
    unsigned long seed = 1;
    std::string out_path; // basename; .json/.csv appended
    std::optional<json> ns_model;

    static ExperimentConfig from_json(const json& j);
};

struct ExperimentResult {
    json report;
    std::string csv;
    int exit_code = 0;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

// Writes report JSON and CSV next to config.out_path (LF endings, UTF-8).
ExperimentResult run_experiment_to_files(const ExperimentConfig& config);

} // namespace arithdyn
