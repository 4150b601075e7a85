#include "arithdyn/experiments.hpp"

#include <fstream>
#include <set>

namespace arithdyn {

CurveSampler curve_sampler_from_json(const json& j, const SelfMap& f) {
    std::string type = j.value("type", "");
    if (type == "projective-line" || type == "projective") {
        std::vector<Polynomial> polys;
        for (const auto& s : j.at("polys")) polys.push_back(parse_polynomial(s.get<std::string>(), {"t"}));
        return [polys](long t) {
            std::vector<mpq_class> coords;
            for (const auto& p : polys) coords.push_back(p.eval(std::vector<mpq_class>{mpq_class(t)}));
            return Point(ProjectivePoint::from_rationals(coords));
        };
    }
    if (type == "torus") {
        std::vector<Polynomial> polys;
        for (const auto& s : j.at("coords")) polys.push_back(parse_polynomial(s.get<std::string>(), {"t"}));
        return [polys](long t) {
            std::vector<mpq_class> coords;
            for (const auto& p : polys) coords.push_back(p.eval(std::vector<mpq_class>{mpq_class(t)}));
            return Point(TorusPoint::from_rationals(coords));
        };
    }
    if (type == "elliptic-multiples") {
        const auto* em = std::get_if<EllipticMap>(&f.kind);
        if (!em) throw ConfigError("elliptic-multiples sampler requires an elliptic map");
        EllipticCurve E = em->curve;
        EllipticPoint base = EllipticPoint::affine(parse_mpq(j.at("base").at("x").get<std::string>()),
                                                   parse_mpq(j.at("base").at("y").get<std::string>()));
        if (!on_curve(E, base)) throw ConfigError("sampler base point is not on the curve");
        return [E, base](long t) { return Point(multiply(E, mpz_class(t), base)); };
    }
    throw ConfigError("unknown curve sampler type \"" + type + "\"");
}

std::vector<QualifiedPoint> find_full_degree_points(const SelfMap& f, const CurveSampler& curve,
                                                    long n_samples, double epsilon, size_t n_iter,
                                                    TorusEmbedding embedding) {
    double delta = delta_of(f);
    if (delta <= 1.0) throw DeltaNotExpanding("find_full_degree_points needs delta > 1");
    std::vector<QualifiedPoint> out;
    for (long t = 1; t <= n_samples; ++t) {
        Point P = curve(t);
        CanonicalHeightValue h;
        try {
            h = canonical_height(f, delta, P, n_iter, embedding);
        } catch (const Error&) {
            continue; // no certificate for this sample; treat as excluded
        }
        if (h.value - h.tail_bound > epsilon) out.push_back({std::move(P), h, t});
    }
    if (out.empty())
        throw NoQualifyingPoints("no sample cleared the threshold; enlarge the budget");
    return out;
}

DisjointOrbitSet build_disjoint_orbits(const SelfMap& f, size_t target_size, size_t segment_length,
                                       const CurveSampler& curve, double epsilon, long candidate_budget,
                                       TorusEmbedding embedding) {
    if (!is_automorphism(f)) throw DomainMismatch("disjoint-orbit construction needs an automorphism");
    double delta = delta_of(f);
    if (delta <= 1.0) throw DeltaNotExpanding("disjoint-orbit construction needs delta > 1");
    SelfMap finv = inverse_map(f);

    DisjointOrbitSet result;
    result.segment_length = segment_length;
    std::set<std::string> occupied;

    OrbitOptions opts;
    opts.n_max = segment_length;
    opts.embedding = embedding;

    for (long t = 1; t <= candidate_budget && result.members.size() < target_size; ++t) {
        Point P = curve(t);
        CanonicalHeightValue h;
        try {
            h = canonical_height(f, delta, P, 20, embedding);
        } catch (const Error&) {
            continue;
        }
        if (h.value - h.tail_bound <= epsilon) continue;

        auto fwd = iterate_orbit(f, P, opts);
        auto bwd = iterate_orbit(finv, P, opts);
        std::vector<std::string> keys;
        for (const auto& q : fwd.points) keys.push_back(point_key(q));
        for (size_t i = 1; i < bwd.points.size(); ++i) keys.push_back(point_key(bwd.points[i]));

        bool clash = false;
        for (const auto& k : keys)
            if (occupied.count(k)) { clash = true; break; }
        if (clash) continue;

        for (const auto& k : keys) occupied.insert(k);
        result.members.push_back({std::move(P), h, std::move(keys)});
    }
    if (result.members.size() < target_size)
        throw BudgetExhausted("candidate budget ran out before reaching target size");
    return result;
}

// ---------------------------------------------------------------------------

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    ExperimentConfig c;
    if (!j.contains("experiment")) throw ConfigError("config needs field \"experiment\"");
    c.experiment = j["experiment"].get<std::string>();
    if (j.contains("maps"))
        for (const auto& mj : j["maps"]) c.maps.push_back(map_from_json(mj));
    if (j.contains("map")) c.maps.push_back(map_from_json(j["map"]));
    if (j.contains("points"))
        for (const auto& pj : j["points"]) c.points.push_back(point_from_json(pj));
    if (j.contains("curve")) c.curve = j["curve"];
    if (j.contains("ns_model")) c.ns_model = j["ns_model"];
    c.n_max = j.value("n_max", 20u);
    c.bit_budget = j.value("bit_budget", 1u << 20);
    c.tolerance = j.value("tolerance", 0.05);
    c.epsilon = j.value("epsilon", 0.1);
    c.n_samples = j.value("n_samples", 20L);
    c.target_size = j.value("target_size", 5u);
    c.segment_length = j.value("segment_length", 50u);
    c.seed = j.value("seed", 1ul);
    c.out_path = j.value("out", "");
    return c;
}

namespace {

ExperimentResult run_verify_ks(const ExperimentConfig& c) {
    ExperimentResult res;
    VerdictConfig vc;
    vc.n_max = c.n_max;
    vc.bit_budget = c.bit_budget;
    vc.tolerance = c.tolerance;
    std::string csv = std::string(kCsvHeader) + "\n";
    json rows = json::array();
    for (const auto& f : c.maps)
        for (const auto& P : c.points) {
            // Cells are independent; skip (map, point) pairs with mismatched domains.
            KSReport rep;
            try {
                rep = ks_verdict(f, P, vc);
            } catch (const DomainMismatch&) {
                continue;
            }
            rows.push_back(ks_report_to_json(rep));
            csv += ks_report_csv_row(rep) + "\n";
            if (rep.verdict == Verdict::InconsistentBeyondTolerance) res.exit_code = 1;
        }
    res.report = {{"experiment", "verify-ks"}, {"seed", c.seed}, {"rows", rows}};
    res.csv = csv;
    return res;
}

ExperimentResult run_find_points(const ExperimentConfig& c) {
    if (c.maps.empty() || !c.curve) throw ConfigError("find-points needs \"map\" and \"curve\"");
    const SelfMap& f = c.maps[0];
    auto sampler = curve_sampler_from_json(*c.curve, f);
    auto pts = find_full_degree_points(f, sampler, c.n_samples, c.epsilon, c.n_max);
    ExperimentResult res;
    json rows = json::array();
    std::string csv = "t,point,hhat,tail_bound\n";
    for (const auto& q : pts) {
        rows.push_back({{"t", q.t},
                        {"point", point_key(q.point)},
                        {"hhat", format_double(q.hhat.value)},
                        {"tail_bound", format_double(q.hhat.tail_bound)}});
        csv += std::to_string(q.t) + "," + point_key(q.point) + "," + format_double(q.hhat.value) +
               "," + format_double(q.hhat.tail_bound) + "\n";
    }
    res.report = {{"experiment", "find-points"}, {"qualified", rows}, {"n_samples", c.n_samples}};
    res.csv = csv;
    return res;
}

ExperimentResult run_disjoint_orbits(const ExperimentConfig& c) {
    if (c.maps.empty() || !c.curve) throw ConfigError("disjoint-orbits needs \"map\" and \"curve\"");
    const SelfMap& f = c.maps[0];
    auto sampler = curve_sampler_from_json(*c.curve, f);
    auto set = build_disjoint_orbits(f, c.target_size, c.segment_length, sampler, c.epsilon,
                                     std::max(c.n_samples, 200L));
    ExperimentResult res;
    json rows = json::array();
    std::string csv = "point,hhat,tail_bound,segment_size\n";
    for (const auto& m : set.members) {
        rows.push_back({{"point", point_key(m.point)},
                        {"hhat", format_double(m.hhat.value)},
                        {"tail_bound", format_double(m.hhat.tail_bound)},
                        {"segment_size", m.segment_keys.size()}});
        csv += point_key(m.point) + "," + format_double(m.hhat.value) + "," +
               format_double(m.hhat.tail_bound) + "," + std::to_string(m.segment_keys.size()) + "\n";
    }
    res.report = {{"experiment", "disjoint-orbits"},
                  {"segment_length", set.segment_length},
                  {"members", rows}};
    res.csv = csv;
    return res;
}

ExperimentResult run_ns_check(const ExperimentConfig& c) {
    if (!c.ns_model) throw ConfigError("ns-check needs field \"ns_model\"");
    NSModel model = ns_model_from_json(*c.ns_model);
    ExperimentResult res;
    json out = {{"experiment", "ns-check"}, {"rank", model.rank}};
    std::string csv = "check,result\n";
    if (c.ns_model->contains("action")) {
        PullbackAction a = pullback_from_json((*c.ns_model)["action"]);
        bool ok = check_pullback(model, a);
        out["pullback_identity"] = ok;
        csv += "pullback_identity," + std::string(ok ? "pass" : "fail") + "\n";
        auto sr = spectral_radius(a.matrix);
        out["delta"] = format_double(sr.value);
        out["delta_error_bound"] = format_double(sr.error_bound);
        csv += "delta," + format_double(sr.value) + "\n";
        if (model.ruled_e) {
            bool fp = fiber_preserving_test(a);
            out["fiber_preserving"] = fp;
            csv += "fiber_preserving," + std::string(fp ? "pass" : "fail") + "\n";
        }
        if (!ok) res.exit_code = 1;
    }
    res.report = out;
    res.csv = csv;
    return res;
}

ExperimentResult run_invariance_suite(const ExperimentConfig& c) {
    // Compactification invariance: each monomial (map, point) cell estimated
    // under both torus embeddings; the two ratio estimates must overlap.
    ExperimentResult res;
    json rows = json::array();
    std::string csv = "map_id,point,alpha_prod,alpha_proj,agree\n";
    for (const auto& f : c.maps) {
        if (!std::holds_alternative<MonomialMap>(f.kind)) continue;
        for (const auto& P : c.points) {
            if (!std::holds_alternative<TorusPoint>(P)) continue;
            OrbitOptions o1, o2;
            o1.n_max = o2.n_max = c.n_max;
            o1.embedding = TorusEmbedding::ProductOfLines;
            o2.embedding = TorusEmbedding::ProjectiveSpace;
            auto a1 = alpha_ratio(iterate_orbit(f, P, o1));
            auto a2 = alpha_ratio(iterate_orbit(f, P, o2));
            bool agree = std::fabs(a1.value - a2.value) <= a1.error_bar + a2.error_bar + c.tolerance;
            rows.push_back({{"map_id", f.id},
                            {"point", point_key(P)},
                            {"alpha_prod", format_double(a1.value)},
                            {"alpha_proj", format_double(a2.value)},
                            {"agree", agree}});
            csv += f.id + "," + point_key(P) + "," + format_double(a1.value) + "," +
                   format_double(a2.value) + "," + (agree ? "yes" : "no") + "\n";
            if (!agree) res.exit_code = 1;
        }
    }
    res.report = {{"experiment", "invariance-suite"}, {"rows", rows}};
    res.csv = csv;
    return res;
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    if (config.experiment == "verify-ks") return run_verify_ks(config);
    if (config.experiment == "find-points") return run_find_points(config);
    if (config.experiment == "disjoint-orbits") return run_disjoint_orbits(config);
    if (config.experiment == "ns-check") return run_ns_check(config);
    if (config.experiment == "invariance-suite") return run_invariance_suite(config);
    throw ConfigError("unknown experiment \"" + config.experiment + "\"");
}

ExperimentResult run_experiment_to_files(const ExperimentConfig& config) {
    auto res = run_experiment(config);
    if (!config.out_path.empty()) {
        std::ofstream js(config.out_path + ".json", std::ios::binary);
        js << res.report.dump(2) << "\n";
        std::ofstream cs(config.out_path + ".csv", std::ios::binary);
        cs << res.csv;
    }
    return res;
}

} // namespace arithdyn
