#include "arithdyn/json_io.hpp"

#include <cstdio>

namespace arithdyn {

const char* kCsvHeader = "map_id,point,delta,alpha,alpha_err,hhat,status,verdict";

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {

std::string field_str(const json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("missing field \"") + key + "\"");
    if (j[key].is_number_integer()) return std::to_string(j[key].get<long long>());
    if (!j[key].is_string()) throw ConfigError(std::string("field \"") + key + "\" must be a string");
    return j[key].get<std::string>();
}

} // namespace

json point_to_json(const Point& P) {
    json j;
    if (auto* p = std::get_if<ProjectivePoint>(&P)) {
        json arr = json::array();
        for (const auto& c : p->coords()) arr.push_back(c.get_str());
        j["proj"] = arr;
    } else if (auto* t = std::get_if<TorusPoint>(&P)) {
        json arr = json::array();
        for (const auto& c : t->coords()) {
            json coord = json::array();
            if (c.sign < 0) coord.push_back(json::array({"-1", 1}));
            for (const auto& [pr, e] : c.factors) {
                if (!e.fits_slong_p()) {
                    coord.push_back(json::array({pr.get_str(), e.get_str()}));
                } else {
                    coord.push_back(json::array({pr.get_str(), e.get_si()}));
                }
            }
            arr.push_back(coord);
        }
        j["torus"] = arr;
    } else if (auto* pp = std::get_if<ProductPoint>(&P)) {
        json arr = json::array();
        for (const auto& f : pp->factors) {
            json fac = json::array();
            for (const auto& c : f.coords()) fac.push_back(c.get_str());
            arr.push_back(fac);
        }
        j["product"] = arr;
    } else {
        const auto& e = std::get<EllipticPoint>(P);
        if (e.infinity) j["elliptic"] = "infinity";
        else j["elliptic"] = {{"x", e.x.get_str()}, {"y", e.y.get_str()}};
    }
    return j;
}

Point point_from_json(const json& j) {
    if (j.contains("proj")) {
        std::vector<mpq_class> coords;
        for (const auto& c : j["proj"]) coords.push_back(parse_mpq(c.is_string() ? c.get<std::string>() : c.dump()));
        return Point(ProjectivePoint::from_rationals(coords));
    }
    if (j.contains("torus")) {
        std::vector<FactoredRational> coords;
        for (const auto& coord : j["torus"]) {
            FactoredRational f;
            for (const auto& pe : coord) {
                if (!pe.is_array() || pe.size() != 2) throw ConfigError("torus factor must be [prime, exponent]");
                mpz_class p = parse_mpz(pe[0].is_string() ? pe[0].get<std::string>() : pe[0].dump());
                mpz_class e = parse_mpz(pe[1].is_string() ? pe[1].get<std::string>() : pe[1].dump());
                if (p == -1) {
                    f.sign = -f.sign;
                    continue;
                }
                f.factors.emplace_back(p, e);
            }
            std::sort(f.factors.begin(), f.factors.end());
            f.validate();
            coords.push_back(std::move(f));
        }
        return Point(TorusPoint(std::move(coords)));
    }
    if (j.contains("product")) {
        ProductPoint p;
        for (const auto& fac : j["product"]) {
            std::vector<mpq_class> coords;
            for (const auto& c : fac) coords.push_back(parse_mpq(c.is_string() ? c.get<std::string>() : c.dump()));
            p.factors.push_back(ProjectivePoint::from_rationals(coords));
        }
        return Point(std::move(p));
    }
    if (j.contains("elliptic")) {
        const auto& e = j["elliptic"];
        if (e.is_string() && e.get<std::string>() == "infinity") return Point(EllipticPoint::at_infinity());
        return Point(EllipticPoint::affine(parse_mpq(field_str(e, "x")), parse_mpq(field_str(e, "y"))));
    }
    throw ConfigError("point object needs one of: proj, torus, product, elliptic");
}

namespace {

const std::vector<std::string> kProjVars = {"x", "y", "z", "w"};

ProjectivePolyMap poly_map_from_json(const json& j) {
    if (!j.contains("polys") || !j["polys"].is_array())
        throw ConfigError("projective map needs a \"polys\" array");
    size_t n = j["polys"].size();
    if (n < 2 || n > kProjVars.size())
        throw ConfigError("projective map supports P^1..P^3 (2..4 polynomials)");
    std::vector<std::string> vars(kProjVars.begin(), kProjVars.begin() + n);
    std::vector<Polynomial> polys;
    for (const auto& s : j["polys"]) polys.push_back(parse_polynomial(s.get<std::string>(), vars));
    bool morphism = j.value("asserted_morphism", true);
    SelfMap f = SelfMap::projective(n - 1, std::move(polys), morphism);
    return std::get<ProjectivePolyMap>(f.kind);
}

} // namespace

SelfMap map_from_json(const json& j) {
    std::string kind = field_str(j, "kind");
    SelfMap f;
    if (kind == "monomial") {
        if (!j.contains("A") || !j["A"].is_array()) throw ConfigError("monomial map needs field \"A\"");
        IntMatrix A;
        size_t d = j["A"].size();
        for (const auto& row : j["A"]) {
            if (!row.is_array() || row.size() != d) throw ConfigError("field \"A\" must be a square matrix");
            IntVector r;
            for (const auto& e : row) r.push_back(parse_mpz(e.is_string() ? e.get<std::string>() : e.dump()));
            A.push_back(std::move(r));
        }
        std::vector<FactoredRational> coeffs;
        if (j.contains("coeffs"))
            for (const auto& c : j["coeffs"])
                coeffs.push_back(FactoredRational::from_rational(parse_mpq(c.get<std::string>())));
        f = SelfMap::monomial(std::move(A), std::move(coeffs));
    } else if (kind == "projective") {
        auto pm = poly_map_from_json(j);
        f.kind = pm;
    } else if (kind == "product") {
        if (!j.contains("factors")) throw ConfigError("product map needs field \"factors\"");
        ProductMap pm;
        for (const auto& fac : j["factors"]) {
            auto m = poly_map_from_json(fac);
            if (m.dim != 1) throw ConfigError("product factors must act on P^1");
            pm.factors.push_back(std::move(m));
        }
        f.kind = std::move(pm);
    } else if (kind == "ruled") {
        long a = j.value("a", 1L), d = j.value("d", 1L), e = j.value("e", 0L);
        f = SelfMap::ruled(ruled_solve(a, d, e));
    } else if (kind == "elliptic") {
        if (!j.contains("curve")) throw ConfigError("elliptic map needs field \"curve\"");
        EllipticCurve E(parse_mpq(field_str(j["curve"], "a")), parse_mpq(field_str(j["curve"], "b")));
        long m = j.value("m", 1L);
        EllipticPoint trans = EllipticPoint::at_infinity();
        if (j.contains("translate") && !(j["translate"].is_string() && j["translate"] == "infinity"))
            trans = EllipticPoint::affine(parse_mpq(field_str(j["translate"], "x")),
                                          parse_mpq(field_str(j["translate"], "y")));
        f = SelfMap::elliptic(std::move(E), m, std::move(trans));
    } else {
        throw ConfigError("unknown map kind \"" + kind + "\"");
    }
    if (j.contains("delta")) f.known_delta = j["delta"].get<double>();
    f.id = j.value("id", kind);
    return f;
}

json map_to_json(const SelfMap& f) {
    json j;
    if (auto* pp = std::get_if<ProjectivePolyMap>(&f.kind)) {
        j["kind"] = "projective";
        json polys = json::array();
        std::vector<std::string> vars(kProjVars.begin(), kProjVars.begin() + pp->polys.size());
        for (const auto& p : pp->polys) polys.push_back(p.str(vars));
        j["polys"] = polys;
        j["asserted_morphism"] = pp->asserted_morphism;
    } else if (auto* mm = std::get_if<MonomialMap>(&f.kind)) {
        j["kind"] = "monomial";
        json A = json::array();
        for (const auto& row : mm->exponents) {
            json r = json::array();
            for (const auto& e : row) r.push_back(e.get_si());
            A.push_back(r);
        }
        j["A"] = A;
        json coeffs = json::array();
        for (const auto& c : mm->coeffs) {
            mpq_class q = c.to_rational();
            coeffs.push_back(q.get_str());
        }
        j["coeffs"] = coeffs;
    } else if (auto* pm = std::get_if<ProductMap>(&f.kind)) {
        j["kind"] = "product";
        json factors = json::array();
        for (const auto& fac : pm->factors) {
            json fj;
            json polys = json::array();
            std::vector<std::string> vars = {"x", "y"};
            for (const auto& p : fac.polys) polys.push_back(p.str(vars));
            fj["polys"] = polys;
            factors.push_back(fj);
        }
        j["factors"] = factors;
    } else if (auto* rn = std::get_if<RuledNSMap>(&f.kind)) {
        j["kind"] = "ruled";
        j["a"] = rn->inv.a;
        j["d"] = rn->inv.d;
        j["e"] = rn->inv.e;
    } else {
        const auto& em = std::get<EllipticMap>(f.kind);
        j["kind"] = "elliptic";
        j["curve"] = {{"a", em.curve.a.get_str()}, {"b", em.curve.b.get_str()}};
        j["m"] = em.m;
        if (em.translate.infinity) j["translate"] = "infinity";
        else j["translate"] = {{"x", em.translate.x.get_str()}, {"y", em.translate.y.get_str()}};
    }
    if (!f.id.empty()) j["id"] = f.id;
    return j;
}

NSModel ns_model_from_json(const json& j) {
    NSModel m;
    if (j.contains("ruled_e")) {
        m = NSModel::ruled(j["ruled_e"].get<long>());
        if (j.contains("rank") && j["rank"].get<int>() != 2)
            throw ConfigError("field \"rank\" must be 2 for a ruled model");
        return m;
    }
    if (!j.contains("rank") || !j.contains("gram")) throw ConfigError("NS model needs \"rank\" and \"gram\"");
    m.rank = j["rank"].get<int>();
    for (const auto& row : j["gram"]) {
        IntVector r;
        for (const auto& e : row) r.push_back(parse_mpz(e.is_string() ? e.get<std::string>() : e.dump()));
        m.gram.push_back(std::move(r));
    }
    for (int i = 0; i < m.rank; ++i) m.basis_labels.push_back("D" + std::to_string(i));
    m.validate();
    return m;
}

PullbackAction pullback_from_json(const json& j) {
    PullbackAction a;
    if (!j.contains("matrix")) throw ConfigError("action needs field \"matrix\"");
    size_t n = j["matrix"].size();
    for (const auto& row : j["matrix"]) {
        if (!row.is_array() || row.size() != n) throw ConfigError("field \"matrix\" must be square");
        IntVector r;
        for (const auto& e : row) r.push_back(parse_mpz(e.is_string() ? e.get<std::string>() : e.dump()));
        a.matrix.push_back(std::move(r));
    }
    a.deg_f = parse_mpz(j.contains("deg") ? (j["deg"].is_string() ? j["deg"].get<std::string>() : j["deg"].dump())
                                          : "1");
    return a;
}

json ks_report_to_json(const KSReport& rep) {
    json j;
    j["map_id"] = rep.map_id;
    j["point"] = rep.point_str;
    j["delta"] = format_double(rep.delta);
    j["alpha"] = format_double(rep.alpha_estimate.value);
    j["alpha_err"] = format_double(rep.alpha_estimate.error_bar);
    j["alpha_root"] = format_double(rep.alpha_root_estimate.value);
    if (rep.canonical) {
        j["hhat"] = format_double(rep.canonical->value);
        j["hhat_tail"] = format_double(rep.canonical->tail_bound);
        j["hhat_empirical"] = rep.canonical->empirical_defect;
    }
    j["status"] = status_name(rep.orbit_status);
    if (std::holds_alternative<NoVanishingCurveUpToDegree>(rep.density_evidence))
        j["density"] = "NoVanishingCurveUpToDegree(" +
                       std::to_string(std::get<NoVanishingCurveUpToDegree>(rep.density_evidence).degree) + ")";
    else if (std::holds_alternative<ContainedInCurve>(rep.density_evidence))
        j["density"] = "ContainedInCurve(" + std::get<ContainedInCurve>(rep.density_evidence).poly + ")";
    else
        j["density"] = "Preperiodic";
    j["verdict"] = verdict_name(rep.verdict);
    return j;
}

std::string ks_report_csv_row(const KSReport& rep) {
    std::string hhat = rep.canonical ? format_double(rep.canonical->value) : "";
    return rep.map_id + "," + rep.point_str + "," + format_double(rep.delta) + "," +
           format_double(rep.alpha_estimate.value) + "," + format_double(rep.alpha_estimate.error_bar) +
           "," + hhat + "," + status_name(rep.orbit_status) + "," + verdict_name(rep.verdict);
}

} // namespace arithdyn
