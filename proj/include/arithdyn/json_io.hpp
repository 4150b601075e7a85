#pragma once

#include <json.hpp>

#include "arithdyn/degree_engine.hpp"
#include "arithdyn/map_zoo.hpp"

namespace arithdyn {

using nlohmann::json;

// Points: {"proj":["2","3"]}, {"torus":[[["2",5],["3",-2]],[["7",1]]]},
// {"product":[["2","1"],["3","1"]]}, {"elliptic":{"x":"-1","y":"1"}} or
// {"elliptic":"infinity"} (the latter two only inside an elliptic map context).
json point_to_json(const Point& P);
Point point_from_json(const json& j);

// Maps: {"kind":"monomial","A":[[2,1],[1,1]],"coeffs":["1","1"]},
// {"kind":"projective","dim":1,"polys":["x^2","y^2"]},
// {"kind":"product","factors":[{"polys":["x^2","y^2"]},...]},
// {"kind":"ruled","a":3,"d":3,"e":2},
// {"kind":"elliptic","curve":{"a":"-2","b":"0"},"m":2,"translate":"infinity"}.
json map_to_json(const SelfMap& f);
SelfMap map_from_json(const json& j);

// NS models with optional action:
// {"rank":2,"gram":[[0,1],[1,-2]],"ruled_e":2,"action":{"matrix":[[3,0],[0,3]],"deg":9}}.
NSModel ns_model_from_json(const json& j);
PullbackAction pullback_from_json(const json& j);

json ks_report_to_json(const KSReport& rep);
std::string ks_report_csv_row(const KSReport& rep);
extern const char* kCsvHeader; // map_id,point,delta,alpha,alpha_err,hhat,status,verdict

std::string format_double(double v); // fixed deterministic rendering

} // namespace arithdyn
