#include "dibgeo/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace dibgeo {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Json record_to_json(const SolutionRecord& record) {
  Json j;
  j["beta"] = record.beta;
  j["s"] = record.s;
  j["n_c"] = record.n_c;
  j["entropy_T"] = record.entropy_T;
  j["info_TX"] = record.info_TX;
  j["cost_L"] = record.cost_L;
  j["assignment_digest"] = record.assignment_digest;
  j["converged"] = record.converged;
  j["iterations"] = record.iterations;
  j["assignment"] = record.assignment;
  return j;
}

Json curve_to_json(const InformationCurve& curve) {
  Json entries = Json::array();
  for (const auto& e : curve.entries) {
    Json j;
    j["entropy_T"] = e.record.entropy_T;
    j["info_TX"] = e.record.info_TX;
    j["n_c"] = e.record.n_c;
    j["beta"] = e.record.beta;
    j["converged"] = e.record.converged;
    j["assignment_digest"] = e.record.assignment_digest;
    j["on_frontier"] = e.on_frontier;
    j["on_hull"] = e.on_hull;
    if (e.has_kink) {
      j["beta_min"] = std::isfinite(e.beta_min) ? Json(e.beta_min)
                                                : Json("inf");
      j["beta_max"] = std::isfinite(e.beta_max) ? Json(e.beta_max)
                                                : Json("inf");
      j["theta"] = e.theta;
    } else {
      j["beta_min"] = nullptr;
      j["beta_max"] = nullptr;
      j["theta"] = nullptr;
    }
    j["beta_emp_min"] = e.beta_emp_min;
    j["beta_emp_max"] = e.beta_emp_max;
    entries.push_back(std::move(j));
  }
  Json out;
  out["entries"] = std::move(entries);
  out["trimmed_count"] = curve.trimmed_count;
  return out;
}

std::string curve_to_csv(const InformationCurve& curve) {
  std::ostringstream os;
  os << "entropy_T,info_TX,n_c,beta_min,beta_max,theta\n";
  for (const auto& e : curve.entries) {
    os << num(e.record.entropy_T) << ',' << num(e.record.info_TX) << ','
       << e.record.n_c << ',';
    if (e.has_kink)
      os << num(e.beta_min) << ',' << num(e.beta_max) << ',' << num(e.theta);
    else
      os << ",,";
    os << "\n";
  }
  return os.str();
}

std::string boundaries_to_csv(
    const std::vector<std::pair<std::string, std::vector<Polyline>>>& curves) {
  std::ostringstream os;
  os << "curve,x1,x2\n";
  for (const auto& [name, polylines] : curves)
    for (size_t k = 0; k < polylines.size(); ++k)
      for (const auto& v : polylines[k])
        os << name << '.' << k << ',' << num(v.x()) << ',' << num(v.y())
           << "\n";
  return os.str();
}

}  // namespace dibgeo
