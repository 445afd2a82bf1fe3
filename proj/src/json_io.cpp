#include "germlab/json_io.hpp"

namespace germlab {

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx cplx_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(ErrorCode::invalid_argument, "complex number must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json germ_to_json(const Germ& g) {
  json coeffs = json::array();
  for (const auto& c : g.coeffs()) coeffs.push_back(to_json(c));
  return {{"order", g.order()}, {"coeffs", coeffs}};
}

Germ germ_from_json(const json& j) {
  if (!j.is_object() || !j.contains("coeffs") || !j["coeffs"].is_array())
    throw Error(ErrorCode::invalid_argument, "germ JSON needs a \"coeffs\" array");
  std::vector<cplx> c;
  for (const auto& e : j["coeffs"]) c.push_back(cplx_from_json(e));
  int order = static_cast<int>(c.size());
  if (j.contains("order")) {
    if (!j["order"].is_number_integer()) throw Error(ErrorCode::invalid_order, "order must be an integer");
    order = j["order"].get<int>();
  }
  if (order < 1) throw Error(ErrorCode::invalid_order, "germ order must be positive");
  if (static_cast<int>(c.size()) > order) c.resize(order);
  c.resize(order, cplx{});
  return Germ(std::move(c));
}

json to_json(const ParabolicData& d) {
  return {{"q", d.q},         {"a_next", to_json(d.a_next)}, {"v_att", to_json(d.v_att)},
          {"v_rep", to_json(d.v_rep)}, {"s_att", d.s_att},   {"s_rep", d.s_rep},
          {"ball_radius", d.ball_radius}};
}

json to_json(const KSetResult& k) {
  return {{"members", k.members}, {"k_min", k.k_min}, {"k_max", k.k_max}, {"order", k.order}, {"capped", k.capped}};
}

json to_json(const CentralizerVerdict& v) {
  json j = {{"b1", to_json(v.b1)},
            {"j", v.j},
            {"mu", to_json(v.mu)},
            {"mu_distance", v.mu_distance},
            {"mu_is_integer", v.mu_is_integer},
            {"multiplicity_ok", v.multiplicity_ok},
            {"identified_power", nullptr},
            {"power_distance", v.power_distance},
            {"order", v.order},
            {"residuals",
             {{"commutation", v.residuals.commutation},
              {"translation_att", v.residuals.translation_att},
              {"translation_rep", v.residuals.translation_rep},
              {"fatou_att", v.residuals.fatou_att},
              {"horn_rotation", v.residuals.horn_rotation}}}};
  if (v.identified_power) j["identified_power"] = *v.identified_power;
  return j;
}

json to_json(const AlphaSequence& s) {
  json stages = json::array();
  for (const auto& st : s.stages)
    stages.push_back({{"pq", st.pq.str()},
                      {"delta_est", st.delta_est},
                      {"kappa_est", st.kappa_est},
                      {"delta_ok", st.delta_ok},
                      {"kappa_ok", st.kappa_ok},
                      {"rho_ok", st.rho_ok},
                      {"increasing", st.increasing},
                      {"k_inclusion", st.k_inclusion}});
  return {{"stages", stages},           {"alpha_hat", s.alpha_hat},     {"error_bound", s.error_bound},
          {"complete", s.complete},     {"diagnostics", s.diagnostics}, {"provenance", s.provenance}};
}

json to_json(const RotationNumberResult& r) {
  json j = {{"value", r.value},   {"error_bound", r.error_bound}, {"iterations", r.iterations},
            {"method", r.method}, {"lower", r.lower},             {"upper", r.upper},
            {"rational", nullptr}};
  if (r.rational) j["rational"] = r.rational->str();
  return j;
}

json to_json(const ParabolicParameter& p) {
  return {{"a", p.a},
          {"pq", p.cycle.rotation.str()},
          {"period", p.cycle.period},
          {"angles", p.cycle.angles},
          {"multiplier", to_json(p.cycle.multiplier)},
          {"newton_converged", p.newton_converged},
          {"tolerance", p.tolerance}};
}

json to_json(const CircleSequence& s) {
  json stages = json::array();
  for (const auto& st : s.stages)
    stages.push_back({{"pq", st.pq.str()},
                      {"a", st.a},
                      {"delta_est", st.delta_est},
                      {"kappa_est", st.kappa_est},
                      {"delta_ok", st.delta_ok},
                      {"kappa_ok", st.kappa_ok},
                      {"rho_ok", st.rho_ok},
                      {"increasing", st.increasing},
                      {"k_inclusion", st.k_inclusion},
                      {"rho_certified", st.rho_certified}});
  return {{"b", s.b},
          {"stages", stages},
          {"a_hat", s.a_hat},
          {"rho_interval", {s.rho_interval_lo, s.rho_interval_hi}},
          {"min_denominator_inside", s.min_denominator_inside},
          {"complete", s.complete},
          {"diagnostics", s.diagnostics},
          {"provenance", s.provenance}};
}

json to_json(const CircleCentralizerVerdict& v) {
  json j = {{"k", v.k},
            {"b1", to_json(v.b1)},
            {"b2", to_json(v.b2)},
            {"mu", to_json(v.mu)},
            {"mu_distance", v.mu_distance},
            {"re_mu_integer", v.re_mu_integer},
            {"im_mu_zero", v.im_mu_zero},
            {"multiplicity_ok", v.multiplicity_ok},
            {"identified_power", nullptr},
            {"power_distance", v.power_distance},
            {"residuals",
             {{"commutation", v.commutation},
              {"translation_att", v.translation_att},
              {"translation_rep", v.translation_rep},
              {"horn_rotation", v.horn_rotation},
              {"critical_arg_defect", v.critical_arg_defect},
              {"tau_defect", v.tau_defect}}}};
  if (v.identified_power) j["identified_power"] = *v.identified_power;
  return j;
}

json error_json(const Error& e) { return {{"error", std::string(to_string(e.code()))}, {"message", e.what()}}; }

}  // namespace germlab
