// SPDX-License-Identifier: Apache-2.0
#include "hypo/report.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace hypo {

namespace {

Json big(const BigInt& z) {
  if (z >= std::numeric_limits<long long>::min() && z <= std::numeric_limits<long long>::max())
    return Json(z.convert_to<long long>());
  return Json(z.str());
}

Json tau_list(const std::vector<long>& tau) {
  Json a = Json::array();
  for (long t : tau) a.push_back(t);
  return a;
}

Json doubles(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

Json coefficient(const PeriodicFunction& f) {
  Json terms = Json::array();
  const TrigSeries& s = f.series();
  for (long k = 1; k <= s.degree(); ++k) {
    // c_k e^{ikt} + c_{-k} e^{-ikt} = 2 Re c_k cos kt - 2 Im c_k sin kt
    const cplx c = s.coeff(k);
    if (c != cplx(0)) terms.push_back(Json::array({k, 2 * c.real(), -2 * c.imag()}));
  }
  Json out;
  out["const"] = s.coeff(0).real();
  if (auto q = f.exact_average()) out["const_exact"] = to_string(*q);
  out["terms"] = std::move(terms);
  return out;
}

void dump(std::string& out, const Json& j, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        out += Json(it.key()).dump();
        out += ": ";
        dump(out, it.value(), depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump(out, j[i], depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump(out, j[i], depth + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      if (std::isfinite(x))
        out += format_double(x);
      else
        out += "\"" + format_double(x) + "\"";
      return;
    }
    default: out += j.dump(); return;
  }
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  std::string s(buf, res.ptr);
  // keep floats recognizable as floats
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

std::string dump_json(const Json& j) {
  std::string out;
  dump(out, j, 0);
  out += "\n";
  return out;
}

Json to_json(const SignProfile& p) {
  Json j;
  j["class"] = to_string(p.cls);
  Json w = Json::array();
  for (const auto& s : p.witnesses) w.push_back({{"t", s.t}, {"value", s.value}});
  j["witnesses"] = std::move(w);
  return j;
}

Json to_json(const DiophantineReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["sigma"] = r.sigma;
  j["fitted_eps"] = r.fitted_eps;
  j["reported_eps"] = r.reported_eps;
  j["eps_head"] = r.eps_head;
  j["eps_tail"] = r.eps_tail;
  j["L_scanned"] = r.L_scanned;
  j["zero_gaps"] = r.zero_gaps;
  j["outside_box"] = r.outside_box;
  j["min_gap"] = r.min_gap;
  j["exact"] = r.exact;
  Json w = Json::array();
  for (const auto& x : r.witnesses) {
    Json t = Json::array();
    for (const auto& z : x.tau) t.push_back(big(z));
    w.push_back({{"tau", std::move(t)},
                 {"j", x.ell},
                 {"gap", x.gap},
                 {"log_gap", x.log_gap},
                 {"budget", x.budget},
                 {"eps", x.eps_ell}});
  }
  j["witnesses"] = std::move(w);
  return j;
}

Json to_json(const ZeroSetReport& r) {
  Json j;
  j["growth"] = to_string(r.growth);
  j["tau_max"] = r.T;
  j["j_max"] = r.J;
  j["exact"] = r.exact;
  j["count"] = r.zeros.size();
  Json z = Json::array();
  for (const auto& [tau, jj] : r.zeros) z.push_back({{"tau", tau_list(tau)}, {"j", jj}});
  j["zeros"] = std::move(z);
  if (r.certificate) {
    const auto& c = *r.certificate;
    Json cj;
    cj["family"] = c.family;
    cj["modulus"] = big(c.modulus);
    cj["first"] = big(c.first);
    cj["step"] = big(c.step);
    Json v = Json::array();
    for (auto i : c.verified_indices) v.push_back(i);
    cj["verified_indices"] = std::move(v);
    j["certificate"] = std::move(cj);
  } else {
    j["certificate"] = nullptr;
  }
  return j;
}

Json to_json(const DecayProfile& p) {
  Json j;
  j["class"] = to_string(p.cls);
  j["eps_hat"] = p.eps_hat;
  j["C_hat"] = p.C_hat;
  j["sigma"] = p.sigma_used;
  j["fit_residual"] = p.fit_residual;
  j["eps_mode"] = p.eps_mode;
  j["eps_tau"] = p.eps_tau;
  j["points_mode"] = p.points_mode;
  j["points_tau"] = p.points_tau;
  j["finite_support"] = p.finite_support;
  return j;
}

Json to_json(const WitnessVerification& v) {
  Json j;
  j["passed"] = v.passed;
  j["u_nondecay"] = v.u_nondecay;
  j["u_sup"] = v.u_sup;
  j["f_decay_eps"] = v.f_decay_eps;
  j["residual"] = v.residual;
  j["projection_error"] = v.projection_error;
  j["u_profile"] = to_json(v.u_profile);
  Json f = Json::array();
  for (const auto& p : v.f_profiles) f.push_back(to_json(p));
  j["f_profiles"] = std::move(f);
  Json fl = Json::array();
  for (const auto& s : v.failures) fl.push_back(s);
  j["failures"] = std::move(fl);
  return j;
}

Json to_json(const SingularWitness& w, bool embed_fields) {
  Json j;
  j["kind"] = to_string(w.kind);
  Json modes = Json::array();
  for (auto m : w.modes) modes.push_back(m);
  j["modes"] = std::move(modes);
  Json ts = Json::array();
  for (const auto& t : w.t_star) ts.push_back(doubles(t));
  j["t_star"] = std::move(ts);
  j["eps"] = w.eps;
  j["sigma"] = w.sigma;
  j["u_nonzero"] = w.u.nonzero_count();
  j["verification"] = to_json(w.verification);
  if (embed_fields) {
    j["u_csv"] = field_csv(w.u);
    Json f = Json::array();
    for (const auto& x : w.f) f.push_back(field_csv(x));
    j["f_csv"] = std::move(f);
  }
  return j;
}

Json to_json(const ClassifyBounds& b) {
  Json j;
  j["tau_max"] = b.tau_max;
  j["j_max"] = b.j_max;
  j["L_max"] = b.L_max;
  j["sigma_grid"] = doubles(b.sigma_grid);
  j["eps_grid"] = doubles(b.eps_grid);
  j["build_witness"] = b.build_witness;
  return j;
}

Json to_json(const Verdict& v, bool embed_fields) {
  Json j;
  j["outcome"] = to_string(v.outcome);
  j["certificate"] = to_string(v.certificate);
  if (v.certificate == CertificateKind::ConditionI) j["condition_i_equation"] = v.condition_i_index + 1;
  Json prof = Json::array();
  for (const auto& p : v.profiles) prof.push_back(to_json(p));
  j["sign_profiles"] = std::move(prof);
  Json J = Json::array();
  for (int r : v.J_set) J.push_back(r + 1);
  j["zero_b_equations"] = std::move(J);
  Json d = Json::array();
  for (const auto& c : v.diophantine) d.push_back(to_json(c.report));
  j["diophantine"] = std::move(d);
  j["zero_set"] = v.zero_set ? to_json(*v.zero_set) : Json(nullptr);
  j["witness"] = v.witness ? to_json(*v.witness, embed_fields) : Json(nullptr);
  Json notes = Json::array();
  for (const auto& s : v.notes) notes.push_back(s);
  j["notes"] = std::move(notes);
  return j;
}

Json to_json(const std::vector<ResonanceRow>& rows) {
  Json a = Json::array();
  for (const auto& r : rows) a.push_back({{"j", r.j}, {"lambda", r.lambda}, {"gaps", doubles(r.gaps)}});
  return a;
}

Json describe_spec(const SystemSpec& spec) {
  Json j;
  j["m"] = spec.m();
  j["mu"] = spec.mu();
  j["operator"] = spec.op().describe();
  Json eqs = Json::array();
  for (const auto& e : spec.equations()) eqs.push_back({{"a", coefficient(e.a)}, {"b", coefficient(e.b)}});
  j["equations"] = std::move(eqs);
  return j;
}

std::string field_csv(const CoefficientField& field) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  write_field_csv(os, field);
  return os.str();
}

std::string resonance_csv(const std::vector<ResonanceRow>& rows, int m) {
  std::string out = "j,lambda";
  for (int r = 1; r <= m; ++r) out += ",gap_" + std::to_string(r);
  out += "\n";
  for (const auto& row : rows) {
    out += std::to_string(row.j) + "," + format_double(row.lambda);
    for (double g : row.gaps) out += "," + format_double(g);
    out += "\n";
  }
  return out;
}

}  // namespace hypo
