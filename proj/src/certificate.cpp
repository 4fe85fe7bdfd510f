#include "smlorenz/certificate.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sml {

namespace {

using json = nlohmann::ordered_json;

json iv(const Interval& x) { return json::array({x.lo(), x.hi()}); }

Interval as_interval(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw VerificationFailed("malformed interval entry");
  return Interval(j[0].get<double>(), j[1].get<double>());
}

json vec3(const IVec& v) { return json::array({iv(v[0]), iv(v[1]), iv(v[2])}); }

IVec as_vec3(const json& j) {
  if (!j.is_array() || j.size() != 3) throw VerificationFailed("malformed vector entry");
  return ivec(as_interval(j[0]), as_interval(j[1]), as_interval(j[2]));
}

bool same(const Interval& a, const Interval& b) { return a == b; }

}  // namespace

std::string homoclinic_to_json(const HomoclinicCertificate& c,
                               const std::vector<std::string>& tube_refs) {
  json j;
  j["schema_version"] = 1;
  j["kind"] = "homoclinic";
  j["certified"] = true;
  j["a_bracket"] = iv(c.a_bracket);
  j["h_left"] = iv(c.h_left);
  j["h_right"] = iv(c.h_right);
  j["T"] = c.T;
  j["R"] = c.R;
  j["L"] = c.L;
  j["orientation"] = c.orientation;
  j["decay_c"] = iv(c.decay_c);
  j["norm_C"] = iv(c.norm_C);
  j["norm_Cinv"] = iv(c.norm_Cinv);
  j["decay_product"] = iv(c.decay_product);
  j["decay_xi"] = iv(c.decay_xi);
  j["mu_u"] = iv(c.mu_u);
  j["mu_s"] = iv(c.mu_s);
  j["xi_u_block"] = iv(c.xi_u_block);
  j["xi_s_block"] = iv(c.xi_s_block);
  j["xi_u"] = iv(c.xi_u);
  j["xi_s"] = iv(c.xi_s);
  j["initial_enclosure"] = vec3(c.initial_enclosure);
  j["final_enclosure"] = vec3(c.final_enclosure);
  j["initial_norm"] = iv(c.initial_norm);
  j["final_norm"] = iv(c.final_norm);
  j["tube_refs"] = tube_refs;
  return j.dump(2) + "\n";
}

std::string separatrix_to_json(const SeparatrixCertificate& c) {
  json j;
  j["schema_version"] = 1;
  j["kind"] = "separatrix";
  j["certified"] = true;
  j["a_bracket"] = iv(c.a_bracket);
  j["initial_norm"] = iv(c.initial_norm);
  j["final_norm"] = iv(c.final_norm);
  j["lambda_decay"] = iv(c.lambda_decay);
  j["rho_backward"] = c.config_backward.rho;
  j["r_backward"] = c.config_backward.r;
  j["cb_backward"] = iv(c.config_backward.c_b);
  j["rho_forward"] = c.config_forward.rho;
  j["r_forward"] = c.config_forward.r;
  j["cb_forward"] = iv(c.config_forward.c_b);
  j["T_flight"] = c.config_forward.T_flight;
  j["gamma_final"] = json::array(
      {iv(c.gamma_final[0]), iv(c.gamma_final[1]), iv(c.gamma_final[2])});
  j["y_norm_final"] = iv(c.y_norm_final);
  j["b_used"] = iv(c.b_used);
  j["x_minus"] = iv(c.x_minus);
  j["x_plus"] = iv(c.x_plus);
  j["ratio_A"] = iv(c.ratio_A);
  j["gamma_tube_ref"] = c.gamma_tube_ref;
  j["eta_tube_ref"] = c.eta_tube_ref;
  return j.dump(2) + "\n";
}

HomoclinicCertificate homoclinic_from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.value("kind", "") != "homoclinic")
    throw VerificationFailed("not a homoclinic certificate");
  HomoclinicCertificate c;
  c.a_bracket = as_interval(j.at("a_bracket"));
  c.h_left = as_interval(j.at("h_left"));
  c.h_right = as_interval(j.at("h_right"));
  c.T = j.at("T").get<double>();
  c.R = j.at("R").get<double>();
  c.L = j.at("L").get<double>();
  c.orientation = j.at("orientation").get<int>();
  c.decay_c = as_interval(j.at("decay_c"));
  c.norm_C = as_interval(j.at("norm_C"));
  c.norm_Cinv = as_interval(j.at("norm_Cinv"));
  c.decay_product = as_interval(j.at("decay_product"));
  c.decay_xi = as_interval(j.at("decay_xi"));
  c.mu_u = as_interval(j.at("mu_u"));
  c.mu_s = as_interval(j.at("mu_s"));
  c.xi_u_block = as_interval(j.at("xi_u_block"));
  c.xi_s_block = as_interval(j.at("xi_s_block"));
  c.xi_u = as_interval(j.at("xi_u"));
  c.xi_s = as_interval(j.at("xi_s"));
  c.initial_enclosure = as_vec3(j.at("initial_enclosure"));
  c.final_enclosure = as_vec3(j.at("final_enclosure"));
  c.initial_norm = as_interval(j.at("initial_norm"));
  c.final_norm = as_interval(j.at("final_norm"));
  return c;
}

SeparatrixCertificate separatrix_from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.value("kind", "") != "separatrix")
    throw VerificationFailed("not a separatrix certificate");
  SeparatrixCertificate c;
  c.a_bracket = as_interval(j.at("a_bracket"));
  c.initial_norm = as_interval(j.at("initial_norm"));
  c.final_norm = as_interval(j.at("final_norm"));
  c.lambda_decay = as_interval(j.at("lambda_decay"));
  c.config_backward.rho = j.at("rho_backward").get<double>();
  c.config_backward.r = j.at("r_backward").get<double>();
  c.config_backward.c_b = as_interval(j.at("cb_backward"));
  c.config_backward.lambda_decay = c.lambda_decay;
  c.config_backward.a22 = c.a_bracket + Interval(2.0);
  c.config_backward.a33 = c.a_bracket;
  c.config_forward.rho = j.at("rho_forward").get<double>();
  c.config_forward.r = j.at("r_forward").get<double>();
  c.config_forward.c_b = as_interval(j.at("cb_forward"));
  c.config_forward.lambda_decay = c.lambda_decay;
  c.config_forward.a22 = c.a_bracket + Interval(2.0);
  c.config_forward.a33 = c.a_bracket;
  c.config_forward.T_flight = j.at("T_flight").get<double>();
  c.config_backward.T_flight = c.config_forward.T_flight;
  const json& g = j.at("gamma_final");
  for (int i = 0; i < 3; ++i) c.gamma_final[static_cast<size_t>(i)] = as_interval(g.at(static_cast<size_t>(i)));
  c.y_norm_final = as_interval(j.at("y_norm_final"));
  c.b_used = as_interval(j.at("b_used"));
  c.x_minus = as_interval(j.at("x_minus"));
  c.x_plus = as_interval(j.at("x_plus"));
  c.ratio_A = as_interval(j.at("ratio_A"));
  c.gamma_tube_ref = j.value("gamma_tube_ref", "");
  c.eta_tube_ref = j.value("eta_tube_ref", "");
  return c;
}

namespace {

void verify_homoclinic(const HomoclinicCertificate& c, std::vector<std::string>& fails) {
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) fails.push_back(what);
  };

  expect(c.a_bracket.width_up() > 0.0, "bracket has zero width");
  expect(c.R > 0.0 && c.L > 0.0 && c.T > 0.0, "R, L, T must be positive");

  if (c.orientation == +1)
    expect(c.h_left.strictly_positive() && c.h_right.strictly_negative(),
           "h sign pattern does not match orientation +1");
  else if (c.orientation == -1)
    expect(c.h_left.strictly_negative() && c.h_right.strictly_positive(),
           "h sign pattern does not match orientation -1");
  else
    fails.push_back("orientation must be +1 or -1");

  expect(c.mu_u.hi() < 0.0, "mu (unstable) not negative");
  expect(c.mu_s.hi() < 0.0, "mu (stable) not negative");
  expect(c.xi_u_block.lo() > 0.0, "xi block (unstable) not positive");
  expect(c.xi_s_block.lo() > 0.0, "xi block (stable) not positive");

  const Interval c_expected = Interval(2.0) * sqrt(Interval(1.0) + square(Interval(c.L)));
  expect(same(c.decay_c, c_expected), "decay_c does not re-derive from L");

  const Frame frame = local_frame_C();
  expect(same(c.norm_C, op_norm_upper(frame.fwd)), "norm_C does not re-derive");
  expect(same(c.norm_Cinv, op_norm_upper(frame.inv)), "norm_Cinv does not re-derive");

  const Interval product = c.decay_c * c.norm_C * c.norm_Cinv;
  expect(same(c.decay_product, product), "decay_product does not re-derive");
  expect(product.hi() < 3.5, "decay product not below 3.5");

  const Interval xi_expected = (c.xi_u.lo() <= c.xi_s.lo()) ? c.xi_u : c.xi_s;
  expect(same(c.decay_xi, xi_expected), "decay_xi does not re-derive");
  const double xi_floor = (Interval(1.0) - Interval::around(1e-4)).hi();
  expect(c.decay_xi.lo() >= xi_floor, "decay exponent below 1 - 1e-4");

  expect(same(c.initial_norm, euclid_norm_sup(c.initial_enclosure)),
         "initial_norm does not re-derive");
  expect(same(c.final_norm, euclid_norm_sup(c.final_enclosure)),
         "final_norm does not re-derive");
}

void verify_separatrix(const SeparatrixCertificate& c, std::vector<std::string>& fails) {
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) fails.push_back(what);
  };

  const Interval a1 = c.a_bracket + Interval(1.0);
  auto cb_of = [&](const Interval& norm) {
    const Interval cb = a1 * Interval(3.5) * Interval(std::max(0.0, norm.lo()), norm.hi());
    return Interval(std::max(0.0, cb.lo()), cb.hi());
  };
  expect(same(c.config_backward.c_b, cb_of(c.initial_norm)), "backward c_b does not re-derive");
  expect(same(c.config_forward.c_b, cb_of(c.final_norm)), "forward c_b does not re-derive");

  const AdmissibilityResult rb = check_backward(c.config_backward);
  expect(rb.ok, "backward admissibility: " + rb.violated);

  const Interval gamma1 = c.gamma_final[0];
  expect(same(c.y_norm_final, euclid_norm_range({c.gamma_final[1], c.gamma_final[2]})),
         "gamma transverse norm does not re-derive");
  expect(c.y_norm_final.hi() <= c.config_forward.r, "gamma transverse norm exceeds forward r");
  const AdmissibilityResult rf = check_forward(c.config_forward, gamma1);
  expect(rf.ok, "forward admissibility: " + rf.violated);

  const Interval xm = Interval(1.0) + Interval(-c.config_backward.rho, c.config_backward.rho);
  expect(same(c.x_minus, xm), "x_minus does not re-derive");

  const double mid1 = gamma1.mid();
  const double halfwidth =
      std::max(rnd::next(mid1 - gamma1.lo()), rnd::next(gamma1.hi() - mid1));
  const double b = std::max(halfwidth, c.y_norm_final.hi());
  expect(same(c.b_used, Interval(b)), "b does not re-derive");
  const Interval xp =
      Interval(mid1) + Interval(-rnd::next(b + c.config_forward.rho), rnd::next(b + c.config_forward.rho));
  expect(same(c.x_plus, xp), "x_plus does not re-derive");

  expect(same(c.ratio_A, c.x_plus / c.x_minus), "ratio does not re-derive from x_plus/x_minus");
  expect(c.ratio_A.lo() > 0.0 && c.ratio_A.hi() < 2.0, "ratio not strictly inside (0, 2)");
}

}  // namespace

std::vector<std::string> verify_certificate_text(const std::string& text) {
  std::vector<std::string> fails;
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    fails.push_back(std::string("JSON parse error: ") + e.what());
    return fails;
  }
  const std::string kind = j.value("kind", "");
  try {
    if (kind == "homoclinic") {
      verify_homoclinic(homoclinic_from_json(text), fails);
    } else if (kind == "separatrix") {
      verify_separatrix(separatrix_from_json(text), fails);
    } else {
      fails.push_back("unknown certificate kind: '" + kind + "'");
    }
  } catch (const std::exception& e) {
    fails.push_back(std::string("certificate rejected: ") + e.what());
  }
  return fails;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("atomic rename failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace sml
