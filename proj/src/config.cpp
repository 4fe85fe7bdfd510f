#include "smlorenz/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace sml {

HomoclinicSettings ProofConfig::homoclinic_settings() const {
  HomoclinicSettings hs;
  hs.R = R;
  hs.L = L;
  hs.T = T;
  hs.param_subdivisions = param_subdivisions;
  hs.integ.taylor_order = taylor_order;
  hs.integ.step_min = step_min;
  hs.integ.step_max = step_max;
  hs.scan.arc_subdiv = arc_subdiv;
  hs.scan.axis_subdiv = axis_subdiv;
  hs.scan.par = parallel ? Par::omp : Par::serial;
  return hs;
}

SepSettings ProofConfig::sep_settings() const {
  SepSettings ss;
  ss.rho_backward = sep_rho_backward;
  ss.r_backward = sep_r_backward;
  ss.rho_forward = sep_rho_forward;
  ss.r_forward = sep_r_forward;
  ss.T_flight = sep_t_flight;
  ss.integ.taylor_order = taylor_order;
  ss.integ.step_min = step_min;
  ss.integ.step_max = step_max;
  return ss;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("config key '" + key + "': cannot parse number '" + v + "'");
  return d;
}

int parse_int(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const long n = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("config key '" + key + "': cannot parse integer '" + v + "'");
  return static_cast<int>(n);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw ConfigError("config key '" + key + "': cannot parse boolean '" + v + "'");
}

}  // namespace

ProofConfig parse_config_text(const std::string& text) {
  ProofConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");

    if (key == "a_center") c.a_center = parse_double(key, val);
    else if (key == "a_halfwidth") c.a_halfwidth = parse_double(key, val);
    else if (key == "R") c.R = parse_double(key, val);
    else if (key == "L") c.L = parse_double(key, val);
    else if (key == "T") c.T = parse_double(key, val);
    else if (key == "taylor_order") c.taylor_order = parse_int(key, val);
    else if (key == "step_min") c.step_min = parse_double(key, val);
    else if (key == "step_max") c.step_max = parse_double(key, val);
    else if (key == "param_subdivisions") c.param_subdivisions = parse_int(key, val);
    else if (key == "arc_subdiv") c.arc_subdiv = parse_int(key, val);
    else if (key == "axis_subdiv") c.axis_subdiv = parse_int(key, val);
    else if (key == "sep_rho_backward") c.sep_rho_backward = parse_double(key, val);
    else if (key == "sep_r_backward") c.sep_r_backward = parse_double(key, val);
    else if (key == "sep_rho_forward") c.sep_rho_forward = parse_double(key, val);
    else if (key == "sep_r_forward") c.sep_r_forward = parse_double(key, val);
    else if (key == "sep_t_flight") c.sep_t_flight = parse_double(key, val);
    else if (key == "threads") c.threads = parse_int(key, val);
    else if (key == "parallel") c.parallel = parse_bool(key, val);
    else throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }

  if (!(c.a_halfwidth > 0.0)) throw ConfigError("a_halfwidth must be positive");
  if (!(c.R > 0.0 && c.L > 0.0 && c.T > 0.0)) throw ConfigError("R, L, T must be positive");
  if (c.taylor_order < 2 || c.taylor_order > 30)
    throw ConfigError("taylor_order must be in [2, 30]");
  if (!(c.step_min > 0.0 && c.step_min <= c.step_max))
    throw ConfigError("need 0 < step_min <= step_max");
  if (c.param_subdivisions < 1) throw ConfigError("param_subdivisions must be >= 1");
  if (c.arc_subdiv < 4 || c.axis_subdiv < 1) throw ConfigError("subdivision counts too small");
  if (!(c.sep_rho_backward > 0.0 && c.sep_r_backward > 0.0 && c.sep_rho_forward > 0.0 &&
        c.sep_r_forward > 0.0 && c.sep_t_flight > 0.0))
    throw ConfigError("separatrix rho/r/T settings must be positive");
  return c;
}

ProofConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string default_config_text() {
  const ProofConfig c;
  std::ostringstream out;
  char buf[64];
  auto put = [&](const char* key, double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << key << " = " << buf << "\n";
  };
  out << "# homoclinic butterfly proof configuration\n";
  put("a_center", c.a_center);
  put("a_halfwidth", c.a_halfwidth);
  put("R", c.R);
  put("L", c.L);
  put("T", c.T);
  out << "taylor_order = " << c.taylor_order << "\n";
  put("step_min", c.step_min);
  put("step_max", c.step_max);
  out << "param_subdivisions = " << c.param_subdivisions << "\n";
  out << "arc_subdiv = " << c.arc_subdiv << "\n";
  out << "axis_subdiv = " << c.axis_subdiv << "\n";
  put("sep_rho_backward", c.sep_rho_backward);
  put("sep_r_backward", c.sep_r_backward);
  put("sep_rho_forward", c.sep_rho_forward);
  put("sep_r_forward", c.sep_r_forward);
  put("sep_t_flight", c.sep_t_flight);
  out << "threads = " << c.threads << "\n";
  out << "parallel = " << (c.parallel ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace sml
