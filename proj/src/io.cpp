#include "inls/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace inls {

using nlohmann::json;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string field_to_csv(const RadialField& u) {
  std::string out = "r,re,im\n";
  const auto& r = u.grid->nodes();
  for (int i = 0; i < u.size(); ++i) {
    out += format_double(r[i]);
    out += ',';
    out += format_double(u.values[i].real());
    out += ',';
    out += format_double(u.values[i].imag());
    out += '\n';
  }
  return out;
}

void write_field_csv(const RadialField& u, const std::string& path) {
  write_text(path, field_to_csv(u));
}

RadialField field_from_csv(const std::string& text, int N) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("r,re,im", 0) != 0)
    throw std::invalid_argument("field CSV: missing 'r,re,im' header");
  std::vector<double> r, re, im;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double a, b, c;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &a, &b, &c) != 3)
      throw std::invalid_argument("field CSV: malformed row '" + line + "'");
    r.push_back(a);
    re.push_back(b);
    im.push_back(c);
  }
  const int M = static_cast<int>(r.size());
  if (M < 16) throw std::invalid_argument("field CSV: too few rows");
  const double h = 2.0 * r[0];
  const double R = r[M - 1] + 0.5 * h;
  for (int i = 0; i < M; ++i)
    if (std::abs(r[i] - (i + 0.5) * h) > 1e-9 * R)
      throw std::invalid_argument("field CSV: nodes are not uniform cell centers");
  GridPtr g = make_grid(N, R, M);
  Eigen::VectorXcd v(M);
  for (int i = 0; i < M; ++i) v[i] = std::complex<double>(re[i], im[i]);
  return RadialField(std::move(g), std::move(v));
}

RadialField read_field_csv(const std::string& path, int N) {
  return field_from_csv(read_text(path), N);
}

json params_to_json(const ModelParams& p) {
  json j{{"N", p.N}, {"b", p.b}, {"p", p.p}};
  if (p.omega) j["omega"] = *p.omega;
  return j;
}

ModelParams params_from_json(const json& j) {
  ModelParams p;
  p.N = j.at("N").get<int>();
  auto read_real = [&](const char* key, double& out, std::optional<Rational>& exact) {
    const json& v = j.at(key);
    if (v.is_string()) {
      exact = Rational::parse(v.get<std::string>());
      if (!exact) throw std::invalid_argument(std::string("params: bad value for ") + key);
      out = exact->value();
    } else {
      out = v.get<double>();
    }
  };
  read_real("b", p.b, p.b_exact);
  read_real("p", p.p, p.p_exact);
  if (j.contains("omega")) p.omega = j.at("omega").get<double>();
  return p;
}

json report_to_json(const FunctionalReport& r, const ModelParams& p) {
  return json{{"params", params_to_json(p)},
              {"mass", r.mass},
              {"kinetic", r.kinetic},
              {"potential", r.potential},
              {"energy", r.energy},
              {"action", r.action},
              {"nehari", r.nehari},
              {"virial", r.virial},
              {"variance", r.variance},
              {"variance_reliable", r.variance_reliable},
              {"boundary_abs", r.boundary_abs}};
}

json groundstate_to_json(const GroundState& q) {
  return json{{"params", params_to_json(q.params)},
              {"omega", q.omega},
              {"residual", q.residual},
              {"pohozaev", q.pohozaev},
              {"action_value", q.action_value},
              {"center_value", q.center_value},
              {"peak_radius", q.peak_radius},
              {"alpha_proj", q.alpha_proj},
              {"mu_proj", q.mu_proj},
              {"boundary_abs", q.profile.boundary_abs()}};
}

json classification_to_json(const Classification& c) {
  return json{{"tag", to_string(c.tag)},
              {"action", c.s_value},
              {"virial", c.p_value},
              {"threshold", c.d_value}};
}

std::string trajectory_to_csv(const Trajectory& t) {
  std::string out = "t,mass,energy,kinetic,potential,virial,variance,grad_norm,dist_to_Q\n";
  for (size_t k = 0; k < t.samples(); ++k) {
    out += format_double(t.times[k]);
    for (double v : {t.mass[k], t.energy[k], t.kinetic[k], t.potential[k], t.virial[k],
                     t.variance[k], t.grad_norm[k], t.dist_to_ref[k]}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

void write_trajectory_csv(const Trajectory& t, const std::string& path) {
  write_text(path, trajectory_to_csv(t));
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace inls
