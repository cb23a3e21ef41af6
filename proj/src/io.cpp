#include "combforge/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace cf {

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

Json params_to_json(const Params& p) {
  Json j;
  j["zeta"] = p.zeta;
  j["f"] = p.f;
  j["epsilon"] = p.epsilon;
  if (p.d) j["d"] = *p.d;
  return j;
}

Params params_from_json(const Json& j) {
  Params p;
  p.zeta = j.at("zeta").get<double>();
  p.f = j.at("f").get<double>();
  p.epsilon = j.at("epsilon").get<double>();
  if (j.contains("d")) p.d = j.at("d").get<double>();
  return p;
}

}  // namespace

Json solution_to_json(const Solution& sol) {
  Json j;
  j["params"] = params_to_json(sol.params);
  j["grid"] = Json{{"period", sol.field.grid.period}, {"n", sol.field.grid.n}};
  j["u1"] = std::vector<double>(sol.field.u1.data(), sol.field.u1.data() + sol.field.grid.n);
  j["u2"] = std::vector<double>(sol.field.u2.data(), sol.field.u2.data() + sol.field.grid.n);
  j["pulse_centers"] = sol.pulse_centers;
  j["residual_norm"] = sol.residual_norm;
  j["is_even"] = sol.is_even;
  return j;
}

Solution solution_from_json(const Json& j) {
  Solution sol;
  sol.params = params_from_json(j.at("params"));
  const Grid g(j.at("grid").at("period").get<double>(), j.at("grid").at("n").get<int>());
  const auto u1 = j.at("u1").get<std::vector<double>>();
  const auto u2 = j.at("u2").get<std::vector<double>>();
  if (static_cast<int>(u1.size()) != g.n || static_cast<int>(u2.size()) != g.n)
    throw ConfigError("solution_from_json: array length != n", "u1");
  sol.field = Field2(g);
  for (int i = 0; i < g.n; ++i) {
    sol.field.u1[i] = u1[i];
    sol.field.u2[i] = u2[i];
  }
  sol.pulse_centers = j.at("pulse_centers").get<std::vector<double>>();
  sol.residual_norm = j.at("residual_norm").get<double>();
  sol.is_even = j.at("is_even").get<bool>();
  sol.period = g.period;
  return sol;
}

std::string solution_csv(const Solution& sol) {
  std::ostringstream out;
  out << "x,u1,u2\n";
  for (int j = 0; j < sol.field.grid.n; ++j)
    out << format17(sol.field.grid.x(j)) << ',' << format17(sol.field.u1[j]) << ','
        << format17(sol.field.u2[j]) << '\n';
  return out.str();
}

std::string comb_csv(const Comb& c) {
  std::ostringstream out;
  out << "k,log_magnitude\n";
  for (std::size_t i = 0; i < c.wavenumbers.size(); ++i)
    out << format17(c.wavenumbers[i]) << ',' << format17(c.log_magnitude[i]) << '\n';
  return out.str();
}

std::string sweep_csv(const BlochSweep& sw) {
  std::ostringstream out;
  out << "xi,re_lambda,im_lambda\n";
  for (const BlochSlice& s : sw.slices)
    for (const Complex& ev : s.eigenvalues)
      out << format17(s.xi) << ',' << format17(ev.real()) << ',' << format17(ev.imag())
          << '\n';
  return out.str();
}

std::string trace_csv(const EvolutionTrace& tr) {
  std::ostringstream out;
  out << "t,raw_l2,mod_l2,gamma\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    out << format17(tr.times[i]) << ',' << format17(tr.raw_l2[i]) << ','
        << format17(tr.perturbation_l2[i]) << ',' << format17(tr.gamma[i]) << '\n';
  return out.str();
}

Json sweep_to_json(const BlochSweep& sw) {
  Json j;
  j["n_slices"] = sw.slices.size();
  Json curve = Json::array();
  for (const auto& [xi, lam] : sw.critical_curve) curve.push_back(Json::array({xi, lam}));
  j["critical_curve"] = std::move(curve);
  j["max_critical_imag"] = sw.max_critical_imag;
  const StabilityVerdict& v = sw.verdict;
  const char* kind = v.kind == StabilityKind::DiffusivelyStable ? "diffusively_stable"
                     : v.kind == StabilityKind::Unstable        ? "unstable"
                                                                : "indeterminate";
  j["verdict"] = Json{{"kind", kind},
                      {"theta_bound", v.theta_bound},
                      {"gap", v.gap},
                      {"zero_simple", v.zero_simple},
                      {"max_unstable_re", v.max_unstable_re},
                      {"note", v.note}};
  return j;
}

Json small_eigs_to_json(const SmallEigReport& rep) {
  Json j;
  j["delta0"] = rep.delta0;
  Json evs = Json::array();
  for (const Complex& ev : rep.eigenvalues)
    evs.push_back(Json::array({ev.real(), ev.imag()}));
  j["eigenvalues"] = std::move(evs);
  j["n_stable"] = rep.n_stable;
  j["n_unstable"] = rep.n_unstable;
  j["zero_is_simple"] = rep.zero_is_simple;
  return j;
}

Json curve_fit_to_json(const CurveFit& fit) {
  Json j;
  j["a"] = fit.a;
  j["b"] = fit.b;
  j["alpha"] = fit.alpha;
  j["beta"] = fit.beta;
  j["rms_relative"] = fit.rms_relative;
  return j;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path);
  out << content;
  if (!out) throw Error("write failed: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace cf
