#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dodeca/verify.hpp"

using namespace dodeca;

namespace {

struct Output {
  std::string path;
  bool csv = false;
};

std::string default_path(const std::string& name) {
  const char* dir = std::getenv("DODECA_OUT");
  return dir ? std::string(dir) + "/" + name + ".json" : std::string();
}

int emit(const json& report, bool ok, const std::string& name, const Output& out) {
  json r = report;
  r["command"] = name;
  r["pass"] = ok;
  std::string path = out.path.empty() ? default_path(name) : out.path;
  std::cout << r.dump(2) << "\n";
  if (!path.empty()) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << r.dump(2) << "\n";
  }
  return ok ? 0 : 1;
}

int emit_check(const Check& c, const std::string& name, const Output& out) {
  return emit({{"criterion", c.id}, {"name", c.name}, {"detail", c.detail}}, c.pass, name, out);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
  return v;
}

void write_csv(const MorseCensus& c, const std::string& path) {
  std::ofstream f(path);
  f << "a,b,c,d,value,index,label,gradient_norm,lifts\n";
  f.precision(17);
  for (const auto& r : c.records)
    f << r.location[0] << "," << r.location[1] << "," << r.location[2] << "," << r.location[3] << "," << r.value << ","
      << r.morse_index << "," << label_name(r.label) << "," << r.gradient_norm << "," << r.orbit_size << "\n";
}

FormFunction load_rho(const std::string& spec) {
  const auto& V = splitting_context().V;
  if (spec == "realized") return V.combine(psi_realization().rho.rhoV);
  std::ifstream f(spec);
  if (!f) throw std::runtime_error("cannot read " + spec);
  json j = json::parse(f);
  auto c = j.at("rho_V").get<std::vector<double>>();
  if (static_cast<int>(c.size()) != V.size()) throw std::runtime_error("rho_V must have one entry per basis function");
  return V.combine(Eigen::Map<Eigen::VectorXd>(c.data(), c.size()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral and Morse-theoretic experiments on the Poincaré dodecahedral space"};
  app.require_subcommand(1);
  Output out;
  int threads = 0;
  unsigned seed = 0;
  app.add_option("--json", out.path, "report path (default $DODECA_OUT/<command>.json when set)");
  app.add_option("--threads", threads, "worker cap for critical-point scans (0 = hardware)")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", seed, "random seed");

  auto* verify = app.add_subcommand("verify", "exact identities");
  verify->require_subcommand(1);
  auto* appendix = verify->add_subcommand("appendix", "four exact coefficient values");

  auto* group = app.add_subcommand("group", "binary icosahedral group");
  group->require_subcommand(1);
  auto* group_info = group->add_subcommand("info", "order, element orders, stabilizers, orbits");

  auto* crit = app.add_subcommand("crit", "critical-point censuses");
  crit->require_subcommand(1);
  auto* scan = crit->add_subcommand("scan", "census on M or of the sextic on S2");
  std::string function = "psi", params, csv_path;
  int starts = 1 << 14;
  scan->add_option("--function", function, "seed | fab | psi | sextic")
      ->check(CLI::IsMember({"seed", "fab", "psi", "sextic"}));
  scan->add_option("--params", params, "comma-separated parameters: a,b for fab; e2,e3,e5 for psi");
  scan->add_option("--starts", starts, "Newton starts")->check(CLI::PositiveNumber);
  scan->add_option("--csv", csv_path, "also write the records as CSV");

  auto* split = app.add_subcommand("split", "first-order splitting algebra");
  split->require_subcommand(1);
  auto* seed_op = split->add_subcommand("seed-operator", "A0, K0 and the isotropy line");
  auto* subm = split->add_subcommand("submersion-rank", "rank of the eigenline map at A0");
  auto* realize = split->add_subcommand("realize", "realize a target line by a conformal factor");
  std::string target = "psi";
  double split_eps = 1e-2;
  realize->add_option("--target", target, "psi | seed")->check(CLI::IsMember({"psi", "seed"}));
  realize->add_option("--eps", split_eps, "scale of the three Ψ parameters")->check(CLI::PositiveNumber);

  auto* gal = app.add_subcommand("galerkin", "conformally perturbed spectrum");
  int degree_max = 24;
  std::string rho_spec = "realized", eps_list = "1e-2,3e-3,1e-3";
  gal->add_option("--degree-max", degree_max, "degree cutoff N")->check(CLI::Range(12, 40));
  gal->add_option("--rho", rho_spec, "realized | path to JSON with rho_V");
  gal->add_option("--eps-list", eps_list, "comma-separated ε values");

  auto* heat = app.add_subcommand("heat", "heat flow in the truncated basis");
  double heat_eps = 1e-2;
  std::string t_list, init = "random";
  heat->add_option("--eps", heat_eps, "ε")->check(CLI::Range(1e-6, 0.05));
  heat->add_option("--t-list", t_list, "comma-separated times (default: late-time window from the spectrum)");
  heat->add_option("--init", init, "random | phi1 | perp")->check(CLI::IsMember({"random", "phi1", "perp"}));

  auto* all = app.add_subcommand("all", "run every acceptance check");

  CLI11_PARSE(app, argc, argv);

  MCensusOptions opt;
  opt.threads = threads;

  try {
    if (appendix->parsed()) return emit_check(check_exact_identities(), "verify-appendix", out);
    if (group_info->parsed()) return emit_check(check_group(), "group-info", out);

    if (scan->parsed()) {
      auto p = params.empty() ? std::vector<double>{} : parse_list(params);
      opt.starts = starts;
      json r;
      MorseCensus c;
      bool ok = true;
      if (function == "sextic") {
        S2CensusOptions o;
        o.symmetry = &sextic_rotation_group();
        c = s2_critical_census(to_double_poly(invariant_sextic()), o);
        r["orbit_sizes"] = orbit_sizes(c);
        ok = c.complete;
      } else if (function == "seed") {
        c = m_critical_census(seed_function(), "seed", opt);
      } else if (function == "fab") {
        if (p.empty()) p = {1e-2, 1e-2};
        if (p.size() != 2) throw std::invalid_argument("fab takes two parameters");
        c = m_critical_census(fab_function(p[0], p[1]), "fab", opt);
        r["params"] = p;
      } else {
        if (p.empty()) p = {1e-2, 1e-2, 1e-2};
        if (p.size() != 3) throw std::invalid_argument("psi takes three parameters");
        c = m_critical_census(psi_function(p[0], p[1], p[2]), "psi", opt);
        r["params"] = p;
      }
      if (!csv_path.empty()) write_csv(c, csv_path);
      r["census"] = to_json(c);
      return emit(r, ok && c.complete, "crit-scan", out);
    }

    if (seed_op->parsed()) {
      auto A0 = seed_operator();
      auto s = spectrum(A0.A);
      int fixed = 0;
      Eigen::VectorXd F0 = isotropy_line(&fixed);
      Eigen::VectorXd K = reproducing_kernel();
      auto fib = spectrum(fiber_seed_operator().A);
      json r = {{"product_space_dimension", splitting_context().dP},
                {"gram_condition", A0.gram_condition},
                {"spectrum", to_json(s.values)},
                {"gap", s.gap()},
                {"lowest_cos_isotropy_line", std::abs(s.lowest().dot(F0))},
                {"K0_norm2", K.squaredNorm()},
                {"K0_cos_isotropy_line", std::abs(K.normalized().dot(F0))},
                {"isotropy_fixed_dimension", fixed},
                {"isotropy_cos_hopf_seed", std::abs(F0.dot(hopf_seed_line()))},
                {"fiber_seed_spectrum", to_json(fib.values)},
                {"fiber_seed_lowest_cos_hopf_seed", std::abs(fib.lowest().dot(hopf_seed_line()))}};
      return emit(r, s.gap() > 0 && fixed == 1, "split-seed-operator", out);
    }
    if (subm->parsed()) {
      auto A0 = seed_operator().A;
      auto rank = submersion_rank(A0, realizable_basis());
      Eigen::VectorXd sv = multiplication_singular_values(spectrum(A0).lowest());
      json r = {{"rank", rank.rank},
                {"singular_values", to_json(rank.singular_values)},
                {"multiplication_singular_values", to_json(sv)},
                {"kernel_multiplication_margin", kernel_multiplication_margin(50, seed)}};
      return emit(r, rank.rank == 12, "split-submersion-rank", out);
    }
    if (realize->parsed()) {
      json r;
      bool ok;
      if (target == "seed") {
        auto A0 = seed_operator().A;
        auto rr = realize_conformal_factor(A0);
        double rt = (splitting_operator_of_rho(splitting_context().V.combine(rr.rhoV)) - A0).norm();
        r = {{"target", "seed"}, {"solve_residual", rr.residual}, {"roundtrip", rt}, {"rho_V", to_json(rr.rhoV)}};
        ok = rt < 1e-8;
      } else {
        auto p = realize_psi(split_eps, split_eps, split_eps);
        r = {{"target", "psi"},
             {"eps", split_eps},
             {"start", p.line.start},
             {"in_chart", p.line.in_chart},
             {"start_angle", p.line.start_angle},
             {"iterations", p.line.iterations},
             {"final_angle", p.line.angle},
             {"gap", p.line.gap},
             {"operator_spectrum", to_json(spectrum(p.line.A).values)},
             {"solve_residual", p.rho.residual},
             {"roundtrip", p.roundtrip},
             {"lowest_angle_after_roundtrip", p.lowest_angle},
             {"rho_V", to_json(p.rho.rhoV)}};
        ok = p.line.converged && p.roundtrip < 1e-8;
      }
      return emit(r, ok, "split-realize", out);
    }

    if (gal->parsed()) {
      FormFunction rho = load_rho(rho_spec);
      auto eps = parse_list(eps_list);
      eps.insert(eps.begin(), 0.0);
      auto V = degree_max == 24 ? splitting_context().V : build_invariant_basis(degree_max);
      auto gp = assemble_forms(V, rho, eps);
      auto Brho = splitting_operator_of_rho(rho);
      json r;
      r["degree_max"] = degree_max;
      r["basis_dimension"] = V.size();
      r["quadrature_degree"] = gp.quad_degree;
      r["quadrature_self_test"] = gp.quad_self_test;
      r["B_rho_spectrum"] = to_json(spectrum(Brho).values);
      json levels = json::array();
      bool ok = true;
      for (const auto& f : gp.forms) {
        auto s = solve_branch(f);
        json l = {{"eps", f.eps}, {"residual", s.residual}, {"spectrum", to_json(s.values)}};
        if (f.eps != 0) {
          auto cmp = compare_slopes(gp, s, Brho);
          l["lambda1"] = s.lambda1();
          l["gap"] = s.gap();
          l["slopes"] = to_json(cmp.slopes);
          l["slope_error"] = cmp.error;
          l["alignment_B_lowest"] = cmp.lowest_alignment;
          if (rho_spec == "realized") l["alignment_psi"] = alignment_with_E(gp, s.phi1(), psi_realization().psi);
          ok = ok && s.gap() > 0;
        }
        ok = ok && s.residual < 1e-9;
        levels.push_back(l);
      }
      r["levels"] = levels;
      return emit(r, ok, "galerkin", out);
    }

    if (heat->parsed()) {
      const auto& V = splitting_context().V;
      auto gp = assemble_forms(V, V.combine(psi_realization().rho.rhoV), {heat_eps});
      const auto& f = gp.forms[0];
      auto s = solve_branch(f);
      auto times = t_list.empty() ? default_heat_times(s) : parse_list(t_list);
      Eigen::VectorXd x(V.size());
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> g;
      for (int k = 0; k < x.size(); ++k) x(k) = g(rng);
      if (init == "phi1") x = s.phi1();
      if (init == "perp") x -= s.phi1().dot(f.m * x) * s.phi1();
      auto h = heat_demo(f, s, x, times, sample_basis(V, 1000));
      opt.starts = std::min(opt.starts, 4096);
      auto census = m_critical_census(V.combine(h.final_rescaled), "heat", opt);
      json r = {{"eps", heat_eps},
                {"init", init},
                {"times", times},
                {"first_mode", h.first_mode},
                {"exceptional", h.exceptional},
                {"c0_distance", h.c0_distance},
                {"c1_distance", h.c1_distance},
                {"norm_identity_error", h.norm_identity_error},
                {"fitted_rate", h.fitted_rate},
                {"predicted_rate", h.predicted_rate},
                {"final_census", census.total}};
      bool ok = init == "perp" ? h.exceptional : !h.exceptional;
      return emit(r, ok, "heat", out);
    }

    if (all->parsed()) {
      auto checks = run_all_checks(opt, seed);
      json r = json::array();
      bool ok = true;
      for (const auto& c : checks) {
        std::cerr << (c.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << "\n";
        r.push_back({{"criterion", c.id}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        ok = ok && c.pass;
      }
      return emit({{"checks", r}}, ok, "all", out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
