#pragma once

#include <chrono>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "dodeca/critscan.hpp"
#include "dodeca/galerkin.hpp"
#include "dodeca/splitting.hpp"

namespace dodeca {

using json = nlohmann::json;

// ---------------------------------------------------------------- serialization

inline json to_json(const NF& x) {
  json coords = json::array();
  for (const auto& c : x.coords()) coords.push_back(c.get_str());
  auto z = x.to_complex();
  return {{"exact", x.to_string()}, {"coords", coords}, {"re", z.real()}, {"im", z.imag()}};
}

template <class Tag>
json to_json(const Ext<Tag>& x) {
  auto z = x.to_complex();
  return {{"exact", x.to_string()},
          {"base", to_json(x.base())},
          {"radical", to_json(x.radical())},
          {"re", z.real()},
          {"im", z.imag()}};
}

inline json to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

inline json to_json(const Quatd& q) { return std::vector<double>{q.a, q.b, q.c, q.d}; }

inline json to_json(const MorseCensus& c) {
  json j;
  j["function"] = c.function_label;
  j["total"] = c.total;
  j["euler_sum"] = c.euler_sum;
  j["complete"] = c.complete;
  j["s3_count"] = c.s3_count;
  j["starts"] = c.starts;
  j["converged"] = c.converged;
  j["max_gradient"] = c.max_gradient;
  for (const auto& [k, n] : c.counts_by_index) j["by_index"][std::to_string(k)] = n;
  for (const auto& [l, n] : c.counts_by_label) j["by_label"][label_name(l)] = n;
  for (const auto& [l, n] : c.circles_by_label()) j["circles_by_label"][label_name(l)] = n;
  j["circles"] = c.circles.size();
  json recs = json::array();
  for (const auto& r : c.records)
    recs.push_back({{"location", r.location},
                    {"value", r.value},
                    {"index", r.morse_index},
                    {"label", label_name(r.label)},
                    {"hessian", r.hessian_eigenvalues},
                    {"gradient_norm", r.gradient_norm},
                    {"lifts", r.orbit_size}});
  j["records"] = recs;
  json circ = json::array();
  for (const auto& r : c.circles)
    circ.push_back({{"location", r.location},
                    {"value", r.value},
                    {"label", label_name(r.label)},
                    {"hessian", r.hessian_eigenvalues},
                    {"fiber_alignment", r.fiber_alignment}});
  j["circle_records"] = circ;
  return j;
}

// ---------------------------------------------------------------- checks

struct Check {
  int id = 0;
  std::string name;
  bool pass = false;
  json detail;
  double seconds = 0;
  double budget = 0;
};

inline Check timed(int id, std::string name, double budget, const std::function<bool(json&)>& body) {
  Check c;
  c.id = id;
  c.name = std::move(name);
  c.budget = budget;
  auto t0 = std::chrono::steady_clock::now();
  try {
    c.pass = body(c.detail);
  } catch (const std::exception& e) {
    c.pass = false;
    c.detail["error"] = e.what();
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (c.seconds > budget) {
    c.pass = false;
    c.detail["over_budget"] = true;
  }
  return c;
}

inline Check check_exact_identities() {
  return timed(1, "exact coefficient identities", 5, [](json& d) {
    const NF i = NF::i(), s3 = NF::sqrt3();
    auto q = [](long a, long b) { return NF(rat(a, b)); };
    struct Item {
      std::string name;
      bool ok;
      json value;
    };
    std::vector<Item> items;
    auto a0z2 = coefficient_A(0, z2_exact());
    items.push_back({"A0(z2)", a0z2 == ExactScalar(-q(11, 64) - q(1, 32) * i), to_json(a0z2)});
    auto a4z2 = coefficient_A(4, z2_exact());
    items.push_back({"A4(z2)", a4z2 == ExactScalar(-q(165, 64) - q(165, 32) * i), to_json(a4z2)});
    auto a3z3 = coefficient_A(3, z3_exact());
    NF a3 = -q(55, 216) * s3 - q(55, 216) + (q(55, 216) * s3 - q(55, 216)) * i;
    items.push_back({"A3(z3)", a3z3 == Z3Scalar(a3), to_json(a3z3)});
    auto a0z3 = coefficient_A(0, z3_exact());
    items.push_back({"A0(z3)", a0z3 == Z3Scalar(q(11, 216) * s3 - q(1, 27) * i), to_json(a0z3)});
    bool all = true;
    int passed = 0;
    for (auto& it : items) {
      d["items"][it.name] = {{"pass", it.ok}, {"value", it.value}};
      all = all && it.ok;
      passed += it.ok;
    }
    d["passed"] = passed;
    d["total"] = items.size();
    return all;
  });
}

inline Check check_group() {
  return timed(2, "group order, fiber stabilizers, Hopf orbits", 5, [](json& d) {
    const auto& g = binary_icosahedral();
    d["order"] = g.size();
    json hist;
    for (const auto& [o, n] : g.order_histogram()) hist[std::to_string(o)] = n;
    d["element_orders"] = hist;
    struct Pt {
      std::string name;
      Quatd z;
      int stab, orbit;
    };
    std::vector<Pt> pts = {{"z5", z5(), 10, 12}, {"z3", z3(), 6, 20}, {"z2", z2(), 4, 30}};
    bool ok = g.size() == 120;
    for (const auto& p : pts) {
      int s = fiber_stabilizer_order(p.z, g);
      int o = static_cast<int>(hopf_orbit(p.z, g).size());
      d["points"][p.name] = {{"stabilizer", s}, {"expected_stabilizer", p.stab}, {"orbit", o}, {"expected_orbit", p.orbit}};
      ok = ok && s == p.stab && o == p.orbit;
    }
    // a genuine order-3 lift, reported alongside
    Quatd f = z3_face_lift(g);
    d["supplementary"]["z3_face_lift"] = {{"point", to_json(f)},
                                          {"stabilizer", fiber_stabilizer_order(f, g)},
                                          {"orbit", hopf_orbit(f, g).size()}};
    return ok;
  });
}

inline Check check_sphere_census() {
  return timed(3, "critical points of the sextic on S2 and exact Hessians", 60, [](json& d) {
    S2CensusOptions o;
    o.symmetry = &sextic_rotation_group();
    auto c = s2_critical_census(to_double_poly(invariant_sextic()), o);
    auto sizes = orbit_sizes(c);
    d["total"] = c.total;
    d["orbit_sizes"] = sizes;
    d["max_gradient"] = c.max_gradient;
    bool ok = c.total == 62 && sizes == std::vector<int>{12, 20, 30} && c.max_gradient < 1e-10 && c.complete;

    const NF t = NF::tau(), s5 = NF::sqrt5(), it = t.inverse();
    auto q = [](long a, long b) { return NF(rat(a, b)); };
    const PolyNF P = invariant_sextic();
    auto hv = exact_hessian_at(P, {t, NF(1), NF(0)}, {NF(1), -t, NF(0)}, {NF(0), NF(0), NF(1)});
    bool v_ok = hv.matrix[0][0] == NF(24) + q(56, 5) * s5 && hv.matrix[1][1] == (NF(32) + NF(16) * s5) * q(1, 5) &&
                hv.matrix[0][1].is_zero() && hv.definiteness() == 1;
    auto hf = exact_hessian_at(P, {NF(1), NF(1), NF(1)}, {NF(1), NF(-1), NF(0)}, {NF(1), NF(1), NF(-2)});
    bool f_ok = hf.matrix[0][0] == -(NF(64) + NF(32) * s5) * q(1, 9) &&
                hf.matrix[1][1] == -(NF(64) + NF(32) * s5) * q(1, 3) && hf.matrix[0][1].is_zero() &&
                hf.definiteness() == -1;
    auto he = exact_hessian_at(P, {it * q(1, 2), q(1, 2), t * q(1, 2)}, {NF(1), -it, NF(0)}, {NF(1), NF(0), -it * it});
    bool e_ok = he.determinant() == NF(-24) - NF(8) * s5;
    auto dump = [](const ExactTangentHessian& h) {
      return json{{"h11", to_json(h.matrix[0][0])},
                  {"h12", to_json(h.matrix[0][1])},
                  {"h22", to_json(h.matrix[1][1])},
                  {"det", to_json(h.determinant())},
                  {"multiplier", to_json(h.multiplier)},
                  {"definiteness", h.definiteness()}};
    };
    d["hessians"] = {{"vertex", dump(hv)}, {"face", dump(hf)}, {"edge", dump(he)}};
    d["hessian_checks"] = {{"vertex", v_ok}, {"face", f_ok}, {"edge", e_ok}};
    return ok && v_ok && f_ok && e_ok;
  });
}

inline json sweep_json(const SweepResult& s) {
  json j;
  j["scales"] = s.scales;
  j["stable"] = s.stable;
  j["stable_level"] = s.stable_level;
  json levels = json::array();
  for (const auto& c : s.censuses) {
    json l = to_json(c);
    l.erase("records");
    l.erase("circle_records");
    levels.push_back(l);
  }
  j["levels"] = levels;
  return j;
}

inline Check check_morse_counts(const MCensusOptions& opt = {}) {
  return timed(4, "Morse counts on M", 600, [&](json& d) {
    auto seed = m_critical_census(seed_function(), "seed", opt);
    auto sc = seed.circles_by_label();
    bool seed_ok = seed.total == 0 && seed.circles.size() == 3 && sc[OrbitLabel::Vertex5] == 1 &&
                   sc[OrbitLabel::Face3] == 1 && sc[OrbitLabel::Edge2] == 1;
    json sj = to_json(seed);
    sj.erase("records");
    d["seed"] = sj;
    const std::vector<double> scales = {1e-2, 3e-3, 1e-3};
    auto fab = sweep_census([](double e) { return fab_function(e, e); }, "fab", scales, opt);
    auto psi = sweep_census([](double e) { return psi_function(e, e, e); }, "psi", scales, opt);
    d["fab"] = sweep_json(fab);
    d["psi"] = sweep_json(psi);
    auto split_ok = [](const SweepResult& s, int total, int v, int f, int e) {
      if (!s.stable) return false;
      const auto& c = s.censuses.back();
      auto get = [&](OrbitLabel l) { return c.counts_by_label.count(l) ? c.counts_by_label.at(l) : 0; };
      return c.total == total && get(OrbitLabel::Vertex5) == v && get(OrbitLabel::Face3) == f &&
             get(OrbitLabel::Edge2) == e && c.euler_sum == 0 && c.circles.empty();
    };
    bool fab_ok = split_ok(fab, 12, 2, 4, 6);
    bool psi_ok = split_ok(psi, 6, 2, 2, 2);
    d["seed_ok"] = seed_ok;
    d["fab_ok"] = fab_ok;
    d["psi_ok"] = psi_ok;
    return seed_ok && fab_ok && psi_ok && seed.euler_sum == 0;
  });
}

inline Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, int n = 13) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd H(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) H(i, j) = H(j, i) = g(rng);
  return H;
}

inline Check check_splitting_algebra(unsigned seed = 0) {
  return timed(5, "splitting algebra", 120, [&](json& d) {
    const auto& c = splitting_context();
    d["product_space_dimension"] = c.dP;
    double b1 = (splitting_matrix_samples(Eigen::VectorXd::Ones(c.quad.points.size())) +
                 Eigen::MatrixXd::Identity(13, 13))
                    .cwiseAbs()
                    .maxCoeff();
    d["B1_plus_I"] = b1;
    auto A0 = seed_operator();
    d["gram_condition"] = A0.gram_condition;
    Eigen::VectorXd K = reproducing_kernel();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    double rayleigh = 0;
    for (int t = 0; t < 50; ++t) {
      Eigen::VectorXd f(13);
      for (int i = 0; i < 13; ++i) f(i) = g(rng);
      f.normalize();
      double fo = f.dot(K);
      rayleigh = std::max(rayleigh, std::abs(f.dot(A0.A * f) + fo * fo));
    }
    d["rayleigh_max_error"] = rayleigh;
    int fixed = 0;
    Eigen::VectorXd F0 = isotropy_line(&fixed);
    Spectrum s = spectrum(A0.A);
    double cosF0 = std::abs(s.lowest().dot(F0));
    d["isotropy_fixed_dimension"] = fixed;
    d["A0_spectrum"] = to_json(s.values);
    d["A0_gap"] = s.gap();
    d["A0_lowest_cos_F0"] = cosF0;
    d["K0_cos_F0"] = std::abs(K.normalized().dot(F0));
    d["F0_cos_hopf_seed"] = std::abs(F0.dot(hopf_seed_line()));
    auto rank = submersion_rank(A0.A, realizable_basis());
    d["submersion_rank"] = rank.rank;
    d["submersion_singular_values"] = to_json(rank.singular_values);
    Eigen::VectorXd sv = multiplication_singular_values(s.lowest());
    d["adjoint_max_difference"] = (rank.singular_values.head(12) - sv.head(12)).cwiseAbs().maxCoeff();
    Eigen::MatrixXd H = random_symmetric(rng);
    Eigen::VectorXd v = s.lowest();
    Eigen::VectorXd dl = eigenline_differential(A0.A, H);
    auto err = [&](double t) { return (aligned_lowest(A0.A + t * H, v) - v - t * dl).norm(); };
    double ratio = err(1e-3) / err(5e-4);
    d["eigenline_fd_ratio"] = ratio;
    d["kernel_multiplication_margin"] = kernel_multiplication_margin(50, seed + 1);
    return b1 < 1e-12 && rayleigh < 1e-9 && fixed == 1 && cosF0 > 1 - 1e-9 && s.gap() > 0 && rank.rank == 12 &&
           ratio >= 3.5 && ratio <= 4.5;
  });
}

// Ψ parameters used throughout the realization, Galerkin and heat checks.
inline constexpr double kPsiScale = 1e-2;

inline const PsiRealization& psi_realization() {
  static const PsiRealization r = realize_psi(kPsiScale, kPsiScale, kPsiScale);
  return r;
}

inline Check check_realizability() {
  return timed(6, "realizability round trip", 120, [](json& d) {
    const auto& c = splitting_context();
    auto A0 = seed_operator().A;
    auto r0 = realize_conformal_factor(A0);
    double rt0 = (splitting_operator_of_rho(c.V.combine(r0.rhoV)) - A0).norm();
    d["A0"] = {{"solve_residual", r0.residual}, {"roundtrip", rt0}};
    const auto& p = psi_realization();
    d["psi"] = {{"start", p.line.start},
                {"start_angle", p.line.start_angle},
                {"iterations", p.line.iterations},
                {"final_angle", p.line.angle},
                {"gap", p.line.gap},
                {"solve_residual", p.rho.residual},
                {"roundtrip", p.roundtrip},
                {"lowest_angle_after_roundtrip", p.lowest_angle}};
    return rt0 < 1e-8 && p.line.converged && p.roundtrip < 1e-8 && p.lowest_angle < 1e-8;
  });
}

struct GalerkinRun {
  FormFunction rho;
  GalerkinProblem gp;
};

inline const std::vector<double>& galerkin_eps() {
  static const std::vector<double> e = {0, 1e-2, 3e-3, 1e-3};
  return e;
}

inline const GalerkinRun& galerkin_run() {
  static const GalerkinRun g = [] {
    GalerkinRun g;
    g.rho = splitting_context().V.combine(psi_realization().rho.rhoV);
    g.gp = assemble_forms(splitting_context().V, g.rho, galerkin_eps());
    return g;
  }();
  return g;
}

inline Check check_galerkin(const MCensusOptions& opt = {}) {
  return timed(7, "Galerkin branch selection", 900, [&](json& d) {
    const auto& run = galerkin_run();
    const auto& p = psi_realization();
    auto s0 = solve_branch(run.gp.at(0));
    const int expect[] = {0, 168, 440, 624}, mult[] = {1, 13, 21, 25};
    double block_err = 0;
    int k = 0;
    for (int b = 0; b < 4; ++b)
      for (int r = 0; r < mult[b]; ++r, ++k)
        block_err = std::max(block_err, std::abs(s0.values(k) - expect[b]) / std::max(1, expect[b]));
    d["unperturbed_block_error"] = block_err;
    d["quadrature_degree"] = run.gp.quad_degree;
    d["quadrature_self_test"] = run.gp.quad_self_test;
    bool ok = block_err < 1e-8 && k == s0.values.size();
    double prev = 0;
    json levels = json::array();
    double align = 0;
    for (double e : {1e-2, 3e-3, 1e-3}) {
      auto s = solve_branch(run.gp.at(e));
      auto cmp = compare_slopes(run.gp, s, p.B_rho);
      align = alignment_with_E(run.gp, s.phi1(), p.psi);
      auto census = m_critical_census(run.gp.V.combine(s.phi1()), "phi_eps", opt);
      json l = {{"eps", e},
                {"lambda1", s.lambda1()},
                {"gap", s.gap()},
                {"residual", s.residual},
                {"slopes", to_json(cmp.slopes)},
                {"predicted", to_json(cmp.predicted)},
                {"slope_error", cmp.error},
                {"alignment_psi", align},
                {"alignment_B_lowest", cmp.lowest_alignment},
                {"census", census.total},
                {"census_circles", census.circles.size()}};
      if (prev > 0) l["error_ratio"] = prev / cmp.error;
      levels.push_back(l);
      ok = ok && s.gap() > 0 && census.total == 6 && census.circles.empty() && (prev == 0 || prev / cmp.error >= 2.5);
      prev = cmp.error;
    }
    d["levels"] = levels;
    ok = ok && align > 0.99;
    return ok;
  });
}

inline Check check_heat(const MCensusOptions& opt = {}, unsigned seed = 0, double eps = 1e-2) {
  return timed(8, "heat flow selects the first mode", 600, [&](json& d) {
    const auto& run = galerkin_run();
    const auto& f = run.gp.at(eps);
    auto s = solve_branch(f);
    auto times = default_heat_times(s);
    auto samples = sample_basis(run.gp.V, 1000);
    d["eps"] = eps;
    d["times"] = times;
    d["predicted_rate"] = s.gap();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    bool ok = true;
    json runs = json::array();
    for (int r = 0; r < 10; ++r) {
      Eigen::VectorXd x(run.gp.V.size());
      for (int k = 0; k < x.size(); ++k) x(k) = g(rng);
      auto h = heat_demo(f, s, x, times, samples);
      auto census = m_critical_census(run.gp.V.combine(h.final_rescaled), "heat", opt);
      double rel = std::abs(h.fitted_rate - h.predicted_rate) / h.predicted_rate;
      double norm_err = *std::max_element(h.norm_identity_error.begin(), h.norm_identity_error.end());
      runs.push_back({{"first_mode", h.first_mode},
                      {"fitted_rate", h.fitted_rate},
                      {"relative_rate_error", rel},
                      {"c0_distance", h.c0_distance},
                      {"c1_distance", h.c1_distance},
                      {"norm_identity_error", norm_err},
                      {"final_census", census.total}});
      ok = ok && !h.exceptional && rel < 0.1 && census.total == 6 && census.circles.empty() && norm_err < 1e-10;
    }
    d["runs"] = runs;
    Eigen::VectorXd x(run.gp.V.size());
    for (int k = 0; k < x.size(); ++k) x(k) = g(rng);
    x -= s.phi1().dot(f.m * x) * s.phi1();
    auto h = heat_demo(f, s, x, times, samples);
    d["orthogonal_input_flagged"] = h.exceptional;
    return ok && h.exceptional;
  });
}

inline std::vector<Check> run_all_checks(const MCensusOptions& opt = {}, unsigned seed = 0) {
  MCensusOptions light = opt;
  light.starts = std::min(opt.starts, 4096);
  return {check_exact_identities(), check_group(),           check_sphere_census(),    check_morse_counts(opt),
          check_splitting_algebra(seed), check_realizability(), check_galerkin(light), check_heat(light, seed)};
}

}  // namespace dodeca
