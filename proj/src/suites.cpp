#include "phh/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <Eigen/LU>

#include "phh/curvature.hpp"
#include "phh/expr.hpp"
#include "phh/sampling.hpp"
#include "phh/splitquat.hpp"
#include "phh/structures.hpp"
#include "phh/surfaces.hpp"
#include "phh/walker.hpp"

namespace phh {
namespace {

using nlohmann::json;

// ---- parameter access ----

Expression expr_param(const json& params, const std::string& key, const std::string& fallback, Chart chart) {
  std::string text = fallback;
  if (params.contains(key)) {
    if (!params[key].is_string()) throw ConfigError("params." + key + " must be an expression string");
    text = params[key].get<std::string>();
  }
  try {
    return Expression::parse(text, chart);
  } catch (const ParseError& e) {
    throw ConfigError("params." + key + ": " + e.what());
  }
}

double num_param(const json& params, const std::string& key, double fallback) {
  if (!params.contains(key)) return fallback;
  if (!params[key].is_number()) throw ConfigError("params." + key + " must be a number");
  return params[key].get<double>();
}

bool bool_param(const json& params, const std::string& key, bool fallback) {
  if (!params.contains(key)) return fallback;
  if (!params[key].is_boolean()) throw ConfigError("params." + key + " must be true or false");
  return params[key].get<bool>();
}

Complex complex_value(const json& v, const std::string& what) {
  if (v.is_number()) return v.get<double>();
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw ConfigError(what + " must be a number or a [re, im] pair");
}

Vec4 vec4_value(const json& v, const std::string& what) {
  if (!v.is_array() || v.size() != 4) throw ConfigError(what + " must be an array of 4 numbers");
  Vec4 out;
  for (int i = 0; i < 4; ++i) {
    if (!v[i].is_number()) throw ConfigError(what + " must be an array of 4 numbers");
    out(i) = v[i].get<double>();
  }
  return out;
}

std::vector<Vec4> samples_for(const SuiteConfig& cfg, const Vec4& lo, const Vec4& hi) {
  const Vec4 a = cfg.domain_min.value_or(lo), b = cfg.domain_max.value_or(hi);
  return sample_box(a, b, cfg.samples, cfg.seed);
}

// ---- algebra ----

Mat4 random_conjugator(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    Mat4 P = Mat4::Identity();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) P(i, j) += 0.3 * u(rng);
    if (std::abs(P.determinant()) > 0.3) return P;
  }
}

double random_coefficient(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.5, 2.0);
  const double c = u(rng);
  return rng() % 2 ? c : -c;
}

double compat_abs(const Mat4& g, const ParaHypercomplexTriple& T) {
  return std::max({(T.J1.transpose() * g * T.J1 - g).cwiseAbs().maxCoeff(),
                   (T.J2.transpose() * g * T.J2 + g).cwiseAbs().maxCoeff(),
                   (T.J3.transpose() * g * T.J3 + g).cwiseAbs().maxCoeff()});
}

VerificationReport algebra_suite(const SuiteConfig& cfg) {
  const json& P = cfg.params;
  const int n_assoc = static_cast<int>(num_param(P, "products", 1000));
  const int n_forms = static_cast<int>(num_param(P, "plus_forms", 100));
  const int n_pairs = static_cast<int>(num_param(P, "metric_pairs", 20));
  const int n_probes = static_cast<int>(num_param(P, "probes", 50));
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  VerificationReport rep("algebra");
  const ParaHypercomplexTriple C = canonical_triple();
  rep.merge(verify_triple(C, 0.0), "canonical:");

  std::vector<double> assoc;
  auto rq = [&] { return SplitQuaterniond{u(rng), u(rng), u(rng), u(rng)}; };
  for (int k = 0; k < n_assoc; ++k) {
    const auto p = rq(), q = rq(), r = rq();
    const auto d = (p * q) * r - p * (q * r);
    assoc.push_back(std::max({std::abs(d.r), std::abs(d.i), std::abs(d.s), std::abs(d.t)}));
  }
  rep.add("associativity", assoc, 1e-12);

  std::vector<double> roundtrip, compat, sig;
  for (int k = 0; k < n_forms; ++k) {
    const ParaHypercomplexTriple T = C.conjugated(random_conjugator(rng));
    const PlusForm h = make_plus_form(T, random_coefficient(rng));
    const BilinearForm4 g = metric_from_plus_form(T, h);
    const Mat4 H = plus_form_matrix(T, h);
    double r = 0.0;
    for (const Vec4& A : {h.u1, h.u2})
      for (const Vec4& B : {h.u1, h.u2}) r = std::max(r, std::abs(A.dot(H * B) - 0.5 * g(T.J1 * A, B)));
    roundtrip.push_back(r);
    compat.push_back(compat_abs(g.entries, T));
    sig.push_back(g.signature() == std::pair<int, int>{2, 2} ? 0.0 : 1.0);
  }
  rep.add("plus_form:h-g(J1.,.)/2", roundtrip, 1e-12);
  rep.add("plus_form:compatibility", compat, 1e-12);
  rep.add("plus_form:signature(2,2)", sig, 0.0);

  std::vector<double> spread, entry, expected;
  for (int k = 0; k < n_pairs; ++k) {
    const ParaHypercomplexTriple T = C.conjugated(random_conjugator(rng));
    const double c1 = random_coefficient(rng), c2 = random_coefficient(rng);
    const BilinearForm4 g = metric_from_plus_form(T, make_plus_form(T, c1));
    const BilinearForm4 h = metric_from_plus_form(T, make_plus_form(T, c2));
    std::vector<double> lambdas;
    while (static_cast<int>(lambdas.size()) < n_probes) {
      const Vec4 w(u(rng), u(rng), u(rng), u(rng));
      if (std::abs(h(w, w)) < 1e-3 * w.squaredNorm() * h.entries.cwiseAbs().maxCoeff()) continue;
      lambdas.push_back(conformal_factor(g, h, T, w));
    }
    const double l0 = lambdas.front();
    double s = 0.0;
    for (double l : lambdas) s = std::max(s, std::abs(l - l0) / std::abs(l0));
    spread.push_back(s);
    entry.push_back((g.entries - l0 * h.entries).cwiseAbs().maxCoeff() / g.entries.cwiseAbs().maxCoeff());
    expected.push_back(std::abs(l0 - c1 / c2) / std::abs(c1 / c2));
  }
  rep.add("conformal:probe_spread", spread, 1e-9);
  rep.add("conformal:g-lambda*h", entry, 1e-9);
  rep.add("conformal:lambda-c_g/c_h", expected, 1e-9);

  const BilinearForm4 euclid(Mat4::Identity());
  const BilinearForm4 mixed(Mat4(Vec4(1.0, -1.0, 1.0, -1.0).asDiagonal()));
  rep.add("averaged:euclidean", averaged_form(euclid, C).entries.cwiseAbs().maxCoeff(), 0.0);
  rep.add("averaged:diag(1,-1,1,-1)", averaged_form(mixed, C).entries.cwiseAbs().maxCoeff(), 0.0);

  const BilinearForm4 g0(Mat4(Vec4(1.0, 1.0, -1.0, -1.0).asDiagonal()));
  rep.add("frame:det(e1)-1", std::abs(quaternionic_frame(g0, C, Vec4::Unit(0)).transition_det - 1.0), 1e-12);
  rep.add("frame:det(e3)-1", std::abs(quaternionic_frame(g0, C, Vec4::Unit(2)).transition_det - 1.0), 1e-12);
  bool rejected = false;
  try {
    quaternionic_frame(g0, C, Vec4(1.0, 0.0, 1.0, 0.0));
  } catch (const IsotropicVectorError&) {
    rejected = true;
  }
  rep.add_flag("frame:isotropic_rejected", rejected);
  return rep;
}

// ---- walker ----

WalkerData walker_params(const json& P) {
  const bool family = P.contains("K") || P.contains("P") || P.contains("T") || P.contains("xi") ||
                      P.contains("eta") || P.contains("gamma");
  if (family && (P.contains("a") || P.contains("b") || P.contains("c")))
    throw ConfigError("walker params: give either a, b, c or the PC family K, P, T, xi, eta, gamma");
  if (!family)
    return {expr_param(P, "a", "0", Chart::kReal), expr_param(P, "b", "0", Chart::kReal),
            expr_param(P, "c", "0", Chart::kReal)};
  PCFamily f{expr_param(P, "K", "0", Chart::kReal),  expr_param(P, "P", "0", Chart::kReal),
             expr_param(P, "T", "0", Chart::kReal),  expr_param(P, "xi", "0", Chart::kReal),
             expr_param(P, "eta", "0", Chart::kReal), expr_param(P, "gamma", "0", Chart::kReal)};
  try {
    return pc_family(f);
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
}

VerificationReport walker_common(const WalkerData& d, const AlmostPHStructure& S, std::span<const Vec4> pts) {
  VerificationReport rep;
  std::vector<double> frame;
  for (const Vec4& p : pts) frame.push_back(walker_frame_residual(d, p));
  rep.add("frame_normalisation", frame, 1e-10);
  rep.merge(structure_residuals(S, pts));
  rep.merge(check_phc_algebra(fundamental_forms(S), pts));
  return rep;
}

// Random smooth function of (z, t): a few polynomial and trigonometric terms.
std::string random_zt(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0), freq(0.5, 2.0);
  static const std::array<const char*, 8> shapes = {"z", "t", "z^2", "z*t", "t^2", "sin(%g*z)", "cos(%g*t)",
                                                    "sin(%g*z + %g*t)"};
  std::string out = "0";
  const int terms = 1 + static_cast<int>(rng() % 3);
  char term[96], buf[160];
  for (int k = 0; k < terms; ++k) {
    const char* shape = shapes[rng() % shapes.size()];
    std::snprintf(term, sizeof term, shape, freq(rng), freq(rng));
    std::snprintf(buf, sizeof buf, " + (%.6f)*%s", coef(rng), term);
    out += buf;
  }
  return out;
}

// Folds same-named checks together: max of maxima, sample-weighted mean.
void accumulate(VerificationReport& agg, const VerificationReport& r) {
  for (const auto& c : r.checks()) {
    auto& all = agg.checks();
    auto it = std::find_if(all.begin(), all.end(), [&](const CheckRecord& x) { return x.name == c.name; });
    if (it == all.end()) {
      all.push_back(c);
      continue;
    }
    const int n = it->samples + c.samples;
    it->mean = n > 0 ? (it->mean * it->samples + c.mean * c.samples) / n : 0.0;
    it->max = std::max(it->max, c.max);
    it->samples = n;
    agg.retolerance(it->name, it->tol);
  }
}

int random_family_count(const json& P) {
  if (!P.contains("random_families")) return 0;
  if (!P["random_families"].is_number_integer() || P["random_families"].get<int>() < 1)
    throw ConfigError("params.random_families must be a positive integer");
  for (const char* k : {"a", "b", "c", "K", "P", "T", "xi", "eta", "gamma"})
    if (P.contains(k)) throw ConfigError("params.random_families cannot be combined with explicit functions");
  return P["random_families"].get<int>();
}

void add_pc_falsifiers(VerificationReport& rep, const json& P, std::span<const Vec4> pts) {
  if (!bool_param(P, "falsifiers", false)) return;
  for (const char* a : {"x^3", "exp(x)"}) {
    const WalkerData d{Expression::parse(a), Expression(), Expression()};
    const VerificationReport integ = integrability_report(proper_structure(d), pts);
    const double mx = std::max({integ.max("N_J1"), integ.max("N_J2"), integ.max("N_J3")});
    rep.add_lower(std::string("falsifier:a=") + a, mx, 1e-4);
  }
}

VerificationReport walker_pc_random(const SuiteConfig& cfg, int families) {
  const auto pts = samples_for(cfg, Vec4::Constant(-1.0), Vec4::Constant(1.0));
  std::mt19937_64 rng(cfg.seed);
  VerificationReport rep("walker-pc");
  for (int k = 0; k < families; ++k) {
    PCFamily f;
    for (Expression* e : {&f.K, &f.P, &f.T, &f.xi, &f.eta, &f.gamma}) *e = Expression::parse(random_zt(rng));
    const WalkerData d = pc_family(f);
    const AlmostPHStructure S = proper_structure(d);
    accumulate(rep, integrability_report(S, pts));
    accumulate(rep, pc_form_check(d, pts));
  }
  add_pc_falsifiers(rep, cfg.params, pts);
  return rep;
}

VerificationReport walker_hk_random(const SuiteConfig& cfg, int families) {
  const auto pts = samples_for(cfg, Vec4::Constant(-1.0), Vec4::Constant(1.0));
  std::mt19937_64 rng(cfg.seed);
  VerificationReport rep("walker-hk");
  for (int k = 0; k < families; ++k) {
    const WalkerData d{Expression::parse(random_zt(rng)), Expression::parse(random_zt(rng)),
                       Expression::parse(random_zt(rng))};
    accumulate(rep, hk_check(d, pts));
  }
  return rep;
}

VerificationReport walker_pc_suite(const SuiteConfig& cfg) {
  if (const int n = random_family_count(cfg.params)) return walker_pc_random(cfg, n);
  const WalkerData d = walker_params(cfg.params);
  const bool expect_integrable = bool_param(cfg.params, "expect_integrable", true);
  const auto pts = samples_for(cfg, Vec4::Constant(-1.0), Vec4::Constant(1.0));
  const AlmostPHStructure S = proper_structure(d);
  VerificationReport rep("walker-pc");
  rep.merge(walker_common(d, S, pts));
  const VerificationReport integ = integrability_report(S, pts);
  if (expect_integrable) {
    rep.merge(integ);
    rep.merge(pc_form_check(d, pts));
    const FormTriple F = fundamental_forms(S);
    std::vector<double> wm;
    for (const Vec4& p : pts) wm.push_back(curvature_at(S.g, orientation_sign(F, p), p).weyl_minus_full.cwiseAbs().maxCoeff());
    rep.add("weyl_minus", wm, 1e-8);
  } else {
    const double mx = std::max({integ.max("N_J1"), integ.max("N_J2"), integ.max("N_J3")});
    rep.add_lower("N_max_detected", mx, 1e-4);
  }
  add_pc_falsifiers(rep, cfg.params, pts);
  return rep;
}

VerificationReport walker_hk_suite(const SuiteConfig& cfg) {
  if (const int n = random_family_count(cfg.params)) return walker_hk_random(cfg, n);
  const WalkerData d = walker_params(cfg.params);
  const auto pts = samples_for(cfg, Vec4::Constant(-1.0), Vec4::Constant(1.0));
  const AlmostPHStructure S = proper_structure(d);
  VerificationReport rep("walker-hk");
  rep.merge(walker_common(d, S, pts));
  rep.merge(integrability_report(S, pts));
  rep.merge(hk_check(d, pts));
  return rep;
}

// ---- inoue ----

InoueParams inoue_params(const json& P) {
  InoueParams ip;
  Eigen::Matrix2i N;
  N << 2, 1, 1, 1;
  if (P.contains("N")) {
    const json& n = P["N"];
    if (!n.is_array() || n.size() != 2 || !n[0].is_array() || !n[1].is_array() || n[0].size() != 2 ||
        n[1].size() != 2)
      throw ConfigError("params.N must be a 2x2 integer array");
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        if (!n[i][j].is_number_integer()) throw ConfigError("params.N must be a 2x2 integer array");
        N(i, j) = n[i][j].get<int>();
      }
  }
  ip.N = N;
  ip.p = static_cast<int>(num_param(P, "p", 1));
  ip.q = static_cast<int>(num_param(P, "q", 0));
  ip.r = static_cast<int>(num_param(P, "r", 1));
  ip.t = P.contains("t") ? complex_value(P["t"], "params.t") : Complex(0.0);
  ip.c1 = num_param(P, "c1", 0.0);
  ip.c2 = num_param(P, "c2", 0.0);
  try {
    ip.derive();
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  return ip;
}

std::vector<Vec4> inoue_samples(const SuiteConfig& cfg) {
  const double margin = num_param(cfg.params, "im_margin", 0.1);
  const Vec4 lo = cfg.domain_min.value_or(Vec4(-1.0, 0.5, -0.7, -0.7));
  const Vec4 hi = cfg.domain_max.value_or(Vec4(1.0, 2.0, 0.7, 0.7));
  if (lo(1) < margin) throw ConfigError("domain: Im z must stay above the margin " + std::to_string(margin));
  return sample_box(lo, hi, cfg.samples, cfg.seed);
}

VerificationReport inoue_splus_suite(const SuiteConfig& cfg) {
  const InoueParams ip = inoue_params(cfg.params);
  const auto pts = inoue_samples(cfg);
  VerificationReport rep("inoue-splus");
  rep.merge(inoue_structure_report(ip, pts));
  rep.merge(inoue_invariance_report(ip, pts));
  const AlmostPHStructure S = structure_from_forms(inoue_structure(ip).forms, pts);
  rep.merge(structure_residuals(S, pts, 1e-9));
  rep.merge(integrability_report(S, pts, 1e-9));
  return rep;
}

VerificationReport inoue_sminus_suite(const SuiteConfig& cfg) {
  const InoueParams ip = inoue_params(cfg.params);
  if (ip.t != Complex(0.0)) throw ConfigError("inoue-sminus requires t = 0");
  const auto pts = inoue_samples(cfg);
  VerificationReport rep("inoue-sminus");
  rep.merge(sigma_obstruction_report(ip, pts));
  return rep;
}

// ---- kamada ----

void add_structure_checks(VerificationReport& rep, const FormTriple& F, std::span<const Vec4> pts,
                          const json& P) {
  AlmostPHStructure S;
  try {
    S = structure_from_forms(F, pts);
  } catch (const CharacterizationError&) {
    rep.add_flag("structure_from_forms", false);
    return;
  }
  rep.merge(structure_residuals(S, pts, 1e-9));
  rep.merge(integrability_report(S, pts));
  const CurvatureReport cr = curvature_report(S.g, [&F](const Vec4& p) { return orientation_sign(F, p); }, pts);
  rep.add("ricci", cr.report.check("ricci").max, 1e-8);
  rep.add("weyl_minus", cr.report.check("weyl_minus").max, 1e-8);
  if (P.contains("expect_flat")) {
    if (bool_param(P, "expect_flat", true))
      rep.add("riemann", cr.report.check("riemann").max, 1e-8);
    else
      rep.add_lower("riemann", cr.report.check("riemann").max, 1e-4);
  }
}

VerificationReport kamada_torus_suite(const SuiteConfig& cfg) {
  const json& P = cfg.params;
  const Expression phi = expr_param(P, "phi", "0", Chart::kComplex);
  const auto pts = samples_for(cfg, Vec4::Constant(-1.0), Vec4::Constant(1.0));
  const FormTriple F = kamada_torus_forms(phi);
  VerificationReport rep("kamada-torus");
  rep.merge(hypersymplectic_check(F, pts));
  std::vector<double> ma;
  for (const Vec4& p : pts) ma.push_back(monge_ampere_residual(KamadaKind::kTorus, phi, p));
  rep.add("monge_ampere", ma, 1e-10);
  add_structure_checks(rep, F, pts, P);

  if (bool_param(P, "periodic", false)) {
    std::vector<NamedMap> maps;
    if (P.contains("periods")) {
      if (!P["periods"].is_array()) throw ConfigError("params.periods must be an array of 4-vectors");
      for (std::size_t k = 0; k < P["periods"].size(); ++k) {
        const Vec4 v = vec4_value(P["periods"][k], "params.periods[" + std::to_string(k) + "]");
        maps.emplace_back("T" + std::to_string(k + 1), translation({v(0), v(1)}, {v(2), v(3)}));
      }
    } else {
      for (int k = 0; k < 4; ++k) {
        const Vec4 v = Vec4::Unit(k);
        maps.emplace_back("T" + std::to_string(k + 1), translation({v(0), v(1)}, {v(2), v(3)}));
      }
    }
    rep.merge(periodicity_report(phi, maps, pts));
    rep.merge(form_invariance_report({{"O1", F[0]}, {"O2", F[1]}, {"O3", F[2]}}, maps, pts));
  }
  return rep;
}

KodairaLattice lattice_params(const json& P) {
  KodairaLattice L;
  if (!P.contains("lattice")) throw ConfigError("kamada-kodaira requires params.lattice");
  const json& l = P["lattice"];
  for (const char* key : {"a", "b"}) {
    if (!l.contains(key) || !l[key].is_array() || l[key].size() != 4)
      throw ConfigError(std::string("params.lattice.") + key + " must list 4 complex numbers");
    for (int i = 0; i < 4; ++i) {
      const Complex v = complex_value(l[key][i], std::string("params.lattice.") + key);
      (key[0] == 'a' ? L.a : L.b)[i] = v;
    }
  }
  L.theta_angle = num_param(l, "theta", 0.0);
  return L;
}

VerificationReport kamada_kodaira_suite(const SuiteConfig& cfg) {
  const json& P = cfg.params;
  const Expression phi = expr_param(P, "phi", "0", Chart::kComplex);
  const KodairaLattice L = lattice_params(P);
  const auto pts = samples_for(cfg, Vec4::Constant(-1.0), Vec4::Constant(1.0));
  VerificationReport rep("kamada-kodaira");
  const VerificationReport lattice = kodaira_lattice_check(L);
  rep.merge(lattice, "lattice:");
  if (!lattice.pass()) return rep;

  const FormTriple F = kamada_kodaira_forms(phi, L);
  rep.merge(hypersymplectic_check(F, pts));
  std::vector<double> ma;
  for (const Vec4& p : pts) ma.push_back(monge_ampere_residual(KamadaKind::kKodaira, phi, p));
  rep.add("monge_ampere", ma, 1e-10);
  add_structure_checks(rep, F, pts, P);

  const auto gens = kodaira_generators(L);
  std::vector<NamedMap> maps;
  for (int i = 0; i < 4; ++i) maps.emplace_back("rho" + std::to_string(i + 1), gens[i]);
  // The phi-independent part is invariant for every valid lattice; the full
  // forms only when phi itself is.
  const FormTriple F0 = kamada_kodaira_forms(Expression::constant(0.0, Chart::kComplex), L);
  rep.merge(form_invariance_report({{"O1(phi=0)", F0[0]}, {"O2", F0[1]}, {"O3", F0[2]}}, maps, pts));
  if (bool_param(P, "periodic", false)) {
    rep.merge(periodicity_report(phi, maps, pts));
    rep.merge(form_invariance_report({{"O1", F[0]}}, maps, pts));
  }
  return rep;
}

// ---- custom ----

using ExprMatrix = std::array<std::array<Expression, 4>, 4>;

ExprMatrix matrix_param(const json& P, const std::string& key) {
  const json& m = P[key];
  const std::string shape = "params." + key + " must be a 4x4 array of expressions";
  if (!m.is_array() || m.size() != 4) throw ConfigError(shape);
  ExprMatrix out;
  for (int i = 0; i < 4; ++i) {
    if (!m[i].is_array() || m[i].size() != 4) throw ConfigError(shape);
    for (int j = 0; j < 4; ++j) {
      const json& e = m[i][j];
      if (!e.is_string() && !e.is_number()) throw ConfigError(shape);
      const std::string text = e.is_string() ? e.get<std::string>() : e.dump();
      try {
        out[i][j] = Expression::parse(text);
      } catch (const ParseError& err) {
        throw ConfigError("params." + key + "[" + std::to_string(i) + "][" + std::to_string(j) + "]: " + err.what());
      }
    }
  }
  return out;
}

MatrixField matrix_field(const ExprMatrix& m) {
  std::array<std::array<ScalarField, 4>, 4> e;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) e[i][j] = ScalarField::from_expression(m[i][j]);
  return MatrixField::from_entries(e);
}

VerificationReport custom_suite(const SuiteConfig& cfg) {
  const json& P = cfg.params;
  if (!P.contains("metric")) throw ConfigError("custom suite requires params.metric");
  const ExprMatrix entries = matrix_param(P, "metric");
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < i; ++j)
      if (!ast::equal(entries[i][j].root(), entries[j][i].root()))
        throw ConfigError("params.metric must be symmetric");
  const MetricField g = matrix_field(entries);
  const int orientation = num_param(P, "orientation", 1.0) < 0 ? -1 : 1;
  const auto pts = samples_for(cfg, Vec4::Constant(-1.0), Vec4::Constant(1.0));

  VerificationReport rep("custom");
  std::vector<double> sym, bianchi, nabla, trace;
  std::vector<double> R, Ric, s, Wm, Wp;
  for (const Vec4& p : pts) {
    const CurvatureAtPoint c = curvature_at(g, orientation, p);
    sym.push_back(riemann_symmetry_residual(c));
    trace.push_back(weyl_trace_residual(c));
    nabla.push_back(metric_compatibility_residual(g, p));
    bianchi.push_back(contracted_bianchi_residual(g, p));
    R.push_back(c.riemann_lower.max_abs());
    Ric.push_back(c.ricci.cwiseAbs().maxCoeff());
    s.push_back(c.scalar);
    Wm.push_back(c.weyl_minus_full.cwiseAbs().maxCoeff());
    Wp.push_back(c.weyl_plus_full.cwiseAbs().maxCoeff());
  }
  rep.add("riemann_symmetries", sym, 1e-8);
  rep.add("weyl_trace", trace, 1e-9);
  rep.add("nabla_g", nabla, 1e-9);
  rep.add("contracted_bianchi", bianchi, 1e-7);
  if (P.contains("expect")) {
    const json& E = P["expect"];
    auto expect = [&](const char* key, const char* name, std::vector<double>& v, double tol) {
      if (!E.contains(key)) return;
      if (bool_param(E, key, true))
        rep.add(name, v, tol);
      else
        rep.add_lower(name, v, 1e-4);
    };
    expect("flat", "riemann", R, 1e-8);
    expect("ricci_flat", "ricci", Ric, 1e-8);
    expect("self_dual", "weyl_minus", Wm, 1e-8);
    expect("anti_self_dual", "weyl_plus", Wp, 1e-8);
  }

  if (P.contains("J1") || P.contains("J2") || P.contains("J3")) {
    AlmostPHStructure S;
    S.g = g;
    const std::array<const char*, 3> keys = {"J1", "J2", "J3"};
    for (int k = 0; k < 3; ++k) {
      if (!P.contains(keys[k])) throw ConfigError("custom suite: give all of J1, J2, J3");
      S.J[k] = matrix_field(matrix_param(P, keys[k]));
    }
    rep.merge(structure_residuals(S, pts));
    rep.merge(integrability_report(S, pts));
    rep.merge(check_phc_algebra(fundamental_forms(S), pts));
  }
  return rep;
}

void apply_tolerances(VerificationReport& rep, const SuiteConfig& cfg) {
  if (cfg.tol) {
    std::vector<std::string> upper;
    for (const auto& c : rep.checks())
      if (c.kind == CheckRecord::Kind::kUpper) upper.push_back(c.name);
    for (const auto& name : upper) rep.retolerance(name, *cfg.tol);
  }
  for (const auto& [name, tol] : cfg.tolerances) {
    if (!rep.has_check(name)) throw ConfigError("tolerances: suite has no check named '" + name + "'");
    rep.retolerance(name, tol);
  }
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"walker-pc",      "walker-hk",      "inoue-splus",
                                                 "inoue-sminus",   "kamada-torus",   "kamada-kodaira",
                                                 "algebra",        "custom"};
  return names;
}

SuiteConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (!j.contains("schema") || j["schema"] != 1) throw ConfigError("config: \"schema\" must be 1");
  SuiteConfig cfg;
  if (!j.contains("suite") || !j["suite"].is_string()) throw ConfigError("config: \"suite\" must be a string");
  cfg.suite = j["suite"].get<std::string>();
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), cfg.suite) == names.end())
    throw ConfigError("config: unknown suite '" + cfg.suite + "'");
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw ConfigError("config: \"params\" must be an object");
    cfg.params = j["params"];
  }
  if (j.contains("domain")) {
    const json& d = j["domain"];
    if (!d.is_object() || !d.contains("min") || !d.contains("max"))
      throw ConfigError("config: \"domain\" needs \"min\" and \"max\"");
    cfg.domain_min = vec4_value(d["min"], "domain.min");
    cfg.domain_max = vec4_value(d["max"], "domain.max");
    if ((cfg.domain_max->array() < cfg.domain_min->array()).any())
      throw ConfigError("config: domain.max must be >= domain.min");
  }
  if (j.contains("samples")) {
    if (!j["samples"].is_number_integer()) throw ConfigError("config: \"samples\" must be an integer");
    cfg.samples = j["samples"].get<int>();
  }
  if (cfg.samples < 1) throw ConfigError("config: \"samples\" must be at least 1");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("config: \"seed\" must be a non-negative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("tolerances")) {
    if (!j["tolerances"].is_object()) throw ConfigError("config: \"tolerances\" must be an object");
    for (const auto& [k, v] : j["tolerances"].items()) {
      if (!v.is_number() || v.get<double>() < 0) throw ConfigError("config: tolerance '" + k + "' must be >= 0");
      cfg.tolerances[k] = v.get<double>();
    }
  }
  return cfg;
}

SuiteConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return parse_config(j);
}

VerificationReport run_suite(const SuiteConfig& cfg) {
  if (cfg.samples < 1) throw ConfigError("samples must be at least 1");
  VerificationReport rep;
  try {
    if (cfg.suite == "algebra")
      rep = algebra_suite(cfg);
    else if (cfg.suite == "walker-pc")
      rep = walker_pc_suite(cfg);
    else if (cfg.suite == "walker-hk")
      rep = walker_hk_suite(cfg);
    else if (cfg.suite == "inoue-splus")
      rep = inoue_splus_suite(cfg);
    else if (cfg.suite == "inoue-sminus")
      rep = inoue_sminus_suite(cfg);
    else if (cfg.suite == "kamada-torus")
      rep = kamada_torus_suite(cfg);
    else if (cfg.suite == "kamada-kodaira")
      rep = kamada_kodaira_suite(cfg);
    else if (cfg.suite == "custom")
      rep = custom_suite(cfg);
    else
      throw ConfigError("unknown suite '" + cfg.suite + "'");
  } catch (const DomainError& e) {
    throw ConfigError(std::string("evaluation outside the domain of a configured expression: ") + e.what());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  rep.set_suite(cfg.suite);
  rep.seed = cfg.seed;
  rep.samples = cfg.samples;
  apply_tolerances(rep, cfg);
  return rep;
}

nlohmann::ordered_json report_to_json(const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["suite"] = r.suite();
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : r.checks()) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["max"] = c.max;
    cj["mean"] = c.mean;
    cj["tol"] = c.tol;
    cj["pass"] = c.pass;
    cj["samples"] = c.samples;
    cj["kind"] = c.kind == CheckRecord::Kind::kUpper ? "upper" : "lower";
    j["checks"].push_back(cj);
  }
  j["pass"] = r.pass();
  j["seed"] = r.seed;
  j["samples"] = r.samples;
  return j;
}

VerificationReport report_from_json(const json& j) {
  try {
    if (!j.is_object() || j.value("schema", 0) != 1) throw ConfigError("report: \"schema\" must be 1");
    VerificationReport r(j.at("suite").get<std::string>());
    r.seed = j.value("seed", std::uint64_t{0});
    r.samples = j.value("samples", 0);
    for (const auto& c : j.at("checks")) {
      CheckRecord rec;
      rec.name = c.at("name").get<std::string>();
      rec.max = c.at("max").is_null() ? INFINITY : c.at("max").get<double>();
      rec.mean = c.at("mean").is_null() ? INFINITY : c.at("mean").get<double>();
      rec.tol = c.at("tol").get<double>();
      rec.pass = c.at("pass").get<bool>();
      rec.samples = c.value("samples", 0);
      rec.kind = c.value("kind", std::string("upper")) == "lower" ? CheckRecord::Kind::kLower
                                                                   : CheckRecord::Kind::kUpper;
      r.checks().push_back(rec);
    }
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("report: ") + e.what());
  }
}

std::string pretty_table(const VerificationReport& r) {
  std::size_t w = 5;
  for (const auto& c : r.checks()) w = std::max(w, c.name.size());
  std::ostringstream out;
  char buf[256];
  out << "suite " << r.suite() << "  seed " << r.seed << "  samples " << r.samples << "  "
      << (r.pass() ? "PASS" : "FAIL") << "\n";
  std::snprintf(buf, sizeof buf, "%-*s  %12s  %12s  %12s  %s\n", static_cast<int>(w), "check", "max", "mean",
                "tol", "result");
  out << buf;
  out << std::string(w + 2 + 3 * 14 + 6, '-') << "\n";
  for (const auto& c : r.checks()) {
    const char* cmp = c.kind == CheckRecord::Kind::kUpper ? "<=" : "> ";
    std::snprintf(buf, sizeof buf, "%-*s  %12.4e  %12.4e  %s%10.2e  %s\n", static_cast<int>(w), c.name.c_str(),
                  c.max, c.mean, cmp, c.tol, c.pass ? "pass" : "FAIL");
    out << buf;
  }
  return out.str();
}

}  // namespace phh
