// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/LU>
#include <json.hpp>

#include "phh/curvature.hpp"
#include "phh/forms.hpp"
#include "phh/structures.hpp"
#include "phh/suites.hpp"
#include "phh/surfaces.hpp"
#include "phh/walker.hpp"
#include "support.hpp"

using namespace phh;
using nlohmann::json;

namespace {

const std::string kConfigs = PHH_CONFIGS;

// Collects named conditions for one criterion.
class Criterion {
 public:
  void below(const std::string& what, double value, double bound) { add(what, value, "<", bound, value < bound); }
  void above(const std::string& what, double value, double bound) { add(what, value, ">", bound, value > bound); }
  void exact(const std::string& what, double value) { add(what, value, "==", 0.0, value == 0.0); }
  void holds(const std::string& what, bool ok) {
    if (!ok) failures_.push_back(what);
  }
  void info(const std::string& text) { notes_.push_back(text); }

  bool pass() const { return failures_.empty(); }
  std::string summary() const {
    std::ostringstream s;
    if (!failures_.empty()) {
      s << "failed:";
      for (const auto& f : failures_) s << " " << f << ";";
    }
    for (const auto& n : notes_) s << " " << n << ";";
    return s.str();
  }

 private:
  void add(const std::string& what, double value, const char* op, double bound, bool ok) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s=%.3g (%s %.0e)", what.c_str(), value, op, bound);
    if (!ok) failures_.emplace_back(buf);
  }
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

SuiteConfig config(const std::string& name) { return load_config(kConfigs + "/" + name + ".json"); }

// Largest max over checks whose name starts with `prefix`.
double worst(const VerificationReport& r, const std::string& prefix) {
  double m = -1;
  for (const auto& c : r.checks())
    if (c.name.rfind(prefix, 0) == 0) m = std::max(m, c.max);
  if (m < 0) throw std::runtime_error("no check named " + prefix + "*");
  return m;
}

std::vector<Vec4> box(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Vec4> out(n);
  for (auto& p : out) p = Vec4(u(rng), u(rng), u(rng), u(rng));
  return out;
}

MetricField metric_from_text(const std::array<std::array<std::string, 4>, 4>& t) {
  std::array<std::array<ScalarField, 4>, 4> e;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) e[i][j] = ScalarField::from_expression(Expression::parse(t[i][j]));
  return MetricField::from_entries(e);
}

void c1(Criterion& c) {
  const VerificationReport r = run_suite(config("algebra"));
  for (const char* n : {"canonical:J1^2=-Id", "canonical:J2^2=Id", "canonical:J3^2=Id", "canonical:J1J2=-J2J1",
                        "canonical:J1J2=J3"})
    c.exact(n, r.max(n));
  c.below("associativity(1000)", r.max("associativity"), 1e-12);
}

void c2(Criterion& c) {
  SuiteConfig cfg = config("algebra");
  cfg.params["plus_forms"] = 100;
  const VerificationReport r = run_suite(cfg);
  c.below("h-g(J1.,.)/2", r.max("plus_form:h-g(J1.,.)/2"), 1e-12);
  c.below("compatibility", r.max("plus_form:compatibility"), 1e-12);
  c.exact("signature(2,2)_violations", r.max("plus_form:signature(2,2)"));
}

void c3(Criterion& c) {
  SuiteConfig cfg = config("algebra");
  cfg.params["metric_pairs"] = 20;
  cfg.params["probes"] = 50;
  const VerificationReport r = run_suite(cfg);
  c.below("probe_spread(rel)", r.max("conformal:probe_spread"), 1e-9);
  c.below("g-lambda*h", r.max("conformal:g-lambda*h"), 1e-9);
}

void c4(Criterion& c) {
  const VerificationReport r = run_suite(config("algebra"));
  c.exact("euclidean", r.max("averaged:euclidean"));
  c.exact("diag(1,-1,1,-1)", r.max("averaged:diag(1,-1,1,-1)"));
}

void c5(Criterion& c) {
  SuiteConfig cfg = config("pc_random");
  cfg.samples = 200;
  cfg.params["random_families"] = 10;
  cfg.params["falsifiers"] = true;
  const VerificationReport r = run_suite(cfg);
  c.below("N_max(10 families)", worst(r, "N_J"), 1e-8);
  c.above("N(a=x^3)", r.max("falsifier:a=x^3"), 1e-4);
  c.above("N(a=exp(x))", r.max("falsifier:a=exp(x)"), 1e-4);
}

void c6(Criterion& c) {
  SuiteConfig cfg = config("hk_random");
  cfg.params["random_families"] = 10;
  const VerificationReport r = run_suite(cfg);
  c.below("dO", worst(r, "dO"), 1e-9);
  c.below("ricci", r.max("ricci"), 1e-8);
  c.below("W-", r.max("weyl_minus"), 1e-8);
  c.below("nabla_dx", r.max("nabla_dx"), 1e-8);
  c.below("nabla_dy", r.max("nabla_dy"), 1e-8);
}

void c7(Criterion& c) {
  SuiteConfig cfg = config("splus");
  cfg.samples = 200;
  c.holds("Im t != 0", cfg.params["t"].is_array() && cfg.params["t"][1].get<double>() != 0.0);
  const VerificationReport r = run_suite(cfg);
  for (const char* n : {"d_theta1", "d_theta2", "d_Omega", "dO_l-theta^O_l", "-O1^2-O2^2", "O2^2-O3^2", "O1^O2",
                        "O1^O3", "O2^O3", "lee_form"})
    c.below(n, r.max(n), 1e-9);
  c.below("phi0..phi3 pullbacks", worst(r, "phi"), 1e-9);
}

void c8(Criterion& c) {
  SuiteConfig cfg = config("sminus");
  cfg.samples = 200;
  const VerificationReport r = run_suite(cfg);
  for (const char* n : {"sigma*theta1-theta1", "sigma*theta2+theta2", "sigma*O1+O1", "sigma*Omega+Omega"})
    c.below(n, r.max(n), 1e-10);
  c.below("|lambda+1|", r.max("conformal_factor+1"), 1e-9);
  c.below("J preserved", worst(r, "sigma*J"), 1e-9);
}

void c9(Criterion& c) {
  std::mt19937_64 rng(9);
  const auto pts = box(rng, 200);
  auto max_ma = [&](KamadaKind kind, const char* phi) {
    const Expression e = Expression::parse(phi, Chart::kComplex);
    double m = 0;
    for (const Vec4& p : pts) m = std::max(m, std::abs(monge_ampere_residual(kind, e, p)));
    return m;
  };
  const char* pull = "x1^4 + y1^3*x1";
  c.below("torus(phi=0)", max_ma(KamadaKind::kTorus, "0"), 1e-10);
  c.below("kodaira(phi=0)", max_ma(KamadaKind::kKodaira, "0"), 1e-10);
  c.below("torus(pullback)", max_ma(KamadaKind::kTorus, pull), 1e-10);
  c.below("kodaira(pullback)", max_ma(KamadaKind::kKodaira, pull), 1e-10);
  c.above("kodaira(x2^2)", max_ma(KamadaKind::kKodaira, "x2^2"), 1e-4);
  char buf[96];
  std::snprintf(buf, sizeof buf, "torus(x2^2)=%.3g [informational]", max_ma(KamadaKind::kTorus, "x2^2"));
  c.info(buf);

  const SuiteConfig good = config("kodaira");
  KodairaLattice L;
  const json& l = good.params["lattice"];
  auto cx = [](const json& v) { return v.is_array() ? Complex(v[0].get<double>(), v[1].get<double>()) : Complex(v.get<double>()); };
  for (int i = 0; i < 4; ++i) {
    L.a[i] = cx(l["a"][i]);
    L.b[i] = cx(l["b"][i]);
  }
  c.holds("lattice accepted", kodaira_lattice_check(L).pass());
  KodairaLattice bad = L;
  bad.b[0] = -bad.b[0];
  c.holds("lattice with b1 flipped rejected", !kodaira_lattice_check(bad).pass());
  bad = L;
  bad.a[3] = 2.0 * bad.a[3];
  c.holds("lattice with a4 doubled rejected", !kodaira_lattice_check(bad).pass());
}

void c10(Criterion& c) {
  auto run = [](const char* suite, const std::string& phi, bool flat) {
    SuiteConfig cfg = config(std::string(suite) == "kamada-torus" ? "torus_flat" : "kodaira");
    cfg.samples = 200;
    cfg.params["phi"] = phi;
    cfg.params["expect_flat"] = flat;
    return run_suite(cfg);
  };
  for (const char* suite : {"kamada-torus", "kamada-kodaira"}) {
    const std::string tag = std::string(suite).substr(7);
    const VerificationReport flat = run(suite, "0.75", true);
    c.below(tag + ":|R|(const)", flat.max("riemann"), 1e-8);
    const VerificationReport curved = run(suite, "x1^4 + y1^3*x1", false);
    c.above(tag + ":|R|(pullback)", curved.max("riemann"), 1e-4);
    c.below(tag + ":ricci(pullback)", curved.max("ricci"), 1e-8);
    c.below(tag + ":W-(pullback)", curved.max("weyl_minus"), 1e-8);
  }
}

void c11(Criterion& c) {
  std::mt19937_64 rng(11);

  double dd = 0;
  for (int k = 0; k < 40; ++k) {
    const int degree = 1 + k % 2;
    std::vector<std::pair<FormIndex, ScalarField>> coeffs;
    for (FormIndex m : form_basis(degree))
      coeffs.emplace_back(m, ScalarField::from_expression(Expression::parse(oracle::random_expr(rng, 3).text)));
    const FormField a = FormField::from_coefficients(degree, coeffs);
    for (const Vec4& p : box(rng, 3)) dd = std::max(dd, ext_d(ext_d(a)).at(p).max_abs());
  }
  c.below("d^2", dd, 1e-10);

  double star = 0;
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (int k = 0; k < 50; ++k) {
    Mat4 g = Vec4(1, 1, -1, -1).asDiagonal();
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) g(i, j) = g(j, i) = g(i, j) + u(rng);
    for (int s : {1, -1}) {
      const auto S = hodge_matrix_2forms(g, s);
      star = std::max(star, (S * S - Eigen::Matrix<double, 6, 6>::Identity()).cwiseAbs().maxCoeff());
    }
  }
  c.below("**-Id", star, 1e-10);

  double sym = 0, conf = 0, fd = 0;
  for (int k = 0; k < 5; ++k) {
    const oracle::RandomMetric m = oracle::random_metric(rng);
    const MetricField g = metric_from_text(m.text);
    auto hat_text = m.text;
    for (auto& row : hat_text)
      for (auto& s : row) s = "exp(2*(0.3*sin(x - z) + 0.2*y*t))*(" + s + ")";
    const MetricField gh = metric_from_text(hat_text);
    for (const Vec4& p : box(rng, 4)) {
      const CurvatureAtPoint a = curvature_at(g, 1, p), b = curvature_at(gh, 1, p);
      sym = std::max(sym, riemann_symmetry_residual(a));
      const double e2u = std::exp(2 * (0.3 * std::sin(p(0) - p(2)) + 0.2 * p(1) * p(3)));
      for (std::size_t i = 0; i < a.weyl.v.size(); ++i)
        conf = std::max(conf, std::abs(b.weyl.v[i] - e2u * a.weyl.v[i]) / std::max(1.0, std::abs(e2u * a.weyl.v[i])));
      const oracle::Curvature ref = oracle::fd_curvature(m.g, {p(0), p(1), p(2), p(3)}, 1e-4L);
      for (int l = 0; l < 4; ++l)
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j)
            for (int q = 0; q < 4; ++q) {
              const double r = static_cast<double>(ref.R[l][i](j, q));
              fd = std::max(fd, std::abs(a.riemann(l, i, j, q) - r) / std::max(1.0, std::abs(r)));
            }
    }
  }
  c.below("riemann_symmetries+bianchi", sym, 1e-8);
  c.below("weyl_conformal(rel)", conf, 1e-7);
  c.below("AD-vs-FD(rel)", fd, 1e-5);

  double roundtrip = 0;
  for (int k = 0; k < 20; ++k) {
    const WalkerData d{Expression::parse(oracle::random_expr(rng, 2).text), Expression::parse(oracle::random_expr(rng, 2).text),
                       Expression::parse(oracle::random_expr(rng, 2).text)};
    const AlmostPHStructure S = proper_structure(d);
    const auto pts = box(rng, 10);
    const AlmostPHStructure R = structure_from_forms(fundamental_forms(S), pts);
    for (const Vec4& p : pts) {
      roundtrip = std::max(roundtrip, (R.g.real_at(p) - S.g.real_at(p)).cwiseAbs().maxCoeff());
      for (int j = 0; j < 3; ++j)
        roundtrip = std::max(roundtrip, (R.J[j].real_at(p) - S.J[j].real_at(p)).cwiseAbs().maxCoeff());
    }
  }
  c.below("forms_roundtrip", roundtrip, 1e-9);
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Criterion&)>>> criteria = {
      {"C1 algebra: canonical triple exact, 1000 products associate", c1},
      {"C2 plus-form roundtrip: 100 forms, compatibility, signature (2,2)", c2},
      {"C3 conformal factor: 20 pairs x 50 probes", c3},
      {"C4 averaged form degenerates to zero", c4},
      {"C5 PC families integrable, falsifiers detected", c5},
      {"C6 HK families: closed, Ricci-flat, self-dual, parallel null fields", c6},
      {"C7 Inoue S+: structure equations and generator invariance", c7},
      {"C8 Inoue S-: sigma obstruction", c8},
      {"C9 Monge-Ampere residuals and lattice constraint", c9},
      {"C10 flatness dichotomy on torus and Kodaira", c10},
      {"C11 engine self-checks", c11},
  };
  int failed = 0;
  for (const auto& [title, fn] : criteria) {
    Criterion c;
    const auto start = std::chrono::steady_clock::now();
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.holds(std::string("exception: ") + e.what(), false);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= 10.0) c.holds("runtime " + std::to_string(secs) + "s >= 10s", false);
    std::printf("[%s] %s (%.2fs)%s\n", c.pass() ? "PASS" : "FAIL", title.c_str(), secs, c.summary().empty() ? "" : (" --" + c.summary()).c_str());
    if (!c.pass()) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
