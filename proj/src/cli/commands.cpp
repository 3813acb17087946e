// Copyright 2026 The mopkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <spdlog/sinks/null_sink.h>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "mopkit/cli.hpp"
#include "mopkit/commutant.hpp"
#include "mopkit/cp2_model.hpp"
#include "mopkit/diffop.hpp"
#include "mopkit/hyper.hpp"
#include "mopkit/presequence.hpp"
#include "mopkit/quadrature.hpp"
#include "mopkit/weights.hpp"
#include "report.hpp"

namespace mopkit::cli {

namespace {

// ---- logging ----------------------------------------------------------------

std::shared_ptr<spdlog::logger>& log_ptr() {
  static std::shared_ptr<spdlog::logger> logger =
      std::make_shared<spdlog::logger>("mopkit", std::make_shared<spdlog::sinks::null_sink_mt>());
  return logger;
}

spdlog::logger& log() { return *log_ptr(); }

void configure_logging(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err, true);
  sink->set_pattern("mopkit [%l] %v");
  auto logger = std::make_shared<spdlog::logger>("mopkit", sink);
  logger->set_level(spdlog::level::warn);
  if (const char* env = std::getenv("MOPKIT_LOG")) {
    static const std::map<std::string, spdlog::level::level_enum> levels{
        {"trace", spdlog::level::trace}, {"debug", spdlog::level::debug},       {"info", spdlog::level::info},
        {"warn", spdlog::level::warn},   {"warning", spdlog::level::warn},      {"error", spdlog::level::err},
        {"critical", spdlog::level::critical}, {"off", spdlog::level::off}};
    const auto it = levels.find(env);
    if (it != levels.end()) {
      logger->set_level(it->second);
    } else {
      logger->warn("ignoring unknown MOPKIT_LOG level '{}'", env);
    }
  }
  log_ptr() = logger;
}

// ---- models -----------------------------------------------------------------

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

/// Monic Legendre P_n(x) from the standard library's normalization.
Matrix legendre_monic(int n, double x) {
  double lc = 1.0;  // (2n)! / (2^n (n!)^2)
  for (int k = 1; k <= n; ++k) lc *= (2.0 * k - 1.0) / k;
  return scalar(std::legendre(static_cast<unsigned>(n), x) / lc);
}

struct Model {
  std::string id;
  PreSequence ps;
  std::function<Matrix(int, double)> f;  // F_n(x), independent of the recursion
  std::function<std::optional<MatrixPolynomial>(int)> f_polynomial;
  MatrixWeight wprime;
  int w_degree = 0;       // polynomial degree of W
  int wprime_degree = 0;  // polynomial degree of W'
  SampledRightOperator d;
  RightDiffOperator d_tilde;
  std::optional<HypergeometricConstants> tilde;
  std::function<Matrix(int)> lambda;
  bool is_cp2 = false;
  int n = 0;
};

MatrixPolynomial scalar_poly(std::vector<double> c) {
  std::vector<Matrix> m;
  for (const double v : c) m.push_back(scalar(v));
  return MatrixPolynomial(std::move(m));
}

Model make_model(const std::string& id, int n) {
  if (id == "cp2") {
    const auto k = cp2::tilde_constants(n);
    return Model{
        .id = id,
        .ps = cp2::make_presequence(n),
        .f = [n](int w, double x) { return cp2::F({n, w}, x); },
        .f_polynomial = [n](int w) -> std::optional<MatrixPolynomial> { return cp2::F_polynomial({n, w}); },
        .wprime = cp2::make_weight_Wprime(n),
        .w_degree = n + 2,
        .wprime_degree = n + 3,
        .d = cp2::operator_D(n),
        .d_tilde = hyper_operator(k),
        .tilde = k,
        .lambda = [n](int w) { return cp2::lambda_w(n, w).Lambda; },
        .is_cp2 = true,
        .n = n,
    };
  }
  if (id == "legendre") {
    const MatrixWeight unit(1, -1.0, 1.0, [](double) { return scalar(1.0); }, 0);
    PreSequence ps{
        .size = 1,
        .f0 = [](double) { return scalar(1.0); },
        .f0_polynomial = MatrixPolynomial::identity(1),
        .coefficients =
            [](int k) {
              const double a = k == 0 ? 0.0 : k * k / (4.0 * k * k - 1.0);
              return ThreeTermCoefficients{scalar(a), scalar(0.0), scalar(1.0)};
            },
        .weight = unit,
        .spectral_map = {},
    };
    // (1 - x^2) y'' - 2x y'
    const RightDiffOperator op({MatrixPolynomial::zero(1), scalar_poly({0.0, -2.0}), scalar_poly({1.0, 0.0, -1.0})});
    SampledRightOperator sampled;
    for (const auto& c : op.coeffs()) sampled.coeffs.push_back([c](double x) { return c(x); });
    return Model{
        .id = id,
        .ps = ps,
        .f = legendre_monic,
        .f_polynomial = [](int) -> std::optional<MatrixPolynomial> { return std::nullopt; },
        .wprime = unit,
        .w_degree = 0,
        .wprime_degree = 0,
        .d = sampled,
        .d_tilde = op,
        .tilde = std::nullopt,
        .lambda = [](int w) { return scalar(-static_cast<double>(w) * (w + 1)); },
        .is_cp2 = false,
        .n = n,
    };
  }
  throw UsageError("unknown model '" + id + "'");
}

int default_nodes(const Model& m, int wmax) {
  if (m.is_cp2) return cp2::default_nodes(m.n, wmax);
  return wmax + 2;
}

/// Nodes needed for the F-level and Q-level Gram matrices to be exact.
int required_nodes(const Model& m, int wmax) {
  const int f_degree = m.is_cp2 ? 2 * (wmax + 1) + m.w_degree : 0;
  return nodes_for_degree(std::max(f_degree, 2 * wmax + m.wprime_degree));
}

// ---- verification -----------------------------------------------------------

struct Context {
  const Model& model;
  int wmax;
  double tol;
  double gram_tol;
  QuadratureRule rule;
  std::vector<MatrixPolynomial> qs;
  std::vector<double> xs;        // residual samples over the interval
  std::vector<double> xs_inner;  // samples kept 5% away from the endpoints
};

struct CheckResult {
  std::string name;
  std::string status = "pass";
  std::optional<double> residual;
  std::optional<double> tolerance;
  Json details = Json::object();
};

CheckResult named(std::string name, std::string status = "pass") {
  CheckResult r;
  r.name = std::move(name);
  r.status = std::move(status);
  return r;
}

struct Note {
  std::string id;
  std::string message;
  std::optional<double> value;
};

Json vector_json(const std::vector<double>& v) {
  Json j = Json::array();
  for (const double x : v) j.push_back(x);
  return j;
}

CheckResult finish(CheckResult r, double residual, double tolerance, bool extra_ok = true) {
  r.residual = residual;
  r.tolerance = tolerance;
  r.status = residual <= tolerance && extra_ok ? "pass" : "fail";
  return r;
}

std::vector<MatrixPolynomial> f_polynomials(const Context& c) {
  std::vector<MatrixPolynomial> fs;
  for (int w = 0; w <= c.wmax; ++w) {
    auto p = c.model.f_polynomial(w);
    // without a separate polynomial form, F_n = Q_n F_0
    fs.push_back(p ? *p : poly_mul(c.qs[static_cast<std::size_t>(w)], *c.model.ps.f0_polynomial));
  }
  return fs;
}

std::vector<Matrix> lambdas(const Context& c) {
  std::vector<Matrix> out;
  for (int w = 0; w <= c.wmax; ++w) out.push_back(c.model.lambda(w));
  return out;
}

CheckResult check_gram(const Context& c, std::vector<Note>&) {
  CheckResult r = named("gram");
  const GramMatrix gf = gram_matrix(f_polynomials(c), c.model.ps.weight, c.rule);
  const GramMatrix gq = gram_matrix(c.qs, c.model.wprime, c.rule);
  const double f_off = gf.max_relative_offdiagonal();
  const double q_off = gq.max_relative_offdiagonal();
  double diag = 0.0;
  for (int i = 0; i <= c.wmax; ++i) {
    const double scale = std::max(gf(i, i).norm(), gq(i, i).norm());
    diag = std::max(diag, (gf(i, i) - gq(i, i)).norm() / scale);
  }
  r.details["f_level_max_offdiagonal"] = f_off;
  r.details["q_level_max_offdiagonal"] = q_off;
  r.details["diagonal_positive_definite"] = gf.diagonal_positive_definite() && gq.diagonal_positive_definite();
  r.details["f_q_diagonal_mismatch"] = diag;
  r.details["nodes"] = c.rule.size();
  return finish(std::move(r), std::max(f_off, q_off), c.gram_tol);
}

CheckResult check_factorization(const Context& c, std::vector<Note>& notes) {
  CheckResult r = named("factorization");
  const auto rep = verify_factorization(c.model.ps, c.qs, c.model.f, c.xs, c.tol);
  bool degrees = true;
  for (int w = 0; w <= c.wmax; ++w) {
    const auto& q = c.qs[static_cast<std::size_t>(w)];
    degrees = degrees && q.degree() == w && leading_coefficient(q).nonsingular;
  }
  r.details["residuals"] = vector_json(rep.residuals);
  r.details["degree_law"] = degrees;

  if (c.model.is_cp2) {
    double ratio_dev = 0.0;
    double corrected = 0.0;
    for (int w = 0; w <= c.wmax; ++w) {
      for (const double x : c.xs) {
        const Matrix q = c.qs[static_cast<std::size_t>(w)](x);
        const cp2::Params p{c.model.n, w};
        const Matrix closed = cp2::closed_form_Q(p, x);
        corrected = std::max(corrected, (closed - q).norm() / q.norm());
        const Complex printed = cp2::closed_form_Q(p, x, cp2::Formula::printed)(1, 1);
        if (std::abs(q(1, 1)) > 1e-8) ratio_dev = std::max(ratio_dev, std::abs(printed / q(1, 1) - 3.0));
      }
    }
    r.details["closed_form_residual"] = corrected;
    notes.push_back({"q22_printed",
                     "printed closed-form Q_22 is 3 times the computed entry; value is max |printed/computed - 3|",
                     ratio_dev});
  }
  return finish(std::move(r), rep.max_residual, c.tol, degrees);
}

CheckResult check_recursion_relation(const Context& c, std::vector<Note>&) {
  CheckResult r = named("recursion");
  const auto rep = check_recursion(c.model.ps.coefficients, c.model.f, c.model.ps.spectral_map, c.wmax, c.xs, c.tol);
  r.details["residuals"] = vector_json(rep.residuals);
  Json offenders = Json::array();
  for (const auto& o : rep.offenders) {
    Json j = Json::object();
    j["index"] = o.index;
    j["coefficient"] = std::string(1, o.coefficient);
    j["row"] = o.row + 1;
    j["col"] = o.col + 1;
    j["correction"] = complex_json(o.correction);
    j["explained"] = o.explained;
    offenders.push_back(std::move(j));
  }
  r.details["offenders"] = std::move(offenders);
  return finish(std::move(r), rep.max_residual, c.tol);
}

CheckResult check_eigen(const Context& c, std::vector<Note>&) {
  CheckResult r = named("eigen");
  const auto ls = lambdas(c);
  const auto q_side = check_eigenfunction(c.model.d_tilde, c.qs, ls, c.xs, c.tol);
  const double f_tol = 10.0 * c.tol;
  const auto f_side = check_eigenfunction_sampled(c.model.d, f_polynomials(c), ls, c.xs_inner, f_tol);
  Json q = Json::object();
  q["residuals"] = vector_json(q_side.residuals);
  q["tolerance"] = c.tol;
  Json f = Json::object();
  f["residuals"] = vector_json(f_side.residuals);
  f["max_residual"] = f_side.max_residual;
  f["tolerance"] = f_tol;
  r.details["q_side"] = std::move(q);
  r.details["f_side"] = std::move(f);
  return finish(std::move(r), q_side.max_residual, c.tol, f_side.pass);
}

CheckResult skipped(const std::string& name, const Model& m) {
  CheckResult r = named(name, "skipped");
  r.details["reason"] = "not defined for model " + m.id;
  return r;
}

CheckResult check_constants(const Context& c, std::vector<Note>&) {
  if (!c.model.is_cp2) return skipped("constants", c.model);
  CheckResult r = named("constants");
  const int n = c.model.n;
  const auto a1 = cp2::operator_D_first_order(n);
  const auto ex = extract_hyper_constants(polynomial_jet(*c.model.ps.f0_polynomial),
                                          [a1](double x) { return a1(x); }, cp2::operator_D_zeroth_order(n),
                                          c.xs_inner);
  const auto& k = *c.model.tilde;
  const auto& e = ex.constants;
  const double entry = std::max({(e.C - k.C).cwiseAbs().maxCoeff(), (e.U - k.U).cwiseAbs().maxCoeff(),
                                 (e.V - k.V).cwiseAbs().maxCoeff()});
  r.details["C"] = matrix_json(e.C);
  r.details["U"] = matrix_json(e.U);
  r.details["V"] = matrix_json(e.V);
  r.details["max_entry_deviation"] = entry;
  r.details["affine_residual"] = ex.affine_residual;
  r.details["constancy_residual"] = ex.constancy_residual;
  return finish(std::move(r), std::max({entry, ex.affine_residual, ex.constancy_residual}), c.tol);
}

CheckResult check_commutant(const Context& c, std::vector<Note>&) {
  CheckResult r = named("commutant");
  const Index size = c.model.ps.size;
  const int count = static_cast<int>(2 * (2 * size * size + 1));
  const auto& w = c.model.wprime;
  const auto basis = commuting_space(w, interior_samples(w.lower(), w.upper(), count));
  Json mats = Json::array();
  for (const auto& t : basis.basis) mats.push_back(matrix_json(t));
  r.details["dimension"] = basis.dimension;
  r.details["contains_identity"] = basis.contains_identity;
  r.details["irreducible"] = basis.dimension == 1;
  r.details["basis"] = std::move(mats);
  return finish(std::move(r), basis.max_residual, c.tol, basis.dimension == 1 && basis.contains_identity);
}

CheckResult check_hyper_rows(const Context& c, std::vector<Note>& notes) {
  if (!c.model.is_cp2) return skipped("hyper-rows", c.model);
  CheckResult r = named("hyper-rows");
  const int n = c.model.n;
  const auto& k = *c.model.tilde;
  const Matrix ct = k.C.transpose();
  const Matrix ut = k.U.transpose();
  double worst = 0.0;
  double printed_dev = 0.0;
  double shifted_dev = 0.0;
  Json per_w = Json::array();
  for (int w = 0; w <= c.wmax; ++w) {
    const auto& q = c.qs[static_cast<std::size_t>(w)];
    const auto ev = cp2::lambda_w(n, w);
    const Matrix q0 = q(0.0);
    double row_res = 0.0;
    double ode_res = 0.0;
    for (int j = 0; j < 2; ++j) {
      const double lambda = j == 0 ? ev.lambda1 : ev.lambda2;
      const Matrix vs = k.V.transpose() + lambda * Matrix::Identity(2, 2);
      const auto series = matrix_2H1_series(ut, vs, ct, q0.row(j).transpose());
      ode_res = std::max(ode_res, hyper_ode_residual(series, ut, vs, ct, c.xs));
      for (const double x : c.xs) {
        const Vector row = q(x).row(j).transpose();
        row_res = std::max(row_res, (evaluate_2H1(series, x) - row).norm() / row.norm());
      }
    }
    const Matrix printed = cp2::printed_initial_rows(n, w);
    printed_dev = std::max(printed_dev, (printed - q0).norm() / q0.norm());
    shifted_dev = std::max(shifted_dev, (printed + Matrix::Identity(2, 2) - q0).norm() / q0.norm());
    worst = std::max({worst, row_res, ode_res});
    Json j = Json::object();
    j["w"] = w;
    j["row_residual"] = row_res;
    j["ode_residual"] = ode_res;
    j["initial_rows"] = matrix_json(q0);
    per_w.push_back(std::move(j));
  }
  r.details["per_w"] = std::move(per_w);
  notes.push_back({"initial_vectors_printed",
                   "printed initial vectors differ from the rows of Q_w(0); value is the max relative deviation",
                   printed_dev});
  notes.push_back({"initial_vectors_shifted",
                   "printed initial vectors plus the identity rows reproduce Q_w(0); value is the max relative deviation",
                   shifted_dev});
  return finish(std::move(r), worst, c.tol);
}

CheckResult check_leading(const Context& c, std::vector<Note>& notes) {
  if (!c.model.is_cp2) return skipped("leading", c.model);
  CheckResult r = named("leading");
  const int n = c.model.n;
  double worst = 0.0;
  bool structure = true;
  std::array<double, 4> printed_dev{};  // per LC(Q) entry, row-major
  for (int w = 0; w <= c.wmax; ++w) {
    const auto lf = leading_coefficient(*c.model.f_polynomial(w));
    const auto lq = leading_coefficient(c.qs[static_cast<std::size_t>(w)]);
    const auto formula = cp2::leading_coeffs(n, w);
    const auto printed = cp2::leading_coeffs(n, w, cp2::Formula::printed);
    structure = structure && lf.degree == w + 1 && lq.degree == w && lq.nonsingular &&
                lf.value(0, 0) == Complex(0.0) && lf.value(0, 1) == Complex(0.0) && lf.value(1, 0) == Complex(0.0);
    worst = std::max(worst, std::abs(lf.value(1, 1) - formula.F(1, 1)) / std::abs(formula.F(1, 1)));
    const double scale = lq.value.cwiseAbs().maxCoeff();
    worst = std::max(worst, (lq.value - formula.Q).cwiseAbs().maxCoeff() / scale);
    for (int e = 0; e < 4; ++e) {
      const Complex got = lq.value(e / 2, e % 2);
      const Complex want = printed.Q(e / 2, e % 2);
      const double dev = std::abs(got - want) / std::max(std::abs(got), 1e-300 * scale);
      if (std::abs(got) > 0.0 || std::abs(want) > 0.0) printed_dev[static_cast<std::size_t>(e)] =
          std::max(printed_dev[static_cast<std::size_t>(e)], dev);
    }
  }
  r.details["structure"] = structure;
  r.details["compared_against"] = "corrected LC(Q) formula";
  static const char* entries[] = {"11", "12", "21", "22"};
  for (int e = 0; e < 4; ++e) {
    notes.push_back({std::string("lc_q") + entries[e] + "_printed",
                     std::string("relative deviation of computed LC(Q_w) entry (") + entries[e][0] + "," +
                         entries[e][1] + ") from the printed formula",
                     printed_dev[static_cast<std::size_t>(e)]});
  }
  return finish(std::move(r), worst, c.tol, structure);
}

using CheckFn = CheckResult (*)(const Context&, std::vector<Note>&);

CheckFn check_function(const std::string& name) {
  static const std::map<std::string, CheckFn> table{
      {"gram", check_gram},           {"factorization", check_factorization},
      {"recursion", check_recursion_relation}, {"eigen", check_eigen},
      {"constants", check_constants}, {"commutant", check_commutant},
      {"hyper-rows", check_hyper_rows}, {"leading", check_leading}};
  return table.at(name);
}

const char* command_name(Command c) {
  switch (c) {
    case Command::generate: return "generate";
    case Command::verify: return "verify";
    case Command::moments: return "moments";
  }
  return "";
}

Json params_json(const Options& o, int nodes, double gram_tol) {
  Json p = Json::object();
  p["command"] = command_name(o.command);
  p["n"] = o.n;
  p["wmax"] = o.wmax;
  p["nodes"] = nodes;
  if (o.command == Command::verify) {
    p["tol"] = o.tol;
    p["gram_tol"] = gram_tol;
    Json checks = Json::array();
    for (const auto& c : o.checks) checks.push_back(c);
    p["checks"] = std::move(checks);
  }
  return p;
}

Json envelope(const Options& o, int nodes, double gram_tol, Json payload) {
  Json j = Json::object();
  j["schema_version"] = "1";
  j["model"] = o.model;
  j["params"] = params_json(o, nodes, gram_tol);
  j["payload"] = std::move(payload);
  return j;
}

int run_verify(const Options& o, const Model& m, int nodes, double gram_tol, std::ostream& out) {
  Context c{
      .model = m,
      .wmax = o.wmax,
      .tol = o.tol,
      .gram_tol = gram_tol,
      .rule = gauss_legendre_rule(nodes, m.ps.weight.lower(), m.ps.weight.upper()),
      .qs = build_Q(m.ps, o.wmax),
      .xs = {},
      .xs_inner = {},
  };
  const double a = m.ps.weight.lower();
  const double b = m.ps.weight.upper();
  c.xs = interior_samples(a, b, 20);
  c.xs_inner = interior_samples(a + 0.05 * (b - a), b - 0.05 * (b - a), 20);

  const auto checks = o.checks.empty() ? all_checks() : o.checks;
  std::vector<CheckResult> results;
  std::vector<Note> notes;
  bool all_pass = true;
  for (const auto& name : checks) {
    log().info("running check {}", name);
    CheckResult r;
    try {
      r = check_function(name)(c, notes);
    } catch (const std::exception& e) {
      r = named(name, "fail");
      r.details["error"] = e.what();
      log().warn("check {} raised: {}", name, e.what());
    }
    if (r.status == "fail") {
      all_pass = false;
      log().warn("check {} failed (residual {})", name, r.residual ? format_double(*r.residual) : "n/a");
    }
    results.push_back(std::move(r));
  }

  if (o.format == Format::json) {
    Json list = Json::array();
    for (const auto& r : results) {
      Json j = Json::object();
      j["name"] = r.name;
      j["status"] = r.status;
      j["residual"] = optional_number(r.residual);
      j["tolerance"] = optional_number(r.tolerance);
      j["details"] = r.details;
      list.push_back(std::move(j));
    }
    Json ns = Json::array();
    for (const auto& n : notes) {
      Json j = Json::object();
      j["id"] = n.id;
      j["message"] = n.message;
      j["value"] = optional_number(n.value);
      ns.push_back(std::move(j));
    }
    Json payload = Json::object();
    payload["pass"] = all_pass;
    payload["checks"] = std::move(list);
    payload["notes"] = std::move(ns);
    write_json(envelope(o, nodes, gram_tol, std::move(payload)), out);
  } else {
    const auto num = [](std::optional<double> v) { return v ? format_double(*v) : std::string(); };
    write_csv_row(out, {"kind", "name", "status", "residual", "tolerance", "message"});
    for (const auto& r : results) write_csv_row(out, {"check", r.name, r.status, num(r.residual), num(r.tolerance), ""});
    for (const auto& n : notes) write_csv_row(out, {"note", n.id, "", num(n.value), "", n.message});
  }
  return all_pass ? kExitPass : kExitFail;
}

int run_generate(const Options& o, const Model& m, int nodes, std::ostream& out) {
  const auto qs = build_Q(m.ps, o.wmax);
  if (o.format == Format::json) {
    Json polys = Json::array();
    for (std::size_t w = 0; w < qs.size(); ++w) {
      Json j = Json::object();
      j["w"] = w;
      j["degree"] = qs[w].degree();
      Json coeffs = Json::array();
      for (const auto& c : qs[w].coeffs()) coeffs.push_back(matrix_json(c));
      j["coefficients"] = std::move(coeffs);
      polys.push_back(std::move(j));
    }
    Json payload = Json::object();
    payload["variable"] = "x";
    payload["polynomials"] = std::move(polys);
    write_json(envelope(o, nodes, 0.0, std::move(payload)), out);
  } else {
    write_csv_row(out, {"w", "power", "row", "col", "re", "im"});
    for (std::size_t w = 0; w < qs.size(); ++w) {
      for (int k = 0; k <= qs[w].degree(); ++k) {
        const Matrix& c = qs[w].coeff(k);
        for (Index i = 0; i < c.rows(); ++i)
          for (Index j = 0; j < c.cols(); ++j)
            write_csv_row(out, {std::to_string(w), std::to_string(k), std::to_string(i), std::to_string(j),
                                format_double(c(i, j).real()), format_double(c(i, j).imag())});
      }
    }
  }
  return kExitPass;
}

int run_moments(const Options& o, const Model& m, int nodes, std::ostream& out) {
  const int order = o.wmax;
  const auto& w = m.ps.weight;
  const auto rule = gauss_legendre_rule(nodes, w.lower(), w.upper());
  std::vector<std::pair<std::string, const MatrixWeight*>> weights{{"W", &w}, {"Wprime", &m.wprime}};
  std::vector<std::vector<Matrix>> tables;
  double defect = 0.0;
  bool finite = true;
  for (const auto& entry : weights) {
    std::vector<Matrix> t;
    for (int k = 0; k <= order; ++k) {
      Matrix mk = moment(*entry.second, k, rule);
      defect = std::max(defect, (mk - mk.adjoint()).norm() / std::max(mk.norm(), 1e-300));
      finite = finite && mk.allFinite();
      t.push_back(std::move(mk));
    }
    tables.push_back(std::move(t));
  }
  if (defect > 1e-12) log().warn("moment Hermitian defect {}", format_double(defect));

  if (o.format == Format::json) {
    Json payload = Json::object();
    payload["order"] = order;
    payload["max_hermitian_defect"] = defect;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      Json arr = Json::array();
      for (int k = 0; k <= order; ++k) {
        Json j = Json::object();
        j["k"] = k;
        j["matrix"] = matrix_json(tables[i][static_cast<std::size_t>(k)]);
        arr.push_back(std::move(j));
      }
      payload[weights[i].first] = std::move(arr);
    }
    write_json(envelope(o, nodes, 0.0, std::move(payload)), out);
  } else {
    write_csv_row(out, {"weight", "k", "row", "col", "re", "im"});
    for (std::size_t i = 0; i < weights.size(); ++i) {
      for (int k = 0; k <= order; ++k) {
        const Matrix& mk = tables[i][static_cast<std::size_t>(k)];
        for (Index r = 0; r < mk.rows(); ++r)
          for (Index c = 0; c < mk.cols(); ++c)
            write_csv_row(out, {weights[i].first, std::to_string(k), std::to_string(r), std::to_string(c),
                                format_double(mk(r, c).real()), format_double(mk(r, c).imag())});
      }
    }
  }
  return finite ? kExitPass : kExitFail;
}

}  // namespace

const std::vector<std::string>& all_checks() {
  static const std::vector<std::string> checks{"gram",      "factorization", "recursion",  "eigen",
                                               "constants", "commutant",     "hyper-rows", "leading"};
  return checks;
}

const std::vector<std::string>& registered_models() {
  static const std::vector<std::string> models{"cp2", "legendre"};
  return models;
}

std::vector<std::string> parse_checks(const std::string& list) {
  if (list == "all") return all_checks();
  std::vector<std::string> picked;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (std::find(all_checks().begin(), all_checks().end(), item) == all_checks().end()) {
      throw UsageError("unknown check '" + item + "'");
    }
    if (std::find(picked.begin(), picked.end(), item) == picked.end()) picked.push_back(item);
  }
  if (picked.empty()) throw UsageError("empty --checks list");
  // report in the canonical order
  std::vector<std::string> ordered;
  for (const auto& c : all_checks()) {
    if (std::find(picked.begin(), picked.end(), c) != picked.end()) ordered.push_back(c);
  }
  return ordered;
}

void validate(const Options& o) {
  const auto& models = registered_models();
  if (std::find(models.begin(), models.end(), o.model) == models.end()) {
    throw UsageError("unknown model '" + o.model + "'");
  }
  if (o.n < 0) throw UsageError("--n must be nonnegative");
  if (o.model == "legendre" && o.n != 0) throw UsageError("model legendre takes --n 0");
  if (o.wmax < 0) throw UsageError("--wmax must be nonnegative");
  if (o.nodes && *o.nodes < 1) throw UsageError("--nodes must be positive");
  if (!(std::isfinite(o.tol) && o.tol > 0.0)) throw UsageError("--tol must be a positive number");
  if (o.gram_tol && !(std::isfinite(*o.gram_tol) && *o.gram_tol > 0.0)) {
    throw UsageError("--gram-tol must be a positive number");
  }
  for (const auto& c : o.checks) {
    if (std::find(all_checks().begin(), all_checks().end(), c) == all_checks().end()) {
      throw UsageError("unknown check '" + c + "'");
    }
  }
}

int run(const Options& o, std::ostream& out) {
  validate(o);
  const Model model = make_model(o.model, o.n);
  const int nodes = o.nodes.value_or(o.command == Command::moments
                                         ? std::max(default_nodes(model, 0),
                                                    nodes_for_degree(o.wmax + model.wprime_degree))
                                         : default_nodes(model, o.wmax));
  const double gram_tol = o.gram_tol.value_or(o.tol / 10.0);
  log().debug("model {} n={} wmax={} nodes={}", o.model, o.n, o.wmax, nodes);
  switch (o.command) {
    case Command::generate:
      return run_generate(o, model, nodes, out);
    case Command::verify:
      if (nodes < required_nodes(model, o.wmax)) {
        log().warn("{} nodes do not integrate the Gram integrands exactly (need {})", nodes,
                   required_nodes(model, o.wmax));
      }
      return run_verify(o, model, nodes, gram_tol, out);
    case Command::moments:
      return run_moments(o, model, nodes, out);
  }
  return kExitUsage;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  configure_logging(err);
  CLI::App app{"mopkit: matrix orthogonal polynomial toolkit"};
  app.name("mopkit");
  std::string command;
  std::string model;
  Options o;
  std::string checks = "all";
  std::string format = "json";
  app.add_option("command", command, "generate | verify | moments")
      ->required()
      ->check(CLI::IsMember({"generate", "verify", "moments"}));
  app.add_option("model", model, "model id (cp2, legendre)")->required();
  app.add_option("--n", o.n, "model parameter")->required();
  app.add_option("--wmax", o.wmax, "highest degree (moments: highest moment order)")->required();
  app.add_option("--nodes", o.nodes, "Gauss-Legendre node count");
  app.add_option("--tol", o.tol, "residual tolerance");
  app.add_option("--gram-tol", o.gram_tol, "Gram off-diagonal tolerance (default tol/10)");
  app.add_option("--checks", checks, "comma-separated checks or 'all'");
  app.add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", o.out, "write the payload to a file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "mopkit: " << e.what() << "\n" << "Run 'mopkit --help' for usage.\n";
    return kExitUsage;
  }

  try {
    o.command = command == "generate" ? Command::generate : command == "verify" ? Command::verify : Command::moments;
    o.model = model;
    o.format = format == "csv" ? Format::csv : Format::json;
    o.checks = parse_checks(checks);
    validate(o);

    std::ostringstream buffer;
    const int code = run(o, buffer);
    if (o.out) {
      std::ofstream file(*o.out, std::ios::binary);
      if (!file) throw UsageError("cannot open output file '" + *o.out + "'");
      file << buffer.str();
      if (!file) throw UsageError("failed writing '" + *o.out + "'");
    } else {
      out << buffer.str();
    }
    return code;
  } catch (const UsageError& e) {
    err << "mopkit: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "mopkit: error: " << e.what() << "\n";
    return kExitFail;
  }
}

}  // namespace mopkit::cli
