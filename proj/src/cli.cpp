#include "qsu2/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qsu2/errors.hpp"
#include "qsu2/integral.hpp"
#include "qsu2/verify.hpp"
#include "qsu2/zeta.hpp"

namespace qsu2 {
namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kSchema = "qsu2/1";
constexpr int kDigits = 40;

struct RunConfig {
  std::string q = "1/2";
  Precision prec = kDefaultPrecision;
  std::string l_max = "20";
  double a = 2.0;
  double b = 1.0;
  std::string output = "json";
  std::uint64_t seed = 1;
};

struct Resolved {
  DeformationParameter dp;
  HalfInt l_max;
};

Resolved resolve(const RunConfig& c) {
  const DeformationParameter dp = DeformationParameter::parse(c.q);
  if (!(dp.q() > 0 && dp.q() < 1)) throw Error("q must lie in (0, 1), got " + c.q);
  if (c.prec < 64) throw Error("prec must be at least 64 bits");
  if (!std::isfinite(c.a) || !std::isfinite(c.b)) throw Error("a and b must be finite");
  const mpq_class twice = parse_rational(c.l_max) * 2;
  if (twice.get_den() != 1 || twice < 0 || twice > 4000) throw Error("lmax must be a half-integer in [0, 2000]");
  return {dp, HalfInt::from_twice(static_cast<int>(twice.get_num().get_si()))};
}

Json config_json(const RunConfig& c, const Resolved& r) {
  Json j;
  j["q"] = r.dp.to_string();
  j["prec"] = c.prec;
  j["l_max"] = r.l_max.to_string();
  j["a"] = c.a;
  j["b"] = c.b;
  j["seed"] = c.seed;
  return j;
}

Json complex_json(const BigComplex& z) {
  Json j;
  j["re"] = z.re().to_double();
  j["im"] = z.im().to_double();
  j["re_str"] = z.re().to_string(kDigits);
  j["im_str"] = z.im().to_string(kDigits);
  return j;
}

const char* order_name(PoleOrder o) {
  switch (o) {
    case PoleOrder::None: return "none";
    case PoleOrder::Simple: return "simple";
    case PoleOrder::Double: return "double";
  }
  return "none";
}

// ---- rendering ----

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void flatten(const Json& v, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
  if (v.is_object()) {
    for (const auto& [k, x] : v.items()) flatten(x, prefix.empty() ? k : prefix + "." + k, rows);
  } else if (v.is_array() && !v.empty() && (v.front().is_object() || v.front().is_array())) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], prefix + "." + std::to_string(i), rows);
  } else {
    rows.emplace_back(prefix, scalar_text(v));
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void render(const Json& report, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << report.dump(2) << "\n";
    return;
  }
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(report, "", rows);
  if (format == "csv") {
    out << "key,value\n";
    for (const auto& [k, v] : rows) out << csv_field(k) << "," << csv_field(v) << "\n";
    return;
  }
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.first.size());
  for (const auto& [k, v] : rows) out << std::left << std::setw(static_cast<int>(width) + 2) << k << v << "\n";
}

Json header(const std::string& command, const RunConfig& c, const Resolved& r) {
  Json j;
  j["schema"] = kSchema;
  j["command"] = command;
  j["config"] = config_json(c, r);
  return j;
}

// ---- commands ----

struct ZetaArgs {
  double z_re = 0.0;
  double z_im = 0.0;
  double eps = 1e-30;
};

int cmd_zeta(const RunConfig& c, const Resolved& r, const ZetaArgs& za, Json& rep) {
  const ZetaParams p(r.dp, c.a, c.b);
  p.validate();
  rep["z"] = {{"re", za.z_re}, {"im", za.z_im}};
  try {
    const ZetaValue v = zeta_closed(p, BigComplex(za.z_re, za.z_im, c.prec), za.eps, c.prec);
    rep["status"] = "ok";
    rep["value_re"] = v.value.re().to_double();
    rep["value_im"] = v.value.im().to_double();
    rep["value"] = complex_json(v.value);
    rep["k_truncation"] = v.k_truncation;
    rep["tail_bound"] = v.tail_bound.to_double();
    return kExitPass;
  } catch (const PoleHit& e) {
    rep["status"] = "pole_hit";
    Json pole;
    pole["location"] = e.location();
    pole["message"] = e.what();
    try {
      const ResidueReport s = pole_structure(p, e.location());
      pole["order"] = order_name(s.order);
      pole["contributing_k"] = s.contributing_k;
    } catch (const DoublePole&) {
      pole["order"] = "double";
    }
    rep["pole"] = pole;
    return kExitPole;
  }
}

struct ResidueArgs {
  std::string at = "n";
  bool gamma = false;
  std::string mode = "verify";
};

int cmd_residue(const RunConfig& c, const Resolved& r, const ResidueArgs& ra, Json& rep) {
  const ZetaParams p(r.dp, c.a, c.b);
  p.validate();
  const double n = p.spectral_dimension();
  double z0 = 0.0;
  if (ra.at == "n") {
    z0 = n;
  } else if (ra.at == "n-2") {
    z0 = n - 2.0;
  } else {
    std::size_t used = 0;
    try {
      z0 = std::stod(ra.at, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != ra.at.size() || !std::isfinite(z0)) throw Error("--at must be n, n-2 or a real number");
  }
  const ResidueMode mode = ra.mode == "fast" ? ResidueMode::Fast : ResidueMode::Verify;
  const ResidueReport res = residue(p, z0, mode, c.prec);
  rep["at"] = ra.at;
  rep["z0"] = z0;
  rep["order"] = order_name(res.order);
  rep["contributing_k"] = res.contributing_k;
  rep["residue_re"] = res.residue.re().to_double();
  rep["residue_im"] = res.residue.im().to_double();
  rep["residue"] = complex_json(res.residue);
  rep["error_bound"] = res.error_bound;
  if (res.numeric_residue) rep["numeric_residue"] = complex_json(*res.numeric_residue);
  rep["cross_check_ok"] = res.cross_check_ok;
  if (ra.gamma) rep["gamma_weighted"] = complex_json(residue_gamma_weighted(p, z0, ResidueMode::Fast, c.prec));
  return res.cross_check_ok ? kExitPass : kExitFailure;
}

int cmd_haar(const RunConfig& c, const Resolved& r, const std::string& expr, double tol, Json& rep) {
  const QAlgebra alg(r.dp);
  const AlgebraElement x = alg.parse(expr);
  const WeightSpec w{c.a, c.b};
  const HaarReport h = haar_equality_check(x, alg, w, tol, c.prec);
  rep["expr"] = expr;
  rep["normal_form"] = x.to_string();
  rep["phi_tilde"] = complex_json(h.phi_tilde);
  rep["haar"] = h.haar.to_double();
  rep["haar_exact"] = alg.haar_state(x).to_string();
  rep["diff"] = h.diff;
  rep["tolerance"] = tol;
  rep["pass"] = h.pass;
  Json terms = Json::array();
  for (const HaarTerm& t : h.terms)
    terms.push_back({{"monomial", t.mono.to_string()},
                     {"phi_tilde", t.phi_tilde.re().to_double()},
                     {"haar", t.haar.to_double()},
                     {"diff", t.diff},
                     {"pass", t.pass}});
  rep["terms"] = terms;
  Json sweep = Json::array();
  for (const auto& [a, v] : h.sweep) sweep.push_back({{"a", a}, {"phi_tilde", v.re().to_double()}});
  rep["a_sweep"] = sweep;
  rep["a_spread"] = h.sweep_spread;
  rep["a_independent"] = h.a_independent;
  return h.pass && h.a_independent ? kExitPass : kExitFailure;
}

int cmd_verify(const RunConfig& c, const Resolved& r, const std::string& suite, Json& rep) {
  VerifyOptions o;
  o.dp = r.dp;
  o.l_max = r.l_max;
  o.prec = c.prec;
  o.weight = {c.a, c.b};
  o.seed = c.seed;
  const std::vector<CheckResult> checks = run_suite(suite, o);
  int passed = 0;
  Json arr = Json::array();
  for (const CheckResult& ch : checks) {
    passed += ch.pass;
    arr.push_back({{"suite", ch.suite}, {"name", ch.name}, {"pass", ch.pass}, {"detail", ch.detail}});
  }
  const bool ok = passed == static_cast<int>(checks.size());
  rep["suite"] = suite;
  rep["passed"] = passed;
  rep["total"] = checks.size();
  rep["pass"] = ok;
  rep["checks"] = arr;
  return ok ? kExitPass : kExitFailure;
}

struct ScanArgs {
  double a_min = 1.25;
  double a_max = 4.0;
  int samples = 64;
};

int cmd_scan(const RunConfig& c, const Resolved& r, const ScanArgs& s, Json& rep) {
  const A2ScanReport scan = a2_criterion_scan(r.dp, s.a_min, s.a_max, s.samples, c.prec);
  rep["a_min"] = s.a_min;
  rep["a_max"] = s.a_max;
  rep["samples"] = scan.samples;
  rep["roots"] = scan.roots;
  Json br = Json::array();
  for (const auto& [lo, hi] : scan.brackets) br.push_back({lo, hi});
  rep["brackets"] = br;
  return kExitPass;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral and algebraic computations on the quantum group SU_q(2)", "qsu2"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value file; flags given on the command line win");

  RunConfig cfg;
  app.add_option("--q", cfg.q, "deformation parameter as an exact rational, e.g. 1/2")->capture_default_str();
  app.add_option("--prec", cfg.prec, "working precision in bits (>= 64)")->capture_default_str();
  app.add_option("--lmax", cfg.l_max, "lattice cutoff l_max, a half-integer")->capture_default_str();
  app.add_option("--a", cfg.a, "weight exponent a")->capture_default_str();
  app.add_option("--b", cfg.b, "weight exponent b")->capture_default_str();
  app.add_option("--output", cfg.output, "report format")
      ->check(CLI::IsMember({"json", "csv", "table"}))
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "seed for randomized checks")->capture_default_str();

  ZetaArgs za;
  auto* zeta = app.add_subcommand("zeta", "evaluate the weighted zeta function");
  zeta->add_option("--z", za.z_re, "real part of z")->required();
  zeta->add_option("--zi", za.z_im, "imaginary part of z")->capture_default_str();
  zeta->add_option("--eps", za.eps, "relative truncation target")->capture_default_str();

  ResidueArgs ra;
  auto* res = app.add_subcommand("residue", "residue of the zeta function");
  res->add_option("--at", ra.at, "n, n-2 or a real point")->capture_default_str();
  res->add_flag("--gamma", ra.gamma, "also report Gamma(z0) times the residue");
  res->add_option("--mode", ra.mode, "fast or verify")
      ->check(CLI::IsMember({"fast", "verify"}))
      ->capture_default_str();

  std::string expr = "1";
  double tol = 1e-9;
  auto* haar = app.add_subcommand("haar", "compare the normalized integral with the Haar state");
  haar->add_option("--expr", expr, "algebra element, e.g. \"b c - 2 a d\"")->capture_default_str();
  haar->add_option("--tol", tol, "tolerance")->capture_default_str();

  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  verify->add_option("--suite", suite, "algebra, spectral, zeta, integral or all")
      ->check(CLI::IsMember({"algebra", "spectral", "zeta", "integral", "all"}))
      ->capture_default_str();

  ScanArgs sa;
  auto* scan = app.add_subcommand("scan-a2", "roots in a of the residue at n - 2");
  scan->add_option("--a-min", sa.a_min)->capture_default_str();
  scan->add_option("--a-max", sa.a_max)->capture_default_str();
  scan->add_option("--samples", sa.samples)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::Error& e) {
    app.exit(e, out, err);
    return kExitInvalid;
  }

  std::string command;
  for (const auto* sub : {zeta, res, haar, verify, scan})
    if (sub->parsed()) command = sub->get_name();

  Json rep;
  int code = kExitPass;
  auto fail = [&](const char* type, const std::exception& e, int exit_code) {
    rep["status"] = "error";
    rep["error"] = {{"type", type}, {"message", e.what()}};
    err << "qsu2 " << command << ": " << e.what() << "\n";
    return exit_code;
  };
  try {
    const Resolved r = resolve(cfg);
    rep = header(command, cfg, r);
    try {
      if (command == "zeta") code = cmd_zeta(cfg, r, za, rep);
      else if (command == "residue") code = cmd_residue(cfg, r, ra, rep);
      else if (command == "haar") code = cmd_haar(cfg, r, expr, tol, rep);
      else if (command == "verify") code = cmd_verify(cfg, r, suite, rep);
      else code = cmd_scan(cfg, r, sa, rep);
      if (code == kExitPole) err << "qsu2 " << command << ": evaluation point is a pole\n";
    } catch (const PoleHit& e) {
      code = fail("PoleHit", e, kExitPole);
    } catch (const DivergentParameters& e) {
      code = fail("DivergentParameters", e, kExitInvalid);
    } catch (const DoublePole& e) {
      code = fail("DoublePole", e, kExitInvalid);
    } catch (const GammaPole& e) {
      code = fail("GammaPole", e, kExitInvalid);
    } catch (const qsu2::ParseError& e) {
      code = fail("ParseError", e, kExitInvalid);
    } catch (const Error& e) {
      code = fail("Error", e, kExitInvalid);
    }
  } catch (const std::exception& e) {
    rep = Json{{"schema", kSchema}, {"command", command}};
    code = fail("InvalidConfig", e, kExitInvalid);
  }
  rep["exit_code"] = code;
  render(rep, cfg.output, out);
  return code;
}

}  // namespace qsu2
