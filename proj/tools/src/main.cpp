// qtqme: command line front end.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qtqme/conditioning.hpp"
#include "qtqme/errors.hpp"
#include "qtqme/fixedpoint.hpp"
#include "qtqme/models.hpp"
#include "qtqme/newton.hpp"
#include "qtqme/symbolsolve.hpp"

namespace fs = std::filesystem;
using namespace qtqme;

namespace {

struct Options {
  std::string model_file;
  std::string family;
  int case_number = 0;
  std::vector<std::string> params;
  double eps = 0;  // 0: command default
  int max_iter = 5000;
  std::string start = "zero";
  std::string variant = "f3";
  std::string mode = "whole";
  std::uint64_t seed = 1;
  std::string out_dir;
  std::string csv;
  std::string dump;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ModelSpec model_spec(const Options& o) {
  ModelSpec spec;
  if (!o.model_file.empty()) {
    if (!o.family.empty() || o.case_number || !o.params.empty())
      throw Error(ErrorCode::InvalidParameter, "--model excludes --family, --case and --param");
    std::ifstream in(o.model_file);
    if (!in) throw Error(ErrorCode::InvalidParameter, "cannot open model file " + o.model_file);
    return parse_model_spec(in);
  }
  if (o.family.empty()) throw Error(ErrorCode::InvalidParameter, "give --model or --family");
  std::ostringstream text;
  text << "family=" << o.family << '\n';
  if (o.case_number) text << "case=" << o.case_number << '\n';
  for (const auto& p : o.params) {
    if (p.find('=') == std::string::npos)
      throw Error(ErrorCode::InvalidParameter, "--param expects key=value, got '" + p + "'");
    text << p << '\n';
  }
  std::istringstream in(text.str());
  return parse_model_spec(in);
}

fs::path resolve(const Options& o, const std::string& name) {
  fs::path p(name);
  if (p.is_absolute()) return p;
  std::string dir = o.out_dir;
  if (dir.empty())
    if (const char* env = std::getenv("QTQME_OUT_DIR")) dir = env;
  return dir.empty() ? p : fs::path(dir) / p;
}

// Writes through a temporary file so readers never see a partial result.
void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidParameter, "cannot write " + tmp.string());
    out << content;
    if (!out) throw Error(ErrorCode::InvalidParameter, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

void emit_csv(const Options& o, const std::string& csv) {
  if (o.csv.empty() || o.csv == "-") {
    std::cout << csv;
    std::cout.flush();
  } else {
    write_file(resolve(o, o.csv), csv);
  }
}

void emit_dump(const Options& o, const Laurent* symbol, const QtMatrix* x) {
  if (o.dump.empty()) return;
  std::ostringstream s;
  if (symbol) {
    s << "symbol\n";
    write_text(s, *symbol);
  }
  if (x) {
    s << "matrix\n";
    write_text(s, *x);
  }
  write_file(resolve(o, o.dump), s.str());
}

int cmd_symbol(const Options& o) {
  const QbdModel m = build_model(model_spec(o));
  const SymbolResult r = compute_symbol(m, o.eps > 0 ? o.eps : 1e-14);
  std::ostringstream s;
  s << "n " << r.n << "\ndelta_m " << fmt(r.delta_m) << "\ng1 " << fmt(r.g1) << "\ngp1 " << fmt(r.gp1)
    << "\ngpp1 " << fmt(r.gpp1) << '\n';
  write_text(s, r.g_hat);
  emit_csv(o, s.str());
  return 0;
}

int cmd_solve(const Options& o) {
  const QbdModel m = build_model(model_spec(o));
  FpConfig cfg;
  cfg.variant = parse_variant(o.variant);
  cfg.mode = parse_mode(o.mode);
  cfg.start = parse_start(o.start);
  if (o.eps > 0) cfg.eps_residual = o.eps;
  cfg.max_iter = o.max_iter;
  const SymbolResult sym = compute_symbol(m, 1e-14);
  const SolveReport r = solve(m, cfg, sym.g_hat);
  std::ostringstream s;
  s << "iter,residual,corr_rows,corr_cols\n";
  for (std::size_t k = 0; k < r.residuals.size(); ++k)
    s << k << ',' << fmt(r.residuals[k]) << ',' << r.correction_dims[k].first << ','
      << r.correction_dims[k].second << '\n';
  emit_csv(o, s.str());
  emit_dump(o, &sym.g_hat, &r.solution);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  if (r.stop_reason != StopReason::Converged) {
    std::cerr << "error: MaxIterExceeded: no convergence in " << r.iterations << " iterations\n";
    return 3;
  }
  return 0;
}

int cmd_newton(const Options& o) {
  const QbdModel m = build_model(model_spec(o));
  NewtonConfig cfg;
  if (o.eps > 0) cfg.eps_residual = o.eps;
  cfg.max_iter = o.max_iter;
  const SolveReport r = newton_solve(m, cfg);
  std::ostringstream s;
  s << "iter,residual,step_norm,sylvester_terms,corr_rows,corr_cols\n";
  for (std::size_t k = 0; k < r.residuals.size(); ++k) {
    s << k << ',' << fmt(r.residuals[k]) << ',';
    if (k < r.step_norms.size()) s << fmt(r.step_norms[k]) << ',' << r.sylvester_terms[k];
    else s << ',';
    s << ',' << r.correction_dims[k].first << ',' << r.correction_dims[k].second << '\n';
  }
  emit_csv(o, s.str());
  emit_dump(o, nullptr, &r.solution);
  if (r.stop_reason != StopReason::Converged) {
    std::cerr << "error: MaxIterExceeded: no convergence in " << r.iterations << " iterations\n";
    return 3;
  }
  return 0;
}

int cmd_condition(const Options& o) {
  std::vector<int> cases;
  if (o.model_file.empty() && o.family.empty()) {
    for (int k = 1; k <= 10; ++k) cases.push_back(k);
  } else {
    const ModelSpec spec = model_spec(o);
    if (spec.at("family") != "jackson" || !spec.count("case") || spec.size() != 2)
      throw Error(ErrorCode::InvalidParameter,
                  "condition needs a numbered jackson case (family=jackson, case=N)");
    build_model(spec);  // validates the case number
    cases.push_back(o.case_number ? o.case_number : std::stoi(spec.at("case")));
  }
  std::ostringstream s;
  s << "case,cond_upper,delta_g,delta_g_bound,Delta_G,Delta_G_bound\n";
  for (int k : cases) {
    const ConditioningReport r = perturb_experiment(k, o.seed);
    s << k << ',' << fmt(r.cond_upper) << ',' << fmt(r.delta_g) << ',' << fmt(r.delta_g_bound) << ','
      << fmt(r.Delta_G) << ',' << fmt(r.Delta_G_bound) << '\n';
  }
  emit_csv(o, s.str());
  return 0;
}

int cmd_compare(const Options& o) {
  const QbdModel m = build_model(model_spec(o));
  const SymbolResult sym = compute_symbol(m, 1e-14);
  const Start starts[] = {Start::Zero, Start::Identity, Start::ToeplitzOnly, Start::ToeplitzStochastic};
  std::ostringstream s;
  s << "variant";
  for (Start st : starts) s << ',' << to_string(st);
  s << '\n';
  for (Variant v : {Variant::F1, Variant::F2, Variant::F3}) {
    s << to_string(v);
    for (Start st : starts) {
      FpConfig cfg;
      cfg.variant = v;
      cfg.start = st;
      cfg.mode = parse_mode(o.mode);
      if (o.eps > 0) cfg.eps_residual = o.eps;
      cfg.max_iter = o.max_iter;
      const SolveReport r = solve(m, cfg, sym.g_hat);
      // '*' marks a run stopped by the iteration cap.
      s << ',' << (r.stop_reason == StopReason::Converged ? std::to_string(r.iterations) : "*");
    }
    s << '\n';
  }
  emit_csv(o, s.str());
  return 0;
}

void add_model_flags(CLI::App* c, Options& o) {
  c->add_option("--model", o.model_file, "model spec file (key=value lines)");
  c->add_option("--family", o.family, "jackson, idle or rwqp");
  c->add_option("--case", o.case_number, "Jackson study case 1..10");
  c->add_option("--param", o.params, "extra model parameter key=value (repeatable)");
}

void add_output_flags(CLI::App* c, Options& o, bool dump) {
  c->add_option("--out-dir", o.out_dir, "directory for relative output paths (default $QTQME_OUT_DIR)");
  c->add_option("--csv", o.csv, "write the CSV here instead of stdout");
  if (dump) c->add_option("--dump", o.dump, "write a text dump of the symbol and solution here");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal nonnegative solutions of quadratic matrix equations with quasi-Toeplitz coefficients"};
  app.require_subcommand(1);
  Options o;

  auto* sym = app.add_subcommand("symbol", "compute the symbol g(z) and print its coefficients");
  add_model_flags(sym, o);
  sym->add_option("--eps", o.eps, "stop tolerance (default 1e-14)");
  add_output_flags(sym, o, false);

  auto* sol = app.add_subcommand("solve", "fixed-point iteration; residual history as CSV");
  add_model_flags(sol, o);
  sol->add_option("--variant", o.variant, "f1, f2 or f3")->capture_default_str();
  sol->add_option("--mode", o.mode, "whole or correction")->capture_default_str();
  sol->add_option("--start", o.start, "zero, identity, toeplitz or stochastic")->capture_default_str();
  sol->add_option("--eps", o.eps, "residual tolerance (default 5e-14)");
  sol->add_option("--max-iter", o.max_iter)->capture_default_str();
  add_output_flags(sol, o, true);

  auto* nw = app.add_subcommand("newton", "Newton iteration; residual and step history as CSV");
  add_model_flags(nw, o);
  nw->add_option("--eps", o.eps, "residual tolerance (default 5e-14)");
  nw->add_option("--max-iter", o.max_iter)->capture_default_str();
  add_output_flags(nw, o, true);

  auto* cond = app.add_subcommand("condition", "condition bound and one perturbation run per case");
  add_model_flags(cond, o);
  cond->add_option("--seed", o.seed, "perturbation seed")->capture_default_str();
  add_output_flags(cond, o, false);

  auto* cmp = app.add_subcommand("compare", "iteration counts for every variant and start");
  add_model_flags(cmp, o);
  cmp->add_option("--mode", o.mode, "whole or correction")->capture_default_str();
  cmp->add_option("--eps", o.eps, "residual tolerance (default 5e-14)");
  cmp->add_option("--max-iter", o.max_iter)->capture_default_str();
  add_output_flags(cmp, o, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (o.max_iter <= 0) throw Error(ErrorCode::InvalidParameter, "--max-iter must be positive");
    if (o.eps < 0) throw Error(ErrorCode::InvalidParameter, "--eps must be positive");
    if (*sym) return cmd_symbol(o);
    if (*sol) return cmd_solve(o);
    if (*nw) return cmd_newton(o);
    if (*cond) return cmd_condition(o);
    if (*cmp) return cmd_compare(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
