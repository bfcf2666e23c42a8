// SPDX-License-Identifier: Apache-2.0
// hypo: classify, scan, solve and certify systems of vector fields on the torus.

#include "hypo/classify.hpp"
#include "hypo/report.hpp"
#include "hypo/solver.hpp"
#include "hypo/specfile.hpp"
#include "hypo/witness.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace hypo;

// Exit codes.
constexpr int kExitGH = 0;
constexpr int kExitInput = 1;
constexpr int kExitInternal = 3;
constexpr int kExitNotGH = 10;
constexpr int kExitResonant = 11;
constexpr int kExitPrecondition = 12;
constexpr int kExitUnverified = 13;
constexpr int kExitUndetermined = 20;

struct Loaded {
  SystemSpec spec;
  std::string hash;
};

Loaded load(const std::string& path) {
  const std::string text = read_file(path);
  std::filesystem::path p(path);
  SystemSpec spec = parse_spec(text, path, p.has_parent_path() ? p.parent_path().string() : std::string("."));
  return {std::move(spec), content_hash(text)};
}

Json header(const std::string& command, const std::string& path, const Loaded& in) {
  Json j;
  j["tool"] = "hypo";
  j["version"] = kToolVersion;
  j["command"] = command;
  j["input"] = {{"path", path}, {"hash", in.hash}};
  j["system"] = describe_spec(in.spec);
  return j;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream os(out, std::ios::binary);
  if (!os) throw InputError("cannot write '" + out + "'");
  os << text;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int exit_code(Outcome o) {
  switch (o) {
    case Outcome::GH: return kExitGH;
    case Outcome::NotGH: return kExitNotGH;
    case Outcome::UndeterminedAtBounds: return kExitUndetermined;
  }
  return kExitInternal;
}

struct ClassifyArgs {
  std::string spec;
  std::string out;
  ClassifyBounds bounds;
  bool timing = false;
  bool no_witness = false;
  bool embed = false;
};

int cmd_classify(const ClassifyArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  Loaded in = load(a.spec);
  ClassifyBounds b = a.bounds;
  b.build_witness = !a.no_witness;
  Verdict v = classify(in.spec, b);
  Json j = header("classify", a.spec, in);
  Json bounds = to_json(b);
  bounds["sigma_grid"] = Json::array();
  for (double s : condition_sigma_grid(in.spec, b)) bounds["sigma_grid"].push_back(s);
  j["bounds"] = std::move(bounds);
  j["verdict"] = to_json(v, a.embed);
  if (a.timing) j["timing"] = {{"seconds", seconds_since(t0)}, {"threads", worker_count()}};
  emit(dump_json(j), a.out);
  if (!a.out.empty() && a.out != "-")
    std::cerr << "hypo: " << to_string(v.outcome) << " (" << to_string(v.certificate) << ")\n";
  return exit_code(v.outcome);
}

int cmd_resonances(const std::string& path, std::size_t j_max, const std::string& csv) {
  Loaded in = load(path);
  auto rows = resonance_table(in.spec, j_max);
  emit(resonance_csv(rows, in.spec.m()), csv);
  return 0;
}

struct SolveArgs {
  std::string spec;
  std::vector<std::string> rhs;
  std::string out_csv;
  std::string formula = "auto";
  int r_star = 0;  // 1-based; 0 picks automatically
};

int cmd_solve(const SolveArgs& a) {
  Loaded in = load(a.spec);
  const int m = in.spec.m();
  std::vector<CoefficientField> rhs;
  if (static_cast<int>(a.rhs.size()) != m)
    throw InputError("expected " + std::to_string(m) + " right-hand side files, got " + std::to_string(a.rhs.size()));
  for (const auto& p : a.rhs) {
    CoefficientField f = read_field_csv(p, in.spec.field_context());
    if (f.dim() != m) throw InputError(p + ": field has " + std::to_string(f.dim()) + " torus variables, expected " + std::to_string(m));
    rhs.push_back(std::move(f));
  }
  SolveOptions opt;
  if (a.formula == "minus")
    opt.formula = Formula::Minus;
  else if (a.formula == "plus")
    opt.formula = Formula::Plus;
  else
    opt.formula = Formula::Auto;
  if (a.r_star > 0) {
    if (a.r_star > m) throw InputError("--r-star out of range");
    opt.r_star = a.r_star - 1;
  }
  std::optional<SolveResult> solved;
  try {
    solved = solve_system(in.spec, rhs, opt);
  } catch (const ResonanceError& e) {
    std::cerr << "hypo: " << e.what() << "\n";
    for (const auto& [tau, j] : e.offending) {
      std::cerr << "resonant tau=(";
      for (std::size_t k = 0; k < tau.size(); ++k) std::cerr << (k ? "," : "") << tau[k];
      std::cerr << ") j=" << j << "\n";
    }
    return kExitResonant;
  }
  const SolveResult& res = *solved;
  emit(field_csv(res.u), a.out_csv);
  std::ostream& log = (a.out_csv.empty() || a.out_csv == "-") ? std::cerr : std::cout;
  log << "method " << res.method << "\n";
  log << "residual " << format_double(res.residual) << "\n";
  return 0;
}

struct WitnessArgs {
  std::string spec;
  std::string kind = "sign-change";
  std::size_t j_max = 64;
  std::string out;
  ClassifyBounds bounds;
};

SingularWitness from_classify(const SystemSpec& spec, const ClassifyBounds& bounds, WitnessKind want) {
  Verdict v = classify(spec, bounds);
  if (v.certificate != CertificateKind::DiophantineFailure)
    throw PreconditionError(std::string("no Diophantine failure on the scanned box (verdict ") +
                            to_string(v.outcome) + ", " + to_string(v.certificate) + ")");
  if (!v.witness) {
    std::string why = v.notes.empty() ? "witness construction failed" : v.notes.back();
    throw PreconditionError(why);
  }
  if (v.witness->kind != want)
    throw PreconditionError(std::string("the failing system calls for a ") + to_string(v.witness->kind) +
                            " witness");
  return *v.witness;
}

int cmd_witness(const WitnessArgs& a) {
  Loaded in = load(a.spec);
  SingularWitness w;
  if (a.kind == "sign-change")
    w = witness_sign_change(in.spec, a.j_max);
  else if (a.kind == "infinite-zero-set")
    w = witness_infinite_zero_set(in.spec, a.j_max);
  else if (a.kind == "symbol-decay")
    w = from_classify(in.spec, a.bounds, WitnessKind::SymbolDecaySequence);
  else
    w = from_classify(in.spec, a.bounds, WitnessKind::MixedCase2);
  Json j = header("witness", a.spec, in);
  j["requested_kind"] = a.kind;
  j["j_max"] = a.j_max;
  j["witness"] = to_json(w, true);
  emit(dump_json(j), a.out);
  const auto& v = w.verification;
  std::cerr << "hypo: " << to_string(w.kind) << " residual " << format_double(v.residual) << " nondecay "
            << format_double(v.u_nondecay) << (v.passed ? " verified" : " NOT verified") << "\n";
  for (const auto& f : v.failures) std::cerr << "  " << f << "\n";
  return v.passed ? 0 : kExitUnverified;
}

void add_bounds(CLI::App* sub, ClassifyBounds& b) {
  sub->add_option("--tau-max", b.tau_max, "zero-set scan box in tau")->capture_default_str()->check(CLI::NonNegativeNumber);
  sub->add_option("--j-max", b.j_max, "zero-set scan box in j")->capture_default_str();
  sub->add_option("--L-max", b.L_max, "Diophantine scan box")->capture_default_str();
  sub->add_option("--sigma-grid", b.sigma_grid, "Gevrey orders for the Diophantine check (default M mu, 2 M mu, 4 M mu)")
      ->delimiter(',');
  sub->add_option("--eps-grid", b.eps_grid, "eps levels for the Diophantine check")->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Global hypoellipticity of systems of vector fields on T^m x M"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(hypo::kToolVersion));

  ClassifyArgs ca;
  auto* classify_cmd = app.add_subcommand("classify", "Decide global hypoellipticity and write a JSON report");
  classify_cmd->add_option("spec", ca.spec, "system spec (TOML)")->required();
  add_bounds(classify_cmd, ca.bounds);
  classify_cmd->add_option("--out", ca.out, "report path (default stdout)");
  classify_cmd->add_flag("--timing", ca.timing, "include wall time in the report");
  classify_cmd->add_flag("--no-witness", ca.no_witness, "skip witness construction");
  classify_cmd->add_flag("--embed-fields", ca.embed, "embed the witness fields as CSV");

  std::string res_spec, res_csv;
  std::size_t res_j = 20;
  auto* res_cmd = app.add_subcommand("resonances", "Distance of omega_r lambda_j to the integers");
  res_cmd->add_option("spec", res_spec, "system spec (TOML)")->required();
  res_cmd->add_option("--j-max", res_j, "number of eigenvalues")->capture_default_str();
  res_cmd->add_option("--csv", res_csv, "CSV path (default stdout)");

  SolveArgs sa;
  auto* solve_cmd = app.add_subcommand("solve", "Solve L_r u = f_r and write u as CSV");
  solve_cmd->add_option("spec", sa.spec, "system spec (TOML)")->required();
  solve_cmd->add_option("rhs", sa.rhs, "one coefficient CSV per equation")->required();
  solve_cmd->add_option("--out-csv", sa.out_csv, "solution path (default stdout)");
  solve_cmd->add_option("--formula", sa.formula, "kernel formula")
      ->check(CLI::IsMember({"minus", "plus", "auto"}))
      ->capture_default_str();
  solve_cmd->add_option("--r-star", sa.r_star, "equation used for variable coefficients (1-based)");

  WitnessArgs wa;
  auto* witness_cmd = app.add_subcommand("witness", "Build and verify a singular solution");
  witness_cmd->add_option("spec", wa.spec, "system spec (TOML)")->required();
  witness_cmd->add_option("--kind", wa.kind, "witness construction")
      ->check(CLI::IsMember({"sign-change", "infinite-zero-set", "symbol-decay", "mixed"}))
      ->capture_default_str();
  witness_cmd->add_option("--j-max", wa.j_max, "number of witness modes")->capture_default_str();
  witness_cmd->add_option("--L-max", wa.bounds.L_max, "Diophantine scan box")->capture_default_str();
  witness_cmd->add_option("--out", wa.out, "bundle path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*classify_cmd) return cmd_classify(ca);
    if (*res_cmd) return cmd_resonances(res_spec, res_j, res_csv);
    if (*solve_cmd) return cmd_solve(sa);
    if (*witness_cmd) return cmd_witness(wa);
  } catch (const InputError& e) {
    std::cerr << "hypo: error: " << e.what() << "\n";
    return kExitInput;
  } catch (const PreconditionError& e) {
    std::cerr << "hypo: precondition failed: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "hypo: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
