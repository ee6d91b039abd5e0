// Command-line front end. Exit codes: 0 ok, 1 usage/parse error or audit
// failures, 2 optimizer did not converge, 3 precondition not met.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "jre/jre.hpp"

namespace {

enum Exit { kOk = 0, kError = 1, kNotConverged = 2, kPrecondition = 3 };

struct OptimizerFlags {
  jre::OptimizerConfig cfg;

  void attach(CLI::App *cmd) {
    cmd->add_option("--restarts", cfg.restarts, "optimizer restarts")
        ->capture_default_str();
    cmd->add_option("--max-iters", cfg.max_iters, "iterations per restart")
        ->capture_default_str();
    cmd->add_option("--grad-tol", cfg.grad_tol, "relative gradient tolerance")
        ->capture_default_str();
    cmd->add_option("--opt-seed", cfg.seed, "seed of the random restarts")
        ->capture_default_str();
  }
};

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.12g", v);
  return buf;
}

void print_witness(const jre::UnitVector &w) {
  std::cout << "witness " << jre::vector_to_json(w.coords()).dump() << "\n";
}

unsigned thread_count() {
  if (const char *env = std::getenv("JRE_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1)
        return static_cast<unsigned>(v);
    } catch (const std::exception &) {
    }
    throw jre::ContractViolation("JRE_THREADS must be a positive integer");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<std::string> split_checks(const std::string &list) {
  if (list == "all")
    return jre::all_check_ids();
  std::vector<std::string> ids;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty())
      ids.push_back(item);
  return ids;
}

std::string valid_ids() {
  std::string s;
  for (const auto &id : jre::all_check_ids())
    s += (s.empty() ? "" : ", ") + id;
  return s;
}

int cmd_compute(const std::string &input, const std::string &quantity,
                const jre::OptimizerConfig &cfg, bool witness) {
  const jre::OperatorTuple t = jre::load_tuple(input);
  if (quantity == "norm") {
    std::cout << fmt12(jre::joint_norm(t)) << "\n";
    return kOk;
  }
  if (quantity == "jsr") {
    if (!jre::is_commuting(t)) {
      std::cerr << "error: jsr requires a commuting tuple\n";
      return kPrecondition;
    }
    std::cout << fmt12(jre::joint_spectral_radius(t)) << "\n";
    return kOk;
  }
  const jre::ExtremalResult r = quantity == "we" ? jre::euclidean_radius(t, cfg)
                                                 : jre::crawford(t, cfg);
  std::cout << fmt12(r.value) << "\n";
  if (witness)
    print_witness(r.witness);
  if (!r.converged) {
    std::cerr << "warning: optimizer did not converge (gradient norm "
              << r.grad_norm << ")\n";
    return kNotConverged;
  }
  return kOk;
}

struct AuditFlags {
  std::string ensemble = "general";
  jre::Index n = 3;
  std::size_t d = 2;
  std::size_t trials = 10;
  std::uint64_t seed = 1;
  std::string checks = "all";
  double tol = 1e-7;
  std::string out;
  bool emit_witness = false;
  std::string case_id;
};

int cmd_audit(const AuditFlags &f, const jre::OptimizerConfig &cfg) {
  jre::EnsembleSpec spec;
  spec.kind = *jre::parse_ensemble_kind(f.ensemble);
  spec.n = f.n;
  spec.d = f.d;
  spec.seed = f.seed;
  if (!f.case_id.empty())
    spec.case_id = jre::parse_sharpness_case(f.case_id);

  const std::vector<std::string> ids = split_checks(f.checks);
  if (ids.empty()) {
    std::cerr << "error: no checks given; valid ids: " << valid_ids() << "\n";
    return kError;
  }
  for (const auto &id : ids)
    if (!jre::find_check(id)) {
      std::cerr << "error: invalid check id '" << id
                << "'; valid ids: " << valid_ids() << "\n";
      return kError;
    }

  const jre::AuditReport rep =
      jre::run_audit(spec, ids, f.trials, cfg, f.tol, thread_count());
  const std::string doc = jre::report_to_json(rep, f.emit_witness).dump(2) + "\n";
  if (f.out.empty())
    std::cout << doc;
  else
    jre::write_file(f.out, doc);

  const jre::Summary &s = rep.summary;
  std::cerr << "pass " << s.pass << "  pass_tol " << s.pass_tol << "  fail "
            << s.fail << "  inconclusive " << s.inconclusive << "  skipped "
            << s.skipped << "\n";
  return s.fail == 0 ? kOk : kError;
}

int cmd_block(const std::string &x, const std::string &y,
              const std::string &z, const std::string &w,
              const std::string &out) {
  const jre::OperatorTuple tx = jre::load_tuple(x), ty = jre::load_tuple(y);
  const jre::OperatorTuple zero = jre::OperatorTuple::zero(tx.size(), tx.dim());
  const jre::OperatorTuple tz = z.empty() ? zero : jre::load_tuple(z);
  const jre::OperatorTuple tw = w.empty() ? zero : jre::load_tuple(w);
  jre::save_tuple(out, jre::block2x2(tx, ty, tz, tw));
  return kOk;
}

int cmd_oracle(const std::string &input, const std::string &quantity,
               double step, const jre::OptimizerConfig &cfg) {
  const jre::OperatorTuple t = jre::load_tuple(input);
  if (t.dim() > 3) {
    std::cerr << "error: the grid oracle supports dim <= 3 (got " << t.dim()
              << ")\n";
    return kPrecondition;
  }
  const jre::Direction dir =
      quantity == "we" ? jre::Direction::Max : jre::Direction::Min;
  const double grid = jre::grid_oracle(t, dir, step);
  const jre::ExtremalResult r = jre::extremize_on_sphere(t, dir, cfg);
  std::cout << "oracle    " << fmt12(grid) << "\n"
            << "optimizer " << fmt12(r.value) << "\n"
            << "delta     " << fmt12(std::abs(grid - r.value)) << "\n";
  return r.converged ? kOk : kNotConverged;
}

int cmd_generate(const std::string &ensemble, jre::Index n, std::size_t d,
                 std::uint64_t seed, const std::string &case_id,
                 const std::string &out) {
  jre::EnsembleSpec spec;
  spec.kind = *jre::parse_ensemble_kind(ensemble);
  spec.n = n;
  spec.d = d;
  spec.seed = seed;
  if (!case_id.empty())
    spec.case_id = jre::parse_sharpness_case(case_id);
  const jre::OperatorTuple t = jre::generate(spec, seed);
  if (out.empty())
    std::cout << jre::tuple_to_json(t).dump(2) << "\n";
  else
    jre::save_tuple(out, t);
  return kOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Joint numerical radius toolkit"};
  app.require_subcommand(1);

  const std::vector<std::string> kinds{"general", "commuting", "normal",
                                       "sharpness"};
  const std::vector<std::string> cases{"ekk", "sqrt_d_identity",
                                       "nilpotent_half"};

  OptimizerFlags compute_opt, audit_opt, oracle_opt;

  std::string c_input, c_quantity;
  bool c_witness = false;
  auto *compute = app.add_subcommand("compute", "compute one quantity of a tuple");
  compute->add_option("--input", c_input, "tuple file")->required();
  compute->add_option("--quantity", c_quantity, "we | ce | norm | jsr")
      ->required()
      ->check(CLI::IsMember({"we", "ce", "norm", "jsr"}));
  compute->add_flag("--witness", c_witness, "also print the witness vector");
  compute_opt.attach(compute);

  AuditFlags af;
  auto *audit = app.add_subcommand("audit", "run inequality checks on an ensemble");
  audit->add_option("--ensemble", af.ensemble)->check(CLI::IsMember(kinds))
      ->capture_default_str();
  audit->add_option("--n", af.n, "matrix size")->check(CLI::PositiveNumber)
      ->capture_default_str();
  audit->add_option("--d", af.d, "tuple length")->check(CLI::PositiveNumber)
      ->capture_default_str();
  audit->add_option("--trials", af.trials)->check(CLI::PositiveNumber)
      ->capture_default_str();
  audit->add_option("--seed", af.seed)->capture_default_str();
  audit->add_option("--checks", af.checks, "comma-separated ids or 'all'")
      ->capture_default_str();
  audit->add_option("--tol", af.tol, "base tolerance")->check(CLI::PositiveNumber)
      ->capture_default_str();
  audit->add_option("--out", af.out, "report path (default stdout)");
  audit->add_flag("--emit-witness", af.emit_witness, "include witness vectors");
  audit->add_option("--case", af.case_id, "sharpness case")
      ->check(CLI::IsMember(cases));
  audit_opt.attach(audit);

  std::string b_x, b_y, b_z, b_w, b_out;
  auto *block = app.add_subcommand("block", "build the 2x2 block tuple");
  block->add_option("--x", b_x)->required();
  block->add_option("--y", b_y)->required();
  block->add_option("--z", b_z, "default zero");
  block->add_option("--w", b_w, "default zero");
  block->add_option("--out", b_out)->required();

  std::string o_input, o_quantity = "we";
  double o_step = 0.02;
  auto *oracle = app.add_subcommand("oracle", "compare the optimizer with a grid search");
  oracle->add_option("--input", o_input)->required();
  oracle->add_option("--quantity", o_quantity)->check(CLI::IsMember({"we", "ce"}))
      ->capture_default_str();
  oracle->add_option("--grid-step", o_step)->capture_default_str();
  oracle_opt.attach(oracle);

  std::string g_kind = "general", g_case, g_out;
  jre::Index g_n = 3;
  std::size_t g_d = 2;
  std::uint64_t g_seed = 1;
  auto *gen = app.add_subcommand("generate", "write one ensemble draw");
  gen->add_option("--ensemble", g_kind)->check(CLI::IsMember(kinds))
      ->capture_default_str();
  gen->add_option("--n", g_n)->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--d", g_d)->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--seed", g_seed)->capture_default_str();
  gen->add_option("--case", g_case)->check(CLI::IsMember(cases));
  gen->add_option("--out", g_out, "default stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? kOk : kError;
  }

  try {
    if (*compute)
      return cmd_compute(c_input, c_quantity, compute_opt.cfg, c_witness);
    if (*audit)
      return cmd_audit(af, audit_opt.cfg);
    if (*block)
      return cmd_block(b_x, b_y, b_z, b_w, b_out);
    if (*oracle)
      return cmd_oracle(o_input, o_quantity, o_step, oracle_opt.cfg);
    if (*gen)
      return cmd_generate(g_kind, g_n, g_d, g_seed, g_case, g_out);
  } catch (const jre::ParseError &e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kError;
  } catch (const jre::UnsupportedDimension &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPrecondition;
  } catch (const jre::DimensionMismatch &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  } catch (const jre::TriangularizationFailure &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNotConverged;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
