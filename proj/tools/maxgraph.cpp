// Command-line front end: enumerate, generate, verify.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "maxgraph/io.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> a, tau, out, mesh_format, report;
  std::optional<double> tol, theta, A;
  bool fault_branch = false;
};

void add_common(CLI::App& cmd, Flags& f) {
  cmd.add_option("--config", f.config, "JSON job configuration");
  cmd.add_option("--a", f.a, "branch points, e.g. \"-3,-1,1,3\"")->allow_extra_args(false);
  cmd.add_option("--tau", f.tau, "spin choice bits, or 'all'");
  cmd.add_option("--tol", f.tol, "quadrature tolerance");
  cmd.add_option("--theta", f.theta, "rotation angle of g");
  cmd.add_option("--A", f.A, "homothety factor");
  cmd.add_option("--out", f.out, "output directory");
  cmd.add_option("--mesh-format", f.mesh_format, "obj, ply or csv");
  cmd.add_option("--report", f.report, "report file path");
  cmd.add_flag("--fault-branch", f.fault_branch,
               "test hook: evaluate w with a single principal square root");
}

// defaults < config file < flags
maxgraph::JobConfig resolve(const Flags& f) {
  maxgraph::JobConfig c;
  if (!f.config.empty()) c = maxgraph::load_config(f.config, c);
  if (f.a) c.a = maxgraph::parse_real_list(*f.a);
  if (f.tau) c.tau = *f.tau;
  if (f.tol) c.quad.tol = *f.tol;
  if (f.theta) c.theta = *f.theta;
  if (f.A) c.A = *f.A;
  if (f.out) c.out_dir = *f.out;
  if (f.mesh_format) c.mesh_format = *f.mesh_format;
  if (f.report) c.report = *f.report;
  if (f.fault_branch) c.fault_branch = true;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entire maximal graphs with conelike singularities"};
  app.require_subcommand(1);
  Flags f;
  auto* en = app.add_subcommand("enumerate", "list admissible spin choices and their classes");
  auto* gen = app.add_subcommand("generate", "write a mesh and metadata for one spin choice");
  auto* ver = app.add_subcommand("verify", "run the verification suite and write a report");
  for (auto* s : {en, gen, ver}) add_common(*s, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  maxgraph::JobConfig cfg;
  try {
    cfg = resolve(f);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  if (en->parsed()) return maxgraph::cmd_enumerate(cfg, std::cout, std::cerr);
  if (gen->parsed()) return maxgraph::cmd_generate(cfg, std::cout, std::cerr);
  return maxgraph::cmd_verify(cfg, std::cout, std::cerr);
}
