#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ipfactor/cli/commands.hpp"
#include "ipfactor/cli/json_io.hpp"

namespace cli = ipfactor::cli;

int main(int argc, char** argv) {
  CLI::App app{"Inner products on n x n complex matrices: validation and structured decompositions"};
  app.set_version_flag("--version", cli::tool_version());
  app.require_subcommand(1);

  std::string spec_path, cert_path, out_path, form = "auto";
  double epsilon = 0.25;
  int n = 2, m = 1;
  std::uint64_t seed = 0;

  auto* validate = app.add_subcommand("validate", "Check that a spec defines an inner product");
  validate->add_option("spec", spec_path, "ProblemSpec JSON")->required();

  auto* decompose = app.add_subcommand("decompose", "Compute a decomposition and write a certificate");
  decompose->add_option("spec", spec_path, "ProblemSpec JSON")->required();
  decompose->add_option("--form", form, "opsum | hermitian | positive | minus-one | auto")
      ->check(CLI::IsMember({"opsum", "hermitian", "positive", "minus-one", "auto"}));
  decompose->add_option("--out", out_path, "Certificate output path (default: stdout)");

  auto* verify = app.add_subcommand("verify", "Re-verify a certificate against its spec");
  verify->add_option("cert", cert_path, "CertificateDoc JSON")->required();
  verify->add_option("spec", spec_path, "ProblemSpec JSON")->required();

  auto* demo = app.add_subcommand("demo", "Walk through the epsilon-map example");
  demo->add_option("--epsilon", epsilon, "epsilon in (0, 1)");

  auto* random = app.add_subcommand("random", "Generate a random positive-definite spec");
  random->add_option("--n", n, "Matrix size, 1..16");
  random->add_option("--m", m, "Number of positive pairs, 1..n^2");
  random->add_option("--seed", seed, "RNG seed");
  random->add_option("--out", out_path, "Spec output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : cli::kParse;
  }

  if (*validate) return cli::cmd_validate(spec_path, std::cout);
  if (*decompose) return cli::cmd_decompose(spec_path, form, out_path, std::cout);
  if (*verify) return cli::cmd_verify(cert_path, spec_path, std::cout);
  if (*demo) return cli::cmd_demo(epsilon, std::cout);
  if (*random) return cli::cmd_random(n, m, seed, out_path, std::cout);
  return cli::kParse;
}
