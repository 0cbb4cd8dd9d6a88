#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace vjm::cli;

  CLI::App app{"Cartesian stiffness of elastic chains and parallel manipulators"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  app.fallthrough();

  Options opts;
  std::string format = "pretty";
  double tol = 0.0;
  app.add_option("--model", opts.model, "built-in name (stewart-a, stewart-b, demo-2d, single-beam, isotropic) or model file");
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"pretty", "csv", "json"}));
  auto* tol_opt = app.add_option("--tol", tol, "relative eigenvalue threshold for rank and free directions (default 1e-10)");
  app.add_option("--r", opts.params.r, "platform attachment radius [m]")->capture_default_str();
  app.add_option("--R", opts.params.R, "base attachment radius [m]")->capture_default_str();
  app.add_option("--h", opts.params.h, "platform height [m]")->capture_default_str();
  app.add_option("--k11", opts.params.k11, "axial stiffness of a leg or beam [N/m]")->capture_default_str();
  app.add_option("--k", opts.params.k, "isotropic stiffness")->capture_default_str();
  app.add_option("--length", opts.params.length, "single-beam length [m]")->capture_default_str();

  auto* stiff = app.add_subcommand("stiff", "print the 6x6 Cartesian stiffness matrix");
  auto* deflect = app.add_subcommand("deflect", "solve K dt = F for a wrench");
  std::string wrench;
  deflect->add_option("--wrench", wrench, "fx,fy,fz,mx,my,mz")->required();
  auto* analyze = app.add_subcommand("analyze", "spectral report for a matrix file");
  std::string matrix_path;
  analyze->add_option("matrix", matrix_path, "matrix file (pretty, csv or json)")->required();
  auto* validate = app.add_subcommand("validate", "compare the four elimination routes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_code::ok : exit_code::failure;
  }

  opts.format = *parse_format(format);
  if (*tol_opt) opts.tol = tol;
  const bool needs_model = !analyze->parsed();
  if (needs_model && opts.model.empty()) {
    std::cerr << "--model is required for this command\n";
    return exit_code::failure;
  }

  return run_command(
      [&] {
        if (stiff->parsed()) cmd_stiff(opts, std::cout);
        if (deflect->parsed()) cmd_deflect(opts, wrench, std::cout);
        if (analyze->parsed()) cmd_analyze(opts, matrix_path, std::cout);
        if (validate->parsed()) cmd_validate(opts, std::cout);
      },
      std::cerr);
}
