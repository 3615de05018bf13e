#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"censolve: censored nonlocal Hamilton-Jacobi solvers"};
  app.require_subcommand(1);
  censolve::cli::Invocation inv;
  for (const std::string& name : censolve::cli::subcommands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", inv.config, "run configuration (dotted key = value)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", inv.out_dir, "output directory")->capture_default_str();
    sub->callback([&inv, sub] { inv.subcommand = sub->get_name(); });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : censolve::cli::exit_schema;
  }
  return censolve::cli::run(inv, std::cout, std::cerr);
}
