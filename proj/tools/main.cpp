#include <iostream>
#include <string>
#include <vector>

#include "oscalg/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  oscalg::cli::RunReport report = oscalg::cli::run(args);
  return oscalg::cli::emit_report(report, std::cout, std::cerr);
}
