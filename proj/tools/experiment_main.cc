// tools/experiment_main.cc

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sea/error.h"
#include "sea/experiment.h"

int main(int argc, char** argv) {
  CLI::App app{"Run a pinned pipeline experiment"};
  std::string spec_path;
  std::string workdir = "exp_work";
  app.add_option("spec", spec_path, "experiment spec file")->required();
  app.add_option("--workdir", workdir,
                 "directory for the generated corpus and stage artifacts");
  bool quiet = false;
  app.add_flag("--quiet", quiet, "suppress stage progress");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    const sea::ExperimentSpec spec = sea::parse_experiment_file(spec_path);
    sea::run_experiment(spec, workdir, quiet ? nullptr : &std::cerr);
    std::cout << "PASS " << spec.name << " (" << workdir << "/report.txt)\n";
    return 0;
  } catch (const sea::Error& e) {
    std::cerr << "sea-experiment: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "sea-experiment: " << e.what() << "\n";
    return 1;
  }
}
