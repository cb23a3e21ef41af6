#include <cstdlib>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "combforge/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"combforge - stationary pulse trains of the Lugiato-Lefever equation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", cf::kVersion);

  int threads = 0;
  if (const char* env = std::getenv("COMBFORGE_THREADS")) threads = std::atoi(env);

  const char* tasks[] = {"solve",  "continue",  "sweep", "small-eigs",
                         "evolve", "diffusive", "comb",  "verify"};
  struct Args {
    std::string config;
    std::string output;
  };
  std::map<std::string, Args> args;
  for (const char* t : tasks) {
    CLI::App* sub = app.add_subcommand(t);
    sub->add_option("--config", args[t].config, "JSON config file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--output", args[t].output, "output directory (overrides the config)");
    sub->add_option("--threads", threads, "worker threads for the eigensweeps");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string task = app.get_subcommands().front()->get_name();
  return cf::run_task(task, args[task].config, args[task].output,
                      threads > 0 ? threads : 1);
}
