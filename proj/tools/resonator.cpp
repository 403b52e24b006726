#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "resonator/config.hpp"
#include "resonator/errors.hpp"
#include "resonator/runner.hpp"

namespace {

struct CommonFlags {
  std::string configPath;
  int workers = 0;
  std::string checkpoint;
  std::string outDir;
  int nodes = 0;
  double tol = 0.0;
};

void attach(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.configPath, "JSON config file");
  cmd->add_option("--workers", flags.workers, "worker pool size");
  cmd->add_option("--checkpoint", flags.checkpoint, "checkpoint file (JSON lines)");
  cmd->add_option("--out", flags.outDir, "output directory");
  cmd->add_option("--nodes", flags.nodes, "collocation nodes per interval");
  cmd->add_option("--tol", flags.tol, "tolerance");
}

resonator::RunConfig load(const CommonFlags& flags, const std::string& command) {
  resonator::RunConfig config;
  if (!flags.configPath.empty()) {
    config = resonator::parse_config_file(flags.configPath);
  } else {
    // Default desk surface so diagnostic commands work out of the box.
    config.surface = resonator::SurfaceDescription::symmetric_funnel(2, 4.0);
  }
  config.command = command;
  if (flags.workers > 0) config.workers = flags.workers;
  if (!flags.checkpoint.empty()) config.checkpointPath = flags.checkpoint;
  if (!flags.outDir.empty()) config.outDir = flags.outDir;
  if (flags.nodes > 0) {
    config.nodes = flags.nodes;
    config.rectangle.M = flags.nodes;
  }
  if (flags.tol > 0.0) config.tol = flags.tol;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Selberg zeta / transfer operator toolkit for Schottky surfaces"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string sArg;
  std::string repArg;

  auto* dimension = app.add_subcommand("dimension", "Hausdorff dimension of the limit set");
  attach(dimension, flags);
  auto* zetaEval = app.add_subcommand("zeta-eval", "evaluate det(I - L_{s,rho})");
  attach(zetaEval, flags);
  zetaEval->add_option("--s", sArg, "evaluation point RE,IM");
  zetaEval->add_option("--rep", repArg, "trivial | regular | character:t1,t2,... | irrep:k");
  auto* scan = app.add_subcommand("scan", "locate zeta zeros in a rectangle");
  attach(scan, flags);
  auto* coverScan = app.add_subcommand("cover-scan", "new-zero scan for a finite cover");
  attach(coverScan, flags);
  auto* expansion = app.add_subcommand("expansion", "Cayley-graph expansion constant");
  attach(expansion, flags);
  auto* wordnorm = app.add_subcommand("wordnorm", "word-operator norm decay table");
  attach(wordnorm, flags);
  auto* verify = app.add_subcommand("verify", "run the invariant suite");
  attach(verify, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    resonator::RunConfig config = load(flags, app.get_subcommands().front()->get_name());
    if (!sArg.empty()) {
      std::istringstream in(sArg);
      double re = 0.0, im = 0.0;
      char comma = ',';
      in >> re >> comma >> im;
      if (!in && in.eof() && comma != ',') {
        throw resonator::ConfigError("--s expects RE,IM");
      }
      config.point = resonator::Complex(re, im);
    }
    if (!repArg.empty()) {
      if (repArg == "trivial") {
        config.rep.kind = resonator::RepSelector::Kind::Trivial;
      } else if (repArg == "regular") {
        config.rep.kind = resonator::RepSelector::Kind::Regular;
      } else if (repArg == "all-nontrivial") {
        config.rep.kind = resonator::RepSelector::Kind::AllNontrivial;
      } else if (repArg.rfind("character:", 0) == 0) {
        config.rep.kind = resonator::RepSelector::Kind::Character;
        config.rep.theta.clear();
        std::istringstream in(repArg.substr(10));
        std::string tok;
        while (std::getline(in, tok, ',')) {
          config.rep.theta.push_back(std::stod(tok));
        }
      } else if (repArg.rfind("irrep:", 0) == 0) {
        config.rep.kind = resonator::RepSelector::Kind::IrrepIndex;
        config.rep.index = std::stoi(repArg.substr(6));
      } else {
        throw resonator::ConfigError("unknown --rep '" + repArg + "'");
      }
    }
    return resonator::run(config, std::cout);
  } catch (const resonator::ConfigError& e) {
    std::cerr << "error[" << e.code() << "]: " << e.what() << "\n";
    return 1;
  } catch (const resonator::ConfigMismatch& e) {
    std::cerr << "error[" << e.code() << "]: " << e.what() << "\n";
    return 1;
  } catch (const resonator::Error& e) {
    std::cerr << "error[" << e.code() << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error[Internal]: " << e.what() << "\n";
    return 1;
  }
}
