#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "goim/gen.hpp"
#include "goim/harness.hpp"
#include "goim/parser.hpp"
#include "goim/translate.hpp"

using namespace goim;

namespace {

Strategy parseStrategy(const std::string& s) {
  if (s == "need") return Strategy::Need;
  if (s == "lv") return Strategy::LeftValue;
  if (s == "rv") return Strategy::RightValue;
  throw CLI::ValidationError("--strategy", "expected need, lv or rv");
}

// A term argument is either literal text, a path to a file, or "-" (stdin).
std::string readTermSource(const std::string& arg) {
  if (arg == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(arg);
  if (in.good()) {
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  }
  return arg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"token-guided graph-rewriting evaluator for the lambda calculus"};
  app.require_subcommand(1);

  // eval
  std::string evalStrategy = "need", evalEngine = "both", evalTrace, evalTermArg;
  uint64_t evalFuel = 1000000;
  bool evalTraceFocus = false;
  auto* evalCmd = app.add_subcommand("eval", "evaluate a term with either or both engines");
  evalCmd->add_option("--strategy", evalStrategy, "need|lv|rv")->capture_default_str();
  evalCmd->add_option("--engine", evalEngine, "sub|graph|both")->capture_default_str();
  evalCmd->add_option("--fuel", evalFuel, "max reductions")->capture_default_str();
  evalCmd->add_option("--trace", evalTrace,
                      "write a JSONL trace to FILE (machine transitions; with --engine sub, "
                      "oracle reductions)");
  evalCmd->add_flag("--trace-focus", evalTraceFocus,
                    "include the pretty-printed focus in oracle traces");
  evalCmd->add_option("term", evalTermArg, "term text, file path, or - for stdin")->required();

  // check
  std::string checkStrategy = "need";
  uint64_t checkCount = 500, checkMaxSize = 40, checkSeed = 1, checkFuel = 100000;
  auto* checkCmd = app.add_subcommand("check", "lockstep differential check on generated terms");
  checkCmd->add_option("--strategy", checkStrategy, "need|lv|rv")->capture_default_str();
  checkCmd->add_option("--count", checkCount, "number of terms")->capture_default_str();
  checkCmd->add_option("--max-size", checkMaxSize, "term size bound")->capture_default_str();
  checkCmd->add_option("--seed", checkSeed, "campaign seed")->capture_default_str();
  checkCmd->add_option("--fuel", checkFuel, "oracle reduction budget")->capture_default_str();

  // bench
  std::string benchFamilyName = "identity-chain", benchStrategy = "need", benchOut;
  uint64_t benchMin = 1, benchMax = 8;
  auto* benchCmd = app.add_subcommand("bench", "instrumented runs over a benchmark family");
  benchCmd->add_option("--family", benchFamilyName,
                       "identity-chain|church-add|church-mul|church-exp|sharing-chain")
      ->capture_default_str();
  benchCmd->add_option("--min", benchMin, "smallest parameter")->capture_default_str();
  benchCmd->add_option("--max", benchMax, "largest parameter")->capture_default_str();
  benchCmd->add_option("--strategy", benchStrategy, "need|lv|rv")->capture_default_str();
  benchCmd->add_option("--out", benchOut, "write CSV to FILE (default stdout)");

  // translate
  std::string translateTermArg, translateStrategy = "need";
  auto* translateCmd = app.add_subcommand("translate", "dump the graph of a term");
  translateCmd->add_option("--strategy", translateStrategy, "need|lv|rv")->capture_default_str();
  translateCmd->add_option("term", translateTermArg, "term text, file path, or - for stdin")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*evalCmd) {
      Strategy st = parseStrategy(evalStrategy);
      EvalRequest req;
      req.term = parse(readTermSource(evalTermArg), st);
      req.strategy = st;
      req.fuel = evalFuel;
      req.wantExecTrace = !evalTrace.empty();
      if (evalEngine == "sub") req.engine = EngineSel::Sub;
      else if (evalEngine == "graph") req.engine = EngineSel::Graph;
      else if (evalEngine == "both") req.engine = EngineSel::Both;
      else throw CLI::ValidationError("--engine", "expected sub, graph or both");

      Report rep = evalBoth(req);
      std::cout << rep.toJson() << "\n";
      if (!evalTrace.empty()) {
        std::ofstream out(evalTrace);
        if (!out.good()) {
          std::cerr << "cannot open trace file: " << evalTrace << "\n";
          return kExitUsage;
        }
        if (rep.exec)
          traceEmit(*rep.exec, out);
        else
          traceEmitSub(req.term, req.fuel, out, evalTraceFocus);
        if (!out.good()) {
          std::cerr << "trace write failed: " << evalTrace << "\n";
          return kExitUsage;
        }
      }
      return rep.exitCode();
    }

    if (*checkCmd) {
      CampaignOptions opts;
      opts.strategy = parseStrategy(checkStrategy);
      opts.count = checkCount;
      opts.maxSize = checkMaxSize;
      opts.seed = checkSeed;
      opts.fuel = checkFuel;
      CampaignResult r = runCampaign(opts);
      std::cout << "checked " << r.total << " terms: " << r.terminated << " terminated, "
                << r.diverged << " hit the fuel bound, " << r.failed << " failed\n";
      std::cout << "rule coverage:";
      for (int rule = 1; rule <= 10; ++rule)
        std::cout << " (" << rule << ")x" << r.ruleCoverage[static_cast<size_t>(rule)];
      std::cout << "\n";
      for (auto& f : r.failures) std::cout << "failure: " << f << "\n";
      return r.failed == 0 ? kExitOk : kExitMismatch;
    }

    if (*benchCmd) {
      BenchResult r =
          benchFamily(benchFamilyName, benchMin, benchMax, parseStrategy(benchStrategy));
      std::string csv = benchCsv(r.rows);
      if (benchOut.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(benchOut);
        if (!out.good()) {
          std::cerr << "cannot open output file: " << benchOut << "\n";
          return kExitUsage;
        }
        out << csv;
      }
      std::cerr << "fitted overhead constant: " << r.fittedOverhead << "\n";
      return kExitOk;
    }

    if (*translateCmd) {
      TermPtr t = parse(readTermSource(translateTermArg), parseStrategy(translateStrategy));
      TermGraph tg = translateTerm(t);
      std::cout << dumpGraph(tg.g);
      return kExitOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
