// Front-end plumbing: run either engine or both with cross-checking,
// lockstep differential checking, benchmark families, JSONL traces.

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "goim/machine.hpp"
#include "goim/submachine.hpp"
#include "goim/term.hpp"

namespace goim {

enum class EngineSel : uint8_t { Sub, Graph, Both };

enum class Verdict : uint8_t { CountsMatch, Mismatch, BothDiverged, Error };
const char* verdictName(Verdict v);

// Exit-code contract.
constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;
constexpr int kExitFuel = 3;

struct Report {
  std::string term;
  Strategy strategy = Strategy::Need;
  EngineSel engine = EngineSel::Both;
  Verdict verdict = Verdict::Error;
  std::string error;

  std::optional<EvalOutcome> sub;
  std::optional<ExecOutcome> exec;
  double subMillis = 0, execMillis = 0;

  int exitCode() const;
  std::string toJson(bool includeWallTime = true) const;
};

struct EvalRequest {
  TermPtr term;
  Strategy strategy = Strategy::Need;
  EngineSel engine = EngineSel::Both;
  uint64_t fuel = 1000000;       // sub-machine steps
  bool wantExecTrace = false;
  bool debugChecks = false;      // validate graph after every transition
};

// Graph-side fuel that cannot cut a simulation short: one labelled
// transition plus at most three passes per reduction, plus the final pass.
inline uint64_t graphFuelFor(uint64_t subFuel) { return 4 * subFuel + 1; }

Report evalBoth(const EvalRequest& req);

// Lockstep differential check. Advances the oracle one reduction at a
// time and consumes the machine's transitions against the simulation
// budget: each matched beta/sigma is reached within 3 + 4*(intervening
// eps-reductions) eps-transitions and carries the same label; after the
// final reduction the machine reaches the final state within
// 4*(trailing eps-reductions) + 1 transitions.
struct LockstepResult {
  bool ok = false;
  bool diverged = false;       // both sides ran out of fuel
  std::string failure;
  uint64_t subBeta = 0, subSigma = 0, subEps = 0;
  uint64_t execBeta = 0, execSigma = 0, execEpsPass = 0, execEpsRewrite = 0;
  uint64_t maxPrefix = 0;      // largest eps run before a matched rewrite, gap-normalised
  std::vector<int> rulesSeen = std::vector<int>(11, 0);
};

using MachineTamper = std::function<void(MachineState&)>;

LockstepResult lockstepCheck(const TermPtr& t, uint64_t fuel,
                             const MachineTamper& tamper = nullptr);

// Generated-term campaign sharded over worker threads.
struct CampaignOptions {
  Strategy strategy = Strategy::Need;
  uint64_t count = 500;
  uint64_t maxSize = 40;
  uint64_t seed = 1;
  uint64_t fuel = 100000;
  unsigned threads = 0;  // 0: hardware choice
};

struct CampaignResult {
  uint64_t total = 0, terminated = 0, diverged = 0, failed = 0;
  std::vector<std::string> failures;        // first few diagnostics
  std::vector<int> ruleCoverage = std::vector<int>(11, 0);
  uint64_t sumBeta = 0, sumSigma = 0, sumEps = 0, sumSize = 0;
  uint64_t sumExecEpsPass = 0, sumExecEpsRewrite = 0;
  double maxSigmaPerBeta = 0;               // over terminating runs with beta > 0
  double maxEpsPerSizeBeta = 0;
};

CampaignResult runCampaign(const CampaignOptions& opts);

// Benchmark families; each instance is a closed pure term.
//   identity-chain n : I (I (... I))            beta = n
//   church-add n     : (plus n n) I I, Church encodings
//   church-mul n     : (mul n n) I I
//   church-exp n     : (exp n n) I I
//   sharing-chain n  : (\x. x (x (... (x I)))) (\y. y)
TermPtr benchTerm(const std::string& family, uint64_t param, Strategy s);

struct BenchRow {
  std::string family;
  uint64_t param = 0;
  uint64_t size = 0;
  uint64_t beta = 0, sigma = 0, epsPass = 0, epsRewrite = 0;
  uint64_t total = 0;
  bool diverged = false;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  double fittedOverhead = 0;  // least squares of total against size*beta
};

BenchResult benchFamily(const std::string& family, uint64_t minParam, uint64_t maxParam,
                        Strategy s, uint64_t fuel = 1000000);

std::string benchCsv(const std::vector<BenchRow>& rows);  // header pinned

// One JSONL record per transition, then {"summary": {...}}.
void traceEmit(const ExecOutcome& outcome, std::ostream& sink);

// Oracle-side trace: step index, basic rule number, label; the focus
// rendering is costly and off by default.
void traceEmitSub(const TermPtr& term, uint64_t fuel, std::ostream& sink, bool withFocus);

}  // namespace goim
