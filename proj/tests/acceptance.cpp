// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Budgets are sized for a desk-scale run (a few minutes).

#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "goim/canon.hpp"
#include "goim/gen.hpp"
#include "goim/harness.hpp"
#include "goim/machine.hpp"
#include "goim/parser.hpp"
#include "goim/translate.hpp"

using namespace goim;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& what, const std::string& detail = "") {
  std::printf("%s  criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion, what.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++failures;
  std::fflush(stdout);
}

struct CampaignSummary {
  bool countsOk = true;       // criteria 1 and 2
  bool lockstepOk = true;     // criterion 3
  std::string detail;
  uint64_t terminated = 0, diverged = 0;
};

CampaignSummary campaign(Strategy strategy, uint64_t seed) {
  CampaignOptions opts;
  opts.strategy = strategy;
  opts.count = 500;
  opts.maxSize = 40;
  opts.seed = seed;
  opts.fuel = 100000;
  CampaignResult r = runCampaign(opts);

  CampaignSummary s;
  s.terminated = r.terminated;
  s.diverged = r.diverged;
  if (r.failed != 0) {
    s.countsOk = s.lockstepOk = false;
    s.detail = std::to_string(r.failed) + " failures; first: " +
               (r.failures.empty() ? "?" : r.failures.front());
    return s;
  }
  // the campaign must exercise every applicable basic rule
  std::vector<int> applicable;
  switch (strategy) {
    case Strategy::Need: applicable = {1, 2, 9, 10}; break;
    case Strategy::LeftValue: applicable = {3, 4, 5, 9, 10}; break;
    case Strategy::RightValue: applicable = {6, 7, 8, 9, 10}; break;
  }
  for (int rule : applicable) {
    if (r.ruleCoverage[static_cast<size_t>(rule)] == 0) {
      s.lockstepOk = false;
      s.detail = "rule (" + std::to_string(rule) + ") never exercised";
    }
  }
  s.detail = std::to_string(r.terminated) + " terminated, " + std::to_string(r.diverged) +
             " hit the fuel bound";
  return s;
}

}  // namespace

int main() {
  // Criteria 1-3: per-strategy campaigns of 500 generated closed terms.
  // The lockstep checker matches every beta/sigma reduction against the
  // machine transition with the same label (so terminating runs have
  // exactly equal counts), enforces the eps budget of three transitions
  // per reduction (pooled over unmatched eps reductions), and requires
  // answers to finish with eps transitions reaching the final state.
  {
    CampaignSummary need = campaign(Strategy::Need, 101);
    CampaignSummary lv = campaign(Strategy::LeftValue, 202);
    CampaignSummary rv = campaign(Strategy::RightValue, 303);
    std::string detail =
        "need: " + need.detail + "; lv: " + lv.detail + "; rv: " + rv.detail;
    report(1, need.countsOk && lv.countsOk && rv.countsOk,
           "beta-count equality and co-termination over 3x500 generated terms", detail);
    report(2, need.countsOk && lv.countsOk && rv.countsOk,
           "sigma-count equality over the same campaign");
    report(3, need.lockstepOk && lv.lockstepOk && rv.lockstepOk,
           "weak simulation: eps budget respected, answers reach the final state");
  }

  // Criterion 4: sub-graph property. After every transition of sampled
  // runs, every box content matches a box of the initial translation.
  {
    RunOptions opts;
    opts.boxCheckEachStep = true;
    Rng rng(404);
    int bad = 0, runs = 0;
    std::string first;
    for (int i = 0; i < 100; ++i) {
      Strategy st = static_cast<Strategy>(rng.below(3));
      TermPtr t = genClosedTerm(rng.next(), 24, st);
      ExecOutcome e = run(translateTerm(t).g, 2500, opts);
      ++runs;
      if (e.kind == ExecOutcome::Kind::Stuck) {
        ++bad;
        if (first.empty()) first = pretty(t) + " :: " + e.diagnostic;
      }
    }
    report(4, bad == 0, "box contents match the initial translation in 100 debug runs",
           bad ? first : std::to_string(runs) + " runs checked");
  }

  // Criterion 5: linear overhead. The constant is fitted on the three
  // smallest instances (by size*beta) and must bound every instance.
  {
    std::vector<BenchRow> rows;
    bool ran = true;
    for (const char* fam : {"identity-chain", "church-add", "church-mul"}) {
      BenchResult r = benchFamily(fam, 1, 8, Strategy::Need);
      for (auto& row : r.rows) {
        if (row.diverged || row.beta == 0) ran = false;
        rows.push_back(row);
      }
    }
    std::sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
      return a.size * a.beta < b.size * b.beta;
    });
    double c = 0;
    for (size_t i = 0; i < 3 && i < rows.size(); ++i) {
      double x = static_cast<double>(rows[i].size) * static_cast<double>(rows[i].beta);
      double ratio = static_cast<double>(rows[i].total) / x;
      if (ratio > c) c = ratio;
    }
    int over = 0;
    std::string firstOver;
    for (auto& row : rows) {
      double bound = c * static_cast<double>(row.size) * static_cast<double>(row.beta);
      if (static_cast<double>(row.total) > bound) {
        ++over;
        if (firstOver.empty())
          firstOver = row.family + " p=" + std::to_string(row.param);
      }
    }
    report(5, ran && over == 0,
           "total transitions within c*size*beta, c fitted on the three smallest instances",
           "c=" + std::to_string(c) + (over ? ", exceeded by " + firstOver : ""));
  }

  // Criterion 6: the worked copy instance, a box G(1,3) over a contraction
  // family H(5,2) becoming H'(8,2).
  {
    TermPtr t = parse(
        "(\\x. \\y. (\\u. u (u (x y))) (\\z. x (y (x z)))) (\\i. i) (\\j. j)",
        Strategy::Need);
    Machine m(translateTerm(t).g);
    bool ok = false;
    std::string detail = "copy redex never reached";
    for (int i = 0; i < 100000 && !m.final(); ++i) {
      MachineState& s = m.state();
      if (s.flag == RewriteFlag::Bang && !s.bstack.empty() &&
          s.bstack.back().kind == BSym::Kind::LinkRef) {
        const Graph& g = s.g;
        NodeId bang = g.link(s.pos).down.id;
        const Box& box = g.boxes.at(static_cast<size_t>(g.boxOfBang.at(bang)));
        auto stats = [&]() {
          std::set<NodeId> family;
          for (NodeId qn : box.quests) {
            const EndRef up = g.link(g.node(qn).p1).up;
            if (up.isNode() && g.node(up.id).kind == NodeKind::Contract) family.insert(up.id);
          }
          size_t inputs = 0;
          for (NodeId cn : family) inputs += static_cast<size_t>(g.node(cn).arity());
          return std::pair<size_t, size_t>(inputs, family.size());
        };
        auto [in0, fam0] = stats();
        StepOutcome so = m.step();
        auto [in1, fam1] = stats();
        ok = !so.stuck && so.t.label == Label::Sigma && box.quests.size() == 3 && in0 == 5 &&
             fam0 == 2 && in1 == 8 && fam1 == 2;
        detail = "G(1," + std::to_string(box.quests.size()) + "), H(" + std::to_string(in0) +
                 "," + std::to_string(fam0) + ") -> H'(" + std::to_string(in1) + "," +
                 std::to_string(fam1) + ")";
        break;
      }
      if (m.step().stuck) break;
    }
    report(6, ok, "copying G(1,3) over H(5,2) yields H'(8,2)", detail);
  }

  // Criterion 7: structural invariants. Full-graph validation after every
  // transition on sampled debug runs; every terminating campaign run is
  // validated at its final graph inside the lockstep checker; rewrites
  // guard locally against link-link edges throughout.
  {
    RunOptions opts;
    opts.validateEachStep = true;
    Rng rng(707);
    int bad = 0;
    std::string first;
    for (int i = 0; i < 100; ++i) {
      Strategy st = static_cast<Strategy>(rng.below(3));
      TermPtr t = genClosedTerm(rng.next(), 24, st);
      ExecOutcome e = run(translateTerm(t).g, 2500, opts);
      if (e.kind == ExecOutcome::Kind::Stuck) {
        ++bad;
        if (first.empty()) first = pretty(t) + " :: " + e.diagnostic;
      }
    }
    report(7, bad == 0, "graph invariants and link-link absence after every transition", first);
  }

  // Criterion 8: divergence preservation for Omega under each strategy.
  {
    bool ok = true;
    std::string detail;
    for (const char* op : {"@need", "@lv", "@rv"}) {
      std::string src =
          std::string("(\\x. x ") + op + " x) " + op + " (\\y. y " + op + " y)";
      TermPtr t = parse(src, Strategy::Need);
      EvalOutcome sub = evalSub(t, 10000);
      ExecOutcome ex = run(translateTerm(t).g, 10000);
      if (sub.kind != EvalOutcome::Kind::FuelExhausted ||
          ex.kind != ExecOutcome::Kind::FuelExhausted) {
        ok = false;
        detail = std::string("strategy ") + op;
      }
    }
    report(8, ok, "Omega exhausts the fuel of both engines under every strategy", detail);
  }

  if (failures) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
