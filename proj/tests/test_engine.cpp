#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "pathtrust/engine.hpp"
#include "pathtrust/error_model.hpp"
#include "pathtrust/rng.hpp"

using namespace pathtrust;

namespace {

// three-node ring of pairwise paths, reports drawn from the live truth
std::vector<std::vector<NodeId>> ring_paths() { return {{0, 1}, {1, 2}, {0, 2}}; }

PdrReport exact_report(std::uint64_t seq, const std::vector<NodeId>& transit,
                       const GroundTruth& truth) {
  return make_report(seq, expected_pdr(transit, truth), 500, transit);
}

std::vector<PdrReport> noisy_stream(Rng& rng, std::uint32_t nodes, std::size_t count) {
  std::vector<PdrReport> reports;
  for (std::uint64_t s = 0; s < count; ++s) {
    std::vector<NodeId> transit;
    while (transit.empty())
      for (NodeId x = 0; x < nodes; ++x)
        if (rng.bernoulli(0.35)) transit.push_back(x);
    reports.push_back(make_report(s, rng.uniform(0.2, 1.0), 500, std::move(transit)));
  }
  return reports;
}

} // namespace

TEST_CASE("accepting state admits no strictly better single removal") {
  Rng rng(2024);
  EngineConfig cfg;
  cfg.decision_penalty = 0.4;
  cfg.history = 10000; // no eviction, so the post state equals the decision state
  DeductionEngine engine(6, cfg);

  for (const PdrReport& report : noisy_stream(rng, 6, 40)) {
    engine.process(report);

    const ReportRefs analyzed = engine.ledger().refs();
    const std::vector<double> d = deduce_behavior(analyzed, 6, cfg.base, cfg.pdr_floor);
    const double accepted_total =
        total_error(analyzed, d, cfg.decision_penalty, 6, cfg.pdr_floor);

    for (NodeId x : report.transit) {
      ReportRefs kept;
      bool removed_any = false;
      for (const PdrReport& r : engine.ledger().reports()) {
        if (r.seq != report.seq && r.contains(x)) {
          removed_any = true;
          continue;
        }
        kept.push_back(&r);
      }
      if (!removed_any) continue;
      const std::vector<double> cand = deduce_behavior(kept, 6, cfg.base, cfg.pdr_floor);
      const double cand_total = total_error(kept, cand, cfg.decision_penalty, 6, cfg.pdr_floor);
      CHECK(cand_total >= accepted_total - 1e-9);
    }
  }
}

TEST_CASE("exact ties accept without removal") {
  // everything sits in the penalty branch on both sides of the comparison,
  // so candidate and original totals are bit-identical
  EngineConfig cfg;
  cfg.decision_penalty = 0.6;
  cfg.history = 100;
  DeductionEngine engine(5, cfg);
  engine.process(make_report(0, 0.9, 100, {0}));
  engine.process(make_report(1, 0.85, 100, {0}));
  engine.process(make_report(2, 0.88, 100, {0}));

  CHECK(engine.removals().empty());
  CHECK(engine.ledger().size() == 3);
}

TEST_CASE("ledger never exceeds the configured history") {
  Rng rng(55);
  EngineConfig cfg;
  cfg.decision_penalty = 0.85;
  cfg.history = 5;
  DeductionEngine engine(6, cfg);
  for (const PdrReport& report : noisy_stream(rng, 6, 30)) {
    engine.process(report);
    CHECK(engine.ledger().size() <= 5);
  }
}

TEST_CASE("clean streams leave reactive and plain indistinguishable") {
  GroundTruth truth{{0.8, 0.9, 0.7}};
  EngineConfig cfg;
  cfg.decision_penalty = 0.85;
  cfg.history = 1000;
  DeductionEngine reactive(3, cfg, Variant::reactive);
  DeductionEngine plain(3, cfg, Variant::plain);

  std::uint64_t seq = 0;
  for (int cycle = 0; cycle < 5; ++cycle)
    for (const auto& path : ring_paths()) {
      const PdrReport report = exact_report(seq++, path, truth);
      const DeductionSnapshot& a = reactive.process(report);
      const DeductionSnapshot& b = plain.process(report);
      for (std::size_t x = 0; x < 3; ++x)
        CHECK_THAT(a.d[x], Catch::Matchers::WithinAbs(b.d[x], 1e-6));
    }
  CHECK(reactive.removals().empty());
  for (std::size_t x = 0; x < 3; ++x)
    CHECK_THAT(reactive.last_snapshot().d[x],
               Catch::Matchers::WithinAbs(truth.g[x], 1e-6));
}

TEST_CASE("a behavior change triggers removal of the stale history") {
  GroundTruth truth{{0.8, 0.9, 0.7}};
  EngineConfig cfg;
  cfg.decision_penalty = 0.15;
  cfg.history = 1000;
  DeductionEngine engine(3, cfg);

  std::uint64_t seq = 0;
  for (int cycle = 0; cycle < 3; ++cycle)
    for (const auto& path : ring_paths()) engine.process(exact_report(seq++, path, truth));
  REQUIRE(engine.removals().empty());

  truth.g[1] = 0.5; // the change the old reports now contradict
  for (int cycle = 0; cycle < 4; ++cycle)
    for (const auto& path : ring_paths()) engine.process(exact_report(seq++, path, truth));

  REQUIRE_FALSE(engine.removals().empty());
  bool removed_changed_node = false;
  for (const RemovalEvent& ev : engine.removals()) {
    CHECK(ev.reports_removed > 0);
    if (ev.node == 1) removed_changed_node = true;
  }
  CHECK(removed_changed_node);

  const DeductionSnapshot& snap = engine.last_snapshot();
  CHECK_THAT(snap.d[0], Catch::Matchers::WithinAbs(0.8, 1e-6));
  CHECK_THAT(snap.d[1], Catch::Matchers::WithinAbs(0.5, 1e-6));
  CHECK_THAT(snap.d[2], Catch::Matchers::WithinAbs(0.7, 1e-6));
}

TEST_CASE("removals only ever target nodes from the triggering report") {
  Rng rng(808);
  EngineConfig cfg;
  cfg.decision_penalty = 0.2;
  cfg.history = 10000;
  DeductionEngine engine(6, cfg);

  std::vector<PdrReport> stream = noisy_stream(rng, 6, 60);
  std::size_t seen = 0;
  for (const PdrReport& report : stream) {
    engine.process(report);
    for (; seen < engine.removals().size(); ++seen) {
      const RemovalEvent& ev = engine.removals()[seen];
      CHECK(ev.trigger_seq == report.seq);
      CHECK(report.contains(ev.node));
    }
  }
  CHECK(seen == engine.removals().size());
}

TEST_CASE("reports with no transit nodes are accepted untouched") {
  EngineConfig cfg;
  DeductionEngine engine(4, cfg);
  engine.process(make_report(0, 0.95, 500, {}));
  CHECK(engine.ledger().size() == 1);
  CHECK(engine.removals().empty());
  const DeductionSnapshot& snap = engine.last_snapshot();
  for (std::size_t x = 0; x < 4; ++x) {
    CHECK(snap.d[x] == 1.0);
    CHECK(snap.e[x] == 1.0); // nothing covered: full penalty in the published estimate
    CHECK(snap.covered[x] == 0);
  }
}

TEST_CASE("published error estimates always use full penalty weight") {
  EngineConfig cfg;
  cfg.decision_penalty = 0.1; // decision weight must not leak into snapshots
  DeductionEngine engine(3, cfg);
  const DeductionSnapshot& snap = engine.process(make_report(0, 0.9, 500, {0, 1}));
  CHECK(snap.e[0] == 1.0);
  CHECK(snap.e[1] == 1.0);
  CHECK(snap.e[2] == 1.0);
  CHECK(snap.covered[0] == 1);
  CHECK(snap.interval[0].first == 0.0);
  CHECK(snap.interval[0].second == 1.0);
}

TEST_CASE("out-of-order sequence numbers are rejected") {
  EngineConfig cfg;
  DeductionEngine reactive(3, cfg, Variant::reactive);
  reactive.process(make_report(5, 0.9, 100, {0}));
  CHECK_THROWS_AS(reactive.process(make_report(5, 0.9, 100, {0})), std::invalid_argument);
  CHECK_THROWS_AS(reactive.process(make_report(4, 0.9, 100, {0})), std::invalid_argument);

  DeductionEngine plain(3, cfg, Variant::plain);
  plain.process(make_report(5, 0.9, 100, {0}));
  CHECK_THROWS_AS(plain.process(make_report(2, 0.9, 100, {0})), std::invalid_argument);
}

TEST_CASE("snapshot rows freeze the wire format") {
  EngineConfig cfg;
  DeductionEngine engine(2, cfg);
  const DeductionSnapshot& snap = engine.process(make_report(0, 1.0, 500, {}));
  std::ostringstream os;
  os << snapshot_csv_header << '\n';
  write_snapshot_rows(os, 0, snap, 0);
  CHECK(os.str() ==
        "report_seq,node,d,e,lo,hi,coverage,removals_so_far\n"
        "0,0,1.000000,1.000000,0.000000,1.000000,0,0\n"
        "0,1,1.000000,1.000000,0.000000,1.000000,0,0\n");
}

TEST_CASE("identical streams produce identical deductions") {
  Rng rng(31415);
  const std::vector<PdrReport> stream = noisy_stream(rng, 5, 40);
  EngineConfig cfg;
  cfg.decision_penalty = 0.5;
  cfg.history = 20;
  DeductionEngine a(5, cfg), b(5, cfg);
  for (const PdrReport& report : stream) {
    const DeductionSnapshot& sa = a.process(report);
    const DeductionSnapshot& sb = b.process(report);
    CHECK(sa.d == sb.d);
    CHECK(sa.e == sb.e);
  }
  CHECK(a.removals().size() == b.removals().size());
}
