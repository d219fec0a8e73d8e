#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "pathtrust/ledger.hpp"
#include "pathtrust/report_io.hpp"
#include "pathtrust/rng.hpp"
#include "pathtrust/types.hpp"

using namespace pathtrust;

TEST_CASE("expected pdr multiplies transit behaviors") {
  GroundTruth truth{{0.8, 0.9, 0.7}};
  const std::vector<NodeId> transit{0, 1, 2};
  CHECK_THAT(expected_pdr(transit, truth), Catch::Matchers::WithinAbs(0.504, 1e-12));

  const std::vector<NodeId> pair{0, 1};
  CHECK_THAT(expected_pdr(pair, truth), Catch::Matchers::WithinAbs(0.72, 1e-12));

  const std::vector<NodeId> none;
  CHECK(expected_pdr(none, truth) == 1.0);
}

TEST_CASE("expected pdr never rises when the path grows") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    GroundTruth truth;
    truth.g.resize(10);
    for (auto& g : truth.g) g = rng.uniform(0.0, 1.0);
    std::vector<NodeId> transit;
    double prev = 1.0;
    for (NodeId x = 0; x < 10; ++x) {
      if (!rng.bernoulli(0.5)) continue;
      transit.push_back(x);
      const double cur = expected_pdr(transit, truth);
      CHECK(cur <= prev + 1e-15);
      prev = cur;
    }
  }
}

TEST_CASE("report factory validates and normalizes") {
  const PdrReport r = make_report(3, 0.5, 100, {9, 3, 7, 3});
  CHECK(r.transit == std::vector<NodeId>{3, 7, 9});
  CHECK(r.contains(7));
  CHECK_FALSE(r.contains(4));

  CHECK_THROWS_AS(make_report(0, 1.2, 100, {}), std::invalid_argument);
  CHECK_THROWS_AS(make_report(0, -0.1, 100, {}), std::invalid_argument);
  CHECK_THROWS_AS(make_report(0, 0.5, 0, {}), std::invalid_argument);
}

TEST_CASE("ledger keeps seq order and evicts oldest past capacity") {
  ReportLedger ledger(3);
  for (std::uint64_t s = 0; s < 5; ++s) ledger.append(make_report(s, 0.9, 10, {0}));
  REQUIRE(ledger.size() == 3);
  CHECK(ledger.reports().front().seq == 2);
  CHECK(ledger.reports().back().seq == 4);

  CHECK_THROWS_AS(ledger.append(make_report(4, 0.9, 10, {0})), std::invalid_argument);
  CHECK_THROWS_AS(ledger.append(make_report(2, 0.9, 10, {0})), std::invalid_argument);
}

TEST_CASE("targeted removal drops exactly the reports naming the node") {
  ReportLedger ledger(ReportLedger::unbounded);
  ledger.append(make_report(0, 0.9, 10, {0, 1}));
  ledger.append(make_report(1, 0.8, 10, {1, 2}));
  ledger.append(make_report(2, 0.7, 10, {2, 3}));
  ledger.append(make_report(3, 0.6, 10, {3, 0}));

  CHECK(ledger.coverage(1) == 2);
  const std::size_t removed = ledger.remove_containing(1);
  CHECK(removed == 2);
  CHECK(ledger.size() == 2);
  CHECK(ledger.coverage(1) == 0);
  CHECK(ledger.coverage(2) == 1);
}

TEST_CASE("report rows freeze the wire format") {
  CHECK(format_report_row(make_report(0, 0.72, 500, {3, 7, 9})) == "0,0.720000,500,3;7;9");
  CHECK(format_report_row(make_report(5, 1.0, 500, {})) == "5,1.000000,500,");
  CHECK(std::string(report_csv_header) == "seq,pdr,packets,transit");
}

TEST_CASE("report files round-trip") {
  Rng rng(11);
  std::vector<PdrReport> reports;
  for (std::uint64_t s = 0; s < 60; ++s) {
    std::vector<NodeId> transit;
    for (NodeId x = 0; x < 12; ++x)
      if (rng.bernoulli(0.3)) transit.push_back(x);
    const std::uint32_t packets = 1 + rng.uniform_index(1000);
    const std::uint32_t delivered = rng.uniform_index(packets + 1);
    reports.push_back(
        make_report(s, static_cast<double>(delivered) / packets, packets, std::move(transit)));
  }

  std::ostringstream out;
  write_reports(out, reports);
  std::istringstream in(out.str());
  const std::vector<PdrReport> back = read_reports(in);

  REQUIRE(back.size() == reports.size());
  for (std::size_t i = 0; i < reports.size(); ++i) {
    CHECK(back[i].seq == reports[i].seq);
    CHECK(back[i].packets_sent == reports[i].packets_sent);
    CHECK(back[i].transit == reports[i].transit);
    CHECK_THAT(back[i].pdr, Catch::Matchers::WithinAbs(reports[i].pdr, 5e-7));
  }
}

TEST_CASE("report parsing rejects malformed input") {
  {
    std::istringstream in("nonsense\n0,0.5,10,\n");
    CHECK_THROWS_AS(read_reports(in), std::runtime_error);
  }
  {
    std::istringstream in("seq,pdr,packets,transit\n0,0.5,10\n");
    CHECK_THROWS_AS(read_reports(in), std::runtime_error);
  }
  {
    std::istringstream in("seq,pdr,packets,transit\n0,zebra,10,1;2\n");
    CHECK_THROWS_AS(read_reports(in), std::runtime_error);
  }
  {
    std::istringstream in("seq,pdr,packets,transit\n0,1.5,10,1;2\n");
    CHECK_THROWS_AS(read_reports(in), std::runtime_error);
  }
}

TEST_CASE("rng streams are reproducible and path-sensitive") {
  Rng a(42), b(42), c(43);
  bool all_equal = true, any_differ = false;
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next_u64();
    if (va != b.next_u64()) all_equal = false;
    if (va != c.next_u64()) any_differ = true;
  }
  CHECK(all_equal);
  CHECK(any_differ);

  CHECK(Rng::derive(1, {2, 3}) != Rng::derive(1, {3, 2}));
  CHECK(Rng::derive(1, {2, 3}) == Rng::derive(1, {2, 3}));

  Rng u(5);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.next_unit();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
}
