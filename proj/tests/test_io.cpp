#include <doctest.h>

#include <sstream>

#include "eonspectra/error.hpp"
#include "eonspectra/io.hpp"
#include "support.hpp"

using namespace eonspectra;
using namespace eonspectra::test;

namespace {

ErrorCode load_error(const std::string& doc) {
  try {
    (void)load_topology(doc);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("document accepted: " << doc);
  return ErrorCode::internal;
}

const char* kPair = R"({"name":"pair","slot_count":10,"nodes":["x","y"],
  "edges":[{"a":"x","b":"y","weight":1}]})";

}  // namespace

TEST_SUITE("io") {

TEST_CASE("topology documents") {
  const NetworkGraph g = load_topology(kPair);
  CHECK(g.link_count() == 2);
  CHECK(g.slot_count() == 10);
  CHECK(g.find_link(0, 1).has_value());
  CHECK(g.find_link(1, 0).has_value());

  const NetworkGraph d = load_topology(
      R"({"name":"d","slot_count":4,"nodes":[1,2],"edges":[{"a":1,"b":2,"weight":2.5,"directed":true}]})");
  CHECK(d.link_count() == 1);
  CHECK(d.label(0) == "1");
  CHECK(d.link(0).weight == 2.5);

  CHECK(load_error("{not json") == ErrorCode::parse);
  CHECK(load_error(R"({"name":"x","nodes":["a"],"edges":[]})") == ErrorCode::parse);
  CHECK(load_error(R"({"name":"x","slot_count":4,"nodes":["a","b"],
    "edges":[{"a":"a","b":"b","weight":0}]})") == ErrorCode::nonpositive_weight);
  CHECK(load_error(R"({"name":"x","slot_count":4,"nodes":["a","b"],
    "edges":[{"a":"a","b":"b","weight":1},{"a":"b","b":"a","weight":1}]})") ==
        ErrorCode::duplicate_edge);
  CHECK(load_error(R"({"name":"x","slot_count":4,"nodes":["a","b"],
    "edges":[{"a":"a","b":"c","weight":1}]})") == ErrorCode::missing_node);
  CHECK(load_error(R"({"name":"x","slot_count":4,"nodes":["a","a"],"edges":[]})") ==
        ErrorCode::invalid_argument);
}

TEST_CASE("NSF fixture") {
  const NetworkGraph g = load_fixture("nsfnet.json");
  CHECK(g.node_count() == 14);
  CHECK(g.link_count() == 42);
  CHECK(g.mean_out_degree() == doctest::Approx(3.0));
}

TEST_CASE("demand documents") {
  const NetworkGraph g = load_topology(kPair);
  const auto d = load_demands(R"([{"src":"x","dst":"y","rate":0.5,"hold":2,"slots":3},
    {"src":"y","dst":"x","rate":1,"hold":1,"slots":[{"s":1,"p":0.25},{"s":2,"p":0.75}]}])",
                              g);
  REQUIRE(d.size() == 2);
  CHECK(d[0].erlangs() == 1.0);
  CHECK(d[0].mean_slots() == 3.0);
  CHECK(d[1].mean_slots() == doctest::Approx(1.75));
  CHECK_THROWS_AS((void)load_demands(R"([{"src":"x","dst":"q","rate":1,"hold":1,"slots":1}])", g),
                  Error);
  CHECK_THROWS_AS((void)load_demands(R"([{"src":"x","dst":"y","rate":1,"hold":1,"slots":11}])", g),
                  Error);
  CHECK_THROWS_AS(
      (void)load_demands(
          R"([{"src":"x","dst":"y","rate":1,"hold":1,"slots":[{"s":1,"p":0.5},{"s":2,"p":0.4}]}])", g),
      Error);
  CHECK_THROWS_AS((void)load_demands(R"({"src":"x"})", g), Error);
}

TEST_CASE("architecture documents") {
  const NetworkGraph g = load_topology(kPair);
  const auto a = load_architectures(R"({"y":{"kind":"share_per_link","n_sc":2}})", g);
  CHECK(a[0] == NodeArchitecture::simple());
  CHECK(a[1] == NodeArchitecture::share_per_link(2));
  CHECK_THROWS_AS((void)load_architectures(R"({"y":{"kind":"share_per_node","n_sc":0}})", g),
                  Error);
  CHECK_THROWS_AS((void)load_architectures(R"({"z":{"kind":"full"}})", g), Error);
  CHECK_THROWS_AS((void)load_architectures(R"({"x":{"kind":"magic"}})", g), Error);
}

TEST_CASE("round trips") {
  const NetworkGraph g = load_fixture("six_node.json");
  const NetworkGraph again = load_topology(topology_json(g).dump());
  CHECK(again.link_count() == g.link_count());
  for (const Link& l : g.links()) {
    const auto id = again.find_link(l.tail, l.head);
    REQUIRE(id.has_value());
    CHECK(again.link(*id).weight == l.weight);
  }
  const auto d = load_demands(read_file(data_path("six_node_demands.json")), g);
  const auto d2 = load_demands(demands_json(g, d).dump(), g);
  REQUIRE(d2.size() == d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(d2[i].rate == d[i].rate);
    CHECK(d2[i].hold == d[i].hold);
    CHECK(d2[i].mean_slots() == d[i].mean_slots());
  }
  ArchitectureMap archs(6);
  archs[4] = NodeArchitecture::share_per_node(3);
  CHECK(load_architectures(architectures_json(g, archs).dump(), g) == archs);
}

TEST_CASE("CSV schemas") {
  const NetworkGraph g = load_fixture("six_node.json");
  const auto d = load_demands(read_file(data_path("six_node_demands.json")), g);
  const NetworkModel model(g, d);
  AnalysisConfig cfg;
  cfg.damping = 0.5;
  const AnalysisResult r = fixed_point(model, ArchitectureMap(6), cfg);
  std::ostringstream demands, links, summary;
  write_analysis_demands_csv(demands, model, r);
  write_analysis_links_csv(links, model, r);
  write_analysis_summary_csv(summary, model, r);
  CHECK(demands.str().rfind("src,dst,hops,blocking\n", 0) == 0);
  CHECK(links.str().rfind("link,tail,head,phi\n", 0) == 0);
  CHECK(summary.str().rfind("converged,iterations,network_blocking,traffic,clamp_breaches\n", 0) ==
        0);
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
}

TEST_CASE("missing files") {
  CHECK_THROWS_AS((void)read_file(data_path("does-not-exist.json")), Error);
}

}  // TEST_SUITE
