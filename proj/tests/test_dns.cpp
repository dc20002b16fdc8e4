#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "dns/dns_system.hpp"
#include "engine/rng.hpp"

using namespace botsim;

namespace {

DnsSystem make_system(double pool_capacity, int servers = 1,
                      double legit_qps = 0.0, int retry = 0) {
  DnsConfig cfg;
  cfg.cache_ttl_s = 300.0;
  cfg.retry.count = retry;
  cfg.retry.spacing_s = 1.0;
  ZoneSetup zone;
  zone.domain = DomainName::parse("example.com");
  for (int i = 0; i < servers; ++i) {
    zone.servers.push_back(
        PoolServer{"auth" + std::to_string(i), kNoNode, pool_capacity, {}});
  }
  if (legit_qps > 0.0) zone.legit_qps["global"] = legit_qps;
  return DnsSystem(cfg, {ResolverSetup{"eu", kNoNode, 1e9}}, {zone});
}

DnsQuery query_for(const std::string& name, bool torture = false) {
  return DnsQuery{DomainName::parse(name), kNoNode, 0.0, 0, torture};
}

}  // namespace

TEST_CASE("domain names normalize case and validate shape") {
  DomainName n = DomainName::parse("WWW.Amazon.COM");
  CHECK(n.render() == "www.amazon.com");
  CHECK(n.labels.size() == 3);
  CHECK(n.ends_with(DomainName::parse("amazon.com")));
  CHECK_FALSE(n.ends_with(DomainName::parse("mazon.com")));
  CHECK_THROWS_AS(DomainName::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(DomainName::parse("a..b"), std::invalid_argument);
  CHECK_THROWS_AS(DomainName::parse("bad name.com"), std::invalid_argument);
  CHECK_THROWS_AS(DomainName::parse(std::string(300, 'a') + ".com"),
                  std::invalid_argument);
}

TEST_CASE("cold cache recursion walks three tiers and caches the answer") {
  DnsSystem dns = make_system(1000.0);
  auto first = dns.resolve(0.0, "eu", query_for("www.example.com"));
  CHECK(first.outcome == ResolutionResult::Outcome::Recursed);
  CHECK(first.auth_queries == 3);

  auto second = dns.resolve(0.5, "eu", query_for("www.example.com"));
  CHECK(second.outcome == ResolutionResult::Outcome::Hit);
  CHECK(second.auth_queries == 0);
  CHECK(dns.cache_hits() == 1);
  CHECK(dns.pool_arrivals(0) == 1);
}

TEST_CASE("expired cache entries are never served") {
  DnsSystem dns = make_system(1000.0);
  dns.resolve(0.0, "eu", query_for("www.example.com"));
  auto later = dns.resolve(301.0, "eu", query_for("www.example.com"));
  CHECK(later.outcome == ResolutionResult::Outcome::Recursed);
  CHECK(dns.cache_hits() == 0);
}

TEST_CASE("unique random-prefix names always miss the cache") {
  DnsSystem dns = make_system(1e6);
  RngStream rng(5, "prefix");
  std::set<std::string> names;
  for (int i = 0; i < 10; ++i) {
    std::string prefix;
    for (int c = 0; c < 12; ++c) {
      prefix.push_back("abcdefghijklmnopqrstuvwxyz0123456789"[rng.below(36)]);
    }
    names.insert(prefix);
    auto r = dns.resolve(0.1 * i, "eu",
                         query_for(prefix + ".example.com", true));
    CHECK(r.outcome == ResolutionResult::Outcome::Recursed);
  }
  CHECK(names.size() == 10);  // distinct prefixes by construction
  CHECK(dns.pool_arrivals(0) == 10);
  CHECK(dns.cache_hits_torture() == 0);
}

TEST_CASE("waterfall dispatch fills servers in failover order") {
  std::vector<PoolServer> servers{
      {"a", kNoNode, 100.0, {}},
      {"b", kNoNode, 100.0, {}},
  };
  auto one = auth_pool_dispatch({servers[0]}, 50.0);
  CHECK(one.per_server_qps[0] == doctest::Approx(50.0));
  CHECK(one.dropped_qps == doctest::Approx(0.0));

  auto both = auth_pool_dispatch(servers, 250.0);
  CHECK(both.per_server_qps[0] == doctest::Approx(100.0));
  CHECK(both.per_server_qps[1] == doctest::Approx(100.0));
  CHECK(both.dropped_qps == doctest::Approx(50.0));
}

TEST_CASE("dropped load is piecewise linear in offered load") {
  std::vector<PoolServer> servers{
      {"a", kNoNode, 100.0, {}},
      {"b", kNoNode, 100.0, {}},
  };
  for (double offered = 0.0; offered <= 300.0; offered += 7.5) {
    auto d = auth_pool_dispatch(servers, offered);
    CHECK(d.dropped_qps == doctest::Approx(std::max(0.0, offered - 200.0)));
  }
  // Monotone: more offered never means less dropped.
  double last = 0.0;
  for (double offered = 0.0; offered <= 400.0; offered += 11.0) {
    auto d = auth_pool_dispatch(servers, offered);
    CHECK(d.dropped_qps >= last - 1e-12);
    last = d.dropped_qps;
  }
}

TEST_CASE("retry multiplier arithmetic") {
  CHECK(retry_multiplier(0, 1.0) == doctest::Approx(1.0));
  CHECK(retry_multiplier(3, 0.25) == doctest::Approx(1.75));
  CHECK(retry_multiplier(9, 1.0) == doctest::Approx(10.0));
  CHECK(retry_multiplier(19, 1.0) == doctest::Approx(20.0));
}

TEST_CASE("full outage sustains (1 + r) times the baseline offered load") {
  for (int r : {0, 9, 14, 19}) {
    DnsSystem dns = make_system(0.0, 1, 1000.0, r);
    // Warm up past the retry echo horizon, then check steady state.
    double offered = 0.0;
    for (int tick = 0; tick < 60; ++tick) {
      const auto& stats = dns.step_load(tick * 1.0);
      offered = stats[0].offered_qps;
    }
    CHECK(offered == doctest::Approx((1.0 + r) * 1000.0).epsilon(1e-9));
    CHECK(dns.lookup_fail_fraction(0) == doctest::Approx(1.0));
  }
}

TEST_CASE("retry echo under partial failure reaches its fixed point") {
  // Retries compete with the base load for the same capacity, so the
  // sustained rate solves offered = 1000 + 3*1000*(1 - 750/offered):
  // offered^2 - 4000*offered + 2,250,000 = 0, stable root 3322.876.
  DnsSystem dns = make_system(750.0, 1, 1000.0, 3);
  double offered = 0.0;
  for (int tick = 0; tick < 400; ++tick) {
    offered = dns.step_load(tick * 1.0)[0].offered_qps;
  }
  CHECK(offered == doctest::Approx(3322.876).epsilon(1e-4));
}

TEST_CASE("expectation arithmetic when a quarter of lookups fail") {
  // Pure arithmetic check of the spec'd example, without capacity feedback.
  CHECK(retry_multiplier(3, 0.25) == doctest::Approx(1.75));
}

TEST_CASE("resolver recursion capacity limits discrete queries") {
  DnsConfig cfg;
  ZoneSetup zone;
  zone.domain = DomainName::parse("example.com");
  zone.servers.push_back(PoolServer{"a", kNoNode, 1e6, {}});
  DnsSystem dns(cfg, {ResolverSetup{"eu", kNoNode, 2.0}}, {zone});
  int failed = 0;
  for (int i = 0; i < 5; ++i) {
    auto r = dns.resolve(0.1 + 0.01 * i, "eu",
                         query_for("n" + std::to_string(i) + ".example.com"));
    if (r.outcome == ResolutionResult::Outcome::Failed) failed++;
  }
  CHECK(failed == 3);  // capacity 2 q/s within the one-second window
}

TEST_CASE("pool token exhaustion fails discrete lookups") {
  DnsSystem dns = make_system(3.0);
  int ok = 0, failed = 0;
  for (int i = 0; i < 10; ++i) {
    auto r = dns.resolve(0.05 * i, "eu",
                         query_for("u" + std::to_string(i) + ".example.com"));
    (r.outcome == ResolutionResult::Outcome::Recursed ? ok : failed)++;
  }
  CHECK(ok == 3);
  CHECK(failed == 7);
  CHECK(dns.pool_arrivals(0) == 10);  // drops still arrived at the pool
}

TEST_CASE("anycast rebalance splits load by capacity") {
  auto single = anycast_rebalance({100.0}, 42.0);
  CHECK(single[0] == doctest::Approx(42.0));

  auto even = anycast_rebalance({100.0, 100.0}, 80.0);
  CHECK(even[0] == doctest::Approx(40.0));
  CHECK(even[1] == doctest::Approx(40.0));

  auto skew = anycast_rebalance({300.0, 100.0}, 100.0);
  CHECK(skew[0] == doctest::Approx(75.0));
  CHECK(skew[1] == doctest::Approx(25.0));
  CHECK_THROWS_AS(anycast_rebalance({}, 1.0), std::invalid_argument);
}

TEST_CASE("regional affinity overloads one pop until rebalance") {
  DnsConfig cfg;
  ZoneSetup zone;
  zone.domain = DomainName::parse("managed.net");
  zone.servers.push_back(PoolServer{"east", kNoNode, 1000.0, {"us-east"}});
  zone.servers.push_back(PoolServer{"west", kNoNode, 1000.0, {"us-west"}});
  zone.servers.push_back(PoolServer{"eu", kNoNode, 1000.0, {"europe"}});
  zone.legit_qps = {{"us-east", 400.0}, {"us-west", 300.0}, {"europe", 300.0}};
  DnsSystem dns(cfg, {}, {zone});

  // Focused attack on the us-east pop.
  dns.set_direct_rate("attack", 0, "us-east", 1600.0);
  dns.step_load(0.0);
  CHECK(dns.lookup_fail_fraction(0, "us-east") == doctest::Approx(0.5));
  CHECK(dns.lookup_fail_fraction(0, "us-west") == doctest::Approx(0.0));
  CHECK(dns.lookup_fail_fraction(0, "europe") == doctest::Approx(0.0));

  // After rebalancing, 2600 q/s spread over 3000 q/s of pooled capacity.
  dns.rebalance_zone(0);
  dns.step_load(1.0);
  CHECK(dns.lookup_fail_fraction(0, "us-east") == doctest::Approx(0.0));
  CHECK(dns.lookup_fail_fraction(0, "us-west") == doctest::Approx(0.0));
}

TEST_CASE("torture rates are clipped by the regional resolver") {
  DnsConfig cfg;
  ZoneSetup zone;
  zone.domain = DomainName::parse("example.com");
  zone.servers.push_back(PoolServer{"a", kNoNode, 10000.0, {}});
  DnsSystem dns(cfg, {ResolverSetup{"eu", kNoNode, 500.0}}, {zone});
  dns.set_torture_rate("bots", 0, "eu", 2000.0);
  const auto& stats = dns.step_load(0.0);
  CHECK(stats[0].offered_qps == doctest::Approx(500.0));
}

TEST_CASE("missing resolver region is an error") {
  DnsSystem dns = make_system(10.0);
  CHECK_THROWS_AS(dns.resolve(0.0, "mars", query_for("x.example.com")),
                  std::invalid_argument);
  CHECK(dns.has_resolver("eu"));
  CHECK_FALSE(dns.has_resolver("mars"));
}
