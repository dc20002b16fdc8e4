#include "scenario/presets.hpp"

#include <stdexcept>

namespace botsim {

namespace {

std::vector<ServiceDef> default_services() {
  return {
      {"telnet23", 23, ServiceKind::Credential},
      {"telnet2323", 2323, ServiceKind::Credential},
      {"tr064", 7547, ServiceKind::Managed},
  };
}

std::vector<CredentialEntry> default_credentials(double default_share) {
  return {
      {{"admin", "admin"}, default_share * 0.5},
      {{"root", "default"}, default_share * 0.3},
      {{"root", "xc3511"}, default_share * 0.2},
      {{"owner", "correct-horse-battery"}, 1.0 - default_share},
  };
}

std::vector<CredentialPair> default_dictionary() {
  return {{"admin", "admin"}, {"root", "default"}, {"root", "xc3511"}};
}

MalwareSpec flood_malware(const std::string& name,
                          std::set<VectorTag> vectors) {
  MalwareSpec m;
  m.name = name;
  m.dictionary = default_dictionary();
  m.scan_rate_pps = 0.0;  // static pre-seeded botnet
  m.scans_from = ScansFrom::Bots;
  m.persistence = Persistence::Volatile;
  m.vectors = std::move(vectors);
  m.entry_services = {"telnet23"};
  return m;
}

TimelineAttack flood(const std::string& id, const std::string& malware,
                     const std::string& target, VectorTag vector,
                     double start, double duration, RateDist per_bot,
                     double fraction) {
  TimelineAttack attack;
  attack.command.id = id;
  attack.command.malware = malware;
  attack.command.target = target;
  attack.command.vector = vector;
  attack.command.start_s = start;
  attack.command.duration_s = duration;
  attack.command.per_bot = per_bot;
  attack.bot_fraction = fraction;
  return attack;
}

RateDist fixed(double value) {
  RateDist d;
  d.kind = RateDist::Kind::Fixed;
  d.a = value;
  return d;
}

RateDist uniform(double lo, double hi) {
  RateDist d;
  d.kind = RateDist::Kind::Uniform;
  d.a = lo;
  d.b = hi;
  return d;
}

// 24,000 devices pushing a fixed 25.96 Mbps each: a 623.04 Gbps flood of
// GRE and junk web traffic against a single hosted blog.
ScenarioSpec krebs623() {
  ScenarioSpec spec;
  spec.name = "krebs623";
  spec.seed = 623;
  spec.horizon_s = 400.0;
  spec.metric_interval_s = 1.0;
  spec.service_catalog = default_services();

  AccessRegionSpec region;
  region.name = "global";
  region.devices = 24000;
  region.cpes = 3000;
  region.dslams = 120;
  region.brases = 2;
  region.device_uplink_bps = 50e6;
  region.cpe_uplink_bps = 10e9;
  region.dslam_uplink_bps = 1e12;
  region.bras_uplink_bps = 10e12;
  spec.topology.regions.push_back(region);
  spec.topology.core_routers = 3;
  spec.topology.core_link_bps = 20e12;
  ServiceNodeSpec blog;
  blog.name = "krebs-blog";
  blog.ingress_bps = 1e12;
  spec.topology.services.push_back(blog);

  RegionDevices devices;
  devices.services = {"telnet23"};
  devices.credentials = default_credentials(0.9);
  spec.devices["global"] = devices;

  MalwareEntry mirai;
  mirai.spec = flood_malware(
      "mirai", {VectorTag::GreIp, VectorTag::Syn, VectorTag::Http});
  mirai.initial_infected = 24000;
  spec.malware.push_back(mirai);

  spec.legit_flows.push_back({"krebs-blog", 0.4e9, "global"});

  // Sequential fractions partition the 24,000 dormant bots 12k/6k/6k; every
  // bot emits the same 25.96 Mbps whichever vector it carries.
  spec.attacks.push_back(flood("gre", "mirai", "krebs-blog", VectorTag::GreIp,
                               30.0, 300.0, fixed(25.96e6), 0.5));
  spec.attacks.push_back(flood("syn", "mirai", "krebs-blog", VectorTag::Syn,
                               30.0, 300.0, fixed(25.96e6), 0.5));
  spec.attacks.push_back(flood("http", "mirai", "krebs-blog", VectorTag::Http,
                               30.0, 300.0, fixed(25.96e6), 1.0));
  spec.annotations["incident"] = "hosting-provider flood, september 2016";
  return spec;
}

// 145,607 cameras and DVRs, per-device rates inside the reported 1-30 Mbps
// band, aggregating into the 1.1-1.5 Tbps range.
ScenarioSpec ovh1100() {
  ScenarioSpec spec;
  spec.name = "ovh1100";
  spec.seed = 1100;
  spec.horizon_s = 330.0;
  spec.metric_interval_s = 1.0;
  spec.service_catalog = default_services();

  AccessRegionSpec region;
  region.name = "global";
  region.devices = 145607;
  region.cpes = 18201;
  region.dslams = 570;
  region.brases = 12;
  region.device_uplink_bps = 30e6;
  region.cpe_uplink_bps = 10e9;
  region.dslam_uplink_bps = 1e12;
  region.bras_uplink_bps = 10e12;
  spec.topology.regions.push_back(region);
  spec.topology.core_routers = 3;
  spec.topology.core_link_bps = 20e12;
  ServiceNodeSpec vps;
  vps.name = "ovh-vps";
  vps.ingress_bps = 2e12;
  spec.topology.services.push_back(vps);

  RegionDevices devices;
  devices.services = {"telnet23"};
  devices.credentials = default_credentials(0.9);
  spec.devices["global"] = devices;

  MalwareEntry mirai;
  mirai.spec = flood_malware("mirai-bashlite",
                             {VectorTag::Ack, VectorTag::Syn});
  mirai.initial_infected = 145607;
  spec.malware.push_back(mirai);

  spec.legit_flows.push_back({"ovh-vps", 1e9, "global"});

  // Mean per-bot rate 7.6 Mbps; the 145,607-device sum lands at ~1.107 Tbps
  // with a CLT width of ~1.5 Gbps.
  spec.attacks.push_back(flood("ack", "mirai-bashlite", "ovh-vps",
                               VectorTag::Ack, 30.0, 240.0,
                               uniform(1e6, 14.2e6), 0.6));
  spec.attacks.push_back(flood("syn", "mirai-bashlite", "ovh-vps",
                               VectorTag::Syn, 30.0, 240.0,
                               uniform(1e6, 14.2e6), 1.0));
  spec.annotations["incident"] = "vps-provider flood, september 2016";
  return spec;
}

// Two water-torture waves against a managed-DNS provider's regional pops,
// with client retries multiplying the legitimate load and anycast
// rebalancing plus provider-side filtering as the mitigation timeline.
ScenarioSpec dyn_watertorture() {
  ScenarioSpec spec;
  spec.name = "dyn-watertorture";
  spec.seed = 1021;
  spec.horizon_s = 75600.0;  // midnight to 21:00 UTC
  spec.metric_interval_s = 60.0;
  spec.service_catalog = default_services();

  const std::vector<std::string> regions = {"apac", "sa", "ee", "us-west",
                                            "us-east"};
  for (const std::string& name : regions) {
    AccessRegionSpec region;
    region.name = name;
    region.devices = 20000;
    region.cpes = 2500;
    region.dslams = 80;
    region.brases = 1;
    region.device_uplink_bps = 20e6;
    spec.topology.regions.push_back(region);

    ServiceNodeSpec pop;
    pop.name = "pop-" + name;
    pop.kind = NodeKind::AuthDnsServer;
    pop.region = name;
    pop.ingress_bps = 100e9;
    spec.topology.services.push_back(pop);
  }
  spec.topology.core_routers = 5;

  RegionDevices devices;
  devices.services = {"telnet23"};
  devices.credentials = default_credentials(0.9);
  for (const std::string& name : regions) spec.devices[name] = devices;

  MalwareEntry mirai;
  mirai.spec = flood_malware(
      "mirai", {VectorTag::WaterTorture, VectorTag::DnsDirect});
  mirai.initial_infected = 100000;
  spec.malware.push_back(mirai);

  spec.has_dns = true;
  spec.dns.cache_ttl_s = 300.0;
  spec.dns.load_tick_s = 1.0;
  spec.dns.retry.count = 14;  // inside the reported 10-20x retry band
  spec.dns.retry.spacing_s = 1.0;
  spec.dns.resolver_capacity_qps = 1e6;
  ZoneSetup zone;
  zone.domain = DomainName::parse("dyn-managed.net");
  for (const std::string& name : regions) {
    zone.servers.push_back(PoolServer{"pop-" + name, kNoNode, 30000.0, {name}});
    zone.legit_qps[name] = 4000.0;
  }
  spec.zones.push_back(zone);

  auto torture = [&](const std::string& id, const std::string& region,
                     double start, double duration) {
    TimelineAttack attack;
    attack.command.id = id;
    attack.command.malware = "mirai";
    attack.command.target = "dyn-managed.net";
    attack.command.vector = VectorTag::WaterTorture;
    attack.command.per_bot = fixed(2.0);  // single-digit q/s per bot
    attack.command.start_s = start;
    attack.command.duration_s = duration;
    attack.command.emission = AttackCommand::Emission::Rate;
    attack.bot_region = region;
    attack.bot_fraction = 0.5;  // the other half carries the direct junk
    return attack;
  };
  auto direct = [&](const std::string& id, const std::string& region,
                    double start, double duration) {
    TimelineAttack attack;
    attack.command.id = id;
    attack.command.malware = "mirai";
    attack.command.target = "dyn-managed.net";
    attack.command.vector = VectorTag::DnsDirect;
    attack.command.per_bot = fixed(8.0);  // masked junk straight at the pool
    attack.command.start_s = start;
    attack.command.duration_s = duration;
    attack.command.emission = AttackCommand::Emission::Rate;
    attack.bot_region = region;
    return attack;
  };

  // Wave 1, 11:10 to 13:20 UTC, four regions.
  const double w1 = 40200.0, w1_len = 7800.0;
  for (const char* name : {"apac", "sa", "ee", "us-west"}) {
    spec.attacks.push_back(torture("w1-wt-" + std::string(name), name, w1,
                                   w1_len));
    spec.attacks.push_back(direct("w1-dd-" + std::string(name), name, w1,
                                  w1_len));
  }
  // Wave 2, 15:50 to 17:00 UTC, globally distributed.
  const double w2 = 57000.0, w2_len = 4200.0;
  for (const std::string& name : regions) {
    spec.attacks.push_back(torture("w2-wt-" + name, name, w2, w2_len));
    spec.attacks.push_back(direct("w2-dd-" + name, name, w2, w2_len));
  }

  DefenseAction rebalance;
  rebalance.kind = DefenseAction::Kind::AnycastRebalance;
  rebalance.at = 43200.0;  // 12:00 UTC
  rebalance.zone = "dyn-managed.net";
  spec.defenses.push_back(rebalance);

  DefenseAction filtering;
  filtering.kind = DefenseAction::Kind::AttachScrubber;
  filtering.at = 45600.0;  // 12:40 UTC
  filtering.target = "dyn-managed.net";
  filtering.policy.efficacy[VectorTag::WaterTorture] = 0.85;
  filtering.policy.efficacy[VectorTag::DnsDirect] = 0.85;
  spec.defenses.push_back(filtering);

  spec.annotations["incident"] = "managed-dns outage, october 2016";
  spec.annotations["retry_factor"] = "14";
  return spec;
}

// A TR-064 exploit wave against 900,000 home routers: the exploit fails on
// this fleet but crashes modems, and the operator recovers with periodic
// user power-cycles plus a firmware patch and final reboot.
ScenarioSpec dt_tr064() {
  ScenarioSpec spec;
  spec.name = "dt-tr064";
  spec.seed = 1127;
  spec.horizon_s = 50400.0;  // 14 hours
  spec.metric_interval_s = 60.0;
  spec.service_catalog = default_services();
  spec.vuln_catalog = {"tr064-command-injection"};

  AccessRegionSpec region;
  region.name = "de";
  region.devices = 900000;
  region.cpes = 112500;
  region.dslams = 3600;
  region.brases = 12;
  region.device_uplink_bps = 20e6;
  spec.topology.regions.push_back(region);
  spec.topology.core_routers = 2;

  RegionDevices devices;
  devices.services = {"tr064"};
  devices.credentials = {{{"owner", "strong-unique"}, 1.0}};
  devices.vulns = {{"tr064-command-injection", 0.02}};
  devices.patchable = true;
  spec.devices["de"] = devices;

  spec.address_space = 4294967296.0;
  spec.timings.scan_tick_s = 5.0;

  MalwareEntry variant;
  variant.spec.name = "mirai-tr064";
  variant.spec.scan_rate_pps = 2000.0;
  variant.spec.scans_from = ScansFrom::ExternalScanner;
  variant.spec.persistence = Persistence::Volatile;
  variant.spec.entry_services = {"tr064"};
  variant.spec.exploit_ids = {"tr064-command-injection"};
  variant.spec.crash_probability = 0.30;
  variant.external_scanner = ExternalScannerSetup{60, 0.0, 43200.0};
  spec.malware.push_back(variant);

  auto reboot_crashed = [](double at) {
    DefenseAction action;
    action.kind = DefenseAction::Kind::Reboot;
    action.at = at;
    action.devices.kind = DeviceSelector::Kind::Crashed;
    return action;
  };
  // Users power-cycle dead modems in waves while the scan is still running.
  spec.defenses.push_back(reboot_crashed(14400.0));
  spec.defenses.push_back(reboot_crashed(28800.0));
  // Firmware patch pushed after the wave, then a full restart.
  DefenseAction patch;
  patch.kind = DefenseAction::Kind::Patch;
  patch.at = 45000.0;
  patch.vuln = "tr064-command-injection";
  spec.defenses.push_back(patch);
  DefenseAction reboot_all;
  reboot_all.kind = DefenseAction::Kind::Reboot;
  reboot_all.at = 45060.0;
  spec.defenses.push_back(reboot_all);

  spec.annotations["incident"] = "isp router outage, november 2016";
  return spec;
}

// Heating controllers knocked into a reboot loop by a modest flood; a
// firewall (scrubber) in front of them ends the loop.
ScenarioSpec lappeenranta_loop() {
  ScenarioSpec spec;
  spec.name = "lappeenranta-loop";
  spec.seed = 1103;
  spec.horizon_s = 4200.0;
  spec.metric_interval_s = 10.0;
  spec.service_catalog = default_services();

  AccessRegionSpec region;
  region.name = "botnet-src";
  region.devices = 200;
  region.cpes = 25;
  region.dslams = 2;
  region.brases = 1;
  region.device_uplink_bps = 5e6;
  spec.topology.regions.push_back(region);
  spec.topology.core_routers = 2;

  for (const char* name : {"heating-a", "heating-b"}) {
    ServiceNodeSpec controller;
    controller.name = name;
    controller.ingress_bps = 10e6;
    spec.topology.services.push_back(controller);
  }
  ServiceNodeSpec scrubber;
  scrubber.name = "firewall";
  scrubber.kind = NodeKind::ScrubberPop;
  scrubber.ingress_bps = 1e9;
  spec.topology.services.push_back(scrubber);

  RegionDevices devices;
  devices.services = {"telnet23"};
  devices.credentials = default_credentials(0.9);
  spec.devices["botnet-src"] = devices;

  MalwareEntry mirai;
  mirai.spec = flood_malware("mirai", {VectorTag::Udp});
  mirai.initial_infected = 200;
  spec.malware.push_back(mirai);

  for (const char* name : {"heating-a", "heating-b"}) {
    spec.legit_flows.push_back({name, 0.2e6, ""});
    TargetBehavior behavior;
    behavior.name = name;
    behavior.overload_threshold_bps = 5e6;
    behavior.check_interval_s = 30.0;
    spec.target_behavior.push_back(behavior);
  }

  spec.attacks.push_back(flood("flood-a", "mirai", "heating-a", VectorTag::Udp,
                               600.0, 3600.0, fixed(1e6), 0.5));
  spec.attacks.push_back(flood("flood-b", "mirai", "heating-b", VectorTag::Udp,
                               600.0, 3600.0, fixed(1e6), 1.0));

  for (const char* name : {"heating-a", "heating-b"}) {
    DefenseAction firewall;
    firewall.kind = DefenseAction::Kind::AttachScrubber;
    firewall.at = 3000.0;
    firewall.target = name;
    firewall.scrubber = "firewall";
    firewall.policy.efficacy[VectorTag::Udp] = 1.0;
    spec.defenses.push_back(firewall);
  }
  spec.annotations["incident"] = "building-automation reboot loop, 2016";
  return spec;
}

// Epidemic calibration: 213,000 seed bots growing to ~483,000 over two
// weeks in a 600,000-device susceptible population. The per-bot probe rate
// is back-solved from the logistic growth those endpoints imply:
//   k = ln(x)/T with x from the logistic boundary conditions, and
//   scan_rate = k * address_space / population = 0.0119246 probes/s.
ScenarioSpec mirai_growth() {
  ScenarioSpec spec;
  spec.name = "mirai-growth";
  spec.seed = 483;
  spec.horizon_s = 1209600.0;  // 14 days
  spec.metric_interval_s = 3600.0;
  spec.service_catalog = default_services();

  AccessRegionSpec region;
  region.name = "global";
  region.devices = 600000;
  region.cpes = 75000;
  region.dslams = 2400;
  region.brases = 13;
  region.device_uplink_bps = 10e6;
  spec.topology.regions.push_back(region);
  spec.topology.core_routers = 2;

  RegionDevices devices;
  devices.services = {"telnet23"};
  devices.credentials = {{{"admin", "admin"}, 1.0}};  // fully susceptible
  spec.devices["global"] = devices;

  spec.address_space = 4294967296.0;
  spec.timings.scan_tick_s = 300.0;

  MalwareEntry mirai;
  mirai.spec = flood_malware("mirai", {VectorTag::Syn});
  mirai.spec.scan_rate_pps = 0.0119246;
  mirai.initial_infected = 213000;
  spec.malware.push_back(mirai);

  spec.annotations["incident"] = "post-source-release growth, october 2016";
  spec.annotations["calibration"] =
      "scan_rate_pps back-solved from the 213k to 483k two-week endpoints";
  return spec;
}

// 25,000 compromised CCTV devices pushing junk HTTP at a small storefront;
// per-bot 32 kbps stands in for ~2 requests/s of 2 kB each, so the fleet
// peaks at the reported ~50,000 requests/s.
ScenarioSpec cctv_http() {
  ScenarioSpec spec;
  spec.name = "cctv-http";
  spec.seed = 25000;
  spec.horizon_s = 3000.0;
  spec.metric_interval_s = 5.0;
  spec.service_catalog = default_services();

  AccessRegionSpec region;
  region.name = "global";
  region.devices = 25000;
  region.cpes = 3125;
  region.dslams = 100;
  region.brases = 1;
  region.device_uplink_bps = 5e6;
  spec.topology.regions.push_back(region);
  spec.topology.core_routers = 2;

  ServiceNodeSpec shop;
  shop.name = "storefront";
  shop.ingress_bps = 0.5e9;
  spec.topology.services.push_back(shop);
  ServiceNodeSpec scrubber;
  scrubber.name = "dns-mitigation";
  scrubber.kind = NodeKind::ScrubberPop;
  scrubber.ingress_bps = 10e9;
  spec.topology.services.push_back(scrubber);

  RegionDevices devices;
  devices.services = {"telnet23"};
  devices.credentials = default_credentials(0.9);
  spec.devices["global"] = devices;

  MalwareEntry bashlite;
  bashlite.spec = flood_malware("bashlite-cctv", {VectorTag::Http});
  bashlite.initial_infected = 25000;
  spec.malware.push_back(bashlite);

  spec.legit_flows.push_back({"storefront", 50e6, "global"});
  spec.attacks.push_back(flood("http-flood", "bashlite-cctv", "storefront",
                               VectorTag::Http, 300.0, 2400.0, fixed(32000.0),
                               1.0));
  DefenseAction mitigation;
  mitigation.kind = DefenseAction::Kind::AttachScrubber;
  mitigation.at = 2000.0;
  mitigation.target = "storefront";
  mitigation.scrubber = "dns-mitigation";
  mitigation.policy.efficacy[VectorTag::Http] = 0.99;
  spec.defenses.push_back(mitigation);

  spec.annotations["incident"] = "cctv botnet vs small-business site, 2016";
  spec.annotations["request_equivalent_rps"] = "50000";
  spec.annotations["request_bytes"] = "2000";
  return spec;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"krebs623",          "ovh1100",     "dyn-watertorture",
          "dt-tr064",          "lappeenranta-loop",
          "mirai-growth",      "cctv-http"};
}

bool is_preset(const std::string& name) {
  for (const std::string& p : preset_names()) {
    if (p == name) return true;
  }
  return false;
}

ScenarioSpec preset(const std::string& name) {
  if (name == "krebs623") return krebs623();
  if (name == "ovh1100") return ovh1100();
  if (name == "dyn-watertorture") return dyn_watertorture();
  if (name == "dt-tr064") return dt_tr064();
  if (name == "lappeenranta-loop") return lappeenranta_loop();
  if (name == "mirai-growth") return mirai_growth();
  if (name == "cctv-http") return cctv_http();
  std::string known;
  for (const std::string& p : preset_names()) {
    if (!known.empty()) known += ", ";
    known += p;
  }
  throw std::invalid_argument("unknown preset '" + name +
                              "'; available: " + known);
}

}  // namespace botsim
