#include "scenario/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace botsim {

using nlohmann::json;

std::string ValidationError::render() const {
  std::string out = path.empty() ? std::string("<root>") : path;
  if (line > 0) out += " (line " + std::to_string(line) + ")";
  return out + ": " + message;
}

namespace {

// ---------------------------------------------------------------------------
// Source-position index: maps dotted config paths to 1-based line numbers by
// scanning the raw text with a tiny JSON walker. Runs only on documents that
// nlohmann already accepted, so it can assume well-formed input.
class PositionIndex {
 public:
  explicit PositionIndex(const std::string& text) : text_(text) { scan(); }

  int line_of(const std::string& path) const {
    auto it = lines_.find(path);
    return it == lines_.end() ? 0 : it->second;
  }

 private:
  void scan() {
    pos_ = 0;
    line_ = 1;
    parse_value("");
  }

  char peek() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        line_++;
        pos_++;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        pos_++;
      } else {
        return c;
      }
    }
    return '\0';
  }

  std::string parse_string() {
    std::string out;
    pos_++;  // opening quote
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') pos_++;
      if (text_[pos_] == '\n') line_++;
      out.push_back(text_[pos_]);
      pos_++;
    }
    pos_++;  // closing quote
    return out;
  }

  void parse_value(const std::string& path) {
    char c = peek();
    lines_.emplace(path, line_);
    if (c == '{') {
      pos_++;
      while (true) {
        c = peek();
        if (c == '}') {
          pos_++;
          return;
        }
        if (c == ',') {
          pos_++;
          continue;
        }
        std::string key = parse_string();
        peek();  // ':'
        pos_++;
        parse_value(path.empty() ? key : path + "." + key);
      }
    } else if (c == '[') {
      pos_++;
      int index = 0;
      while (true) {
        c = peek();
        if (c == ']') {
          pos_++;
          return;
        }
        if (c == ',') {
          pos_++;
          continue;
        }
        parse_value(path + "[" + std::to_string(index++) + "]");
      }
    } else if (c == '"') {
      parse_string();
    } else {
      while (pos_ < text_.size() &&
             std::string_view(",]}\n \t\r").find(text_[pos_]) ==
                 std::string_view::npos) {
        pos_++;
      }
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::map<std::string, int> lines_;
};

// ---------------------------------------------------------------------------
// Validation context: error sink plus typed accessors over the parsed DOM.
struct Ctx {
  const PositionIndex& index;
  std::vector<ValidationError>& errors;

  void error(const std::string& path, const std::string& message) {
    errors.push_back(ValidationError{path, index.line_of(path), message});
  }
};

std::string join(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

struct Cursor {
  Ctx& ctx;
  const json* j;  // null when the node is absent
  std::string path;

  bool present() const { return j != nullptr && !j->is_null(); }

  Cursor child(const std::string& key) const {
    if (present() && j->is_object() && j->contains(key)) {
      return Cursor{ctx, &(*j)[key], join(path, key)};
    }
    return Cursor{ctx, nullptr, join(path, key)};
  }

  Cursor item(std::size_t i) const {
    return Cursor{ctx, &(*j)[i], path + "[" + std::to_string(i) + "]"};
  }

  std::size_t size() const { return present() ? j->size() : 0; }

  void known_keys(std::initializer_list<const char*> allowed) const {
    if (!present() || !j->is_object()) return;
    for (auto it = j->begin(); it != j->end(); ++it) {
      bool ok = false;
      for (const char* k : allowed) {
        if (it.key() == k) ok = true;
      }
      if (!ok) ctx.error(join(path, it.key()), "unknown key");
    }
  }

  double num(double fallback) const {
    if (!present()) return fallback;
    if (!j->is_number()) {
      ctx.error(path, "expected a number");
      return fallback;
    }
    return j->get<double>();
  }

  double require_num(const char* what) const {
    if (!present() || !j->is_number()) {
      ctx.error(path, std::string("missing required number: ") + what);
      return 0.0;
    }
    return j->get<double>();
  }

  std::string str(const std::string& fallback) const {
    if (!present()) return fallback;
    if (!j->is_string()) {
      ctx.error(path, "expected a string");
      return fallback;
    }
    return j->get<std::string>();
  }

  bool boolean(bool fallback) const {
    if (!present()) return fallback;
    if (!j->is_boolean()) {
      ctx.error(path, "expected a boolean");
      return fallback;
    }
    return j->get<bool>();
  }

  bool is_array_or_report() const {
    if (!present()) return false;
    if (!j->is_array()) {
      ctx.error(path, "expected an array");
      return false;
    }
    return true;
  }
};

// Rate value with unit-suffixed aliases: base_bps / base_mbps / base_gbps
// (or bare bps / mbps / gbps when base is empty).
double rate_field(const Cursor& parent, const std::string& base,
                  double fallback) {
  const std::string stem = base.empty() ? "" : base + "_";
  Cursor bps = parent.child(stem + "bps");
  if (bps.present()) return bps.num(fallback);
  Cursor mbps = parent.child(stem + "mbps");
  if (mbps.present()) return mbps.num(fallback / 1e6) * 1e6;
  Cursor gbps = parent.child(stem + "gbps");
  if (gbps.present()) return gbps.num(fallback / 1e9) * 1e9;
  return fallback;
}

std::optional<VectorTag> vector_from(const std::string& name) {
  static const std::map<std::string, VectorTag> table = {
      {"syn", VectorTag::Syn},
      {"ack", VectorTag::Ack},
      {"udp", VectorTag::Udp},
      {"http", VectorTag::Http},
      {"gre-ip", VectorTag::GreIp},
      {"gre-eth", VectorTag::GreEth},
      {"stomp", VectorTag::Stomp},
      {"dns-direct", VectorTag::DnsDirect},
      {"water-torture", VectorTag::WaterTorture},
      {"reflection", VectorTag::Reflection},
  };
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

RateDist rate_dist(const Cursor& node, double unit_scale) {
  RateDist dist;
  node.known_keys({"dist", "value", "min", "max"});
  std::string kind = node.child("dist").str("fixed");
  if (kind == "fixed") {
    dist.kind = RateDist::Kind::Fixed;
    dist.a = node.child("value").require_num("value") * unit_scale;
  } else if (kind == "uniform") {
    dist.kind = RateDist::Kind::Uniform;
    dist.a = node.child("min").require_num("min") * unit_scale;
    dist.b = node.child("max").require_num("max") * unit_scale;
  } else {
    node.ctx.error(node.path, "dist must be fixed or uniform");
  }
  try {
    dist.validate();
  } catch (const std::exception& e) {
    node.ctx.error(node.path, e.what());
  }
  return dist;
}

DeviceSelector selector(const Cursor& node) {
  DeviceSelector sel;
  if (!node.present()) return sel;  // default: all
  node.known_keys({"kind", "arg", "fraction"});
  std::string kind = node.child("kind").str("all");
  if (kind == "all") {
    sel.kind = DeviceSelector::Kind::All;
  } else if (kind == "crashed") {
    sel.kind = DeviceSelector::Kind::Crashed;
  } else if (kind == "infected") {
    sel.kind = DeviceSelector::Kind::InfectedBy;
    sel.arg = node.child("arg").str("");
  } else if (kind == "region") {
    sel.kind = DeviceSelector::Kind::Region;
    sel.arg = node.child("arg").str("");
  } else if (kind == "sample") {
    sel.kind = DeviceSelector::Kind::Sample;
    sel.fraction = node.child("fraction").require_num("fraction");
    if (sel.fraction < 0.0 || sel.fraction > 1.0) {
      node.ctx.error(node.path + ".fraction", "fraction must be in [0,1]");
    }
  } else {
    node.ctx.error(node.path + ".kind", "unknown device selector");
  }
  return sel;
}

// ---------------------------------------------------------------------------

void read_services(const Cursor& root, ScenarioSpec& spec) {
  Cursor services = root.child("services");
  if (!services.is_array_or_report()) return;
  for (std::size_t i = 0; i < services.size(); ++i) {
    Cursor s = services.item(i);
    s.known_keys({"name", "port", "kind"});
    ServiceDef def;
    def.name = s.child("name").str("");
    if (def.name.empty()) s.ctx.error(s.path, "service needs a name");
    def.port = static_cast<std::uint16_t>(s.child("port").num(0));
    std::string kind = s.child("kind").str("credential");
    if (kind == "credential") {
      def.kind = ServiceKind::Credential;
    } else if (kind == "managed") {
      def.kind = ServiceKind::Managed;
    } else {
      s.ctx.error(s.path + ".kind", "kind must be credential or managed");
    }
    spec.service_catalog.push_back(def);
  }
  if (spec.service_catalog.size() > 31) {
    root.ctx.error("services", "at most 31 services are supported");
  }
}

void read_topology(const Cursor& root, ScenarioSpec& spec) {
  Cursor topo = root.child("topology");
  if (!topo.present()) {
    root.ctx.error("topology", "missing topology section");
    return;
  }
  topo.known_keys({"core_routers", "core_link_bps", "core_link_mbps",
                   "core_link_gbps", "core_latency_s", "regions", "services"});
  spec.topology.core_routers =
      static_cast<std::uint32_t>(topo.child("core_routers").num(2));
  spec.topology.core_link_bps = rate_field(topo, "core_link", 10e12);
  spec.topology.core_latency_s = topo.child("core_latency_s").num(0.005);

  Cursor regions = topo.child("regions");
  if (regions.is_array_or_report()) {
    for (std::size_t i = 0; i < regions.size(); ++i) {
      Cursor r = regions.item(i);
      r.known_keys({"name", "devices", "cpes", "dslams", "brases",
                    "device_uplink_bps", "device_uplink_mbps",
                    "device_uplink_gbps", "cpe_uplink_bps", "cpe_uplink_mbps",
                    "cpe_uplink_gbps", "dslam_uplink_bps", "dslam_uplink_mbps",
                    "dslam_uplink_gbps", "bras_uplink_bps", "bras_uplink_mbps",
                    "bras_uplink_gbps", "access_latency_s", "has_resolver",
                    "resolver_link_gbps", "resolver_link_bps"});
      AccessRegionSpec reg;
      reg.name = r.child("name").str("");
      if (reg.name.empty()) r.ctx.error(r.path, "region needs a name");
      reg.devices = static_cast<std::uint32_t>(
          r.child("devices").require_num("devices"));
      reg.cpes = static_cast<std::uint32_t>(
          r.child("cpes").num(std::max(1.0, reg.devices / 8.0)));
      reg.dslams = static_cast<std::uint32_t>(
          r.child("dslams").num(std::max(1.0, reg.cpes / 32.0)));
      reg.brases = static_cast<std::uint32_t>(r.child("brases").num(
          std::max(1.0, std::ceil(reg.cpes / 40000.0))));
      reg.device_uplink_bps = rate_field(r, "device_uplink", 10e6);
      reg.cpe_uplink_bps = rate_field(r, "cpe_uplink", 1e9);
      reg.dslam_uplink_bps = rate_field(r, "dslam_uplink", 10e9);
      reg.bras_uplink_bps = rate_field(r, "bras_uplink", 100e9);
      reg.access_latency_s = r.child("access_latency_s").num(0.001);
      reg.has_resolver = r.child("has_resolver").boolean(true);
      reg.resolver_link_bps = rate_field(r, "resolver_link", 10e9);
      if (reg.brases > 0 &&
          (reg.cpes + reg.brases - 1) / reg.brases > kBrasSessionCap) {
        r.ctx.error(r.path, "BRAS session cap exceeded: at most " +
                                std::to_string(kBrasSessionCap) +
                                " CPE sessions per BRAS");
      }
      spec.topology.regions.push_back(std::move(reg));
    }
  } else {
    root.ctx.error("topology.regions", "missing regions");
  }

  Cursor services = topo.child("services");
  if (services.present() && services.is_array_or_report()) {
    for (std::size_t i = 0; i < services.size(); ++i) {
      Cursor s = services.item(i);
      s.known_keys({"name", "kind", "region", "ingress_bps", "ingress_mbps",
                    "ingress_gbps", "latency_s"});
      ServiceNodeSpec svc;
      svc.name = s.child("name").str("");
      if (svc.name.empty()) s.ctx.error(s.path, "service node needs a name");
      std::string kind = s.child("kind").str("target");
      if (kind == "target") {
        svc.kind = NodeKind::TargetServer;
      } else if (kind == "auth-dns") {
        svc.kind = NodeKind::AuthDnsServer;
      } else if (kind == "scrubber") {
        svc.kind = NodeKind::ScrubberPop;
      } else if (kind == "reflector") {
        svc.kind = NodeKind::TargetServer;
      } else if (kind == "c2") {
        svc.kind = NodeKind::C2Host;
      } else if (kind == "reporting") {
        svc.kind = NodeKind::ReportingServer;
      } else if (kind == "loader") {
        svc.kind = NodeKind::LoaderHost;
      } else if (kind == "distribution") {
        svc.kind = NodeKind::DistributionServer;
      } else {
        s.ctx.error(s.path + ".kind", "unknown service kind");
      }
      svc.region = s.child("region").str("");
      svc.ingress_bps = rate_field(s, "ingress", 1e12);
      svc.latency_s = s.child("latency_s").num(0.005);
      spec.topology.services.push_back(std::move(svc));
    }
  }
}

void read_devices(const Cursor& root, ScenarioSpec& spec) {
  Cursor devices = root.child("devices");
  if (!devices.present()) return;
  for (auto it = devices.j->begin(); it != devices.j->end(); ++it) {
    Cursor r{devices.ctx, &it.value(), join(devices.path, it.key())};
    r.known_keys({"services", "credentials", "vulns", "patchable",
                  "uplink_dist_mbps"});
    RegionDevices dev;
    Cursor svc = r.child("services");
    if (svc.is_array_or_report()) {
      for (std::size_t i = 0; i < svc.size(); ++i) {
        dev.services.push_back(svc.item(i).str(""));
      }
    }
    Cursor creds = r.child("credentials");
    if (creds.is_array_or_report()) {
      for (std::size_t i = 0; i < creds.size(); ++i) {
        Cursor c = creds.item(i);
        c.known_keys({"user", "pass", "weight"});
        CredentialEntry entry;
        entry.pair.user = c.child("user").str("");
        entry.pair.pass = c.child("pass").str("");
        entry.weight = c.child("weight").num(1.0);
        if (entry.weight < 0.0) c.ctx.error(c.path, "negative weight");
        dev.credentials.push_back(std::move(entry));
      }
    }
    if (dev.credentials.empty()) {
      r.ctx.error(r.path + ".credentials",
                  "device template needs at least one credential");
    }
    Cursor vulns = r.child("vulns");
    if (vulns.present() && vulns.is_array_or_report()) {
      for (std::size_t i = 0; i < vulns.size(); ++i) {
        Cursor v = vulns.item(i);
        std::string id = v.child("id").str("");
        double fraction = v.child("fraction").num(0.0);
        if (fraction < 0.0 || fraction > 1.0) {
          v.ctx.error(v.path, "vulnerability fraction must be in [0,1]");
        }
        dev.vulns.emplace_back(id, fraction);
      }
    }
    dev.patchable = r.child("patchable").boolean(true);
    Cursor uplink = r.child("uplink_dist_mbps");
    if (uplink.present()) dev.uplink_dist = rate_dist(uplink, 1e6);
    spec.devices[it.key()] = std::move(dev);
  }
}

void read_botnet(const Cursor& root, ScenarioSpec& spec) {
  Cursor b = root.child("botnet");
  if (!b.present()) return;
  b.known_keys({"address_space", "scan_tick_s", "brute_delay_s",
                "exploit_delay_s", "report_latency_s", "payload_bits",
                "reboot_delay_s"});
  spec.address_space = b.child("address_space").num(0.0);
  spec.timings.scan_tick_s = b.child("scan_tick_s").num(1.0);
  spec.timings.brute_delay_s = b.child("brute_delay_s").num(5.0);
  spec.timings.exploit_delay_s = b.child("exploit_delay_s").num(1.0);
  spec.timings.report_latency_s = b.child("report_latency_s").num(0.05);
  spec.timings.payload_bits = b.child("payload_bits").num(1e6);
  spec.timings.reboot_delay_s = b.child("reboot_delay_s").num(60.0);
}

void read_malware(const Cursor& root, ScenarioSpec& spec) {
  Cursor list = root.child("malware");
  if (!list.present() || !list.is_array_or_report()) return;
  for (std::size_t i = 0; i < list.size(); ++i) {
    Cursor m = list.item(i);
    m.known_keys({"name", "dictionary", "scan_rate_pps", "scans_from",
                  "persistence", "evicts", "closes_entry_ports", "vectors",
                  "exploits", "crash_probability", "c2", "entry_services",
                  "initial_infected", "seed_region", "external_scanner"});
    MalwareEntry entry;
    MalwareSpec& spec_m = entry.spec;
    spec_m.name = m.child("name").str("");
    if (spec_m.name.empty()) m.ctx.error(m.path, "malware needs a name");
    Cursor dict = m.child("dictionary");
    if (dict.present() && dict.is_array_or_report()) {
      for (std::size_t k = 0; k < dict.size(); ++k) {
        Cursor pair = dict.item(k);
        if (pair.present() && pair.j->is_array() && pair.j->size() == 2) {
          spec_m.dictionary.push_back(CredentialPair{
              (*pair.j)[0].get<std::string>(), (*pair.j)[1].get<std::string>()});
        } else {
          pair.ctx.error(pair.path, "dictionary entries are [user, pass]");
        }
      }
    }
    spec_m.scan_rate_pps = m.child("scan_rate_pps").num(0.0);
    if (spec_m.scan_rate_pps < 0.0) {
      m.ctx.error(m.path + ".scan_rate_pps", "scan rate must be >= 0");
    }
    std::string from = m.child("scans_from").str("bots");
    if (from == "bots") {
      spec_m.scans_from = ScansFrom::Bots;
    } else if (from == "external-scanner") {
      spec_m.scans_from = ScansFrom::ExternalScanner;
    } else if (from == "c2") {
      spec_m.scans_from = ScansFrom::C2;
    } else {
      m.ctx.error(m.path + ".scans_from",
                  "must be bots, external-scanner, or c2");
    }
    std::string persistence = m.child("persistence").str("volatile");
    if (persistence == "volatile") {
      spec_m.persistence = Persistence::Volatile;
    } else if (persistence == "persistent") {
      spec_m.persistence = Persistence::Persistent;
    } else {
      m.ctx.error(m.path + ".persistence", "must be volatile or persistent");
    }
    Cursor evicts = m.child("evicts");
    if (evicts.present() && evicts.is_array_or_report()) {
      for (std::size_t k = 0; k < evicts.size(); ++k) {
        spec_m.evicts.push_back(evicts.item(k).str(""));
      }
    }
    spec_m.closes_entry_ports = m.child("closes_entry_ports").boolean(false);
    Cursor vectors = m.child("vectors");
    if (vectors.present() && vectors.is_array_or_report()) {
      for (std::size_t k = 0; k < vectors.size(); ++k) {
        std::string name = vectors.item(k).str("");
        auto tag = vector_from(name);
        if (!tag.has_value()) {
          vectors.item(k).ctx.error(vectors.path, "unknown vector: " + name);
        } else {
          spec_m.vectors.insert(*tag);
        }
      }
    }
    Cursor exploits = m.child("exploits");
    if (exploits.present() && exploits.is_array_or_report()) {
      for (std::size_t k = 0; k < exploits.size(); ++k) {
        spec_m.exploit_ids.push_back(exploits.item(k).str(""));
      }
    }
    spec_m.crash_probability = m.child("crash_probability").num(0.0);
    if (spec_m.crash_probability < 0.0 || spec_m.crash_probability > 1.0) {
      m.ctx.error(m.path + ".crash_probability", "must be in [0,1]");
    }
    std::string c2 = m.child("c2").str("domain");
    if (c2 == "domain") {
      spec_m.c2_addressing = C2Addressing::DomainResolved;
    } else if (c2 == "hardcoded") {
      spec_m.c2_addressing = C2Addressing::Hardcoded;
    } else {
      m.ctx.error(m.path + ".c2", "must be domain or hardcoded");
    }
    Cursor entries = m.child("entry_services");
    if (entries.present() && entries.is_array_or_report()) {
      for (std::size_t k = 0; k < entries.size(); ++k) {
        spec_m.entry_services.push_back(entries.item(k).str(""));
      }
    }
    if (spec_m.entry_services.empty() && spec_m.scan_rate_pps > 0.0) {
      m.ctx.error(m.path + ".entry_services",
                  "scanning malware needs entry services");
    }
    entry.initial_infected =
        static_cast<std::uint32_t>(m.child("initial_infected").num(0));
    entry.seed_region = m.child("seed_region").str("");
    Cursor ext = m.child("external_scanner");
    if (ext.present()) {
      ext.known_keys({"units", "active_from_s", "active_until_s"});
      ExternalScannerSetup setup;
      setup.units = static_cast<std::uint32_t>(ext.child("units").num(1));
      setup.active_from_s = ext.child("active_from_s").num(0.0);
      setup.active_until_s = ext.child("active_until_s").num(1e18);
      entry.external_scanner = setup;
    }
    spec.malware.push_back(std::move(entry));
  }
}

void read_dns(const Cursor& root, ScenarioSpec& spec) {
  Cursor d = root.child("dns");
  if (!d.present()) return;
  spec.has_dns = true;
  d.known_keys({"cache_ttl_s", "tier_rtt_s", "load_tick_s", "retry",
                "resolver_capacity_qps", "zones"});
  spec.dns.cache_ttl_s = d.child("cache_ttl_s").num(300.0);
  spec.dns.tier_rtt_s = d.child("tier_rtt_s").num(0.03);
  spec.dns.load_tick_s = d.child("load_tick_s").num(1.0);
  spec.dns.resolver_capacity_qps =
      d.child("resolver_capacity_qps").num(1e12);
  Cursor retry = d.child("retry");
  if (retry.present()) {
    retry.known_keys({"count", "spacing_s"});
    spec.dns.retry.count = static_cast<int>(retry.child("count").num(0));
    spec.dns.retry.spacing_s = retry.child("spacing_s").num(1.0);
    if (spec.dns.retry.count < 0) {
      retry.ctx.error(retry.path + ".count", "retry count must be >= 0");
    }
  }
  Cursor zones = d.child("zones");
  if (zones.present() && zones.is_array_or_report()) {
    for (std::size_t i = 0; i < zones.size(); ++i) {
      Cursor z = zones.item(i);
      z.known_keys({"domain", "servers", "legit_qps"});
      ZoneSetup zone;
      std::string domain = z.child("domain").str("");
      try {
        zone.domain = DomainName::parse(domain);
      } catch (const std::exception& e) {
        z.ctx.error(z.path + ".domain", e.what());
      }
      Cursor servers = z.child("servers");
      if (servers.is_array_or_report()) {
        for (std::size_t k = 0; k < servers.size(); ++k) {
          Cursor s = servers.item(k);
          s.known_keys({"name", "capacity_qps", "serves"});
          PoolServer server;
          server.name = s.child("name").str("");
          server.capacity_qps = s.child("capacity_qps").require_num("capacity");
          if (server.capacity_qps < 0.0) {
            s.ctx.error(s.path + ".capacity_qps", "capacity must be >= 0");
          }
          Cursor serves = s.child("serves");
          if (serves.present() && serves.is_array_or_report()) {
            for (std::size_t n = 0; n < serves.size(); ++n) {
              server.serves.push_back(serves.item(n).str(""));
            }
          }
          zone.servers.push_back(std::move(server));
        }
      }
      if (zone.servers.empty()) {
        z.ctx.error(z.path + ".servers", "zone needs authoritative servers");
      }
      Cursor legit = z.child("legit_qps");
      if (legit.present() && legit.j->is_object()) {
        for (auto it = legit.j->begin(); it != legit.j->end(); ++it) {
          zone.legit_qps[it.key()] = it.value().get<double>();
        }
      }
      spec.zones.push_back(std::move(zone));
    }
  }
}

void read_traffic(const Cursor& root, ScenarioSpec& spec) {
  Cursor flows = root.child("legit_flows");
  if (flows.present() && flows.is_array_or_report()) {
    for (std::size_t i = 0; i < flows.size(); ++i) {
      Cursor f = flows.item(i);
      f.known_keys({"target", "bps", "mbps", "gbps", "from_region"});
      LegitFlowSpec flow;
      flow.target = f.child("target").str("");
      flow.bps = rate_field(f, "", 0.0);
      if (flow.bps <= 0.0) f.ctx.error(f.path, "flow needs a positive rate");
      flow.from_region = f.child("from_region").str("");
      spec.legit_flows.push_back(std::move(flow));
    }
  }
  Cursor behaviors = root.child("target_behavior");
  if (behaviors.present() && behaviors.is_array_or_report()) {
    for (std::size_t i = 0; i < behaviors.size(); ++i) {
      Cursor t = behaviors.item(i);
      t.known_keys({"name", "domain", "overload_threshold_bps",
                    "overload_threshold_mbps", "overload_threshold_gbps",
                    "check_interval_s"});
      TargetBehavior behavior;
      behavior.name = t.child("name").str("");
      behavior.domain = t.child("domain").str("");
      behavior.overload_threshold_bps =
          rate_field(t, "overload_threshold", 0.0);
      behavior.check_interval_s = t.child("check_interval_s").num(10.0);
      spec.target_behavior.push_back(std::move(behavior));
    }
  }
}

void read_attacks(const Cursor& root, ScenarioSpec& spec) {
  Cursor list = root.child("attacks");
  if (!list.present() || !list.is_array_or_report()) return;
  for (std::size_t i = 0; i < list.size(); ++i) {
    Cursor a = list.item(i);
    a.known_keys({"id", "malware", "target", "vector", "start_s", "duration_s",
                  "per_bot_mbps", "per_bot_bps", "per_bot_qps", "amp_factor",
                  "reflectors", "bot_fraction", "bot_region", "emission"});
    TimelineAttack attack;
    AttackCommand& cmd = attack.command;
    cmd.id = a.child("id").str("attack" + std::to_string(i));
    cmd.malware = a.child("malware").str("");
    cmd.target = a.child("target").str("");
    std::string vector = a.child("vector").str("");
    auto tag = vector_from(vector);
    if (!tag.has_value()) {
      a.ctx.error(a.path + ".vector", "unknown vector: " + vector);
    } else {
      cmd.vector = *tag;
    }
    cmd.start_s = a.child("start_s").num(0.0);
    cmd.duration_s = a.child("duration_s").require_num("duration_s");
    if (!(cmd.duration_s > 0.0)) {
      a.ctx.error(a.path + ".duration_s", "duration must be positive");
    }
    if (cmd.vector == VectorTag::WaterTorture) {
      Cursor qps = a.child("per_bot_qps");
      if (!qps.present()) {
        a.ctx.error(a.path + ".per_bot_qps",
                    "water torture needs a per-bot query rate");
      } else {
        cmd.per_bot = rate_dist(qps, 1.0);
      }
      std::string emission = a.child("emission").str("per-query");
      if (emission == "per-query") {
        cmd.emission = AttackCommand::Emission::PerQuery;
      } else if (emission == "rate") {
        cmd.emission = AttackCommand::Emission::Rate;
      } else {
        a.ctx.error(a.path + ".emission", "must be per-query or rate");
      }
    } else if (cmd.vector == VectorTag::DnsDirect) {
      Cursor qps = a.child("per_bot_qps");
      if (!qps.present()) {
        a.ctx.error(a.path + ".per_bot_qps",
                    "dns-direct needs a per-bot query rate");
      } else {
        cmd.per_bot = rate_dist(qps, 1.0);
      }
      cmd.emission = AttackCommand::Emission::Rate;
    } else {
      Cursor bps = a.child("per_bot_bps");
      Cursor mbps = a.child("per_bot_mbps");
      if (bps.present()) {
        cmd.per_bot = rate_dist(bps, 1.0);
      } else if (mbps.present()) {
        cmd.per_bot = rate_dist(mbps, 1e6);
      } else {
        a.ctx.error(a.path, "flood needs per_bot_bps or per_bot_mbps");
      }
    }
    cmd.amp_factor = a.child("amp_factor").num(0.0);
    Cursor reflectors = a.child("reflectors");
    if (reflectors.present() && reflectors.is_array_or_report()) {
      for (std::size_t k = 0; k < reflectors.size(); ++k) {
        cmd.reflectors.push_back(reflectors.item(k).str(""));
      }
    }
    if (cmd.vector == VectorTag::Reflection) {
      if (!(cmd.amp_factor > 1.0)) {
        a.ctx.error(a.path + ".amp_factor",
                    "reflection requires an amplification factor above 1");
      }
      if (cmd.reflectors.empty()) {
        a.ctx.error(a.path + ".reflectors",
                    "reflection needs a reflector set");
      }
    }
    attack.bot_fraction = a.child("bot_fraction").num(1.0);
    if (attack.bot_fraction < 0.0 || attack.bot_fraction > 1.0) {
      a.ctx.error(a.path + ".bot_fraction", "must be in [0,1]");
    }
    attack.bot_region = a.child("bot_region").str("");
    spec.attacks.push_back(std::move(attack));
  }
}

void read_defenses(const Cursor& root, ScenarioSpec& spec) {
  Cursor list = root.child("defenses");
  if (!list.present() || !list.is_array_or_report()) return;
  for (std::size_t i = 0; i < list.size(); ++i) {
    Cursor d = list.item(i);
    d.known_keys({"at_s", "action", "region", "devices", "user", "pass",
                  "vuln", "target", "scrubber", "efficacy", "default_efficacy",
                  "legit_passthrough", "capacity_bps", "capacity_gbps",
                  "capacity_mbps", "zone", "malware"});
    DefenseAction action;
    action.at = d.child("at_s").num(0.0);
    std::string kind = d.child("action").str("");
    if (kind == "enable-bcp38") {
      action.kind = DefenseAction::Kind::EnableBcp38;
      action.region = d.child("region").str("");
    } else if (kind == "reboot") {
      action.kind = DefenseAction::Kind::Reboot;
      action.devices = selector(d.child("devices"));
    } else if (kind == "change-credentials") {
      action.kind = DefenseAction::Kind::ChangeCredentials;
      action.devices = selector(d.child("devices"));
      action.credential.user = d.child("user").str("");
      action.credential.pass = d.child("pass").str("");
      if (action.credential.user.empty()) {
        d.ctx.error(d.path, "change-credentials needs user/pass");
      }
    } else if (kind == "patch") {
      action.kind = DefenseAction::Kind::Patch;
      action.devices = selector(d.child("devices"));
      action.vuln = d.child("vuln").str("");
      if (action.vuln.empty()) d.ctx.error(d.path, "patch needs a vuln id");
    } else if (kind == "attach-scrubber") {
      action.kind = DefenseAction::Kind::AttachScrubber;
      action.target = d.child("target").str("");
      action.scrubber = d.child("scrubber").str("");
      Cursor eff = d.child("efficacy");
      if (eff.present() && eff.j->is_object()) {
        for (auto it = eff.j->begin(); it != eff.j->end(); ++it) {
          auto tag = vector_from(it.key());
          if (!tag.has_value()) {
            d.ctx.error(d.path + ".efficacy", "unknown vector: " + it.key());
            continue;
          }
          action.policy.efficacy[*tag] = it.value().get<double>();
        }
      }
      action.policy.default_efficacy = d.child("default_efficacy").num(0.0);
      action.policy.legit_passthrough = d.child("legit_passthrough").num(1.0);
      action.policy.capacity_bps = rate_field(d, "capacity", 0.0);
      try {
        action.policy.validate();
      } catch (const std::exception& e) {
        d.ctx.error(d.path, e.what());
      }
    } else if (kind == "anycast-rebalance") {
      action.kind = DefenseAction::Kind::AnycastRebalance;
      action.zone = d.child("zone").str("");
    } else if (kind == "c2-takedown") {
      action.kind = DefenseAction::Kind::C2Takedown;
      action.malware = d.child("malware").str("");
    } else {
      d.ctx.error(d.path + ".action", "unknown defense action: " + kind);
      continue;
    }
    spec.defenses.push_back(std::move(action));
  }
}

// Cross-reference checks that need the whole document.
void validate_cross_refs(Ctx& ctx, ScenarioSpec& spec) {
  auto region_exists = [&](const std::string& name) {
    for (const auto& r : spec.topology.regions) {
      if (r.name == name) return true;
    }
    return false;
  };
  auto service_node_exists = [&](const std::string& name) {
    for (const auto& s : spec.topology.services) {
      if (s.name == name) return true;
    }
    return false;
  };
  auto malware_at = [&](const std::string& name) -> const MalwareSpec* {
    for (const auto& m : spec.malware) {
      if (m.spec.name == name) return &m.spec;
    }
    return nullptr;
  };
  auto vuln_known = [&](const std::string& id) {
    return std::find(spec.vuln_catalog.begin(), spec.vuln_catalog.end(), id) !=
           spec.vuln_catalog.end();
  };
  auto service_known = [&](const std::string& id) {
    for (const auto& s : spec.service_catalog) {
      if (s.name == id) return true;
    }
    return false;
  };
  auto zone_exists = [&](const std::string& domain) {
    for (const auto& z : spec.zones) {
      if (z.domain.render() == domain) return true;
    }
    return false;
  };

  if (!(spec.horizon_s > 0.0)) {
    ctx.error("horizon_s", "horizon must be positive");
  }

  for (std::size_t i = 0; i < spec.malware.size(); ++i) {
    const auto& m = spec.malware[i];
    std::string base = "malware[" + std::to_string(i) + "]";
    for (const std::string& svc : m.spec.entry_services) {
      if (!service_known(svc)) {
        ctx.error(base + ".entry_services", "undefined service: " + svc);
      }
    }
    for (const std::string& vuln : m.spec.exploit_ids) {
      if (!vuln_known(vuln)) {
        ctx.error(base + ".exploits", "undefined vulnerability: " + vuln);
      }
    }
    if (!m.seed_region.empty() && !region_exists(m.seed_region)) {
      ctx.error(base + ".seed_region", "undefined region: " + m.seed_region);
    }
    if (m.spec.scans_from == ScansFrom::ExternalScanner &&
        m.spec.scan_rate_pps > 0.0 && !m.external_scanner.has_value()) {
      ctx.error(base, "external-scanner malware needs an external_scanner");
    }
  }

  for (const auto& [region, devices] : spec.devices) {
    if (!region_exists(region)) {
      ctx.error("devices." + region, "undefined region: " + region);
    }
    for (const std::string& svc : devices.services) {
      if (!service_known(svc)) {
        ctx.error("devices." + region + ".services",
                  "undefined service: " + svc);
      }
    }
    for (const auto& [vuln, fraction] : devices.vulns) {
      if (!vuln_known(vuln)) {
        ctx.error("devices." + region + ".vulns",
                  "undefined vulnerability: " + vuln);
      }
    }
  }
  for (const auto& r : spec.topology.regions) {
    if (r.devices > 0 && !spec.devices.contains(r.name)) {
      ctx.error("devices", "region " + r.name + " has devices but no device "
                           "template");
    }
  }

  for (std::size_t i = 0; i < spec.legit_flows.size(); ++i) {
    const auto& f = spec.legit_flows[i];
    std::string base = "legit_flows[" + std::to_string(i) + "]";
    if (!service_node_exists(f.target)) {
      ctx.error(base + ".target", "undefined service node: " + f.target);
    }
    if (!f.from_region.empty() && !region_exists(f.from_region)) {
      ctx.error(base + ".from_region", "undefined region: " + f.from_region);
    }
  }
  for (std::size_t i = 0; i < spec.target_behavior.size(); ++i) {
    const auto& t = spec.target_behavior[i];
    std::string base = "target_behavior[" + std::to_string(i) + "]";
    if (!service_node_exists(t.name)) {
      ctx.error(base + ".name", "undefined service node: " + t.name);
    }
    if (!t.domain.empty() && !zone_exists(t.domain)) {
      ctx.error(base + ".domain", "no zone serves domain: " + t.domain);
    }
  }
  for (std::size_t i = 0; i < spec.zones.size(); ++i) {
    const auto& z = spec.zones[i];
    std::string base = "dns.zones[" + std::to_string(i) + "]";
    for (const auto& server : z.servers) {
      if (!service_node_exists(server.name)) {
        ctx.error(base + ".servers", "undefined service node: " + server.name);
      }
    }
  }

  for (std::size_t i = 0; i < spec.attacks.size(); ++i) {
    const auto& attack = spec.attacks[i];
    const AttackCommand& cmd = attack.command;
    std::string base = "attacks[" + std::to_string(i) + "]";
    const MalwareSpec* m = malware_at(cmd.malware);
    if (m == nullptr) {
      ctx.error(base + ".malware", "undefined malware: " + cmd.malware);
    } else if (!m->vectors.contains(cmd.vector)) {
      ctx.error(base + ".vector", "malware " + cmd.malware +
                                      " does not support vector " +
                                      to_string(cmd.vector));
    }
    if (
        cmd.vector == VectorTag::WaterTorture ||
        cmd.vector == VectorTag::DnsDirect) {
      if (!zone_exists(cmd.target)) {
        ctx.error(base + ".target", "no zone serves domain: " + cmd.target);
      }
      if (cmd.vector == VectorTag::WaterTorture) {
        for (const auto& r : spec.topology.regions) {
          if (r.devices > 0 && !r.has_resolver &&
              (attack.bot_region.empty() || attack.bot_region == r.name)) {
            ctx.error(base, "region " + r.name +
                                " has no recursive resolver for water "
                                "torture");
          }
        }
      }
    } else {
      if (!service_node_exists(cmd.target)) {
        ctx.error(base + ".target", "undefined service node: " + cmd.target);
      }
    }
    for (const std::string& r : cmd.reflectors) {
      if (!service_node_exists(r)) {
        ctx.error(base + ".reflectors", "undefined service node: " + r);
      }
    }
    if (!attack.bot_region.empty() && !region_exists(attack.bot_region)) {
      ctx.error(base + ".bot_region", "undefined region: " + attack.bot_region);
    }
  }

  for (std::size_t i = 0; i < spec.defenses.size(); ++i) {
    const auto& action = spec.defenses[i];
    std::string base = "defenses[" + std::to_string(i) + "]";
    switch (action.kind) {
      case DefenseAction::Kind::EnableBcp38:
        if (!action.region.empty() && !region_exists(action.region)) {
          ctx.error(base + ".region", "undefined region: " + action.region);
        }
        break;
      case DefenseAction::Kind::Patch:
        if (!action.vuln.empty() && !vuln_known(action.vuln)) {
          ctx.error(base + ".vuln", "undefined vulnerability: " + action.vuln);
        }
        break;
      case DefenseAction::Kind::AttachScrubber:
        // A zone domain as the target stands in for provider-side DNS
        // filtering and needs no scrubber node.
        if (zone_exists(action.target)) break;
        if (!service_node_exists(action.target)) {
          ctx.error(base + ".target",
                    "undefined service node: " + action.target);
        }
        if (!service_node_exists(action.scrubber)) {
          ctx.error(base + ".scrubber",
                    "undefined service node: " + action.scrubber);
        }
        break;
      case DefenseAction::Kind::AnycastRebalance:
        if (!zone_exists(action.zone)) {
          ctx.error(base + ".zone", "no zone serves domain: " + action.zone);
        }
        break;
      case DefenseAction::Kind::C2Takedown:
        if (malware_at(action.malware) == nullptr) {
          ctx.error(base + ".malware", "undefined malware: " + action.malware);
        }
        break;
      default:
        break;
    }
    if (action.kind == DefenseAction::Kind::Reboot ||
        action.kind == DefenseAction::Kind::ChangeCredentials ||
        action.kind == DefenseAction::Kind::Patch) {
      const DeviceSelector& sel = action.devices;
      if (sel.kind == DeviceSelector::Kind::Region &&
          !region_exists(sel.arg)) {
        ctx.error(base + ".devices", "undefined region: " + sel.arg);
      }
      if (sel.kind == DeviceSelector::Kind::InfectedBy &&
          malware_at(sel.arg) == nullptr) {
        ctx.error(base + ".devices", "undefined malware: " + sel.arg);
      }
    }
  }

  // Resolve masks now that the catalogs are complete.
  if (ctx.errors.empty()) {
    for (auto& m : spec.malware) {
      m.spec.entry_mask = spec.service_mask(m.spec.entry_services);
      m.spec.exploit_mask = 0;
      for (const std::string& vuln : m.spec.exploit_ids) {
        m.spec.exploit_mask |= spec.vuln_bit(vuln);
      }
    }
  }
}

}  // namespace

ParseResult parse_scenario(const std::string& text) {
  ParseResult result;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    int line = 1;
    for (std::size_t i = 0; i < err.byte && i < text.size(); ++i) {
      if (text[i] == '\n') line++;
    }
    result.errors.push_back(ValidationError{"", line, err.what()});
    return result;
  }
  if (!doc.is_object()) {
    result.errors.push_back(ValidationError{"", 1, "document must be an "
                                                   "object"});
    return result;
  }

  PositionIndex index(text);
  Ctx ctx{index, result.errors};
  Cursor root{ctx, &doc, ""};
  root.known_keys({"name", "seed", "horizon_s", "metric_interval_s",
                   "annotations", "services", "vulnerabilities", "topology",
                   "devices", "botnet", "malware", "dns", "legit_flows",
                   "target_behavior", "attacks", "defenses"});

  ScenarioSpec spec;
  spec.name = root.child("name").str("scenario");
  spec.seed = static_cast<std::uint64_t>(root.child("seed").num(1));
  spec.horizon_s = root.child("horizon_s").require_num("horizon_s");
  spec.metric_interval_s = root.child("metric_interval_s").num(1.0);
  Cursor annotations = root.child("annotations");
  if (annotations.present() && annotations.j->is_object()) {
    for (auto it = annotations.j->begin(); it != annotations.j->end(); ++it) {
      spec.annotations[it.key()] = it.value().is_string()
                                       ? it.value().get<std::string>()
                                       : it.value().dump();
    }
  }
  Cursor vulns = root.child("vulnerabilities");
  if (vulns.present() && vulns.is_array_or_report()) {
    for (std::size_t i = 0; i < vulns.size(); ++i) {
      spec.vuln_catalog.push_back(vulns.item(i).str(""));
    }
    if (spec.vuln_catalog.size() > 31) {
      ctx.error("vulnerabilities", "at most 31 vulnerability ids");
    }
  }

  read_services(root, spec);
  read_topology(root, spec);
  read_devices(root, spec);
  read_botnet(root, spec);
  read_malware(root, spec);
  read_dns(root, spec);
  read_traffic(root, spec);
  read_attacks(root, spec);
  read_defenses(root, spec);
  validate_cross_refs(ctx, spec);

  if (result.errors.empty()) result.spec = std::move(spec);
  return result;
}

namespace {

json dist_json(const RateDist& dist, double unit_scale) {
  json out;
  if (dist.kind == RateDist::Kind::Fixed) {
    out["dist"] = "fixed";
    out["value"] = dist.a / unit_scale;
  } else {
    out["dist"] = "uniform";
    out["min"] = dist.a / unit_scale;
    out["max"] = dist.b / unit_scale;
  }
  return out;
}

json selector_json(const DeviceSelector& sel) {
  json out;
  switch (sel.kind) {
    case DeviceSelector::Kind::All: out["kind"] = "all"; break;
    case DeviceSelector::Kind::Crashed: out["kind"] = "crashed"; break;
    case DeviceSelector::Kind::InfectedBy:
      out["kind"] = "infected";
      out["arg"] = sel.arg;
      break;
    case DeviceSelector::Kind::Region:
      out["kind"] = "region";
      out["arg"] = sel.arg;
      break;
    case DeviceSelector::Kind::Sample:
      out["kind"] = "sample";
      out["fraction"] = sel.fraction;
      break;
  }
  return out;
}

}  // namespace

std::string serialize_scenario(const ScenarioSpec& spec) {
  json doc;
  doc["name"] = spec.name;
  doc["seed"] = spec.seed;
  doc["horizon_s"] = spec.horizon_s;
  doc["metric_interval_s"] = spec.metric_interval_s;
  if (!spec.annotations.empty()) {
    json notes;
    for (const auto& [k, v] : spec.annotations) notes[k] = v;
    doc["annotations"] = notes;
  }

  json services = json::array();
  for (const auto& s : spec.service_catalog) {
    services.push_back({{"name", s.name},
                        {"port", s.port},
                        {"kind", s.kind == ServiceKind::Credential
                                     ? "credential"
                                     : "managed"}});
  }
  doc["services"] = services;
  doc["vulnerabilities"] = spec.vuln_catalog;

  json topo;
  topo["core_routers"] = spec.topology.core_routers;
  topo["core_link_bps"] = spec.topology.core_link_bps;
  topo["core_latency_s"] = spec.topology.core_latency_s;
  json regions = json::array();
  for (const auto& r : spec.topology.regions) {
    json reg;
    reg["name"] = r.name;
    reg["devices"] = r.devices;
    reg["cpes"] = r.cpes;
    reg["dslams"] = r.dslams;
    reg["brases"] = r.brases;
    reg["device_uplink_bps"] = r.device_uplink_bps;
    reg["cpe_uplink_bps"] = r.cpe_uplink_bps;
    reg["dslam_uplink_bps"] = r.dslam_uplink_bps;
    reg["bras_uplink_bps"] = r.bras_uplink_bps;
    reg["access_latency_s"] = r.access_latency_s;
    reg["has_resolver"] = r.has_resolver;
    reg["resolver_link_bps"] = r.resolver_link_bps;
    regions.push_back(reg);
  }
  topo["regions"] = regions;
  json svc_nodes = json::array();
  for (const auto& s : spec.topology.services) {
    json svc;
    svc["name"] = s.name;
    switch (s.kind) {
      case NodeKind::AuthDnsServer: svc["kind"] = "auth-dns"; break;
      case NodeKind::ScrubberPop: svc["kind"] = "scrubber"; break;
      case NodeKind::C2Host: svc["kind"] = "c2"; break;
      case NodeKind::ReportingServer: svc["kind"] = "reporting"; break;
      case NodeKind::LoaderHost: svc["kind"] = "loader"; break;
      case NodeKind::DistributionServer: svc["kind"] = "distribution"; break;
      default: svc["kind"] = "target"; break;
    }
    if (!s.region.empty()) svc["region"] = s.region;
    svc["ingress_bps"] = s.ingress_bps;
    svc["latency_s"] = s.latency_s;
    svc_nodes.push_back(svc);
  }
  topo["services"] = svc_nodes;
  doc["topology"] = topo;

  json devices;
  for (const auto& [region, dev] : spec.devices) {
    json d;
    d["services"] = dev.services;
    json creds = json::array();
    for (const auto& c : dev.credentials) {
      creds.push_back({{"user", c.pair.user},
                       {"pass", c.pair.pass},
                       {"weight", c.weight}});
    }
    d["credentials"] = creds;
    if (!dev.vulns.empty()) {
      json vulns = json::array();
      for (const auto& [id, fraction] : dev.vulns) {
        vulns.push_back({{"id", id}, {"fraction", fraction}});
      }
      d["vulns"] = vulns;
    }
    d["patchable"] = dev.patchable;
    if (dev.uplink_dist.has_value()) {
      d["uplink_dist_mbps"] = dist_json(*dev.uplink_dist, 1e6);
    }
    devices[region] = d;
  }
  doc["devices"] = devices;

  json botnet;
  botnet["address_space"] = spec.address_space;
  botnet["scan_tick_s"] = spec.timings.scan_tick_s;
  botnet["brute_delay_s"] = spec.timings.brute_delay_s;
  botnet["exploit_delay_s"] = spec.timings.exploit_delay_s;
  botnet["report_latency_s"] = spec.timings.report_latency_s;
  botnet["payload_bits"] = spec.timings.payload_bits;
  botnet["reboot_delay_s"] = spec.timings.reboot_delay_s;
  doc["botnet"] = botnet;

  json malware = json::array();
  for (const auto& entry : spec.malware) {
    const MalwareSpec& m = entry.spec;
    json out;
    out["name"] = m.name;
    json dict = json::array();
    for (const auto& pair : m.dictionary) {
      dict.push_back(json::array({pair.user, pair.pass}));
    }
    out["dictionary"] = dict;
    out["scan_rate_pps"] = m.scan_rate_pps;
    out["scans_from"] = m.scans_from == ScansFrom::Bots ? "bots"
                        : m.scans_from == ScansFrom::ExternalScanner
                            ? "external-scanner"
                            : "c2";
    out["persistence"] = m.persistence == Persistence::Volatile
                             ? "volatile"
                             : "persistent";
    out["evicts"] = m.evicts;
    out["closes_entry_ports"] = m.closes_entry_ports;
    json vectors = json::array();
    for (VectorTag v : m.vectors) vectors.push_back(to_string(v));
    out["vectors"] = vectors;
    out["exploits"] = m.exploit_ids;
    out["crash_probability"] = m.crash_probability;
    out["c2"] = m.c2_addressing == C2Addressing::Hardcoded ? "hardcoded"
                                                           : "domain";
    out["entry_services"] = m.entry_services;
    out["initial_infected"] = entry.initial_infected;
    if (!entry.seed_region.empty()) out["seed_region"] = entry.seed_region;
    if (entry.external_scanner.has_value()) {
      out["external_scanner"] = {
          {"units", entry.external_scanner->units},
          {"active_from_s", entry.external_scanner->active_from_s},
          {"active_until_s", entry.external_scanner->active_until_s}};
    }
    malware.push_back(out);
  }
  doc["malware"] = malware;

  if (spec.has_dns) {
    json dns;
    dns["cache_ttl_s"] = spec.dns.cache_ttl_s;
    dns["tier_rtt_s"] = spec.dns.tier_rtt_s;
    dns["load_tick_s"] = spec.dns.load_tick_s;
    dns["resolver_capacity_qps"] = spec.dns.resolver_capacity_qps;
    dns["retry"] = {{"count", spec.dns.retry.count},
                    {"spacing_s", spec.dns.retry.spacing_s}};
    json zones = json::array();
    for (const auto& z : spec.zones) {
      json zone;
      zone["domain"] = z.domain.render();
      json servers = json::array();
      for (const auto& s : z.servers) {
        json server;
        server["name"] = s.name;
        server["capacity_qps"] = s.capacity_qps;
        if (!s.serves.empty()) server["serves"] = s.serves;
        servers.push_back(server);
      }
      zone["servers"] = servers;
      if (!z.legit_qps.empty()) {
        json legit;
        for (const auto& [region, qps] : z.legit_qps) legit[region] = qps;
        zone["legit_qps"] = legit;
      }
      zones.push_back(zone);
    }
    dns["zones"] = zones;
    doc["dns"] = dns;
  }

  if (!spec.legit_flows.empty()) {
    json flows = json::array();
    for (const auto& f : spec.legit_flows) {
      json flow;
      flow["target"] = f.target;
      flow["bps"] = f.bps;
      if (!f.from_region.empty()) flow["from_region"] = f.from_region;
      flows.push_back(flow);
    }
    doc["legit_flows"] = flows;
  }
  if (!spec.target_behavior.empty()) {
    json behaviors = json::array();
    for (const auto& t : spec.target_behavior) {
      json b;
      b["name"] = t.name;
      if (!t.domain.empty()) b["domain"] = t.domain;
      b["overload_threshold_bps"] = t.overload_threshold_bps;
      b["check_interval_s"] = t.check_interval_s;
      behaviors.push_back(b);
    }
    doc["target_behavior"] = behaviors;
  }

  json attacks = json::array();
  for (const auto& attack : spec.attacks) {
    const AttackCommand& cmd = attack.command;
    json a;
    a["id"] = cmd.id;
    a["malware"] = cmd.malware;
    a["target"] = cmd.target;
    a["vector"] = to_string(cmd.vector);
    a["start_s"] = cmd.start_s;
    a["duration_s"] = cmd.duration_s;
    if (cmd.vector == VectorTag::WaterTorture ||
        cmd.vector == VectorTag::DnsDirect) {
      a["per_bot_qps"] = dist_json(cmd.per_bot, 1.0);
      if (cmd.vector == VectorTag::WaterTorture) {
        a["emission"] = cmd.emission == AttackCommand::Emission::PerQuery
                            ? "per-query"
                            : "rate";
      }
    } else {
      a["per_bot_bps"] = dist_json(cmd.per_bot, 1.0);
    }
    if (cmd.vector == VectorTag::Reflection) {
      a["amp_factor"] = cmd.amp_factor;
      a["reflectors"] = cmd.reflectors;
    }
    a["bot_fraction"] = attack.bot_fraction;
    if (!attack.bot_region.empty()) a["bot_region"] = attack.bot_region;
    attacks.push_back(a);
  }
  doc["attacks"] = attacks;

  json defenses = json::array();
  for (const auto& action : spec.defenses) {
    json d;
    d["at_s"] = action.at;
    d["action"] = to_string(action.kind);
    switch (action.kind) {
      case DefenseAction::Kind::EnableBcp38:
        if (!action.region.empty()) d["region"] = action.region;
        break;
      case DefenseAction::Kind::Reboot:
        d["devices"] = selector_json(action.devices);
        break;
      case DefenseAction::Kind::ChangeCredentials:
        d["devices"] = selector_json(action.devices);
        d["user"] = action.credential.user;
        d["pass"] = action.credential.pass;
        break;
      case DefenseAction::Kind::Patch:
        d["devices"] = selector_json(action.devices);
        d["vuln"] = action.vuln;
        break;
      case DefenseAction::Kind::AttachScrubber: {
        d["target"] = action.target;
        d["scrubber"] = action.scrubber;
        json eff;
        for (const auto& [vector, e] : action.policy.efficacy) {
          eff[to_string(vector)] = e;
        }
        if (!eff.empty()) d["efficacy"] = eff;
        d["default_efficacy"] = action.policy.default_efficacy;
        d["legit_passthrough"] = action.policy.legit_passthrough;
        if (action.policy.capacity_bps > 0.0) {
          d["capacity_bps"] = action.policy.capacity_bps;
        }
        break;
      }
      case DefenseAction::Kind::AnycastRebalance:
        d["zone"] = action.zone;
        break;
      case DefenseAction::Kind::C2Takedown:
        d["malware"] = action.malware;
        break;
    }
    defenses.push_back(d);
  }
  doc["defenses"] = defenses;

  return doc.dump(2) + "\n";
}

bool equivalent(const ScenarioSpec& a, const ScenarioSpec& b) {
  return serialize_scenario(a) == serialize_scenario(b);
}

}  // namespace botsim
