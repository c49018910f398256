#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"
#include "o2di/errors.hpp"
#include "o2di/fleet.hpp"

using namespace o2di::cli;

int main(int argc, char** argv) {
  CLI::App app{"o2di: outsourced data inspection for edge caches"};
  app.require_subcommand(1);
  app.fallthrough();

  Settings s;
  std::string vendor_dir = s.vendor_dir.string();
  std::string fleet_dir = s.fleet_dir.string();
  app.set_config("--config", "", "key=value configuration file; flags override it");
  app.add_option("--vendor-dir,--vendor_dir", vendor_dir, "vendor state directory")->capture_default_str();
  app.add_option("--fleet-dir,--fleet_dir", fleet_dir, "simulated fleet directory")->capture_default_str();
  app.add_option("--challenged-blocks,--challenged_blocks", s.challenged, "default |I| per audit")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--pool-size,--pool_size", s.pool_size, "pre-challenge pool size m")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--subset-size,--subset_size", s.subset_size, "pool entries summed per server challenge")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_flag("--one-time-pool,--one_time_pool", s.one_time_pool, "never reuse pool entries");
  app.add_option("--seed", s.seed, "make the run deterministic");
  app.add_flag("--json", s.json, "print machine-readable records");

  KeygenOptions keygen;
  auto* c_keygen = app.add_subcommand("keygen", "generate system parameters and vendor keys");
  c_keygen->add_option("--blocks", keygen.blocks, "blocks per file (l)")->check(CLI::Range(2, 1 << 24))->capture_default_str();
  c_keygen->add_option("--security", keygen.security, "security level in bits")->capture_default_str();
  c_keygen->add_option("--vendor-id", keygen.vendor_id, "vendor identity")->capture_default_str();
  c_keygen->add_flag("--force", keygen.force, "overwrite existing key files");
  c_keygen->add_flag("--test-mode", keygen.test_mode, "derive key material from --seed (testing only)");

  FleetInitOptions fleet_init;
  auto* c_fleet = app.add_subcommand("fleet-init", "create an empty simulated fleet");
  c_fleet->add_option("--servers", fleet_init.servers, "number of edge servers")->required();
  c_fleet->add_flag("--force", fleet_init.force, "replace an existing fleet");

  TagOptions tag;
  auto* c_tag = app.add_subcommand("tag", "encode, tag, and cache files on the fleet");
  c_tag->add_option("files", tag.paths, "input files")->required()->check(CLI::ExistingFile);
  c_tag->add_option("--replicas,-n", tag.replicas, "cache on servers 0..N-1 (default: all)");
  c_tag->add_option("--name", tag.name, "logical name (single input only)");
  c_tag->add_flag("--remove-source", tag.remove_source, "delete the input files once cached");

  AuditOptions audit;
  auto* c_audit = app.add_subcommand("audit", "challenge the fleet and verify the proofs");
  c_audit->add_option("--method,-m", audit.method, "inspection method 1-4")->required()->check(CLI::Range(1, 4));
  c_audit->add_option("--files", audit.files, "all, or comma-separated names or indices")->capture_default_str();
  c_audit->add_option("--servers", audit.servers, "all, or comma-separated server indices")->capture_default_str();
  c_audit->add_option("--challenged", audit.challenged, "|I| for this audit")->check(CLI::PositiveNumber);

  CorruptOptions corrupt;
  auto* c_corrupt = app.add_subcommand("corrupt", "inject a fault into one cached replica");
  c_corrupt->add_option("--server", corrupt.server, "server index")->required();
  c_corrupt->add_option("--file", corrupt.file, "file name or index")->required();
  c_corrupt->add_option("--kind", corrupt.kind, "fault kind")
      ->required()
      ->check(CLI::IsMember({"flip-block", "zero-block", "drop-replica", "tamper-tag"}));
  c_corrupt->add_option("--block", corrupt.block, "1-based block number")->capture_default_str();

  auto* c_localize = app.add_subcommand("localize", "locate corrupted replicas after a failed audit");
  auto* c_repair = app.add_subcommand("repair", "restore corrupted replicas from healthy servers");

  BenchOptions bench;
  auto* c_bench = app.add_subcommand("bench", "measure costs and message sizes over a parameter sweep");
  c_bench->add_option("--challenged", bench.challenged, "|I| values")->delimiter(',')->capture_default_str();
  c_bench->add_option("--servers", bench.servers, "N values")->delimiter(',')->capture_default_str();
  c_bench->add_option("--blocks", bench.blocks, "l values")->delimiter(',')->capture_default_str();
  c_bench->add_option("--security", bench.security, "security level in bits")->capture_default_str();
  c_bench->add_option("--csv", bench.csv, "write the CSV table here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  s.vendor_dir = vendor_dir;
  s.fleet_dir = fleet_dir;

  try {
    if (*c_keygen) return cmd_keygen(s, keygen);
    if (*c_fleet) return cmd_fleet_init(s, fleet_init);
    if (*c_tag) return cmd_tag(s, tag);
    if (*c_audit) return cmd_audit(s, audit);
    if (*c_corrupt) return cmd_corrupt(s, corrupt);
    if (*c_localize) return cmd_localize(s);
    if (*c_repair) return cmd_repair(s);
    if (*c_bench) return cmd_bench(s, bench);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
