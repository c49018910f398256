#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "workspace.hpp"

namespace o2di::cli {

struct KeygenOptions {
  std::size_t blocks = 256;
  int security = 80;
  std::string vendor_id = "vendor@example";
  bool force = false;
  bool test_mode = false;  // lets --seed drive key generation
};

struct FleetInitOptions {
  std::size_t servers = 0;
  bool force = false;
};

struct TagOptions {
  std::vector<std::string> paths;
  std::optional<std::size_t> replicas;
  std::string name;
  bool remove_source = false;
};

struct AuditOptions {
  int method = 0;
  std::string files = "all";
  std::string servers = "all";
  std::optional<std::size_t> challenged;
};

struct CorruptOptions {
  std::size_t server = 0;
  std::string file;
  std::string kind;
  std::uint64_t block = 1;
};

struct BenchOptions {
  std::vector<std::size_t> challenged{100, 200, 300, 400};
  std::vector<std::size_t> servers{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<std::size_t> blocks{256, 512, 1024, 2048, 4096};
  int security = 80;
  std::string csv;
};

int cmd_keygen(const Settings& s, const KeygenOptions& o);
int cmd_fleet_init(const Settings& s, const FleetInitOptions& o);
int cmd_tag(const Settings& s, const TagOptions& o);
int cmd_audit(const Settings& s, const AuditOptions& o);
int cmd_corrupt(const Settings& s, const CorruptOptions& o);
int cmd_localize(const Settings& s);
int cmd_repair(const Settings& s);
int cmd_bench(const Settings& s, const BenchOptions& o);

}  // namespace o2di::cli
