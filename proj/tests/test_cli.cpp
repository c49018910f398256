#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "o2di/storage.hpp"

namespace fs = std::filesystem;
using namespace o2di;

namespace {

struct Result {
  int rc = -1;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("o2di-cli-" + std::to_string(::getpid()) + "-" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result run(const std::string& args, const fs::path& where = {}) const {
    const fs::path cwd = where.empty() ? dir_ : where;
    std::string cmd = "cd '" + cwd.string() + "' && '" O2DI_CLI "' " + args + " 2>&1";
    Result r;
    FILE* p = ::popen(cmd.c_str(), "r");
    if (p == nullptr) return r;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int status = ::pclose(p);
    r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
  }

  void write(const std::string& name, std::size_t size, unsigned seed = 1) const {
    std::ofstream out(dir_ / name, std::ios::binary);
    for (std::size_t i = 0; i < size; ++i) out.put(static_cast<char>((i * 131 + seed * 7 + (i >> 5)) & 0xFF));
  }

  // keygen + fleet-init + tag two files everywhere.
  void bootstrap(const std::string& flags = "") const {
    ASSERT_EQ(run(flags + " keygen --blocks 32").rc, 0);
    ASSERT_EQ(run(flags + " fleet-init --servers 3").rc, 0);
    write("a.txt", 300, 1);
    write("b.txt", 500, 2);
    Result t = run(flags + " tag a.txt b.txt");
    ASSERT_EQ(t.rc, 0) << t.out;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, KeygenPrecheckForceAndPermissions) {
  Result r = run("keygen --blocks 16");
  ASSERT_EQ(r.rc, 0) << r.out;
  EXPECT_NE(r.out.find("precheck: 1"), std::string::npos);
  EXPECT_EQ(run("keygen --blocks 16").rc, 2);
  EXPECT_EQ(run("keygen --blocks 16 --force").rc, 0);
  for (auto name : {"master.json", "vendor.json", "pool.json"}) {
    auto perms = fs::status(dir_ / "vendor" / name).permissions();
    EXPECT_EQ(perms & (fs::perms::group_all | fs::perms::others_all), fs::perms::none) << name;
  }
}

TEST_F(Cli, KeyFilesRoundTripIdentically) {
  ASSERT_EQ(run("keygen --blocks 16").rc, 0);
  const fs::path v = dir_ / "vendor";
  const std::string pp = storage::read_text(v / "params.json");
  PublicParams params = storage::decode_public_params(pp);
  EXPECT_EQ(storage::encode_public_params(params), pp);
  const std::string keys = storage::read_text(v / "vendor.json");
  VendorState st = storage::decode_vendor_state(params, keys);
  EXPECT_EQ(storage::encode_vendor_keys(st), keys);
  EXPECT_TRUE(precheck(st.params, st.otag.pub, st.vendor_id));
  const std::string msk = storage::read_text(v / "master.json");
  EXPECT_EQ(storage::encode_master_secret(storage::decode_master_secret(params.group, msk)), msk);
  const std::string pool = storage::read_text(v / "pool.json");
  EXPECT_EQ(storage::encode_pool(storage::decode_pool(params.group, pool)), pool);
}

TEST_F(Cli, FleetInitAndTagPreconditions) {
  EXPECT_EQ(run("fleet-init --servers 0").rc, 2);
  ASSERT_EQ(run("keygen --blocks 16").rc, 0);
  write("x.bin", 10);
  EXPECT_EQ(run("tag x.bin").rc, 2);  // no fleet yet
  ASSERT_EQ(run("fleet-init --servers 2").rc, 0);
  EXPECT_EQ(run("fleet-init --servers 2").rc, 2);
  EXPECT_EQ(run("tag x.bin --replicas 0").rc, 2);
  EXPECT_EQ(run("tag x.bin --replicas 3").rc, 2);
  EXPECT_EQ(run("tag x.bin --replicas 1").rc, 0);
  EXPECT_EQ(run("tag x.bin").rc, 1);  // duplicate name
}

TEST_F(Cli, TagLeavesNoContentWithVendor) {
  bootstrap();
  write("big.bin", 2000, 3);  // capacity at l = 32 is 588 bytes
  Result r = run("tag big.bin --remove-source");
  ASSERT_EQ(r.rc, 0) << r.out;
  EXPECT_NE(r.out.find("big.bin.part4of4"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir_ / "big.bin"));
  for (const auto& e : fs::recursive_directory_iterator(dir_ / "vendor")) {
    auto ext = e.path().extension();
    EXPECT_TRUE(ext != ".blk" && ext != ".tag") << e.path();
  }
  std::size_t blk = 0;
  for (const auto& e : fs::directory_iterator(dir_ / "fleet" / "server-2")) blk += e.path().extension() == ".blk";
  EXPECT_EQ(blk, 6u);
  EXPECT_EQ(run("audit -m 4").rc, 0);
}

TEST_F(Cli, AuditUsageErrors) {
  bootstrap();
  EXPECT_EQ(run("audit -m 0").rc, 2);
  EXPECT_EQ(run("audit -m 5").rc, 2);
  EXPECT_EQ(run("audit -m 1").rc, 2);
  EXPECT_EQ(run("audit -m 2 --servers 0 --files a.txt").rc, 2);
  EXPECT_EQ(run("audit -m 1 --files nope --servers 0").rc, 2);
  EXPECT_EQ(run("audit -m 1 --files a.txt --servers 9").rc, 2);
  Result ok = run("audit -m 1 --files a.txt --servers 0");
  EXPECT_EQ(ok.rc, 0);
  EXPECT_NE(ok.out.find("verdict: 1"), std::string::npos);
  EXPECT_EQ(run("audit -m 2 --servers 1").rc, 0);
  EXPECT_EQ(run("audit -m 3 --files b.txt").rc, 0);
}

TEST_F(Cli, CorruptLocalizeRepairPipeline) {
  bootstrap();
  EXPECT_EQ(run("localize").rc, 2);
  ASSERT_EQ(run("audit -m 4").rc, 0);
  EXPECT_EQ(run("localize").rc, 2);
  ASSERT_EQ(run("corrupt --server 2 --file b.txt --kind flip-block --block 4 --seed 3").rc, 0);
  ASSERT_EQ(run("corrupt --server 0 --file a.txt --kind drop-replica").rc, 0);
  Result bad = run("audit -m 4 --challenged 32");
  EXPECT_EQ(bad.rc, 3);
  EXPECT_NE(bad.out.find("verdict: 0"), std::string::npos);
  EXPECT_NE(bad.out.find("o2di localize"), std::string::npos);
  Result loc = run("localize --json");
  ASSERT_EQ(loc.rc, 0) << loc.out;
  auto j = nlohmann::json::parse(loc.out);
  EXPECT_EQ(j["corrupted"][0]["file_names"], nlohmann::json::array({"a.txt"}));
  EXPECT_TRUE(j["corrupted"][1]["files"].empty());
  EXPECT_EQ(j["corrupted"][2]["file_names"], nlohmann::json::array({"b.txt"}));
  Result rep = run("repair");
  EXPECT_EQ(rep.rc, 0) << rep.out;
  EXPECT_EQ(run("repair").rc, 2);
  EXPECT_EQ(run("audit -m 4 --challenged 32").rc, 0);
}

TEST_F(Cli, UnrecoverableRepairReported) {
  bootstrap();
  for (int j = 0; j < 3; ++j) {
    ASSERT_EQ(run("corrupt --server " + std::to_string(j) + " --file a.txt --kind zero-block --block 1").rc, 0);
  }
  EXPECT_EQ(run("audit -m 3 --files a.txt --challenged 32").rc, 3);
  Result rep = run("repair");
  EXPECT_EQ(rep.rc, 3);
  EXPECT_NE(rep.out.find("unrecoverable"), std::string::npos);
}

TEST_F(Cli, SeedReproducesReports) {
  const std::string flags = "--seed 42";
  std::string logs[2];
  for (int round = 0; round < 2; ++round) {
    fs::remove_all(dir_ / "vendor");
    fs::remove_all(dir_ / "fleet");
    ASSERT_EQ(run(flags + " keygen --blocks 32 --test-mode").rc, 0);
    ASSERT_EQ(run(flags + " fleet-init --servers 3").rc, 0);
    write("a.txt", 300, 1);
    write("b.txt", 500, 2);
    ASSERT_EQ(run(flags + " tag a.txt b.txt").rc, 0);
    run(flags + " corrupt --server 1 --file a.txt --kind tamper-tag --block 2");
    EXPECT_EQ(run(flags + " audit -m 4 --challenged 32").rc, 3);
    run(flags + " localize");
    EXPECT_EQ(run(flags + " repair").rc, 0);
    EXPECT_EQ(run(flags + " audit -m 2 --servers 1").rc, 0);
    logs[round] = storage::read_text(dir_ / "vendor" / "audits.jsonl");
  }
  EXPECT_EQ(logs[0], logs[1]);
  EXPECT_EQ(logs[0].find("timings_ms"), std::string::npos);
  EXPECT_EQ(std::count(logs[0].begin(), logs[0].end(), '\n'), 3);
  EXPECT_EQ(run("keygen --test-mode --force").rc, 2);
}

TEST_F(Cli, ConfigFileAndOverrides) {
  bootstrap();
  {
    std::ofstream cfg(dir_ / "o2di.conf");
    cfg << "challenged_blocks=7\nvendor-dir=vendor\nfleet_dir=fleet\n";
  }
  Result a = run("--config o2di.conf --json audit -m 1 --files a.txt --servers 0");
  ASSERT_EQ(a.rc, 0) << a.out;
  EXPECT_EQ(nlohmann::json::parse(a.out)["challenged"], 7);
  Result b = run("--config o2di.conf --challenged-blocks 9 --json audit -m 1 --files a.txt --servers 0");
  EXPECT_EQ(nlohmann::json::parse(b.out)["challenged"], 9);
  Result c = run("--config o2di.conf --json audit -m 1 --files a.txt --servers 0 --challenged 3");
  EXPECT_EQ(nlohmann::json::parse(c.out)["challenged"], 3);
  {
    std::ofstream cfg(dir_ / "other.conf");
    cfg << "vendor_dir=elsewhere\n";
  }
  EXPECT_EQ(run("--config other.conf audit -m 4").rc, 2);
}

TEST_F(Cli, BenchChecksSizes) {
  Result r = run("--seed 1 bench --blocks 256,512 --servers 1,2 --challenged 100,200 --csv out.csv");
  ASSERT_EQ(r.rc, 0) << r.out;
  EXPECT_NE(r.out.find("8 configurations; size and operation-count checks passed"), std::string::npos);
  std::ifstream csv(dir_ / "out.csv");
  std::string header, line;
  std::getline(csv, header);
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    EXPECT_EQ(line.substr(line.size() - 6), ",1,1,1");
  }
  EXPECT_EQ(rows, 8);
  Result j = run("--seed 1 --json bench --blocks 256 --servers 2 --challenged 100");
  ASSERT_EQ(j.rc, 0);
  auto rec = nlohmann::json::parse(j.out);
  EXPECT_EQ(rec["bytes"]["proof"], 256);
  EXPECT_EQ(rec["bytes"]["tag"], 256 * 20);
  EXPECT_EQ(rec["bytes"]["challenge"], 130 + 28 * 100);
  EXPECT_EQ(rec["challgen2"]["exp"], 0);
  EXPECT_EQ(run("bench --servers 0").rc, 2);
}
