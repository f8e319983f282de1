#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Output {
  int status = -1;
  std::string text;
};

// Runs the CLI with stderr folded into the captured text.
Output oarc(const std::string& args, const std::string& stdin_text = "") {
  const fs::path in = fs::temp_directory_path() / "oarc_cli_stdin.txt";
  {
    std::ofstream f(in);
    f << stdin_text;
  }
  const std::string cmd = std::string(OARC_BIN) + " " + args + " < " + in.string() + " 2>&1";
  Output out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.text.append(buf, got);
  const int raw = pclose(pipe);
  out.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "oarc_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("simulate writes one row per procedure, grid point and metric") {
  const auto csv = scratch("sim.csv");
  const auto r = oarc("simulate --procedures oe-bh,e-lond --n 100 --m 5 -o " + csv.string());
  REQUIRE(r.status == 0);
  const auto rows = lines_of(slurp(csv));
  REQUIRE(rows.size() == 9 * 2 * 3 + 1);
  CHECK(rows[0] == "procedure,pi_a,mu_a,q,alpha,metric,value,stderr,n,m,seed");
  CHECK(rows[1].rfind("oe-bh,", 0) == 0);

  const auto again = scratch("sim2.csv");
  REQUIRE(oarc("simulate --procedures oe-bh,e-lond --n 100 --m 5 -o " + again.string()).status == 0);
  CHECK(slurp(csv) == slurp(again));
  REQUIRE(oarc("simulate --procedures oe-bh,e-lond --n 100 --m 5 --serial -o " + again.string()).status == 0);
  CHECK(slurp(csv) == slurp(again));
}

TEST_CASE("simulate accepts the full roster and per-entry q") {
  const auto csv = scratch("all.csv");
  REQUIRE(oarc("simulate --procedures all --n 40 --m 2 --pi-a 0.5 -o " + csv.string()).status == 0);
  CHECK(lines_of(slurp(csv)).size() == 15 * 3 + 1);
  REQUIRE(oarc("simulate --procedures o-bh:0.999,lord --n 40 --m 2 --pi-a 0.5 -o " + csv.string()).status == 0);
  CHECK(slurp(csv).find("o-bh:0.999,0.5,3.5,0.999,") != std::string::npos);
}

TEST_CASE("simulate failures leave no file behind") {
  const auto target = scratch("missing_dir") / "x" / "out.csv";
  const auto r = oarc("simulate --n 20 --m 2 -o " + target.string());
  CHECK(r.status != 0);
  CHECK(!fs::exists(target));

  const auto csv = scratch("bad.csv");
  fs::remove(csv);
  CHECK(oarc("simulate --procedures nope --n 20 --m 2 -o " + csv.string()).status == 2);
  CHECK(oarc("simulate --n 30 --batch-size 20 --m 2 -o " + csv.string()).status == 2);
  CHECK(!fs::exists(csv));
}

TEST_CASE("config file with command-line precedence") {
  const auto cfg = scratch("sim.ini");
  {
    std::ofstream f(cfg);
    f << "procedures=oe-bh\nn=40\nm=3\npi-a=0.5\nseed=9\n";
  }
  const auto a = scratch("cfg_a.csv");
  const auto b = scratch("cfg_b.csv");
  REQUIRE(oarc("simulate --config " + cfg.string() + " -o " + a.string()).status == 0);
  const auto rows = lines_of(slurp(a));
  REQUIRE(rows.size() == 4);
  CHECK(rows[1].find(",40,3,9") != std::string::npos);
  REQUIRE(oarc("simulate --config " + cfg.string() + " --m 4 -o " + b.string()).status == 0);
  CHECK(lines_of(slurp(b))[1].find(",40,4,9") != std::string::npos);
}

TEST_CASE("stream prints incremental decisions") {
  auto r = oarc("stream --kind e --weights uniform:2 --alpha 0.1", "10\n30\n");
  REQUIRE(r.status == 0);
  CHECK(r.text == "t=1 k*=0 rejected={} new={}\nt=2 k*=2 rejected={1,2} new={1,2}\n");

  r = oarc("stream --kind e --procedure e-lond --weights uniform:2 --alpha 0.1", "10\n30\n");
  CHECK(r.text == "t=1 k*=0 rejected={} new={}\nt=2 k*=1 rejected={2} new={2}\n");

  r = oarc("stream --kind p --weights uniform:2 --alpha 0.1", "# comment\n0.01\n\n0.9\n");
  REQUIRE(r.status == 0);
  CHECK(r.text == "t=1 k*=1 rejected={1} new={1}\nt=2 k*=1 rejected={1} new={}\n");

  CHECK(oarc("stream --kind e", "").status == 0);
  r = oarc("stream --kind p", "0.5\nabc\n");
  CHECK(r.status == 2);
  CHECK(r.text.find("line 2") != std::string::npos);
  CHECK(oarc("stream --kind p", "1.5\n").status == 2);
  CHECK(oarc("stream --kind q", "0.5\n").status != 0);
}

TEST_CASE("boost-factor reproduces the reference table") {
  const auto r = oarc("boost-factor");
  REQUIRE(r.status == 0);
  for (const char* b : {"1.165321912840", "1.173875697554", "3.070669153615", "1.732401276556", "1.264572280007",
                        "1.541387405831", "1.939732328779", "2.638487041390"}) {
    CHECK(r.text.find(b) != std::string::npos);
  }
  CHECK(oarc("boost-factor --variant local-minus --s 100 --lag 10").text.find("2.638487041390") !=
        std::string::npos);
  CHECK(oarc("boost-factor --delta 0.01 --gamma 1e-6 --variant minus --s 10").status == 3);
  CHECK(oarc("boost-factor --variant sideways --s 10").status == 2);
}

TEST_CASE("adversarial and oracle-check subcommands") {
  const auto a = oarc("adversarial --K0 50 --alpha 0.1,0.05 --m 20");
  REQUIRE(a.status == 0);
  CHECK(a.text.find("0.05") != std::string::npos);
  const auto o = oarc("oracle-check --K 5,20 --instances 50");
  CHECK(o.status == 0);
  CHECK(oarc("").status != 0);
  CHECK(oarc("frobnicate").status != 0);
}
