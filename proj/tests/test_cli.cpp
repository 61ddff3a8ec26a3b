#include <doctest.h>

#include <json.hpp>
#include <sturmspec/real.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using sturm::Real;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("sturmspec_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path outp = scratch_dir() / ("out" + std::to_string(++counter));
  const fs::path errp = scratch_dir() / ("err" + std::to_string(counter));
  const std::string cmd = std::string(STURMSPEC_CLI_PATH) + " " + args + " >" +
                          outp.string() + " 2>" + errp.string();
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(outp);
  r.err = slurp(errp);
  return r;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  return lines;
}

const std::string kGolden = "--alpha per:1 --V 24 ";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("band dump carries the whole order-two hierarchy") {
    sturm::PrecisionGuard guard(256);
    const RunResult r = run_cli("bands " + kGolden + "--order 2");
    REQUIRE(r.code == 0);
    CHECK(r.err.empty());
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 9);  // meta record plus 2 + 2 + 4 bands

    const json meta = json::parse(lines[0]);
    CHECK(meta.at("kind") == "band-dump");
    CHECK(meta.at("alpha") == "[0;(1)]");
    CHECK(meta.at("order") == 2);
    CHECK(meta.at("config_hash") == "c02fa802ee05c84d");

    std::map<int, int> per_order;
    std::set<std::string> paths;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const json b = json::parse(lines[i]);
      per_order[b.at("order").get<int>()]++;
      CHECK(paths.insert(b.at("path").get<std::string>()).second);
      const Real lo = sturm::real_from_serial(b.at("lo").get<std::string>());
      const Real hi = sturm::real_from_serial(b.at("hi").get<std::string>());
      CHECK(lo < hi);
      const std::string kind = b.at("kind").get<std::string>();
      CHECK((kind == "I" || kind == "II" || kind == "III"));
      const std::string path = b.at("path").get<std::string>();
      const std::string parent = b.at("parent_path").get<std::string>();
      if (parent.empty())
        CHECK(path.find('.') == std::string::npos);
      else
        CHECK(path.rfind(parent + ".", 0) == 0);
      if (path == "I") {
        CHECK(lo == Real(22));
        CHECK(hi == Real(26));
      }
      if (path == "III") {
        CHECK(lo == Real(-2));
        CHECK(hi == Real(2));
      }
    }
    CHECK(per_order[0] == 2);
    CHECK(per_order[1] == 2);
    CHECK(per_order[2] == 4);
  }

  TEST_CASE("repeated runs emit identical bytes") {
    const RunResult a = run_cli("bands " + kGolden + "--order 4 --threads 3");
    const RunResult b = run_cli("bands " + kGolden + "--order 4 --threads 1");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
  }

  TEST_CASE("exit codes separate configuration faults from the rest") {
    CHECK(run_cli("--help").code == 0);
    CHECK(run_cli("bands --alpha per:1 --V 20 --order 2").code == 2);
    CHECK(run_cli("bands --alpha per:0 --V 24 --order 2").code == 2);
    CHECK(run_cli("bogus").code == 2);
    CHECK(run_cli("bands --wat 3").code == 2);
    CHECK(run_cli("gibbs " + kGolden + "--order 6 --k-max 5").code == 2);
    // numeric domain faults and unreadable files are not configuration
    CHECK(run_cli("gibbs " + kGolden + "--order 6 --beta 1.5").code == 1);
    CHECK(run_cli("dims --config /nonexistent.cfg").code == 1);
    const RunResult r = run_cli("bands --alpha per:1 --V 20 --order 2");
    CHECK(r.err.find("CouplingTooSmall") != std::string::npos);
  }

  TEST_CASE("config file fills in what the flags omit") {
    const fs::path cfg = scratch_dir() / "run.cfg";
    std::ofstream(cfg) << "# comment line\norder=3\nthreads=2\n";
    const RunResult file_only =
        run_cli("dims " + kGolden + "--config " + cfg.string());
    REQUIRE(file_only.code == 0);
    CHECK(file_only.out.find(" order=3 ") != std::string::npos);
    const RunResult flag_wins =
        run_cli("dims " + kGolden + "--config " + cfg.string() + " --order 5");
    REQUIRE(flag_wins.code == 0);
    CHECK(flag_wins.out.find(" order=5 ") != std::string::npos);

    const fs::path bad = scratch_dir() / "bad.cfg";
    std::ofstream(bad) << "wat=3\n";
    const RunResult rejected = run_cli("dims --config " + bad.string());
    CHECK(rejected.code == 2);
    CHECK(rejected.err.find("unknown key") != std::string::npos);
    CHECK(rejected.err.find(":1:") != std::string::npos);
  }

  TEST_CASE("cache restores, extends, and survives tampering") {
    const fs::path cache = scratch_dir() / "bands.jsonl";
    fs::remove(cache);
    const RunResult seed =
        run_cli("bands " + kGolden + "--order 3 --cache " + cache.string());
    REQUIRE(seed.code == 0);
    REQUIRE(fs::exists(cache));

    const RunResult extended =
        run_cli("bands " + kGolden + "--order 4 --cache " + cache.string());
    const RunResult fresh = run_cli("bands " + kGolden + "--order 4");
    REQUIRE(extended.code == 0);
    CHECK(extended.out == fresh.out);
    CHECK(extended.err.empty());

    // flip the stored digest: the cache must be abandoned, not trusted
    std::string held = slurp(cache);
    const std::string hash = "c02fa802ee05c84d";
    const auto at = held.find(hash);
    REQUIRE(at != std::string::npos);
    held.replace(at, hash.size(), "deadbeefdeadbeef");
    std::ofstream(cache, std::ios::binary) << held;

    const RunResult tampered =
        run_cli("bands " + kGolden + "--order 3 --cache " + cache.string());
    const RunResult plain = run_cli("bands " + kGolden + "--order 3");
    REQUIRE(tampered.code == 0);
    CHECK(tampered.err.find("ignoring cache") != std::string::npos);
    CHECK(tampered.out == plain.out);

    // the run rewrites the cache, so the warning does not repeat
    const RunResult again =
        run_cli("bands " + kGolden + "--order 3 --cache " + cache.string());
    CHECK(again.code == 0);
    CHECK(again.err.empty());
    CHECK(again.out == plain.out);
  }

  TEST_CASE("reports can be routed to a file") {
    const fs::path dest = scratch_dir() / "dump.jsonl";
    const RunResult routed =
        run_cli("bands " + kGolden + "--order 2 --out " + dest.string());
    const RunResult direct = run_cli("bands " + kGolden + "--order 2");
    REQUIRE(routed.code == 0);
    CHECK(routed.out.empty());
    CHECK(slurp(dest) == direct.out);
  }

  TEST_CASE("audit subcommand reports the hard gate") {
    const RunResult hard = run_cli("audit " + kGolden + "--order 5 --suite hard");
    REQUIRE(hard.code == 0);
    CHECK(hard.out.find("hard_suite PASS") != std::string::npos);
    int check_lines = 0;
    for (const auto& l : lines_of(hard.out))
      if (l.rfind("check ", 0) == 0) ++check_lines;
    CHECK(check_lines == 8);

    const RunResult one = run_cli("audit " + kGolden + "--order 5 --checks 11");
    REQUIRE(one.code == 0);
    CHECK(one.out.find("check 11 count_recursion") != std::string::npos);
    CHECK(run_cli("audit " + kGolden + "--order 5 --checks 13").code == 2);
  }

  TEST_CASE("measure and asymptotics reports parse back to numbers") {
    sturm::PrecisionGuard guard(256);
    const RunResult gibbs = run_cli("gibbs " + kGolden + "--order 6 --k-max 2");
    REQUIRE(gibbs.code == 0);
    const auto glines = lines_of(gibbs.out);
    Real weight_sum(0);
    std::size_t weight_count = 0, ratio_lines = 0;
    for (const auto& l : glines) {
      std::istringstream in(l);
      std::string head;
      in >> head;
      if (head == "beta") {
        std::string v;
        in >> v;
        const Real beta = sturm::real_from_serial(v);
        CHECK(beta > Real(0));
        CHECK(beta < Real(1));
      } else if (head == "ratio") {
        ++ratio_lines;
        std::string kf, minf, maxf;
        in >> kf >> minf >> maxf;
        const Real mn = sturm::real_from_serial(minf.substr(4));
        const Real mx = sturm::real_from_serial(maxf.substr(4));
        CHECK(mn > Real(0));
        CHECK(mn < mx);
      } else if (head == "stability") {
        std::string v;
        in >> v;
        CHECK(sturm::real_from_serial(v.substr(6)) >= Real(1));
      } else if (!l.empty() && l[0] == 'I') {
        std::string serial;
        in >> serial;
        weight_sum += sturm::real_from_serial(serial);
        ++weight_count;
      }
    }
    CHECK(ratio_lines == 3);
    CHECK(weight_count == 26);
    CHECK(abs(weight_sum - 1) < Real("1e-40"));

    const RunResult asym =
        run_cli("asym " + kGolden + "--V-list 30,100 --order 4");
    REQUIRE(asym.code == 0);
    const auto alines = lines_of(asym.out);
    std::size_t rows = 0;
    for (const auto& l : alines) {
      if (l.rfind("f_star ", 0) == 0) {
        const Real f = sturm::real_from_serial(l.substr(7));
        CHECK(abs(f - Real("0.41421356237309504880168872420969808")) <
              Real("1e-10"));
      } else if (!l.empty() && l[0] >= '1' && l[0] <= '9') {
        ++rows;
        std::vector<std::string> cells;
        std::istringstream in(l);
        for (std::string c; std::getline(in, c, ',');) cells.push_back(c);
        REQUIRE(cells.size() == 6);
        const Real s_ln_v = sturm::real_from_serial(cells[3]);
        const Real target = sturm::real_from_serial(cells[4]);
        const Real gap = sturm::real_from_serial(cells[5]);
        CHECK(abs(gap - abs(s_ln_v - target)) < Real("1e-45"));
      }
    }
    CHECK(rows == 2);
  }
}
