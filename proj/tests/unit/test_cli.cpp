#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "primfield/cli.hpp"
#include "primfield/primitive.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = primfield::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / ("primfield-cli-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("count table has the expected row") {
    const Run r = run({"count", "table", "--q", "2", "--max-n", "20"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("n,k,count\n", 0) == 0);
    CHECK(r.out.find("\n2,2,1\n") != std::string::npos);
    CHECK(r.out.find("\n2,1,1\n") != std::string::npos);  // x^2+x+1
  }

  TEST_CASE("irr count rows") {
    const Run r = run({"irr", "count", "--q", "2", "--max-n", "4"});
    CHECK(r.code == 0);
    CHECK(r.out == "n,pi_prime,pi_cumulative\n1,2,2\n2,1,3\n3,2,5\n4,3,8\n");
    const Run k = run({"irr", "kth", "--q", "2", "--k", "3"});
    CHECK(k.out == "q=2;1,1,1\n");
  }

  TEST_CASE("set check reports the divisor pair and exits 2") {
    const fs::path file = scratch_dir() / "bad.txt";
    std::ofstream(file) << "q=2;horizon=4\nq=2;0,1\nq=2;0,1,1\n";
    const Run r = run({"set", "check", "--in", file.string()});
    CHECK(r.code == primfield::cli::kExitViolation);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["primitive"] == false);
    CHECK(j["counterexample"][0] == "q=2;0,1");
    CHECK(j["counterexample"][1] == "q=2;0,1,1");
  }

  TEST_CASE("verify hr to degree 60 passes") {
    const Run r = run({"verify", "hr", "--q", "2", "--max-n", "60"});
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["violations"].empty());
  }

  TEST_CASE("usage and domain errors exit 1") {
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"irr", "kth", "--q", "4", "--k", "3"}).code == 1);
    CHECK(run({"count", "table", "--q", "2"}).code == 1);
    CHECK(run({"verify", "hr", "--max-n", "5", "--format", "csv"}).code == 1);
    const fs::path file = scratch_dir() / "malformed.txt";
    std::ofstream(file) << "q=2;horizon=4\nq=2;0,2,1\n";
    CHECK(run({"set", "check", "--in", file.string()}).code == 1);
  }

  TEST_CASE("eval output is bracketed") {
    const Run m = run({"eval", "mertens", "--q", "2", "--n", "10"});
    CHECK(m.code == 0);
    const auto j = nlohmann::json::parse(m.out);
    CHECK(j.contains("lo"));
    CHECK(j.contains("hi"));
    CHECK(j["exact"].is_string());
    const Run g = run({"eval", "g", "--q", "2", "--z", "0", "--eps", "1e-6"});
    CHECK(nlohmann::json::parse(g.out)["lo"].is_string());
    const Run e = run({"eval", "erdos-irr", "--q", "2", "--eps", "0.01"});
    CHECK(nlohmann::json::parse(e.out)["width"] == "1/100");
  }

  TEST_CASE("manifest replay is byte-identical") {
    const fs::path dir = scratch_dir();
    const fs::path first = dir / "table1.csv";
    const fs::path second = dir / "table2.csv";
    const fs::path manifest = dir / "table.json";
    REQUIRE(run({"count", "table", "--q", "3", "--max-n", "30", "--out", first.string(), "--manifest",
                 manifest.string()})
                .code == 0);
    REQUIRE(run({"replay", manifest.string(), "--to", second.string()}).code == 0);
    CHECK(slurp(first) == slurp(second));
    const auto m = nlohmann::json::parse(slurp(manifest));
    CHECK(m["q"] == 3);
    CHECK(m["version"].is_string());
    CHECK(m["seed"].is_null());

    // generators
    const fs::path set1 = dir / "random1.txt";
    const fs::path set2 = dir / "random2.txt";
    const fs::path gen = dir / "random.json";
    CHECK(run({"set", "random", "--q", "2", "--horizon", "10"}).code == 1);
    REQUIRE(run({"set", "random", "--q", "2", "--horizon", "10", "--seed", "11", "--out", set1.string(), "--manifest",
                 gen.string()})
                .code == 0);
    REQUIRE(run({"replay", gen.string(), "--to", set2.string()}).code == 0);
    CHECK(slurp(set1) == slurp(set2));
    auto unseeded = nlohmann::json::parse(slurp(gen));
    unseeded["seed"] = nullptr;
    std::ofstream(dir / "unseeded.json") << unseeded.dump();
    CHECK(run({"replay", (dir / "unseeded.json").string()}).code == 1);
    std::ifstream in(set1);
    CHECK(primfield::read_set(in).certificate().primitive);
  }

  TEST_CASE("constructions through the CLI") {
    const fs::path dir = scratch_dir();
    const fs::path set = dir / "bes.txt";
    const fs::path report = dir / "bes.json";
    const Run b = run({"construct", "besicovitch", "--q", "3", "--eps", "0.1", "--horizon", "6", "--out", set.string(),
                       "--report", report.string()});
    CHECK(b.code == 0);
    CHECK(nlohmann::json::parse(slurp(report))["primitive"] == true);
    CHECK(run({"verify", "erdos-density", "--in", set.string()}).code == 0);
    CHECK(run({"set", "erdos-sum", "--in", set.string()}).code == 0);
    const Run d = run({"set", "density", "--in", set.string(), "--format", "csv"});
    CHECK(d.out.rfind("n,A,M,ratio\n", 0) == 0);

    const Run mp = run({"construct", "mp", "--q", "2", "--horizon", "30", "--count-only"});
    CHECK(mp.code == 0);
    const auto j = nlohmann::json::parse(mp.out);
    for (const char* key : {"t_sequence", "k0", "partial_sum", "tail_bound", "S_prime_counts", "R_values", "sandwich_band"}) {
      CHECK(j.contains(key));
    }
    CHECK(j["k0"] == 7);
    CHECK(j["certificate_holds"] == true);
    // iterated logs never certify
    CHECK(run({"construct", "mp", "--q", "2", "--L", "iterlog:j=2,eps=0.1", "--horizon", "20", "--count-only"}).code == 1);
  }
}
