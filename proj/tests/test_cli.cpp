#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "ptep/cli.hpp"
#include "ptep/json_io.hpp"

using namespace ptep;
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
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() / ("ptep_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

std::vector<double> cells(const std::string& row) {
  std::vector<double> v;
  std::istringstream is(row);
  for (std::string c; std::getline(is, c, ',');) v.push_back(std::stod(c));
  return v;
}

double slope_of(const std::string& sensing_csv) {
  const auto rows = split_lines(sensing_csv);
  return json_io::Json::parse(rows.back().substr(2))["slope"].get<double>();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("find-ep writes the four fourth-order families") {
    TempDir dir;
    const auto path = dir.file("n4.json");
    const auto r = run({"--out", path, "find-ep", "--order", "4", "--mode", "leading"});
    CHECK(r.code == 0);
    CHECK(r.out.find("found 4 families") != std::string::npos);
    const auto list = json_io::solutions_from_json(json_io::parse_file(path));
    CHECK(list.size() == 4);

    const auto v = run({"verify", path});
    CHECK(v.code == 0);
    CHECK(v.out.find("FAIL") == std::string::npos);
  }

  TEST_CASE("find-ep in full mode") {
    const auto r = run({"find-ep", "--order", "2", "--mode", "full", "--epsilon", "0.1"});
    REQUIRE(r.code == 0);
    const auto list = json_io::solutions_from_json(json_io::Json::parse(r.out));
    REQUIRE(list.size() == 1);
    CHECK(list[0].profile.b[0] == doctest::Approx(0.100504).epsilon(1e-5));
    CHECK(list[0].profile.a[0] == 1.0);
  }

  TEST_CASE("find-ep rejects bad arguments") {
    const auto r = run({"find-ep", "--order", "1"});
    CHECK(r.code == 1);
    CHECK(r.err.find("order must be ≥ 2") != std::string::npos);
    CHECK(run({"find-ep", "--order", "3", "--mode", "full"}).code == 1);
    CHECK(run({"find-ep", "--order", "3", "--mode", "full", "--epsilon", "0.7"}).code == 1);
    CHECK(run({"find-ep", "--order", "3", "--mode", "sideways"}).code == 1);
    CHECK(run({"find-ep", "--order", "3", "--bogus"}).code == 1);
    CHECK(run({"find-ep"}).code == 1);
    CHECK(run({"teleport"}).code == 1);
    CHECK(run({}).code == 1);
  }

  TEST_CASE("find-ep output is deterministic") {
    TempDir dir;
    const auto a = dir.file("a.json");
    const auto b = dir.file("b.json");
    const auto c = dir.file("c.json");
    REQUIRE(run({"--out", a, "--seed", "5", "--threads", "1", "find-ep", "--order", "5"}).code == 0);
    REQUIRE(run({"--out", b, "--seed", "5", "--threads", "1", "find-ep", "--order", "5"}).code == 0);
    REQUIRE(run({"--out", c, "--seed", "5", "--threads", "4", "find-ep", "--order", "5"}).code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a) == slurp(c));
    CHECK(run({"verify", a}).code == 0);
  }

  TEST_CASE("sweep") {
    TempDir dir;
    const auto n3 = dir.file("n3.json");
    const auto n4 = dir.file("n4.json");
    REQUIRE(run({"--out", n3, "find-ep", "--order", "3"}).code == 0);
    REQUIRE(run({"--out", n4, "find-ep", "--order", "4"}).code == 0);

    SUBCASE("default range") {
      const auto csv = dir.file("n3.csv");
      const auto r = run({"--out", csv, "sweep", "--ep", n3});
      REQUIRE(r.code == 0);
      const auto pos = r.out.find("coalescence gap at tau=1: ");
      REQUIRE(pos != std::string::npos);
      CHECK(std::stod(r.out.substr(pos + 26)) < 1e-8);
      const auto rows = split_lines(slurp(csv));
      CHECK(rows.size() == 402);
      CHECK(rows[0] == "tau,re_1,im_1,re_2,im_2,re_3,im_3,gap");
    }
    SUBCASE("single point") {
      const auto r = run({"sweep", "--ep", n3, "--tau-min", "1", "--tau-max", "1", "--steps", "1"});
      REQUIRE(r.code == 0);
      CHECK(split_lines(r.out).size() == 2);
    }
    SUBCASE("four resonators, last family") {
      const auto r = run({"sweep", "--ep", n4, "--family", "3", "--steps", "41"});
      REQUIRE(r.code == 0);
      const auto rows = split_lines(r.out);
      REQUIRE(rows.size() == 42);
      CHECK(rows[0] == "tau,re_1,im_1,re_2,im_2,re_3,im_3,re_4,im_4,gap");
      for (std::size_t k = 1; k < rows.size(); ++k) {
        const auto v = cells(rows[k]);
        REQUIRE(v.size() == 10);
        double sum_im = 0.0;
        for (int i = 0; i < 4; ++i) sum_im += v[2 + 2 * i];
        CHECK(std::abs(sum_im) < 1e-9);
      }
    }
    SUBCASE("frequencies columns") {
      const auto r = run({"sweep", "--ep", n3, "--steps", "3", "--with-frequencies", "--epsilon", "0.1"});
      REQUIRE(r.code == 0);
      CHECK(split_lines(r.out)[0].find("omega_re_1") != std::string::npos);
    }
    SUBCASE("missing family") { CHECK(run({"sweep", "--ep", n3, "--family", "7"}).code == 2); }
    SUBCASE("missing file") { CHECK(run({"sweep", "--ep", dir.file("none.json")}).code == 1); }
  }

  TEST_CASE("sense") {
    TempDir dir;
    const auto n2 = dir.file("n2.json");
    const auto n3 = dir.file("n3.json");
    REQUIRE(run({"--out", n2, "find-ep", "--order", "2"}).code == 0);
    REQUIRE(run({"--out", n3, "find-ep", "--order", "3"}).code == 0);

    const auto r3 = run({"sense", "--ep", n3, "--site", "1", "--s-min", "1e-8", "--s-max", "1e-3", "--points", "25"});
    REQUIRE(r3.code == 0);
    CHECK(std::abs(slope_of(r3.out) - 1.0 / 3.0) < 0.05);
    CHECK(r3.err.find("slope") != std::string::npos);
    CHECK(split_lines(r3.out).size() == 27);

    const auto r2 = run({"sense", "--ep", n2, "--site", "2"});
    REQUIRE(r2.code == 0);
    CHECK(std::abs(slope_of(r2.out) - 0.5) < 0.05);

    CHECK(run({"sense", "--ep", n3, "--site", "0"}).code == 1);
    CHECK(run({"sense", "--ep", n3, "--site", "4"}).code == 1);
    CHECK(run({"sense", "--ep", n3, "--site", "1", "--s-min", "1e-3", "--s-max", "1e-8"}).code == 1);
    const auto tiny = run({"sense", "--ep", n2, "--site", "1", "--s-min", "1e-30", "--s-max", "1e-26"});
    CHECK(tiny.code == 2);
    CHECK_FALSE(tiny.err.empty());
  }

  TEST_CASE("frequencies") {
    const auto r = run({"frequencies", "--gamma", "1", "--gamma", "0"});
    REQUIRE(r.code == 0);
    const auto rows = split_lines(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "family,index,gamma_re,gamma_im,omega_re,omega_im,resonant");
    const auto first = rows[1];
    CHECK(first.find("0.0244948974278317") != std::string::npos);
    CHECK(run({"frequencies"}).code == 1);
  }

  TEST_CASE("verify flags tampered files") {
    TempDir dir;
    const auto good = dir.file("n4.json");
    REQUIRE(run({"--out", good, "find-ep", "--order", "4"}).code == 0);
    auto j = json_io::parse_file(good);

    SUBCASE("one-sided sign flip") {
      auto k = j;
      k[0]["b"][3] = -k[0]["b"][3].get<double>();
      const auto path = dir.file("pt.json");
      std::ofstream(path) << json_io::dump(k);
      const auto r = run({"verify", path});
      CHECK(r.code == 2);
      CHECK(r.out.find("FAIL pt_symmetry") != std::string::npos);
    }
    SUBCASE("perturbed gamma") {
      auto k = j;
      k[1]["gamma"] = k[1]["gamma"].get<double>() + 1e-3;
      const auto path = dir.file("gamma.json");
      std::ofstream(path) << json_io::dump(k);
      const auto r = run({"verify", path});
      CHECK(r.code == 2);
      CHECK(r.out.find("FAIL coefficients") != std::string::npos);
    }
    SUBCASE("unparsable file") {
      const auto path = dir.file("junk.json");
      std::ofstream(path) << "[{\"order\": 4,";
      CHECK(run({"verify", path}).code == 1);
    }
  }
}
