#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cpack/cli.hpp"
#include "cpack/edo.hpp"
#include "cpack/graph.hpp"

namespace fs = std::filesystem;
using namespace cpack;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    dir_ = fs::temp_directory_path() /
           ("cpack-test-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter_++));
    fs::create_directories(dir_);
  }
  ~TempDir() { fs::remove_all(dir_); }
  std::string path(const std::string& name) const {
    return (dir_ / name).string();
  }

 private:
  fs::path dir_;
  static inline int counter_ = 0;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("verify-packed: unit edge passes c=2, fails c=1.9") {
  TempDir tmp;
  write_file(tmp.path("g.txt"), "d 2 n 2 m 1\nv 0 0 0\nv 1 1 0\ne 0 1\n");
  auto pass = invoke({"verify-packed", tmp.path("g.txt"), "--c", "2"});
  CHECK(pass.code == cli::kOk);
  CHECK(pass.out.find("c_hat 2") != std::string::npos);
  CHECK(pass.out.find("PASS") != std::string::npos);
  auto fail = invoke({"verify-packed", tmp.path("g.txt"), "--c", "1.9"});
  CHECK(fail.code == cli::kVerificationFailure);
  CHECK(fail.out.find("FAIL") != std::string::npos);
}

TEST_CASE("verify-packed: empty edge set estimates 0") {
  TempDir tmp;
  write_file(tmp.path("g.txt"), "d 2 n 2 m 0\nv 0 0 0\nv 1 5 0\n");
  auto r = invoke({"verify-packed", tmp.path("g.txt"), "--c", "1"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("c_hat 0") != std::string::npos);
}

TEST_CASE("verify-packed: star-4 fails a declared c of 3") {
  TempDir tmp;
  auto gen = invoke({"generate", "--kind", "star", "--n", "4", "-o",
                     tmp.path("star.txt")});
  REQUIRE(gen.code == cli::kOk);
  auto r = invoke({"verify-packed", tmp.path("star.txt"), "--c", "3"});
  CHECK(r.code == cli::kVerificationFailure);
}

TEST_CASE("build-edo/query-edo round trip on a 3-path") {
  TempDir tmp;
  REQUIRE(invoke({"generate", "--kind", "path", "--n", "3", "-o",
                  tmp.path("p3.txt")})
              .code == cli::kOk);
  auto built = invoke({"build-edo", tmp.path("p3.txt"), "--c", "2", "-o",
                       tmp.path("p3.edo")});
  REQUIRE(built.code == cli::kOk);
  auto q = invoke({"query-edo", tmp.path("p3.edo"), "0", "2"});
  CHECK(q.code == cli::kOk);
  CHECK(q.out == "2\n");
  CHECK(invoke({"query-edo", tmp.path("p3.edo"), "0", "9"}).code ==
        cli::kInputError);
}

TEST_CASE("stored oracle answers match the in-memory build digit for digit") {
  TempDir tmp;
  REQUIRE(invoke({"generate", "--kind", "spiral", "--n", "40", "-o",
                  tmp.path("s.txt")})
              .code == cli::kOk);
  REQUIRE(invoke({"build-edo", tmp.path("s.txt"), "--c", "12", "-o",
                  tmp.path("s.edo")})
              .code == cli::kOk);
  auto g = read_graph_file(tmp.path("s.txt"));
  auto h = SeparatorHierarchy::build(g, 12.0);
  for (int u = 0; u < g.n(); u += 7)
    for (int v = 0; v < g.n(); v += 5) {
      auto q = invoke({"query-edo", tmp.path("s.edo"), std::to_string(u),
                       std::to_string(v)});
      char want[64];
      std::snprintf(want, sizeof want, "%.12g\n", h.query(u, v));
      CHECK(q.out == want);
    }
}

TEST_CASE("deterministic rebuilds produce byte-identical dumps") {
  TempDir tmp;
  REQUIRE(invoke({"generate", "--kind", "grid", "--n", "16", "-o",
                  tmp.path("g.txt")})
              .code == cli::kOk);
  REQUIRE(invoke({"build-edo", tmp.path("g.txt"), "--c", "16", "-o",
                  tmp.path("a.edo")})
              .code == cli::kOk);
  REQUIRE(invoke({"build-edo", tmp.path("g.txt"), "--c", "16", "-o",
                  tmp.path("b.edo")})
              .code == cli::kOk);
  CHECK(read_file(tmp.path("a.edo")) == read_file(tmp.path("b.edo")));
  REQUIRE(invoke({"build-ado", tmp.path("g.txt"), "--c", "16", "--epsilon",
                  "0.5", "-o", tmp.path("a.ado")})
              .code == cli::kOk);
  REQUIRE(invoke({"build-ado", tmp.path("g.txt"), "--c", "16", "--epsilon",
                  "0.5", "-o", tmp.path("b.ado")})
              .code == cli::kOk);
  CHECK(read_file(tmp.path("a.ado")) == read_file(tmp.path("b.ado")));
}

TEST_CASE("build-ado/query-ado stay within the distortion band") {
  TempDir tmp;
  REQUIRE(invoke({"generate", "--kind", "path", "--n", "6", "-o",
                  tmp.path("p.txt")})
              .code == cli::kOk);
  REQUIRE(invoke({"build-ado", tmp.path("p.txt"), "--c", "2", "--epsilon",
                  "0.5", "-o", tmp.path("p.ado")})
              .code == cli::kOk);
  auto q = invoke({"query-ado", tmp.path("p.ado"), "0", "5"});
  REQUIRE(q.code == cli::kOk);
  double ans = std::stod(q.out);
  CHECK(ans >= 5.0 - 1e-9);
  CHECK(ans <= 7.5 + 1e-9);
  CHECK(invoke({"query-ado", tmp.path("p.ado"), "0", "0"}).out == "0\n");
}

TEST_CASE("build-wspd emits one P line per pair") {
  TempDir tmp;
  REQUIRE(invoke({"generate", "--kind", "path", "--n", "9", "-o",
                  tmp.path("p.txt")})
              .code == cli::kOk);
  auto r = invoke({"build-wspd", tmp.path("p.txt"), "--c", "2", "--sigma", "4",
                   "--emit-pairs"});
  REQUIRE(r.code == cli::kOk);
  std::istringstream is(r.out);
  std::string line;
  REQUIRE(std::getline(is, line));
  REQUIRE(line.rfind("pairs ", 0) == 0);
  long expected = std::stol(line.substr(6));
  long plines = 0;
  while (std::getline(is, line)) {
    REQUIRE(line.rfind("P ", 0) == 0);
    std::istringstream ls(line);
    std::string tag;
    int ra, rb;
    double da, db, dist;
    REQUIRE((ls >> tag >> ra >> rb >> da >> db >> dist));
    CHECK(ra < rb);
    ++plines;
  }
  CHECK(plines == expected);
}

TEST_CASE("separator subcommand prints the documented report") {
  TempDir tmp;
  REQUIRE(invoke({"generate", "--kind", "path", "--n", "16", "-o",
                  tmp.path("p.txt")})
              .code == cli::kOk);
  auto r = invoke({"separator", tmp.path("p.txt"), "--c", "2"});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out.find("C:") != std::string::npos);
  CHECK(r.out.find("flow ") != std::string::npos);
  CHECK(r.out.find("beta_achieved ") != std::string::npos);
}

TEST_CASE("malformed graph files exit 2 with a line diagnostic") {
  TempDir tmp;
  write_file(tmp.path("bad.txt"), "d 2 n 2 m 1\nv 0 0 0\nv 1 oops 0\ne 0 1\n");
  auto r = invoke({"build-edo", tmp.path("bad.txt"), "--c", "2", "-o",
                   tmp.path("x.edo")});
  CHECK(r.code == cli::kInputError);
  CHECK(r.err.find("line 3") != std::string::npos);
}

TEST_CASE("disconnected inputs are rejected with a component listing") {
  TempDir tmp;
  write_file(tmp.path("dis.txt"),
             "d 2 n 4 m 2\nv 0 0 0\nv 1 1 0\nv 2 9 9\nv 3 10 9\ne 0 1\ne 2 3\n");
  auto r = invoke({"build-edo", tmp.path("dis.txt"), "--c", "2", "-o",
                   tmp.path("x.edo")});
  CHECK(r.code == cli::kInputError);
  CHECK(r.err.find("disconnected") != std::string::npos);
  CHECK(r.err.find("2 components") != std::string::npos);
}

TEST_CASE("corrupt or missing oracle files exit 2") {
  TempDir tmp;
  write_file(tmp.path("junk.edo"), "not json");
  CHECK(invoke({"query-edo", tmp.path("junk.edo"), "0", "1"}).code ==
        cli::kInputError);
  CHECK(invoke({"query-edo", tmp.path("absent.edo"), "0", "1"}).code ==
        cli::kInputError);
  write_file(tmp.path("wrong.edo"), "{\"format\":\"ado-v1\"}");
  CHECK(invoke({"query-edo", tmp.path("wrong.edo"), "0", "1"}).code ==
        cli::kInputError);
}

TEST_CASE("selftest passes clean and flags injected corruptions") {
  auto clean = invoke({"selftest", "--max-n", "40"});
  CHECK(clean.code == cli::kOk);
  CHECK(clean.out.find("all checks passed") != std::string::npos);
  for (const char* kind :
       {"wspd-drop-pair", "dub-deflate", "separator-ab-edge"}) {
    auto r = invoke({"selftest", "--inject", kind});
    CHECK(r.code == cli::kVerificationFailure);
    CHECK(r.out.find("[FAIL]") != std::string::npos);
  }
  CHECK(invoke({"selftest", "--inject", "bogus"}).code == cli::kInputError);
}

TEST_CASE("bench emits the CSV schema") {
  auto r = invoke({"bench", "--ns", "16,32", "--structure", "edo"});
  REQUIRE(r.code == cli::kOk);
  std::istringstream is(r.out);
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "n,c,sigma_or_eps,build_ms,size,query_ns");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 2);
}

TEST_CASE("unknown flags exit 2, help exits 0") {
  CHECK(invoke({"frobnicate"}).code == cli::kInputError);
  CHECK(invoke({"--help"}).code == cli::kOk);
}
