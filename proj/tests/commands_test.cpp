#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "fusec/commands.hpp"
#include "support.hpp"

using namespace fusec;
using namespace fusec::testing;

namespace {

std::string temp_file(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("fusec_test_" + name)).string();
}

void check_envelope(const CommandResult& r, const std::string& command) {
  CHECK(r.report["schema_version"] == kSchemaVersion);
  CHECK(r.report["command"] == command);
  CHECK(r.report.contains("ok"));
  CHECK(r.report.contains("timings_ms"));
}

}  // namespace

TEST_CASE("digests are stable") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("check") {
  auto ok = cmd_check(corpus_path("sumzip.fuse"));
  check_envelope(ok, "check");
  CHECK(ok.exit_code == kExitOk);
  CHECK(ok.report["ok"] == true);
  CHECK(ok.report["input"]["digest"].get<std::string>().rfind("fnv1a64:", 0) == 0);
  CHECK(ok.report["declarations"].size() > 5);

  auto bad = cmd_check(data_path("bad_build_body.fuse"));
  check_envelope(bad, "check");
  CHECK(bad.exit_code == kExitInputError);
  CHECK(bad.report["error"]["kind"] == "TypeMismatch");
  CHECK(bad.report["error"]["declaration"] == "bad");
  CHECK(bad.report["error"]["line"] == 6);

  auto parse = cmd_check(data_path("parse_error.fuse"));
  CHECK(parse.exit_code == kExitInputError);
  CHECK(parse.report["error"]["kind"] == "ParseError");
  CHECK(parse.report["error"]["line"] == 5);

  CHECK(cmd_check(data_path("escape.fuse")).report["error"]["kind"] == "EscapedTypeVariable");
  CHECK(cmd_check(temp_file("missing.fuse")).exit_code == kExitInputError);
}

TEST_CASE("run") {
  auto r = cmd_run(corpus_path("sumzip.fuse"), "sumzip", std::string("([1, 2, 3], [4, 5])"), std::nullopt);
  check_envelope(r, "run");
  REQUIRE(r.exit_code == kExitOk);
  CHECK(r.report["value"] == "12");
  CHECK(r.output == "12\n");

  auto starved = cmd_run(corpus_path("sumzip.fuse"), "sumzip", std::string("([1, 2, 3], [4, 5])"), 2);
  CHECK(starved.exit_code == kExitRuntime);
  CHECK(starved.report["error"]["kind"] == "FuelExhausted");

  CHECK(cmd_run(corpus_path("sumzip.fuse"), "nope", std::nullopt, std::nullopt).exit_code == kExitInputError);
  CHECK(cmd_run(corpus_path("sumzip.fuse"), "sumzip", std::string("[1"), std::nullopt).exit_code ==
        kExitInputError);
}

TEST_CASE("fuse writes a program that fuses to itself") {
  FuseCommand args;
  args.path = corpus_path("sumzip.fuse");
  args.out = temp_file("sumzip_fused.fuse");
  args.report = temp_file("sumzip_report.json");
  auto r = cmd_fuse(args);
  check_envelope(r, "fuse");
  REQUIRE(r.exit_code == kExitOk);
  CHECK(r.report["rewrite_counts"]["R1"] == 1);
  CHECK(r.report["rechecked"] == true);
  CHECK(std::filesystem::exists(*args.report));
  auto saved = nlohmann::json::parse(slurp(*args.report));
  CHECK(saved["command"] == "fuse");

  FuseCommand again;
  again.path = *args.out;
  auto r2 = cmd_fuse(again);
  REQUIRE(r2.exit_code == kExitOk);
  CHECK(r2.report["rewrite_counts"]["R1"] == 0);
  CHECK(r2.report["rewrite_counts"]["R2"] == 0);
  CHECK(r2.report["rewrite_counts"]["R3"] == 0);
  CHECK(r2.output == slurp(*args.out));

  FuseCommand ab;
  ab.path = corpus_path("sumzip.fuse");
  ab.abstract = true;
  auto r3 = cmd_fuse(ab);
  REQUIRE(r3.exit_code == kExitOk);
  CHECK(r3.report["rewrite_counts"]["R1"] == 2);
}

TEST_CASE("bench") {
  auto r = cmd_bench(corpus_path("sumzip.fuse"), "composite", "sumzip", {0, 10, 100}, std::nullopt);
  check_envelope(r, "bench");
  REQUIRE(r.exit_code == kExitOk);
  CHECK(r.report["all_equal"] == true);
  const auto& rows = r.report["sizes"];
  REQUIRE(rows.size() == 3);
  CHECK(rows[1]["orig_intermediate_cells"] == 11);
  CHECK(rows[1]["fused_intermediate_cells"] == 0);

  auto diff = cmd_bench(data_path("not_equivalent.fuse"), "sum", "len", {0, 1, 2}, std::nullopt);
  CHECK(diff.exit_code == kExitVerify);
  CHECK(diff.report["first_difference_at_size"] == 2);
}

TEST_CASE("paracheck") {
  auto bad = cmd_paracheck(std::nullopt, "bad_const", 3);
  check_envelope(bad, "paracheck");
  CHECK(bad.exit_code == kExitVerify);
  CHECK(bad.report["verdict"] == "Counterexample");
  CHECK(bad.report["counterexample"]["witness_verified"] == true);
  CHECK(bad.report["family"] == "hand-given");

  auto ok = cmd_paracheck(corpus_path("poly.fuse"), "twice", 3);
  CHECK(ok.exit_code == kExitOk);
  CHECK(ok.report["verdict"] == "Ok");
  CHECK(ok.report["family"] == "from-term");

  auto lists = cmd_paracheck(corpus_path("sumzip.fuse"), "zipW'", 2);
  CHECK(lists.exit_code == kExitInputError);
  CHECK(lists.report["error"]["kind"] == "Unsupported");
}

TEST_CASE("nest") {
  auto r = cmd_nest("{1; (2, 3)}", "{4; (5, 6)}");
  check_envelope(r, "nest");
  REQUIRE(r.exit_code == kExitOk);
  CHECK(r.report["zipped"] == "{(1, 4); ((2, 5), (3, 6))}");
  CHECK(r.report["ssumN_zipWN"] == 21);
  CHECK(r.report["sumzipN"] == 21);

  auto bad = cmd_nest("{1; 2}", "{}");
  CHECK(bad.exit_code == kExitInputError);
  CHECK(bad.report["error"]["kind"] == "NestShape");
}

TEST_CASE("small command cases") {
  std::string empty = temp_file("empty.fuse");
  { std::ofstream(empty) << ""; }
  auto e = cmd_check(empty);
  CHECK(e.exit_code == kExitOk);
  CHECK(e.report["declarations"].empty());

  auto r = cmd_run(corpus_path("sumzip.fuse"), "sumzip", std::string("([1, 2], [3, 4])"), std::nullopt);
  CHECK(r.report["value"] == "10");
  auto s = cmd_run(corpus_path("sumzip.fuse"), "ssum", std::string("[]"), std::nullopt);
  CHECK(s.report["value"] == "0");
  CHECK(cmd_run(corpus_path("sumzip.fuse"), "sumzip", std::string("([1, 2], [3, 4])"), 1).exit_code ==
        kExitRuntime);

  FuseCommand args;
  args.path = corpus_path("sumzip.fuse");
  auto f = cmd_fuse(args);
  auto at = f.output.find("def composite :");
  REQUIRE(at != std::string::npos);
  std::string decl = f.output.substr(at, f.output.find("\ndef", at + 1) - at);
  CHECK(decl.find("build") == std::string::npos);
  CHECK(decl.find("fold") == std::string::npos);

  FuseCommand co;
  co.path = corpus_path("sumzip_co.fuse");
  auto fc = cmd_fuse(co);
  CHECK(fc.report["rewrite_counts"]["R2"] == 1);

  auto b = cmd_bench(corpus_path("sumzip.fuse"), "composite_direct", "sumzip", {0, 10, 100, 1000}, std::nullopt);
  const auto& rows = b.report["sizes"];
  REQUIRE(rows.size() == 4);
  std::uint64_t expect[] = {1, 11, 101, 1001};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(rows[i]["orig_intermediate_cells"] == expect[i]);
    CHECK(rows[i]["fused_intermediate_cells"] == 0);
  }

  auto one = cmd_paracheck(std::nullopt, "bad_const", 1);
  CHECK(one.exit_code == kExitOk);
}
