#include <iostream>
#include <fstream>

#include "CLI11.hpp"
#include "fusec/commands.hpp"

namespace {

int emit(const fusec::CommandResult& r, bool json_out) {
  if (json_out) {
    std::cout << r.report.dump(2) << "\n";
  } else {
    (r.exit_code == fusec::kExitOk ? std::cout : std::cerr) << r.output;
  }
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fusec: build/cobuild fusion for a small typed functional language"};
  app.require_subcommand(1);
  bool json_out = false;
  app.add_flag("--json", json_out, "Print the JSON report instead of text");

  std::string file;
  std::string main_name;
  std::optional<std::string> input;
  std::optional<std::uint64_t> fuel;

  auto* check = app.add_subcommand("check", "Parse and typecheck a source file");
  check->add_option("file", file, "Source file")->required();

  auto* run = app.add_subcommand("run", "Evaluate a declaration on an input literal");
  run->add_option("file", file, "Source file")->required();
  run->add_option("--main", main_name, "Declaration to run")->required();
  run->add_option("--input", input, "Input literal");
  run->add_option("--fuel", fuel, "Evaluation step budget");

  fusec::FuseCommand fuse_args;
  std::optional<std::string> out, report;
  auto* fuse = app.add_subcommand("fuse", "Fuse every declaration to a fixpoint");
  fuse->add_option("file", file, "Source file")->required();
  fuse->add_option("--out", out, "Write the fused source here");
  fuse->add_option("--report", report, "Write the JSON report here");
  fuse->add_flag("--abstract", fuse_args.abstract, "Abstract producers and consumers first");

  std::vector<std::string> pair;
  std::vector<std::size_t> sizes{0, 10, 100, 1000};
  auto* bench = app.add_subcommand("bench", "Compare two declarations on inputs of growing size");
  bench->add_option("file", file, "Source file")->required();
  bench->add_option("--main-pair", pair, "Original and fused declaration")->required()->expected(2);
  bench->add_option("--sizes", sizes, "Input sizes")->delimiter(',');
  bench->add_option("--fuel", fuel, "Evaluation step budget");

  std::optional<std::string> para_file;
  std::string term;
  std::size_t max_carrier = 3;
  auto* para = app.add_subcommand("paracheck", "Exhaustive paranaturality check on finite carriers");
  para->add_option("file", para_file, "Source file");
  para->add_option("--term", term, "Polymorphic declaration, or bad_const")->required();
  para->add_option("--max-carrier", max_carrier, "Largest carrier size")->check(CLI::Range(1, 6));

  std::string nest_a, nest_b;
  auto* nest = app.add_subcommand("nest", "Zip and sum two nests, fused and unfused");
  nest->add_option("a", nest_a, "Nest literal {e0; e1; ...}")->required();
  nest->add_option("b", nest_b, "Nest literal")->required();

  CLI11_PARSE(app, argc, argv);

  if (*check) return emit(fusec::cmd_check(file), json_out);
  if (*run) return emit(fusec::cmd_run(file, main_name, input, fuel), json_out);
  if (*fuse) {
    fuse_args.path = file;
    fuse_args.out = out;
    fuse_args.report = report;
    return emit(fusec::cmd_fuse(fuse_args), json_out);
  }
  if (*bench) return emit(fusec::cmd_bench(file, pair[0], pair[1], sizes, fuel), json_out);
  if (*para) return emit(fusec::cmd_paracheck(para_file, term, max_carrier), json_out);
  if (*nest) return emit(fusec::cmd_nest(nest_a, nest_b), json_out);
  return fusec::kExitInputError;
}
