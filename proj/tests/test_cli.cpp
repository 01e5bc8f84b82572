#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <vector>

// End-to-end tests for the command-line binary: exit codes, human output,
// and the JSON result documents.

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

// Runs the built binary with `args`, merging stderr into the captured text.
RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(CAUSAL_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int status = pclose(pipe);
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.output = out;
  return r;
}

std::string models_path(const std::string& name) {
  return (fs::path(CAUSAL_MODELS_DIR) / name).string();
}

const fs::path& tmp_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "causal_cli_tests";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_tmp(const std::string& name, const std::string& text) {
  fs::path p = tmp_dir() / name;
  std::ofstream f(p, std::ios::binary);
  REQUIRE(f.good());
  f << text;
  f.close();
  return p.string();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

std::vector<std::string> keys_in_order(const Json& obj) {
  std::vector<std::string> keys;
  for (const auto& item : obj.items()) keys.push_back(item.key());
  return keys;
}

}  // namespace

TEST_CASE("validate reports clean and broken models") {
  RunResult ok = run_cli("validate " + models_path("rock_naive.scm"));
  CHECK(ok.exit_code == 0);
  CHECK(ok.output == "valid\n");

  RunResult dot = run_cli("validate --dot " + models_path("rock_naive.scm"));
  CHECK(dot.exit_code == 0);
  CHECK(contains(dot.output, "valid\n"));
  CHECK(contains(dot.output, "digraph rock_naive {"));
  CHECK(contains(dot.output, "  ST -> BS;"));
  CHECK(contains(dot.output, "  UST -> ST;"));

  std::string cyclic = write_tmp("cyclic.scm",
                                 "model cyclic;\n"
                                 "\n"
                                 "exogenous U : {0, 1};\n"
                                 "\n"
                                 "endogenous A : {0, 1} = B;\n"
                                 "endogenous B : {0, 1} = A;\n"
                                 "\n"
                                 "context base {\n"
                                 "  U = 0;\n"
                                 "}\n");
  RunResult bad = run_cli("validate " + cyclic);
  CHECK(bad.exit_code == 3);
  CHECK(lines_of(bad.output).at(0) == "invalid");
  CHECK(contains(bad.output, "cycle"));

  std::string junk = write_tmp("junk.scm", "model ;;;\n");
  RunResult parse = run_cli("validate " + junk);
  CHECK(parse.exit_code == 2);
  CHECK(contains(parse.output, "parse error:"));

  // In-file reference problems are file errors, not binding errors.
  std::string ref = write_tmp("ref_error.scm",
                              "model ref_error;\n"
                              "\n"
                              "exogenous U : {0, 1};\n"
                              "\n"
                              "endogenous A : {0, 1} = U;\n"
                              "\n"
                              "context base {\n"
                              "  U = 7;\n"
                              "}\n");
  RunResult range = run_cli("validate " + ref);
  CHECK(range.exit_code == 2);
  CHECK(contains(range.output, "parse error:"));

  RunResult missing = run_cli("validate " + (tmp_dir() / "nope.scm").string());
  CHECK(missing.exit_code == 2);
  CHECK(contains(missing.output, "parse error:"));
}

TEST_CASE("eval answers causal formulas") {
  std::string model = models_path("rock_naive.scm");
  RunResult t = run_cli("eval " + model + " --context both_throw --formula '[ST<-0,BT<-0](BS=0)'");
  CHECK(t.exit_code == 0);
  CHECK(t.output == "true\n");

  RunResult f = run_cli("eval " + model + " --context both_throw --formula '[ST<-0](BS=0)'");
  CHECK(f.exit_code == 0);
  CHECK(f.output == "false\n");

  RunResult ctx = run_cli("eval " + model + " --context nope --formula 'BS=1'");
  CHECK(ctx.exit_code == 4);
  CHECK(contains(ctx.output, "binding error:"));
  CHECK(contains(ctx.output, "nope"));

  RunResult var = run_cli("eval " + model + " --context both_throw --formula '[QQ<-0](BS=0)'");
  CHECK(var.exit_code == 4);
  CHECK(contains(var.output, "binding error:"));

  RunResult syntax = run_cli("eval " + model + " --context both_throw --formula 'BS=='");
  CHECK(syntax.exit_code == 2);
  CHECK(contains(syntax.output, "parse error:"));
}

TEST_CASE("cause prints witnesses") {
  RunResult suzy = run_cli("cause " + models_path("rock_better.scm") +
                           " --context both_throw --event ST=1 --phi BS=1");
  CHECK(suzy.exit_code == 0);
  std::vector<std::string> lines = lines_of(suzy.output);
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "true");
  CHECK(lines[1] == "witness:");
  CHECK(lines[2] == "  x_prime: ST <- 0");
  CHECK(lines[3] == "  changed: (none)");
  CHECK(lines[4] == "  frozen: BT <- 1, BH <- 0");
  CHECK(lines[5] == "  k: 0");

  RunResult billy = run_cli("cause " + models_path("rock_better.scm") +
                            " --context both_throw --event BT=1 --phi BS=1");
  CHECK(billy.exit_code == 0);
  CHECK(billy.output == "false\n");

  RunResult capped = run_cli("cause " + models_path("voting11.scm") +
                             " --context eleven_zero --event X1=1 --phi O=1 --max-changes 3");
  CHECK(capped.exit_code == 5);
  CHECK(capped.output == "inconclusive\n");

  RunResult unknown = run_cli("cause " + models_path("rock_naive.scm") +
                              " --context both_throw --event QQ=1 --phi BS=1");
  CHECK(unknown.exit_code == 4);
  CHECK(contains(unknown.output, "binding error:"));
}

TEST_CASE("responsibility prints exact fractions") {
  RunResult half = run_cli("responsibility " + models_path("rock_naive.scm") +
                           " --context both_throw --event ST=1 --phi BS=1");
  CHECK(half.exit_code == 0);
  std::vector<std::string> lines = lines_of(half.output);
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "1/2");
  CHECK(lines[1] == "witness:");
  CHECK(lines[2] == "  x_prime: ST <- 0");
  CHECK(lines[3] == "  changed: BT <- 0");
  CHECK(lines[4] == "  frozen: (none)");
  CHECK(lines[5] == "  k: 1");

  RunResult sixth = run_cli("responsibility " + models_path("voting11.scm") +
                            " --context eleven_zero --event X1=1 --phi O=1");
  CHECK(sixth.exit_code == 0);
  CHECK(lines_of(sixth.output).at(0) == "1/6");
  CHECK(contains(sixth.output, "  k: 5"));

  // The forbid block in the file only applies under --allow.
  RunResult wide = run_cli("responsibility " + models_path("rock_better.scm") +
                           " --context both_throw --event ST=1 --phi BS=1");
  CHECK(wide.exit_code == 0);
  CHECK(lines_of(wide.output).at(0) == "1");

  RunResult narrowed = run_cli("responsibility " + models_path("rock_better.scm") +
                               " --context both_throw --event ST=1 --phi BS=1 --allow");
  CHECK(narrowed.exit_code == 0);
  std::vector<std::string> nlines = lines_of(narrowed.output);
  CHECK(nlines.at(0) == "1/2");
  CHECK(nlines.at(3) == "  changed: BT <- 0");

  RunResult zero = run_cli("responsibility " + models_path("rock_better.scm") +
                           " --context both_throw --event BT=1 --phi BS=1");
  CHECK(zero.exit_code == 0);
  CHECK(zero.output == "0\n");

  RunResult capped = run_cli("responsibility " + models_path("rock_naive.scm") +
                             " --context both_throw --event ST=1 --phi BS=1 --max-changes 0");
  CHECK(capped.exit_code == 5);
  CHECK(capped.output == "inconclusive\n");
}

TEST_CASE("responsibility weights flag gates the weights block") {
  std::string weighted = write_tmp("weighted_rock.scm",
                                   "model weighted_rock;\n"
                                   "\n"
                                   "exogenous UST : {0, 1};\n"
                                   "exogenous UBT : {0, 1};\n"
                                   "\n"
                                   "endogenous ST : {0, 1} = UST;\n"
                                   "endogenous BT : {0, 1} = UBT;\n"
                                   "endogenous BS : {0, 1} = ST || BT;\n"
                                   "\n"
                                   "context both_throw {\n"
                                   "  UST = 1;\n"
                                   "  UBT = 1;\n"
                                   "}\n"
                                   "\n"
                                   "weights {\n"
                                   "  BT = 3;\n"
                                   "}\n");
  RunResult plain = run_cli("responsibility " + weighted +
                            " --context both_throw --event ST=1 --phi BS=1");
  CHECK(plain.exit_code == 0);
  CHECK(lines_of(plain.output).at(0) == "1/2");

  RunResult shaped = run_cli("responsibility " + weighted +
                             " --context both_throw --event ST=1 --phi BS=1 --weights");
  CHECK(shaped.exit_code == 0);
  CHECK(lines_of(shaped.output).at(0) == "1/4");
}

TEST_CASE("blame aggregates situations") {
  RunResult suzy = run_cli("blame " + models_path("suzy_blame.scn"));
  CHECK(suzy.exit_code == 0);
  std::vector<std::string> lines = lines_of(suzy.output);
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "5/8");
  CHECK(lines[1] == "situations:");
  CHECK(lines[2] == "  already_shattered: 0");
  CHECK(lines[3] == "  extra_hard: 1/2");
  CHECK(lines[4] == "  billy_throws: 1");
  CHECK(lines[5] == "  billy_wont: 1");

  RunResult allowed = run_cli("blame " + models_path("suzy_blame.scn") + " --allow");
  CHECK(allowed.exit_code == 0);
  std::vector<std::string> alines = lines_of(allowed.output);
  CHECK(alines.at(0) == "1/2");
  CHECK(alines.at(4) == "  billy_throws: 1/2");

  RunResult squad = run_cli("blame " + models_path("firing_squad.scn"));
  CHECK(squad.exit_code == 0);
  std::vector<std::string> slines = lines_of(squad.output);
  CHECK(slines.at(0) == "1/10");
  CHECK(slines.at(2) == "  live1: 1");
  CHECK(slines.at(3) == "  live2: 0");

  // Worker count must not change a byte of output.
  RunResult threaded = run_cli("blame " + models_path("suzy_blame.scn") + " --threads 4");
  CHECK(threaded.exit_code == 0);
  CHECK(threaded.output == suzy.output);

  RunResult capped = run_cli("blame " + models_path("suzy_blame.scn") + " --max-changes 0");
  CHECK(capped.exit_code == 5);
  CHECK(capped.output == "inconclusive\n");

  std::string bad = write_tmp("bad.scn",
                              "scenario bad;\n"
                              "action ST <- 1;\n"
                              "phi BS=1;\n"
                              "\n"
                              "situation {\n"
                              "  model \"does_not_exist.scm\";\n"
                              "  context both_throw;\n"
                              "  prob 1;\n"
                              "}\n");
  RunResult broken = run_cli("blame " + bad);
  CHECK(broken.exit_code == 2);
  CHECK(contains(broken.output, "parse error:"));
}

TEST_CASE("json results are schema shaped and deterministic") {
  std::string cmd = "--json responsibility " + models_path("rock_naive.scm") +
                    " --context both_throw --event ST=1 --phi BS=1";
  RunResult first = run_cli(cmd);
  RunResult second = run_cli(cmd);
  CHECK(first.exit_code == 0);
  CHECK(second.exit_code == 0);

  Json doc = Json::parse(first.output);
  CHECK(keys_in_order(doc) ==
        std::vector<std::string>{"command", "query", "kind", "value", "witness", "diagnostics",
                                 "timing_ms"});
  CHECK(doc["command"] == "responsibility");
  CHECK(doc["kind"] == "rational");
  CHECK(doc["value"]["num"] == "1");
  CHECK(doc["value"]["den"] == "2");
  CHECK(doc["query"]["context"] == "both_throw");
  CHECK(doc["query"]["event"] == "ST=1");
  CHECK(doc["query"]["allow"] == false);
  CHECK(doc["witness"]["x_prime"] == 0);
  CHECK(doc["witness"]["changed"][0]["var"] == "BT");
  CHECK(doc["witness"]["changed"][0]["value"] == 0);
  CHECK(doc["witness"]["frozen"].is_array());
  CHECK(doc["witness"]["frozen"].empty());
  CHECK(doc["witness"]["k"] == 1);
  CHECK(doc["diagnostics"].is_array());
  CHECK(doc["diagnostics"].empty());
  CHECK(doc["timing_ms"].is_number());

  // Every field the published schema requires is present, and nothing else.
  std::ifstream schema_file(fs::path(CAUSAL_SCHEMA_DIR) / "result.schema.json");
  REQUIRE(schema_file.good());
  Json schema = Json::parse(schema_file);
  for (const auto& required : schema["required"]) CHECK(doc.contains(required.get<std::string>()));
  for (const auto& item : doc.items()) CHECK(schema["properties"].contains(item.key()));

  // timing_ms is the only permitted difference between identical runs.
  Json redo = Json::parse(second.output);
  doc.erase("timing_ms");
  redo.erase("timing_ms");
  CHECK(doc.dump() == redo.dump());

  Json blame = Json::parse(
      run_cli("--json blame " + models_path("suzy_blame.scn")).output);
  CHECK(keys_in_order(blame) ==
        std::vector<std::string>{"command", "query", "kind", "value", "witness", "detail",
                                 "diagnostics", "timing_ms"});
  CHECK(blame["value"]["num"] == "5");
  CHECK(blame["value"]["den"] == "8");
  CHECK(blame["witness"].is_null());
  REQUIRE(blame["detail"]["per_situation"].size() == 4);
  CHECK(blame["detail"]["per_situation"][0]["situation"] == "already_shattered");
  CHECK(blame["detail"]["per_situation"][0]["responsibility"]["num"] == "0");
  CHECK(blame["detail"]["per_situation"][2]["situation"] == "billy_throws");
  CHECK(blame["detail"]["per_situation"][2]["responsibility"]["num"] == "1");

  std::string cyclic = (tmp_dir() / "cyclic.scm").string();
  RunResult invalid = run_cli("--json validate " + cyclic);
  CHECK(invalid.exit_code == 3);
  Json vdoc = Json::parse(invalid.output);
  CHECK(vdoc["kind"] == "boolean");
  CHECK(vdoc["value"] == false);
  CHECK(!vdoc["diagnostics"].empty());

  RunResult capped = run_cli("--json cause " + models_path("voting11.scm") +
                             " --context eleven_zero --event X1=1 --phi O=1 --max-changes 3");
  CHECK(capped.exit_code == 5);
  Json cdoc = Json::parse(capped.output);
  CHECK(cdoc["value"] == false);
  CHECK(cdoc["witness"].is_null());
  CHECK(cdoc["query"]["max_changes"] == 3);
  REQUIRE(cdoc["diagnostics"].size() == 1);
  CHECK(cdoc["diagnostics"][0]["code"] == "inconclusive");

  RunResult eval = run_cli("--json eval " + models_path("rock_naive.scm") +
                           " --context both_throw --formula '[ST<-0,BT<-0](BS=0)'");
  Json edoc = Json::parse(eval.output);
  CHECK(edoc["kind"] == "boolean");
  CHECK(edoc["value"] == true);
  CHECK(edoc["query"]["formula"] == "[ST <- 0, BT <- 0](BS=0)");
}

TEST_CASE("qbf subcommands cover the bridge") {
  std::string sample = write_tmp("sample.qbf",
                                 "exists a b;\n"
                                 "forall y;\n"
                                 "matrix (a | y) & (b | !y);\n");
  std::string falsum = write_tmp("false.qbf",
                                 "exists a;\n"
                                 "forall y;\n"
                                 "matrix y & a;\n");

  CHECK(run_cli("qbf solve " + sample).output == "true\n");
  CHECK(run_cli("qbf solve " + falsum).output == "false\n");
  CHECK(run_cli("qbf maxqsat2 " + sample).output == "2\n");
  CHECK(run_cli("qbf maxqsat2 " + falsum).output == "-1\n");
  CHECK(run_cli("qbf minqsat2 " + sample).output == "2\n");
  CHECK(run_cli("qbf minqsat2 " + falsum).output == "2\n");

  Json count = Json::parse(run_cli("--json qbf maxqsat2 " + sample).output);
  CHECK(count["command"] == "qbf-maxqsat2");
  CHECK(count["kind"] == "integer");
  CHECK(count["value"] == 2);

  RunResult text = run_cli("qbf to-model " + sample);
  CHECK(text.exit_code == 0);
  CHECK(contains(text.output, "model qbf_model;"));
  CHECK(contains(text.output, "# event: X=0"));
  CHECK(contains(text.output, "# phi: "));

  std::string out_path = (tmp_dir() / "bridge.scm").string();
  RunResult wrote = run_cli("qbf to-model " + sample + " -o " + out_path);
  CHECK(wrote.exit_code == 0);
  CHECK(wrote.output == "wrote " + out_path + "\n");
  RunResult loaded = run_cli("validate " + out_path);
  CHECK(loaded.exit_code == 0);
  CHECK(loaded.output == "valid\n");

  RunResult holds = run_cli("qbf check-theorem " + sample);
  CHECK(holds.exit_code == 0);
  std::vector<std::string> hlines = lines_of(holds.output);
  REQUIRE(hlines.size() == 5);
  CHECK(hlines[0] == "qbf: true");
  CHECK(hlines[1] == "minqsat2: 2");
  CHECK(hlines[2] == "expected: 1/4");
  CHECK(hlines[3] == "computed: 1/4");
  CHECK(hlines[4] == "holds");

  RunResult vacuous = run_cli("qbf check-theorem " + falsum);
  CHECK(vacuous.exit_code == 0);
  std::vector<std::string> vlines = lines_of(vacuous.output);
  CHECK(vlines.at(0) == "qbf: false");
  CHECK(vlines.at(1) == "minqsat2: 2");
  CHECK(vlines.at(2) == "expected: 0");
  CHECK(vlines.at(3) == "computed: 0");
  CHECK(vlines.at(4) == "holds");

  std::string wide = write_tmp("wide.qbf",
                               "exists a b c d e;\n"
                               "forall y;\n"
                               "matrix a & b & c & d & e & (y | !y);\n");
  CHECK(run_cli("qbf maxqsat2 " + wide).output == "5\n");
  RunResult capped = run_cli("qbf check-theorem " + wide);
  CHECK(capped.exit_code == 1);
  CHECK(contains(capped.output, "error:"));

  std::string open = write_tmp("open.qbf",
                               "exists a;\n"
                               "forall;\n"
                               "matrix a;\n");
  CHECK(run_cli("qbf solve " + open).output == "true\n");
  RunResult needs = run_cli("qbf check-theorem " + open);
  CHECK(needs.exit_code == 1);
  CHECK(contains(needs.output, "error:"));
  CHECK(contains(needs.output, "universal"));

  std::string unquantified = write_tmp("bad.qbf",
                                       "exists a;\n"
                                       "forall y;\n"
                                       "matrix z;\n");
  RunResult parse = run_cli("qbf solve " + unquantified);
  CHECK(parse.exit_code == 2);
  CHECK(contains(parse.output, "parse error:"));
  CHECK(contains(parse.output, "not quantified"));
}

TEST_CASE("usage errors exit one") {
  CHECK(run_cli("").exit_code == 1);
  CHECK(run_cli("frobnicate").exit_code == 1);
  CHECK(run_cli("cause " + models_path("rock_naive.scm") +
                " --context both_throw --event ST=1")
            .exit_code == 1);
  CHECK(run_cli("blame " + models_path("suzy_blame.scn") + " --threads 0").exit_code == 1);
  CHECK(run_cli("qbf").exit_code == 1);

  RunResult help = run_cli("--help");
  CHECK(help.exit_code == 0);
  CHECK(contains(help.output, "validate"));
  CHECK(contains(help.output, "blame"));
}
